//! Deterministic lattice-sum machinery: compensated accumulation, the
//! shell-by-shell summation engines, Richardson extrapolation for the
//! power-law sums, and closed-form tail bounds.
//!
//! Every sum in the crate walks sup-norm shells from the outermost used
//! shell inward (small terms first) and combines {γ, -γ} pairs exactly
//! where the summand allows it, so results are bit-reproducible.

use alloc::vec::Vec;
#[allow(unused_imports)] // f64 math lives in num_traits::Float under no_std
use num_traits::Float;

use crate::lattice::{Lattice, LatticePoint, TruncationPolicy};
use crate::Complex64;

/// Value of a truncated Γ-sum together with its truncation metadata.
///
/// `value` is the best estimate (Richardson-extrapolated for the power-law
/// sums, plain truncated sum otherwise); `raw_value` is the unextrapolated
/// truncated sum over `shells_used` shells; `tail_estimate` bounds the
/// modulus of the tail omitted from `raw_value` under the module's
/// comparison bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSumResult {
    pub value: Complex64,
    pub raw_value: Complex64,
    pub tail_estimate: f64,
    pub shells_used: u32,
}

/// Neumaier-compensated scalar accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated complex accumulator (independent real and imaginary parts).
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanComplex {
    re: Kahan,
    im: Kahan,
}

impl KahanComplex {
    #[inline]
    pub fn add(&mut self, v: Complex64) {
        self.re.add(v.re);
        self.im.add(v.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Outcome of a shell-summed Gaussian-weighted sum.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ShellSum {
    pub value: Complex64,
    /// Sum of term moduli; the scale against which cancellation noise is
    /// judged.
    pub gross: f64,
    pub shells_used: u32,
}

/// Sums `center + Σ_k Σ_{pairs on shell k} pair_term(γ)` where `pair_term`
/// returns the combined contribution of {γ, -γ}.
///
/// Shells grow until `policy.max_shell()` or until a whole shell stays
/// below target_tol/10 (from shell 2 on); stored shell sums are then
/// reduced outermost-in with compensated addition, the center term last.
pub(crate) fn sum_pairs(
    lat: &Lattice,
    policy: &TruncationPolicy,
    center: Complex64,
    mut pair_term: impl FnMut(&LatticePoint) -> Complex64,
) -> ShellSum {
    let quiet = policy.target_tol() / 10.0;
    let mut shells: Vec<Complex64> = Vec::with_capacity(policy.max_shell() as usize);
    let mut gross = center.norm();
    for k in 1..=policy.max_shell() {
        let mut acc = KahanComplex::default();
        let mut peak = 0.0f64;
        lat.half_shell(k, |p| {
            let t = pair_term(&p);
            acc.add(t);
            let m = t.norm();
            gross += m;
            if m > peak {
                peak = m;
            }
        });
        shells.push(acc.value());
        if k >= 2 && peak < quiet {
            break;
        }
    }
    let mut total = KahanComplex::default();
    for s in shells.iter().rev() {
        total.add(*s);
    }
    total.add(center);
    ShellSum {
        value: total.value(),
        gross,
        shells_used: shells.len() as u32,
    }
}

/// Full-shell variant for summands without the {γ, -γ} pairing (Poincaré
/// periodization). Returns `None` if any term is non-finite.
pub(crate) fn sum_full(
    lat: &Lattice,
    policy: &TruncationPolicy,
    center: Complex64,
    mut term: impl FnMut(&LatticePoint) -> Complex64,
) -> Option<ShellSum> {
    let quiet = policy.target_tol() / 10.0;
    let mut shells: Vec<Complex64> = Vec::with_capacity(policy.max_shell() as usize);
    let mut gross = center.norm();
    let mut ok = center.is_finite();
    for k in 1..=policy.max_shell() {
        let mut acc = KahanComplex::default();
        let mut peak = 0.0f64;
        lat.shell(k, |p| {
            let t = term(&p);
            ok &= t.is_finite();
            acc.add(t);
            let m = t.norm();
            gross += m;
            if m > peak {
                peak = m;
            }
        });
        shells.push(acc.value());
        if k >= 2 && peak < quiet {
            break;
        }
    }
    if !ok {
        return None;
    }
    let mut total = KahanComplex::default();
    for s in shells.iter().rev() {
        total.add(*s);
    }
    total.add(center);
    Some(ShellSum {
        value: total.value(),
        gross,
        shells_used: shells.len() as u32,
    })
}

/// Shell-summed power-law sum with a dyadic Richardson ladder.
///
/// Computes per-shell pair sums for k = 1..base, forms the partial sums at
/// base/8, base/4, base/2, base (each reduced outermost-in), and
/// extrapolates away the 1/K², 1/K³, 1/K⁴ components of the truncation
/// error. Returns (extrapolated, raw partial at `base`).
pub(crate) fn cascade_pairs(
    lat: &Lattice,
    base: u32,
    mut pair_term: impl FnMut(&LatticePoint) -> Complex64,
) -> (Complex64, Complex64) {
    debug_assert!(base.is_multiple_of(8) && base >= 8);
    let mut shells: Vec<Complex64> = Vec::with_capacity(base as usize);
    for k in 1..=base {
        let mut acc = KahanComplex::default();
        lat.half_shell(k, |p| acc.add(pair_term(&p)));
        shells.push(acc.value());
    }
    let partial = |upto: u32| -> Complex64 {
        let mut total = KahanComplex::default();
        for s in shells[..upto as usize].iter().rev() {
            total.add(*s);
        }
        total.value()
    };
    let ladder = [
        partial(base / 8),
        partial(base / 4),
        partial(base / 2),
        partial(base),
    ];
    (richardson_cascade(&ladder), ladder[3])
}

/// Eliminates error components c₂/K² + c₃/K³ + c₄/K⁴ from four partial
/// sums taken at K, 2K, 4K, 8K.
pub(crate) fn richardson_cascade(vals: &[Complex64; 4]) -> Complex64 {
    let mut cur: Vec<Complex64> = vals.to_vec();
    let mut p = 2i32;
    while cur.len() > 1 {
        let r = (2.0f64).powi(p);
        cur = (0..cur.len() - 1)
            .map(|i| (cur[i + 1] * r - cur[i]) / (r - 1.0))
            .collect();
        p += 1;
    }
    cur[0]
}

/// Upper bound for Σ_{shell k > K} of 8k·coeff·|γ|^pow·e^{-ν(|γ|-shift)²/2}
/// using |γ| >= k·shell_gap on shell k and |γ| <= k·shell_reach.
pub(crate) fn gaussian_tail(lat: &Lattice, shells_used: u32, coeff: f64, pow: i32, shift: f64) -> f64 {
    let gap = lat.shell_gap();
    let reach = lat.shell_reach();
    let nu = lat.nu();
    let f = |k: f64| -> f64 {
        let d = (k * gap - shift).max(0.0);
        8.0 * k * coeff * (k * reach).powi(pow) * (-nu * d * d / 2.0).exp()
    };
    let mut tail = 0.0;
    let mut k = shells_used as f64 + 1.0;
    let mut prev = f(k);
    for _ in 0..64 {
        tail += prev;
        k += 1.0;
        let next = f(k);
        if next < 1e-300 {
            return tail;
        }
        let q = next / prev;
        if q < 0.5 {
            return tail + next / (1.0 - q);
        }
        prev = next;
    }
    tail + prev * 64.0 // pessimistic close-out for pathological policies
}

/// Upper bound for Σ_{shell k > K} 8k·coeff·|γ|^{-decay}: integral
/// comparison with |γ| >= k·shell_gap, valid for decay > 2.
pub(crate) fn power_tail(lat: &Lattice, shells_used: u32, coeff: f64, decay: i32) -> f64 {
    debug_assert!(decay > 2);
    let gap = lat.shell_gap();
    let k = shells_used as f64;
    8.0 * coeff * gap.powi(-decay) * k.powi(2 - decay) / (decay as f64 - 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use num_complex::Complex;

    #[test]
    fn kahan_recovers_cancelled_digits() {
        let mut k = Kahan::default();
        k.add(1.0);
        for _ in 0..10_000 {
            k.add(1e-17);
        }
        assert!((k.value() - (1.0 + 1e-13)).abs() < 1e-16);
    }

    #[test]
    fn cascade_removes_low_order_error() {
        // v(K) = 1 + 3/K^2 - 5/K^3 + 2/K^4 must extrapolate to 1 exactly.
        let v = |k: f64| 1.0 + 3.0 / (k * k) - 5.0 / k.powi(3) + 2.0 / k.powi(4);
        let vals = [
            Complex::new(v(10.0), 0.0),
            Complex::new(v(20.0), 0.0),
            Complex::new(v(40.0), 0.0),
            Complex::new(v(80.0), 0.0),
        ];
        assert!((richardson_cascade(&vals).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_tail_dominates_true_tail() {
        let lat = Lattice::new(Complex::new(1.0, 0.0), Complex::new(0.0, 1.0)).unwrap();
        // true tail of sum |gamma|^2 e^{-nu |gamma|^2/2} beyond shell 4
        let mut truth = 0.0;
        for k in 5..40u32 {
            lat.half_shell(k, |p| {
                let g2 = p.gamma.norm_sqr();
                truth += 2.0 * g2 * (-lat.nu() * g2 / 2.0).exp();
            });
        }
        let bound = gaussian_tail(&lat, 4, 1.0, 2, 0.0);
        assert!(bound >= truth, "bound {bound} below true tail {truth}");
        assert!(bound < 1.0, "bound uselessly loose: {bound}");
    }

    #[test]
    fn early_stop_respects_policy() {
        let lat = Lattice::new(Complex::new(1.0, 0.0), Complex::new(0.0, 1.0)).unwrap();
        let policy = TruncationPolicy::new(30, 1e-10);
        let s = sum_pairs(&lat, &policy, Complex::new(0.0, 0.0), |p| {
            let g2 = p.gamma.norm_sqr();
            Complex::new(2.0 * g2 * (-lat.nu() * g2 / 2.0).exp(), 0.0)
        });
        // terms at shell 8 are ~e^{-100}; the sum must stop well short of 30
        assert!(s.shells_used < 12, "stopped at {}", s.shells_used);
        assert!(s.gross > 0.0);
    }
}
