//! Hermite-Gauss lattice series: terminating confluent hypergeometric
//! polynomials, the e^{az²+bz} expansion lemma, the Weierstrass theta
//! series θ_W, Poincaré periodization, the Perelomov vanishing sums, and
//! the series-route Taylor coefficients W_r = H_r/H₀.

use alloc::vec::Vec;
#[allow(unused_imports)] // f64 math lives in num_traits::Float under no_std
use num_traits::Float;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::classical::EllipticInvariants;
use crate::lattice::{Lattice, LatticePoint, TruncationPolicy};
use crate::sum::{gaussian_tail, sum_full, sum_pairs, LatticeSumResult};
use crate::taylor::rational_to_f64;
use crate::{Complex64, Error, Result};

/// The terminating series F(-r; c; x) as a degree-r polynomial in x,
/// with exact rational coefficients (-r)_k / ((c)_k k!).
#[derive(Debug, Clone)]
pub struct ConfluentPoly {
    pub r: u32,
    pub coefficients: Vec<BigRational>,
}

impl ConfluentPoly {
    /// Supported parameters: c = 1/2 and c = 3/2 (the two branches of the
    /// expansion lemma).
    pub fn new(r: u32, c_num: i64, c_den: i64) -> Result<Self> {
        if !((c_num, c_den) == (1, 2) || (c_num, c_den) == (3, 2)) {
            return Err(Error::UnsupportedParameter("confluent c must be 1/2 or 3/2"));
        }
        let mut coefficients = Vec::with_capacity(r as usize + 1);
        let mut coeff = BigRational::one();
        coefficients.push(coeff.clone());
        for k in 0..r as i64 {
            // multiply by (-r + k) / ((c + k) (k+1))
            let num = BigInt::from((-(r as i64) + k) * c_den);
            let den = BigInt::from((c_num + c_den * k) * (k + 1));
            coeff *= BigRational::new(num, den);
            coefficients.push(coeff.clone());
        }
        Ok(ConfluentPoly { r, coefficients })
    }

    /// Horner evaluation at a complex argument.
    pub fn eval(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coefficients.iter().rev() {
            acc = acc * x + rational_to_f64(c);
        }
        acc
    }
}

/// F(-r; c; x) for c ∈ {1/2, 3/2}.
pub fn confluent_f(r: u32, c_num: i64, c_den: i64, x: Complex64) -> Result<Complex64> {
    Ok(ConfluentPoly::new(r, c_num, c_den)?.eval(x))
}

/// Odd Hermite polynomial H_{2r+1}(z) = (-1)^r ((2r+1)!/r!) · 2z · F(-r; 3/2; z²).
pub fn hermite_odd(r: u32, z: Complex64) -> Complex64 {
    let sign = if r.is_multiple_of(2) { 1.0 } else { -1.0 };
    let scale = factorial_ratio(2 * r + 1, r); // (2r+1)!/r!
    let f = ConfluentPoly::new(r, 3, 2)
        .expect("3/2 is supported")
        .eval(z * z);
    z * f * (2.0 * sign * scale)
}

/// Taylor coefficients of e^{az² + bz} through z^max_power:
/// even coefficients (a^r/r!)·F(-r; 1/2; -b²/4a), odd coefficients
/// b·(a^r/r!)·F(-r; 3/2; -b²/4a).
///
/// The caller handles a = 0 (plain exponential coefficients b^k/k!).
pub fn expand_exp_quadratic(
    a: Complex64,
    b: Complex64,
    max_power: u32,
) -> Result<Vec<Complex64>> {
    if a == Complex64::new(0.0, 0.0) {
        return Err(Error::UnsupportedParameter(
            "a = 0: use the plain exponential coefficients b^k/k!",
        ));
    }
    let x = -(b * b) / (a * 4.0);
    let mut out = Vec::with_capacity(max_power as usize + 1);
    let mut a_pow_over_fact = Complex64::new(1.0, 0.0); // a^r / r!
    for r in 0..=max_power / 2 {
        if r > 0 {
            a_pow_over_fact = a_pow_over_fact * a / (r as f64);
        }
        if 2 * r <= max_power {
            out.push(a_pow_over_fact * confluent_f(r, 1, 2, x)?);
        }
        if 2 * r < max_power {
            out.push(b * a_pow_over_fact * confluent_f(r, 3, 2, x)?);
        }
    }
    Ok(out)
}

/// The weight e_χ^ν(γ) = |γ|²·χ_W(γ)·e^{-ν|γ|²/2}; even in γ and
/// super-exponentially decaying.
#[derive(Debug, Clone, Copy)]
pub struct WeightMap {
    nu: f64,
}

impl WeightMap {
    pub fn new(lat: &Lattice) -> Self {
        WeightMap { nu: lat.nu() }
    }

    pub fn eval(&self, p: &LatticePoint) -> f64 {
        let g2 = p.gamma.norm_sqr();
        p.chi() as f64 * g2 * (-self.nu * g2 / 2.0).exp()
    }
}

/// Weierstrass theta series θ_W(z) = Σ_γ χ(γ)·γ·e^{-ν|γ|²/2 + νz·conj(γ)},
/// pair-combined as χγe^{-ν|γ|²/2}(e^{νz·conj(γ)} - e^{-νz·conj(γ)}).
pub fn theta_w(lat: &Lattice, z: Complex64, policy: &TruncationPolicy) -> LatticeSumResult {
    let nu = lat.nu();
    let s = sum_pairs(lat, policy, Complex64::new(0.0, 0.0), |p| {
        let e = nu * z * p.gamma.conj();
        let gauss = (-nu * p.gamma.norm_sqr() / 2.0).exp();
        p.gamma * (p.chi() as f64 * gauss) * (e.exp() - (-e).exp())
    });
    LatticeSumResult {
        value: s.value,
        raw_value: s.value,
        tail_estimate: gaussian_tail(lat, s.shells_used, 2.0, 1, z.norm()),
        shells_used: s.shells_used,
    }
}

/// Odd derivatives of θ_W at the origin:
/// θ_W^{(2j+1)}(0) = ν^{2j+1} Σ_γ conj(γ)^{2j} |γ|² χ(γ) e^{-ν|γ|²/2}
/// for j = 0..max_j (the even derivatives vanish identically).
pub fn theta_w_derivatives_at0(
    lat: &Lattice,
    max_j: u32,
    policy: &TruncationPolicy,
) -> Vec<Complex64> {
    let nu = lat.nu();
    chi_weighted_moments(lat, policy, max_j)
        .into_iter()
        .enumerate()
        .map(|(j, (t, _))| t * nu.powi(2 * j as i32 + 1))
        .collect()
}

/// The moment sums t_k = Σ_γ χ(γ)|γ|² conj(γ)^{2k} e^{-ν|γ|²/2} for
/// k = 0..=k_max, each with its gross magnitude Σ|term| (the scale against
/// which a near-zero value counts as a symmetric zero).
pub fn chi_weighted_moments(
    lat: &Lattice,
    policy: &TruncationPolicy,
    k_max: u32,
) -> Vec<(Complex64, f64)> {
    let weight = WeightMap::new(lat);
    (0..=k_max)
        .map(|k| {
            let s = sum_pairs(lat, policy, Complex64::new(0.0, 0.0), |p| {
                Complex64::from(2.0 * weight.eval(p)) * p.gamma.conj().powu(2 * k)
            });
            (s.value, s.gross)
        })
        .collect()
}

/// s_r = Σ_γ χ(γ)|γ|² μ^r F(-r; 3/2; -ν²conj(γ)²/(2μ)) e^{-ν|γ|²/2},
/// evaluated through the homogenized form
///
/// ```text
/// μ^r F(-r; 3/2; -x/μ·…) = Σ_{k=0}^{r} C(r,k)/(3/2)_k · (ν²conj(γ)²/2)^k · μ^{r-k}
/// ```
///
/// which is polynomial in μ, so the μ = 0 lattices (square, hexagonal) are
/// evaluated by the same code path as everyone else: only the k = r term
/// (ν²conj(γ)²/2)^r / (3/2)_r survives, exactly the analytic limit.
pub fn confluent_weighted_sum(
    lat: &Lattice,
    policy: &TruncationPolicy,
    mu: Complex64,
    r: u32,
) -> ShellSumParts {
    let nu = lat.nu();
    let coeffs = homogenized_confluent_row(r);
    let weight = WeightMap::new(lat);
    let half_nu2 = nu * nu / 2.0;
    let s = sum_pairs(lat, policy, Complex64::new(0.0, 0.0), |p| {
        let x = p.gamma.conj() * p.gamma.conj() * half_nu2;
        let mut poly = Complex64::new(0.0, 0.0);
        let mut xk = Complex64::new(1.0, 0.0);
        for (k, c) in coeffs.iter().enumerate() {
            poly += xk * *c * mu.powu(r - k as u32);
            xk *= x;
        }
        Complex64::from(2.0 * weight.eval(p)) * poly
    });
    ShellSumParts {
        value: s.value,
        gross: s.gross,
        shells_used: s.shells_used,
    }
}

/// Value/gross/shell metadata of one building-block sum.
#[derive(Debug, Clone, Copy)]
pub struct ShellSumParts {
    pub value: Complex64,
    pub gross: f64,
    pub shells_used: u32,
}

/// Hermite-Gauss series H_r = ν·((2r+1)!/(2^r·r!))·s_r.
pub fn h_r(
    lat: &Lattice,
    inv: &EllipticInvariants,
    r: u32,
    policy: &TruncationPolicy,
) -> LatticeSumResult {
    let nu = lat.nu();
    let pref = nu * factorial_ratio(2 * r + 1, r) / (2.0f64).powi(r as i32);
    let s = confluent_weighted_sum(lat, policy, inv.mu, r);
    // crude per-term bound C·|γ|^{2+2r}·e^{-ν|γ|²/2}, valid on the tail
    // shells where |γ| >= 1
    let coeff_bound: f64 = homogenized_confluent_row(r)
        .iter()
        .enumerate()
        .map(|(k, c)| c.abs() * (nu * nu / 2.0).powi(k as i32) * inv.mu.norm().powi((r - k as u32) as i32))
        .sum();
    LatticeSumResult {
        value: s.value * pref,
        raw_value: s.value * pref,
        tail_estimate: gaussian_tail(lat, s.shells_used, pref.abs() * coeff_bound, (2 + 2 * r) as i32, 0.0),
        shells_used: s.shells_used,
    }
}

/// Series-route Taylor coefficient W_r = H_r/H₀.
///
/// Errors with [`Error::DegenerateNormalization`] if |H₀| sits below the
/// cancellation noise floor of its own gross magnitude (never observed on
/// the tested lattices, but surfaced rather than silently divided by).
pub fn w_r_series_route(
    lat: &Lattice,
    inv: &EllipticInvariants,
    r: u32,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    let h0 = h_r(lat, inv, 0, policy);
    let s0 = confluent_weighted_sum(lat, policy, inv.mu, 0);
    let floor = 1e-10 * s0.gross.max(f64::MIN_POSITIVE) * lat.nu();
    if h0.value.norm() <= floor {
        return Err(Error::DegenerateNormalization {
            magnitude: h0.value.norm(),
            floor,
        });
    }
    Ok(h_r(lat, inv, r, policy).value / h0.value)
}

/// Poincaré periodization [P(f)](z) = Σ_γ χ(γ) e^{-ν|γ|²/2 + νz·conj(γ)} f(z-γ).
///
/// Contract: f entire with |f(w)| <= C·e^{α|w|^β}, β < 2. Growth is not
/// verified at runtime beyond a per-term finiteness guard; the reported
/// tail estimate is the outermost computed shell's peak term, a proxy that
/// is honest exactly when the contract holds.
pub fn poincare_periodize(
    lat: &Lattice,
    f: impl Fn(Complex64) -> Complex64,
    z: Complex64,
    policy: &TruncationPolicy,
) -> Result<LatticeSumResult> {
    let nu = lat.nu();
    let mut last_peak = 0.0f64;
    let mut shell_peak = 0.0f64;
    let mut current_shell = 0i64;
    let s = sum_full(lat, policy, f(z), |p| {
        let k = p.m.abs().max(p.n.abs());
        if k != current_shell {
            last_peak = shell_peak;
            shell_peak = 0.0;
            current_shell = k;
        }
        let t = (nu * z * p.gamma.conj() - nu * p.gamma.norm_sqr() / 2.0).exp()
            * (p.chi() as f64)
            * f(z - p.gamma);
        shell_peak = shell_peak.max(t.norm());
        t
    })
    .ok_or(Error::NonFiniteTerm)?;
    Ok(LatticeSumResult {
        value: s.value,
        raw_value: s.value,
        tail_estimate: shell_peak.max(last_peak),
        shells_used: s.shells_used,
    })
}

/// Residuals |Σ_γ χ(γ)·γ^k·e^{-ν|γ|²/2}| for k = 0..=k_max; all of them
/// vanish for ν = π/S. Odd k cancels exactly pair by pair.
pub fn perelomov_check(lat: &Lattice, k_max: u32, policy: &TruncationPolicy) -> Vec<(u32, f64)> {
    let nu = lat.nu();
    (0..=k_max)
        .map(|k| {
            let center = if k == 0 {
                Complex64::new(1.0, 0.0) // chi(0)·0^0
            } else {
                Complex64::new(0.0, 0.0)
            };
            let s = sum_pairs(lat, policy, center, |p| {
                let gauss = (-nu * p.gamma.norm_sqr() / 2.0).exp() * p.chi() as f64;
                let gk = p.gamma.powu(k);
                (gk + (-p.gamma).powu(k)) * gauss
            });
            (k, s.value.norm())
        })
        .collect()
}

/// Homogenized confluent coefficients C(r,k)/(3/2)_k for k = 0..=r.
pub(crate) fn homogenized_confluent_row(r: u32) -> Vec<f64> {
    let mut out = Vec::with_capacity(r as usize + 1);
    let mut c = BigRational::one();
    out.push(rational_to_f64(&c));
    for k in 0..r as i64 {
        // C(r,k+1)/C(r,k) = (r-k)/(k+1); (3/2)_{k+1}/(3/2)_k = (3+2k)/2
        c *= BigRational::new(
            BigInt::from(2 * (r as i64 - k)),
            BigInt::from((k + 1) * (3 + 2 * k)),
        );
        out.push(rational_to_f64(&c));
    }
    out
}

/// (hi)!/(lo)! as f64.
fn factorial_ratio(hi: u32, lo: u32) -> f64 {
    ((lo + 1)..=hi).map(|i| i as f64).product()
}
