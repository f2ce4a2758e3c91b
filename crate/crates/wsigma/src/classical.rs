//! Classical Weierstrass machinery, the reference oracle for everything else:
//! σ from the canonical product, ζ from the partial-fraction series,
//! quasi-periods, Eisenstein series, and the derived pair (ν, μ).
//!
//! The slowly convergent sums (ζ, Eisenstein, log σ) are summed over
//! {γ, -γ} pairs, which upgrades the term decay by one power of |γ|, and
//! then Richardson-extrapolated over a dyadic ladder of shell counts.
//! A single extrapolation step cannot reach the tolerances this crate is
//! tested at; the three-level ladder removes the 1/K², 1/K³ and 1/K⁴
//! error components and leaves residuals near the f64 noise floor.

use alloc::collections::BTreeMap;
#[allow(unused_imports)] // f64 math lives in num_traits::Float under no_std
use num_traits::Float;

use crate::lattice::{Lattice, LatticePoint, TruncationPolicy};
use crate::sum::{cascade_pairs, power_tail, LatticeSumResult};
use crate::{Complex64, Error, Result};

/// Shell-budget multipliers for the power-law sums (base = multiplier ·
/// max_shell, clamped in [96, 2048]). The Eisenstein budget is larger
/// because g₂, g₃ feed every downstream relative comparison.
const ZETA_SHELL_FACTOR: u32 = 16;
const EISENSTEIN_SHELL_FACTOR: u32 = 48;

/// Everything `invariants` computes for one lattice.
#[derive(Debug, Clone)]
pub struct EllipticInvariants {
    /// g₂ = 60·G₄.
    pub g2: Complex64,
    /// g₃ = 140·G₆.
    pub g3: Complex64,
    /// Eisenstein sums G_{2n} keyed by the weight 2n, for 4 <= 2n <= 12.
    pub eisenstein: BTreeMap<u32, Complex64>,
    /// Quasi-period η₁ = 2ζ(ω₁/2).
    pub eta1: Complex64,
    /// Quasi-period η₂ = 2ζ(ω₂/2).
    pub eta2: Complex64,
    /// Solution μ of ν·conj(ω_j) + μ·ω_j = η_j.
    pub mu: Complex64,
    /// ν = π/S; the linear system reproduces it to rounding.
    pub nu: f64,
}

impl EllipticInvariants {
    /// η(γ) = m·η₁ + n·η₂ for γ = m·ω₁ + n·ω₂.
    pub fn eta(&self, p: &LatticePoint) -> Complex64 {
        self.eta1 * p.m as f64 + self.eta2 * p.n as f64
    }

    /// |η₁ω₂ - η₂ω₁ - 2πi|.
    pub fn legendre_residual(&self, lat: &Lattice) -> f64 {
        let two_pi_i = Complex64::new(0.0, 2.0 * core::f64::consts::PI);
        (self.eta1 * lat.omega2() - self.eta2 * lat.omega1() - two_pi_i).norm()
    }
}

/// σ(z) from the canonical product z·Π'(1 - z/γ)·exp(z/γ + z²/(2γ²)).
///
/// The product is accumulated as a sum of pair logarithms
/// log(1 - z²/γ²) + z²/γ², so the γ^{-3} parts cancel exactly and large
/// shells cannot overflow; the value is exp of the extrapolated log-sum.
/// σ is exactly zero when z hits an enumerated lattice point.
pub fn sigma_product(lat: &Lattice, z: Complex64, policy: &TruncationPolicy) -> LatticeSumResult {
    let zero = Complex64::new(0.0, 0.0);
    if z == zero {
        return LatticeSumResult {
            value: zero,
            raw_value: zero,
            tail_estimate: 0.0,
            shells_used: 0,
        };
    }
    let base = policy.cascade_base(ZETA_SHELL_FACTOR);
    let z2 = z * z;
    let one = Complex64::new(1.0, 0.0);
    let mut hit_zero = false;
    let (log_extrap, log_raw) = cascade_pairs(lat, base, |p| {
        let w = z2 / (p.gamma * p.gamma);
        let f = one - w;
        if f == zero {
            hit_zero = true;
            return zero;
        }
        log1m_plus(w, f)
    });
    if hit_zero {
        return LatticeSumResult {
            value: zero,
            raw_value: zero,
            tail_estimate: 0.0,
            shells_used: base,
        };
    }
    let value = z * log_extrap.exp();
    // tail of the log-sum: pair terms are ~ |z|^4/(2|gamma|^4); scale by
    // |value| to bound the first-order value error.
    let slack = tail_slack(lat, base, z);
    let log_tail = power_tail(lat, base, 0.5 * z.norm().powi(4) * slack, 4);
    LatticeSumResult {
        value,
        raw_value: z * log_raw.exp(),
        tail_estimate: value.norm() * log_tail,
        shells_used: base,
    }
}

/// ζ(z) = 1/z + Σ'[1/(z-γ) + 1/γ + z/γ²] by {γ, -γ} pairs:
/// each pair contributes 2z³/((z² - γ²)·γ²).
pub fn zeta_series(lat: &Lattice, z: Complex64, policy: &TruncationPolicy) -> Result<LatticeSumResult> {
    let (z0, _) = lat.reduce(z);
    if z0.norm() <= 1e-13 * lat.shell_reach() {
        return Err(Error::Pole(z));
    }
    let base = policy.cascade_base(ZETA_SHELL_FACTOR);
    let z2 = z * z;
    let z3 = z2 * z;
    let (extrap, raw) = cascade_pairs(lat, base, |p| {
        let g2 = p.gamma * p.gamma;
        (z3 * 2.0) / ((z2 - g2) * g2)
    });
    let inv_z = z.inv();
    let slack = tail_slack(lat, base, z);
    Ok(LatticeSumResult {
        value: extrap + inv_z,
        raw_value: raw + inv_z,
        tail_estimate: power_tail(lat, base, 2.0 * z.norm().powi(3) * slack, 4),
        shells_used: base,
    })
}

/// G_{2n} = Σ' γ^{-2n} for n >= 2, pair-summed shell by shell from the
/// outermost shell inward, with the dyadic Richardson ladder on top.
pub fn eisenstein(lat: &Lattice, n: u32, policy: &TruncationPolicy) -> Result<LatticeSumResult> {
    if n < 2 {
        return Err(Error::DivergentSum(2 * n));
    }
    let base = policy.cascade_base(EISENSTEIN_SHELL_FACTOR);
    let (extrap, raw) = cascade_pairs(lat, base, |p| p.gamma.powu(2 * n).inv() * 2.0);
    Ok(LatticeSumResult {
        value: extrap,
        raw_value: raw,
        tail_estimate: power_tail(lat, base, 2.0, 2 * n as i32),
        shells_used: base,
    })
}

/// Quasi-periods from ζ at the half-periods, the linear system for (ν, μ),
/// and the Eisenstein series G₄..G₁₂ with g₂ = 60G₄, g₃ = 140G₆.
///
/// μ feeds every downstream Hermite-Gauss comparison, and on the symmetric
/// lattices (true μ = 0) its absolute error is pure pollution there, so
/// the half-period ζ evaluations run on a doubled shell budget.
pub fn invariants(lat: &Lattice, policy: &TruncationPolicy) -> Result<EllipticInvariants> {
    let eta_policy = TruncationPolicy::new(policy.max_shell().saturating_mul(2), policy.target_tol());
    let eta1 = zeta_series(lat, lat.omega1() * 0.5, &eta_policy)?.value * 2.0;
    let eta2 = zeta_series(lat, lat.omega2() * 0.5, &eta_policy)?.value * 2.0;
    // [conj(w1) w1; conj(w2) w2] (nu, mu)^T = (eta1, eta2)^T,
    // determinant 2iS != 0 for an oriented basis.
    let det = lat.omega1().conj() * lat.omega2() - lat.omega1() * lat.omega2().conj();
    let nu_solved = (eta1 * lat.omega2() - eta2 * lat.omega1()) / det;
    let mu = (lat.omega1().conj() * eta2 - lat.omega2().conj() * eta1) / det;
    debug_assert!(
        (nu_solved - lat.nu()).norm() <= 1e-6 * lat.nu(),
        "linear system disagrees with pi/S: {nu_solved} vs {}",
        lat.nu()
    );
    let mut eis = BTreeMap::new();
    for n in 2..=6u32 {
        eis.insert(2 * n, eisenstein(lat, n, policy)?.value);
    }
    Ok(EllipticInvariants {
        g2: eis[&4] * 60.0,
        g3: eis[&6] * 140.0,
        eisenstein: eis,
        eta1,
        eta2,
        mu,
        nu: lat.nu(),
    })
}

/// σ(z) for arbitrary z: reduce z = z₀ + γ into the cell centered at the
/// origin and multiply back the exact quasi-periodicity factor
/// χ(γ)·exp((z₀ + γ/2)·η(γ)).
pub fn sigma_reduced(
    lat: &Lattice,
    inv: &EllipticInvariants,
    z: Complex64,
    policy: &TruncationPolicy,
) -> Complex64 {
    let (z0, p) = lat.reduce(z);
    let core = sigma_product(lat, z0, policy).value;
    if p.m == 0 && p.n == 0 {
        return core;
    }
    let factor = ((z0 + p.gamma * 0.5) * inv.eta(&p)).exp() * p.chi() as f64;
    factor * core
}

/// 1/(1 - (|z|/(K·gap))²), the geometric slack of the power-law tail
/// bounds; capped for policies so small the bound degenerates.
fn tail_slack(lat: &Lattice, base: u32, z: Complex64) -> f64 {
    let edge = z.norm() / (base as f64 * lat.shell_gap());
    if edge >= 0.9 {
        10.0
    } else {
        1.0 / (1.0 - edge * edge)
    }
}

/// ln(1 - w) + w with the cancellation-free series branch for small |w|;
/// `f` is the precomputed 1 - w.
fn log1m_plus(w: Complex64, f: Complex64) -> Complex64 {
    if w.norm_sqr() < 1e-8 {
        // -w^2 (1/2 + w/3 + w^2/4 + w^3/5), next term below 1e-24
        let c = Complex64::new(0.5, 0.0) + w / 3.0 + w * w * 0.25 + w * w * w * 0.2;
        -w * w * c
    } else {
        f.ln() + w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use approx::assert_relative_eq;
    use num_complex::Complex;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex::new(re, im)
    }

    fn square() -> Lattice {
        Lattice::new(c(1.0, 0.0), c(0.0, 1.0)).unwrap()
    }

    fn hexagonal() -> Lattice {
        let half = 0.5;
        let s3 = 3.0f64.sqrt() / 2.0;
        Lattice::new(c(1.0, 0.0), c(half, s3)).unwrap()
    }

    fn generic() -> Lattice {
        Lattice::new(c(1.0, 0.0), c(0.3, 1.2)).unwrap()
    }

    fn policy() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    #[test]
    fn sigma_vanishes_on_lattice() {
        let lat = square();
        assert_eq!(sigma_product(&lat, c(0.0, 0.0), &policy()).value, c(0.0, 0.0));
        assert_eq!(sigma_product(&lat, c(1.0, 0.0), &policy()).value, c(0.0, 0.0));
        assert_eq!(sigma_product(&lat, c(2.0, -3.0), &policy()).value, c(0.0, 0.0));
    }

    #[test]
    fn sigma_reference_values() {
        // Frozen from an independent high-precision evaluation (theta
        // quotient route, 40 digits).
        let s = sigma_product(&square(), c(0.25, 0.0), &policy()).value;
        assert_relative_eq!(s.re, 0.24922981572566109, max_relative = 1e-12);
        assert!(s.im.abs() < 1e-15);
        let g = sigma_product(&generic(), c(0.2, 0.3), &policy()).value;
        assert_relative_eq!(g.re, 0.1987054548288806, max_relative = 1e-11);
        assert_relative_eq!(g.im, 0.30291098879085966, max_relative = 1e-11);
    }

    #[test]
    fn sigma_is_odd() {
        let lat = generic();
        for z in [c(0.2, 0.3), c(-0.4, 0.1), c(0.05, -0.45)] {
            let plus = sigma_product(&lat, z, &policy()).value;
            let minus = sigma_product(&lat, -z, &policy()).value;
            assert!((plus + minus).norm() <= 1e-10 * plus.norm().max(1e-3));
        }
    }

    #[test]
    fn sigma_derivative_at_zero_is_one() {
        // |sigma(h)/h - 1| = O(h^4): ratio at two step sizes
        let lat = square();
        let r1 = sigma_product(&lat, c(1e-2, 0.0), &policy()).value / c(1e-2, 0.0);
        let r2 = sigma_product(&lat, c(2e-2, 0.0), &policy()).value / c(2e-2, 0.0);
        let d1 = (r1 - c(1.0, 0.0)).norm();
        let d2 = (r2 - c(1.0, 0.0)).norm();
        assert!(d1 < 1e-7);
        assert!(d2 / d1 > 8.0 && d2 / d1 < 32.0, "quartic scaling, got {}", d2 / d1);
    }

    #[test]
    fn zeta_is_odd() {
        let lat = square();
        let z = c(0.2, 0.1);
        let plus = zeta_series(&lat, z, &policy()).unwrap().value;
        let minus = zeta_series(&lat, -z, &policy()).unwrap().value;
        assert!((plus + minus).norm() <= 1e-10);
    }

    #[test]
    fn zeta_half_period_square_is_half_pi() {
        // Legendre relation plus 4-fold symmetry force eta1 = pi on (1, i).
        let lat = square();
        let eta1 = zeta_series(&lat, c(0.5, 0.0), &policy()).unwrap().value * 2.0;
        assert!((eta1 - c(core::f64::consts::PI, 0.0)).norm() <= 1e-10);
    }

    #[test]
    fn zeta_pole_error() {
        let lat = square();
        assert!(matches!(
            zeta_series(&lat, c(0.0, 0.0), &policy()),
            Err(Error::Pole(_))
        ));
        assert!(matches!(
            zeta_series(&lat, c(2.0, 1.0), &policy()),
            Err(Error::Pole(_))
        ));
    }

    #[test]
    fn eisenstein_symmetric_zeros_and_reference() {
        // i*Gamma = Gamma kills G6 on the square lattice; 6-fold symmetry
        // kills G4 on the hexagonal one.
        let g6 = eisenstein(&square(), 3, &policy()).unwrap().value;
        assert!(g6.norm() <= 1e-10, "G6(square) = {g6}");
        let g4hex = eisenstein(&hexagonal(), 2, &policy()).unwrap().value;
        assert!(g4hex.norm() <= 1e-8, "G4(hex) = {g4hex}");
        // frozen regression target (equals Gamma(1/4)^8/(960 pi^2))
        let g4 = eisenstein(&square(), 2, &policy()).unwrap().value;
        assert_relative_eq!(g4.re, 3.1512120021538975, max_relative = 1e-9);
        assert!(g4.im.abs() <= 1e-12);
    }

    #[test]
    fn eisenstein_rejects_divergent_exponent() {
        assert!(matches!(
            eisenstein(&square(), 1, &policy()),
            Err(Error::DivergentSum(2))
        ));
    }

    #[test]
    fn eisenstein_extrapolation_recorded() {
        let r = eisenstein(&generic(), 2, &policy()).unwrap();
        // raw and extrapolated agree to the raw tail bound
        assert!((r.value - r.raw_value).norm() <= r.tail_estimate);
        assert!(r.tail_estimate < 1e-4);
        assert_eq!(r.shells_used, 576);
    }

    #[test]
    fn invariants_square_and_hex_have_zero_mu() {
        let inv = invariants(&square(), &policy()).unwrap();
        assert!(inv.mu.norm() <= 1e-9, "mu(square) = {}", inv.mu);
        let inv = invariants(&hexagonal(), &policy()).unwrap();
        assert!(inv.mu.norm() <= 1e-9, "mu(hex) = {}", inv.mu);
    }

    #[test]
    fn legendre_relation_on_panel() {
        for lat in [square(), hexagonal(), generic()] {
            let inv = invariants(&lat, &policy()).unwrap();
            assert!(
                inv.legendre_residual(&lat) <= 1e-9,
                "legendre residual {} on {lat:?}",
                inv.legendre_residual(&lat)
            );
        }
    }

    #[test]
    fn legendre_residual_shrinks_with_policy() {
        // monotone convergence across growing shell budgets (20/40/80)
        let lat = generic();
        let res = |shells: u32| {
            let inv = invariants(&lat, &TruncationPolicy::new(shells, 1e-10)).unwrap();
            inv.legendre_residual(&lat)
        };
        let (r20, r40, r80) = (res(20), res(40), res(80));
        assert!(r40 <= r20, "r40 {r40} > r20 {r20}");
        assert!(r80 <= r40 * 1.5 + 1e-13, "r80 {r80} vs r40 {r40}");
        assert!(r80 <= r20);
    }

    #[test]
    fn mu_closed_form_matches_linear_system() {
        // mu = (i/S)(zeta(w1/2) conj(w2) - zeta(w2/2) conj(w1))
        let lat = generic();
        let inv = invariants(&lat, &policy()).unwrap();
        let z1 = zeta_series(&lat, lat.omega1() * 0.5, &policy()).unwrap().value;
        let z2 = zeta_series(&lat, lat.omega2() * 0.5, &policy()).unwrap().value;
        let closed = Complex64::new(0.0, 1.0 / lat.cell_area())
            * (z1 * lat.omega2().conj() - z2 * lat.omega1().conj());
        assert!((closed - inv.mu).norm() <= 1e-10);
    }

    #[test]
    fn sigma_reduced_consistency() {
        let lat = square();
        let inv = invariants(&lat, &policy()).unwrap();
        assert_eq!(sigma_reduced(&lat, &inv, c(0.0, 0.0), &policy()), c(0.0, 0.0));
        // quasi-periodicity: sigma(z + w1) = chi(w1) e^{(z + w1/2) eta1} sigma(z)
        let z = c(0.17, 0.23);
        let lhs = sigma_reduced(&lat, &inv, z + lat.omega1(), &policy());
        let factor = ((z + lat.omega1() * 0.5) * inv.eta1).exp() * -1.0;
        let rhs = factor * sigma_product(&lat, z, &policy()).value;
        assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm());
        // far point against the direct product with a large policy
        let lat = generic();
        let inv = invariants(&lat, &policy()).unwrap();
        let z = c(3.7, 2.1);
        let red = sigma_reduced(&lat, &inv, z, &policy());
        let big = sigma_product(&lat, z, &TruncationPolicy::new(40, 1e-12)).value;
        assert!((red - big).norm() <= 1e-7 * big.norm());
    }
}
