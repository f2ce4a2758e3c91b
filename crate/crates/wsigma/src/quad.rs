//! Gaussian-weight quadrature over ℂ: the tensor Gauss-Hermite rule, the
//! Bargmann-type reproducing formula, the reproducing integral for σ, the
//! integral route for the Taylor coefficients W_r, the kernel trace over a
//! fundamental cell, and the integral forms of g₂ and g₃.

use alloc::vec::Vec;
#[allow(unused_imports)] // f64 math lives in num_traits::Float under no_std
use num_traits::Float;

use crate::classical::{sigma_reduced, EllipticInvariants};
use crate::hermite::homogenized_confluent_row;
use crate::lattice::{Lattice, TruncationPolicy};
use crate::sum::{Kahan, KahanComplex};
use crate::Complex64;

/// Tensor-product rule for ∫_ℂ f(w)·e^{-ν|w|²} dm(w).
///
/// Nodes are (x_i + i·x_j)/√ν for the one-axis Gauss-Hermite nodes x_i of
/// weight e^{-t²}; the stored weights are w_i·w_j/ν, so plain weighted
/// sums of f at the nodes approximate the Gaussian integral. A rule of
/// `order` points per axis integrates monomials w^a·conj(w)^b with
/// a + b <= 2·order - 2 exactly up to rounding.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    order: u32,
    nu: f64,
    nodes: Vec<(Complex64, f64)>,
}

impl QuadratureRule {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn nodes(&self) -> &[(Complex64, f64)] {
        &self.nodes
    }

    /// Compensated weighted sum of f over the nodes, in storage order.
    pub fn integrate(&self, mut f: impl FnMut(Complex64) -> Complex64) -> Complex64 {
        let mut acc = KahanComplex::default();
        for &(w, weight) in &self.nodes {
            acc.add(f(w) * weight);
        }
        acc.value()
    }
}

/// Builds the tensor rule for the weight e^{-ν|w|²}; `order` >= 2 nodes
/// per axis.
pub fn build_rule(nu: f64, order: u32) -> QuadratureRule {
    assert!(order >= 2, "quadrature order must be at least 2");
    assert!(nu > 0.0, "nu must be positive");
    let (xs, ws) = gauss_hermite_1d(order as usize);
    let scale = nu.sqrt().recip();
    let mut nodes = Vec::with_capacity((order * order) as usize);
    for i in 0..order as usize {
        for j in 0..order as usize {
            nodes.push((
                Complex64::new(xs[i] * scale, xs[j] * scale),
                ws[i] * ws[j] / nu,
            ));
        }
    }
    QuadratureRule { order, nu, nodes }
}

/// Reproducing formula of the Gaussian (Bargmann-type) space:
/// f(z) = (ν/π) ∫ e^{νz·conj(w)} f(w) e^{-ν|w|²} dm(w) for entire f with
/// |f(w)| <= C·e^{ν|w|²/2}. `nu` must match the rule's weight.
pub fn bargmann_reproduce(
    rule: &QuadratureRule,
    nu: f64,
    f: impl Fn(Complex64) -> Complex64,
    z: Complex64,
) -> Complex64 {
    debug_assert!((nu - rule.nu).abs() <= 1e-12 * nu);
    rule.integrate(|w| (z * w.conj() * nu).exp() * f(w)) * (nu / core::f64::consts::PI)
}

/// σ evaluated (via [`sigma_reduced`]) at every node of the rule.
///
/// The reproducing and Taylor-coefficient integrals below all consume σ at
/// the same nodes, so callers compute this once per (lattice, rule) pair
/// and share it. The product evaluation inside the cell needs far fewer
/// shells than the oracle-grade contexts, so the policy is scaled down.
pub fn sigma_at_nodes(
    lat: &Lattice,
    inv: &EllipticInvariants,
    rule: &QuadratureRule,
    policy: &TruncationPolicy,
) -> Vec<Complex64> {
    let inner = TruncationPolicy::new((policy.max_shell() / 4).max(3), policy.target_tol());
    rule.nodes
        .iter()
        .map(|&(w, _)| sigma_reduced(lat, inv, w, &inner))
        .collect()
}

/// Reproducing integral for σ:
/// σ(z) = (ν/π)·e^{μz²/2} ∫ e^{νz·conj(w) - μw²/2} σ(w) e^{-ν|w|²} dm(w).
pub fn sigma_reproduce(
    lat: &Lattice,
    inv: &EllipticInvariants,
    rule: &QuadratureRule,
    z: Complex64,
    policy: &TruncationPolicy,
) -> Complex64 {
    let values = sigma_at_nodes(lat, inv, rule, policy);
    sigma_reproduce_cached(inv, rule, &values, z)
}

/// [`sigma_reproduce`] against a precomputed node cache.
pub fn sigma_reproduce_cached(
    inv: &EllipticInvariants,
    rule: &QuadratureRule,
    sigma_values: &[Complex64],
    z: Complex64,
) -> Complex64 {
    let nu = rule.nu;
    let mut acc = KahanComplex::default();
    for (&(w, weight), &sv) in rule.nodes.iter().zip(sigma_values) {
        let kernel = (z * w.conj() * nu - inv.mu * w * w * 0.5).exp();
        acc.add(kernel * sv * weight);
    }
    acc.value() * (inv.mu * z * z * 0.5).exp() * (nu / core::f64::consts::PI)
}

/// Integral route for the Taylor coefficients:
/// W_r = (ν²/π)·((2r+1)!/(2^r·r!)) ∫ conj(w)·μ^r F(-r;3/2;-ν²conj(w)²/(2μ))
///        ·e^{-μw²/2} σ(w) e^{-ν|w|²} dm(w),
/// with the confluent factor in the same homogenized-in-μ form as the
/// series route (so μ = 0 needs no special case).
pub fn w_r_integral_route(
    lat: &Lattice,
    inv: &EllipticInvariants,
    rule: &QuadratureRule,
    r: u32,
    policy: &TruncationPolicy,
) -> Complex64 {
    let values = sigma_at_nodes(lat, inv, rule, policy);
    w_r_integral_cached(inv, rule, &values, r)
}

/// [`w_r_integral_route`] against a precomputed node cache.
pub fn w_r_integral_cached(
    inv: &EllipticInvariants,
    rule: &QuadratureRule,
    sigma_values: &[Complex64],
    r: u32,
) -> Complex64 {
    let nu = rule.nu;
    let pref = nu * nu / core::f64::consts::PI * factorial_over_pow2(r);
    confluent_sigma_integral(inv, rule, sigma_values, r) * pref
}

/// Integral forms of the modular parameters (with the convergent Gaussian
/// weight e^{-ν|w|²}):
/// g₂ = -(30ν²/π)·I₂ and g₃ = -(35ν²/(2π))·I₃ where I_r is the confluent
/// σ-integral of order r.
pub fn g2_g3_integral_route(
    lat: &Lattice,
    inv: &EllipticInvariants,
    rule: &QuadratureRule,
    policy: &TruncationPolicy,
) -> (Complex64, Complex64) {
    let values = sigma_at_nodes(lat, inv, rule, policy);
    g2_g3_integral_cached(inv, rule, &values)
}

/// [`g2_g3_integral_route`] against a precomputed node cache.
pub fn g2_g3_integral_cached(
    inv: &EllipticInvariants,
    rule: &QuadratureRule,
    sigma_values: &[Complex64],
) -> (Complex64, Complex64) {
    let nu = rule.nu;
    let pi = core::f64::consts::PI;
    let i2 = confluent_sigma_integral(inv, rule, sigma_values, 2);
    let i3 = confluent_sigma_integral(inv, rule, sigma_values, 3);
    (i2 * (-30.0 * nu * nu / pi), i3 * (-35.0 * nu * nu / (2.0 * pi)))
}

/// I_r = ∫ conj(w)·[Σ_k C(r,k)/(3/2)_k (ν²conj(w)²/2)^k μ^{r-k}]
///        ·e^{-μw²/2} σ(w) e^{-ν|w|²} dm(w).
fn confluent_sigma_integral(
    inv: &EllipticInvariants,
    rule: &QuadratureRule,
    sigma_values: &[Complex64],
    r: u32,
) -> Complex64 {
    let nu = rule.nu;
    let coeffs = homogenized_confluent_row(r);
    let half_nu2 = nu * nu / 2.0;
    let mut acc = KahanComplex::default();
    for (&(w, weight), &sv) in rule.nodes.iter().zip(sigma_values) {
        let x = w.conj() * w.conj() * half_nu2;
        let mut poly = Complex64::new(0.0, 0.0);
        let mut xk = Complex64::new(1.0, 0.0);
        for (k, c) in coeffs.iter().enumerate() {
            poly += xk * *c * inv.mu.powu(r - k as u32);
            xk *= x;
        }
        let kernel = (-inv.mu * w * w * 0.5).exp();
        acc.add(w.conj() * poly * kernel * sv * weight);
    }
    acc.value()
}

/// Trace of the reproducing kernel over one fundamental cell:
/// ∫_{Λ(Γ)} K(z,z) e^{-ν|z|²} dm(z), which must equal (ν/π)·S = 1.
///
/// On the diagonal the γ-term of the kernel series is the pure phase
/// e^{ν(z·conj(γ) - conj(z)·γ)}; pairs {γ, -γ} combine into a real cosine.
/// The cell integral uses a uniform midpoint grid of (2·max_shell + 1)
/// points per axis, which resolves every enumerated Fourier mode of the
/// periodic integrand exactly.
pub fn kernel_trace(lat: &Lattice, policy: &TruncationPolicy) -> f64 {
    let nu = lat.nu();
    let grid = 2 * policy.max_shell() as usize + 1;
    let mut cell_avg = Kahan::default();
    for i in 0..grid {
        for j in 0..grid {
            let s = (i as f64 + 0.5) / grid as f64;
            let t = (j as f64 + 0.5) / grid as f64;
            let z = lat.omega1() * s + lat.omega2() * t;
            let mut val = Kahan::default(); // gamma = 0 term is 1
            for k in 1..=policy.max_shell() {
                let mut shell = Kahan::default();
                lat.half_shell(k, |p| {
                    let theta = 2.0 * nu * (z * p.gamma.conj()).im;
                    let gauss = (-nu * p.gamma.norm_sqr() / 2.0).exp();
                    shell.add(2.0 * p.chi() as f64 * gauss * theta.cos());
                });
                val.add(shell.value());
            }
            cell_avg.add(val.value() + 1.0);
        }
    }
    let mean = cell_avg.value() / (grid * grid) as f64;
    // (nu/pi) * S * mean with the cell mapping Jacobian S
    lat.nu() / core::f64::consts::PI * lat.cell_area() * mean
}

/// (2r+1)!/(2^r·r!).
fn factorial_over_pow2(r: u32) -> f64 {
    let mut f = 1.0f64;
    for i in (r + 1)..=(2 * r + 1) {
        f *= i as f64;
    }
    f / (2.0f64).powi(r as i32)
}

/// One-axis Gauss-Hermite nodes and weights for the weight e^{-t²}.
///
/// Nodes are the eigenvalues of the symmetric tridiagonal Jacobi matrix
/// (zero diagonal, off-diagonals √(k/2)), located by Sturm-sequence
/// bisection; the weight at a node is 1/Σ_k p_k(x)² over the orthonormal
/// Hermite polynomials p_0..p_{n-1}.
fn gauss_hermite_1d(n: usize) -> (Vec<f64>, Vec<f64>) {
    let b2: Vec<f64> = (1..n).map(|k| k as f64 / 2.0).collect();
    // number of eigenvalues strictly below x, by the LDL^T pivot signs
    let count_below = |x: f64| -> usize {
        let mut count = 0;
        let mut d = -x;
        if d < 0.0 {
            count += 1;
        }
        for bb in &b2 {
            let denom = if d != 0.0 { d } else { 1e-300 };
            d = -x - bb / denom;
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };
    let radius = 2.0 * b2.last().copied().unwrap_or(0.25).sqrt() + 1.0;
    let mut nodes = Vec::with_capacity(n);
    for i in 0..n {
        let (mut lo, mut hi) = (-radius, radius);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if count_below(mid) <= i {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        nodes.push(0.5 * (lo + hi));
    }
    let weights = nodes
        .iter()
        .map(|&x| {
            let mut prev = 0.0f64;
            let mut cur = core::f64::consts::PI.powf(-0.25);
            let mut sum = cur * cur;
            for k in 0..n - 1 {
                let next = x * (2.0 / (k as f64 + 1.0)).sqrt() * cur
                    - (k as f64 / (k as f64 + 1.0)).sqrt() * prev;
                prev = cur;
                cur = next;
                sum += cur * cur;
            }
            1.0 / sum
        })
        .collect();
    (nodes, weights)
}
