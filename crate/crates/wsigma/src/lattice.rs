//! Lattices in ℂ: oriented bases, point enumeration by sup-norm shells,
//! the Weierstrass pseudo-character, and the derived scalars S and ν.

use alloc::vec::Vec;
#[allow(unused_imports)] // f64 math lives in num_traits::Float under no_std
use num_traits::Float;

use crate::{Complex64, Error, Result};

/// A two-dimensional lattice Γ = ℤω₁ + ℤω₂ with an oriented basis.
///
/// The constructor enforces Im(ω₂/ω₁) > 0, swapping the two vectors if the
/// caller supplied them the other way round. The cell area
/// S = Im(conj(ω₁)·ω₂) and the magnitude ν = π/S are therefore always
/// positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    omega1: Complex64,
    omega2: Complex64,
    area: f64,
    nu: f64,
    shell_gap: f64,
    shell_reach: f64,
}

impl Lattice {
    /// Builds a lattice from two ℝ-linearly independent basis vectors.
    ///
    /// Collinear (or zero) vectors are rejected. A basis with
    /// Im(ω₂/ω₁) < 0 is stored swapped so the retained basis is oriented.
    pub fn new(omega1: Complex64, omega2: Complex64) -> Result<Self> {
        let cross = (omega1.conj() * omega2).im;
        let scale = omega1.norm() * omega2.norm();
        let independent = cross.abs() > f64::EPSILON * 16.0 * scale; // false for NaN too
        if !independent {
            return Err(Error::DegenerateBasis);
        }
        let (omega1, omega2, area) = if cross > 0.0 {
            (omega1, omega2, cross)
        } else {
            (omega2, omega1, -cross)
        };
        let shell_gap = min_on_unit_square_boundary(omega1, omega2);
        Ok(Lattice {
            omega1,
            omega2,
            area,
            nu: core::f64::consts::PI / area,
            shell_gap,
            shell_reach: omega1.norm() + omega2.norm(),
        })
    }

    /// First basis vector of the stored (oriented) basis.
    pub fn omega1(&self) -> Complex64 {
        self.omega1
    }

    /// Second basis vector of the stored (oriented) basis.
    pub fn omega2(&self) -> Complex64 {
        self.omega2
    }

    /// Area S of a fundamental cell.
    pub fn cell_area(&self) -> f64 {
        self.area
    }

    /// The magnitude ν = π/S.
    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Dimension of the associated space of (Γ, χ_W)-theta functions,
    /// (ν/π)·S. With ν = π/S this is exactly 1 for every lattice.
    pub fn theta_space_dimension(&self) -> f64 {
        self.nu / core::f64::consts::PI * self.area
    }

    /// The lattice point m·ω₁ + n·ω₂.
    pub fn point(&self, m: i64, n: i64) -> LatticePoint {
        LatticePoint {
            m,
            n,
            gamma: self.gamma(m, n),
        }
    }

    /// m·ω₁ + n·ω₂ as a complex number.
    pub fn gamma(&self, m: i64, n: i64) -> Complex64 {
        self.omega1 * (m as f64) + self.omega2 * (n as f64)
    }

    /// Smallest |γ| attained on sup-norm shell k, divided by k.
    ///
    /// Every γ with max(|m|,|n|) = k satisfies |γ| >= k·shell_gap; shell
    /// tail bounds rest on this constant.
    pub fn shell_gap(&self) -> f64 {
        self.shell_gap
    }

    /// Largest |γ| on sup-norm shell k, divided by k: |ω₁| + |ω₂|.
    pub fn shell_reach(&self) -> f64 {
        self.shell_reach
    }

    /// Lattice coordinates (s, t) of z, so that z = s·ω₁ + t·ω₂.
    pub fn coordinates(&self, z: Complex64) -> (f64, f64) {
        let s = -(z * self.omega2.conj()).im / self.area;
        let t = (z * self.omega1.conj()).im / self.area;
        (s, t)
    }

    /// Splits z = z₀ + γ with γ ∈ Γ and z₀ in the fundamental cell
    /// centered at the origin (lattice coordinates in [-1/2, 1/2]).
    pub fn reduce(&self, z: Complex64) -> (Complex64, LatticePoint) {
        let (s, t) = self.coordinates(z);
        let m = s.round() as i64;
        let n = t.round() as i64;
        let p = self.point(m, n);
        (z - p.gamma, p)
    }

    /// All points with max(|m|,|n|) <= policy.max_shell, grouped by shell
    /// in increasing shell order, deterministic perimeter order within a
    /// shell (shell k holds 8k points for k >= 1).
    pub fn enumerate(&self, policy: &TruncationPolicy) -> Vec<LatticePoint> {
        let max = policy.max_shell();
        let total = (2 * max as usize + 1).pow(2);
        let mut out = Vec::with_capacity(total);
        for k in 0..=max {
            shell_indices(k, |m, n| out.push(self.point(m, n)));
        }
        out
    }

    /// One representative of every pair {γ, -γ} on shell k (4k points for
    /// k >= 1, none for k = 0), in the fixed order used by all pair sums.
    pub fn half_shell(&self, k: u32, mut f: impl FnMut(LatticePoint)) {
        half_shell_indices(k, |m, n| f(self.point(m, n)));
    }

    /// All 8k points of shell k (just the origin for k = 0), perimeter order.
    pub fn shell(&self, k: u32, mut f: impl FnMut(LatticePoint)) {
        shell_indices(k, |m, n| f(self.point(m, n)));
    }
}

/// A lattice point γ = m·ω₁ + n·ω₂ with its integer coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticePoint {
    pub m: i64,
    pub n: i64,
    pub gamma: Complex64,
}

impl LatticePoint {
    /// Value of the Weierstrass pseudo-character at this point.
    pub fn chi(&self) -> i32 {
        chi_w(self)
    }
}

/// Weierstrass pseudo-character χ_W(γ): +1 iff γ/2 ∈ Γ, i.e. iff both
/// integer coordinates are even, and -1 otherwise.
pub fn chi_w(p: &LatticePoint) -> i32 {
    if p.m & 1 == 0 && p.n & 1 == 0 {
        1
    } else {
        -1
    }
}

/// Truncation controls shared by every Γ-sum.
///
/// `max_shell` bounds the sup-norm shell index of enumerated points;
/// `target_tol` is the requested absolute tail bound, used both to stop
/// Gaussian-weighted sums early (once a whole shell stays below
/// target_tol/10) and to size the shell budget of the slowly convergent
/// classical sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    max_shell: u32,
    target_tol: f64,
}

impl TruncationPolicy {
    pub fn new(max_shell: u32, target_tol: f64) -> Self {
        assert!(target_tol > 0.0, "target_tol must be positive");
        TruncationPolicy {
            max_shell,
            target_tol,
        }
    }

    pub fn max_shell(&self) -> u32 {
        self.max_shell
    }

    pub fn target_tol(&self) -> f64 {
        self.target_tol
    }

    /// Shell budget for the power-law sums (ζ, σ-product, Eisenstein):
    /// `factor`·max_shell clamped to [96, 2048] and rounded up to a
    /// multiple of 8, so the dyadic extrapolation ladder B/8, B/4, B/2, B
    /// is always available.
    pub(crate) fn cascade_base(&self, factor: u32) -> u32 {
        let b = (self.max_shell.saturating_mul(factor)).clamp(96, 2048);
        (b + 7) & !7
    }
}

impl Default for TruncationPolicy {
    /// max_shell = 12, target_tol = 1e-10; enough for every Gaussian sum
    /// at double precision.
    fn default() -> Self {
        TruncationPolicy::new(12, 1e-10)
    }
}

/// Visits the 8k index pairs of sup-norm shell k (just (0,0) for k = 0)
/// walking the perimeter: right edge upward, then top leftward, left edge
/// downward, bottom rightward.
fn shell_indices(k: u32, mut f: impl FnMut(i64, i64)) {
    let k = k as i64;
    if k == 0 {
        f(0, 0);
        return;
    }
    for n in -k..=k {
        f(k, n);
    }
    for m in (-k..k).rev() {
        f(m, k);
    }
    for n in (-k..k).rev() {
        f(-k, n);
    }
    for m in -k + 1..k {
        f(m, -k);
    }
}

/// Visits 4k index pairs of shell k, one per {γ, -γ} pair: the m = k edge,
/// then (m, ±k) for 0 < m < k, then (0, k).
fn half_shell_indices(k: u32, mut f: impl FnMut(i64, i64)) {
    let k = k as i64;
    if k == 0 {
        return;
    }
    for n in -k..=k {
        f(k, n);
    }
    for m in 1..k {
        f(m, k);
        f(m, -k);
    }
    f(0, k);
}

/// min |u·a + v·b| over the boundary of the sup-norm unit square in (u,v).
///
/// By central symmetry it is enough to minimize |a + t·b| and |b + t·a|
/// over t ∈ [-1, 1]; each is a real quadratic in t.
fn min_on_unit_square_boundary(a: Complex64, b: Complex64) -> f64 {
    fn edge_min(a: Complex64, b: Complex64) -> f64 {
        let t = (-(a * b.conj()).re / b.norm_sqr()).clamp(-1.0, 1.0);
        (a + b * t).norm()
    }
    edge_min(a, b).min(edge_min(b, a))
}
