//! Exact-rational Weierstrass recursion for the Taylor coefficients of σ.
//!
//! The table entries a_{m,n} satisfy a_{0,0} = 1, a_{m,n} = 0 for negative
//! indices, and
//!
//! ```text
//! a_{m,n} = 3(m+1) a_{m+1,n-1} + (16/3)(n+1) a_{m-2,n+1}
//!           - (1/3)(2m+3n-1)(4m+6n-1) a_{m-1,n}
//! ```
//!
//! which only references entries of strictly smaller r = 2m+3n. The
//! coefficient of z^{2r+1}/(2r+1)! in σ is then the bivariate polynomial
//! W_r = Σ_{2m+3n=r} a_{m,n} (g₂/2)^m (2g₃)^n.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::classical::EllipticInvariants;
use crate::{Complex64, Error, Result};

/// Table of the recursion coefficients a_{m,n}, complete for 2m+3n <= max_r.
#[derive(Debug, Clone)]
pub struct CoeffTable {
    entries: BTreeMap<(u32, u32), BigRational>,
    max_r: u32,
}

/// Fills the table in increasing order of r = 2m+3n, exactly.
pub fn build_coeff_table(max_r: u32) -> CoeffTable {
    let mut entries: BTreeMap<(u32, u32), BigRational> = BTreeMap::new();
    entries.insert((0, 0), BigRational::one());
    let get = |entries: &BTreeMap<(u32, u32), BigRational>, m: i64, n: i64| -> BigRational {
        if m < 0 || n < 0 {
            return BigRational::zero();
        }
        entries
            .get(&(m as u32, n as u32))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    };
    let ratio = |num: i64, den: i64| BigRational::new(BigInt::from(num), BigInt::from(den));
    for r in 1..=max_r as i64 {
        for m in 0..=r / 2 {
            if (r - 2 * m) % 3 != 0 {
                continue;
            }
            let n = (r - 2 * m) / 3;
            let value = ratio(3 * (m + 1), 1) * get(&entries, m + 1, n - 1)
                + ratio(16 * (n + 1), 3) * get(&entries, m - 2, n + 1)
                - ratio((2 * m + 3 * n - 1) * (4 * m + 6 * n - 1), 3) * get(&entries, m - 1, n);
            entries.insert((m as u32, n as u32), value);
        }
    }
    CoeffTable { entries, max_r }
}

impl CoeffTable {
    /// a_{m,n}; zero outside the filled triangle.
    pub fn get(&self, m: u32, n: u32) -> BigRational {
        self.entries
            .get(&(m, n))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn max_r(&self) -> u32 {
        self.max_r
    }

    /// Entries sorted by (r = 2m+3n, m): the CSV dump order.
    pub fn rows(&self) -> Vec<(u32, u32, BigRational)> {
        let mut rows: Vec<_> = self
            .entries
            .iter()
            .map(|(&(m, n), v)| (m, n, v.clone()))
            .collect();
        rows.sort_by_key(|&(m, n, _)| (2 * m + 3 * n, m));
        rows
    }
}

/// Sparse polynomial in the formal symbols g₂, g₃ with rational
/// coefficients; keys are (power of g₂, power of g₃).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariatePoly {
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        BivariatePoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, key: (u32, u32), value: BigRational) {
        if !value.is_zero() {
            self.terms.insert(key, value);
        }
    }

    /// Coefficient of g₂^a g₃^b.
    pub fn coeff(&self, a: u32, b: u32) -> BigRational {
        self.terms
            .get(&(a, b))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigRational)> {
        self.terms.iter()
    }

    /// Exact product.
    pub fn mul(&self, other: &BivariatePoly) -> BivariatePoly {
        let mut out: BTreeMap<(u32, u32), BigRational> = BTreeMap::new();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &other.terms {
                let e = out
                    .entry((a1 + a2, b1 + b2))
                    .or_insert_with(BigRational::zero);
                *e += c1 * c2;
            }
        }
        out.retain(|_, v| !v.is_zero());
        BivariatePoly { terms: out }
    }

    /// Exact scalar multiple.
    pub fn scale(&self, c: &BigRational) -> BivariatePoly {
        if c.is_zero() {
            return BivariatePoly::zero();
        }
        BivariatePoly {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// If `self` = c·`other` for a single rational c (same monomial support,
    /// identical coefficient ratios), returns c.
    pub fn proportional_ratio(&self, other: &BivariatePoly) -> Option<BigRational> {
        if self.terms.len() != other.terms.len() || other.terms.is_empty() {
            return None;
        }
        let mut ratio: Option<BigRational> = None;
        for (key, c2) in &other.terms {
            let c1 = self.terms.get(key)?;
            let r = c1 / c2;
            match &ratio {
                None => ratio = Some(r),
                Some(prev) if *prev == r => {}
                _ => return None,
            }
        }
        ratio
    }

    /// Numerical evaluation at concrete (g₂, g₃).
    pub fn eval(&self, g2: Complex64, g3: Complex64) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for (&(a, b), c) in &self.terms {
            total += g2.powu(a) * g3.powu(b) * rational_to_f64(c);
        }
        total
    }
}

/// W_r as a polynomial: Σ_{2m+3n=r} a_{m,n} (g₂/2)^m (2g₃)^n.
pub fn w_r_polynomial(table: &CoeffTable, r: u32) -> Result<BivariatePoly> {
    if r > table.max_r {
        return Err(Error::TableExhausted {
            r,
            max_r: table.max_r,
        });
    }
    let mut poly = BivariatePoly::zero();
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let two = BigRational::new(BigInt::from(2), BigInt::from(1));
    for (&(m, n), a) in &table.entries {
        if 2 * m + 3 * n == r {
            let c = a * pow_rational(&half, m) * pow_rational(&two, n);
            poly.insert((m, n), c);
        }
    }
    Ok(poly)
}

/// Evaluates a W_r polynomial at the lattice's numeric (g₂, g₃).
pub fn w_r_value(poly: &BivariatePoly, inv: &EllipticInvariants) -> Complex64 {
    poly.eval(inv.g2, inv.g3)
}

/// Partial sum of σ(z) = Σ_r W_r z^{2r+1}/(2r+1)! through r = max_r.
///
/// Returns the value and the magnitude of the last retained term, a crude
/// remainder proxy the caller can check against its tolerance.
pub fn sigma_taylor_eval(
    table: &CoeffTable,
    inv: &EllipticInvariants,
    z: Complex64,
) -> (Complex64, f64) {
    let mut total = Complex64::new(0.0, 0.0);
    let mut last = 0.0f64;
    let mut factorial = 1.0f64; // (2r+1)!
    let z2 = z * z;
    let mut zpow = z; // z^{2r+1}
    for r in 0..=table.max_r {
        if r > 0 {
            factorial *= (2 * r) as f64 * (2 * r + 1) as f64;
            zpow *= z2;
        }
        let poly = w_r_polynomial(table, r).expect("r <= max_r by construction");
        if poly.is_zero() {
            continue;
        }
        let term = poly.eval(inv.g2, inv.g3) * zpow / factorial;
        total += term;
        last = term.norm();
    }
    (total, last)
}

pub(crate) fn rational_to_f64(c: &BigRational) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        // fall back to a scaled division for magnitudes outside f64 range
        let n = c.numer().to_f64().unwrap_or(f64::INFINITY * sign_of(c));
        let d = c.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

fn sign_of(c: &BigRational) -> f64 {
    if c.is_negative() {
        -1.0
    } else {
        1.0
    }
}

fn pow_rational(base: &BigRational, exp: u32) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..exp {
        out *= base;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(1))
    }

    fn qr(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn low_order_entries_exact() {
        let t = build_coeff_table(14);
        assert_eq!(t.get(0, 0), q(1));
        assert_eq!(t.get(1, 0), q(-1));
        assert_eq!(t.get(0, 1), q(-3));
        assert_eq!(t.get(2, 0), q(-9));
        assert_eq!(t.get(1, 1), q(-18));
        assert_eq!(t.get(3, 0), q(69));
        assert_eq!(t.get(0, 2), q(-54));
    }

    #[test]
    fn w_polynomials_match_known_forms() {
        let t = build_coeff_table(14);
        let w0 = w_r_polynomial(&t, 0).unwrap();
        assert_eq!(w0.coeff(0, 0), q(1));
        assert!(w_r_polynomial(&t, 1).unwrap().is_zero());
        // W_2 = -(1/2) g2, W_3 = -6 g3
        assert_eq!(w_r_polynomial(&t, 2).unwrap().coeff(1, 0), qr(-1, 2));
        assert_eq!(w_r_polynomial(&t, 3).unwrap().coeff(0, 1), q(-6));
        // W_4 = -(9/4) g2^2, W_5 = -18 g2 g3
        assert_eq!(w_r_polynomial(&t, 4).unwrap().coeff(2, 0), qr(-9, 4));
        assert_eq!(w_r_polynomial(&t, 5).unwrap().coeff(1, 1), q(-18));
        // W_6 = (69/8) g2^3 - 216 g3^2
        let w6 = w_r_polynomial(&t, 6).unwrap();
        assert_eq!(w6.coeff(3, 0), qr(69, 8));
        assert_eq!(w6.coeff(0, 2), q(-216));
    }

    #[test]
    fn taylor_coefficients_of_sigma_are_the_printed_ones() {
        // W_r/(2r+1)! for r = 2..5 against the classical z^5..z^11 values.
        let t = build_coeff_table(14);
        let fact = |k: u64| -> BigRational {
            let mut f = BigRational::one();
            for i in 2..=k {
                f *= q(i as i64);
            }
            f
        };
        let coeff = |r: u32, a: u32, b: u32| -> BigRational {
            w_r_polynomial(&t, r).unwrap().coeff(a, b) / fact(2 * r as u64 + 1)
        };
        assert_eq!(coeff(2, 1, 0), qr(-1, 240)); // 2^4 * 3 * 5
        assert_eq!(coeff(3, 0, 1), qr(-1, 840)); // 2^3 * 3 * 5 * 7
        assert_eq!(coeff(4, 2, 0), qr(-1, 161_280)); // 2^9 * 3^2 * 5 * 7
        assert_eq!(coeff(5, 1, 1), qr(-1, 2_217_600)); // 2^7 * 3^2 * 5^2 * 7 * 11
        // z^13: (23 g2^3 - 576 g3^2) / (2^13 * 3^4 * 5^2 * 7 * 11 * 13)
        let den: i64 = 8192 * 81 * 25 * 7 * 11 * 13;
        assert_eq!(coeff(6, 3, 0), qr(23, den));
        assert_eq!(coeff(6, 0, 2), qr(-576, den));
    }

    #[test]
    fn only_weighted_degree_r_monomials() {
        let t = build_coeff_table(14);
        for r in 0..=14 {
            let p = w_r_polynomial(&t, r).unwrap();
            for (&(m, n), _) in p.terms() {
                assert_eq!(2 * m + 3 * n, r);
            }
        }
    }

    #[test]
    fn table_exhausted_error() {
        let t = build_coeff_table(4);
        assert!(matches!(
            w_r_polynomial(&t, 5),
            Err(Error::TableExhausted { r: 5, max_r: 4 })
        ));
    }

    #[test]
    fn proportionality_ratios() {
        let t = build_coeff_table(14);
        let w2 = w_r_polynomial(&t, 2).unwrap();
        let w4 = w_r_polynomial(&t, 4).unwrap();
        // W_4 = -9 W_2^2
        assert_eq!(w4.proportional_ratio(&w2.mul(&w2)), Some(q(-9)));
        let w3 = w_r_polynomial(&t, 3).unwrap();
        let w5 = w_r_polynomial(&t, 5).unwrap();
        // W_5 = -6 W_2 W_3
        assert_eq!(w5.proportional_ratio(&w2.mul(&w3)), Some(q(-6)));
        // W_6 is not proportional to W_2^3
        let w6 = w_r_polynomial(&t, 6).unwrap();
        assert_eq!(w6.proportional_ratio(&w2.mul(&w2).mul(&w2)), None);
    }
}
