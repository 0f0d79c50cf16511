//! Truncated Laurent series in the half-twist variable `u`, with `q = u^2`.
//!
//! A series stores exact integer coefficients for every exponent up to and including its
//! truncation order `trunc`; everything above is unknown. Sums keep the smaller order;
//! a product of `a` and `b` is exact up to `min(trunc_a + val_b, trunc_b + val_a)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

/// Default truncation order in `u`.
pub const DEFAULT_TRUNC: i64 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HalfLaurentSeries {
    /// Exponent of `coeffs[0]`; for the zero series this is `trunc + 1`.
    min_exp: i64,
    coeffs: Vec<i64>,
    trunc: i64,
}

impl HalfLaurentSeries {
    pub fn zero(trunc: i64) -> Self {
        HalfLaurentSeries {
            min_exp: trunc + 1,
            coeffs: Vec::new(),
            trunc,
        }
    }

    pub fn one(trunc: i64) -> Self {
        Self::monomial(0, 1, trunc)
    }

    /// `c * u^exp`, known up to `trunc`.
    pub fn monomial(exp: i64, c: i64, trunc: i64) -> Self {
        Self::from_coeffs(exp, vec![c], trunc)
    }

    pub fn from_coeffs(min_exp: i64, coeffs: Vec<i64>, trunc: i64) -> Self {
        let mut s = HalfLaurentSeries {
            min_exp,
            coeffs,
            trunc,
        };
        s.normalize();
        s
    }

    /// Builds a series from `exponent -> coefficient` pairs; repeated exponents add up.
    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(terms: I, trunc: i64) -> Self {
        let mut map: BTreeMap<i64, i64> = BTreeMap::new();
        for (e, c) in terms {
            if e <= trunc {
                *map.entry(e).or_insert(0) += c;
            }
        }
        let Some((&lo, _)) = map.iter().next() else {
            return Self::zero(trunc);
        };
        let hi = *map.keys().next_back().expect("nonempty");
        let mut coeffs = vec![0; (hi - lo + 1) as usize];
        for (e, c) in map {
            coeffs[(e - lo) as usize] = c;
        }
        Self::from_coeffs(lo, coeffs, trunc)
    }

    fn normalize(&mut self) {
        let keep = (self.trunc - self.min_exp + 1).max(0) as usize;
        self.coeffs.truncate(keep);
        let lead = self.coeffs.iter().take_while(|&&c| c == 0).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.min_exp = self.trunc + 1;
            return;
        }
        self.coeffs.drain(..lead);
        self.min_exp += lead as i64;
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    /// Lowest exponent with a nonzero coefficient (`trunc + 1` for zero).
    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `u^exp`, or `None` above the truncation order.
    pub fn coeff(&self, exp: i64) -> Option<i64> {
        if exp > self.trunc {
            return None;
        }
        if exp < self.min_exp {
            return Some(0);
        }
        Some(self.coeffs.get((exp - self.min_exp) as usize).copied().unwrap_or(0))
    }

    /// Nonzero `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(k, &c)| (self.min_exp + k as i64, c))
    }

    /// Lowers the truncation order (never raises it).
    pub fn truncate(&self, trunc: i64) -> Self {
        Self::from_coeffs(self.min_exp, self.coeffs.clone(), trunc.min(self.trunc))
    }

    /// Multiplication by the exact monomial `u^k`.
    pub fn shift(&self, k: i64) -> Self {
        HalfLaurentSeries {
            min_exp: self.min_exp + k,
            coeffs: self.coeffs.clone(),
            trunc: self.trunc + k,
        }
    }

    pub fn scale(&self, c: i64) -> Self {
        Self::from_coeffs(
            self.min_exp,
            self.coeffs.iter().map(|x| x * c).collect(),
            self.trunc,
        )
    }

    /// Reads a series in `q` as a series in `u`, doubling every exponent.
    pub fn q_to_u(&self) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (2 * e, c)), 2 * self.trunc + 1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let trunc = self.trunc.min(other.trunc);
        Self::from_terms(self.terms().chain(other.terms()), trunc)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let trunc = (self.trunc + other.min_exp).min(other.trunc + self.min_exp);
        if self.is_zero() || other.is_zero() {
            return Self::zero(trunc);
        }
        let mut coeffs = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::from_coeffs(self.min_exp + other.min_exp, coeffs, trunc)
    }

    /// Inverse of a series whose lowest coefficient is `1` or `-1`.
    pub fn invert_unit(&self) -> Result<Self> {
        let lead = *self
            .coeffs
            .first()
            .ok_or_else(|| Error::NotInvertible("zero series".into()))?;
        if lead != 1 && lead != -1 {
            return Err(Error::NotInvertible(format!(
                "leading coefficient {lead} is not a unit"
            )));
        }
        let e = self.min_exp;
        let rel = self.trunc - e;
        let len = (rel + 1).max(0) as usize;
        // s = u^e * lead * (1 + t), solve b * (s / u^e) = 1 coefficientwise
        let a: Vec<i64> = (0..len).map(|k| self.coeffs.get(k).copied().unwrap_or(0)).collect();
        let mut b = vec![0i64; len];
        for k in 0..len {
            let mut acc = if k == 0 { 1 } else { 0 };
            for j in 1..=k {
                acc -= a[j] * b[k - j];
            }
            b[k] = acc * lead;
        }
        Ok(Self::from_coeffs(-e, b, rel - e))
    }

    /// First exponent (up to the common truncation order) where the two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<i64> {
        let trunc = self.trunc.min(other.trunc);
        let lo = self.min_exp.min(other.min_exp);
        (lo..=trunc).find(|&e| self.coeff(e) != other.coeff(e))
    }

    /// Agreement at every exponent up to `trunc` (both must be known that far).
    pub fn agrees_to(&self, other: &Self, trunc: i64) -> bool {
        self.trunc >= trunc
            && other.trunc >= trunc
            && self.truncate(trunc).first_difference(&other.truncate(trunc)).is_none()
    }

    /// Value at a real point, summing the known coefficients.
    pub fn eval_f64(&self, u: f64) -> f64 {
        self.terms().map(|(e, c)| c as f64 * u.powi(e as i32)).sum()
    }
}

/// `prod_{k=1}^{m} (1 - u^{2k})^{-1}`: the Chow ring of the classifying space of `GL_m`.
pub fn bgl(m: usize, trunc: i64) -> HalfLaurentSeries {
    (1..=m as i64).fold(HalfLaurentSeries::one(trunc), |acc, k| {
        let factor = HalfLaurentSeries::from_terms([(0, 1), (2 * k, -1)], trunc)
            .invert_unit()
            .expect("constant term 1");
        acc.mul(&factor)
    })
}

impl Add for &HalfLaurentSeries {
    type Output = HalfLaurentSeries;
    fn add(self, rhs: Self) -> HalfLaurentSeries {
        HalfLaurentSeries::add(self, rhs)
    }
}

impl Sub for &HalfLaurentSeries {
    type Output = HalfLaurentSeries;
    fn sub(self, rhs: Self) -> HalfLaurentSeries {
        HalfLaurentSeries::add(self, &rhs.scale(-1))
    }
}

impl Mul for &HalfLaurentSeries {
    type Output = HalfLaurentSeries;
    fn mul(self, rhs: Self) -> HalfLaurentSeries {
        HalfLaurentSeries::mul(self, rhs)
    }
}

impl Neg for &HalfLaurentSeries {
    type Output = HalfLaurentSeries;
    fn neg(self) -> HalfLaurentSeries {
        self.scale(-1)
    }
}

impl fmt::Display for HalfLaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let (sign, mag) = if c < 0 { ("-", -c) } else { ("+", c) };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (e, mag) {
                (0, m) => write!(f, "{m}")?,
                (e, 1) => write!(f, "u^{e}")?,
                (e, m) => write!(f, "{m}·u^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(u^{})", self.trunc + 1)
    }
}

impl Serialize for HalfLaurentSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("HalfLaurentSeries", 2)?;
        st.serialize_field("trunc", &self.trunc)?;
        st.serialize_field("coeffs", &SortedTerms(self.terms().collect()))?;
        st.end()
    }
}

/// Serializes exponent -> coefficient in increasing exponent order.
struct SortedTerms(Vec<(i64, i64)>);

impl Serialize for SortedTerms {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_map(self.0.iter().map(|(e, c)| (e.to_string(), c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_minus_u2(n: i64) -> HalfLaurentSeries {
        HalfLaurentSeries::from_terms([(0, 1), (2, -1)], n)
    }

    #[test]
    fn geometric_series() {
        let inv = one_minus_u2(10).invert_unit().unwrap();
        let expected: Vec<i64> = (0..=10).map(|e| if e % 2 == 0 { 1 } else { 0 }).collect();
        let got: Vec<i64> = (0..=10).map(|e| inv.coeff(e).unwrap()).collect();
        assert_eq!(got, expected);
        assert_eq!(&one_minus_u2(10) * &inv, HalfLaurentSeries::one(10));
    }

    #[test]
    fn laurent_monomials() {
        let a = HalfLaurentSeries::monomial(-2, 1, 24);
        let b = HalfLaurentSeries::monomial(2, 1, 24);
        let p = &a * &b;
        assert_eq!(p.coeff(0), Some(1));
        assert_eq!(p.terms().count(), 1);
        assert_eq!(a.shift(2).coeff(0), Some(1));
    }

    #[test]
    fn truncation_propagates() {
        let a = HalfLaurentSeries::from_terms([(-4, 1), (0, 3)], 10);
        let b = HalfLaurentSeries::from_terms([(2, 1)], 8);
        let p = &a * &b;
        // exact up to min(10 + 2, 8 - 4)
        assert_eq!(p.trunc(), 4);
        let s = &a + &b;
        assert_eq!(s.trunc(), 8);
        assert_eq!(a.coeff(11), None);
        assert_eq!(a.coeff(-10), Some(0));
    }

    #[test]
    fn inverse_of_laurent_unit() {
        let s = HalfLaurentSeries::from_terms([(-2, -1), (0, 1), (1, 5)], 12);
        let inv = s.invert_unit().unwrap();
        let prod = &s * &inv;
        assert!(prod.agrees_to(&HalfLaurentSeries::one(prod.trunc()), prod.trunc()));
        assert!(prod.trunc() >= 8);
        assert!(HalfLaurentSeries::from_terms([(0, 2)], 5).invert_unit().is_err());
        assert!(HalfLaurentSeries::zero(5).invert_unit().is_err());
    }

    fn partitions_with_max_part(k: usize, m: usize) -> i64 {
        fn rec(k: usize, max: usize) -> i64 {
            if k == 0 {
                return 1;
            }
            (1..=max.min(k)).map(|p| rec(k - p, p)).sum()
        }
        rec(k, m)
    }

    #[test]
    fn bgl_counts_partitions() {
        assert_eq!(bgl(0, 24), HalfLaurentSeries::one(24));
        let b2 = bgl(2, 8);
        let got: Vec<i64> = (0..=8).map(|e| b2.coeff(e).unwrap()).collect();
        assert_eq!(got, vec![1, 0, 1, 0, 2, 0, 2, 0, 3]);
        for m in 0..=4 {
            let b = bgl(m, 24);
            for k in 0..=12 {
                assert_eq!(b.coeff(2 * k as i64), Some(partitions_with_max_part(k, m)));
                if k < 12 {
                    assert_eq!(b.coeff(2 * k as i64 + 1), Some(0));
                }
            }
        }
    }

    #[test]
    fn evaluation_smoke() {
        let u = 0.5f64;
        let a = bgl(2, 60);
        let b = HalfLaurentSeries::from_terms([(0, 1), (1, 3), (4, -2)], 60);
        let exact_a = 1.0 / ((1.0 - u * u) * (1.0 - u.powi(4)));
        assert!((a.eval_f64(u) - exact_a).abs() < 1e-12);
        let prod = &a * &b;
        assert!((prod.eval_f64(u) - a.eval_f64(u) * b.eval_f64(u)).abs() < 1e-9);
    }

    #[test]
    fn q_substitution_doubles_exponents() {
        let s = HalfLaurentSeries::from_terms([(0, 1), (1, 2), (3, -1)], 5);
        let u = s.q_to_u();
        assert_eq!(u.coeff(2), Some(2));
        assert_eq!(u.coeff(6), Some(-1));
        assert_eq!(u.coeff(3), Some(0));
        assert_eq!(u.trunc(), 11);
    }

    #[test]
    fn rendering() {
        let s = HalfLaurentSeries::from_terms([(-2, 1), (0, 1), (2, -3)], 4);
        assert_eq!(s.to_string(), "u^-2 + 1 - 3·u^2 + O(u^5)");
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"trunc":4,"coeffs":{"-2":1,"0":1,"2":-3}}"#);
    }
}
