//! The smash product `S ⋊ Q[S_n]` of a polynomial ring with the symmetric group, with
//! `(f w)(g v) = f w(g) (wv)` and `w(x_k) = x_{w(k)}`.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Signed};

use super::poly::{fmt_monomial, fmt_rational, monomials_of_degree, Poly};
use crate::error::{Error, Result};
use crate::linalg::{sparse_rank, Q};

/// Permutation in one-line notation, 0-indexed: `k -> w[k]`.
pub type Perm = Vec<usize>;

type Coordinates = BTreeMap<(usize, Perm, Vec<u32>), Q>;

pub fn compose(w: &[usize], v: &[usize]) -> Perm {
    v.iter().map(|&k| w[k]).collect()
}

pub fn identity_perm(n: usize) -> Perm {
    (0..n).collect()
}

pub fn simple_reflection(n: usize, r: usize) -> Perm {
    let mut p = identity_perm(n);
    p.swap(r, r + 1);
    p
}

/// `sum_w f_w w`, zero coefficients pruned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmashElement {
    n: usize,
    terms: BTreeMap<Perm, Poly>,
}

impl SmashElement {
    pub fn zero(n: usize) -> Self {
        SmashElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::term(Poly::one(n), identity_perm(n))
    }

    pub fn term(f: Poly, w: Perm) -> Self {
        let n = w.len();
        let mut e = Self::zero(n);
        e.insert(w, f);
        e
    }

    pub fn scalar(n: usize, c: Q) -> Self {
        Self::term(Poly::constant(n, c), identity_perm(n))
    }

    pub fn perm(w: Perm) -> Self {
        let n = w.len();
        Self::term(Poly::one(n), w)
    }

    /// `x_k`, 0-indexed.
    pub fn x(n: usize, k: usize) -> Self {
        Self::term(Poly::var(n, k), identity_perm(n))
    }

    /// The simple transposition exchanging `r` and `r + 1`, 0-indexed.
    pub fn s(n: usize, r: usize) -> Self {
        Self::perm(simple_reflection(n, r))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Perm, Poly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, w: Perm, f: Poly) {
        let sum = match self.terms.remove(&w) {
            Some(g) => g.add(&f),
            None => f,
        };
        if !sum.is_zero() {
            self.terms.insert(w, sum);
        }
    }

    pub fn add(&self, other: &SmashElement) -> SmashElement {
        let mut out = self.clone();
        for (w, f) in &other.terms {
            out.insert(w.clone(), f.clone());
        }
        out
    }

    pub fn sub(&self, other: &SmashElement) -> SmashElement {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> SmashElement {
        let mut out = Self::zero(self.n);
        for (w, f) in &self.terms {
            out.insert(w.clone(), f.scale(c));
        }
        out
    }

    /// Pieces of fixed polynomial degree, keyed by internal degree (twice the polynomial
    /// degree).
    pub fn homogeneous_parts(&self) -> BTreeMap<i64, SmashElement> {
        let mut out: BTreeMap<i64, SmashElement> = BTreeMap::new();
        for (w, f) in &self.terms {
            for (e, c) in f.terms() {
                let deg = 2 * e.iter().sum::<u32>() as i64;
                out.entry(deg)
                    .or_insert_with(|| Self::zero(self.n))
                    .insert(w.clone(), Poly::monomial(e.clone(), c.clone()));
            }
        }
        out
    }

    /// Coefficients `c_w` if every polynomial coefficient is constant.
    pub fn as_group_algebra(&self) -> Option<BTreeMap<Perm, Q>> {
        self.terms
            .iter()
            .map(|(w, f)| f.as_constant().map(|c| (w.clone(), c)))
            .collect()
    }
}

/// Bilinear extension of `(f w)(g v) = f w(g) (wv)`.
pub fn smash_mul(a: &SmashElement, b: &SmashElement) -> Result<SmashElement> {
    if a.n != b.n {
        return Err(Error::ContextMismatch(format!(
            "smash elements on {} and {} strands",
            a.n, b.n
        )));
    }
    Ok(mul_unchecked(a, b))
}

pub(crate) fn mul_unchecked(a: &SmashElement, b: &SmashElement) -> SmashElement {
    let mut out = SmashElement::zero(a.n);
    for (w, f) in &a.terms {
        for (v, g) in &b.terms {
            out.insert(compose(w, v), f.mul(&g.permute(w)));
        }
    }
    out
}

impl fmt::Display for SmashElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let id = identity_perm(self.n);
        let mut first = true;
        for (w, p) in &self.terms {
            let perm = if *w == id {
                String::new()
            } else {
                format!("[{}]", w.iter().map(|k| (k + 1).to_string()).join(","))
            };
            for (e, c) in p.terms() {
                let mono = fmt_monomial(e);
                let mut factors: Vec<String> = Vec::new();
                if !c.abs().is_one() || (mono.is_empty() && perm.is_empty()) {
                    factors.push(fmt_rational(&c.abs()));
                }
                if !mono.is_empty() {
                    factors.push(mono);
                }
                if !perm.is_empty() {
                    factors.push(perm.clone());
                }
                let sign = if c.is_negative() { "-" } else { "+" };
                if first {
                    if c.is_negative() {
                        write!(f, "-")?;
                    }
                    first = false;
                } else {
                    write!(f, " {sign} ")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// `n! * C(deg + n - 1, n - 1)`, by counting pairs (monomial, permutation).
pub fn smash_slice_dim(n: usize, deg: u32) -> usize {
    monomials_of_degree(n, deg).len() * (0..n).permutations(n).count()
}

/// Dimensions of the centralizer of `x_1, s_1, ..., s_{n-1}` in each degree slice.
pub fn smash_center_dims(n: usize, maxdeg: u32) -> Vec<usize> {
    let perms: Vec<Perm> = (0..n).permutations(n).collect();
    let mut gens = vec![SmashElement::x(n, 0)];
    gens.extend((0..n.saturating_sub(1)).map(|r| SmashElement::s(n, r)));
    (0..=maxdeg)
        .map(|deg| {
            let basis: Vec<SmashElement> = monomials_of_degree(n, deg)
                .into_iter()
                .cartesian_product(&perms)
                .map(|(m, w)| SmashElement::term(Poly::monomial(m, Q::one()), w.clone()))
                .collect();
            let images: Vec<Coordinates> = basis
                .iter()
                .map(|b| {
                    let mut v = BTreeMap::new();
                    for (idx, g) in gens.iter().enumerate() {
                        let comm = mul_unchecked(b, g).sub(&mul_unchecked(g, b));
                        for (w, f) in comm.terms() {
                            for (e, c) in f.terms() {
                                v.insert((idx, w.clone(), e.clone()), c.clone());
                            }
                        }
                    }
                    v
                })
                .collect();
            basis.len() - sparse_rank(&images)
        })
        .collect()
}

/// Whether `z` commutes with every generator.
pub fn is_central(z: &SmashElement) -> bool {
    let n = z.n;
    let mut gens = vec![SmashElement::x(n, 0)];
    gens.extend((0..n.saturating_sub(1)).map(|r| SmashElement::s(n, r)));
    gens.iter()
        .all(|g| mul_unchecked(z, g).sub(&mul_unchecked(g, z)).is_zero())
}
