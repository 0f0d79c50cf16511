//! The KLR algebra through its polynomial representation, and the smash product
//! `S ⋊ Q[S_n]`.
//!
//! `R_d` acts on `⊕_i Q[x_1..x_n] 1_i`, the sum running over words `i` of content `d`.
//! Generators:
//! - `e(i)` projects onto the `1_i` component;
//! - `x_k` multiplies by `x_k`;
//! - `psi_r` acts on `f 1_i` by the divided difference in `x_r, x_{r+1}` when
//!   `i_r = i_{r+1}`, and otherwise by `f 1_i -> (s_r f) * prod (x_{r+1} - x_r) 1_{s_r i}`,
//!   the product running over arrows `i_r -> i_{r+1}`.
//!
//! With this sign `psi_r^2 e(i) = Q_{i_r i_{r+1}}(x_r, x_{r+1}) e(i)` where
//! `Q_{vw}(u, t) = prod_{v->w} (u - t) prod_{w->v} (t - u)` and `Q_{vv} = 0`.
//! Elements are never normal-formed; they are compared through their action.

pub mod poly;
pub mod relations;
pub mod smash;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Q;
use crate::quiver::{enumerate_complete_comps, DimVector, Quiver};

pub use poly::Poly;
pub use relations::{relation_suite, RelationReport, RelationVerdict};
pub use smash::{smash_center_dims, smash_mul, smash_slice_dim, SmashElement};

pub type Word = Vec<usize>;

/// Quiver, dimension vector and the words of that content.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KlrContext {
    quiver: Quiver,
    dim: DimVector,
    words: Vec<Word>,
}

impl KlrContext {
    pub fn new(q: &Quiver, d: &DimVector) -> Result<Self> {
        d.check_len(q.num_vertices())?;
        let words = enumerate_complete_comps(d)
            .into_iter()
            .map(|c| c.word().expect("complete"))
            .collect();
        Ok(KlrContext {
            quiver: *q,
            dim: d.clone(),
            words,
        })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn dim(&self) -> &DimVector {
        &self.dim
    }

    /// Number of strands.
    pub fn n(&self) -> usize {
        self.dim.total()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn word_index(&self, w: &[usize]) -> Option<usize> {
        self.words.binary_search_by(|x| x.as_slice().cmp(w)).ok()
    }

    pub fn check_word(&self, w: &[usize]) -> Result<()> {
        match self.word_index(w) {
            Some(_) => Ok(()),
            None => Err(Error::ContextMismatch(format!(
                "word {w:?} does not have content {}",
                self.dim
            ))),
        }
    }

    /// Internal degree of `1_i` that makes the representation graded.
    pub fn label_offset(&self, i: &[usize]) -> i64 {
        let mut off = 0;
        for k in 0..i.len() {
            for l in k + 1..i.len() {
                if i[k] != i[l] {
                    off += self.quiver.arrow_count(i[k], i[l]) as i64;
                }
            }
        }
        off
    }

    /// Degree of `g e(i)`.
    pub fn generator_degree(&self, g: &Generator, i: &[usize]) -> i64 {
        match g {
            Generator::Idempotent(_) => 0,
            Generator::X(_) => 2,
            Generator::Psi(r) => -self.quiver.cartan_unchecked(i[*r], i[*r + 1]),
        }
    }

    /// `Q_{vw}(x_a, x_b)`.
    pub fn q_poly(&self, v: usize, w: usize, a: usize, b: usize) -> Poly {
        let n = self.n();
        if v == w {
            return Poly::zero(n);
        }
        let diff = Poly::var(n, a).sub(&Poly::var(n, b));
        let fwd = self.quiver.arrow_count(v, w);
        let back = self.quiver.arrow_count(w, v);
        diff.pow(fwd).mul(&diff.scale(&-Q::one()).pow(back))
    }

    fn check_generator(&self, g: &Generator) -> Result<()> {
        let n = self.n();
        let ok = match g {
            Generator::Idempotent(w) => return self.check_word(w),
            Generator::X(k) => *k < n,
            Generator::Psi(r) => r + 1 < n,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ContextMismatch(format!("{g} on {n} strands")))
        }
    }
}

/// Generator symbols; strand positions are 0-indexed and rendered 1-indexed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Idempotent(Word),
    X(usize),
    Psi(usize),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Idempotent(w) => {
                let s: Vec<String> = w.iter().map(|v| v.to_string()).collect();
                write!(f, "e({})", s.join(","))
            }
            Generator::X(k) => write!(f, "x{}", k + 1),
            Generator::Psi(r) => write!(f, "psi{}", r + 1),
        }
    }
}

/// `sum_i f_i 1_i`, zero components pruned.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabeledPoly {
    comps: BTreeMap<Word, Poly>,
}

impl LabeledPoly {
    pub fn zero() -> Self {
        LabeledPoly::default()
    }

    pub fn single(label: Word, f: Poly) -> Self {
        let mut m = LabeledPoly::zero();
        m.insert(label, f);
        m
    }

    pub fn insert(&mut self, label: Word, f: Poly) {
        let sum = match self.comps.remove(&label) {
            Some(g) => g.add(&f),
            None => f,
        };
        if !sum.is_zero() {
            self.comps.insert(label, sum);
        }
    }

    pub fn component(&self, label: &[usize]) -> Option<&Poly> {
        self.comps.get(label)
    }

    pub fn components(&self) -> &BTreeMap<Word, Poly> {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn add(&self, other: &LabeledPoly) -> LabeledPoly {
        let mut out = self.clone();
        for (l, f) in &other.comps {
            out.insert(l.clone(), f.clone());
        }
        out
    }

    pub fn sub(&self, other: &LabeledPoly) -> LabeledPoly {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> LabeledPoly {
        let mut out = LabeledPoly::zero();
        for (l, f) in &self.comps {
            out.insert(l.clone(), f.scale(c));
        }
        out
    }

    /// Multiplies every component by the same polynomial.
    pub fn mul_poly(&self, p: &Poly) -> LabeledPoly {
        let mut out = LabeledPoly::zero();
        for (l, f) in &self.comps {
            out.insert(l.clone(), f.mul(p));
        }
        out
    }

    /// Common internal degree `2 deg(f_i) + offset(i)`, if homogeneous and nonzero.
    pub fn homogeneous_degree(&self, ctx: &KlrContext) -> Option<i64> {
        let mut degs = self.comps.iter().map(|(l, f)| {
            f.homogeneous_degree()
                .map(|d| 2 * d as i64 + ctx.label_offset(l))
        });
        let first = degs.next()??;
        for d in degs {
            if d != Some(first) {
                return None;
            }
        }
        Some(first)
    }

    fn check(&self, ctx: &KlrContext) -> Result<()> {
        for (l, f) in &self.comps {
            ctx.check_word(l)?;
            if f.nvars() != ctx.n() {
                return Err(Error::ContextMismatch(format!(
                    "polynomial in {} variables on {} strands",
                    f.nvars(),
                    ctx.n()
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for LabeledPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .comps
            .iter()
            .map(|(l, p)| format!("({p})*{}", Generator::Idempotent(l.clone())))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Action of one generator; the input is assumed to be in context.
pub fn apply_generator(ctx: &KlrContext, g: &Generator, m: &LabeledPoly) -> LabeledPoly {
    let mut out = LabeledPoly::zero();
    match g {
        Generator::Idempotent(w) => {
            if let Some(f) = m.component(w) {
                out.insert(w.clone(), f.clone());
            }
        }
        Generator::X(k) => {
            for (l, f) in &m.comps {
                out.insert(l.clone(), f.mul_var(*k));
            }
        }
        Generator::Psi(r) => {
            let r = *r;
            for (l, f) in &m.comps {
                if l[r] == l[r + 1] {
                    out.insert(l.clone(), f.divided_difference(r, r + 1));
                } else {
                    let mut sl = l.clone();
                    sl.swap(r, r + 1);
                    let n = ctx.n();
                    let factor = Poly::var(n, r + 1)
                        .sub(&Poly::var(n, r))
                        .pow(ctx.quiver.arrow_count(l[r], l[r + 1]));
                    out.insert(sl, f.swap(r, r + 1).mul(&factor));
                }
            }
        }
    }
    out
}

/// Formal linear combination of generator products. Each product is written left to
/// right as usual, so its rightmost generator acts first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KLROperator {
    terms: Vec<(Q, Vec<Generator>)>,
}

impl KLROperator {
    pub fn zero() -> Self {
        KLROperator::default()
    }

    pub fn identity() -> Self {
        KLROperator {
            terms: vec![(Q::one(), Vec::new())],
        }
    }

    pub fn generator(g: Generator) -> Self {
        KLROperator {
            terms: vec![(Q::one(), vec![g])],
        }
    }

    pub fn product(gens: Vec<Generator>) -> Self {
        KLROperator {
            terms: vec![(Q::one(), gens)],
        }
    }

    pub fn e(w: &[usize]) -> Self {
        Self::generator(Generator::Idempotent(w.to_vec()))
    }

    /// `x_k`, 1-indexed as written.
    pub fn x(k: usize) -> Self {
        Self::generator(Generator::X(k - 1))
    }

    /// `psi_r`, 1-indexed as written.
    pub fn psi(r: usize) -> Self {
        Self::generator(Generator::Psi(r - 1))
    }

    pub fn terms(&self) -> &[(Q, Vec<Generator>)] {
        &self.terms
    }

    pub fn add(&self, other: &KLROperator) -> KLROperator {
        let mut acc: BTreeMap<Vec<Generator>, Q> = BTreeMap::new();
        for (c, g) in self.terms.iter().chain(&other.terms) {
            *acc.entry(g.clone()).or_insert_with(Q::zero) += c;
        }
        KLROperator {
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(g, c)| (c, g))
                .collect(),
        }
    }

    pub fn sub(&self, other: &KLROperator) -> KLROperator {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> KLROperator {
        KLROperator {
            terms: self
                .terms
                .iter()
                .map(|(x, g)| (x * c, g.clone()))
                .filter(|(x, _)| !x.is_zero())
                .collect(),
        }
    }

    /// `self * other`: apply `other`, then `self`.
    pub fn then(&self, other: &KLROperator) -> KLROperator {
        let mut out = KLROperator::zero();
        for (a, ga) in &self.terms {
            for (b, gb) in &other.terms {
                let mut g = ga.clone();
                g.extend(gb.iter().cloned());
                out = out.add(&KLROperator {
                    terms: vec![(a * b, g)],
                });
            }
        }
        out
    }
}

impl fmt::Display for KLROperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, g)| {
                let mut factors: Vec<String> = Vec::new();
                if !c.is_one() || g.is_empty() {
                    factors.push(poly::fmt_rational(c));
                }
                factors.extend(g.iter().map(|x| x.to_string()));
                factors.join("*")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Action of an operator on a labeled polynomial.
pub fn act(ctx: &KlrContext, op: &KLROperator, m: &LabeledPoly) -> Result<LabeledPoly> {
    m.check(ctx)?;
    for (_, gens) in &op.terms {
        for g in gens {
            ctx.check_generator(g)?;
        }
    }
    Ok(act_unchecked(ctx, op, m))
}

pub(crate) fn act_unchecked(ctx: &KlrContext, op: &KLROperator, m: &LabeledPoly) -> LabeledPoly {
    let mut out = LabeledPoly::zero();
    for (c, gens) in &op.terms {
        let mut v = m.clone();
        for g in gens.iter().rev() {
            if v.is_zero() {
                break;
            }
            v = apply_generator(ctx, g, &v);
        }
        out = out.add(&v.scale(c));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn ctx(q: &str, d: &[usize]) -> KlrContext {
        KlrContext::new(&q.parse().unwrap(), &DimVector::new(d.to_vec())).unwrap()
    }

    #[test]
    fn nil_hecke_psi() {
        let c = ctx("A1", &[2]);
        let x1 = LabeledPoly::single(vec![0, 0], Poly::var(2, 0));
        let one = LabeledPoly::single(vec![0, 0], Poly::one(2));
        assert_eq!(act(&c, &KLROperator::psi(1), &x1).unwrap(), one);
        assert!(act(&c, &KLROperator::psi(1), &one).unwrap().is_zero());
    }

    #[test]
    fn quadratic_relation_in_a2() {
        let c = ctx("A2", &[1, 1]);
        let psi2 = KLROperator::psi(1).then(&KLROperator::psi(1));
        for (w, v) in [(vec![0, 1], (0, 1)), (vec![1, 0], (1, 0))] {
            let m = LabeledPoly::single(w.clone(), Poly::one(2));
            let got = act(&c, &psi2, &m).unwrap();
            let want = LabeledPoly::single(w, c.q_poly(v.0, v.1, 0, 1));
            assert_eq!(got, want);
        }
        // the two directions are x1 - x2 and x2 - x1
        assert_eq!(c.q_poly(0, 1, 0, 1), Poly::var(2, 0).sub(&Poly::var(2, 1)));
        assert_eq!(c.q_poly(1, 0, 0, 1), Poly::var(2, 1).sub(&Poly::var(2, 0)));
    }

    #[test]
    fn cyclic_two_quadratic_has_two_factors() {
        let c = ctx("cyclic:2", &[1, 1]);
        let p = c.q_poly(0, 1, 0, 1);
        assert_eq!(p.homogeneous_degree(), Some(2));
    }

    #[test]
    fn context_mismatch() {
        let c = ctx("A2", &[1, 1]);
        let bad = LabeledPoly::single(vec![0, 0], Poly::one(2));
        assert!(matches!(act(&c, &KLROperator::x(1), &bad), Err(Error::ContextMismatch(_))));
        let ok = LabeledPoly::single(vec![0, 1], Poly::one(2));
        assert!(act(&c, &KLROperator::psi(2), &ok).is_err());
    }

    #[test]
    fn operator_rendering() {
        let op = KLROperator::psi(1)
            .then(&KLROperator::x(2))
            .then(&KLROperator::e(&[0, 1]))
            .scale(&q(2))
            .add(&KLROperator::identity());
        assert_eq!(op.to_string(), "1 + 2*psi1*x2*e(0,1)");
    }

    #[test]
    fn label_offsets() {
        let c = ctx("A2", &[1, 1]);
        assert_eq!(c.label_offset(&[0, 1]), 1);
        assert_eq!(c.label_offset(&[1, 0]), 0);
    }
}
