//! KLR algebra handle. Elements are stored in the basis `psi_w x^a e(i)` (one fixed reduced
//! word per permutation) and products are computed by acting on the polynomial
//! representation and solving back into the basis.
//!
//! Every element commutes with symmetric polynomials in all variables, and each `Pol e(i)`
//! is free over those with the staircase monomials `x^b`, `b_k < k`, as a basis. So an
//! element is determined by its values on staircase inputs, which makes the equality test
//! exact; the bound reported is the top staircase degree.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::{Arc, Mutex};

use itertools::Itertools;
use num_traits::{One, Zero};

use super::term::{fold, parse_term, Term};
use super::GradedAlgebra;
use crate::error::{Error, Result};
use crate::klr::poly::{monomials_of_degree, Poly};
use crate::klr::{apply_generator, Generator, KlrContext, LabeledPoly};
use crate::linalg::{densify, solve_columns, Q};
use crate::quiver::{DimVector, Quiver};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisKey {
    /// Index of the source word.
    pub src: usize,
    /// Index into the reduced-word table.
    pub perm: usize,
    pub exps: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KlrElem {
    terms: BTreeMap<BasisKey, Q>,
}

impl KlrElem {
    pub fn terms(&self) -> &BTreeMap<BasisKey, Q> {
        &self.terms
    }

    fn insert(&mut self, k: BasisKey, c: Q) {
        let sum = match self.terms.remove(&k) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(k, sum);
        }
    }
}

type EvalKey = (usize, Vec<u32>);

struct Block {
    keys: Vec<BasisKey>,
    evals: Vec<BTreeMap<EvalKey, Q>>,
}

pub struct KlrAlgebra {
    ctx: KlrContext,
    /// Reduced words, identity first, in breadth-first order.
    words: Vec<Vec<usize>>,
    /// `targets[src][perm]`: index of the word reached from `src`.
    targets: Vec<Vec<usize>>,
    psi_degree: Vec<Vec<i64>>,
    staircase: Vec<Poly>,
    blocks: Mutex<HashMap<(usize, usize, i64), Arc<Block>>>,
}

impl KlrAlgebra {
    pub fn new(q: &Quiver, d: &DimVector) -> Result<Self> {
        let ctx = KlrContext::new(q, d)?;
        let n = ctx.n();
        let words = reduced_words(n);
        let mut targets = Vec::new();
        let mut psi_degree = Vec::new();
        for i in ctx.words() {
            let mut t = Vec::new();
            let mut dg = Vec::new();
            for w in &words {
                let mut label = i.clone();
                let mut deg = 0;
                for &r in w.iter().rev() {
                    deg += ctx.generator_degree(&Generator::Psi(r), &label);
                    label.swap(r, r + 1);
                }
                t.push(ctx.word_index(&label).expect("permuted word has the same content"));
                dg.push(deg);
            }
            targets.push(t);
            psi_degree.push(dg);
        }
        let staircase = (0..n)
            .map(|k| 0..k as u32 + 1)
            .multi_cartesian_product()
            .map(|b| {
                let mut e = b;
                e.resize(n, 0);
                Poly::monomial(e, Q::one())
            })
            .collect();
        Ok(KlrAlgebra {
            ctx,
            words,
            targets,
            psi_degree,
            staircase,
            blocks: Mutex::new(HashMap::new()),
        })
    }

    pub fn context(&self) -> &KlrContext {
        &self.ctx
    }

    fn n(&self) -> usize {
        self.ctx.n()
    }

    pub fn target_of(&self, k: &BasisKey) -> usize {
        self.targets[k.src][k.perm]
    }

    pub fn key_degree(&self, k: &BasisKey) -> i64 {
        self.psi_degree[k.src][k.perm] + 2 * k.exps.iter().sum::<u32>() as i64
    }

    pub fn basis_element(&self, k: BasisKey) -> KlrElem {
        let mut e = KlrElem::default();
        e.insert(k, Q::one());
        e
    }

    /// Basis elements `psi_w x^a e(src)` with `|w| <= max_len`, `|a| <= max_x` and even degree.
    pub fn short_basis(&self, max_len: usize, max_x: u32) -> Vec<BasisKey> {
        let mut out = Vec::new();
        for src in 0..self.ctx.words().len() {
            for (perm, w) in self.words.iter().enumerate() {
                if w.len() > max_len {
                    continue;
                }
                for deg in 0..=max_x {
                    for exps in monomials_of_degree(self.n(), deg) {
                        let k = BasisKey { src, perm, exps };
                        if self.key_degree(&k) % 2 == 0 {
                            out.push(k);
                        }
                    }
                }
            }
        }
        out
    }

    fn apply_key(&self, k: &BasisKey, f: &Poly) -> LabeledPoly {
        let mut g = f.clone();
        for (v, &p) in k.exps.iter().enumerate() {
            for _ in 0..p {
                g = g.mul_var(v);
            }
        }
        let mut m = LabeledPoly::single(self.ctx.words()[k.src].clone(), g);
        for &r in self.words[k.perm].iter().rev() {
            m = apply_generator(&self.ctx, &Generator::Psi(r), &m);
        }
        m
    }

    /// Action on a labeled polynomial.
    pub fn act(&self, a: &KlrElem, m: &LabeledPoly) -> LabeledPoly {
        let mut out = LabeledPoly::zero();
        for (k, c) in &a.terms {
            if let Some(f) = m.component(&self.ctx.words()[k.src]) {
                out = out.add(&self.apply_key(k, f).scale(c));
            }
        }
        out
    }

    fn sources(&self, a: &KlrElem) -> BTreeSet<usize> {
        a.terms.keys().map(|k| k.src).collect()
    }

    fn staircase_degree(&self, idx: usize) -> i64 {
        2 * self.staircase[idx].degree().unwrap_or(0) as i64
    }

    fn block(&self, src: usize, tgt: usize, deg: i64) -> Arc<Block> {
        if let Some(b) = self.blocks.lock().unwrap().get(&(src, tgt, deg)) {
            return b.clone();
        }
        let mut keys = Vec::new();
        for perm in 0..self.words.len() {
            if self.targets[src][perm] != tgt {
                continue;
            }
            let rest = deg - self.psi_degree[src][perm];
            if rest < 0 || rest % 2 != 0 {
                continue;
            }
            for exps in monomials_of_degree(self.n(), (rest / 2) as u32) {
                keys.push(BasisKey { src, perm, exps });
            }
        }
        let evals = keys
            .iter()
            .map(|k| {
                let mut v = BTreeMap::new();
                for (idx, f) in self.staircase.iter().enumerate() {
                    for g in self.apply_key(k, f).components().values() {
                        for (e, c) in g.terms() {
                            v.insert((idx, e.clone()), c.clone());
                        }
                    }
                }
                v
            })
            .collect();
        let b = Arc::new(Block { keys, evals });
        self.blocks.lock().unwrap().insert((src, tgt, deg), b.clone());
        b
    }

    /// Recovers an element from its values on the staircase inputs of each source label.
    fn normalize(&self, values: &BTreeMap<usize, Vec<LabeledPoly>>) -> Result<KlrElem> {
        let words = self.ctx.words();
        let mut out = KlrElem::default();
        for (&src, outs) in values {
            let off_src = self.ctx.label_offset(&words[src]);
            let mut pieces: BTreeMap<(usize, i64), BTreeMap<EvalKey, Q>> = BTreeMap::new();
            for (idx, m) in outs.iter().enumerate() {
                for (label, g) in m.components() {
                    let tgt = self.ctx.word_index(label).expect("label in context");
                    let off = self.ctx.label_offset(label) - off_src - self.staircase_degree(idx);
                    for (e, c) in g.terms() {
                        let deg = off + 2 * e.iter().sum::<u32>() as i64;
                        pieces
                            .entry((tgt, deg))
                            .or_default()
                            .insert((idx, e.clone()), c.clone());
                    }
                }
            }
            for ((tgt, deg), target) in pieces {
                let block = self.block(src, tgt, deg);
                let mut vecs = block.evals.clone();
                vecs.push(target);
                let (_, dense) = densify(&vecs);
                let rhs = dense.last().unwrap().clone();
                let coeffs = solve_columns(&dense[..dense.len() - 1], &rhs).ok_or_else(|| {
                    Error::Term(format!(
                        "value outside the span of the basis in block e({:?}) . e({:?}), degree {deg}",
                        words[tgt], words[src]
                    ))
                })?;
                for (k, c) in block.keys.iter().zip(coeffs) {
                    out.insert(k.clone(), c);
                }
            }
        }
        Ok(out)
    }

    fn values(&self, a: &KlrElem) -> BTreeMap<usize, Vec<LabeledPoly>> {
        self.sources(a)
            .into_iter()
            .map(|src| {
                let label = &self.ctx.words()[src];
                let outs = self
                    .staircase
                    .iter()
                    .map(|f| self.act(a, &LabeledPoly::single(label.clone(), f.clone())))
                    .collect();
                (src, outs)
            })
            .collect()
    }

    fn checked_mul(&self, a: &KlrElem, b: &KlrElem) -> Result<KlrElem> {
        let vals = self
            .values(b)
            .into_iter()
            .map(|(src, outs)| (src, outs.iter().map(|m| self.act(a, m)).collect()))
            .collect();
        self.normalize(&vals)
    }

    fn atom(&self, t: &Term) -> Result<KlrElem> {
        let n = self.n();
        let all = 0..self.ctx.words().len();
        let identity = self.words.iter().position(|w| w.is_empty()).unwrap_or(0);
        match t {
            Term::X(k) if *k <= n => {
                let mut e = KlrElem::default();
                for src in all {
                    let mut exps = vec![0; n];
                    exps[k - 1] = 1;
                    e.insert(BasisKey { src, perm: identity, exps }, Q::one());
                }
                Ok(e)
            }
            Term::Psi(r) if *r < n => {
                let perm = self
                    .words
                    .iter()
                    .position(|w| w == &[r - 1])
                    .expect("simple reflections are reduced words");
                let mut e = KlrElem::default();
                for src in all {
                    e.insert(BasisKey { src, perm, exps: vec![0; n] }, Q::one());
                }
                Ok(e)
            }
            Term::E(w) => match self.ctx.word_index(w) {
                Some(k) => Ok(self.idempotent(k)),
                None => Err(Error::Term(format!("e({}) is not a word of the algebra", w.iter().join(",")))),
            },
            other => Err(Error::Term(format!("{other:?} is not a KLR generator on {n} strands"))),
        }
    }
}

/// One reduced word per permutation of `n` letters, by breadth-first search; a word
/// `r_1 .. r_k` stands for `psi_{r_1} .. psi_{r_k}`.
pub fn reduced_words(n: usize) -> Vec<Vec<usize>> {
    let start: Vec<usize> = (0..n).collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start, Vec::new())]);
    let mut out = Vec::new();
    while let Some((p, w)) = queue.pop_front() {
        out.push(w.clone());
        for r in 0..n.saturating_sub(1) {
            let mut q = p.clone();
            q.swap(r, r + 1);
            if seen.insert(q.clone()) {
                let mut v = vec![r];
                v.extend(&w);
                queue.push_back((q, v));
            }
        }
    }
    out
}

impl GradedAlgebra for KlrAlgebra {
    type Elem = KlrElem;

    fn descriptor(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": "klr",
            "quiver": self.ctx.quiver().to_string(),
            "dim": self.ctx.dim().entries(),
        })
    }

    fn idempotent_labels(&self) -> Vec<String> {
        self.ctx
            .words()
            .iter()
            .map(|w| format!("e({})", w.iter().join(",")))
            .collect()
    }

    fn num_idempotents(&self) -> usize {
        self.ctx.words().len()
    }

    fn zero(&self) -> KlrElem {
        KlrElem::default()
    }

    fn idempotent(&self, k: usize) -> KlrElem {
        let identity = self.words.iter().position(|w| w.is_empty()).unwrap_or(0);
        self.basis_element(BasisKey {
            src: k,
            perm: identity,
            exps: vec![0; self.n()],
        })
    }

    fn add(&self, a: &KlrElem, b: &KlrElem) -> KlrElem {
        let mut out = a.clone();
        for (k, c) in &b.terms {
            out.insert(k.clone(), c.clone());
        }
        out
    }

    fn scale(&self, a: &KlrElem, c: &Q) -> KlrElem {
        if c.is_zero() {
            return KlrElem::default();
        }
        KlrElem {
            terms: a.terms.iter().map(|(k, x)| (k.clone(), x * c)).collect(),
        }
    }

    fn mul(&self, a: &KlrElem, b: &KlrElem) -> KlrElem {
        self.checked_mul(a, b)
            .expect("products of basis elements stay in the span of the basis")
    }

    fn is_zero(&self, a: &KlrElem) -> bool {
        a.terms.is_empty()
    }

    fn degrees(&self, a: &KlrElem) -> BTreeSet<i64> {
        a.terms.keys().map(|k| self.key_degree(k)).collect()
    }

    fn in_block(&self, a: &KlrElem, src: usize, tgt: usize) -> bool {
        a.terms.keys().all(|k| k.src == src && self.target_of(k) == tgt)
    }

    fn invert_degree_zero(&self, a: &KlrElem, src: usize, tgt: usize) -> Result<Option<KlrElem>> {
        if a.terms.is_empty() || !self.in_block(a, src, tgt) || self.degrees(a) != BTreeSet::from([0]) {
            return Ok(None);
        }
        let unit = self.idempotent(tgt);
        if src == tgt && a.terms.len() == 1 {
            let (k, c) = a.terms.iter().next().unwrap();
            if unit.terms.contains_key(k) {
                return Ok(Some(self.scale(&unit, &c.recip())));
            }
        }
        let block = self.block(tgt, src, 0);
        let mut vecs: Vec<BTreeMap<BasisKey, Q>> = block
            .keys
            .iter()
            .map(|k| self.checked_mul(a, &self.basis_element(k.clone())).map(|e| e.terms))
            .collect::<Result<_>>()?;
        vecs.push(unit.terms.clone());
        let (_, dense) = densify(&vecs);
        let rhs = dense.last().unwrap().clone();
        let Some(coeffs) = solve_columns(&dense[..dense.len() - 1], &rhs) else {
            return Ok(None);
        };
        let mut b = KlrElem::default();
        for (k, c) in block.keys.iter().zip(coeffs) {
            b.insert(k.clone(), c);
        }
        if self.checked_mul(&b, a)? != self.idempotent(src) {
            return Ok(None);
        }
        Ok(Some(b))
    }

    fn render(&self, a: &KlrElem) -> String {
        if a.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (k, c)) in a.terms.iter().enumerate() {
            let mut factors: Vec<String> = self.words[k.perm].iter().map(|r| format!("psi{}", r + 1)).collect();
            let mono = crate::klr::poly::fmt_monomial(&k.exps);
            if !mono.is_empty() {
                factors.push(mono);
            }
            factors.push(format!("e({})", self.ctx.words()[k.src].iter().join(",")));
            let neg = c < &Q::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if !abs.is_one() {
                factors.insert(0, crate::klr::poly::fmt_rational(&abs));
            }
            match (i, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            s.push_str(&factors.join("*"));
        }
        s
    }

    fn parse(&self, s: &str) -> Result<KlrElem> {
        let t = parse_term(s)?;
        let one = (0..self.num_idempotents()).fold(KlrElem::default(), |acc, k| self.add(&acc, &self.idempotent(k)));
        let err: Mutex<Option<Error>> = Mutex::new(None);
        let mul = |a: &KlrElem, b: &KlrElem| {
            self.checked_mul(a, b).unwrap_or_else(|e| {
                *err.lock().unwrap() = Some(e);
                KlrElem::default()
            })
        };
        let out = fold(
            &t,
            &|t| self.atom(t),
            &one,
            &|a, b| self.add(a, b),
            &mul,
            &|a, c| self.scale(a, c),
        )?;
        match err.into_inner().unwrap() {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    fn short_elements(&self) -> Vec<(usize, usize, KlrElem)> {
        self.short_basis(2, 1)
            .into_iter()
            .map(|k| (k.src, self.target_of(&k), self.basis_element(k)))
            .collect()
    }

    fn equality_bound(&self) -> Option<u32> {
        let n = self.n() as u32;
        Some(n * n.saturating_sub(1) / 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn nil_hecke(n: usize) -> KlrAlgebra {
        KlrAlgebra::new(&"A1".parse().unwrap(), &DimVector::new(vec![n])).unwrap()
    }

    #[test]
    fn reduced_word_counts() {
        assert_eq!(reduced_words(3).len(), 6);
        assert_eq!(reduced_words(4).len(), 24);
        assert_eq!(reduced_words(3).iter().map(|w| w.len()).max(), Some(3));
    }

    #[test]
    fn nil_hecke_relations_in_normal_form() {
        let a = nil_hecke(2);
        let psi = a.parse("psi1").unwrap();
        assert!(a.is_zero(&a.mul(&psi, &psi)));
        let lhs = a.parse("psi1*x1 - x2*psi1").unwrap();
        assert_eq!(lhs, a.parse("1").unwrap());
        assert_eq!(a.degrees(&psi), BTreeSet::from([-2]));
        assert_eq!(a.render(&a.parse("x1*psi1").unwrap()), "e(0,0) + psi1*x2*e(0,0)");
    }

    #[test]
    fn rendering_round_trips() {
        let a = KlrAlgebra::new(&"A2".parse().unwrap(), &DimVector::new(vec![2, 1])).unwrap();
        for s in ["psi1*psi2*x1*e(0,0,1)", "2*x3^2 - 1/3*psi2*e(0,1,0)", "e(1,0,0)*psi1*psi2"] {
            let e = a.parse(s).unwrap();
            assert_eq!(a.parse(&a.render(&e)).unwrap(), e, "{s}");
        }
        assert!(a.parse("psi3").is_err());
        assert!(a.parse("e(0,0,0)").is_err());
    }

    #[test]
    fn degree_zero_inverses() {
        let a = nil_hecke(2);
        let e = a.idempotent(0);
        assert_eq!(a.invert_degree_zero(&a.scale(&e, &q(3)), 0, 0).unwrap(), Some(a.scale(&e, &Q::new(1.into(), 3.into()))));
        let u = a.parse("1 + x1*psi1").unwrap();
        let inv = a.invert_degree_zero(&u, 0, 0).unwrap().unwrap();
        assert_eq!(a.mul(&u, &inv), e);
        // a proper idempotent
        let p = a.parse("x1*psi1").unwrap();
        assert_eq!(a.invert_degree_zero(&p, 0, 0).unwrap(), None);
        assert_eq!(a.invert_degree_zero(&a.parse("x1").unwrap(), 0, 0).unwrap(), None);
    }

    #[test]
    fn mixed_labels_have_no_degree_zero_isomorphisms() {
        let a = KlrAlgebra::new(&"A2".parse().unwrap(), &DimVector::new(vec![1, 1])).unwrap();
        let psi = a.parse("psi1*e(0,1)").unwrap();
        assert_eq!(a.degrees(&psi), BTreeSet::from([1]));
        let sq = a.mul(&psi, &a.parse("psi1*e(1,0)").unwrap());
        assert_eq!(a.degrees(&sq), BTreeSet::from([2]));
        assert!(a.in_block(&psi, 0, 1));
    }
}
