//! Bounded complexes of graded free right modules over a locally unital graded algebra.
//!
//! A generator `(i, s, c)` stands for `e_i A<s>` in cohomological degree `c`. Internal
//! shifts count Tate twists, so one unit of shift is two units of the algebra grading
//! (where `x_k` has degree 2). A differential entry from generator `k` to generator `l`
//! is left multiplication by an element of `e_{i_l} A e_{i_k}` of degree
//! `2 (s_l - s_k)`, and composites are ordinary matrix products.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Q;

pub mod json;
pub mod klr_handle;
pub mod random;
pub mod smash_handle;
pub mod term;

pub use klr_handle::{KlrAlgebra, KlrElem};
pub use smash_handle::SmashAlgebra;

/// Element arithmetic of a graded algebra with distinguished idempotents.
pub trait GradedAlgebra: Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    /// JSON description that rebuilds the handle.
    fn descriptor(&self) -> serde_json::Value;
    fn idempotent_labels(&self) -> Vec<String>;
    fn num_idempotents(&self) -> usize {
        self.idempotent_labels().len()
    }
    fn zero(&self) -> Self::Elem;
    fn idempotent(&self, k: usize) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, a: &Self::Elem, c: &Q) -> Self::Elem;
    /// `a b`, so `b` acts first.
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Degrees of the nonzero homogeneous components, in algebra units.
    fn degrees(&self, a: &Self::Elem) -> BTreeSet<i64>;
    /// Whether `a = e_tgt a e_src`.
    fn in_block(&self, a: &Self::Elem, src: usize, tgt: usize) -> bool {
        let b = self.mul(&self.idempotent(tgt), &self.mul(a, &self.idempotent(src)));
        b == *a
    }
    /// For `a` in degree 0 of `e_tgt A e_src`, a two-sided inverse in `e_src A e_tgt`.
    fn invert_degree_zero(&self, a: &Self::Elem, src: usize, tgt: usize) -> Result<Option<Self::Elem>>;
    fn render(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;
    /// Largest input degree used by the equality test, when equality is decided by
    /// evaluation on finitely many inputs.
    fn equality_bound(&self) -> Option<u32>;
    /// Short homogeneous elements of even degree, as `(src, tgt, element)`, used to build
    /// random complexes.
    fn short_elements(&self) -> Vec<(usize, usize, Self::Elem)>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.scale(b, &-Q::from_integer(1.into())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GenSpec {
    pub idem: usize,
    pub shift: i64,
    pub degree: i64,
}

impl GenSpec {
    pub fn new(idem: usize, shift: i64, degree: i64) -> Self {
        GenSpec { idem, shift, degree }
    }
}

/// Sparse matrix keyed by `(row, col)` = `(target, source)`.
pub type Matrix<E> = BTreeMap<(usize, usize), E>;

#[derive(Debug, Clone, PartialEq)]
pub struct GradedComplex<E> {
    pub gens: Vec<GenSpec>,
    pub diff: Matrix<E>,
}

impl<E: Clone> GradedComplex<E> {
    pub fn zero() -> Self {
        GradedComplex {
            gens: Vec::new(),
            diff: BTreeMap::new(),
        }
    }

    pub fn new(gens: Vec<GenSpec>, diff: Matrix<E>) -> Self {
        GradedComplex { gens, diff }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn degrees(&self) -> BTreeSet<i64> {
        self.gens.iter().map(|g| g.degree).collect()
    }
}

/// Degree-0 map of complexes; `entries` keyed by `(target generator, source generator)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainMap<E> {
    pub source: GradedComplex<E>,
    pub target: GradedComplex<E>,
    pub entries: Matrix<E>,
}

pub fn mat_mul<A: GradedAlgebra>(alg: &A, a: &Matrix<A::Elem>, b: &Matrix<A::Elem>) -> Matrix<A::Elem> {
    let mut by_row: BTreeMap<usize, Vec<(usize, &A::Elem)>> = BTreeMap::new();
    for ((r, c), e) in b {
        by_row.entry(*r).or_default().push((*c, e));
    }
    let mut out: Matrix<A::Elem> = BTreeMap::new();
    for ((r, k), x) in a {
        if let Some(row) = by_row.get(k) {
            for (c, y) in row {
                let p = alg.mul(x, y);
                accumulate(alg, &mut out, (*r, *c), p);
            }
        }
    }
    out
}

fn accumulate<A: GradedAlgebra>(alg: &A, m: &mut Matrix<A::Elem>, key: (usize, usize), v: A::Elem) {
    let sum = match m.remove(&key) {
        Some(old) => alg.add(&old, &v),
        None => v,
    };
    if !alg.is_zero(&sum) {
        m.insert(key, sum);
    }
}

fn check_entry<A: GradedAlgebra>(alg: &A, e: &A::Elem, src: &GenSpec, tgt: &GenSpec, what: &str) -> Result<()> {
    if !alg.in_block(e, src.idem, tgt.idem) {
        return Err(Error::InvalidComplex(format!(
            "{what} entry {} is not in e_{} A e_{}",
            alg.render(e),
            tgt.idem,
            src.idem
        )));
    }
    let want = 2 * (tgt.shift - src.shift);
    let degs = alg.degrees(e);
    if degs.iter().any(|&d| d != want) {
        return Err(Error::InvalidComplex(format!(
            "{what} entry {} has degrees {degs:?}, expected {want}",
            alg.render(e)
        )));
    }
    Ok(())
}

/// Checks generator ranges, entry placement and degrees, and `d d = 0`; the error names
/// the first violation.
pub fn validate<A: GradedAlgebra>(alg: &A, c: &GradedComplex<A::Elem>) -> Result<()> {
    let n = c.gens.len();
    for (k, g) in c.gens.iter().enumerate() {
        if g.idem >= alg.num_idempotents() {
            return Err(Error::InvalidComplex(format!("generator {k} has unknown idempotent {}", g.idem)));
        }
    }
    for (&(l, k), e) in &c.diff {
        if l >= n || k >= n {
            return Err(Error::InvalidComplex(format!("entry ({l}, {k}) out of range")));
        }
        if alg.is_zero(e) {
            return Err(Error::InvalidComplex(format!("entry ({l}, {k}) is zero")));
        }
        let (src, tgt) = (&c.gens[k], &c.gens[l]);
        if tgt.degree != src.degree + 1 {
            return Err(Error::InvalidComplex(format!(
                "entry ({l}, {k}) joins degrees {} and {}",
                src.degree, tgt.degree
            )));
        }
        check_entry(alg, e, src, tgt, &format!("({l}, {k})"))?;
    }
    let dd = mat_mul(alg, &c.diff, &c.diff);
    if let Some(((l, k), e)) = dd.iter().next() {
        return Err(Error::InvalidComplex(format!(
            "d^2 has entry ({l}, {k}) = {}",
            alg.render(e)
        )));
    }
    Ok(())
}

/// Checks that `f` is a degree-0 chain map between valid complexes.
pub fn validate_chain_map<A: GradedAlgebra>(alg: &A, f: &ChainMap<A::Elem>) -> Result<()> {
    validate(alg, &f.source)?;
    validate(alg, &f.target)?;
    for (&(l, k), e) in &f.entries {
        let (Some(src), Some(tgt)) = (f.source.gens.get(k), f.target.gens.get(l)) else {
            return Err(Error::NotChainMap(format!("entry ({l}, {k}) out of range")));
        };
        if src.degree != tgt.degree {
            return Err(Error::NotChainMap(format!("entry ({l}, {k}) changes degree")));
        }
        check_entry(alg, e, src, tgt, &format!("map ({l}, {k})"))
            .map_err(|e| Error::NotChainMap(e.to_string()))?;
    }
    let lhs = mat_mul(alg, &f.target.diff, &f.entries);
    let rhs = mat_mul(alg, &f.entries, &f.source.diff);
    let keys: BTreeSet<_> = lhs.keys().chain(rhs.keys()).copied().collect();
    for key in keys {
        let a = lhs.get(&key).cloned().unwrap_or_else(|| alg.zero());
        let b = rhs.get(&key).cloned().unwrap_or_else(|| alg.zero());
        if a != b {
            return Err(Error::NotChainMap(format!("d f != f d at {key:?}")));
        }
    }
    Ok(())
}

/// Cohomological shift `[n]`: degrees drop by `n`, the differential picks up `(-1)^n`.
pub fn shift<A: GradedAlgebra>(alg: &A, c: &GradedComplex<A::Elem>, n: i64) -> GradedComplex<A::Elem> {
    let gens = c
        .gens
        .iter()
        .map(|g| GenSpec::new(g.idem, g.shift, g.degree - n))
        .collect();
    let diff = if n % 2 == 0 {
        c.diff.clone()
    } else {
        let m1 = -Q::from_integer(1.into());
        c.diff.iter().map(|(k, e)| (*k, alg.scale(e, &m1))).collect()
    };
    GradedComplex { gens, diff }
}

/// Internal twist `<n>`.
pub fn twist<E: Clone>(c: &GradedComplex<E>, n: i64) -> GradedComplex<E> {
    GradedComplex {
        gens: c
            .gens
            .iter()
            .map(|g| GenSpec::new(g.idem, g.shift + n, g.degree))
            .collect(),
        diff: c.diff.clone(),
    }
}

pub fn direct_sum<E: Clone>(a: &GradedComplex<E>, b: &GradedComplex<E>) -> GradedComplex<E> {
    let off = a.gens.len();
    let mut gens = a.gens.clone();
    gens.extend(b.gens.iter().copied());
    let mut diff = a.diff.clone();
    diff.extend(b.diff.iter().map(|(&(l, k), e)| ((l + off, k + off), e.clone())));
    GradedComplex { gens, diff }
}

pub fn identity_map<A: GradedAlgebra>(alg: &A, c: &GradedComplex<A::Elem>) -> ChainMap<A::Elem> {
    let entries = c
        .gens
        .iter()
        .enumerate()
        .map(|(k, g)| ((k, k), alg.idempotent(g.idem)))
        .collect();
    ChainMap {
        source: c.clone(),
        target: c.clone(),
        entries,
    }
}

/// Mapping cone: generators of `source[1]` first, then those of `target`, with
/// differential `[[-d_source, 0], [f, d_target]]`.
pub fn cone<A: GradedAlgebra>(alg: &A, f: &ChainMap<A::Elem>) -> Result<GradedComplex<A::Elem>> {
    validate_chain_map(alg, f)?;
    let mut c = shift(alg, &f.source, 1);
    let off = c.gens.len();
    c.gens.extend(f.target.gens.iter().copied());
    for (&(l, k), e) in &f.entries {
        c.diff.insert((l + off, k), e.clone());
    }
    for (&(l, k), e) in &f.target.diff {
        c.diff.insert((l + off, k + off), e.clone());
    }
    Ok(c)
}

/// Signed count of generators per `(idempotent, shift)`; zero counts are dropped.
pub type EulerSymbol = BTreeMap<(usize, i64), i64>;

pub fn euler_symbol<E>(c: &GradedComplex<E>) -> EulerSymbol {
    let mut out: EulerSymbol = BTreeMap::new();
    for g in &c.gens {
        *out.entry((g.idem, g.shift)).or_default() += if g.degree.rem_euclid(2) == 0 { 1 } else { -1 };
    }
    out.retain(|_, v| *v != 0);
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimized<E> {
    pub complex: GradedComplex<E>,
    /// Cancelled `(source, target)` pairs, as indices at the moment of cancellation.
    pub cancellations: Vec<(usize, usize)>,
    pub equality_bound: Option<u32>,
}

fn find_pivot<A: GradedAlgebra>(
    alg: &A,
    c: &GradedComplex<A::Elem>,
) -> Result<Option<(usize, usize, A::Elem)>> {
    let mut by_source: BTreeMap<(i64, usize), Vec<usize>> = BTreeMap::new();
    for &(l, k) in c.diff.keys() {
        by_source.entry((c.gens[k].degree, k)).or_default().push(l);
    }
    for ((_, k), targets) in by_source {
        for l in targets {
            let (src, tgt) = (&c.gens[k], &c.gens[l]);
            if src.shift != tgt.shift {
                continue;
            }
            if let Some(inv) = alg.invert_degree_zero(&c.diff[&(l, k)], src.idem, tgt.idem)? {
                return Ok(Some((k, l, inv)));
            }
        }
    }
    Ok(None)
}

/// Gaussian elimination: cancels generator pairs joined by an invertible degree-0 entry,
/// scanning sources by cohomological degree and then index, targets by index.
pub fn minimize<A: GradedAlgebra>(alg: &A, c: &GradedComplex<A::Elem>) -> Result<Minimized<A::Elem>> {
    let mut cur = c.clone();
    let mut cancellations = Vec::new();
    while let Some((k, l, inv)) = find_pivot(alg, &cur)? {
        cancellations.push((k, l));
        let into_l: Vec<(usize, A::Elem)> = cur
            .diff
            .iter()
            .filter(|((r, c), _)| *r == l && *c != k)
            .map(|((_, c), e)| (*c, e.clone()))
            .collect();
        let from_k: Vec<(usize, A::Elem)> = cur
            .diff
            .iter()
            .filter(|((r, c), _)| *c == k && *r != l)
            .map(|((r, _), e)| (*r, e.clone()))
            .collect();
        for (lp, a) in &from_k {
            let a_inv = alg.mul(a, &inv);
            for (kp, b) in &into_l {
                let upd = alg.scale(&alg.mul(&a_inv, b), &-Q::from_integer(1.into()));
                accumulate(alg, &mut cur.diff, (*lp, *kp), upd);
            }
        }
        cur = remove_generators(&cur, &[k, l]);
    }
    Ok(Minimized {
        complex: cur,
        cancellations,
        equality_bound: alg.equality_bound(),
    })
}

fn remove_generators<E: Clone>(c: &GradedComplex<E>, drop: &[usize]) -> GradedComplex<E> {
    let mut index = vec![None; c.gens.len()];
    let mut gens = Vec::new();
    for (k, g) in c.gens.iter().enumerate() {
        if !drop.contains(&k) {
            index[k] = Some(gens.len());
            gens.push(*g);
        }
    }
    let diff = c
        .diff
        .iter()
        .filter_map(|(&(l, k), e)| Some(((index[l]?, index[k]?), e.clone())))
        .collect();
    GradedComplex { gens, diff }
}

fn restrict<E: Clone>(c: &GradedComplex<E>, keep: impl Fn(&GenSpec) -> bool) -> (GradedComplex<E>, Vec<usize>) {
    let kept: Vec<usize> = (0..c.gens.len()).filter(|&k| keep(&c.gens[k])).collect();
    let drop: Vec<usize> = (0..c.gens.len()).filter(|&k| !keep(&c.gens[k])).collect();
    (remove_generators(c, &drop), kept)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightTruncation<E> {
    /// Degrees `>= n + 1`.
    pub upper: GradedComplex<E>,
    /// Degrees `<= n`.
    pub lower: GradedComplex<E>,
    pub inclusion: ChainMap<E>,
}

/// Stupid truncation at `n`: the subcomplex in degrees above `n` and the quotient in
/// degrees at most `n`.
pub fn weight_truncate<A: GradedAlgebra>(
    alg: &A,
    c: &GradedComplex<A::Elem>,
    n: i64,
) -> Result<WeightTruncation<A::Elem>> {
    validate(alg, c)?;
    let (upper, kept) = restrict(c, |g| g.degree > n);
    let (lower, _) = restrict(c, |g| g.degree <= n);
    let entries = kept
        .iter()
        .enumerate()
        .map(|(j, &k)| ((k, j), alg.idempotent(c.gens[k].idem)))
        .collect();
    Ok(WeightTruncation {
        inclusion: ChainMap {
            source: upper.clone(),
            target: c.clone(),
            entries,
        },
        upper,
        lower,
    })
}

/// Whether the complexes agree after renumbering generators.
pub fn equal_up_to_reordering<A: GradedAlgebra>(
    alg: &A,
    a: &GradedComplex<A::Elem>,
    b: &GradedComplex<A::Elem>,
) -> bool {
    if a.gens.len() != b.gens.len() || a.diff.len() != b.diff.len() {
        return false;
    }
    let mut sa = a.gens.clone();
    let mut sb = b.gens.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return false;
    }
    let mut assign = vec![usize::MAX; a.gens.len()];
    let mut used = vec![false; b.gens.len()];
    search(alg, a, b, 0, &mut assign, &mut used)
}

fn search<A: GradedAlgebra>(
    alg: &A,
    a: &GradedComplex<A::Elem>,
    b: &GradedComplex<A::Elem>,
    k: usize,
    assign: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    if k == a.gens.len() {
        return true;
    }
    for j in 0..b.gens.len() {
        if used[j] || b.gens[j] != a.gens[k] {
            continue;
        }
        assign[k] = j;
        // entries between k and already placed generators must agree
        let consistent = (0..=k).all(|m| {
            let pairs = [((k, m), (j, assign[m])), ((m, k), (assign[m], j))];
            pairs.iter().all(|&(ka, kb)| match (a.diff.get(&ka), b.diff.get(&kb)) {
                (None, None) => true,
                (Some(x), Some(y)) => x == y,
                (Some(x), None) | (None, Some(x)) => alg.is_zero(x),
            })
        });
        if consistent {
            used[j] = true;
            if search(alg, a, b, k + 1, assign, used) {
                return true;
            }
            used[j] = false;
        }
    }
    assign[k] = usize::MAX;
    false
}

#[cfg(test)]
mod tests;
