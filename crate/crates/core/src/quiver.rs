//! Quivers of type A (linear orientation) and cyclic type Ã (cyclic orientation),
//! together with dimension vectors and compositions.
//!
//! Vertices are 0-indexed. The linear quiver `A<n>` has arrows `i -> i+1` for
//! `0 <= i < n-1`; the cyclic quiver `cyclic:<n>` has arrows `i -> i+1 mod n` for every
//! vertex, so `cyclic:1` is a single loop and `cyclic:2` has one arrow in each direction.
//! In both shapes every arrow is identified by its source vertex.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{parse_err, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QuiverKind {
    Linear,
    Cyclic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quiver {
    kind: QuiverKind,
    n: usize,
}

impl Quiver {
    pub fn linear(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidQuiver("A0".into()));
        }
        Ok(Quiver {
            kind: QuiverKind::Linear,
            n,
        })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidQuiver("cyclic:0".into()));
        }
        Ok(Quiver {
            kind: QuiverKind::Cyclic,
            n,
        })
    }

    pub fn kind(&self) -> QuiverKind {
        self.kind
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn is_cyclic(&self) -> bool {
        self.kind == QuiverKind::Cyclic
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::InvalidVertex { vertex: v, n: self.n })
        }
    }

    /// Target of the arrow leaving `v`, if there is one.
    pub fn succ(&self, v: usize) -> Option<usize> {
        match self.kind {
            QuiverKind::Cyclic => Some((v + 1) % self.n),
            QuiverKind::Linear if v + 1 < self.n => Some(v + 1),
            QuiverKind::Linear => None,
        }
    }

    /// Source of the arrow entering `v`, if there is one.
    pub fn pred(&self, v: usize) -> Option<usize> {
        match self.kind {
            QuiverKind::Cyclic => Some((v + self.n - 1) % self.n),
            QuiverKind::Linear if v > 0 => Some(v - 1),
            QuiverKind::Linear => None,
        }
    }

    /// All arrows as `(source, target)` pairs, ordered by source.
    pub fn arrows(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .filter_map(|v| self.succ(v).map(|w| (v, w)))
            .collect()
    }

    /// Number of arrows `v -> w`.
    pub fn arrow_count(&self, v: usize, w: usize) -> usize {
        usize::from(self.succ(v) == Some(w))
    }

    /// Symmetrized Cartan pairing of the underlying graph.
    pub fn cartan(&self, v: usize, w: usize) -> Result<i64> {
        self.check_vertex(v)?;
        self.check_vertex(w)?;
        Ok(self.cartan_unchecked(v, w))
    }

    pub(crate) fn cartan_unchecked(&self, v: usize, w: usize) -> i64 {
        if v == w {
            2
        } else {
            -((self.arrow_count(v, w) + self.arrow_count(w, v)) as i64)
        }
    }
}

impl fmt::Display for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            QuiverKind::Linear => write!(f, "A{}", self.n),
            QuiverKind::Cyclic => write!(f, "cyclic:{}", self.n),
        }
    }
}

impl FromStr for Quiver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidQuiver(s.to_string());
        if let Some(rest) = s.strip_prefix("cyclic:") {
            let n = rest.parse::<usize>().map_err(|_| bad())?;
            Quiver::cyclic(n).map_err(|_| bad())
        } else if let Some(rest) = s.strip_prefix('A') {
            let n = rest.parse::<usize>().map_err(|_| bad())?;
            Quiver::linear(n).map_err(|_| bad())
        } else {
            Err(bad())
        }
    }
}

impl Serialize for Quiver {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimVector(Vec<usize>);

impl DimVector {
    pub fn new(entries: Vec<usize>) -> Self {
        DimVector(entries)
    }

    pub fn zero(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    pub fn unit(n: usize, v: usize) -> Self {
        let mut e = vec![0; n];
        e[v] = 1;
        DimVector(e)
    }

    /// Parses a comma list such as `1,2,1`.
    pub fn parse(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| parse_err("dimension vector", s))?;
        Ok(DimVector(entries))
    }

    /// Parses and checks the length against the quiver.
    pub fn parse_for(q: &Quiver, s: &str) -> Result<Self> {
        let d = DimVector::parse(s)?;
        d.check_len(q.num_vertices())?;
        Ok(d)
    }

    pub fn check_len(&self, n: usize) -> Result<()> {
        if self.0.len() == n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: format!("{n} entries"),
                found: format!("{} entries in {}", self.0.len(), self),
            })
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn get(&self, v: usize) -> usize {
        self.0[v]
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &DimVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &DimVector) -> DimVector {
        DimVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference; `None` if some entry would go negative.
    pub fn checked_sub(&self, other: &DimVector) -> Option<DimVector> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(DimVector)
    }

    /// Every dimension vector of length `n` with the given total.
    pub fn all_with_total(n: usize, total: usize) -> Vec<DimVector> {
        fn rec(n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<DimVector>) {
            if cur.len() + 1 == n {
                cur.push(left);
                out.push(DimVector(cur.clone()));
                cur.pop();
                return;
            }
            for x in (0..=left).rev() {
                cur.push(x);
                rec(n, left - x, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            rec(n, total, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Serialize for DimVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// An ordered list of nonzero dimension vectors (a flag type).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    n: usize,
    parts: Vec<DimVector>,
}

impl Composition {
    pub fn new(n: usize, parts: Vec<DimVector>) -> Result<Self> {
        for p in &parts {
            p.check_len(n)?;
            if p.is_zero() {
                return Err(parse_err("composition (zero part)", &p.to_string()));
            }
        }
        Ok(Composition { n, parts })
    }

    pub fn empty(n: usize) -> Self {
        Composition {
            n,
            parts: Vec::new(),
        }
    }

    /// The complete composition whose parts are the unit vectors of `word`.
    pub fn from_word(n: usize, word: &[usize]) -> Result<Self> {
        let parts = word
            .iter()
            .map(|&v| {
                if v < n {
                    Ok(DimVector::unit(n, v))
                } else {
                    Err(Error::InvalidVertex { vertex: v, n })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Composition { n, parts })
    }

    /// Parses `"1,0;0,1"` (semicolon-separated parts) or, for complete compositions,
    /// the word form `"0,1"`.
    ///
    /// A string without semicolons is ambiguous; when `target` is given the reading whose
    /// sum equals it wins, preferring the one-part reading if both do.
    pub fn parse(n: usize, s: &str, target: Option<&DimVector>) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Composition::empty(n));
        }
        if s.contains(';') {
            let parts = s
                .split(';')
                .map(DimVector::parse)
                .collect::<Result<Vec<_>>>()?;
            return Composition::new(n, parts);
        }
        let as_part = DimVector::parse(s)
            .ok()
            .and_then(|p| Composition::new(n, vec![p]).ok());
        let as_word = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().ok())
            .collect::<Option<Vec<_>>>()
            .and_then(|w| Composition::from_word(n, &w).ok());
        match (as_part, as_word, target) {
            (Some(p), _, Some(t)) if &p.target() == t => Ok(p),
            (_, Some(w), Some(t)) if &w.target() == t => Ok(w),
            (Some(p), _, None) => Ok(p),
            (None, Some(w), None) => Ok(w),
            (Some(p), _, Some(_)) => Ok(p),
            (None, Some(w), Some(_)) => Ok(w),
            (None, None, _) => Err(parse_err("composition", s)),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &[DimVector] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn target(&self) -> DimVector {
        self.parts
            .iter()
            .fold(DimVector::zero(self.n), |acc, p| acc.add(p))
    }

    pub fn is_complete(&self) -> bool {
        self.parts.iter().all(|p| p.total() == 1)
    }

    /// The vertex sequence of a complete composition.
    pub fn word(&self) -> Option<Vec<usize>> {
        self.parts
            .iter()
            .map(|p| {
                if p.total() == 1 {
                    p.entries().iter().position(|&x| x == 1)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Drops the first part.
    pub fn tail(&self) -> Composition {
        Composition {
            n: self.n,
            parts: self.parts.iter().skip(1).cloned().collect(),
        }
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(";"))
    }
}

impl Serialize for Composition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// All words with content `d`, in lexicographic order.
pub fn enumerate_complete_comps(d: &DimVector) -> Vec<Composition> {
    fn rec(left: &mut Vec<usize>, cur: &mut Vec<usize>, remaining: usize, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        for v in 0..left.len() {
            if left[v] > 0 {
                left[v] -= 1;
                cur.push(v);
                rec(left, cur, remaining - 1, out);
                cur.pop();
                left[v] += 1;
            }
        }
    }
    let n = d.len();
    let mut words = Vec::new();
    rec(&mut d.entries().to_vec(), &mut Vec::new(), d.total(), &mut words);
    words
        .into_iter()
        .map(|w| Composition::from_word(n, &w).expect("vertices in range"))
        .collect()
}

/// All compositions of `d` (ordered lists of nonzero parts), complete or not.
pub fn enumerate_comps(d: &DimVector) -> Vec<Composition> {
    fn sub_vectors(d: &DimVector) -> Vec<DimVector> {
        let mut out = vec![Vec::new()];
        for &x in d.entries() {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..=x).map(move |k| {
                        let mut q = p.clone();
                        q.push(k);
                        q
                    })
                })
                .collect();
        }
        out.into_iter()
            .map(DimVector::new)
            .filter(|p| !p.is_zero())
            .collect()
    }
    fn rec(d: &DimVector, cur: &mut Vec<DimVector>, out: &mut Vec<Vec<DimVector>>) {
        if d.is_zero() {
            out.push(cur.clone());
            return;
        }
        for p in sub_vectors(d) {
            let rest = d.checked_sub(&p).expect("sub-vector");
            cur.push(p);
            rec(&rest, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, &mut Vec::new(), &mut out);
    out.into_iter()
        .map(|parts| Composition {
            n: d.len(),
            parts,
        })
        .collect()
}

/// Dimension of the product of partial flag varieties of type `comp`.
pub fn dim_flag(comp: &Composition) -> usize {
    let parts = comp.parts();
    let mut total = 0;
    for v in 0..comp.num_vertices() {
        for a in 0..parts.len() {
            for b in a + 1..parts.len() {
                total += parts[a].get(v) * parts[b].get(v);
            }
        }
    }
    total
}

/// Dimension of the variety of pairs (representation, strictly stable flag of type `comp`).
pub fn dim_qvariety(q: &Quiver, comp: &Composition) -> usize {
    let parts = comp.parts();
    let mut total = dim_flag(comp);
    for (s, t) in q.arrows() {
        for a in 0..parts.len() {
            for b in 0..a {
                total += parts[b].get(t) * parts[a].get(s);
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: usize) -> Quiver {
        Quiver::linear(n).unwrap()
    }
    fn c(n: usize) -> Quiver {
        Quiver::cyclic(n).unwrap()
    }

    #[test]
    fn cartan_values() {
        for q in [a(1), a(3), c(1), c(2), c(3)] {
            for v in 0..q.num_vertices() {
                assert_eq!(q.cartan(v, v).unwrap(), 2);
            }
        }
        assert_eq!(a(2).cartan(0, 1).unwrap(), -1);
        assert_eq!(c(2).cartan(0, 1).unwrap(), -2);
        assert_eq!(a(3).cartan(0, 2).unwrap(), 0);
        assert_eq!(c(3).cartan(2, 0).unwrap(), -1);
        assert!(a(2).cartan(0, 2).is_err());
    }

    #[test]
    fn cartan_is_symmetric() {
        for q in [a(1), a(2), a(4), c(1), c(2), c(3), c(5)] {
            for v in 0..q.num_vertices() {
                for w in 0..q.num_vertices() {
                    assert_eq!(q.cartan(v, w).unwrap(), q.cartan(w, v).unwrap());
                }
            }
        }
    }

    #[test]
    fn arrows_by_shape() {
        assert!(a(1).arrows().is_empty());
        assert_eq!(c(1).arrows(), vec![(0, 0)]);
        assert_eq!(c(2).arrows(), vec![(0, 1), (1, 0)]);
        assert_eq!(a(3).arrows(), vec![(0, 1), (1, 2)]);
        assert_eq!(a(3).pred(0), None);
        assert_eq!(c(3).pred(0), Some(2));
    }

    #[test]
    fn quiver_specs_round_trip() {
        for s in ["A1", "A3", "cyclic:1", "cyclic:4"] {
            assert_eq!(s.parse::<Quiver>().unwrap().to_string(), s);
        }
        for s in ["A0", "B2", "cyclic:", "cyclic:x", ""] {
            assert!(s.parse::<Quiver>().is_err(), "{s}");
        }
    }

    #[test]
    fn complete_comps_enumeration() {
        let words = |d: Vec<usize>| -> Vec<Vec<usize>> {
            enumerate_complete_comps(&DimVector::new(d))
                .iter()
                .map(|c| c.word().unwrap())
                .collect()
        };
        assert_eq!(words(vec![1, 1]), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(words(vec![2]), vec![vec![0, 0]]);
        assert_eq!(words(vec![2, 1]).len(), 3);
        assert_eq!(words(vec![0, 0]), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn complete_comps_multinomial_count() {
        fn fact(n: usize) -> usize {
            (1..=n).product()
        }
        for d in [vec![1, 1, 1], vec![2, 2], vec![3, 1, 0], vec![2, 1, 1]] {
            let dv = DimVector::new(d.clone());
            let comps = enumerate_complete_comps(&dv);
            let expected = fact(dv.total()) / d.iter().map(|&x| fact(x)).product::<usize>();
            assert_eq!(comps.len(), expected);
            let mut dedup = comps.clone();
            dedup.dedup();
            assert_eq!(dedup.len(), comps.len());
            assert!(comps.iter().all(|c| c.target() == dv && c.is_complete()));
        }
    }

    #[test]
    fn all_comps_count() {
        // compositions of n into positive parts: 2^(n-1)
        for n in 1..=5 {
            assert_eq!(enumerate_comps(&DimVector::new(vec![n])).len(), 1 << (n - 1));
        }
        assert_eq!(enumerate_comps(&DimVector::new(vec![0])).len(), 1);
        // (1,1): (1,1) | (1,0);(0,1) | (0,1);(1,0)
        assert_eq!(enumerate_comps(&DimVector::new(vec![1, 1])).len(), 3);
    }

    #[test]
    fn flag_dimensions() {
        let one = |parts: Vec<usize>| {
            Composition::new(1, parts.into_iter().map(|x| DimVector::new(vec![x])).collect())
                .unwrap()
        };
        assert_eq!(dim_flag(&one(vec![1, 1])), 1);
        assert_eq!(dim_flag(&one(vec![1, 2])), 2);
        assert_eq!(dim_flag(&Composition::from_word(2, &[1, 0]).unwrap()), 0);
        for n in 1..6 {
            assert_eq!(dim_flag(&one(vec![1; n])), n * (n - 1) / 2);
        }
    }

    #[test]
    fn qvariety_dimensions() {
        let w = |v: &[usize]| Composition::from_word(2, v).unwrap();
        assert_eq!(dim_qvariety(&a(2), &w(&[1, 0])), 1);
        assert_eq!(dim_qvariety(&a(2), &w(&[0, 1])), 0);
        let one = Composition::new(1, vec![DimVector::new(vec![1]); 2]).unwrap();
        assert_eq!(dim_qvariety(&a(1), &one), 1);
        // loop quiver, complete flags of n: cotangent bundle of the flag variety
        let full = Composition::new(1, vec![DimVector::new(vec![1]); 3]).unwrap();
        assert_eq!(dim_qvariety(&c(1), &full), 6);
        assert_eq!(dim_qvariety(&c(2), &w(&[0, 1])), 1);
        assert_eq!(dim_qvariety(&c(2), &w(&[1, 0])), 1);
    }

    #[test]
    fn composition_parsing() {
        let d = DimVector::new(vec![1, 1]);
        let c1 = Composition::parse(2, "1,0;0,1", None).unwrap();
        assert_eq!(c1.word(), Some(vec![0, 1]));
        assert_eq!(c1.to_string(), "1,0;0,1");
        let c2 = Composition::parse(2, "1,0", Some(&d)).unwrap();
        assert_eq!(c2.word(), Some(vec![1, 0]));
        let c3 = Composition::parse(2, "1,1", Some(&d)).unwrap();
        assert_eq!(c3.len(), 1);
        let c4 = Composition::parse(1, "1;1;1", None).unwrap();
        assert_eq!(c4.target(), DimVector::new(vec![3]));
        assert!(Composition::parse(2, "0,0;1,1", None).is_err());
        assert!(Composition::parse(2, "x", None).is_err());
        assert!(Composition::parse(2, "", None).unwrap().is_empty());
    }
}
