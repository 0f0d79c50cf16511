//! Nilpotent representations as multisegments.
//!
//! A segment `(i,l)` is the string module with basis `e_{i-l+1}, ..., e_i`, `e_j` sitting at
//! vertex `j`, each arrow sending `e_j` to `e_{j+1}` and killing `e_i`. Its socle is the line
//! `k e_i` at vertex `i`. For linear quivers the support must not leave the vertex range.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{parse_err, Error, Result};
use crate::quiver::{DimVector, Quiver};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Segment {
    pub vertex: usize,
    pub len: usize,
}

/// Canonical order: socle vertex ascending, then length descending.
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vertex
            .cmp(&other.vertex)
            .then(other.len.cmp(&self.len))
    }
}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Segment {
    pub fn new(vertex: usize, len: usize) -> Self {
        Segment { vertex, len }
    }

    pub fn is_valid(&self, q: &Quiver) -> bool {
        self.len >= 1
            && self.vertex < q.num_vertices()
            && (q.is_cyclic() || self.vertex + 1 >= self.len)
    }

    pub fn check(&self, q: &Quiver) -> Result<()> {
        if self.is_valid(q) {
            Ok(())
        } else {
            Err(Error::InvalidSegment(self.to_string(), q.to_string()))
        }
    }

    /// Vertices of the basis vectors, from the top `e_{i-l+1}` down to the socle `e_i`.
    pub fn support(&self, q: &Quiver) -> Vec<usize> {
        let n = q.num_vertices() as i64;
        (0..self.len as i64)
            .rev()
            .map(|k| (self.vertex as i64 - k).rem_euclid(n) as usize)
            .collect()
    }

    pub fn dim_vector(&self, q: &Quiver) -> DimVector {
        let mut d = vec![0; q.num_vertices()];
        for v in self.support(q) {
            d[v] += 1;
        }
        DimVector::new(d)
    }

    /// The segment left after quotienting by the socle line, if any.
    pub fn drop_socle(&self, q: &Quiver) -> Option<Segment> {
        if self.len <= 1 {
            return None;
        }
        let vertex = q.pred(self.vertex).expect("segments of length >= 2 have a predecessor");
        Some(Segment::new(vertex, self.len - 1))
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.vertex, self.len)
    }
}

impl FromStr for Segment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| parse_err("segment", s))?;
        let mut it = inner.split(',').map(|t| t.trim().parse::<usize>());
        match (it.next(), it.next(), it.next()) {
            (Some(Ok(i)), Some(Ok(l)), None) if l >= 1 => Ok(Segment::new(i, l)),
            _ => Err(parse_err("segment", s)),
        }
    }
}

/// A multiset of segments kept in canonical sorted order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Multisegment {
    segs: Vec<Segment>,
}

impl Multisegment {
    pub fn new(q: &Quiver, mut segs: Vec<Segment>) -> Result<Self> {
        for s in &segs {
            s.check(q)?;
        }
        segs.sort();
        Ok(Multisegment { segs })
    }

    pub fn empty() -> Self {
        Multisegment::default()
    }

    /// Parses `(0,2)+(0,1)`; the empty multisegment is written `0` or as an empty string.
    pub fn parse(q: &Quiver, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "0" {
            return Ok(Multisegment::empty());
        }
        let segs = s
            .split('+')
            .map(|t| t.parse::<Segment>())
            .collect::<Result<Vec<_>>>()?;
        Multisegment::new(q, segs)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segs
    }

    pub fn is_empty(&self) -> bool {
        self.segs.is_empty()
    }

    pub fn is_semisimple(&self) -> bool {
        self.segs.iter().all(|s| s.len == 1)
    }

    pub fn dim_vector(&self, q: &Quiver) -> DimVector {
        self.segs
            .iter()
            .fold(DimVector::zero(q.num_vertices()), |acc, s| acc.add(&s.dim_vector(q)))
    }
}

impl fmt::Display for Multisegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.segs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.segs.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl Serialize for Multisegment {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// All isomorphism classes of nilpotent representations with dimension vector `d`.
///
/// Segment lengths never exceed `total(d)`, so the candidate set is finite.
pub fn enumerate_nilreps(q: &Quiver, d: &DimVector) -> Result<Vec<Multisegment>> {
    d.check_len(q.num_vertices())?;
    let mut candidates = Vec::new();
    for v in 0..q.num_vertices() {
        for len in 1..=d.total() {
            let s = Segment::new(v, len);
            if s.is_valid(q) && s.dim_vector(q).le(d) {
                candidates.push((s, s.dim_vector(q)));
            }
        }
    }
    // shorter segments first, so finer decompositions come out first
    candidates.sort_by_key(|(s, _)| (s.vertex, s.len));

    fn rec(
        cands: &[(Segment, DimVector)],
        start: usize,
        left: &DimVector,
        cur: &mut Vec<Segment>,
        out: &mut Vec<Multisegment>,
    ) {
        if left.is_zero() {
            let mut segs = cur.clone();
            segs.sort();
            out.push(Multisegment { segs });
            return;
        }
        for k in start..cands.len() {
            if let Some(rest) = left.checked_sub(&cands[k].1) {
                cur.push(cands[k].0);
                rec(cands, k, &rest, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&candidates, 0, d, &mut Vec::new(), &mut out);
    Ok(out)
}

/// Per-vertex lists of indices into `M.segments()` whose socle lies at that vertex,
/// ordered deepest radical layer first (longest segment first).
pub type SocleBasis = Vec<Vec<usize>>;

pub fn socle_basis(q: &Quiver, m: &Multisegment) -> SocleBasis {
    let mut basis = vec![Vec::new(); q.num_vertices()];
    // canonical order already sorts each vertex by decreasing length
    for (idx, s) in m.segs.iter().enumerate() {
        basis[s.vertex].push(idx);
    }
    basis
}

/// Quotient of `M` by the socle lines of the chosen segments.
///
/// `chosen[v]` lists positions into `socle_basis(q, m)[v]`.
pub fn quotient_by_socles(q: &Quiver, m: &Multisegment, chosen: &[Vec<usize>]) -> Result<Multisegment> {
    let basis = socle_basis(q, m);
    if chosen.len() != basis.len() {
        return Err(Error::InvalidSocleChoice(format!(
            "expected {} vertex lists, got {}",
            basis.len(),
            chosen.len()
        )));
    }
    let mut picked = vec![false; m.segs.len()];
    for (v, positions) in chosen.iter().enumerate() {
        for &p in positions {
            let idx = *basis[v].get(p).ok_or_else(|| {
                Error::InvalidSocleChoice(format!("position {p} at vertex {v} out of range"))
            })?;
            if picked[idx] {
                return Err(Error::InvalidSocleChoice(format!(
                    "position {p} at vertex {v} chosen twice"
                )));
            }
            picked[idx] = true;
        }
    }
    let segs = m
        .segs
        .iter()
        .zip(&picked)
        .filter_map(|(s, &p)| if p { s.drop_socle(q) } else { Some(*s) })
        .collect();
    Multisegment::new(q, segs)
}

/// `dim Hom(E(a), E(b))`.
pub fn hom_dim(q: &Quiver, a: &Segment, b: &Segment) -> usize {
    let n = q.num_vertices() as i64;
    let residue = b.vertex as i64 - a.vertex as i64 + a.len as i64 - 1;
    (0..a.len.min(b.len) as i64)
        .filter(|&k| {
            if q.is_cyclic() {
                (k - residue).rem_euclid(n) == 0
            } else {
                k == residue
            }
        })
        .count()
}

pub fn end_dim(q: &Quiver, m: &Multisegment) -> usize {
    m.segs
        .iter()
        .map(|a| m.segs.iter().map(|b| hom_dim(q, a, b)).sum::<usize>())
        .sum()
}

/// Dimension of the orbit of `M` in the representation space.
pub fn orbit_dim(q: &Quiver, m: &Multisegment) -> usize {
    let d = m.dim_vector(q);
    let group: usize = d.entries().iter().map(|x| x * x).sum();
    group - end_dim(q, m)
}

/// Multiplicities of the distinct segment classes of `M`, in canonical order.
pub fn aut_series_exponents(m: &Multisegment) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    let mut prev: Option<Segment> = None;
    for s in &m.segs {
        if prev == Some(*s) {
            *out.last_mut().expect("nonempty") += 1;
        } else {
            out.push(1);
        }
        prev = Some(*s);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(i: usize, l: usize) -> Segment {
        Segment::new(i, l)
    }

    #[test]
    fn loop_classes_are_partitions() {
        let q = Quiver::cyclic(1).unwrap();
        let counts: Vec<usize> = (0..=8)
            .map(|d| enumerate_nilreps(&q, &DimVector::new(vec![d])).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
    }

    #[test]
    fn small_enumerations() {
        let c2 = Quiver::cyclic(2).unwrap();
        let reps = enumerate_nilreps(&c2, &DimVector::new(vec![1, 1])).unwrap();
        let names: Vec<String> = reps.iter().map(|m| m.to_string()).collect();
        assert_eq!(names, vec!["(0,1)+(1,1)", "(0,2)", "(1,2)"]);

        let a2 = Quiver::linear(2).unwrap();
        let reps = enumerate_nilreps(&a2, &DimVector::new(vec![1, 1])).unwrap();
        assert_eq!(reps.len(), 2);

        let zero = enumerate_nilreps(&a2, &DimVector::new(vec![0, 0])).unwrap();
        assert_eq!(zero, vec![Multisegment::empty()]);
    }

    #[test]
    fn enumeration_has_no_duplicates_and_right_dims() {
        let q = Quiver::cyclic(3).unwrap();
        let d = DimVector::new(vec![2, 1, 1]);
        let reps = enumerate_nilreps(&q, &d).unwrap();
        let mut sorted = reps.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), reps.len());
        assert!(reps.iter().all(|m| m.dim_vector(&q) == d));
    }

    #[test]
    fn segment_validity() {
        let a3 = Quiver::linear(3).unwrap();
        assert!(seg(2, 3).is_valid(&a3));
        assert!(!seg(1, 3).is_valid(&a3));
        assert!(seg(0, 5).is_valid(&Quiver::cyclic(2).unwrap()));
        assert_eq!(seg(1, 3).support(&Quiver::cyclic(2).unwrap()), vec![1, 0, 1]);
        assert_eq!(seg(1, 3).dim_vector(&Quiver::cyclic(2).unwrap()).entries(), &[1, 2]);
    }

    #[test]
    fn socle_basis_orders_longest_first() {
        let c2 = Quiver::cyclic(2).unwrap();
        let m = Multisegment::parse(&c2, "(1,2)").unwrap();
        assert_eq!(socle_basis(&c2, &m), vec![vec![], vec![0]]);

        let lp = Quiver::cyclic(1).unwrap();
        let m = Multisegment::parse(&lp, "(0,1)+(0,2)").unwrap();
        assert_eq!(m.to_string(), "(0,2)+(0,1)");
        let b = socle_basis(&lp, &m);
        assert_eq!(b[0].iter().map(|&i| m.segments()[i]).collect::<Vec<_>>(), vec![seg(0, 2), seg(0, 1)]);

        assert_eq!(socle_basis(&c2, &Multisegment::empty()), vec![Vec::<usize>::new(); 2]);
    }

    #[test]
    fn quotients() {
        let c2 = Quiver::cyclic(2).unwrap();
        let m = Multisegment::parse(&c2, "(1,2)").unwrap();
        let out = quotient_by_socles(&c2, &m, &[vec![], vec![0]]).unwrap();
        assert_eq!(out.to_string(), "(0,1)");

        let m = Multisegment::parse(&c2, "(0,1)").unwrap();
        assert!(quotient_by_socles(&c2, &m, &[vec![0], vec![]]).unwrap().is_empty());

        let lp = Quiver::cyclic(1).unwrap();
        let m = Multisegment::parse(&lp, "(0,2)+(0,1)").unwrap();
        let out = quotient_by_socles(&lp, &m, &[vec![1]]).unwrap();
        assert_eq!(out.to_string(), "(0,2)");

        assert!(quotient_by_socles(&lp, &m, &[vec![2]]).is_err());
        assert!(quotient_by_socles(&lp, &m, &[vec![0, 0]]).is_err());
        assert!(quotient_by_socles(&lp, &m, &[]).is_err());
    }

    #[test]
    fn quotient_lowers_dimension_by_chosen_socles() {
        let q = Quiver::cyclic(3).unwrap();
        for m in enumerate_nilreps(&q, &DimVector::new(vec![2, 1, 1])).unwrap() {
            let basis = socle_basis(&q, &m);
            let chosen: Vec<Vec<usize>> = basis.iter().map(|b| (0..b.len()).step_by(2).collect()).collect();
            let quot = quotient_by_socles(&q, &m, &chosen).unwrap();
            let mut expected = m.dim_vector(&q);
            for (v, c) in chosen.iter().enumerate() {
                expected = expected.checked_sub(&{
                    let mut u = DimVector::zero(3);
                    for _ in c {
                        u = u.add(&DimVector::unit(3, v));
                    }
                    u
                }).unwrap();
            }
            assert_eq!(quot.dim_vector(&q), expected);
        }
    }

    #[test]
    fn hom_dims() {
        let lp = Quiver::cyclic(1).unwrap();
        for l in 1..5 {
            for m in 1..5 {
                assert_eq!(hom_dim(&lp, &seg(0, l), &seg(0, m)), l.min(m));
            }
        }
        let c2 = Quiver::cyclic(2).unwrap();
        assert_eq!(hom_dim(&c2, &seg(1, 2), &seg(1, 2)), 1);
        let a2 = Quiver::linear(2).unwrap();
        // the top of E(1,2) lives at vertex 0, where E(1,1) vanishes
        assert_eq!(hom_dim(&a2, &seg(1, 2), &seg(1, 1)), 0);
        assert_eq!(hom_dim(&a2, &seg(1, 1), &seg(1, 2)), 1);
    }

    #[test]
    fn orbit_dims() {
        let a3 = Quiver::linear(3).unwrap();
        let m = Multisegment::parse(&a3, "(0,1)+(1,1)+(2,1)").unwrap();
        assert_eq!(orbit_dim(&a3, &m), 0);
        let c2 = Quiver::cyclic(2).unwrap();
        assert_eq!(orbit_dim(&c2, &Multisegment::parse(&c2, "(1,2)").unwrap()), 1);
        let lp = Quiver::cyclic(1).unwrap();
        assert_eq!(orbit_dim(&lp, &Multisegment::parse(&lp, "(0,2)+(0,1)").unwrap()), 4);
        // regular nilpotent in gl_3
        assert_eq!(orbit_dim(&lp, &Multisegment::parse(&lp, "(0,3)").unwrap()), 6);
    }

    #[test]
    fn aut_exponents() {
        let lp = Quiver::cyclic(1).unwrap();
        let p = |s: &str| Multisegment::parse(&lp, s).unwrap();
        assert_eq!(aut_series_exponents(&p("(0,1)+(0,1)")), vec![2]);
        assert_eq!(aut_series_exponents(&p("(0,2)+(0,1)")), vec![1, 1]);
        assert_eq!(aut_series_exponents(&p("0")), Vec::<usize>::new());
    }

    #[test]
    fn parsing() {
        let lp = Quiver::cyclic(1).unwrap();
        assert!(Multisegment::parse(&lp, "(0,2)+(1,1)").is_err());
        assert!(Multisegment::parse(&lp, "(0,0)").is_err());
        assert!(Multisegment::parse(&lp, "0,2").is_err());
        let a2 = Quiver::linear(2).unwrap();
        assert!(Multisegment::parse(&a2, "(0,2)").is_err());
    }
}
