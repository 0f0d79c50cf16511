//! Affine pavings of quiver flag varieties `Fl(M, comp)`.
//!
//! A strictly stable flag has its first step inside `soc(M) = ker(rho)`. Pick a complete
//! flag of `soc(M)` refining the intersection with the radical filtration, deepest layer
//! first; its Borel subgroup lifts into `Aut(M)`. Every Borel orbit on the graded
//! Grassmannian of `soc(M)` contains exactly one coordinate subspace spanned by segment
//! socles, and the preimage of that orbit is an affine space times the flag variety of the
//! quotient. The recursion below follows that decomposition, tracking only cell dimensions
//! and the isomorphism type of each quotient.

mod count;

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::nilrep::{quotient_by_socles, socle_basis, Multisegment};
use crate::quiver::{Composition, Quiver};

pub use count::{count_points, is_prime};

/// Multiset of affine cell dimensions, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct CellSet {
    dims: Vec<usize>,
}

impl CellSet {
    pub fn from_dims(mut dims: Vec<usize>) -> Self {
        dims.sort_unstable();
        CellSet { dims }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.dims.last().copied()
    }

    pub fn poincare(&self) -> PoincarePolynomial {
        let mut coeffs = BTreeMap::new();
        for &d in &self.dims {
            *coeffs.entry(d).or_insert(0) += 1;
        }
        PoincarePolynomial { coeffs }
    }
}

/// `P(q) = sum over cells of q^dim`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PoincarePolynomial {
    coeffs: BTreeMap<usize, u64>,
}

impl PoincarePolynomial {
    pub fn coeff(&self, exp: usize) -> u64 {
        self.coeffs.get(&exp).copied().unwrap_or(0)
    }

    pub fn coefficients(&self) -> &BTreeMap<usize, u64> {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn eval(&self, q: u64) -> u128 {
        self.coeffs
            .iter()
            .map(|(&e, &c)| c as u128 * (q as u128).pow(e as u32))
            .sum()
    }

    /// Number of cells.
    pub fn euler(&self) -> u64 {
        self.coeffs.values().sum()
    }
}

impl std::fmt::Display for PoincarePolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(&e, &c)| match (e, c) {
                (0, c) => c.to_string(),
                (1, 1) => "q".to_string(),
                (1, c) => format!("{c}q"),
                (e, 1) => format!("q^{e}"),
                (e, c) => format!("{c}q^{e}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Serialize for PoincarePolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_map(self.coeffs.iter().map(|(e, c)| (e.to_string(), c)))
    }
}

pub(crate) fn check_dims(q: &Quiver, m: &Multisegment, comp: &Composition) -> Result<()> {
    if comp.num_vertices() != q.num_vertices() {
        return Err(Error::DimensionMismatch {
            expected: format!("composition over {} vertices", q.num_vertices()),
            found: format!("{} vertices", comp.num_vertices()),
        });
    }
    let dm = m.dim_vector(q);
    let dc = comp.target();
    if dm != dc {
        return Err(Error::DimensionMismatch {
            expected: format!("dim {} of {}", dm, m),
            found: format!("composition {} summing to {}", comp, dc),
        });
    }
    Ok(())
}

/// One Schubert cell of the graded Grassmannian of `soc(M)`: the chosen socle positions
/// per vertex and the cell dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SocleCell {
    pub chosen: Vec<Vec<usize>>,
    pub dim: usize,
}

/// Coordinate subspaces of `soc(M)` with dimension vector `first` and their Borel-orbit
/// dimensions. Empty if some vertex lacks enough socle lines.
pub fn socle_cells(q: &Quiver, m: &Multisegment, first: &[usize]) -> Vec<SocleCell> {
    let basis = socle_basis(q, m);
    let per_vertex: Vec<Vec<(Vec<usize>, usize)>> = basis
        .iter()
        .zip(first)
        .map(|(b, &k)| {
            (0..b.len())
                .combinations(k)
                .map(|s| {
                    // each chosen position s counts the unchosen positions preceding it
                    let dim = s.iter().enumerate().map(|(rank, &pos)| pos - rank).sum();
                    (s, dim)
                })
                .collect()
        })
        .collect();
    per_vertex
        .into_iter()
        .multi_cartesian_product()
        .map(|choice| SocleCell {
            dim: choice.iter().map(|(_, d)| d).sum(),
            chosen: choice.into_iter().map(|(s, _)| s).collect(),
        })
        .collect()
}

/// Cell dimensions of the affine paving of `Fl(M, comp)`.
pub fn paving_cells(q: &Quiver, m: &Multisegment, comp: &Composition) -> Result<CellSet> {
    check_dims(q, m, comp)?;
    let mut dims = Vec::new();
    collect_cells(q, m, comp.parts(), 0, &mut dims)?;
    Ok(CellSet::from_dims(dims))
}

fn collect_cells(
    q: &Quiver,
    m: &Multisegment,
    parts: &[crate::quiver::DimVector],
    offset: usize,
    out: &mut Vec<usize>,
) -> Result<()> {
    let Some((first, rest)) = parts.split_first() else {
        debug_assert!(m.is_empty());
        out.push(offset);
        return Ok(());
    };
    for cell in socle_cells(q, m, first.entries()) {
        let quotient = quotient_by_socles(q, m, &cell.chosen)?;
        collect_cells(q, &quotient, rest, offset + cell.dim, out)?;
    }
    Ok(())
}

pub fn poincare(q: &Quiver, m: &Multisegment, comp: &Composition) -> Result<PoincarePolynomial> {
    Ok(paving_cells(q, m, comp)?.poincare())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nilrep::enumerate_nilreps;
    use crate::quiver::{dim_flag, enumerate_comps, DimVector};

    fn lp() -> Quiver {
        Quiver::cyclic(1).unwrap()
    }

    #[test]
    fn subregular_springer_fiber() {
        let q = lp();
        let m = Multisegment::parse(&q, "(0,2)+(0,1)").unwrap();
        let comp = Composition::parse(1, "1;1;1", None).unwrap();
        assert_eq!(paving_cells(&q, &m, &comp).unwrap().dims(), &[0, 1, 1]);
        let p = poincare(&q, &m, &comp).unwrap();
        assert_eq!(p.to_string(), "1 + 2q");
        assert_eq!(p.euler(), 3);
    }

    #[test]
    fn grassmannian_of_lines() {
        let q = Quiver::linear(1).unwrap();
        let m = Multisegment::parse(&q, "(0,1)+(0,1)+(0,1)").unwrap();
        let comp = Composition::parse(1, "1;2", None).unwrap();
        assert_eq!(paving_cells(&q, &m, &comp).unwrap().dims(), &[0, 1, 2]);
    }

    #[test]
    fn strict_stability_can_empty_the_variety() {
        let q = Quiver::cyclic(2).unwrap();
        let m = Multisegment::parse(&q, "(1,2)").unwrap();
        let comp = Composition::from_word(2, &[0, 1]).unwrap();
        assert!(paving_cells(&q, &m, &comp).unwrap().is_empty());
    }

    #[test]
    fn point_and_forced_kernel() {
        let q = lp();
        let p = poincare(&q, &Multisegment::empty(), &Composition::empty(1)).unwrap();
        assert_eq!(p.to_string(), "1");
        let m = Multisegment::parse(&q, "(0,2)+(0,1)").unwrap();
        let comp = Composition::parse(1, "2;1", None).unwrap();
        assert_eq!(poincare(&q, &m, &comp).unwrap().to_string(), "1");
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let q = lp();
        let m = Multisegment::parse(&q, "(0,2)").unwrap();
        assert!(matches!(
            paving_cells(&q, &m, &Composition::empty(1)),
            Err(Error::DimensionMismatch { .. })
        ));
        let comp = Composition::parse(1, "1;1;1", None).unwrap();
        assert!(paving_cells(&q, &m, &comp).is_err());
    }

    #[test]
    fn one_part_composition_detects_semisimple() {
        for q in [lp(), Quiver::cyclic(2).unwrap(), Quiver::linear(3).unwrap()] {
            for total in 1..=4 {
                for d in DimVector::all_with_total(q.num_vertices(), total) {
                    let comp = Composition::new(q.num_vertices(), vec![d.clone()]).unwrap();
                    for m in enumerate_nilreps(&q, &d).unwrap() {
                        let cells = paving_cells(&q, &m, &comp).unwrap();
                        if m.is_semisimple() {
                            assert_eq!(cells.dims(), &[0]);
                        } else {
                            assert!(cells.is_empty());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cells_bounded_by_flag_dimension() {
        let q = Quiver::cyclic(2).unwrap();
        for total in 1..=4 {
            for d in DimVector::all_with_total(2, total) {
                for comp in enumerate_comps(&d) {
                    for m in enumerate_nilreps(&q, &d).unwrap() {
                        let cells = paving_cells(&q, &m, &comp).unwrap();
                        if let Some(top) = cells.max_dim() {
                            assert!(top <= dim_flag(&comp));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn socle_cell_dimensions() {
        // Gr(2,4) on a semisimple vertex: Schubert cells 0,1,2,2,3,4
        let q = Quiver::linear(1).unwrap();
        let m = Multisegment::parse(&q, "(0,1)+(0,1)+(0,1)+(0,1)").unwrap();
        let mut dims: Vec<usize> = socle_cells(&q, &m, &[2]).iter().map(|c| c.dim).collect();
        dims.sort();
        assert_eq!(dims, vec![0, 1, 2, 2, 3, 4]);
        assert!(socle_cells(&q, &m, &[5]).is_empty());
    }
}
