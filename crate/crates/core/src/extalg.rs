//! Graded dimensions of extension algebra blocks `E_{i,j}`.
//!
//! The geometric side stratifies the Steinberg-type variety `Z_{i,j}` by the orbit of the
//! underlying nilpotent representation `M`. Over the orbit of `M` the fibre is
//! `Fl(M, i) x Fl(M, j)`, paved by products of cells, and each cell contributes the Chow
//! series of the classifying space of the stabilizer, whose reductive part is
//! `prod GL_{m}` over the multiplicities of segment classes. The algebraic side is the
//! permutation sum of the KLR basis.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::nilrep::{aut_series_exponents, enumerate_nilreps, orbit_dim, Multisegment};
use crate::paving::paving_cells;
use crate::quiver::{dim_qvariety, enumerate_comps, Composition, DimVector, Quiver};
use crate::series::{bgl, HalfLaurentSeries};

/// Index pair `(i, j)` of a block, with its quiver and dimension vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockKey {
    pub quiver: Quiver,
    pub dim: DimVector,
    pub source: Composition,
    pub target: Composition,
}

impl BlockKey {
    pub fn new(q: &Quiver, d: &DimVector, source: Composition, target: Composition) -> Result<Self> {
        check_comp(q, d, &source)?;
        check_comp(q, d, &target)?;
        Ok(BlockKey {
            quiver: *q,
            dim: d.clone(),
            source,
            target,
        })
    }

    pub fn transpose(&self) -> BlockKey {
        BlockKey {
            quiver: self.quiver,
            dim: self.dim.clone(),
            source: self.target.clone(),
            target: self.source.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GdimReport {
    pub source: String,
    pub target: String,
    /// Exponent of `u` applied to the algebraic side before comparing.
    pub shift: i64,
    pub geometric: HalfLaurentSeries,
    pub algebraic: Option<HalfLaurentSeries>,
    pub normalized_match: bool,
    pub first_discrepancy: Option<i64>,
}

fn check_comp(q: &Quiver, d: &DimVector, c: &Composition) -> Result<()> {
    d.check_len(q.num_vertices())?;
    if c.num_vertices() != q.num_vertices() || c.target() != *d {
        return Err(Error::DimensionMismatch {
            expected: format!("composition of {d}"),
            found: c.to_string(),
        });
    }
    Ok(())
}

/// Chow series of the classifying space of the reductive part of `Aut(M)`, in `u`.
pub fn stabilizer_series(m: &Multisegment, trunc: i64) -> HalfLaurentSeries {
    aut_series_exponents(m)
        .into_iter()
        .fold(HalfLaurentSeries::one(trunc), |acc, k| acc.mul(&bgl(k, trunc)))
}

fn stratum_series(
    q: &Quiver,
    m: &Multisegment,
    i: &Composition,
    j: &Composition,
    d_j: i64,
    trunc: i64,
) -> Result<HalfLaurentSeries> {
    let ci = paving_cells(q, m, i)?;
    let cj = if i == j { ci.clone() } else { paving_cells(q, m, j)? };
    if ci.is_empty() || cj.is_empty() {
        return Ok(HalfLaurentSeries::zero(trunc));
    }
    let base = d_j - orbit_dim(q, m) as i64;
    let cells = HalfLaurentSeries::from_terms(
        ci.dims()
            .iter()
            .cartesian_product(cj.dims())
            .map(|(a, b)| (2 * (base - *a as i64 - *b as i64), 1)),
        trunc,
    );
    // the cell polynomial is exact; the stabilizer series must reach past its lowest term
    let reach = trunc - cells.min_exp().min(0);
    let b = stabilizer_series(m, reach);
    Ok(cells.mul(&b).truncate(trunc))
}

/// `sum_n u^{2n} dim CH^G_{d_j - n}(Z_{i,j})`, summed over orbit strata.
pub fn gdim_geo(
    q: &Quiver,
    d: &DimVector,
    i: &Composition,
    j: &Composition,
    trunc: i64,
) -> Result<HalfLaurentSeries> {
    check_comp(q, d, i)?;
    check_comp(q, d, j)?;
    let d_j = dim_qvariety(q, j) as i64;
    let strata = enumerate_nilreps(q, d)?;
    let parts = strata
        .par_iter()
        .map(|m| stratum_series(q, m, i, j, d_j, trunc))
        .collect::<Result<Vec<_>>>()?;
    Ok(parts
        .iter()
        .fold(HalfLaurentSeries::zero(trunc), |acc, s| acc.add(s)))
}

/// Permutations `w` with `(w . i)_{w(k)} = i_k` equal to `j`, in lexicographic order of
/// one-line notation.
pub fn word_permutations(i: &[usize], j: &[usize]) -> Vec<Vec<usize>> {
    fn rec(i: &[usize], j: &[usize], used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let k = cur.len();
        if k == i.len() {
            out.push(cur.clone());
            return;
        }
        for p in 0..j.len() {
            if !used[p] && j[p] == i[k] {
                used[p] = true;
                cur.push(p);
                rec(i, j, used, cur, out);
                cur.pop();
                used[p] = false;
            }
        }
    }
    let mut out = Vec::new();
    if i.len() == j.len() {
        rec(i, j, &mut vec![false; j.len()], &mut Vec::new(), &mut out);
    }
    out
}

/// KLR degree of `psi_w e(i)`: crossing strands `k < l` contribute `-cartan(i_k, i_l)`.
pub fn crossing_degree(q: &Quiver, i: &[usize], w: &[usize]) -> i64 {
    (0..w.len())
        .tuple_combinations()
        .filter(|&(k, l)| w[k] > w[l])
        .map(|(k, l)| -q.cartan_unchecked(i[k], i[l]))
        .sum()
}

fn word_of(c: &Composition) -> Result<Vec<usize>> {
    c.word().ok_or_else(|| Error::DimensionMismatch {
        expected: "complete composition".into(),
        found: c.to_string(),
    })
}

/// `sum_{w : w.i = j} u^{deg_w(i)} (1 - u^2)^{-n}`.
pub fn gdim_alg_klr(
    q: &Quiver,
    d: &DimVector,
    i: &Composition,
    j: &Composition,
    trunc: i64,
) -> Result<HalfLaurentSeries> {
    check_comp(q, d, i)?;
    check_comp(q, d, j)?;
    let (wi, wj) = (word_of(i)?, word_of(j)?);
    let perms = word_permutations(&wi, &wj);
    let crossings = HalfLaurentSeries::from_terms(
        perms.iter().map(|w| (crossing_degree(q, &wi, w), 1)),
        trunc,
    );
    let reach = trunc - crossings.min_exp().min(0);
    let poly = (0..wi.len()).fold(HalfLaurentSeries::one(reach), |acc, _| acc.mul(&bgl(1, reach)));
    Ok(crossings.mul(&poly).truncate(trunc))
}

/// Compares the geometric block with the `u^{d_j - d_i}`-shifted KLR block.
pub fn compare_block(
    q: &Quiver,
    d: &DimVector,
    i: &Composition,
    j: &Composition,
    trunc: i64,
) -> Result<GdimReport> {
    let geometric = gdim_geo(q, d, i, j, trunc)?;
    let shift = dim_qvariety(q, j) as i64 - dim_qvariety(q, i) as i64;
    let algebraic = gdim_alg_klr(q, d, i, j, trunc - shift)?;
    let normalized = algebraic.shift(shift).truncate(trunc);
    let first_discrepancy = geometric.first_difference(&normalized);
    Ok(GdimReport {
        source: i.to_string(),
        target: j.to_string(),
        shift,
        geometric,
        algebraic: Some(algebraic),
        normalized_match: first_discrepancy.is_none(),
        first_discrepancy,
    })
}

/// Geometric blocks over all pairs of compositions of `d`, row-major in the order of
/// [`enumerate_comps`].
pub fn gdim_schur_table(q: &Quiver, d: &DimVector, trunc: i64) -> Result<Vec<(BlockKey, HalfLaurentSeries)>> {
    d.check_len(q.num_vertices())?;
    let comps = enumerate_comps(d);
    let keys: Vec<BlockKey> = comps
        .iter()
        .cartesian_product(&comps)
        .map(|(i, j)| BlockKey::new(q, d, i.clone(), j.clone()))
        .collect::<Result<_>>()?;
    keys.into_par_iter()
        .map(|key| {
            let s = gdim_geo(q, d, &key.source, &key.target, trunc)?;
            Ok((key, s))
        })
        .collect()
}

/// `n! (1 - u^2)^{-n}`, the graded dimension of `S ⋊ Q[S_n]`.
pub fn springer_smash_gdim(n: usize, trunc: i64) -> HalfLaurentSeries {
    let fact: i64 = (1..=n as i64).product();
    (0..n)
        .fold(HalfLaurentSeries::one(trunc), |acc, _| acc.mul(&bgl(1, trunc)))
        .scale(fact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{dim_flag, enumerate_complete_comps};
    use crate::series::DEFAULT_TRUNC;

    const N: i64 = DEFAULT_TRUNC;

    fn word(n: usize, w: &[usize]) -> Composition {
        Composition::from_word(n, w).unwrap()
    }

    fn geometric(k: usize, trunc: i64) -> HalfLaurentSeries {
        (0..k).fold(HalfLaurentSeries::one(trunc), |acc, _| acc.mul(&bgl(1, trunc)))
    }

    #[test]
    fn a2_blocks() {
        let q = Quiver::linear(2).unwrap();
        let d = DimVector::new(vec![1, 1]);
        let (w01, w10) = (word(2, &[0, 1]), word(2, &[1, 0]));
        let g2 = geometric(2, N);
        assert_eq!(gdim_geo(&q, &d, &w01, &w01, N).unwrap(), g2);
        assert_eq!(gdim_geo(&q, &d, &w01, &w10, N).unwrap(), g2.shift(2).truncate(N));
        assert_eq!(gdim_geo(&q, &d, &w10, &w10, N).unwrap(), g2);
        assert_eq!(gdim_alg_klr(&q, &d, &w01, &w10, N).unwrap(), g2.shift(1).truncate(N));
        assert_eq!(gdim_alg_klr(&q, &d, &w01, &w01, N).unwrap(), g2);
        for (i, j) in [(&w01, &w01), (&w01, &w10), (&w10, &w01), (&w10, &w10)] {
            assert!(compare_block(&q, &d, i, j, N).unwrap().normalized_match);
        }
    }

    #[test]
    fn nil_hecke_two_strands() {
        let q = Quiver::linear(1).unwrap();
        let d = DimVector::new(vec![2]);
        let w = word(1, &[0, 0]);
        let expected = HalfLaurentSeries::from_terms([(-2, 1), (0, 1)], N + 2).mul(&geometric(2, N + 2)).truncate(N);
        assert_eq!(gdim_alg_klr(&q, &d, &w, &w, N).unwrap(), expected);
        assert_eq!(gdim_geo(&q, &d, &w, &w, N).unwrap(), expected);
        assert!(compare_block(&q, &d, &w, &w, N).unwrap().normalized_match);
    }

    fn inversion_series(n: usize) -> HalfLaurentSeries {
        let perms = (0..n).permutations(n);
        HalfLaurentSeries::from_terms(
            perms.map(|w| {
                let inv = (0..n).tuple_combinations().filter(|&(a, b)| w[a] > w[b]).count();
                (-2 * inv as i64, 1)
            }),
            N + 2 * (n * n) as i64,
        )
    }

    #[test]
    fn nil_hecke_closed_form() {
        let q = Quiver::linear(1).unwrap();
        for n in 1..=3 {
            let d = DimVector::new(vec![n]);
            let w = word(1, &vec![0; n]);
            let reach = N + 2 * (n * n) as i64;
            let poly = (0..n).fold(HalfLaurentSeries::one(reach), |acc, _| acc.mul(&bgl(1, reach)));
            let expected = inversion_series(n).mul(&poly).truncate(N);
            assert_eq!(gdim_geo(&q, &d, &w, &w, N).unwrap(), expected, "n = {n}");
        }
    }

    #[test]
    fn loop_quiver_blocks_are_smash_products() {
        let q = Quiver::cyclic(1).unwrap();
        for n in 1..=3 {
            let d = DimVector::new(vec![n]);
            let w = word(1, &vec![0; n]);
            assert_eq!(gdim_geo(&q, &d, &w, &w, N).unwrap(), springer_smash_gdim(n, N));
        }
    }

    #[test]
    fn transpose_and_diagonal_invariants() {
        for q in [Quiver::linear(2).unwrap(), Quiver::cyclic(2).unwrap(), Quiver::cyclic(1).unwrap()] {
            for d in DimVector::all_with_total(q.num_vertices(), 2) {
                let table = gdim_schur_table(&q, &d, N).unwrap();
                for (key, s) in &table {
                    let di = dim_qvariety(&q, &key.source) as i64;
                    let dj = dim_qvariety(&q, &key.target) as i64;
                    let t = &table.iter().find(|(k, _)| *k == key.transpose()).unwrap().1;
                    for e in -40..N - 2 * (di - dj).abs() {
                        assert_eq!(s.coeff(e), t.coeff(e + 2 * (di - dj)));
                    }
                    if key.source == key.target {
                        assert!(s.coeff(0).unwrap() >= 1);
                    }
                    let bound = dim_flag(&key.source).max(dim_flag(&key.target)) as i64;
                    assert!(s.is_zero() || s.min_exp() >= -2 * bound);
                }
            }
        }
    }

    #[test]
    fn schur_table_for_two_points() {
        let q = Quiver::linear(1).unwrap();
        let d = DimVector::new(vec![2]);
        let table = gdim_schur_table(&q, &d, N).unwrap();
        assert_eq!(table.len(), 4);
        let whole = Composition::parse(1, "2", Some(&d)).unwrap();
        let (_, s) = table.iter().find(|(k, _)| k.source == whole && k.target == whole).unwrap();
        assert_eq!(*s, bgl(2, N));
        let empty = gdim_schur_table(&q, &DimVector::new(vec![0]), N).unwrap();
        assert_eq!(empty.len(), 1);
        assert_eq!(empty[0].1, HalfLaurentSeries::one(N));
    }

    #[test]
    fn word_permutation_counts() {
        assert_eq!(word_permutations(&[0, 0, 1], &[0, 1, 0]).len(), 2);
        assert_eq!(word_permutations(&[0, 1], &[0, 0]).len(), 0);
        let d = DimVector::new(vec![2, 1]);
        assert_eq!(enumerate_complete_comps(&d).len(), 3);
    }

    #[test]
    fn mismatched_compositions_are_rejected() {
        let q = Quiver::linear(2).unwrap();
        let d = DimVector::new(vec![1, 1]);
        let bad = word(2, &[0, 0]);
        assert!(gdim_geo(&q, &d, &bad, &bad, N).is_err());
        let partial = Composition::parse(2, "1,1", Some(&d)).unwrap();
        assert!(gdim_alg_klr(&q, &d, &partial, &partial, N).is_err());
    }
}
