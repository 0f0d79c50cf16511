//! Exact linear algebra over the rationals.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// In-place reduced row echelon form; returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Q>>) -> Vec<usize> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Solves `sum_k x_k columns[k] = rhs`, returning one solution if the system is consistent.
pub fn solve_columns(columns: &[Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
    let n = columns.len();
    let m = rhs.len();
    let mut rows: Vec<Vec<Q>> = (0..m)
        .map(|i| {
            let mut row: Vec<Q> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut rows);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (row, &p) in rows.iter().zip(&pivots) {
        x[p] = row[n].clone();
    }
    Some(x)
}

/// Sparse vectors keyed by arbitrary ordered keys, flattened to a common dense basis.
pub fn densify<K: Ord + Clone>(vectors: &[BTreeMap<K, Q>]) -> (Vec<K>, Vec<Vec<Q>>) {
    let mut keys: Vec<K> = vectors.iter().flat_map(|v| v.keys().cloned()).collect();
    keys.sort();
    keys.dedup();
    let index: BTreeMap<&K, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let dense = vectors
        .iter()
        .map(|v| {
            let mut row = vec![Q::zero(); keys.len()];
            for (k, c) in v {
                row[index[k]] = c.clone();
            }
            row
        })
        .collect();
    (keys, dense)
}

/// Rank of a family of sparse vectors.
pub fn sparse_rank<K: Ord + Clone>(vectors: &[BTreeMap<K, Q>]) -> usize {
    let (_, dense) = densify(vectors);
    rank(&dense)
}

pub fn identity(n: usize) -> Vec<Vec<Q>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&identity(4)), 4);
        assert_eq!(rank(&m(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&[]), 0);
    }

    #[test]
    fn solving() {
        let cols = m(&[&[1, 0, 1], &[0, 1, 1]]);
        let x = solve_columns(&cols, &[q(2), q(3), q(5)]).unwrap();
        assert_eq!(x, vec![q(2), q(3)]);
        assert!(solve_columns(&cols, &[q(2), q(3), q(4)]).is_none());
    }
}
