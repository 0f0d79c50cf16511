//! Point counts of `Fl(M, comp)` over a prime field, by brute-force enumeration.
//!
//! `M` is materialized as matrices (one shift block per segment). Flags are built one step
//! at a time: the next step is a graded subspace of `ker(rho)` enumerated through reduced
//! row echelon forms, after which the representation is replaced by its quotient. Nothing
//! here looks at socle orderings or Schubert cells.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::nilrep::Multisegment;
use crate::quiver::{Composition, Quiver};

use super::check_dims;

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| !p.is_multiple_of(k))
}

/// Number of strictly stable flags of type `comp` in `M` over `F_p`.
pub fn count_points(q: &Quiver, m: &Multisegment, comp: &Composition, p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    check_dims(q, m, comp)?;
    let rep = Rep::materialize(q, m, p);
    let parts: Vec<Vec<usize>> = comp.parts().iter().map(|d| d.entries().to_vec()).collect();
    Ok(count_rec(&rep, &parts))
}

type Mat = Vec<Vec<u64>>;

/// Representation over `F_p`: a space per vertex and, for each vertex with an outgoing
/// arrow, the matrix of that arrow (rows indexed by the target basis).
#[derive(Debug, Clone)]
struct Rep {
    p: u64,
    dims: Vec<usize>,
    succ: Vec<Option<usize>>,
    arrows: Vec<Option<Mat>>,
}

impl Rep {
    fn materialize(q: &Quiver, m: &Multisegment, p: u64) -> Rep {
        let n = q.num_vertices();
        let mut dims = vec![0; n];
        // (vertex, index) of each basis vector, per segment, top first
        let mut layout: Vec<Vec<(usize, usize)>> = Vec::new();
        for s in m.segments() {
            let mut chain = Vec::new();
            for v in s.support(q) {
                chain.push((v, dims[v]));
                dims[v] += 1;
            }
            layout.push(chain);
        }
        let succ: Vec<Option<usize>> = (0..n).map(|v| q.succ(v)).collect();
        let mut arrows: Vec<Option<Mat>> = succ
            .iter()
            .enumerate()
            .map(|(v, t)| t.map(|t| vec![vec![0; dims[v]]; dims[t]]))
            .collect();
        for chain in &layout {
            for w in chain.windows(2) {
                let (v, i) = w[0];
                let (t, j) = w[1];
                let mat = arrows[v].as_mut().expect("interior segment vertices have an arrow");
                debug_assert_eq!(succ[v], Some(t));
                mat[j][i] = 1;
            }
        }
        Rep {
            p,
            dims,
            succ,
            arrows,
        }
    }

    /// Basis (as row vectors) of the kernel of all arrows leaving `v`.
    fn kernel(&self, v: usize) -> Mat {
        match &self.arrows[v] {
            None => identity(self.dims[v]),
            Some(a) => nullspace(a, self.dims[v], self.p),
        }
    }

    /// Quotient by the graded subspace with row bases `sub[v]` (already in RREF and
    /// contained in the kernel, hence a subrepresentation).
    fn quotient(&self, sub: &[Mat]) -> Rep {
        let p = self.p;
        let n = self.dims.len();
        let pivots: Vec<Vec<usize>> = sub.iter().map(|rows| rows.iter().map(|r| leading(r)).collect()).collect();
        let keep: Vec<Vec<usize>> = (0..n)
            .map(|v| (0..self.dims[v]).filter(|c| !pivots[v].contains(c)).collect())
            .collect();
        let reduce = |v: usize, mut x: Vec<u64>| -> Vec<u64> {
            for (row, &piv) in sub[v].iter().zip(&pivots[v]) {
                let c = x[piv];
                if c != 0 {
                    for (xi, ri) in x.iter_mut().zip(row) {
                        *xi = (*xi + p - c * ri % p) % p;
                    }
                }
            }
            keep[v].iter().map(|&c| x[c]).collect()
        };
        let arrows = (0..n)
            .map(|v| {
                let t = self.succ[v]?;
                let a = self.arrows[v].as_ref().expect("arrow");
                let mut out = vec![vec![0; keep[v].len()]; keep[t].len()];
                for (col, &c) in keep[v].iter().enumerate() {
                    let image: Vec<u64> = (0..self.dims[t]).map(|r| a[r][c]).collect();
                    for (row, val) in reduce(t, image).into_iter().enumerate() {
                        out[row][col] = val;
                    }
                }
                Some(out)
            })
            .collect();
        Rep {
            p,
            dims: keep.iter().map(|k| k.len()).collect(),
            succ: self.succ.clone(),
            arrows,
        }
    }
}

fn count_rec(rep: &Rep, parts: &[Vec<usize>]) -> u64 {
    let Some((first, rest)) = parts.split_first() else {
        return u64::from(rep.dims.iter().all(|&d| d == 0));
    };
    let n = rep.dims.len();
    let kernels: Vec<Mat> = (0..n).map(|v| rep.kernel(v)).collect();
    if kernels.iter().zip(first).any(|(k, &want)| k.len() < want) {
        return 0;
    }
    let choices: Vec<Vec<Mat>> = (0..n)
        .map(|v| {
            rref_subspaces(kernels[v].len(), first[v], rep.p)
                .into_iter()
                .map(|coords| rref(&mat_mul(&coords, &kernels[v], rep.p), rep.p))
                .collect()
        })
        .collect();
    choices
        .into_iter()
        .multi_cartesian_product()
        .map(|sub| count_rec(&rep.quotient(&sub), rest))
        .sum()
}

fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
        .collect()
}

fn leading(row: &[u64]) -> usize {
    row.iter().position(|&x| x != 0).expect("nonzero row")
}

fn inv(a: u64, p: u64) -> u64 {
    let mut result = 1;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

fn mat_mul(a: &Mat, b: &Mat, p: u64) -> Mat {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j] % p).sum::<u64>() % p)
                .collect()
        })
        .collect()
}

/// Reduced row echelon form with zero rows removed.
fn rref(m: &Mat, p: u64) -> Mat {
    let mut rows: Mat = m.clone();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let s = inv(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * s % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// Row basis of `{x : a x = 0}` for a matrix with `cols` columns.
fn nullspace(a: &Mat, cols: usize, p: u64) -> Mat {
    let red = rref(a, p);
    let pivots: Vec<usize> = red.iter().map(|r| leading(r)).collect();
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut x = vec![0; cols];
            x[free] = 1;
            for (row, &piv) in red.iter().zip(&pivots) {
                x[piv] = (p - row[free]) % p;
            }
            x
        })
        .collect()
}

/// Every `k`-dimensional subspace of `F_p^m`, as its RREF `k x m` matrix.
fn rref_subspaces(m: usize, k: usize, p: u64) -> Vec<Mat> {
    let mut out = Vec::new();
    for pivots in (0..m).combinations(k) {
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &pc)| {
                let pivots = &pivots;
                (pc + 1..m)
                    .filter(move |c| !pivots.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        let total = (p as usize).pow(free.len() as u32);
        for mut code in 0..total {
            let mut mat = vec![vec![0; m]; k];
            for (r, &pc) in pivots.iter().enumerate() {
                mat[r][pc] = 1;
            }
            for &(r, c) in &free {
                mat[r][c] = (code % p as usize) as u64;
                code /= p as usize;
            }
            out.push(mat);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn grassmannian_counts() {
        // Gaussian binomials [4 choose 2]_q = 1 + q + 2q^2 + q^3 + q^4
        for p in [2u64, 3, 5] {
            let expected = 1 + p + 2 * p * p + p.pow(3) + p.pow(4);
            assert_eq!(rref_subspaces(4, 2, p).len() as u64, expected);
        }
        assert_eq!(rref_subspaces(3, 0, 7).len(), 1);
        assert_eq!(rref_subspaces(2, 3, 7).len(), 0);
    }

    #[test]
    fn springer_counts() {
        let q = Quiver::cyclic(1).unwrap();
        let m = Multisegment::parse(&q, "(0,2)+(0,1)").unwrap();
        let comp = Composition::parse(1, "1;1;1", None).unwrap();
        assert_eq!(count_points(&q, &m, &comp, 2).unwrap(), 5);
        assert_eq!(count_points(&q, &m, &comp, 3).unwrap(), 7);
        assert!(matches!(count_points(&q, &m, &comp, 4), Err(Error::NotPrime(4))));
    }

    #[test]
    fn projective_plane_of_lines() {
        let q = Quiver::linear(1).unwrap();
        let m = Multisegment::parse(&q, "(0,1)+(0,1)+(0,1)").unwrap();
        let comp = Composition::parse(1, "1;2", None).unwrap();
        assert_eq!(count_points(&q, &m, &comp, 3).unwrap(), 13);
    }

    #[test]
    fn empty_variety_counts_zero() {
        let q = Quiver::cyclic(2).unwrap();
        let m = Multisegment::parse(&q, "(1,2)").unwrap();
        let comp = Composition::from_word(2, &[0, 1]).unwrap();
        assert_eq!(count_points(&q, &m, &comp, 2).unwrap(), 0);
    }

    #[test]
    fn nilpotent_matrix_kernel() {
        let a = vec![vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]];
        let k = nullspace(&a, 3, 5);
        assert_eq!(k, vec![vec![1, 0, 0]]);
    }
}
