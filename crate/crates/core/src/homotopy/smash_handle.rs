//! Handle for `S ⋊ Q[S_n]` with the single idempotent `1`.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_traits::{One, Zero};

use super::term::{fold, parse_term, Term};
use super::GradedAlgebra;
use crate::error::{Error, Result};
use crate::klr::poly::Poly;
use crate::klr::smash::{compose, identity_perm, mul_unchecked, Perm};
use crate::klr::SmashElement;
use crate::linalg::{solve_columns, Q};

pub struct SmashAlgebra {
    n: usize,
    perms: Vec<Perm>,
}

impl SmashAlgebra {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ContextMismatch("smash product needs at least one strand".into()));
        }
        Ok(SmashAlgebra {
            n,
            perms: (0..n).permutations(n).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn perms(&self) -> &[Perm] {
        &self.perms
    }

    fn atom(&self, t: &Term) -> Result<SmashElement> {
        let n = self.n;
        match t {
            Term::X(k) if *k <= n => Ok(SmashElement::x(n, k - 1)),
            Term::S(r) if *r < n => Ok(SmashElement::s(n, r - 1)),
            Term::Perm(p) => {
                let w: Perm = p.iter().map(|&k| k.wrapping_sub(1)).collect();
                let mut sorted = w.clone();
                sorted.sort();
                if sorted != identity_perm(n) {
                    return Err(Error::Term(format!("{p:?} is not a permutation of 1..{n}")));
                }
                Ok(SmashElement::perm(w))
            }
            Term::E(w) if w.is_empty() => Ok(SmashElement::identity(n)),
            other => Err(Error::Term(format!("{other:?} is not a smash generator on {n} strands"))),
        }
    }
}

impl GradedAlgebra for SmashAlgebra {
    type Elem = SmashElement;

    fn descriptor(&self) -> serde_json::Value {
        serde_json::json!({ "kind": "smash", "n": self.n })
    }

    fn idempotent_labels(&self) -> Vec<String> {
        vec!["1".to_string()]
    }

    fn num_idempotents(&self) -> usize {
        1
    }

    fn zero(&self) -> SmashElement {
        SmashElement::zero(self.n)
    }

    fn idempotent(&self, _k: usize) -> SmashElement {
        SmashElement::identity(self.n)
    }

    fn add(&self, a: &SmashElement, b: &SmashElement) -> SmashElement {
        a.add(b)
    }

    fn scale(&self, a: &SmashElement, c: &Q) -> SmashElement {
        a.scale(c)
    }

    fn mul(&self, a: &SmashElement, b: &SmashElement) -> SmashElement {
        mul_unchecked(a, b)
    }

    fn is_zero(&self, a: &SmashElement) -> bool {
        a.is_zero()
    }

    fn degrees(&self, a: &SmashElement) -> BTreeSet<i64> {
        a.homogeneous_parts().into_keys().collect()
    }

    fn in_block(&self, a: &SmashElement, src: usize, tgt: usize) -> bool {
        src == 0 && tgt == 0 && a.n() == self.n
    }

    /// Degree-0 elements lie in the group algebra; an inverse is found by solving
    /// `a b = 1` in its regular representation.
    fn invert_degree_zero(&self, a: &SmashElement, _src: usize, _tgt: usize) -> Result<Option<SmashElement>> {
        let Some(coeffs) = a.as_group_algebra() else {
            return Ok(None);
        };
        if coeffs.is_empty() {
            return Ok(None);
        }
        let index: BTreeMap<&Perm, usize> = self.perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
        // column v holds a * v
        let columns: Vec<Vec<Q>> = self
            .perms
            .iter()
            .map(|v| {
                let mut col = vec![Q::zero(); self.perms.len()];
                for (w, c) in &coeffs {
                    col[index[&compose(w, v)]] += c;
                }
                col
            })
            .collect();
        let mut rhs = vec![Q::zero(); self.perms.len()];
        rhs[index[&identity_perm(self.n)]] = Q::one();
        let Some(x) = solve_columns(&columns, &rhs) else {
            return Ok(None);
        };
        let mut b = SmashElement::zero(self.n);
        for (v, c) in self.perms.iter().zip(x) {
            if !c.is_zero() {
                b = b.add(&SmashElement::term(Poly::constant(self.n, c), v.clone()));
            }
        }
        // finite-dimensional, so a right inverse is two-sided
        Ok(Some(b))
    }

    fn render(&self, a: &SmashElement) -> String {
        a.to_string()
    }

    fn parse(&self, s: &str) -> Result<SmashElement> {
        let t = parse_term(s)?;
        fold(
            &t,
            &|t| self.atom(t),
            &SmashElement::identity(self.n),
            &|a, b| a.add(b),
            &|a, b| mul_unchecked(a, b),
            &|a, c| a.scale(c),
        )
    }

    fn short_elements(&self) -> Vec<(usize, usize, SmashElement)> {
        let n = self.n;
        let mut out = vec![SmashElement::identity(n)];
        for r in 0..n - 1 {
            let s = SmashElement::s(n, r);
            out.push(s.clone());
            out.push(SmashElement::identity(n).add(&s));
            out.push(SmashElement::identity(n).sub(&s));
            out.push(SmashElement::x(n, r).sub(&SmashElement::x(n, r + 1)));
        }
        for k in 0..n {
            out.push(SmashElement::x(n, k));
            if n > 1 {
                out.push(mul_unchecked(&SmashElement::x(n, k), &SmashElement::s(n, k.min(n - 2))));
            }
        }
        out.into_iter().map(|e| (0, 0, e)).collect()
    }

    fn equality_bound(&self) -> Option<u32> {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    #[test]
    fn parse_and_render() {
        let a = SmashAlgebra::new(3).unwrap();
        let e = a.parse("x1*s2 - 2*[1,3,2] + 1").unwrap();
        assert_eq!(a.parse(&a.render(&e)).unwrap(), e);
        assert_eq!(a.parse("s1*s1").unwrap(), SmashElement::identity(3));
        assert_eq!(a.parse("s1*x1").unwrap(), a.parse("x2*s1").unwrap());
        assert!(a.parse("[1,1,2]").is_err());
        assert!(a.parse("psi1").is_err());
    }

    #[test]
    fn group_algebra_inverses() {
        let a = SmashAlgebra::new(2).unwrap();
        let u = a.parse("2 + s1").unwrap();
        let inv = a.invert_degree_zero(&u, 0, 0).unwrap().unwrap();
        assert_eq!(inv, a.parse("2/3 - 1/3*s1").unwrap());
        assert_eq!(a.mul(&inv, &u), SmashElement::identity(2));
        assert_eq!(a.invert_degree_zero(&a.parse("1 + s1").unwrap(), 0, 0).unwrap(), None);
        assert_eq!(a.invert_degree_zero(&a.parse("x1").unwrap(), 0, 0).unwrap(), None);
        assert_eq!(a.invert_degree_zero(&a.scale(&a.idempotent(0), &q(0)), 0, 0).unwrap(), None);
    }
}
