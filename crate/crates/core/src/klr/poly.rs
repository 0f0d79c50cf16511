//! Sparse polynomials in `x_1, ..., x_n` with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::linalg::{q, Q};

pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Q::one())
    }

    /// `x_k`, 0-indexed.
    pub fn var(nvars: usize, k: usize) -> Self {
        let mut e = vec![0; nvars];
        e[k] = 1;
        Poly::monomial(e, Q::one())
    }

    pub fn monomial(exps: Monomial, c: Q) -> Self {
        let nvars = exps.len();
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Q> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Monomial = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> Poly {
        (0..k).fold(Poly::one(self.nvars), |acc, _| acc.mul(self))
    }

    /// Multiplication by `x_k`.
    pub fn mul_var(&self, k: usize) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e[k] += 1;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// The substitution `x_k -> x_{w(k)}`.
    pub fn permute(&self, w: &[usize]) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut f = vec![0; self.nvars];
            for (k, &a) in e.iter().enumerate() {
                f[w[k]] = a;
            }
            out.add_term(f, c.clone());
        }
        out
    }

    /// Exchange of the variables `x_a` and `x_b`.
    pub fn swap(&self, a: usize, b: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            f.swap(a, b);
            out.add_term(f, c.clone());
        }
        out
    }

    /// `(f - f|_{x_a <-> x_b}) / (x_a - x_b)`, computed monomial by monomial.
    pub fn divided_difference(&self, a: usize, b: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let (p, r) = (e[a], e[b]);
            if p == r {
                continue;
            }
            // x^p y^r with p > r: x^r y^r (x^{p-r} - y^{p-r}) / (x - y)
            let (lo, hi, sign) = if p > r { (r, p, c.clone()) } else { (p, r, -c.clone()) };
            for k in 0..hi - lo {
                let mut f = e.clone();
                f[a] = lo + k;
                f[b] = hi - 1 - k;
                out.add_term(f, sign.clone());
            }
        }
        out
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Common total degree of all terms, if homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Constant term, or `None` if the polynomial is not constant.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().expect("one term");
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Random sparse polynomial: up to `max_terms` monomials of degree at most `max_deg`,
    /// small integer coefficients.
    pub fn random<R: Rng>(nvars: usize, max_deg: u32, max_terms: usize, rng: &mut R) -> Poly {
        let mut p = Poly::zero(nvars);
        let count = rng.gen_range(1..=max_terms.max(1));
        for _ in 0..count {
            let e = random_monomial(nvars, rng.gen_range(0..=max_deg), rng);
            let c: i64 = rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 };
            p.add_term(e, q(c));
        }
        p
    }

    /// Random homogeneous polynomial of the given degree.
    pub fn random_homogeneous<R: Rng>(nvars: usize, deg: u32, max_terms: usize, rng: &mut R) -> Poly {
        let mut p = Poly::zero(nvars);
        while p.is_zero() {
            for _ in 0..rng.gen_range(1..=max_terms.max(1)) {
                let e = random_monomial(nvars, deg, rng);
                p.add_term(e, q(rng.gen_range(-4..=4)));
            }
        }
        p
    }
}

fn random_monomial<R: Rng>(nvars: usize, deg: u32, rng: &mut R) -> Monomial {
    let mut e = vec![0; nvars];
    if nvars > 0 {
        for _ in 0..deg {
            e[rng.gen_range(0..nvars)] += 1;
        }
    }
    e
}

/// All exponent vectors in `nvars` variables of total degree exactly `deg`.
pub fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
    fn rec(k: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if k + 1 == cur.len() {
            cur[k] = left;
            out.push(cur.clone());
            return;
        }
        for a in (0..=left).rev() {
            cur[k] = a;
            rec(k + 1, left - a, cur, out);
        }
    }
    if nvars == 0 {
        return if deg == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    rec(0, deg, &mut vec![0; nvars], &mut out);
    out
}

/// All exponent vectors of total degree at most `deg`.
pub fn monomials_up_to(nvars: usize, deg: u32) -> Vec<Monomial> {
    (0..=deg).flat_map(|d| monomials_of_degree(nvars, d)).collect()
}

pub(crate) fn fmt_monomial(e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &a)| a > 0)
        .map(|(k, &a)| if a == 1 { format!("x{}", k + 1) } else { format!("x{}^{a}", k + 1) })
        .collect();
    parts.join("*")
}

pub(crate) fn fmt_rational(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest degree first
        let mut terms: Vec<(&Monomial, &Q)> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (idx, (e, c)) in terms.into_iter().enumerate() {
            let mono = fmt_monomial(e);
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            match (mono.is_empty(), abs.is_one()) {
                (true, _) => write!(f, "{}", fmt_rational(&abs))?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{}*{mono}", fmt_rational(&abs))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn x(k: usize) -> Poly {
        Poly::var(3, k)
    }

    #[test]
    fn divided_difference_basics() {
        // d(x1) = 1, d(1) = 0, d(x1^2) = x1 + x2
        assert_eq!(x(0).divided_difference(0, 1), Poly::one(3));
        assert!(Poly::one(3).divided_difference(0, 1).is_zero());
        assert_eq!(x(0).pow(2).divided_difference(0, 1), x(0).add(&x(1)));
        assert_eq!(x(1).divided_difference(0, 1), Poly::one(3).scale(&q(-1)));
    }

    #[test]
    fn divided_difference_matches_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let f = Poly::random(3, 6, 6, &mut rng);
            let d = f.divided_difference(0, 2);
            let lhs = d.mul(&x(0).sub(&x(2)));
            assert_eq!(lhs, f.sub(&f.swap(0, 2)));
            // nil Hecke: d^2 = 0
            assert!(f.divided_difference(1, 2).divided_difference(1, 2).is_zero());
        }
    }

    #[test]
    fn permutation_action() {
        let w = [1, 2, 0];
        assert_eq!(x(0).permute(&w), x(1));
        assert_eq!(x(2).permute(&w), x(0));
        let f = x(0).mul(&x(1).pow(2));
        assert_eq!(f.permute(&w), x(1).mul(&x(2).pow(2)));
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_up_to(4, 2).len(), 15);
        assert_eq!(monomials_of_degree(0, 0).len(), 1);
    }

    #[test]
    fn rendering() {
        let f = x(0).pow(2).scale(&q(3)).sub(&x(1)).add(&Poly::constant(3, Q::new(1.into(), 2.into())));
        assert_eq!(f.to_string(), "3*x1^2 - x2 + 1/2");
        assert_eq!(Poly::zero(2).to_string(), "0");
    }
}
