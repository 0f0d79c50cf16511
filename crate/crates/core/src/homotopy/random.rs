//! Seeded random complexes: short pieces built from the handle's short elements,
//! contractible pairs, then generator shuffles and elementary changes of basis.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{direct_sum, GenSpec, GradedAlgebra, GradedComplex, Matrix};
use crate::linalg::Q;

/// Short elements and the composable pairs among them that multiply to zero.
pub struct Bank<E> {
    pub elements: Vec<(usize, usize, E, i64)>,
    /// `(a, b)` with `b a = 0`, indices into `elements`.
    pub zero_pairs: Vec<(usize, usize)>,
}

impl<E: Clone> Bank<E> {
    pub fn new<A: GradedAlgebra<Elem = E>>(alg: &A) -> Self {
        let elements: Vec<(usize, usize, E, i64)> = alg
            .short_elements()
            .into_iter()
            .filter_map(|(s, t, e)| {
                let degs = alg.degrees(&e);
                (degs.len() == 1).then(|| (s, t, e, *degs.iter().next().unwrap()))
            })
            .collect();
        let mut zero_pairs = Vec::new();
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                if a.1 == b.0 && alg.is_zero(&alg.mul(&b.2, &a.2)) {
                    zero_pairs.push((i, j));
                }
            }
        }
        Bank { elements, zero_pairs }
    }
}

fn coefficient<R: Rng>(rng: &mut R) -> Q {
    let choices = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (3, 1)];
    let (n, d) = choices[rng.gen_range(0..choices.len())];
    Q::new(n.into(), d.into())
}

fn piece<A: GradedAlgebra, R: Rng>(alg: &A, bank: &Bank<A::Elem>, rng: &mut R) -> GradedComplex<A::Elem> {
    let s = rng.gen_range(-1..=1);
    let c = rng.gen_range(-1..=1);
    let mut diff: Matrix<A::Elem> = Matrix::new();
    match rng.gen_range(0..4) {
        0 => GradedComplex::new(vec![GenSpec::new(rng.gen_range(0..alg.num_idempotents()), s, c)], diff),
        1 if !bank.zero_pairs.is_empty() => {
            let (i, j) = bank.zero_pairs[rng.gen_range(0..bank.zero_pairs.len())];
            let (a, b) = (&bank.elements[i], &bank.elements[j]);
            let s1 = s + a.3 / 2;
            let s2 = s1 + b.3 / 2;
            diff.insert((1, 0), alg.scale(&a.2, &coefficient(rng)));
            diff.insert((2, 1), alg.scale(&b.2, &coefficient(rng)));
            GradedComplex::new(
                vec![GenSpec::new(a.0, s, c), GenSpec::new(a.1, s1, c + 1), GenSpec::new(b.1, s2, c + 2)],
                diff,
            )
        }
        _ => {
            let (src, tgt, e, deg) = &bank.elements[rng.gen_range(0..bank.elements.len())];
            diff.insert((1, 0), alg.scale(e, &coefficient(rng)));
            GradedComplex::new(vec![GenSpec::new(*src, s, c), GenSpec::new(*tgt, s + deg / 2, c + 1)], diff)
        }
    }
}

fn contractible<A: GradedAlgebra, R: Rng>(alg: &A, rng: &mut R) -> GradedComplex<A::Elem> {
    let i = rng.gen_range(0..alg.num_idempotents());
    let s = rng.gen_range(-1..=1);
    let c = rng.gen_range(-1..=1);
    let mut diff = Matrix::new();
    diff.insert((1, 0), alg.scale(&alg.idempotent(i), &coefficient(rng)));
    GradedComplex::new(vec![GenSpec::new(i, s, c), GenSpec::new(i, s, c + 1)], diff)
}

fn permute<E: Clone>(c: &GradedComplex<E>, order: &[usize]) -> GradedComplex<E> {
    // order[new] = old
    let mut new_of = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        new_of[old] = new;
    }
    GradedComplex {
        gens: order.iter().map(|&k| c.gens[k]).collect(),
        diff: c
            .diff
            .iter()
            .map(|(&(l, k), e)| ((new_of[l], new_of[k]), e.clone()))
            .collect(),
    }
}

fn add_to<A: GradedAlgebra>(alg: &A, m: &mut Matrix<A::Elem>, key: (usize, usize), v: A::Elem) {
    let sum = match m.remove(&key) {
        Some(old) => alg.add(&old, &v),
        None => v,
    };
    if !alg.is_zero(&sum) {
        m.insert(key, sum);
    }
}

/// Conjugates the differential by `1 + t E_{pq}`, which sends generator `q` to
/// `q + t p`; `p` and `q` sit in the same degree and `t` lies in `e_p A e_q`.
pub fn elementary<A: GradedAlgebra>(
    alg: &A,
    c: &GradedComplex<A::Elem>,
    p: usize,
    q: usize,
    t: &A::Elem,
) -> GradedComplex<A::Elem> {
    let mut diff = c.diff.clone();
    for (&(l, k), e) in &c.diff {
        if l == q {
            add_to(alg, &mut diff, (p, k), alg.mul(t, e));
        }
        if k == p {
            add_to(alg, &mut diff, (l, q), alg.scale(&alg.mul(e, t), &-Q::from_integer(1.into())));
        }
    }
    GradedComplex {
        gens: c.gens.clone(),
        diff,
    }
}

/// A valid complex, typically with hidden cancellable pairs.
pub fn random_complex<A: GradedAlgebra, R: Rng>(alg: &A, bank: &Bank<A::Elem>, rng: &mut R) -> GradedComplex<A::Elem> {
    let mut c = GradedComplex::zero();
    for _ in 0..rng.gen_range(1..=3) {
        c = direct_sum(&c, &piece(alg, bank, rng));
    }
    for _ in 0..rng.gen_range(0..=2) {
        c = direct_sum(&c, &contractible(alg, rng));
    }
    let mut order: Vec<usize> = (0..c.gens.len()).collect();
    order.shuffle(rng);
    c = permute(&c, &order);
    for _ in 0..rng.gen_range(0..=4) {
        let p = rng.gen_range(0..c.gens.len());
        let q = rng.gen_range(0..c.gens.len());
        let (gp, gq) = (c.gens[p], c.gens[q]);
        if p == q || gp.degree != gq.degree {
            continue;
        }
        let want = 2 * (gp.shift - gq.shift);
        let choices: Vec<&(usize, usize, A::Elem, i64)> = bank
            .elements
            .iter()
            .filter(|(s, t, _, d)| *s == gq.idem && *t == gp.idem && *d == want)
            .collect();
        if let Some((_, _, t, _)) = choices.choose(rng) {
            c = elementary(alg, &c, p, q, &alg.scale(t, &coefficient(rng)));
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy::{validate, SmashAlgebra};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_complexes_validate() {
        let alg = SmashAlgebra::new(2).unwrap();
        let bank = Bank::new(&alg);
        assert!(!bank.zero_pairs.is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let c = random_complex(&alg, &bank, &mut rng);
            validate(&alg, &c).unwrap();
        }
    }
}
