//! Seeded relation checks for the polynomial representation.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{act_unchecked, apply_generator, Generator, KLROperator, KlrContext, LabeledPoly, Poly, Word};
use crate::linalg::{sparse_rank, Q};
use crate::quiver::{DimVector, Quiver};

/// Polynomials in the suite have degree at most this.
pub const SUITE_DEGREE: u32 = 6;

pub const RELATIONS: [&str; 9] = [
    "idempotents",
    "x-commute",
    "label-exchange",
    "psi-x-left",
    "psi-x-right",
    "quadratic",
    "braid",
    "distant-commute",
    "homogeneity",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationVerdict {
    pub relation: String,
    pub checks: usize,
    pub failures: usize,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaithfulnessCheck {
    pub operators: usize,
    pub rank: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub quiver: Quiver,
    pub dim: DimVector,
    pub trials: usize,
    pub seed: u64,
    pub degree_bound: u32,
    pub relations: Vec<RelationVerdict>,
    pub faithfulness: FaithfulnessCheck,
    pub pass: bool,
}

/// Per-trial seed, a fixed mix of the master seed and the trial index.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ (trial as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Default)]
struct Tally {
    checks: BTreeMap<&'static str, (usize, usize, Option<String>)>,
}

impl Tally {
    fn record(&mut self, rel: &'static str, ok: bool, witness: impl FnOnce() -> String) {
        let entry = self.checks.entry(rel).or_default();
        entry.0 += 1;
        if !ok {
            entry.1 += 1;
            if entry.2.is_none() {
                entry.2 = Some(witness());
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        for (rel, (c, f, w)) in other.checks {
            let entry = self.checks.entry(rel).or_default();
            entry.0 += c;
            entry.1 += f;
            if entry.2.is_none() {
                entry.2 = w;
            }
        }
    }
}

fn run(ctx: &KlrContext, ops: &[Generator], m: &LabeledPoly) -> LabeledPoly {
    ops.iter().rev().fold(m.clone(), |v, g| apply_generator(ctx, g, &v))
}

fn random_labeled(ctx: &KlrContext, rng: &mut ChaCha8Rng) -> LabeledPoly {
    let mut m = LabeledPoly::zero();
    for w in ctx.words() {
        m.insert(w.clone(), Poly::random(ctx.n(), SUITE_DEGREE, 6, rng));
    }
    m
}

fn swapped(w: &[usize], r: usize) -> Word {
    let mut s = w.to_vec();
    s.swap(r, r + 1);
    s
}

fn one_trial(ctx: &KlrContext, seed: u64) -> Tally {
    use Generator::{Idempotent as E, Psi, X};
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = ctx.n();
    let m = random_labeled(ctx, &mut rng);
    let mut t = Tally::default();
    let words = ctx.words().to_vec();

    // orthogonal idempotents summing to the identity
    let mut total = LabeledPoly::zero();
    for i in &words {
        let ei = run(ctx, &[E(i.clone())], &m);
        for j in &words {
            let lhs = run(ctx, &[E(i.clone()), E(j.clone())], &m);
            let rhs = if i == j { ei.clone() } else { LabeledPoly::zero() };
            t.record("idempotents", lhs == rhs, || format!("e({i:?}) e({j:?}) on {m}"));
        }
        total = total.add(&ei);
    }
    t.record("idempotents", total == m, || format!("sum of idempotents on {m}"));

    for k in 0..n {
        for l in k + 1..n {
            let a = run(ctx, &[X(k), X(l)], &m);
            let b = run(ctx, &[X(l), X(k)], &m);
            t.record("x-commute", a == b, || format!("x{} x{} on {m}", k + 1, l + 1));
        }
    }

    for i in &words {
        let ei = run(ctx, &[E(i.clone())], &m);
        for r in 0..n.saturating_sub(1) {
            let si = swapped(i, r);
            let a = run(ctx, &[Psi(r)], &ei);
            let b = run(ctx, &[E(si.clone()), Psi(r)], &m);
            t.record("label-exchange", a == b, || format!("psi{} e({i:?})", r + 1));

            let delta = if i[r] == i[r + 1] { ei.clone() } else { LabeledPoly::zero() };
            let left = run(ctx, &[Psi(r), X(r)], &ei).sub(&run(ctx, &[X(r + 1), Psi(r)], &ei));
            t.record("psi-x-left", left == delta, || format!("(psi x_r - x_(r+1) psi) e({i:?}), r = {}", r + 1));
            let right = run(ctx, &[X(r), Psi(r)], &ei).sub(&run(ctx, &[Psi(r), X(r + 1)], &ei));
            t.record("psi-x-right", right == delta, || format!("(x_r psi - psi x_(r+1)) e({i:?}), r = {}", r + 1));

            let sq = run(ctx, &[Psi(r), Psi(r)], &ei);
            let want = ei.mul_poly(&ctx.q_poly(i[r], i[r + 1], r, r + 1));
            t.record("quadratic", sq == want, || format!("psi{}^2 e({i:?})", r + 1));

            for k in 0..n {
                if k != r && k != r + 1 {
                    let a = run(ctx, &[Psi(r), X(k)], &ei);
                    let b = run(ctx, &[X(k), Psi(r)], &ei);
                    t.record("distant-commute", a == b, || format!("psi{} x{} e({i:?})", r + 1, k + 1));
                }
            }
            for s in r + 2..n.saturating_sub(1) {
                let a = run(ctx, &[Psi(r), Psi(s)], &ei);
                let b = run(ctx, &[Psi(s), Psi(r)], &ei);
                t.record("distant-commute", a == b, || format!("psi{} psi{} e({i:?})", r + 1, s + 1));
            }
        }
        for r in 0..n.saturating_sub(2) {
            let lhs = run(ctx, &[Psi(r + 1), Psi(r), Psi(r + 1)], &ei)
                .sub(&run(ctx, &[Psi(r), Psi(r + 1), Psi(r)], &ei));
            let want = if i[r] == i[r + 2] {
                let q = ctx.q_poly(i[r], i[r + 1], r, r + 1);
                ei.mul_poly(&q.divided_difference(r, r + 2)).scale(&crate::linalg::q(-1))
            } else {
                LabeledPoly::zero()
            };
            t.record("braid", lhs == want, || format!("braid at r = {} on e({i:?})", r + 1));
        }
    }

    // homogeneity on a random homogeneous input in each label
    for i in &words {
        let deg = rng.gen_range(0..=SUITE_DEGREE);
        let h = LabeledPoly::single(i.clone(), Poly::random_homogeneous(n, deg, 4, &mut rng));
        let d0 = h.homogeneous_degree(ctx).expect("homogeneous input");
        let mut gens: Vec<Generator> = words.iter().map(|w| E(w.clone())).collect();
        gens.extend((0..n).map(X));
        gens.extend((0..n.saturating_sub(1)).map(Psi));
        for g in gens {
            let out = apply_generator(ctx, &g, &h);
            let ok = out.is_zero() || out.homogeneous_degree(ctx) == Some(d0 + ctx.generator_degree(&g, i));
            t.record("homogeneity", ok, || format!("{g} on {h}"));
        }
    }
    t
}

/// Permutations of length at most two, as reduced words of strand swaps.
fn short_reduced_words(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    let mut seen: Vec<Vec<usize>> = vec![(0..n).collect()];
    let perm_of = |w: &[usize]| {
        let mut p: Vec<usize> = (0..n).collect();
        for &r in w {
            p.swap(r, r + 1);
        }
        p
    };
    for r in 0..n.saturating_sub(1) {
        out.push(vec![r]);
        seen.push(perm_of(&[r]));
    }
    for r in 0..n.saturating_sub(1) {
        for s in 0..n.saturating_sub(1) {
            if r == s {
                continue;
            }
            let p = perm_of(&[r, s]);
            if !seen.contains(&p) {
                seen.push(p);
                out.push(vec![r, s]);
            }
        }
    }
    out
}

/// Values of an operator on the staircase inputs, keyed by (input, output monomial).
type Evaluation = BTreeMap<(usize, Vec<u32>), Q>;

/// Linear independence of the operators `psi_w x^a e(i)` (length of `w` at most 2, `|a|` at
/// most 2), tested through their values on the staircase monomials of each label.
pub fn faithfulness_check(ctx: &KlrContext) -> FaithfulnessCheck {
    let n = ctx.n();
    // staircase monomials span the representation over symmetric functions, which every
    // operator commutes with
    let staircase: Vec<Poly> = (0..n)
        .map(|k| 0..k as u32 + 1)
        .multi_cartesian_product()
        .map(|b| Poly::monomial(pad(b, n), Q::one()))
        .collect();
    let monos = super::poly::monomials_up_to(n, 2);
    let words = short_reduced_words(n);
    let mut operators = 0;
    let mut rank = 0;
    for i in ctx.words() {
        // operators with source label i, grouped by target label
        let mut blocks: BTreeMap<Word, Vec<Evaluation>> = BTreeMap::new();
        for w in &words {
            for a in &monos {
                let mut gens: Vec<Generator> = w.iter().rev().map(|&r| Generator::Psi(r)).collect();
                for (k, &p) in a.iter().enumerate() {
                    gens.extend(std::iter::repeat_n(Generator::X(k), p as usize));
                }
                let op = KLROperator::product(gens);
                let mut target = None;
                let mut v = BTreeMap::new();
                for (idx, f) in staircase.iter().enumerate() {
                    let img = act_unchecked(ctx, &op, &LabeledPoly::single(i.clone(), f.clone()));
                    for (l, g) in img.components() {
                        target = Some(l.clone());
                        for (e, c) in g.terms() {
                            v.insert((idx, e.clone()), c.clone());
                        }
                    }
                }
                operators += 1;
                // an operator acting by zero lands in no block and lowers the rank
                if let Some(t) = target {
                    blocks.entry(t).or_default().push(v);
                }
            }
        }
        rank += blocks.values().map(|b| sparse_rank(b)).sum::<usize>();
    }
    FaithfulnessCheck {
        operators,
        rank,
        pass: rank == operators,
    }
}

fn pad(mut b: Vec<u32>, n: usize) -> Vec<u32> {
    b.resize(n, 0);
    b
}

/// Runs every relation on `trials` seeded random inputs.
pub fn relation_suite(q: &Quiver, d: &DimVector, trials: usize, seed: u64) -> crate::Result<RelationReport> {
    let ctx = KlrContext::new(q, d)?;
    let tallies: Vec<Tally> = (0..trials)
        .into_par_iter()
        .map(|t| one_trial(&ctx, trial_seed(seed, t)))
        .collect();
    let mut total = Tally::default();
    for t in tallies {
        total.merge(t);
    }
    let relations: Vec<RelationVerdict> = RELATIONS
        .iter()
        .map(|&rel| {
            let (checks, failures, witness) = total.checks.remove(rel).unwrap_or_default();
            RelationVerdict {
                relation: rel.to_string(),
                checks,
                failures,
                witness,
            }
        })
        .collect();
    let faithfulness = faithfulness_check(&ctx);
    let pass = faithfulness.pass && relations.iter().all(|r| r.failures == 0);
    Ok(RelationReport {
        quiver: *q,
        dim: d.clone(),
        trials,
        seed,
        degree_bound: SUITE_DEGREE,
        relations,
        faithfulness,
        pass,
    })
}
