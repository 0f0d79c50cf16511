//! Verification batteries. Each case aggregates many individual checks and keeps the first
//! failing one as a witness.

use std::collections::BTreeMap;

use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::extalg::{compare_block, gdim_geo};
use crate::homotopy::json::AnyAlgebra;
use crate::homotopy::random::{random_complex, Bank};
use crate::homotopy::{
    cone, equal_up_to_reordering, euler_symbol, identity_map, minimize, validate, weight_truncate, EulerSymbol,
    GradedAlgebra,
};
use crate::klr::relations::trial_seed;
use crate::klr::{relation_suite, smash_center_dims, smash_slice_dim};
use crate::nilrep::{enumerate_nilreps, Multisegment};
use crate::paving::{count_points, poincare};
use crate::quiver::{dim_qvariety, enumerate_comps, enumerate_complete_comps, Composition, DimVector, Quiver};
use crate::series::{bgl, HalfLaurentSeries, DEFAULT_TRUNC};

pub const SUITE_NAMES: [&str; 4] = ["paving-oracle", "klr-match", "relations", "homotopy"];
pub const SUITE_SCHEMA: &str = "suite/1";

pub const PAVING_QUIVERS: [&str; 6] = ["A1", "A2", "A3", "cyclic:1", "cyclic:2", "cyclic:3"];
pub const KLR_MATCH_QUIVERS: [&str; 4] = ["A2", "A3", "cyclic:2", "cyclic:3"];
pub const ORACLE_PRIMES: [u64; 3] = [2, 3, 5];
pub const HOMOTOPY_HANDLES: [&str; 5] = ["klr:A1:2", "klr:A1:3", "klr:A2:2,1", "smash:2", "smash:3"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteOptions {
    pub trunc: i64,
    /// Largest total dimension; `None` picks the battery's own default.
    pub max_total: Option<usize>,
    pub trials: usize,
    pub corpus: usize,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            trunc: DEFAULT_TRUNC,
            max_total: None,
            trials: 100,
            corpus: 200,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseVerdict {
    pub case: String,
    pub checks: usize,
    pub failures: usize,
    pub witness: Option<String>,
    pub detail: Value,
}

impl CaseVerdict {
    fn new(case: impl Into<String>) -> Self {
        CaseVerdict {
            case: case.into(),
            checks: 0,
            failures: 0,
            witness: None,
            detail: Value::Null,
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    fn error(&mut self, e: &Error) {
        self.check(false, || e.to_string());
    }

    pub fn pass(&self) -> bool {
        self.failures == 0 && self.checks > 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema: &'static str,
    pub suite: String,
    pub options: SuiteOptions,
    pub cases: Vec<CaseVerdict>,
    pub checks: usize,
    pub failures: usize,
    pub pass: bool,
}

impl SuiteReport {
    fn new(suite: &str, options: &SuiteOptions, cases: Vec<CaseVerdict>) -> Self {
        let checks = cases.iter().map(|c| c.checks).sum();
        let failures = cases.iter().map(|c| c.failures).sum();
        let pass = cases.iter().all(CaseVerdict::pass);
        SuiteReport {
            schema: SUITE_SCHEMA,
            suite: suite.to_string(),
            options: options.clone(),
            cases,
            checks,
            failures,
            pass,
        }
    }
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport> {
    let cases = match name {
        "paving-oracle" => paving_oracle(opts),
        "klr-match" => klr_match(opts),
        "relations" => relations(opts),
        "homotopy" => homotopy(opts),
        _ => {
            return Err(Error::Parse {
                what: "suite name",
                input: name.to_string(),
            })
        }
    };
    Ok(SuiteReport::new(name, opts, cases))
}

fn quiver(s: &str) -> Quiver {
    s.parse().expect("built-in quiver spec")
}

fn dims_up_to(q: &Quiver, lo: usize, hi: usize) -> Vec<DimVector> {
    (lo..=hi).flat_map(|t| DimVector::all_with_total(q.num_vertices(), t)).collect()
}

/// Poincaré polynomial of every paving against the point counts over the oracle primes.
pub fn paving_oracle(opts: &SuiteOptions) -> Vec<CaseVerdict> {
    let max = opts.max_total.unwrap_or(4);
    let jobs: Vec<(Quiver, DimVector)> = PAVING_QUIVERS
        .iter()
        .flat_map(|s| {
            let q = quiver(s);
            dims_up_to(&q, 0, max).into_iter().map(move |d| (q, d))
        })
        .collect();
    let mut cases: Vec<CaseVerdict> = jobs.par_iter().map(|(q, d)| paving_case(q, d)).collect();
    cases.push(subregular_case());
    cases
}

fn paving_case(q: &Quiver, d: &DimVector) -> CaseVerdict {
    let mut v = CaseVerdict::new(format!("{q} d={d}"));
    let reps = match enumerate_nilreps(q, d) {
        Ok(r) => r,
        Err(e) => {
            v.error(&e);
            return v;
        }
    };
    let comps = enumerate_comps(d);
    let mut pairs = 0;
    for m in &reps {
        for c in &comps {
            pairs += 1;
            check_paving(&mut v, q, m, c);
        }
    }
    v.detail = json!({ "multisegments": reps.len(), "compositions": comps.len(), "pairs": pairs });
    v
}

fn check_paving(v: &mut CaseVerdict, q: &Quiver, m: &Multisegment, c: &Composition) {
    let p = match poincare(q, m, c) {
        Ok(p) => p,
        Err(e) => return v.error(&e),
    };
    for prime in ORACLE_PRIMES {
        match count_points(q, m, c, prime) {
            Ok(n) => v.check(p.eval(prime) == n as u128, || {
                format!("M={m} comp={c} q={prime}: cells give {}, count gives {n}", p.eval(prime))
            }),
            Err(e) => v.error(&e),
        }
    }
}

fn subregular_case() -> CaseVerdict {
    let q = quiver("cyclic:1");
    let m = Multisegment::parse(&q, "(0,2)+(0,1)").expect("valid multisegment");
    let c = Composition::parse(1, "1;1;1", None).expect("valid composition");
    let mut v = CaseVerdict::new("cyclic:1 springer-subregular");
    check_paving(&mut v, &q, &m, &c);
    if let Ok(p) = poincare(&q, &m, &c) {
        let counts: BTreeMap<String, u64> = ORACLE_PRIMES
            .iter()
            .filter_map(|&p| count_points(&q, &m, &c, p).ok().map(|n| (p.to_string(), n)))
            .collect();
        v.detail = json!({ "poincare": p.coefficients(), "counts": counts });
    }
    v
}

/// `sum_{w in S_n} u^{-2 l(w)} (1 - u^2)^{-n}`.
pub fn nil_hecke_closed_form(n: usize, trunc: i64) -> HalfLaurentSeries {
    let lengths = (0..n).permutations(n).map(|w| {
        let inv = (0..n).tuple_combinations().filter(|&(a, b)| w[a] > w[b]).count();
        (-2 * inv as i64, 1)
    });
    let sum = HalfLaurentSeries::from_terms(lengths, trunc + 2 * (n * n) as i64);
    let poly = (0..n).fold(HalfLaurentSeries::one(trunc + 2 * (n * n) as i64), |acc, _| {
        acc.mul(&bgl(1, trunc + 2 * (n * n) as i64))
    });
    sum.mul(&poly).truncate(trunc)
}

/// Coefficient `u^{2k}` of block `(i, j)` against `u^{2(k + d_i - d_j)}` of `(j, i)`.
fn check_transpose(
    v: &mut CaseVerdict,
    q: &Quiver,
    i: &Composition,
    j: &Composition,
    gij: &HalfLaurentSeries,
    gji: &HalfLaurentSeries,
) {
    let off = 2 * (dim_qvariety(q, i) as i64 - dim_qvariety(q, j) as i64);
    let lo = gij.min_exp().min(gji.min_exp() - off);
    let hi = gij.trunc().min(gji.trunc() - off);
    let ok = (lo..=hi).all(|e| gij.coeff(e).unwrap_or(0) == gji.coeff(e + off).unwrap_or(0));
    v.check(ok, || format!("transpose symmetry fails for {i} / {j}"));
}

/// Geometric against shifted KLR blocks, the nil Hecke closed form, and transpose symmetry.
pub fn klr_match(opts: &SuiteOptions) -> Vec<CaseVerdict> {
    let max = opts.max_total.unwrap_or(3);
    let trunc = opts.trunc;
    let mut jobs: Vec<(Quiver, DimVector)> = KLR_MATCH_QUIVERS
        .iter()
        .flat_map(|s| {
            let q = quiver(s);
            dims_up_to(&q, 1, max).into_iter().map(move |d| (q, d))
        })
        .collect();
    let a1 = quiver("A1");
    jobs.extend((1..=max).map(|n| (a1, DimVector::new(vec![n]))));
    jobs.par_iter()
        .map(|(q, d)| {
            let mut v = CaseVerdict::new(format!("{q} d={d}"));
            let comps = enumerate_complete_comps(d);
            let mut geo: BTreeMap<(usize, usize), HalfLaurentSeries> = BTreeMap::new();
            for (a, i) in comps.iter().enumerate() {
                for (b, j) in comps.iter().enumerate() {
                    match compare_block(q, d, i, j, trunc) {
                        Ok(r) => {
                            v.check(r.normalized_match, || {
                                format!("block {i} -> {j} differs at u^{:?}", r.first_discrepancy)
                            });
                            geo.insert((a, b), r.geometric);
                        }
                        Err(e) => v.error(&e),
                    }
                }
            }
            for ((a, b), g) in &geo {
                if let Some(t) = geo.get(&(*b, *a)) {
                    check_transpose(&mut v, q, &comps[*a], &comps[*b], g, t);
                }
            }
            if q.num_vertices() == 1 && !q.is_cyclic() {
                let n = d.total();
                let want = nil_hecke_closed_form(n, trunc);
                for c in &comps {
                    match gdim_geo(q, d, c, c, trunc) {
                        Ok(g) => v.check(g.first_difference(&want).is_none(), || {
                            format!("nil Hecke closed form fails for n = {n}")
                        }),
                        Err(e) => v.error(&e),
                    }
                }
            }
            v.detail = json!({ "blocks": geo.len() });
            v
        })
        .collect()
}

/// Partitions of `k` into parts of size at most `m`.
pub fn bounded_partitions(k: usize, m: usize) -> usize {
    if k == 0 {
        return 1;
    }
    if m == 0 {
        return 0;
    }
    (1..=m.min(k)).map(|p| bounded_partitions(k - p, p)).sum()
}

/// KLR relation checks, smash-product centers and slice dimensions.
pub fn relations(opts: &SuiteOptions) -> Vec<CaseVerdict> {
    let max = opts.max_total.unwrap_or(4);
    let jobs: Vec<(Quiver, DimVector)> = PAVING_QUIVERS
        .iter()
        .flat_map(|s| {
            let q = quiver(s);
            dims_up_to(&q, 1, max).into_iter().map(move |d| (q, d))
        })
        .collect();
    // trials already run in parallel inside each suite
    let mut cases: Vec<CaseVerdict> = jobs
        .iter()
        .map(|(q, d)| {
            let mut v = CaseVerdict::new(format!("{q} d={d}"));
            match relation_suite(q, d, opts.trials, opts.seed) {
                Ok(r) => {
                    for rel in &r.relations {
                        v.checks += rel.checks;
                        v.failures += rel.failures;
                        if v.witness.is_none() {
                            v.witness = rel.witness.clone();
                        }
                    }
                    v.check(r.faithfulness.pass, || {
                        format!("faithfulness rank {} of {}", r.faithfulness.rank, r.faithfulness.operators)
                    });
                }
                Err(e) => v.error(&e),
            }
            v
        })
        .collect();
    for n in [2, 3] {
        let mut v = CaseVerdict::new(format!("smash n={n}"));
        let dims = smash_center_dims(n, 6);
        for (deg, &got) in dims.iter().enumerate() {
            let want = bounded_partitions(deg, n);
            v.check(got == want, || format!("center in degree {deg}: {got}, partitions give {want}"));
        }
        let series = crate::extalg::springer_smash_gdim(n, opts.trunc);
        for deg in 0..=4u32 {
            let want = series.coeff(2 * deg as i64).unwrap_or(0);
            let got = smash_slice_dim(n, deg) as i64;
            v.check(got == want, || format!("slice {deg}: {got} basis pairs, series gives {want}"));
        }
        v.detail = json!({ "center_dims": dims });
        cases.push(v);
    }
    cases
}

fn homotopy_case<A: GradedAlgebra>(name: &str, alg: &A, opts: &SuiteOptions) -> CaseVerdict {
    let bank = Bank::new(alg);
    let results: Vec<CaseVerdict> = (0..opts.corpus)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(opts.seed, k));
            let c = random_complex(alg, &bank, &mut rng);
            let mut v = CaseVerdict::new(String::new());
            if let Err(e) = check_complex(&mut v, alg, &c) {
                v.error(&e);
            }
            if let Some(w) = v.witness.as_mut() {
                *w = format!("complex {k}: {w}");
            }
            v
        })
        .collect();
    let mut v = CaseVerdict::new(name);
    let mut cancellations = 0;
    for r in results {
        v.checks += r.checks;
        v.failures += r.failures;
        if v.witness.is_none() {
            v.witness = r.witness;
        }
        cancellations += r.detail.as_u64().unwrap_or(0);
    }
    v.detail = json!({
        "complexes": opts.corpus,
        "cancellations": cancellations,
        "equality_bound": alg.equality_bound(),
    });
    v
}

fn plus(a: &EulerSymbol, b: &EulerSymbol) -> EulerSymbol {
    let mut out = a.clone();
    for (k, v) in b {
        *out.entry(*k).or_default() += v;
    }
    out.retain(|_, v| *v != 0);
    out
}

fn check_complex<A: GradedAlgebra>(
    v: &mut CaseVerdict,
    alg: &A,
    c: &crate::homotopy::GradedComplex<A::Elem>,
) -> Result<()> {
    validate(alg, c)?;
    v.check(true, String::new);
    let e = euler_symbol(c);

    let cone_id = cone(alg, &identity_map(alg, c))?;
    let m_id = minimize(alg, &cone_id)?;
    v.check(m_id.complex.is_empty(), || "cone of the identity does not minimize to zero".into());

    let m = minimize(alg, c)?;
    v.detail = json!(m.cancellations.len());
    validate(alg, &m.complex)?;
    v.check(euler_symbol(&m.complex) == e, || "minimize changes the Euler symbol".into());
    let mm = minimize(alg, &m.complex)?;
    v.check(mm.cancellations.is_empty() && equal_up_to_reordering(alg, &mm.complex, &m.complex), || {
        "minimize is not idempotent".into()
    });

    let degs = c.degrees();
    let (lo, hi) = match (degs.first(), degs.last()) {
        (Some(&lo), Some(&hi)) => (lo - 1, hi),
        _ => (0, 0),
    };
    for n in lo..=hi {
        let t = weight_truncate(alg, c, n)?;
        validate(alg, &t.upper)?;
        validate(alg, &t.lower)?;
        let cn = cone(alg, &t.inclusion)?;
        validate(alg, &cn)?;
        let ec = euler_symbol(&cn);
        v.check(plus(&ec, &euler_symbol(&t.upper)) == e, || format!("cone exactness fails at n = {n}"));
        let lhs = minimize(alg, &cn)?.complex;
        let rhs = minimize(alg, &t.lower)?.complex;
        v.check(equal_up_to_reordering(alg, &lhs, &rhs), || {
            format!("reassembly fails at n = {n}: {} vs {} generators", lhs.len(), rhs.len())
        });
    }
    Ok(())
}

/// Randomized complexes over each handle: validity, cone of the identity, Euler symbol
/// invariance, idempotence of minimization and weight-truncation reassembly.
pub fn homotopy(opts: &SuiteOptions) -> Vec<CaseVerdict> {
    HOMOTOPY_HANDLES.iter().map(|spec| homotopy_one(spec, opts)).collect()
}

/// The homotopy battery over one handle given as `klr:<quiver>:<dim>` or `smash:<n>`.
pub fn homotopy_one(spec: &str, opts: &SuiteOptions) -> CaseVerdict {
    match AnyAlgebra::parse_spec(spec) {
        Ok(AnyAlgebra::Klr(a)) => homotopy_case(spec, &a, opts),
        Ok(AnyAlgebra::Smash(a)) => homotopy_case(spec, &a, opts),
        Err(e) => {
            let mut v = CaseVerdict::new(spec);
            v.error(&e);
            v
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let got: Vec<usize> = (0..7).map(|k| bounded_partitions(k, 3)).collect();
        assert_eq!(got, vec![1, 1, 2, 3, 4, 5, 7]);
        assert_eq!(bounded_partitions(6, 6), 11);
    }

    #[test]
    fn closed_form_two_strands() {
        // (1 + u^-2) / (1 - u^2)^2 = u^-2 + 3 + 5u^2 + ...
        let s = nil_hecke_closed_form(2, 6);
        assert_eq!(s.coeff(-2), Some(1));
        assert_eq!(s.coeff(0), Some(3));
        assert_eq!(s.coeff(2), Some(5));
    }

    #[test]
    fn small_batteries_pass() {
        let opts = SuiteOptions {
            max_total: Some(2),
            trials: 3,
            corpus: 5,
            ..SuiteOptions::default()
        };
        for name in SUITE_NAMES {
            let r = run_suite(name, &opts).unwrap();
            assert!(r.pass, "{name}: {:?}", r.cases.iter().find(|c| !c.pass()));
        }
        assert!(run_suite("nope", &opts).is_err());
    }
}
