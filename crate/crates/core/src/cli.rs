//! The `springer` command line.
//!
//! Exit codes: 0 on success, 2 when a comparison or self-test finds a mismatch, 1 on
//! usage and input errors. JSON output always carries a `"schema": "<name>/1"` field.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::extalg::{compare_block, gdim_alg_klr, gdim_geo};
use crate::homotopy::json::{from_doc, parse_doc, to_doc, AnyAlgebra};
use crate::homotopy::random::{random_complex, Bank};
use crate::homotopy::{euler_symbol, minimize, shift, twist, validate, weight_truncate, GradedAlgebra, GradedComplex};
use crate::klr::relation_suite;
use crate::nilrep::{end_dim, enumerate_nilreps, orbit_dim, Multisegment};
use crate::paving::{count_points, is_prime, paving_cells};
use crate::quiver::{dim_qvariety, enumerate_comps, enumerate_complete_comps, Composition, DimVector, Quiver};
use crate::series::{HalfLaurentSeries, DEFAULT_TRUNC};
use crate::suites::{run_suite, SuiteOptions, SUITE_NAMES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "springer", version, about = "Springer theory for type A and cyclic quivers")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Args)]
pub struct Common {
    /// `A<n>` or `cyclic:<n>`.
    #[arg(long, global = true)]
    pub quiver: Option<String>,
    /// Dimension vector, e.g. `1,1`.
    #[arg(long, global = true)]
    pub dim: Option<String>,
    /// Series are exact up to and including `u^trunc`.
    #[arg(long, global = true, default_value_t = DEFAULT_TRUNC)]
    pub trunc: i64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads; 0 uses one per core. Output does not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GdimMode {
    Geo,
    Alg,
    Compare,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Nilpotent orbits of the given dimension as multisegments.
    Orbits,
    /// Cells of the affine paving of a quiver flag variety fibre.
    Paving {
        #[arg(long)]
        rep: String,
        #[arg(long)]
        comp: String,
    },
    /// Points of the fibre over a prime field, checked against the paving.
    Count {
        #[arg(long)]
        rep: String,
        #[arg(long)]
        comp: String,
        #[arg(long)]
        q: u64,
    },
    /// One block of the extension algebra.
    Gdim {
        #[arg(long, value_enum, default_value_t = GdimMode::Compare)]
        mode: GdimMode,
        #[arg(long = "word-i", alias = "comp-i")]
        word_i: String,
        #[arg(long = "word-j", alias = "comp-j")]
        word_j: String,
    },
    /// All geometric blocks, with KLR comparisons on complete pairs.
    GdimTable {
        /// Include compositions with parts of dimension above one.
        #[arg(long)]
        all_comps: bool,
    },
    /// Relation checks of the polynomial representation.
    KlrSelftest {
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Operations on complexes of graded free modules.
    Complex {
        #[command(subcommand)]
        op: ComplexOp,
    },
    /// A verification battery.
    Suite {
        #[arg(value_parser = SUITE_NAMES)]
        name: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 200)]
        corpus: usize,
        #[arg(long)]
        max_total: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ComplexOp {
    Validate {
        /// `complex/1` document; `-` reads standard input.
        input: String,
    },
    Minimize { input: String },
    Euler { input: String },
    Shift {
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        by: i64,
    },
    Twist {
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        by: i64,
    },
    Truncate {
        input: String,
        /// Split between degrees `at` and `at + 1`.
        #[arg(long, allow_hyphen_values = true)]
        at: i64,
    },
    Random {
        /// `klr:<quiver>:<dim>` or `smash:<n>`; defaults to the KLR algebra of --quiver/--dim.
        #[arg(long)]
        algebra: Option<String>,
    },
}

struct Outcome {
    doc: Value,
    table: String,
    mismatch: bool,
}

impl Outcome {
    fn ok(doc: Value, table: String) -> Self {
        Outcome {
            doc,
            table,
            mismatch: false,
        }
    }
}

fn with_schema(name: &str, body: Value) -> Value {
    let mut m = Map::new();
    m.insert("schema".into(), Value::String(format!("{name}/1")));
    if let Value::Object(rest) = body {
        m.extend(rest);
    }
    Value::Object(m)
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.common.threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok(o) => {
            let text = match cli.common.format {
                Format::Json => serde_json::to_string_pretty(&o.doc).expect("documents serialize") + "\n",
                Format::Table => o.table,
            };
            let _ = out.write_all(text.as_bytes());
            if o.mismatch {
                EXIT_MISMATCH
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn quiver(c: &Common) -> CliResult<Quiver> {
    let s = c
        .quiver
        .as_deref()
        .ok_or_else(|| CliError::Usage("--quiver is required".into()))?;
    Ok(s.parse()?)
}

fn dim(c: &Common, q: &Quiver) -> CliResult<DimVector> {
    let s = c
        .dim
        .as_deref()
        .ok_or_else(|| CliError::Usage("--dim is required".into()))?;
    Ok(DimVector::parse_for(q, s)?)
}

/// The representation, plus the dimension vector: `--dim` if given (and then checked), else
/// that of the representation.
fn rep_and_dim(c: &Common, q: &Quiver, rep: &str) -> CliResult<(Multisegment, DimVector)> {
    let m = Multisegment::parse(q, rep)?;
    let d = m.dim_vector(q);
    if c.dim.is_some() {
        let given = dim(c, q)?;
        if given != d {
            return Err(Error::DimensionMismatch {
                expected: given.to_string(),
                found: d.to_string(),
            }
            .into());
        }
    }
    Ok((m, d))
}

fn execute(cli: &Cli) -> CliResult<Outcome> {
    let c = &cli.common;
    match &cli.command {
        Command::Orbits => orbits(c),
        Command::Paving { rep, comp } => paving(c, rep, comp),
        Command::Count { rep, comp, q } => count(c, rep, comp, *q),
        Command::Gdim { mode, word_i, word_j } => gdim(c, *mode, word_i, word_j),
        Command::GdimTable { all_comps } => gdim_table(c, *all_comps),
        Command::KlrSelftest { trials } => klr_selftest(c, *trials),
        Command::Complex { op } => complex(c, op),
        Command::Suite {
            name,
            trials,
            corpus,
            max_total,
        } => suite(c, name, *trials, *corpus, *max_total),
    }
}

fn orbits(c: &Common) -> CliResult<Outcome> {
    let q = quiver(c)?;
    let d = dim(c, &q)?;
    let reps = enumerate_nilreps(&q, &d)?;
    let mut table = format!("{} orbits of dimension {d} on {q}\n", reps.len());
    let rows: Vec<Value> = reps
        .iter()
        .map(|m| {
            let (o, e) = (orbit_dim(&q, m), end_dim(&q, m));
            let _ = writeln!(table, "{m}\torbit dim {o}\tend dim {e}");
            json!({ "multisegment": m, "orbit_dim": o, "end_dim": e })
        })
        .collect();
    let doc = json!({ "quiver": q, "dim": d, "count": reps.len(), "orbits": rows });
    Ok(Outcome::ok(with_schema("orbits", doc), table))
}

fn paving(c: &Common, rep: &str, comp: &str) -> CliResult<Outcome> {
    let q = quiver(c)?;
    let (m, d) = rep_and_dim(c, &q, rep)?;
    let comp = Composition::parse(q.num_vertices(), comp, Some(&d))?;
    let cells = paving_cells(&q, &m, &comp)?;
    let p = cells.poincare();
    let table = format!(
        "cells {:?}\npoincare {}\neuler {}\n",
        cells.dims(),
        p.coefficients().iter().map(|(e, k)| format!("{k}q^{e}")).join(" + "),
        p.euler()
    );
    let doc = json!({
        "quiver": q, "rep": m, "comp": comp,
        "cells": cells.dims(), "poincare": p, "euler": p.euler(),
    });
    Ok(Outcome::ok(with_schema("paving", doc), table))
}

fn count(c: &Common, rep: &str, comp: &str, prime: u64) -> CliResult<Outcome> {
    if !is_prime(prime) {
        return Err(Error::NotPrime(prime).into());
    }
    let q = quiver(c)?;
    let (m, d) = rep_and_dim(c, &q, rep)?;
    let comp = Composition::parse(q.num_vertices(), comp, Some(&d))?;
    let n = count_points(&q, &m, &comp, prime)?;
    let from_cells = paving_cells(&q, &m, &comp)?.poincare().eval(prime);
    let ok = from_cells == n as u128;
    let doc = json!({
        "quiver": q, "rep": m, "comp": comp, "q": prime,
        "count": n, "from_cells": from_cells.to_string(), "match": ok,
    });
    let table = format!("{n} points over F_{prime}; paving gives {from_cells}\n");
    Ok(Outcome {
        doc: with_schema("count", doc),
        table,
        mismatch: !ok,
    })
}

fn series_table(s: &HalfLaurentSeries) -> String {
    format!("{s} + O(u^{})", s.trunc() + 1)
}

fn gdim(c: &Common, mode: GdimMode, wi: &str, wj: &str) -> CliResult<Outcome> {
    let q = quiver(c)?;
    let d = dim(c, &q)?;
    let i = Composition::parse(q.num_vertices(), wi, Some(&d))?;
    let j = Composition::parse(q.num_vertices(), wj, Some(&d))?;
    let mut doc = json!({ "quiver": q, "dim": d, "source": i, "target": j, "trunc": c.trunc });
    let obj = doc.as_object_mut().expect("object");
    let (table, mismatch) = match mode {
        GdimMode::Geo => {
            let g = gdim_geo(&q, &d, &i, &j, c.trunc)?;
            let t = format!("geometric {}\n", series_table(&g));
            obj.insert("geometric".into(), json!(g));
            (t, false)
        }
        GdimMode::Alg => {
            let a = gdim_alg_klr(&q, &d, &i, &j, c.trunc)?;
            let t = format!("algebraic {}\n", series_table(&a));
            obj.insert("algebraic".into(), json!(a));
            (t, false)
        }
        GdimMode::Compare => {
            let r = compare_block(&q, &d, &i, &j, c.trunc)?;
            let t = format!(
                "geometric {}\nshift u^{}\n{}\n",
                series_table(&r.geometric),
                r.shift,
                if r.normalized_match { "match" } else { "MISMATCH" }
            );
            obj.insert("shift".into(), json!(r.shift));
            obj.insert("geometric".into(), json!(r.geometric));
            obj.insert("algebraic".into(), json!(r.algebraic));
            obj.insert("match".into(), json!(r.normalized_match));
            obj.insert("first_discrepancy".into(), json!(r.first_discrepancy));
            (t, !r.normalized_match)
        }
    };
    obj.insert("mode".into(), json!(format!("{mode:?}").to_lowercase()));
    Ok(Outcome {
        doc: with_schema("gdim", doc),
        table,
        mismatch,
    })
}

fn gdim_table(c: &Common, all_comps: bool) -> CliResult<Outcome> {
    use rayon::prelude::*;
    let q = quiver(c)?;
    let d = dim(c, &q)?;
    let comps = if all_comps {
        enumerate_comps(&d)
    } else {
        enumerate_complete_comps(&d)
    };
    let pairs: Vec<(&Composition, &Composition)> = comps.iter().cartesian_product(&comps).collect();
    let blocks = pairs
        .par_iter()
        .map(|(i, j)| {
            if i.parts().iter().chain(j.parts()).all(|p| p.total() == 1) {
                let r = compare_block(&q, &d, i, j, c.trunc)?;
                Ok((i, j, r.geometric, Some(r.normalized_match)))
            } else {
                Ok((i, j, gdim_geo(&q, &d, i, j, c.trunc)?, None))
            }
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let mut table = String::new();
    let mut mismatch = false;
    let rows: Vec<Value> = blocks
        .iter()
        .map(|(i, j, g, m)| {
            mismatch |= *m == Some(false);
            let verdict = match m {
                Some(true) => "match",
                Some(false) => "MISMATCH",
                None => "-",
            };
            let _ = writeln!(
                table,
                "{i} -> {j}\t{}\t{verdict}",
                series_table(g)
            );
            json!({
                "source": i, "target": j,
                "shift": dim_qvariety(&q, j) as i64 - dim_qvariety(&q, i) as i64,
                "geometric": g, "match": m,
            })
        })
        .collect();
    let doc = json!({ "quiver": q, "dim": d, "trunc": c.trunc, "all_comps": all_comps, "blocks": rows });
    Ok(Outcome {
        doc: with_schema("gdim-table", doc),
        table,
        mismatch,
    })
}

fn klr_selftest(c: &Common, trials: usize) -> CliResult<Outcome> {
    let q = quiver(c)?;
    let d = dim(c, &q)?;
    let r = relation_suite(&q, &d, trials, c.seed)?;
    let mut table = String::new();
    for v in &r.relations {
        let _ = writeln!(
            table,
            "{}\t{}\t{} checks\t{} failures{}",
            if v.failures == 0 { "PASS" } else { "FAIL" },
            v.relation,
            v.checks,
            v.failures,
            v.witness.as_deref().map(|w| format!("\t{w}")).unwrap_or_default()
        );
    }
    let _ = writeln!(
        table,
        "{}\tfaithfulness\trank {} of {}",
        if r.faithfulness.pass { "PASS" } else { "FAIL" },
        r.faithfulness.rank,
        r.faithfulness.operators
    );
    let mismatch = !r.pass;
    let doc = serde_json::to_value(&r).expect("report serializes");
    Ok(Outcome {
        doc: with_schema("klr-selftest", doc),
        table,
        mismatch,
    })
}

fn read_input(path: &str) -> CliResult<String> {
    let mut s = String::new();
    let res = if path == "-" {
        std::io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| s = t)
    };
    res.map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })?;
    Ok(s)
}

fn complex(c: &Common, op: &ComplexOp) -> CliResult<Outcome> {
    let input = match op {
        ComplexOp::Validate { input }
        | ComplexOp::Minimize { input }
        | ComplexOp::Euler { input }
        | ComplexOp::Shift { input, .. }
        | ComplexOp::Twist { input, .. }
        | ComplexOp::Truncate { input, .. } => input,
        ComplexOp::Random { algebra } => {
            let spec = match algebra {
                Some(s) => s.clone(),
                None => {
                    let q = quiver(c)?;
                    format!("klr:{q}:{}", dim(c, &q)?)
                }
            };
            return match AnyAlgebra::parse_spec(&spec)? {
                AnyAlgebra::Klr(a) => random_doc(&a, c.seed),
                AnyAlgebra::Smash(a) => random_doc(&a, c.seed),
            };
        }
    };
    let doc = parse_doc(&read_input(input)?)?;
    match AnyAlgebra::from_descriptor(&doc.algebra)? {
        AnyAlgebra::Klr(a) => complex_op(&a, &from_doc(&a, &doc)?, op),
        AnyAlgebra::Smash(a) => complex_op(&a, &from_doc(&a, &doc)?, op),
    }
}

fn complex_table<A: GradedAlgebra>(alg: &A, c: &GradedComplex<A::Elem>) -> String {
    let labels = alg.idempotent_labels();
    let mut t = String::new();
    for (k, g) in c.gens.iter().enumerate() {
        let _ = writeln!(t, "g{k}\t{}\tshift {}\tdegree {}", labels[g.idem], g.shift, g.degree);
    }
    for ((l, k), e) in &c.diff {
        let _ = writeln!(t, "d(g{k}) -> g{l}\t{}", alg.render(e));
    }
    if c.is_empty() {
        t.push_str("zero complex\n");
    }
    t
}

fn complex_value<A: GradedAlgebra>(alg: &A, c: &GradedComplex<A::Elem>) -> Value {
    serde_json::to_value(to_doc(alg, c)).expect("documents serialize")
}

fn random_doc<A: GradedAlgebra>(alg: &A, seed: u64) -> CliResult<Outcome> {
    let bank = Bank::new(alg);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = random_complex(alg, &bank, &mut rng);
    Ok(Outcome::ok(complex_value(alg, &c), complex_table(alg, &c)))
}

fn complex_op<A: GradedAlgebra>(alg: &A, c: &GradedComplex<A::Elem>, op: &ComplexOp) -> CliResult<Outcome> {
    if let ComplexOp::Validate { .. } = op {
        let res = validate(alg, c);
        let doc = json!({
            "valid": res.is_ok(),
            "generators": c.len(),
            "error": res.as_ref().err().map(|e| e.to_string()),
        });
        let table = match &res {
            Ok(()) => format!("valid complex with {} generators\n", c.len()),
            Err(e) => format!("INVALID: {e}\n"),
        };
        return Ok(Outcome {
            doc: with_schema("complex-check", doc),
            table,
            mismatch: res.is_err(),
        });
    }
    validate(alg, c)?;
    Ok(match op {
        ComplexOp::Minimize { .. } => {
            let m = minimize(alg, c)?;
            let mut doc = complex_value(alg, &m.complex);
            let obj = doc.as_object_mut().expect("object");
            obj.insert("cancellations".into(), json!(m.cancellations));
            obj.insert("equality_bound".into(), json!(m.equality_bound));
            let mut table = complex_table(alg, &m.complex);
            let _ = writeln!(table, "{} cancellations", m.cancellations.len());
            if let Some(b) = m.equality_bound {
                let _ = writeln!(table, "element equality decided up to polynomial degree {b}");
            }
            Outcome::ok(doc, table)
        }
        ComplexOp::Euler { .. } => {
            let labels = alg.idempotent_labels();
            let e = euler_symbol(c);
            let mut table = String::new();
            let terms: Vec<Value> = e
                .iter()
                .map(|(&(i, s), &k)| {
                    let _ = writeln!(table, "{k:+}\t[{}]<{s}>", labels[i]);
                    json!({ "idempotent": i, "label": labels[i], "shift": s, "coefficient": k })
                })
                .collect();
            if terms.is_empty() {
                table.push_str("0\n");
            }
            Outcome::ok(with_schema("euler", json!({ "terms": terms })), table)
        }
        ComplexOp::Shift { by, .. } => {
            let s = shift(alg, c, *by);
            Outcome::ok(complex_value(alg, &s), complex_table(alg, &s))
        }
        ComplexOp::Twist { by, .. } => {
            let s = twist(c, *by);
            Outcome::ok(complex_value(alg, &s), complex_table(alg, &s))
        }
        ComplexOp::Truncate { at, .. } => {
            let t = weight_truncate(alg, c, *at)?;
            let inclusion: Vec<(usize, usize, String)> = t
                .inclusion
                .entries
                .iter()
                .map(|(&(l, k), e)| (l, k, alg.render(e)))
                .collect();
            let doc = json!({
                "at": at,
                "upper": complex_value(alg, &t.upper),
                "lower": complex_value(alg, &t.lower),
                "inclusion": inclusion,
            });
            let table = format!(
                "upper (degrees > {at})\n{}lower (degrees <= {at})\n{}",
                complex_table(alg, &t.upper),
                complex_table(alg, &t.lower)
            );
            Outcome::ok(with_schema("truncation", doc), table)
        }
        ComplexOp::Validate { .. } | ComplexOp::Random { .. } => unreachable!("handled above"),
    })
}

fn suite(c: &Common, name: &str, trials: usize, corpus: usize, max_total: Option<usize>) -> CliResult<Outcome> {
    let opts = SuiteOptions {
        trunc: c.trunc,
        max_total,
        trials,
        corpus,
        seed: c.seed,
    };
    let r = run_suite(name, &opts)?;
    let mut table = String::new();
    for v in &r.cases {
        let _ = writeln!(
            table,
            "{}\t{}\t{} checks{}",
            if v.pass() { "PASS" } else { "FAIL" },
            v.case,
            v.checks,
            v.witness.as_deref().map(|w| format!("\t{w}")).unwrap_or_default()
        );
    }
    let _ = writeln!(
        table,
        "{}: {} cases, {} checks, {} failures",
        r.suite,
        r.cases.len(),
        r.checks,
        r.failures
    );
    let mismatch = !r.pass;
    Ok(Outcome {
        doc: serde_json::to_value(&r).expect("report serializes"),
        table,
        mismatch,
    })
}
