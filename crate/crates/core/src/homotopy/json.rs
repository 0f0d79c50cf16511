//! `complex/1` documents:
//!
//! ```json
//! {"schema": "complex/1",
//!  "algebra": {"kind": "klr", "quiver": "A1", "dim": [2]},
//!  "generators": [[0, 0, 0], [0, 1, 1]],
//!  "differential": [[1, 0, "x1*e(0,0)"]]}
//! ```
//!
//! Generators are `[idempotent, shift, degree]`; differential entries are
//! `[target, source, term]`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{GenSpec, GradedAlgebra, GradedComplex, KlrAlgebra, SmashAlgebra};
use crate::error::{Error, Result};
use crate::quiver::{DimVector, Quiver};

pub const COMPLEX_SCHEMA: &str = "complex/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub schema: String,
    pub algebra: Value,
    pub generators: Vec<(usize, i64, i64)>,
    pub differential: Vec<(usize, usize, String)>,
}

/// A handle chosen at run time.
pub enum AnyAlgebra {
    Klr(KlrAlgebra),
    Smash(SmashAlgebra),
}

fn doc_err(msg: impl Into<String>) -> Error {
    Error::Document(msg.into())
}

impl AnyAlgebra {
    /// `klr:<quiver>:<dim>` (for example `klr:A2:2,1`) or `smash:<n>`.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        match parts.as_slice() {
            ["klr", rest @ ..] if !rest.is_empty() => {
                let (dim, quiver) = rest.split_last().unwrap();
                let q: Quiver = quiver.join(":").parse()?;
                let d = DimVector::parse_for(&q, dim)?;
                Ok(AnyAlgebra::Klr(KlrAlgebra::new(&q, &d)?))
            }
            ["smash", n] => {
                let n: usize = n.parse().map_err(|_| doc_err(format!("bad strand count in `{spec}`")))?;
                Ok(AnyAlgebra::Smash(SmashAlgebra::new(n)?))
            }
            _ => Err(doc_err(format!(
                "unknown algebra `{spec}` (expected klr:<quiver>:<dim> or smash:<n>)"
            ))),
        }
    }

    pub fn from_descriptor(v: &Value) -> Result<Self> {
        match v.get("kind").and_then(Value::as_str) {
            Some("klr") => {
                let q: Quiver = v
                    .get("quiver")
                    .and_then(Value::as_str)
                    .ok_or_else(|| doc_err("klr algebra without quiver"))?
                    .parse()?;
                let dim: Vec<usize> = serde_json::from_value(v.get("dim").cloned().unwrap_or(Value::Null))
                    .map_err(|e| doc_err(format!("klr dim: {e}")))?;
                let d = DimVector::new(dim);
                d.check_len(q.num_vertices())?;
                Ok(AnyAlgebra::Klr(KlrAlgebra::new(&q, &d)?))
            }
            Some("smash") => {
                let n = v
                    .get("n")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| doc_err("smash algebra without n"))?;
                Ok(AnyAlgebra::Smash(SmashAlgebra::new(n as usize)?))
            }
            _ => Err(doc_err(format!("unknown algebra descriptor {v}"))),
        }
    }
}

pub fn to_doc<A: GradedAlgebra>(alg: &A, c: &GradedComplex<A::Elem>) -> ComplexDoc {
    ComplexDoc {
        schema: COMPLEX_SCHEMA.to_string(),
        algebra: alg.descriptor(),
        generators: c.gens.iter().map(|g| (g.idem, g.shift, g.degree)).collect(),
        differential: c
            .diff
            .iter()
            .map(|(&(l, k), e)| (l, k, alg.render(e)))
            .collect(),
    }
}

/// Parses the generator list and entries; the result still has to pass `validate`.
pub fn from_doc<A: GradedAlgebra>(alg: &A, doc: &ComplexDoc) -> Result<GradedComplex<A::Elem>> {
    if doc.schema != COMPLEX_SCHEMA {
        return Err(doc_err(format!("schema `{}`, expected `{COMPLEX_SCHEMA}`", doc.schema)));
    }
    if doc.algebra != alg.descriptor() {
        return Err(doc_err(format!(
            "document is over {}, not {}",
            doc.algebra,
            alg.descriptor()
        )));
    }
    let gens = doc
        .generators
        .iter()
        .map(|&(i, s, c)| GenSpec::new(i, s, c))
        .collect();
    let mut diff = BTreeMap::new();
    for (l, k, term) in &doc.differential {
        let e = alg.parse(term)?;
        if diff.insert((*l, *k), e).is_some() {
            return Err(doc_err(format!("duplicate entry ({l}, {k})")));
        }
    }
    Ok(GradedComplex { gens, diff })
}

/// Compact single-line form.
pub fn to_string(doc: &ComplexDoc) -> String {
    serde_json::to_string(doc).expect("documents serialize")
}

pub fn parse_doc(text: &str) -> Result<ComplexDoc> {
    serde_json::from_str(text).map_err(|e| doc_err(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_through_json() {
        let AnyAlgebra::Klr(alg) = AnyAlgebra::parse_spec("klr:A1:2").unwrap() else {
            panic!("expected a KLR handle");
        };
        let text = r#"{"schema":"complex/1","algebra":{"kind":"klr","quiver":"A1","dim":[2]},
            "generators":[[0,0,0],[0,1,1]],"differential":[[1,0,"x1"]]}"#;
        let doc = parse_doc(text).unwrap();
        let c = from_doc(&alg, &doc).unwrap();
        super::super::validate(&alg, &c).unwrap();
        let back = to_doc(&alg, &c);
        assert_eq!(back.differential, vec![(1, 0, "x1*e(0,0)".to_string())]);
        assert_eq!(from_doc(&alg, &back).unwrap(), c);
    }

    #[test]
    fn descriptors_rebuild_handles() {
        for spec in ["klr:cyclic:2:1,1", "smash:3"] {
            let a = AnyAlgebra::parse_spec(spec).unwrap();
            let desc = match &a {
                AnyAlgebra::Klr(k) => k.descriptor(),
                AnyAlgebra::Smash(s) => s.descriptor(),
            };
            let b = AnyAlgebra::from_descriptor(&desc).unwrap();
            let desc2 = match &b {
                AnyAlgebra::Klr(k) => k.descriptor(),
                AnyAlgebra::Smash(s) => s.descriptor(),
            };
            assert_eq!(desc, desc2);
        }
        assert!(AnyAlgebra::parse_spec("klr:B2:1").is_err());
        assert!(AnyAlgebra::parse_spec("smash:x").is_err());
    }
}
