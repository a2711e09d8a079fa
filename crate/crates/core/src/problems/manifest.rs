//! JSON manifest tying a DIMACS formula to its predicates.
//!
//! ```json
//! {
//!   "cnf": "phi.cnf",
//!   "predicates": [
//!     { "circuit": "f.pc", "shared": {"0": 1, "1": 2}, "b": 5,
//!       "cmp": "ge", "threshold": 0.5, "threshold_mode": "absolute" }
//!   ]
//! }
//! ```
//!
//! Paths are relative to the manifest's directory. A predicate names a
//! circuit file, a UAI file (compiled on load, with optional `order`), or
//! both, in which case the circuit is used and the network is kept for
//! cross-checking. `shared` maps circuit variables to 1-based formula
//! variables; `b` is a signed DIMACS literal and is absent for hard
//! predicates.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::circuit::{parse_pc, write_pc};
use crate::compile::{compile, compile_default, parse_uai, write_uai};
use crate::error::{Error, Result};
use crate::formula::{parse_dimacs, write_dimacs, Lit, Var};
use crate::solver::{Cmp, PredicateSpec, SmcProblem, ThresholdMode};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub cnf: String,
    pub predicates: Vec<PredicateEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredicateEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circuit: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uai: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<u32>>,
    pub shared: BTreeMap<u32, u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<i64>,
    pub cmp: Cmp,
    pub threshold: f64,
    #[serde(default)]
    pub threshold_mode: ThresholdMode,
}

impl Manifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Checks the structural rules that do not need the referenced files'
    /// contents: files exist under `base`, shared maps are injective and
    /// 1-based.
    pub fn check(&self, base: &Path) -> Result<()> {
        let exists = |rel: &str| -> Result<()> {
            let p = base.join(rel);
            if p.is_file() {
                Ok(())
            } else {
                Err(Error::InvalidProblem(format!(
                    "dangling path `{}`",
                    p.display()
                )))
            }
        };
        exists(&self.cnf)?;
        for (i, e) in self.predicates.iter().enumerate() {
            match (&e.circuit, &e.uai) {
                (None, None) => {
                    return Err(Error::InvalidProblem(format!(
                        "predicate {i}: needs `circuit` or `uai`"
                    )))
                }
                (c, u) => {
                    for p in c.iter().chain(u.iter()) {
                        exists(p)?;
                    }
                }
            }
            let mut seen = BTreeSet::new();
            for &fv in e.shared.values() {
                if fv == 0 {
                    return Err(Error::InvalidProblem(format!(
                        "predicate {i}: formula variables are 1-based"
                    )));
                }
                if !seen.insert(fv) {
                    return Err(Error::InvalidProblem(format!(
                        "predicate {i}: shared map is not injective (variable {fv} repeated)"
                    )));
                }
            }
            if e.b == Some(0) {
                return Err(Error::InvalidProblem(format!(
                    "predicate {i}: `b` must be a nonzero literal"
                )));
            }
        }
        Ok(())
    }
}

/// Assembles and checks a manifest whose paths are relative to `base`.
pub fn build_manifest(base: &Path, cnf: &str, predicates: Vec<PredicateEntry>) -> Result<Manifest> {
    let m = Manifest {
        cnf: cnf.to_string(),
        predicates,
    };
    m.check(base)?;
    Ok(m)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn load_manifest(path: &Path) -> Result<SmcProblem> {
    let text = read(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    load_manifest_str(&text, base)
}

pub fn load_manifest_str(text: &str, base: &Path) -> Result<SmcProblem> {
    let m = Manifest::from_json(text)?;
    m.check(base)?;
    let cnf = parse_dimacs(&read(&base.join(&m.cnf))?)?;
    let mut predicates = Vec::with_capacity(m.predicates.len());
    for e in &m.predicates {
        let source = match &e.uai {
            Some(u) => Some(Arc::new(parse_uai(&read(&base.join(u))?)?)),
            None => None,
        };
        let circuit = match (&e.circuit, &source) {
            (Some(c), _) => parse_pc(&read(&base.join(c))?)?,
            (None, Some(fg)) => match &e.order {
                Some(order) => compile(fg, order)?,
                None => compile_default(fg)?,
            },
            (None, None) => unreachable!("checked"),
        };
        let shared = e
            .shared
            .iter()
            .map(|(&cv, &fv)| (cv, Var::new(fv - 1)))
            .collect();
        let mut p = PredicateSpec::new(Arc::new(circuit), shared, e.cmp, e.threshold)
            .with_mode(e.threshold_mode);
        p.source = source;
        if let Some(b) = e.b {
            p = p.with_b(Lit::from_dimacs(b).expect("nonzero"));
        }
        predicates.push(p);
    }
    SmcProblem::new(cnf, predicates)
}

/// Writes `<stem>.cnf`, one `<stem>_p<i>.pc` per predicate (plus
/// `<stem>_p<i>.uai` when the predicate keeps its network) and the
/// manifest `<stem>.json`. Returns the manifest path.
pub fn write_problem(dir: &Path, stem: &str, p: &SmcProblem) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let write = |name: &str, body: String| -> Result<()> {
        let path = dir.join(name);
        fs::write(&path, body).map_err(|e| Error::io(path, e))
    };
    let cnf = format!("{stem}.cnf");
    write(&cnf, write_dimacs(&p.cnf))?;
    let mut entries = Vec::with_capacity(p.predicates.len());
    for (i, pred) in p.predicates.iter().enumerate() {
        let pc = format!("{stem}_p{i}.pc");
        write(&pc, write_pc(&pred.circuit))?;
        let uai = match &pred.source {
            Some(fg) => {
                let name = format!("{stem}_p{i}.uai");
                write(&name, write_uai(fg))?;
                Some(name)
            }
            None => None,
        };
        entries.push(PredicateEntry {
            circuit: Some(pc),
            uai,
            order: None,
            shared: pred
                .shared
                .iter()
                .map(|(&cv, &v)| (cv, v.index() as u32 + 1))
                .collect(),
            b: pred.b.map(|l| l.dimacs()),
            cmp: pred.cmp,
            threshold: pred.threshold,
            threshold_mode: pred.threshold_mode,
        });
    }
    let m = build_manifest(dir, &cnf, entries)?;
    let path = dir.join(format!("{stem}.json"));
    write(&format!("{stem}.json"), m.to_json())?;
    Ok(path)
}
