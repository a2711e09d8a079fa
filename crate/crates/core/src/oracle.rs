//! Brute-force SMC solving and model verification.

use std::collections::HashMap;

use crate::circuit::NumericMode;
use crate::compile::{enumerate_marginal, ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::solver::{Cmp, PredicateSpec, SmcProblem, Status};

/// Where predicate marginals come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MarginalRoute {
    /// Circuit evaluation; cross-checked against the source network when
    /// one is attached.
    #[default]
    Circuit,
    /// Enumeration over the source network only.
    FactorGraph,
}

#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    pub cap: usize,
    pub mode: NumericMode,
    pub route: MarginalRoute,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            cap: ENUMERATION_CAP,
            mode: NumericMode::Linear,
            route: MarginalRoute::Circuit,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BruteResult {
    pub status: Status,
    /// Every model, in increasing binary order (variable 1 lowest).
    pub models: Vec<Vec<bool>>,
}

impl BruteResult {
    pub fn count(&self) -> usize {
        self.models.len()
    }
}

const CROSS_CHECK_TOL: f64 = 1e-9;

/// Exact marginal of a predicate under a total formula assignment, as a
/// plain number.
pub fn predicate_marginal(p: &PredicateSpec, model: &[bool], cfg: &OracleConfig) -> Result<f64> {
    let a = p.circuit_assignment(|v| Some(model[v.index()]));
    let from_graph = || -> Result<f64> {
        let fg = p.source.as_ref().ok_or_else(|| {
            Error::InvalidArgument("predicate has no factor graph for the enumeration route".into())
        })?;
        enumerate_marginal(fg, &a)
    };
    match cfg.route {
        MarginalRoute::FactorGraph => from_graph(),
        MarginalRoute::Circuit => {
            let m = cfg.mode.to_linear(p.circuit.marginal_in(&a, cfg.mode)?);
            if p.source.is_some() {
                let e = from_graph()?;
                if (m - e).abs() > CROSS_CHECK_TOL * m.abs().max(e.abs()).max(f64::MIN_POSITIVE) {
                    return Err(Error::InvalidProblem(format!(
                        "circuit marginal {m} disagrees with network enumeration {e}"
                    )));
                }
            }
            Ok(m)
        }
    }
}

/// `marginal cmp threshold` evaluated in the configured numeric mode.
fn predicate_holds(p: &PredicateSpec, marginal: f64, cfg: &OracleConfig) -> Result<bool> {
    let q = p.threshold_in(cfg.mode)?;
    Ok(p.cmp.holds(cfg.mode.from_linear(marginal), q))
}

pub fn brute_solve(p: &SmcProblem, cap: usize) -> Result<BruteResult> {
    brute_solve_with(
        p,
        &OracleConfig {
            cap,
            ..Default::default()
        },
    )
}

/// Enumerates all `2^n` assignments, keeping those that satisfy every
/// clause and every predicate biconditional (hard predicates must hold).
pub fn brute_solve_with(p: &SmcProblem, cfg: &OracleConfig) -> Result<BruteResult> {
    p.validate()?;
    let n = p.cnf.num_vars() as usize;
    if n > cfg.cap {
        return Err(Error::CapExceeded {
            what: "formula",
            n,
            cap: cfg.cap,
        });
    }
    // predicate value per shared-variable assignment
    let mut memo: Vec<HashMap<Vec<bool>, bool>> = vec![HashMap::new(); p.predicates.len()];
    let mut models = Vec::new();
    let mut values = vec![false; n];
    'outer: for bits in 0u64..(1u64 << n) {
        for (i, v) in values.iter_mut().enumerate() {
            *v = bits >> i & 1 == 1;
        }
        if !p.cnf.eval_full(&values) {
            continue;
        }
        for (pi, pred) in p.predicates.iter().enumerate() {
            let key: Vec<bool> = pred.shared.values().map(|v| values[v.index()]).collect();
            let holds = match memo[pi].get(&key) {
                Some(&h) => h,
                None => {
                    let h = predicate_holds(pred, predicate_marginal(pred, &values, cfg)?, cfg)?;
                    memo[pi].insert(key, h);
                    h
                }
            };
            let required = pred.b.is_none_or(|b| b.eval(values[b.var().index()]));
            if holds != required {
                continue 'outer;
            }
        }
        models.push(values.clone());
    }
    let status = if models.is_empty() {
        Status::Unsat
    } else {
        Status::Sat
    };
    Ok(BruteResult { status, models })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredicateCheck {
    pub index: usize,
    pub marginal: f64,
    pub threshold: f64,
    pub cmp: Cmp,
    pub holds: bool,
    /// Value of the linked literal; `None` for hard predicates.
    pub b_value: Option<bool>,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    /// Indices of clauses the model falsifies.
    pub failed_clauses: Vec<usize>,
    pub predicates: Vec<PredicateCheck>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failed_clauses.is_empty() && self.predicates.iter().all(|c| c.consistent)
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .failed_clauses
            .iter()
            .map(|i| format!("clause {i} falsified"))
            .collect();
        for c in &self.predicates {
            let b = match c.b_value {
                Some(v) => format!("b={}", if v { "T" } else { "F" }),
                None => "hard".to_string(),
            };
            out.push(format!(
                "predicate {} marginal {} {} {} -> {} ({b}) {}",
                c.index,
                c.marginal,
                c.cmp,
                c.threshold,
                c.holds,
                if c.consistent { "ok" } else { "FAIL" }
            ));
        }
        out
    }
}

pub fn verify(p: &SmcProblem, model: &[bool]) -> Result<VerificationReport> {
    verify_with(p, model, &OracleConfig::default())
}

pub fn verify_with(
    p: &SmcProblem,
    model: &[bool],
    cfg: &OracleConfig,
) -> Result<VerificationReport> {
    if model.len() != p.cnf.num_vars() as usize {
        return Err(Error::InvalidArgument(format!(
            "model assigns {} variables, formula has {}",
            model.len(),
            p.cnf.num_vars()
        )));
    }
    let failed_clauses = p
        .cnf
        .clauses()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.eval_full(model))
        .map(|(i, _)| i)
        .collect();
    let mut predicates = Vec::with_capacity(p.predicates.len());
    for (index, pred) in p.predicates.iter().enumerate() {
        let marginal = predicate_marginal(pred, model, cfg)?;
        let holds = predicate_holds(pred, marginal, cfg)?;
        let b_value = pred.b.map(|b| b.eval(model[b.var().index()]));
        predicates.push(PredicateCheck {
            index,
            marginal,
            threshold: pred.resolved_threshold()?,
            cmp: pred.cmp,
            holds,
            b_value,
            consistent: holds == b_value.unwrap_or(true),
        });
    }
    Ok(VerificationReport {
        failed_clauses,
        predicates,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;
    use std::sync::Arc;

    use super::*;
    use crate::circuit::example_circuit;
    use crate::formula::{CnfFormula, Lit, Var};

    fn lit(l: i64) -> Lit {
        Lit::from_dimacs(l).unwrap()
    }

    fn routes(q: f64) -> SmcProblem {
        let mut cnf = CnfFormula::new(6);
        for c in [
            [5, 6].as_slice(),
            &[-5, -6],
            &[-5, 1],
            &[-5, 2],
            &[-6, 3],
            &[-6, 4],
        ] {
            cnf.add_clause(c.iter().map(|&l| lit(l))).unwrap();
        }
        let c = Arc::new(example_circuit());
        let p1 = PredicateSpec::new(
            c.clone(),
            BTreeMap::from([(0, Var::new(0)), (1, Var::new(1))]),
            Cmp::Ge,
            q,
        )
        .with_b(lit(5));
        let p2 = PredicateSpec::new(
            c,
            BTreeMap::from([(2, Var::new(2)), (3, Var::new(3))]),
            Cmp::Ge,
            q,
        )
        .with_b(lit(6));
        SmcProblem::new(cnf, vec![p1, p2]).unwrap()
    }

    #[test]
    fn route_models() {
        let r = brute_solve(&routes(0.5), 24).unwrap();
        assert_eq!(r.status, Status::Sat);
        assert_eq!(r.count(), 4);
        for m in &r.models {
            assert!(!m[4] && m[5] && m[2] && m[3]);
        }
        assert_eq!(brute_solve(&routes(1.5), 24).unwrap().status, Status::Unsat);
    }

    #[test]
    fn trivial_cases() {
        let mut cnf = CnfFormula::new(1);
        cnf.add_clause([lit(1)]).unwrap();
        let r = brute_solve(&SmcProblem::new(cnf.clone(), vec![]).unwrap(), 24).unwrap();
        assert_eq!(r.models, vec![vec![true]]);
        let hard = PredicateSpec::new(Arc::new(example_circuit()), BTreeMap::new(), Cmp::Ge, 1.01);
        let r = brute_solve(&SmcProblem::new(cnf, vec![hard]).unwrap(), 24).unwrap();
        assert_eq!(r.count(), 0);
        assert!(brute_solve(&SmcProblem::new(CnfFormula::new(30), vec![]).unwrap(), 24).is_err());
    }

    #[test]
    fn verify_reports() {
        let p = routes(0.5);
        let model = vec![false, false, true, true, false, true];
        let rep = verify(&p, &model).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.predicates[1].marginal, 1.0);
        assert_eq!(rep.predicates[0].marginal, 0.4);

        let mut flipped = model.clone();
        flipped[5] = false;
        let rep = verify(&p, &flipped).unwrap();
        assert!(!rep.passed());
        assert!(!rep.predicates[1].consistent);

        let mut broken = model.clone();
        broken[2] = false;
        let rep = verify(&p, &broken).unwrap();
        assert_eq!(rep.failed_clauses, vec![4]);
        assert!(verify(&p, &model[..3]).is_err());
    }
}
