//! Satisfiability modulo counting: CNF clauses plus probabilistic
//! predicates `b ⇔ (marginal cmp q)`, solved by CDCL with bound-based
//! predicate propagation.

mod search;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use std::time::Duration;

use serde::{Deserialize, Serialize};

pub use search::Solver;

use crate::circuit::{Circuit, NumericMode};
use crate::compile::FactorGraph;
use crate::error::{Error, Result};
use crate::formula::{Clause, CnfFormula, Lit, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cmp {
    Ge,
    Gt,
    Le,
    Lt,
}

impl Cmp {
    pub fn as_str(self) -> &'static str {
        match self {
            Cmp::Ge => "ge",
            Cmp::Gt => "gt",
            Cmp::Le => "le",
            Cmp::Lt => "lt",
        }
    }

    /// Decides `value cmp q` for every value in `[lb, ub]` when possible.
    ///
    /// Returns `Some(true)` if the comparison holds throughout the
    /// interval, `Some(false)` if it fails throughout, and `None` otherwise.
    pub fn entailment(self, ub: f64, lb: f64, q: Threshold) -> Option<bool> {
        if q.negative {
            // every marginal is nonnegative
            return Some(matches!(self, Cmp::Ge | Cmp::Gt));
        }
        let q = q.repr;
        match self {
            Cmp::Ge if lb >= q => Some(true),
            Cmp::Ge if ub < q => Some(false),
            Cmp::Gt if lb > q => Some(true),
            Cmp::Gt if ub <= q => Some(false),
            Cmp::Le if ub <= q => Some(true),
            Cmp::Le if lb > q => Some(false),
            Cmp::Lt if ub < q => Some(true),
            Cmp::Lt if lb >= q => Some(false),
            _ => None,
        }
    }

    /// Exact comparison of a single value.
    pub fn holds(self, value: f64, q: Threshold) -> bool {
        self.entailment(value, value, q)
            .expect("a point value is always decided")
    }
}

impl std::str::FromStr for Cmp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ge" => Ok(Cmp::Ge),
            "gt" => Ok(Cmp::Gt),
            "le" => Ok(Cmp::Le),
            "lt" => Ok(Cmp::Lt),
            _ => Err(Error::InvalidArgument(format!("unknown comparator `{s}`"))),
        }
    }
}

impl fmt::Display for Cmp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMode {
    #[default]
    Absolute,
    /// Threshold is a fraction of the circuit's partition value.
    PartitionFraction,
}

/// A resolved threshold in the representation of a numeric mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    pub repr: f64,
    /// Set for thresholds below zero, which log mode cannot represent.
    pub negative: bool,
}

impl Threshold {
    pub fn linear(q: f64) -> Self {
        Threshold {
            repr: q,
            negative: q < 0.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PredicateSpec {
    pub circuit: Arc<Circuit>,
    /// Circuit variable -> formula variable. Unmapped circuit variables are
    /// summed out.
    pub shared: BTreeMap<u32, Var>,
    /// Linked literal; `None` makes the predicate hard.
    pub b: Option<Lit>,
    pub cmp: Cmp,
    pub threshold: f64,
    pub threshold_mode: ThresholdMode,
    /// Factor graph the circuit was compiled from, if any.
    pub source: Option<Arc<FactorGraph>>,
}

impl PredicateSpec {
    pub fn new(
        circuit: Arc<Circuit>,
        shared: BTreeMap<u32, Var>,
        cmp: Cmp,
        threshold: f64,
    ) -> Self {
        PredicateSpec {
            circuit,
            shared,
            b: None,
            cmp,
            threshold,
            threshold_mode: ThresholdMode::Absolute,
            source: None,
        }
    }

    pub fn with_b(mut self, b: Lit) -> Self {
        self.b = Some(b);
        self
    }

    pub fn with_mode(mut self, mode: ThresholdMode) -> Self {
        self.threshold_mode = mode;
        self
    }

    pub fn is_hard(&self) -> bool {
        self.b.is_none()
    }

    /// Resolved threshold as a plain number.
    pub fn resolved_threshold(&self) -> Result<f64> {
        Ok(match self.threshold_mode {
            ThresholdMode::Absolute => self.threshold,
            ThresholdMode::PartitionFraction => self.threshold * self.circuit.partition()?,
        })
    }

    /// Resolved threshold in the representation of `mode`.
    pub fn threshold_in(&self, mode: NumericMode) -> Result<Threshold> {
        match mode {
            NumericMode::Linear => Ok(Threshold::linear(self.resolved_threshold()?)),
            NumericMode::Log => {
                let t = self.threshold;
                if t < 0.0 {
                    return Ok(Threshold {
                        repr: f64::NEG_INFINITY,
                        negative: true,
                    });
                }
                let repr = match self.threshold_mode {
                    ThresholdMode::Absolute => t.ln(),
                    ThresholdMode::PartitionFraction => {
                        t.ln() + self.circuit.partition_in(NumericMode::Log)?
                    }
                };
                Ok(Threshold {
                    repr,
                    negative: false,
                })
            }
        }
    }

    /// Circuit-variable assignment induced by a formula-level assignment.
    pub fn circuit_assignment(&self, value: impl Fn(Var) -> Option<bool>) -> Vec<Option<bool>> {
        let mut a = vec![None; self.circuit.num_vars() as usize];
        for (&cv, &v) in &self.shared {
            a[cv as usize] = value(v);
        }
        a
    }
}

#[derive(Debug, Clone)]
pub struct SmcProblem {
    pub cnf: CnfFormula,
    pub predicates: Vec<PredicateSpec>,
}

impl SmcProblem {
    pub fn new(cnf: CnfFormula, predicates: Vec<PredicateSpec>) -> Result<Self> {
        let p = SmcProblem { cnf, predicates };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.cnf.num_vars() as usize;
        for (i, p) in self.predicates.iter().enumerate() {
            let err = |msg: String| Err(Error::InvalidProblem(format!("predicate {i}: {msg}")));
            if !p.circuit.validation().is_valid() {
                return err("circuit is not smooth and decomposable".into());
            }
            if !p.threshold.is_finite() {
                return err(format!("threshold {} is not finite", p.threshold));
            }
            let mut targets = Vec::with_capacity(p.shared.len());
            for (&cv, &v) in &p.shared {
                if cv >= p.circuit.num_vars() {
                    return err(format!("circuit variable {cv} out of range"));
                }
                if v.index() >= n {
                    return err(format!("formula variable {} out of range", v.dimacs()));
                }
                if targets.contains(&v) {
                    return err(format!("formula variable {} shared twice", v.dimacs()));
                }
                targets.push(v);
            }
            if let Some(b) = p.b {
                if b.var().index() >= n {
                    return err(format!("linked literal {b} out of range"));
                }
                if targets.contains(&b.var()) {
                    return err(format!("linked literal {b} is also a shared variable"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub ulw: bool,
    pub mode: NumericMode,
    /// Conflicts per unit of the Luby restart sequence; 0 disables restarts.
    pub restart_base: u64,
    pub var_decay: f64,
    pub seed: u64,
    pub conflict_budget: Option<u64>,
    pub time_budget: Option<Duration>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            ulw: true,
            mode: NumericMode::Linear,
            restart_base: 100,
            var_decay: 0.95,
            seed: 0,
            conflict_budget: None,
            time_budget: None,
        }
    }
}

impl SolverConfig {
    pub fn without_ulw() -> Self {
        SolverConfig {
            ulw: false,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Sat,
    Unsat,
    BudgetExhausted,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Sat => "SAT",
            Status::Unsat => "UNSAT",
            Status::BudgetExhausted => "UNKNOWN",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Stats {
    pub decisions: u64,
    pub boolean_propagations: u64,
    pub boolean_conflicts: u64,
    pub prob_conflicts: u64,
    pub prob_entailments: u64,
    pub learned_clauses: u64,
    pub restarts: u64,
    pub max_decision_level: u32,
    pub wall_time: Duration,
}

impl Stats {
    pub fn conflicts(&self) -> u64 {
        self.boolean_conflicts + self.prob_conflicts
    }

    /// Counters without the wall time, for determinism checks.
    pub fn counters(&self) -> [u64; 8] {
        [
            self.decisions,
            self.boolean_propagations,
            self.boolean_conflicts,
            self.prob_conflicts,
            self.prob_entailments,
            self.learned_clauses,
            self.restarts,
            self.max_decision_level as u64,
        ]
    }

    /// `(name, value)` pairs in reporting order.
    pub fn fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("decisions", self.decisions.to_string()),
            ("propagations", self.boolean_propagations.to_string()),
            ("bool_conflicts", self.boolean_conflicts.to_string()),
            ("prob_conflicts", self.prob_conflicts.to_string()),
            ("prob_entailments", self.prob_entailments.to_string()),
            ("learned", self.learned_clauses.to_string()),
            ("restarts", self.restarts.to_string()),
            ("max_level", self.max_decision_level.to_string()),
            (
                "wall_ms",
                format!("{:.3}", self.wall_time.as_secs_f64() * 1e3),
            ),
        ]
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: Status,
    /// Total assignment over the formula variables when SAT.
    pub model: Option<Vec<bool>>,
    pub stats: Stats,
}

pub fn solve(p: &SmcProblem, cfg: SolverConfig) -> Result<SolveResult> {
    Ok(Solver::new(p, cfg)?.solve())
}

/// Result of checking one predicate against its current bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredicateOutcome {
    /// The comparison holds for every completion.
    EntailedTrue,
    /// The comparison fails for every completion.
    EntailedFalse,
    Undecided,
    /// Entailed value contradicts the linked literal (or a hard predicate).
    Conflict,
}

/// Classifies a predicate given its root bounds and the value of its linked
/// literal. Hard predicates pass `Some(true)`.
pub fn evaluate_predicate(
    cmp: Cmp,
    q: Threshold,
    ub: f64,
    lb: f64,
    b: Option<bool>,
) -> PredicateOutcome {
    match (cmp.entailment(ub, lb, q), b) {
        (None, _) => PredicateOutcome::Undecided,
        (Some(true), Some(false)) | (Some(false), Some(true)) => PredicateOutcome::Conflict,
        (Some(true), _) => PredicateOutcome::EntailedTrue,
        (Some(false), _) => PredicateOutcome::EntailedFalse,
    }
}

/// Clause explaining a predicate's entailment: the literal the entailment
/// requires (absent for a violated hard predicate) followed by the
/// negation of every assigned shared variable.
pub fn probabilistic_clause(
    required: Option<Lit>,
    assigned: impl IntoIterator<Item = (Var, bool)>,
) -> Clause {
    let lits = required
        .into_iter()
        .chain(assigned.into_iter().map(|(v, val)| v.lit(!val)));
    Clause::new(lits).expect("shared variables are distinct from the linked literal")
}
