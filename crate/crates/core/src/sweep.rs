//! Linear threshold sweep: re-solve at evenly spaced thresholds until the
//! problem flips to UNSAT and keep the last satisfying plan.

use std::fmt::Write;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::solver::{solve, SmcProblem, SolverConfig, Stats, Status};

pub const DEFAULT_STEP: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    #[default]
    Up,
    Down,
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "up" => Ok(Direction::Up),
            "down" => Ok(Direction::Down),
            _ => Err(Error::InvalidArgument(format!("unknown direction `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub predicate: usize,
    pub direction: Direction,
    pub step: f64,
    pub lo: f64,
    pub hi: f64,
    pub solver: SolverConfig,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            predicate: 0,
            direction: Direction::Up,
            step: DEFAULT_STEP,
            lo: 0.0,
            hi: 1.0,
            solver: SolverConfig::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub q: f64,
    pub status: Status,
    pub stats: Stats,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    /// Last threshold solved SAT before the first non-SAT answer.
    pub best_threshold: Option<f64>,
    pub best_model: Option<Vec<bool>>,
    pub trace: Vec<SweepPoint>,
}

impl SweepResult {
    /// Number of status changes along the trace.
    pub fn flips(&self) -> usize {
        self.trace
            .windows(2)
            .filter(|w| w[0].status != w[1].status)
            .count()
    }

    pub fn trace_csv(&self) -> String {
        let mut out = String::from("q,status,decisions,conflicts,wall_time\n");
        for p in &self.trace {
            writeln!(
                out,
                "{},{},{},{},{:.6}",
                p.q,
                p.status,
                p.stats.decisions,
                p.stats.conflicts(),
                p.stats.wall_time.as_secs_f64()
            )
            .unwrap();
        }
        out
    }
}

/// Thresholds visited, `lo, lo + step, …, ≤ hi` (or mirrored from `hi`).
pub fn thresholds(direction: Direction, step: f64, lo: f64, hi: f64) -> Vec<f64> {
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=count)
        .map(|i| match direction {
            Direction::Up => lo + i as f64 * step,
            Direction::Down => hi - i as f64 * step,
        })
        .collect()
}

/// Solves afresh at each threshold of the chosen predicate and stops at the
/// first answer that is not SAT. The predicate's threshold mode applies to
/// every visited value.
pub fn sweep(p: &SmcProblem, opts: &SweepOptions) -> Result<SweepResult> {
    if !(opts.step > 0.0 && opts.step.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "step {} must be positive",
            opts.step
        )));
    }
    if !(opts.lo < opts.hi) {
        return Err(Error::InvalidArgument(format!(
            "empty range [{}, {}]",
            opts.lo, opts.hi
        )));
    }
    if opts.predicate >= p.predicates.len() {
        return Err(Error::InvalidArgument(format!(
            "predicate {} out of range ({} predicates)",
            opts.predicate,
            p.predicates.len()
        )));
    }
    let mut problem = p.clone();
    let mut result = SweepResult {
        best_threshold: None,
        best_model: None,
        trace: Vec::new(),
    };
    for q in thresholds(opts.direction, opts.step, opts.lo, opts.hi) {
        problem.predicates[opts.predicate].threshold = q;
        let r = solve(&problem, opts.solver)?;
        result.trace.push(SweepPoint {
            q,
            status: r.status,
            stats: r.stats,
        });
        if r.status != Status::Sat {
            break;
        }
        result.best_threshold = Some(q);
        result.best_model = r.model;
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_grid() {
        assert_eq!(
            thresholds(Direction::Up, 0.25, 0.0, 1.0),
            vec![0.0, 0.25, 0.5, 0.75, 1.0]
        );
        assert_eq!(
            thresholds(Direction::Down, 0.5, 0.0, 1.0),
            vec![1.0, 0.5, 0.0]
        );
        assert_eq!(thresholds(Direction::Up, 0.1, 0.0, 1.0).len(), 11);
        assert_eq!(thresholds(Direction::Up, 0.3, 0.0, 1.0).len(), 4);
    }

    #[test]
    fn rejects_bad_ranges() {
        let p = SmcProblem::new(crate::formula::CnfFormula::new(1), vec![]).unwrap();
        let o = SweepOptions::default();
        assert!(sweep(&p, &o).is_err());
        assert!(sweep(&p, &SweepOptions { step: 0.0, ..o }).is_err());
        assert!(sweep(
            &p,
            &SweepOptions {
                lo: 1.0,
                hi: 1.0,
                ..o
            }
        )
        .is_err());
    }
}
