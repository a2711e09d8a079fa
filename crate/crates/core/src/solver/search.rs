use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    evaluate_predicate, probabilistic_clause, PredicateOutcome, SmcProblem, SolveResult,
    SolverConfig, Stats, Status, Threshold,
};
use crate::circuit::BoundState;
use crate::error::Result;
use crate::formula::{Clause, Lit, PartialAssignment, Var};

type ClauseRef = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ClauseKind {
    Original,
    Learned,
    /// Reason for a literal implied by a predicate.
    ProbReason,
    /// Falsified clause produced by a predicate conflict.
    ProbConflict,
}

#[derive(Debug, Clone)]
struct StoredClause {
    lits: Vec<Lit>,
    kind: ClauseKind,
}

#[derive(Debug, Clone, Copy)]
struct Watcher {
    cref: ClauseRef,
    blocker: Lit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Conflict {
    Boolean(ClauseRef),
    Probabilistic(ClauseRef),
}

struct PredState {
    bounds: BoundState,
    q: Threshold,
    /// `(circuit var, formula var)` in circuit-variable order.
    shared: Vec<(u32, Var)>,
    /// Decision level at which the predicate became settled.
    decided_at: Option<u32>,
}

/// CDCL search over an [`SmcProblem`].
pub struct Solver<'p> {
    problem: &'p SmcProblem,
    cfg: SolverConfig,
    assign: PartialAssignment,
    reason: Vec<Option<ClauseRef>>,
    clauses: Vec<StoredClause>,
    watches: Vec<Vec<Watcher>>,
    qhead: usize,
    /// Trail position up to which shared variables were pushed into bounds.
    pred_head: usize,
    activity: Vec<f64>,
    var_inc: f64,
    phase: Vec<bool>,
    seen: Vec<bool>,
    preds: Vec<PredState>,
    /// Formula variable -> `(predicate, circuit var)` occurrences.
    occurs: Vec<Vec<(usize, u32)>>,
    trivially_unsat: bool,
    stats: Stats,
    decision_log: Vec<Lit>,
}

impl<'p> Solver<'p> {
    pub fn new(problem: &'p SmcProblem, cfg: SolverConfig) -> Result<Self> {
        problem.validate()?;
        let n = problem.cnf.num_vars() as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut occurs = vec![Vec::new(); n];
        let mut preds = Vec::with_capacity(problem.predicates.len());
        for (i, p) in problem.predicates.iter().enumerate() {
            let shared: Vec<(u32, Var)> = p.shared.iter().map(|(&cv, &v)| (cv, v)).collect();
            for &(cv, v) in &shared {
                occurs[v.index()].push((i, cv));
            }
            let cvars: Vec<u32> = shared.iter().map(|&(cv, _)| cv).collect();
            preds.push(PredState {
                bounds: BoundState::new(Arc::clone(&p.circuit), &cvars, cfg.mode)?,
                q: p.threshold_in(cfg.mode)?,
                shared,
                decided_at: None,
            });
        }

        let mut s = Solver {
            problem,
            cfg,
            assign: PartialAssignment::new(n as u32),
            reason: vec![None; n],
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * n],
            qhead: 0,
            pred_head: 0,
            // tiny seeded jitter breaks activity ties
            activity: (0..n).map(|_| rng.gen::<f64>() * 1e-6).collect(),
            var_inc: 1.0,
            phase: vec![false; n],
            seen: vec![false; n],
            preds,
            occurs,
            trivially_unsat: false,
            stats: Stats::default(),
            decision_log: Vec::new(),
        };
        for c in problem.cnf.clauses() {
            s.add_original(c);
        }
        Ok(s)
    }

    fn add_original(&mut self, c: &Clause) {
        match c.lits() {
            [] => self.trivially_unsat = true,
            [l] => match self.assign.lit_value(*l) {
                Some(true) => {}
                Some(false) => self.trivially_unsat = true,
                None => self.enqueue(*l, None),
            },
            lits => {
                self.attach(lits.to_vec(), ClauseKind::Original);
            }
        }
    }

    fn attach(&mut self, lits: Vec<Lit>, kind: ClauseKind) -> ClauseRef {
        debug_assert!(lits.len() >= 2);
        let cref = self.clauses.len();
        self.watches[lits[0].code()].push(Watcher {
            cref,
            blocker: lits[1],
        });
        self.watches[lits[1].code()].push(Watcher {
            cref,
            blocker: lits[0],
        });
        self.clauses.push(StoredClause { lits, kind });
        cref
    }

    fn store(&mut self, lits: Vec<Lit>, kind: ClauseKind) -> ClauseRef {
        self.clauses.push(StoredClause { lits, kind });
        self.clauses.len() - 1
    }

    #[inline]
    fn value(&self, l: Lit) -> Option<bool> {
        self.assign.lit_value(l)
    }

    fn level(&self) -> u32 {
        self.assign.decision_level()
    }

    fn enqueue(&mut self, l: Lit, reason: Option<ClauseRef>) {
        self.assign.assign(l);
        self.reason[l.var().index()] = reason;
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    /// Decisions taken so far, in order.
    pub fn decisions(&self) -> &[Lit] {
        &self.decision_log
    }

    /// Clauses learned from conflicts plus the clauses produced by
    /// predicates (reasons and conflicts).
    pub fn learned_clauses(&self) -> Vec<Clause> {
        self.clauses
            .iter()
            .filter(|c| c.kind != ClauseKind::Original)
            .map(|c| Clause::new(c.lits.iter().copied()).unwrap())
            .collect()
    }

    pub fn solve(&mut self) -> SolveResult {
        let start = Instant::now();
        let status = self.search(start);
        self.stats.wall_time = start.elapsed();
        let model = (status == Status::Sat).then(|| self.assign.to_full().expect("complete trail"));
        SolveResult {
            status,
            model,
            stats: self.stats.clone(),
        }
    }

    fn search(&mut self, start: Instant) -> Status {
        if self.trivially_unsat {
            return Status::Unsat;
        }
        let mut restart_idx = 0u32;
        let mut conflicts_until_restart = self.restart_limit(restart_idx);
        loop {
            match self.propagate() {
                Some(conflict) => {
                    let cref = match conflict {
                        Conflict::Boolean(c) => {
                            self.stats.boolean_conflicts += 1;
                            c
                        }
                        Conflict::Probabilistic(c) => {
                            self.stats.prob_conflicts += 1;
                            c
                        }
                    };
                    if !self.resolve_conflict(cref) {
                        return Status::Unsat;
                    }
                    if self.budget_exhausted(start) {
                        return Status::BudgetExhausted;
                    }
                    if let Some(left) = conflicts_until_restart.as_mut() {
                        *left -= 1;
                        if *left == 0 {
                            restart_idx += 1;
                            conflicts_until_restart = self.restart_limit(restart_idx);
                            self.stats.restarts += 1;
                            self.backtrack(0);
                        }
                    }
                }
                None => match self.decide() {
                    Some(l) => {
                        self.assign.new_level();
                        self.stats.decisions += 1;
                        self.stats.max_decision_level =
                            self.stats.max_decision_level.max(self.level());
                        self.decision_log.push(l);
                        self.enqueue(l, None);
                    }
                    None => {
                        debug_assert!(self.preds.iter().all(|p| p.decided_at.is_some()));
                        return Status::Sat;
                    }
                },
            }
        }
    }

    fn restart_limit(&self, idx: u32) -> Option<u64> {
        (self.cfg.restart_base > 0).then(|| luby(idx) * self.cfg.restart_base)
    }

    fn budget_exhausted(&self, start: Instant) -> bool {
        self.cfg
            .conflict_budget
            .is_some_and(|b| self.stats.conflicts() >= b)
            || self.cfg.time_budget.is_some_and(|t| start.elapsed() >= t)
    }

    /// Unit propagation to fixpoint, then predicate bound updates; repeats
    /// while predicates imply new literals.
    fn propagate(&mut self) -> Option<Conflict> {
        loop {
            if let Some(c) = self.propagate_clauses() {
                return Some(Conflict::Boolean(c));
            }
            match self.propagate_predicates() {
                Err(c) => return Some(Conflict::Probabilistic(c)),
                Ok(false) => return None,
                Ok(true) => {}
            }
        }
    }

    fn propagate_clauses(&mut self) -> Option<ClauseRef> {
        while self.qhead < self.assign.trail().len() {
            let p = self.assign.trail()[self.qhead];
            self.qhead += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[false_lit.code()]);
            let (mut i, mut j) = (0, 0);
            let mut conflict = None;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == Some(true) {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let lits = &mut self.clauses[w.cref].lits;
                if lits[0] == false_lit {
                    lits.swap(0, 1);
                }
                let first = lits[0];
                if first != w.blocker && self.assign.lit_value(first) == Some(true) {
                    ws[j] = Watcher {
                        cref: w.cref,
                        blocker: first,
                    };
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..lits.len() {
                    if self.assign.lit_value(lits[k]) != Some(false) {
                        lits.swap(1, k);
                        let new_watch = lits[1];
                        self.watches[new_watch.code()].push(Watcher {
                            cref: w.cref,
                            blocker: first,
                        });
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = Watcher {
                    cref: w.cref,
                    blocker: first,
                };
                j += 1;
                match self.value(first) {
                    Some(false) => {
                        conflict = Some(w.cref);
                        while i < ws.len() {
                            ws[j] = ws[i];
                            j += 1;
                            i += 1;
                        }
                    }
                    _ => {
                        self.enqueue(first, Some(w.cref));
                        self.stats.boolean_propagations += 1;
                    }
                }
            }
            ws.truncate(j);
            self.watches[false_lit.code()] = ws;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    /// Pushes new shared assignments into the bound states and checks every
    /// unsettled predicate. `Ok(true)` means a literal was implied.
    fn propagate_predicates(&mut self) -> std::result::Result<bool, ClauseRef> {
        if self.cfg.ulw {
            while self.pred_head < self.assign.trail().len() {
                let l = self.assign.trail()[self.pred_head];
                self.pred_head += 1;
                let level = self.assign.level(l.var());
                for &(pi, cv) in &self.occurs[l.var().index()] {
                    let pred = &mut self.preds[pi];
                    if pred.decided_at.is_none() {
                        pred.bounds
                            .assign(cv, l.positive(), level)
                            .expect("shared variable assigned once per trail entry");
                    }
                }
            }
        }

        let mut implied = false;
        for pi in 0..self.preds.len() {
            if self.preds[pi].decided_at.is_some() {
                continue;
            }
            let spec = &self.problem.predicates[pi];
            let (ub, lb) = if self.cfg.ulw {
                self.preds[pi].bounds.root_repr()
            } else {
                if self.preds[pi]
                    .shared
                    .iter()
                    .any(|&(_, v)| self.assign.value(v).is_none())
                {
                    continue;
                }
                let a = spec.circuit_assignment(|v| self.assign.value(v));
                let exact = spec
                    .circuit
                    .marginal_in(&a, self.cfg.mode)
                    .expect("validated circuit");
                (exact, exact)
            };
            let b_value = match spec.b {
                Some(b) => self.value(b),
                None => Some(true),
            };
            let outcome = evaluate_predicate(spec.cmp, self.preds[pi].q, ub, lb, b_value);
            let required = match (outcome, spec.b) {
                (PredicateOutcome::Undecided, _) => continue,
                (PredicateOutcome::EntailedTrue | PredicateOutcome::Conflict, None) => None,
                (PredicateOutcome::EntailedTrue, Some(b)) => Some(b),
                (PredicateOutcome::EntailedFalse, Some(b)) => Some(!b),
                (PredicateOutcome::Conflict, Some(b)) => {
                    Some(if b_value == Some(true) { !b } else { b })
                }
                (PredicateOutcome::EntailedFalse, None) => {
                    unreachable!("hard predicates report conflicts")
                }
            };
            let consistent = match outcome {
                PredicateOutcome::Conflict => false,
                _ => required.is_none_or(|r| self.value(r) != Some(false)),
            };
            let assigned: Vec<(Var, bool)> = self.preds[pi]
                .shared
                .iter()
                .filter_map(|&(_, v)| self.assign.value(v).map(|val| (v, val)))
                .collect();
            if !consistent {
                let clause = probabilistic_clause(required, assigned);
                let cref = self.store(clause.lits().to_vec(), ClauseKind::ProbConflict);
                return Err(cref);
            }
            self.preds[pi].decided_at = Some(self.level());
            if let Some(r) = required {
                if self.value(r).is_none() {
                    let clause = probabilistic_clause(Some(r), assigned);
                    let cref = self.store(clause.lits().to_vec(), ClauseKind::ProbReason);
                    self.enqueue(r, Some(cref));
                    self.stats.prob_entailments += 1;
                    implied = true;
                }
            }
        }
        Ok(implied)
    }

    /// Learns from a falsified clause and backjumps. Returns `false` when
    /// the conflict holds at level 0.
    fn resolve_conflict(&mut self, confl: ClauseRef) -> bool {
        let conflict_level = self.clauses[confl]
            .lits
            .iter()
            .map(|l| self.assign.level(l.var()))
            .max()
            .unwrap_or(0);
        if conflict_level == 0 {
            return false;
        }
        if conflict_level < self.level() {
            self.backtrack(conflict_level);
        }
        let (learnt, bj) = self.analyze(confl);
        self.backtrack(bj);
        if learnt.len() == 1 {
            self.enqueue(learnt[0], None);
        } else {
            let asserting = learnt[0];
            let cref = self.attach(learnt, ClauseKind::Learned);
            self.enqueue(asserting, Some(cref));
        }
        self.stats.learned_clauses += 1;
        self.var_inc /= self.cfg.var_decay;
        true
    }

    /// First-UIP analysis. The returned clause has the asserting literal
    /// first and a literal of the backjump level second.
    fn analyze(&mut self, confl: ClauseRef) -> (Vec<Lit>, u32) {
        let level = self.level();
        let mut out: Vec<Lit> = vec![Lit::from_dimacs(1).unwrap()];
        let mut path = 0usize;
        let mut idx = self.assign.trail().len();
        let mut cref = confl;
        let mut skip_first = false;
        let uip = loop {
            let lits = self.clauses[cref].lits.clone();
            for &q in &lits[skip_first as usize..] {
                let v = q.var();
                if self.seen[v.index()] || self.assign.level(v) == 0 {
                    continue;
                }
                self.seen[v.index()] = true;
                self.bump(v);
                if self.assign.level(v) == level {
                    path += 1;
                } else {
                    out.push(q);
                }
            }
            let p = loop {
                idx -= 1;
                let p = self.assign.trail()[idx];
                if self.seen[p.var().index()] {
                    break p;
                }
            };
            self.seen[p.var().index()] = false;
            path -= 1;
            if path == 0 {
                break p;
            }
            cref = self.reason[p.var().index()].expect("implied literal has a reason");
            skip_first = true;
        };
        out[0] = !uip;
        for l in &out[1..] {
            self.seen[l.var().index()] = false;
        }

        let mut bj = 0;
        if out.len() > 1 {
            let mut max_i = 1;
            for i in 2..out.len() {
                if self.assign.level(out[i].var()) > self.assign.level(out[max_i].var()) {
                    max_i = i;
                }
            }
            out.swap(1, max_i);
            bj = self.assign.level(out[1].var());
        }
        (out, bj)
    }

    fn bump(&mut self, v: Var) {
        self.activity[v.index()] += self.var_inc;
        if self.activity[v.index()] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
    }

    /// Undoes the trail, bound states and predicate flags above `level`.
    fn backtrack(&mut self, level: u32) {
        if self.level() <= level {
            return;
        }
        let keep = self.assign.level_start(level);
        for &l in &self.assign.trail()[keep..] {
            self.phase[l.var().index()] = l.positive();
            self.reason[l.var().index()] = None;
        }
        self.assign.backtrack(level);
        let len = self.assign.trail().len();
        self.qhead = self.qhead.min(len);
        self.pred_head = self.pred_head.min(len);
        for p in &mut self.preds {
            p.bounds.backtrack(level);
            if p.decided_at.is_some_and(|d| d > level) {
                p.decided_at = None;
            }
        }
    }

    /// Most active unassigned variable with its saved phase.
    fn decide(&self) -> Option<Lit> {
        let mut best: Option<usize> = None;
        for v in 0..self.activity.len() {
            if self.assign.value(Var::new(v as u32)).is_none()
                && best.is_none_or(|b| self.activity[v] > self.activity[b])
            {
                best = Some(v);
            }
        }
        best.map(|v| Var::new(v as u32).lit(self.phase[v]))
    }
}

/// Luby restart sequence 1, 1, 2, 1, 1, 2, 4, ...
fn luby(i: u32) -> u64 {
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < i as u64 + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    let mut x = i as u64;
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    1u64 << seq
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::circuit::example_circuit;
    use crate::formula::{parse_dimacs, CnfFormula};
    use crate::solver::{Cmp, PredicateSpec};

    fn lit(l: i64) -> Lit {
        Lit::from_dimacs(l).unwrap()
    }

    fn plain(text: &str) -> SmcProblem {
        SmcProblem::new(parse_dimacs(text).unwrap(), vec![]).unwrap()
    }

    /// Route choice: x1..x4 = vars 1..4, b1 = 5, b2 = 6.
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
    fn luby_prefix() {
        let seq: Vec<u64> = (0..15).map(luby).collect();
        assert_eq!(seq, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn plain_sat_and_unsat() {
        let r = Solver::new(&plain("p cnf 1 2\n1 0\n-1 0\n"), SolverConfig::default())
            .unwrap()
            .solve();
        assert_eq!(r.status, Status::Unsat);
        let p = plain("p cnf 3 3\n1 2 0\n-1 3 0\n-2 -3 0\n");
        let r = Solver::new(&p, SolverConfig::default()).unwrap().solve();
        assert_eq!(r.status, Status::Sat);
        assert!(p.cnf.eval_full(&r.model.unwrap()));
    }

    #[test]
    fn unit_propagation_follows_decision() {
        let p = plain("p cnf 2 1\n-1 2 0\n");
        let mut s = Solver::new(&p, SolverConfig::default()).unwrap();
        s.assign.new_level();
        s.enqueue(lit(1), None);
        assert_eq!(s.propagate(), None);
        assert_eq!(s.assign.value(Var::new(1)), Some(true));
    }

    #[test]
    fn early_probabilistic_conflict() {
        let p = routes(0.5);
        let mut s = Solver::new(&p, SolverConfig::default()).unwrap();
        assert_eq!(s.propagate(), None);
        s.assign.new_level();
        s.enqueue(lit(1), None);
        assert_eq!(s.propagate(), None);
        // x1 = T caps the marginal at 0.2, so b1 is implied false
        assert_eq!(s.assign.value(Var::new(4)), Some(false));
        let r = s.reason[4].unwrap();
        assert_eq!(s.clauses[r].lits, vec![lit(-5), lit(-1)]);

        let mut s = Solver::new(&p, SolverConfig::default()).unwrap();
        s.assign.new_level();
        // -6 forces b1, x1 and x2; the marginal 0.1 misses 0.5
        s.enqueue(lit(-6), None);
        let Some(Conflict::Probabilistic(c)) = s.propagate() else {
            panic!("expected probabilistic conflict")
        };
        let lits = s.clauses[c].lits.clone();
        assert_eq!(lits[0], lit(-5));
        assert!(lits.contains(&lit(-1)));
        assert!(lits.iter().all(|&l| s.value(l) == Some(false)));
    }

    #[test]
    fn route_example_statuses() {
        let p = routes(0.5);
        let r = solve_with(&p, SolverConfig::default());
        assert_eq!(r.status, Status::Sat);
        let m = r.model.unwrap();
        assert!(!m[4] && m[5] && m[2] && m[3]);
        assert_eq!(
            solve_with(&routes(1.5), SolverConfig::default()).status,
            Status::Unsat
        );
        assert_eq!(
            solve_with(&routes(1.5), SolverConfig::without_ulw()).status,
            Status::Unsat
        );
    }

    #[test]
    fn hard_predicate_without_shared_is_decided_at_level_zero() {
        let c = Arc::new(example_circuit());
        let mut cnf = CnfFormula::new(1);
        cnf.add_clause([lit(1)]).unwrap();
        let p = SmcProblem::new(
            cnf.clone(),
            vec![PredicateSpec::new(c.clone(), BTreeMap::new(), Cmp::Ge, 0.5)],
        )
        .unwrap();
        let r = solve_with(&p, SolverConfig::default());
        assert_eq!(r.status, Status::Sat);
        assert_eq!(r.stats.decisions, 0);
        let p = SmcProblem::new(
            cnf,
            vec![PredicateSpec::new(c, BTreeMap::new(), Cmp::Ge, 1.5)],
        )
        .unwrap();
        let r = solve_with(&p, SolverConfig::default());
        assert_eq!(r.status, Status::Unsat);
        assert_eq!(r.stats.prob_conflicts, 1);
    }

    #[test]
    fn textbook_conflict_learns_asserting_clause() {
        // decide 1 then 2: (-1 -2 3) (-1 -2 -3) conflict at level 2
        let p = plain("p cnf 4 3\n-1 -2 3 0\n-1 -2 -3 0\n4 1 0\n");
        let mut s = Solver::new(&p, SolverConfig::default()).unwrap();
        s.assign.new_level();
        s.enqueue(lit(1), None);
        assert_eq!(s.propagate(), None);
        s.assign.new_level();
        s.enqueue(lit(2), None);
        let Some(Conflict::Boolean(c)) = s.propagate() else {
            panic!("expected conflict")
        };
        let (learnt, bj) = s.analyze(c);
        assert_eq!(bj, 1);
        let at_conflict_level = learnt
            .iter()
            .filter(|l| s.assign.level(l.var()) == 2)
            .count();
        assert_eq!(at_conflict_level, 1);
        assert_eq!(learnt[0], lit(-2));
        s.backtrack(bj);
        assert_eq!(s.assign.value(Var::new(1)), None);
    }

    #[test]
    fn decisions_are_deterministic() {
        let p = routes(0.3);
        let mut a = Solver::new(&p, SolverConfig::default()).unwrap();
        let mut b = Solver::new(&p, SolverConfig::default()).unwrap();
        let ra = a.solve();
        let rb = b.solve();
        assert_eq!(a.decisions(), b.decisions());
        assert_eq!(ra.stats.counters(), rb.stats.counters());
        assert_eq!(ra.model, rb.model);
    }

    #[test]
    fn one_unassigned_variable_is_decided() {
        let p = plain("p cnf 2 1\n1 0\n");
        let mut s = Solver::new(&p, SolverConfig::default()).unwrap();
        assert_eq!(s.propagate(), None);
        assert_eq!(s.decide().map(|l| l.var()), Some(Var::new(1)));
    }

    fn solve_with(p: &SmcProblem, cfg: SolverConfig) -> SolveResult {
        Solver::new(p, cfg).unwrap().solve()
    }
}
