//! CNF formulas, literals, and partial assignments.
//!
//! Variables are stored 0-based; every external format (DIMACS, model
//! files, manifests) uses 1-based indices, converted at the boundary with
//! [`Var::from_dimacs`] / [`Var::dimacs`].

use std::fmt;
use std::ops::Not;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    pub const fn new(index: u32) -> Self {
        Var(index)
    }

    /// Converts a 1-based DIMACS index. Returns `None` for 0.
    pub fn from_dimacs(index: u32) -> Option<Self> {
        index.checked_sub(1).map(Var)
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub const fn dimacs(self) -> u32 {
        self.0 + 1
    }

    pub const fn lit(self, positive: bool) -> Lit {
        Lit(self.0 << 1 | (!positive) as u32)
    }

    pub const fn pos(self) -> Lit {
        self.lit(true)
    }

    pub const fn neg(self) -> Lit {
        self.lit(false)
    }
}

/// A variable with a polarity. `positive()` means the variable must be true.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    #[inline]
    pub const fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    #[inline]
    pub const fn positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// Dense code usable as an index (`2 * var + negated`).
    #[inline]
    pub const fn code(self) -> usize {
        self.0 as usize
    }

    pub fn from_dimacs(lit: i64) -> Option<Self> {
        if lit == 0 || lit.unsigned_abs() > u32::MAX as u64 {
            return None;
        }
        let var = Var::from_dimacs(lit.unsigned_abs() as u32)?;
        Some(var.lit(lit > 0))
    }

    pub fn dimacs(self) -> i64 {
        let v = self.var().dimacs() as i64;
        if self.positive() {
            v
        } else {
            -v
        }
    }

    /// Truth value of this literal when its variable takes `value`.
    #[inline]
    pub fn eval(self, value: bool) -> bool {
        value == self.positive()
    }
}

impl Not for Lit {
    type Output = Lit;

    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.dimacs())
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.dimacs())
    }
}

/// A disjunction of literals with no duplicates and no complementary pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    /// Normalizes `lits`: duplicates are dropped (first occurrence kept) and
    /// a tautology yields `None`.
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Option<Self> {
        let mut out: Vec<Lit> = Vec::new();
        for l in lits {
            if out.contains(&!l) {
                return None;
            }
            if !out.contains(&l) {
                out.push(l);
            }
        }
        Some(Clause { lits: out })
    }

    pub fn from_dimacs(lits: &[i64]) -> Option<Self> {
        let lits: Option<Vec<Lit>> = lits.iter().map(|&l| Lit::from_dimacs(l)).collect();
        Clause::new(lits?)
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn status(&self, a: &PartialAssignment) -> ClauseStatus {
        let mut unassigned = None;
        let mut n_unassigned = 0;
        for &l in &self.lits {
            match a.lit_value(l) {
                Some(true) => return ClauseStatus::Satisfied,
                Some(false) => {}
                None => {
                    n_unassigned += 1;
                    unassigned = Some(l);
                }
            }
        }
        match (n_unassigned, unassigned) {
            (0, _) => ClauseStatus::Falsified,
            (1, Some(l)) => ClauseStatus::Unit(l),
            _ => ClauseStatus::Unresolved,
        }
    }

    /// Evaluates under a total assignment indexed by variable.
    pub fn eval_full(&self, values: &[bool]) -> bool {
        self.lits.iter().any(|l| l.eval(values[l.var().index()]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClauseStatus {
    Satisfied,
    Falsified,
    Unit(Lit),
    Unresolved,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaStatus {
    Satisfied,
    Falsified,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CnfFormula {
    num_vars: u32,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(num_vars: u32) -> Self {
        CnfFormula {
            num_vars,
            clauses: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Grows the variable count; existing clauses are unaffected.
    pub fn set_num_vars(&mut self, n: u32) {
        assert!(n >= self.num_vars, "cannot shrink a formula");
        self.num_vars = n;
    }

    pub fn fresh_var(&mut self) -> Var {
        self.num_vars += 1;
        Var::new(self.num_vars - 1)
    }

    /// Adds a clause after normalization. Tautologies are dropped silently.
    pub fn add_clause(&mut self, lits: impl IntoIterator<Item = Lit>) -> Result<()> {
        let Some(clause) = Clause::new(lits) else {
            return Ok(());
        };
        if let Some(l) = clause
            .lits
            .iter()
            .find(|l| l.var().index() >= self.num_vars as usize)
        {
            return Err(Error::InvalidProblem(format!(
                "literal {l} out of range for {} variables",
                self.num_vars
            )));
        }
        self.clauses.push(clause);
        Ok(())
    }

    pub fn extend(&mut self, clauses: impl IntoIterator<Item = Clause>) -> Result<()> {
        for c in clauses {
            self.add_clause(c.lits)?;
        }
        Ok(())
    }

    pub fn eval(&self, a: &PartialAssignment) -> FormulaStatus {
        let mut all_sat = true;
        for c in &self.clauses {
            match c.status(a) {
                ClauseStatus::Falsified => return FormulaStatus::Falsified,
                ClauseStatus::Satisfied => {}
                _ => all_sat = false,
            }
        }
        if all_sat {
            FormulaStatus::Satisfied
        } else {
            FormulaStatus::Unknown
        }
    }

    pub fn eval_full(&self, values: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.eval_full(values))
    }

    /// Renames variables by `perm` (old index -> new index).
    pub fn permute_vars(&self, perm: &[u32]) -> CnfFormula {
        assert_eq!(perm.len(), self.num_vars as usize);
        let clauses = self
            .clauses
            .iter()
            .map(|c| Clause {
                lits: c
                    .lits
                    .iter()
                    .map(|l| Var::new(perm[l.var().index()]).lit(l.positive()))
                    .collect(),
            })
            .collect();
        CnfFormula {
            num_vars: self.num_vars,
            clauses,
        }
    }
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(u32, usize)> = None;
    let mut formula = CnfFormula::default();
    let mut current: Vec<i64> = Vec::new();
    let mut read_clauses = 0usize;
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(Error::parse(line_no, "duplicate header"));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(Error::parse(line_no, format!("malformed header `{line}`")));
            }
            let nv = parts[2]
                .parse::<u32>()
                .map_err(|_| Error::parse(line_no, "bad variable count"))?;
            let nc = parts[3]
                .parse::<usize>()
                .map_err(|_| Error::parse(line_no, "bad clause count"))?;
            header = Some((nv, nc));
            formula.num_vars = nv;
            continue;
        }
        let Some((nv, _)) = header else {
            return Err(Error::parse(line_no, "clause before header"));
        };
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad literal `{tok}`")))?;
            if lit == 0 {
                read_clauses += 1;
                push_parsed_clause(&mut formula, &current);
                current.clear();
            } else {
                if lit.unsigned_abs() > nv as u64 {
                    return Err(Error::parse(
                        line_no,
                        format!("literal {lit} out of range for {nv} variables"),
                    ));
                }
                current.push(lit);
            }
        }
    }

    let Some((_, nc)) = header else {
        return Err(Error::parse(last_line, "missing `p cnf` header"));
    };
    if !current.is_empty() {
        read_clauses += 1;
        push_parsed_clause(&mut formula, &current);
    }
    if read_clauses != nc {
        return Err(Error::parse(
            last_line,
            format!("header declares {nc} clauses, found {read_clauses}"),
        ));
    }
    Ok(formula)
}

fn push_parsed_clause(formula: &mut CnfFormula, lits: &[i64]) {
    if let Some(c) = Clause::from_dimacs(lits) {
        formula.clauses.push(c);
    }
}

pub fn write_dimacs(f: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", f.num_vars, f.clauses.len());
    for c in &f.clauses {
        for l in &c.lits {
            out.push_str(&l.dimacs().to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}

/// Per-variable values plus the assignment trail, split into decision levels.
#[derive(Debug, Clone, Default)]
pub struct PartialAssignment {
    values: Vec<Option<bool>>,
    levels: Vec<u32>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
}

impl PartialAssignment {
    pub fn new(num_vars: u32) -> Self {
        PartialAssignment {
            values: vec![None; num_vars as usize],
            levels: vec![0; num_vars as usize],
            trail: Vec::new(),
            trail_lim: Vec::new(),
        }
    }

    /// Builds a level-0 assignment from `(var, value)` pairs.
    pub fn from_pairs(num_vars: u32, pairs: &[(Var, bool)]) -> Self {
        let mut a = PartialAssignment::new(num_vars);
        for &(v, val) in pairs {
            a.assign(v.lit(val));
        }
        a
    }

    pub fn num_vars(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn value(&self, v: Var) -> Option<bool> {
        self.values[v.index()]
    }

    #[inline]
    pub fn lit_value(&self, l: Lit) -> Option<bool> {
        self.values[l.var().index()].map(|v| l.eval(v))
    }

    #[inline]
    pub fn level(&self, v: Var) -> u32 {
        self.levels[v.index()]
    }

    pub fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    pub fn trail(&self) -> &[Lit] {
        &self.trail
    }

    pub fn is_complete(&self) -> bool {
        self.trail.len() == self.values.len()
    }

    /// Makes `l` true at the current decision level.
    ///
    /// Panics if the variable already has a value.
    pub fn assign(&mut self, l: Lit) {
        let v = l.var().index();
        assert!(
            self.values[v].is_none(),
            "variable {} assigned twice",
            v + 1
        );
        self.values[v] = Some(l.positive());
        self.levels[v] = self.decision_level();
        self.trail.push(l);
    }

    pub fn new_level(&mut self) {
        self.trail_lim.push(self.trail.len());
    }

    /// Trail length at the start of `level` (the whole trail for levels at
    /// or above the current one).
    pub fn level_start(&self, level: u32) -> usize {
        self.trail_lim
            .get(level as usize)
            .copied()
            .unwrap_or(self.trail.len())
    }

    /// Unassigns everything above `level`; returns the trail length afterwards.
    pub fn backtrack(&mut self, level: u32) -> usize {
        if level >= self.decision_level() {
            return self.trail.len();
        }
        let keep = self.trail_lim[level as usize];
        for l in self.trail.drain(keep..) {
            self.values[l.var().index()] = None;
        }
        self.trail_lim.truncate(level as usize);
        keep
    }

    /// Total assignment as a vector; `None` if any variable is unassigned.
    pub fn to_full(&self) -> Option<Vec<bool>> {
        self.values.iter().copied().collect()
    }
}
