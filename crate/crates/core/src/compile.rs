//! Discrete factor graphs over binary variables: UAI parsing, brute-force
//! marginals, and a Shannon-expansion compiler to smooth, decomposable
//! circuits.
//!
//! Table entries are indexed with the last scope variable varying fastest.
//! State 0 of a variable is read as `true` and state 1 as `false`, the same
//! order as the `w_true w_false` pair of a Bernoulli leaf.

use std::collections::HashMap;
use std::fmt::Write;

use crate::circuit::{Circuit, CircuitBuilder, NodeId};
use crate::error::{Error, Result};

/// Largest factor graph [`enumerate_marginal`] accepts by default.
pub const ENUMERATION_CAP: usize = 24;
/// Largest factor graph [`compile`] accepts by default.
pub const COMPILE_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetworkKind {
    Markov,
    Bayes,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub scope: Vec<u32>,
    pub table: Vec<f64>,
}

impl Factor {
    pub fn new(scope: Vec<u32>, table: Vec<f64>) -> Result<Self> {
        if table.len() != 1usize << scope.len() {
            return Err(Error::InvalidProblem(format!(
                "factor over {} variables needs {} entries, got {}",
                scope.len(),
                1usize << scope.len(),
                table.len()
            )));
        }
        for (i, v) in scope.iter().enumerate() {
            if scope[..i].contains(v) {
                return Err(Error::InvalidProblem(format!(
                    "variable {v} repeated in factor scope"
                )));
            }
        }
        if let Some(w) = table.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::InvalidProblem(format!(
                "factor entry {w} is not a nonnegative number"
            )));
        }
        Ok(Factor { scope, table })
    }

    /// Table position of an assignment to the scope (last variable fastest,
    /// `true` = state 0).
    pub fn index(&self, value: impl Fn(u32) -> bool) -> usize {
        self.scope
            .iter()
            .fold(0, |acc, &v| acc << 1 | (!value(v)) as usize)
    }

    pub fn value(&self, value: impl Fn(u32) -> bool) -> f64 {
        self.table[self.index(value)]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorGraph {
    pub kind: NetworkKind,
    pub num_vars: u32,
    pub factors: Vec<Factor>,
}

impl FactorGraph {
    pub fn new(kind: NetworkKind, num_vars: u32, factors: Vec<Factor>) -> Result<Self> {
        for f in &factors {
            if let Some(v) = f.scope.iter().find(|&&v| v >= num_vars) {
                return Err(Error::InvalidProblem(format!(
                    "factor variable {v} out of range for {num_vars} variables"
                )));
            }
        }
        Ok(FactorGraph {
            kind,
            num_vars,
            factors,
        })
    }

    /// Product of all factors under a total assignment.
    pub fn joint(&self, values: &[bool]) -> f64 {
        self.factors
            .iter()
            .map(|f| f.value(|v| values[v as usize]))
            .product()
    }
}

pub fn parse_uai(text: &str) -> Result<FactorGraph> {
    let mut toks = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim_start().starts_with('c') || l.trim().is_empty())
        .flat_map(|(i, l)| l.split_whitespace().map(move |t| (i + 1, t)));
    let mut last = 1;
    let mut next = |what: &str| -> Result<(usize, &str)> {
        match toks.next() {
            Some((line, t)) => {
                last = line;
                Ok((line, t))
            }
            None => Err(Error::parse(
                last,
                format!("unexpected end of input, expected {what}"),
            )),
        }
    };
    fn num<T: std::str::FromStr>(line: usize, t: &str) -> Result<T> {
        t.parse()
            .map_err(|_| Error::parse(line, format!("bad number `{t}`")))
    }

    let (line, kind) = next("network type")?;
    let kind = match kind.to_ascii_uppercase().as_str() {
        "MARKOV" => NetworkKind::Markov,
        "BAYES" => NetworkKind::Bayes,
        k => return Err(Error::parse(line, format!("unknown network type `{k}`"))),
    };
    let (line, t) = next("variable count")?;
    let n: usize = num(line, t)?;
    for var in 0..n {
        let (line, t) = next("cardinality")?;
        let card: usize = num(line, t)?;
        if card != 2 {
            return Err(Error::NonBinary { var, card });
        }
    }
    let (line, t) = next("factor count")?;
    let m: usize = num(line, t)?;
    let mut scopes = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, t) = next("scope size")?;
        let k: usize = num(line, t)?;
        let mut scope = Vec::with_capacity(k);
        for _ in 0..k {
            let (line, t) = next("scope variable")?;
            let v: u32 = num(line, t)?;
            if v as usize >= n {
                return Err(Error::parse(
                    line,
                    format!("variable {v} out of range for {n} variables"),
                ));
            }
            scope.push(v);
        }
        scopes.push(scope);
    }
    let mut factors = Vec::with_capacity(m);
    for scope in scopes {
        let (line, t) = next("table size")?;
        let count: usize = num(line, t)?;
        if count != 1usize << scope.len() {
            return Err(Error::parse(
                line,
                format!(
                    "table has {count} entries, scope of {} binary variables needs {}",
                    scope.len(),
                    1usize << scope.len()
                ),
            ));
        }
        let mut table = Vec::with_capacity(count);
        for _ in 0..count {
            let (line, t) = next("table entry")?;
            let w: f64 = num(line, t)?;
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::parse(
                    line,
                    format!("table entry `{t}` must be nonnegative"),
                ));
            }
            table.push(w);
        }
        factors.push(Factor::new(scope, table).map_err(|e| Error::parse(line, e.to_string()))?);
    }
    FactorGraph::new(kind, n as u32, factors)
}

pub fn write_uai(fg: &FactorGraph) -> String {
    let mut out = String::new();
    out.push_str(match fg.kind {
        NetworkKind::Markov => "MARKOV\n",
        NetworkKind::Bayes => "BAYES\n",
    });
    writeln!(out, "{}", fg.num_vars).unwrap();
    let cards = vec!["2"; fg.num_vars as usize].join(" ");
    writeln!(out, "{cards}").unwrap();
    writeln!(out, "{}", fg.factors.len()).unwrap();
    for f in &fg.factors {
        write!(out, "{}", f.scope.len()).unwrap();
        for v in &f.scope {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    for f in &fg.factors {
        writeln!(out, "\n{}", f.table.len()).unwrap();
        for row in f.table.chunks(2) {
            let row: Vec<String> = row.iter().map(|w| w.to_string()).collect();
            writeln!(out, " {}", row.join(" ")).unwrap();
        }
    }
    out
}

/// Sum over every completion of `assignment` of the product of all factors.
pub fn enumerate_marginal(fg: &FactorGraph, assignment: &[Option<bool>]) -> Result<f64> {
    enumerate_marginal_capped(fg, assignment, ENUMERATION_CAP)
}

pub fn enumerate_marginal_capped(
    fg: &FactorGraph,
    assignment: &[Option<bool>],
    cap: usize,
) -> Result<f64> {
    let n = fg.num_vars as usize;
    if n > cap {
        return Err(Error::CapExceeded {
            what: "factor graph",
            n,
            cap,
        });
    }
    let fixed = |v: usize| assignment.get(v).copied().flatten();
    let free: Vec<usize> = (0..n).filter(|&v| fixed(v).is_none()).collect();
    let mut values: Vec<bool> = (0..n).map(|v| fixed(v).unwrap_or(false)).collect();
    let mut total = 0.0;
    for bits in 0u64..(1u64 << free.len()) {
        for (i, &v) in free.iter().enumerate() {
            values[v] = bits >> i & 1 == 1;
        }
        total += fg.joint(&values);
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy)]
pub struct CompileOptions {
    pub memoize: bool,
    pub cap: usize,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            memoize: true,
            cap: COMPILE_CAP,
        }
    }
}

/// Compiles with ascending variable order.
pub fn compile_default(fg: &FactorGraph) -> Result<Circuit> {
    let order: Vec<u32> = (0..fg.num_vars).collect();
    compile(fg, &order)
}

pub fn compile(fg: &FactorGraph, order: &[u32]) -> Result<Circuit> {
    compile_with(fg, order, CompileOptions::default())
}

/// Shannon expansion along `order`. Each step is a sum over the two values
/// of the next variable; each branch multiplies that value's indicator,
/// the factors whose scope is completed at this step, and the sub-circuit
/// for the remaining variables.
pub fn compile_with(fg: &FactorGraph, order: &[u32], opts: CompileOptions) -> Result<Circuit> {
    let n = fg.num_vars as usize;
    if n > opts.cap {
        return Err(Error::CapExceeded {
            what: "factor graph",
            n,
            cap: opts.cap,
        });
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v as usize >= n || pos[v as usize] != usize::MAX {
            return Err(Error::InvalidArgument(format!(
                "order is not a permutation of 0..{n}"
            )));
        }
        pos[v as usize] = i;
    }
    if order.len() != n {
        return Err(Error::InvalidArgument(format!(
            "order is not a permutation of 0..{n}"
        )));
    }

    // Step at which each factor's scope becomes fully assigned.
    let mut ending: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut constant_factors = Vec::new();
    for (fi, f) in fg.factors.iter().enumerate() {
        match f.scope.iter().map(|&v| pos[v as usize]).max() {
            Some(last) => ending[last].push(fi),
            None => constant_factors.push(fi),
        }
    }
    // Decided variables still referenced by factors that end at or after each step.
    let frontier: Vec<Vec<u32>> = (0..=n)
        .map(|step| {
            let mut vs: Vec<u32> = order[..step]
                .iter()
                .copied()
                .filter(|&v| {
                    fg.factors.iter().any(|f| {
                        f.scope.contains(&v)
                            && f.scope.iter().map(|&u| pos[u as usize]).max().unwrap() >= step
                    })
                })
                .collect();
            vs.sort_unstable();
            vs
        })
        .collect();

    let mut c = Compiler {
        fg,
        order,
        ending,
        frontier,
        memoize: opts.memoize,
        builder: CircuitBuilder::new(fg.num_vars),
        indicators: vec![[None, None]; n],
        memo: HashMap::new(),
        assignment: vec![false; n],
    };
    let body = c.expand(0);
    let mut top: Vec<NodeId> = constant_factors
        .iter()
        .map(|&fi| c.builder.constant(fg.factors[fi].table[0]))
        .collect();
    top.extend(body);
    match top.len() {
        0 => {
            c.builder.constant(1.0);
        }
        1 => {}
        _ => {
            c.builder.product(top);
        }
    }
    c.builder.build()
}

struct Compiler<'a> {
    fg: &'a FactorGraph,
    order: &'a [u32],
    ending: Vec<Vec<usize>>,
    frontier: Vec<Vec<u32>>,
    memoize: bool,
    builder: CircuitBuilder,
    indicators: Vec<[Option<NodeId>; 2]>,
    memo: HashMap<(usize, Vec<bool>), NodeId>,
    assignment: Vec<bool>,
}

impl Compiler<'_> {
    fn indicator(&mut self, var: u32, val: bool) -> NodeId {
        let slot = &mut self.indicators[var as usize][val as usize];
        match *slot {
            Some(id) => id,
            None => {
                let id = self.builder.indicator(var, val);
                self.indicators[var as usize][val as usize] = Some(id);
                id
            }
        }
    }

    fn expand(&mut self, step: usize) -> Option<NodeId> {
        if step == self.order.len() {
            return None;
        }
        let key = (
            step,
            self.frontier[step]
                .iter()
                .map(|&v| self.assignment[v as usize])
                .collect::<Vec<_>>(),
        );
        if self.memoize {
            if let Some(&id) = self.memo.get(&key) {
                return Some(id);
            }
        }
        let var = self.order[step];
        let mut branches = Vec::with_capacity(2);
        for val in [true, false] {
            self.assignment[var as usize] = val;
            let mut children = vec![self.indicator(var, val)];
            for &fi in &self.ending[step] {
                let w = self.fg.factors[fi].value(|v| self.assignment[v as usize]);
                children.push(self.builder.constant(w));
            }
            if let Some(sub) = self.expand(step + 1) {
                children.push(sub);
            }
            let branch = if children.len() == 1 {
                children[0]
            } else {
                self.builder.product(children)
            };
            branches.push((1.0, branch));
        }
        let id = self.builder.sum(branches);
        if self.memoize {
            self.memo.insert(key, id);
        }
        Some(id)
    }
}
