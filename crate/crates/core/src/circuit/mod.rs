//! Probabilistic circuits: a topologically ordered DAG of leaves, products
//! and weighted sums over binary variables.
//!
//! Node ids are positions in the node list and every child id is smaller
//! than its parent's id, so a single forward pass evaluates the circuit.
//! The last node is the root.

mod bounds;
mod format;

use std::fmt;

pub use bounds::BoundState;
pub use format::{parse_pc, write_pc};

use crate::error::{Error, Result};

pub type NodeId = usize;

/// Arithmetic used for node values.
///
/// `Log` stores natural logarithms: products become additions, sums
/// become log-sum-exp, and zero is `-inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NumericMode {
    #[default]
    Linear,
    Log,
}

impl NumericMode {
    #[inline]
    pub fn from_linear(self, x: f64) -> f64 {
        match self {
            NumericMode::Linear => x,
            NumericMode::Log => x.ln(),
        }
    }

    #[inline]
    pub fn to_linear(self, r: f64) -> f64 {
        match self {
            NumericMode::Linear => r,
            NumericMode::Log => r.exp(),
        }
    }
}

impl std::str::FromStr for NumericMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(NumericMode::Linear),
            "log" => Ok(NumericMode::Log),
            _ => Err(Error::InvalidArgument(format!(
                "unknown numeric mode `{s}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Bernoulli {
        var: u32,
        w_true: f64,
        w_false: f64,
    },
    /// Weight 1 when `var == positive`, else 0.
    Indicator {
        var: u32,
        positive: bool,
    },
    Constant(f64),
    Product(Vec<NodeId>),
    Sum(Vec<(f64, NodeId)>),
}

impl Node {
    pub fn leaf_var(&self) -> Option<u32> {
        match *self {
            Node::Bernoulli { var, .. } | Node::Indicator { var, .. } => Some(var),
            _ => None,
        }
    }

    /// `(weight at true, weight at false)` of a variable leaf.
    pub fn leaf_weights(&self) -> Option<(f64, f64)> {
        match *self {
            Node::Bernoulli {
                w_true, w_false, ..
            } => Some((w_true, w_false)),
            Node::Indicator { positive, .. } => {
                Some(if positive { (1.0, 0.0) } else { (0.0, 1.0) })
            }
            _ => None,
        }
    }

    fn children(&self) -> Vec<NodeId> {
        match self {
            Node::Product(ch) => ch.clone(),
            Node::Sum(ch) => ch.iter().map(|&(_, c)| c).collect(),
            _ => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// Sum node whose children cover different variable sets.
    NotSmooth,
    /// Product node with two children sharing a variable.
    NotDecomposable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub node: NodeId,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub smooth: bool,
    pub decomposable: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.smooth && self.decomposable
    }
}

#[derive(Debug, Clone)]
pub struct Circuit {
    num_vars: u32,
    nodes: Vec<Node>,
    /// Sorted variable set per node.
    scopes: Vec<Vec<u32>>,
    parents: Vec<Vec<NodeId>>,
    /// Leaves mentioning each variable.
    var_leaves: Vec<Vec<NodeId>>,
    /// Natural-log sum weights, parallel to `Node::Sum` children.
    log_weights: Vec<Vec<f64>>,
    report: ValidationReport,
}

impl PartialEq for Circuit {
    fn eq(&self, other: &Self) -> bool {
        self.num_vars == other.num_vars && self.nodes == other.nodes
    }
}

impl Circuit {
    /// Checks structural well-formedness and computes scopes, parents and
    /// the smoothness/decomposability report.
    pub fn new(num_vars: u32, nodes: Vec<Node>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidCircuit("circuit has no nodes".into()));
        }
        let check_w = |id: usize, w: f64| {
            if !(w.is_finite() && w >= 0.0) {
                Err(Error::InvalidCircuit(format!(
                    "node {id}: weight {w} is not a nonnegative finite number"
                )))
            } else {
                Ok(())
            }
        };
        for (id, node) in nodes.iter().enumerate() {
            match node {
                Node::Bernoulli {
                    var,
                    w_true,
                    w_false,
                } => {
                    check_w(id, *w_true)?;
                    check_w(id, *w_false)?;
                    check_var(id, *var, num_vars)?;
                }
                Node::Indicator { var, .. } => check_var(id, *var, num_vars)?,
                Node::Constant(v) => check_w(id, *v)?,
                Node::Product(ch) => {
                    for &c in ch {
                        check_child(id, c)?;
                    }
                }
                Node::Sum(ch) => {
                    for &(w, c) in ch {
                        check_w(id, w)?;
                        check_child(id, c)?;
                    }
                }
            }
        }

        let n = nodes.len();
        let mut scopes: Vec<Vec<u32>> = Vec::with_capacity(n);
        let mut parents = vec![Vec::new(); n];
        let mut var_leaves = vec![Vec::new(); num_vars as usize];
        let mut log_weights = vec![Vec::new(); n];
        for (id, node) in nodes.iter().enumerate() {
            let scope = match node {
                Node::Bernoulli { var, .. } | Node::Indicator { var, .. } => {
                    var_leaves[*var as usize].push(id);
                    vec![*var]
                }
                Node::Constant(_) => Vec::new(),
                Node::Product(_) | Node::Sum(_) => {
                    let mut s: Vec<u32> = Vec::new();
                    for c in node.children() {
                        s = union_sorted(&s, &scopes[c]);
                        if parents[c].last() != Some(&id) {
                            parents[c].push(id);
                        }
                    }
                    s
                }
            };
            if let Node::Sum(ch) = node {
                log_weights[id] = ch.iter().map(|&(w, _)| w.ln()).collect();
            }
            scopes.push(scope);
        }

        let mut c = Circuit {
            num_vars,
            nodes,
            scopes,
            parents,
            var_leaves,
            log_weights,
            report: ValidationReport {
                smooth: true,
                decomposable: true,
                violations: Vec::new(),
            },
        };
        c.report = c.compute_validation();
        Ok(c)
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn root(&self) -> NodeId {
        self.nodes.len() - 1
    }

    pub fn scope(&self, id: NodeId) -> &[u32] {
        &self.scopes[id]
    }

    pub fn parents(&self, id: NodeId) -> &[NodeId] {
        &self.parents[id]
    }

    pub fn leaves_of(&self, var: u32) -> &[NodeId] {
        &self.var_leaves[var as usize]
    }

    /// Smoothness/decomposability report, computed once at construction.
    pub fn validation(&self) -> &ValidationReport {
        &self.report
    }

    fn compute_validation(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (id, node) in self.nodes.iter().enumerate() {
            match node {
                Node::Sum(ch) => {
                    if let Some(&(_, first)) = ch.first() {
                        if ch
                            .iter()
                            .any(|&(_, c)| self.scopes[c] != self.scopes[first])
                        {
                            violations.push(Violation {
                                node: id,
                                kind: ViolationKind::NotSmooth,
                            });
                        }
                    }
                }
                Node::Product(ch) => {
                    let total: usize = ch.iter().map(|&c| self.scopes[c].len()).sum();
                    if total != self.scopes[id].len() {
                        violations.push(Violation {
                            node: id,
                            kind: ViolationKind::NotDecomposable,
                        });
                    }
                }
                _ => {}
            }
        }
        ValidationReport {
            smooth: !violations
                .iter()
                .any(|v| v.kind == ViolationKind::NotSmooth),
            decomposable: !violations
                .iter()
                .any(|v| v.kind == ViolationKind::NotDecomposable),
            violations,
        }
    }

    fn require_valid(&self) -> Result<()> {
        if self.report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidCircuit(format!(
                "circuit is not smooth and decomposable: {:?}",
                self.report.violations
            )))
        }
    }

    /// Value of an internal node from its children's values. Leaves are
    /// handled by the caller. Children are folded in stored order, which
    /// keeps every evaluation path bit-identical.
    #[inline]
    pub(crate) fn combine(
        &self,
        id: NodeId,
        mode: NumericMode,
        val: impl Fn(NodeId) -> f64,
    ) -> f64 {
        match (&self.nodes[id], mode) {
            (Node::Product(ch), NumericMode::Linear) => ch.iter().fold(1.0, |acc, &c| acc * val(c)),
            (Node::Product(ch), NumericMode::Log) => ch.iter().fold(0.0, |acc, &c| acc + val(c)),
            (Node::Sum(ch), NumericMode::Linear) => {
                ch.iter().fold(0.0, |acc, &(w, c)| acc + w * val(c))
            }
            (Node::Sum(ch), NumericMode::Log) => log_sum_exp(
                ch.iter()
                    .zip(&self.log_weights[id])
                    .map(|(&(_, c), &lw)| lw + val(c)),
            ),
            _ => unreachable!("combine called on a leaf"),
        }
    }

    /// Bottom-up evaluation with `leaf` supplying leaf values (already in
    /// the representation of `mode`).
    fn eval_with(&self, mode: NumericMode, leaf: impl Fn(&Node) -> f64) -> f64 {
        let mut vals = vec![0.0; self.nodes.len()];
        for id in 0..self.nodes.len() {
            vals[id] = match &self.nodes[id] {
                Node::Product(_) | Node::Sum(_) => self.combine(id, mode, |c| vals[c]),
                n => leaf(n),
            };
        }
        vals[self.root()]
    }

    /// Joint value under a total assignment (indexed by circuit variable).
    pub fn evaluate_joint(&self, assignment: &[bool]) -> Result<f64> {
        if let Some(&v) = self.scopes[self.root()]
            .iter()
            .find(|&&v| v as usize >= assignment.len())
        {
            return Err(Error::Unassigned { var: v });
        }
        Ok(self.eval_with(NumericMode::Linear, |n| match n {
            Node::Constant(v) => *v,
            n => {
                let (wt, wf) = n.leaf_weights().unwrap();
                if assignment[n.leaf_var().unwrap() as usize] {
                    wt
                } else {
                    wf
                }
            }
        }))
    }

    /// Marginal of a partial assignment: unassigned variables are summed out.
    pub fn marginal(&self, assignment: &[Option<bool>]) -> Result<f64> {
        self.marginal_in(assignment, NumericMode::Linear)
    }

    /// Marginal in the representation of `mode` (a logarithm for `Log`).
    pub fn marginal_in(&self, assignment: &[Option<bool>], mode: NumericMode) -> Result<f64> {
        self.require_valid()?;
        Ok(self.eval_with(mode, |n| {
            mode.from_linear(match n {
                Node::Constant(v) => *v,
                n => {
                    let (wt, wf) = n.leaf_weights().unwrap();
                    match assignment
                        .get(n.leaf_var().unwrap() as usize)
                        .copied()
                        .flatten()
                    {
                        Some(true) => wt,
                        Some(false) => wf,
                        None => wt + wf,
                    }
                }
            })
        }))
    }

    pub fn partition(&self) -> Result<f64> {
        self.marginal(&[])
    }

    pub fn partition_in(&self, mode: NumericMode) -> Result<f64> {
        self.marginal_in(&[], mode)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_pc(self))
    }
}

/// Free-standing form of [`Circuit::validation`].
pub fn validate(c: &Circuit) -> ValidationReport {
    c.validation().clone()
}

fn check_var(id: usize, var: u32, num_vars: u32) -> Result<()> {
    if var >= num_vars {
        return Err(Error::InvalidCircuit(format!(
            "node {id}: variable {var} out of range for {num_vars} variables"
        )));
    }
    Ok(())
}

fn check_child(id: usize, child: usize) -> Result<()> {
    if child >= id {
        return Err(Error::InvalidCircuit(format!(
            "node {id}: child {child} is not an earlier node"
        )));
    }
    Ok(())
}

fn union_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub(crate) fn log_sum_exp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Incremental construction helper; nodes are appended in order and the
/// last one becomes the root.
#[derive(Debug, Default)]
pub struct CircuitBuilder {
    num_vars: u32,
    nodes: Vec<Node>,
}

impl CircuitBuilder {
    pub fn new(num_vars: u32) -> Self {
        CircuitBuilder {
            num_vars,
            nodes: Vec::new(),
        }
    }

    pub fn push(&mut self, node: Node) -> NodeId {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    pub fn bernoulli(&mut self, var: u32, w_true: f64, w_false: f64) -> NodeId {
        self.push(Node::Bernoulli {
            var,
            w_true,
            w_false,
        })
    }

    pub fn indicator(&mut self, var: u32, positive: bool) -> NodeId {
        self.push(Node::Indicator { var, positive })
    }

    pub fn constant(&mut self, value: f64) -> NodeId {
        self.push(Node::Constant(value))
    }

    pub fn product(&mut self, children: Vec<NodeId>) -> NodeId {
        self.push(Node::Product(children))
    }

    pub fn sum(&mut self, children: Vec<(f64, NodeId)>) -> NodeId {
        self.push(Node::Sum(children))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn build(self) -> Result<Circuit> {
        Circuit::new(self.num_vars, self.nodes)
    }
}

/// The four-variable example circuit used throughout the docs and tests:
/// a 0.5/0.5 mixture of two products, each pairing the indicators of `x3`
/// and `x4` with an 0.8/0.2 mixture over `(x1, x2)`.
///
/// Circuit variables `0..4` stand for `x1..x4`.
pub fn example_circuit() -> Circuit {
    let mut b = CircuitBuilder::new(4);
    let nx2 = b.indicator(1, false);
    let nx1 = b.indicator(0, false);
    let x2 = b.indicator(1, true);
    let x1 = b.indicator(0, true);
    let p21 = b.product(vec![nx2, nx1]);
    let p22 = b.product(vec![nx2, x1]);
    let p23 = b.product(vec![nx1, x2]);
    let p24 = b.product(vec![x2, x1]);
    let x4 = b.indicator(3, true);
    let s32 = b.sum(vec![(0.8, p21), (0.2, p22)]);
    let s33 = b.sum(vec![(0.8, p23), (0.2, p24)]);
    let x3 = b.indicator(2, true);
    let p41 = b.product(vec![x4, s32, x3]);
    let p42 = b.product(vec![s33, x3, x4]);
    b.sum(vec![(0.5, p41), (0.5, p42)]);
    b.build().expect("example circuit is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assign(vals: &[Option<bool>]) -> Vec<Option<bool>> {
        vals.to_vec()
    }

    #[test]
    fn example_structure() {
        let c = example_circuit();
        assert_eq!(c.num_nodes(), 15);
        assert!(c.validation().is_valid());
        assert_eq!(c.node(c.root()), &Node::Sum(vec![(0.5, 12), (0.5, 13)]));
        assert_eq!(c.scope(c.root()), &[0, 1, 2, 3]);
        assert_eq!(c.leaves_of(0).len(), 2);
    }

    #[test]
    fn example_joint_values() {
        let c = example_circuit();
        assert_eq!(c.evaluate_joint(&[true, false, true, true]).unwrap(), 0.1);
        assert_eq!(c.evaluate_joint(&[true, true, true, true]).unwrap(), 0.1);
        assert!(c.evaluate_joint(&[true, true]).is_err());
    }

    #[test]
    fn example_marginals() {
        let c = example_circuit();
        let m = c
            .marginal(&assign(&[None, None, Some(true), Some(true)]))
            .unwrap();
        assert!((m - 1.0).abs() < 1e-12);
        let m = c
            .marginal(&assign(&[Some(true), Some(true), None, None]))
            .unwrap();
        assert!((m - 0.1).abs() < 1e-12);
        assert!((c.partition().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partition_matches_joint_enumeration() {
        let c = example_circuit();
        let mut total = 0.0;
        for bits in 0..16u32 {
            let a: Vec<bool> = (0..4).map(|i| bits >> i & 1 == 1).collect();
            total += c.evaluate_joint(&a).unwrap();
        }
        assert!((total - c.partition().unwrap()).abs() < 1e-12);
    }

    #[test]
    fn small_circuits() {
        let mut b = CircuitBuilder::new(1);
        b.bernoulli(0, 0.3, 0.7);
        let c = b.build().unwrap();
        assert_eq!(c.evaluate_joint(&[false]).unwrap(), 0.7);
        assert_eq!(c.partition().unwrap(), 1.0);

        let mut b = CircuitBuilder::new(0);
        b.constant(2.5);
        assert_eq!(b.build().unwrap().partition().unwrap(), 2.5);
    }

    #[test]
    fn validation_flags_violations() {
        let mut b = CircuitBuilder::new(2);
        let l0 = b.bernoulli(0, 0.5, 0.5);
        let l0b = b.bernoulli(0, 0.1, 0.9);
        b.product(vec![l0, l0b]);
        let c = b.build().unwrap();
        assert!(!c.validation().decomposable);
        assert_eq!(
            c.validation().violations,
            vec![Violation {
                node: 2,
                kind: ViolationKind::NotDecomposable
            }]
        );
        assert!(c.marginal(&[]).is_err());

        let mut b = CircuitBuilder::new(2);
        let l0 = b.bernoulli(0, 0.5, 0.5);
        let l1 = b.bernoulli(1, 0.5, 0.5);
        b.sum(vec![(1.0, l0), (1.0, l1)]);
        let c = b.build().unwrap();
        assert!(!c.validation().smooth);
        assert!(c.validation().decomposable);
    }

    #[test]
    fn construction_errors() {
        assert!(Circuit::new(1, vec![Node::Product(vec![0])]).is_err());
        assert!(Circuit::new(
            1,
            vec![Node::Bernoulli {
                var: 1,
                w_true: 0.1,
                w_false: 0.2
            }]
        )
        .is_err());
        assert!(Circuit::new(1, vec![Node::Constant(-1.0)]).is_err());
        assert!(Circuit::new(1, vec![]).is_err());
    }

    #[test]
    fn log_mode_agrees_with_linear() {
        let c = example_circuit();
        let a = assign(&[Some(false), None, Some(true), None]);
        let lin = c.marginal(&a).unwrap();
        let log = c.marginal_in(&a, NumericMode::Log).unwrap();
        assert!((log.exp() - lin).abs() < 1e-12);
        let zero = c
            .marginal_in(&assign(&[None, None, Some(false), None]), NumericMode::Log)
            .unwrap();
        assert_eq!(zero, f64::NEG_INFINITY);
    }
}
