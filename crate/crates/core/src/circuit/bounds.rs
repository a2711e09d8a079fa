//! Upper/lower bound watching over a smooth, decomposable circuit.
//!
//! Every node carries an interval `[lb, ub]` containing its marginal under
//! every completion of the shared variables assigned so far. Latent leaves
//! contribute their total mass, unassigned shared leaves the max/min of
//! their two weights, and assigned leaves the weight of the chosen value.
//! Internal nodes combine their children's bounds with the ordinary
//! product/sum rules. Once every shared variable is assigned both bounds
//! equal the exact marginal.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::Arc;

use super::{Circuit, Node, NodeId, NumericMode};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
struct Frame {
    node: NodeId,
    ub: f64,
    lb: f64,
}

#[derive(Debug, Clone, Copy)]
struct AssignRecord {
    level: u32,
    var: u32,
    frame_start: usize,
}

#[derive(Debug, Clone)]
pub struct BoundState {
    circuit: Arc<Circuit>,
    mode: NumericMode,
    ub: Vec<f64>,
    lb: Vec<f64>,
    shared: Vec<bool>,
    status: Vec<Option<bool>>,
    frames: Vec<Frame>,
    assigns: Vec<AssignRecord>,
    queue: BinaryHeap<Reverse<NodeId>>,
    queued: Vec<bool>,
}

impl BoundState {
    /// One bottom-up pass computing initial bounds; `shared` lists the
    /// assignable circuit variables, all others are summed out.
    pub fn new(circuit: Arc<Circuit>, shared: &[u32], mode: NumericMode) -> Result<Self> {
        if !circuit.validation().is_valid() {
            return Err(Error::InvalidCircuit(
                "bounds require a smooth and decomposable circuit".into(),
            ));
        }
        let mut is_shared = vec![false; circuit.num_vars() as usize];
        for &v in shared {
            if v >= circuit.num_vars() {
                return Err(Error::InvalidArgument(format!(
                    "shared variable {v} out of range for {} circuit variables",
                    circuit.num_vars()
                )));
            }
            is_shared[v as usize] = true;
        }
        let n = circuit.num_nodes();
        let mut s = BoundState {
            mode,
            ub: vec![0.0; n],
            lb: vec![0.0; n],
            status: vec![None; circuit.num_vars() as usize],
            shared: is_shared,
            frames: Vec::new(),
            assigns: Vec::new(),
            queue: BinaryHeap::new(),
            queued: vec![false; n],
            circuit,
        };
        for id in 0..n {
            let (ub, lb) = s.node_bounds(id);
            s.ub[id] = ub;
            s.lb[id] = lb;
        }
        Ok(s)
    }

    pub fn circuit(&self) -> &Arc<Circuit> {
        &self.circuit
    }

    pub fn mode(&self) -> NumericMode {
        self.mode
    }

    pub fn is_shared(&self, var: u32) -> bool {
        self.shared.get(var as usize).copied().unwrap_or(false)
    }

    pub fn value(&self, var: u32) -> Option<bool> {
        self.status[var as usize]
    }

    /// Number of currently assigned shared variables.
    pub fn num_assigned(&self) -> usize {
        self.assigns.len()
    }

    pub fn assigned_vars(&self) -> impl Iterator<Item = (u32, bool)> + '_ {
        self.assigns
            .iter()
            .map(|r| (r.var, self.status[r.var as usize].unwrap()))
    }

    /// Root `(ub, lb)` in the representation of the numeric mode.
    pub fn root_repr(&self) -> (f64, f64) {
        let r = self.circuit.root();
        (self.ub[r], self.lb[r])
    }

    /// Root `(ub, lb)` as plain (linear) values.
    pub fn root_bounds(&self) -> (f64, f64) {
        let (ub, lb) = self.root_repr();
        (self.mode.to_linear(ub), self.mode.to_linear(lb))
    }

    /// Bounds of any node, in the mode's representation.
    pub fn node_repr(&self, id: NodeId) -> (f64, f64) {
        (self.ub[id], self.lb[id])
    }

    fn leaf_bounds(&self, node: &Node) -> (f64, f64) {
        let (ub, lb) = match node {
            Node::Constant(v) => (*v, *v),
            n => {
                let var = n.leaf_var().unwrap() as usize;
                let (wt, wf) = n.leaf_weights().unwrap();
                match self.status[var] {
                    Some(true) => (wt, wt),
                    Some(false) => (wf, wf),
                    None if self.shared[var] => (wt.max(wf), wt.min(wf)),
                    None => {
                        let mass = wt + wf;
                        (mass, mass)
                    }
                }
            }
        };
        (self.mode.from_linear(ub), self.mode.from_linear(lb))
    }

    fn node_bounds(&self, id: NodeId) -> (f64, f64) {
        match self.circuit.node(id) {
            Node::Product(_) | Node::Sum(_) => (
                self.circuit.combine(id, self.mode, |c| self.ub[c]),
                self.circuit.combine(id, self.mode, |c| self.lb[c]),
            ),
            leaf => self.leaf_bounds(leaf),
        }
    }

    /// Fixes shared variable `var` to `val` at decision `level` and
    /// refreshes the ancestors of its leaves. Returns the new root bounds
    /// (in the mode's representation).
    pub fn assign(&mut self, var: u32, val: bool, level: u32) -> Result<(f64, f64)> {
        if !self.is_shared(var) {
            return Err(Error::NotShared { var });
        }
        if self.status[var as usize].is_some() {
            return Err(Error::AlreadyAssigned { var });
        }
        self.status[var as usize] = Some(val);
        self.assigns.push(AssignRecord {
            level,
            var,
            frame_start: self.frames.len(),
        });

        let circuit = Arc::clone(&self.circuit);
        for &leaf in circuit.leaves_of(var) {
            self.set_node(leaf);
        }
        while let Some(Reverse(id)) = self.queue.pop() {
            self.queued[id] = false;
            self.set_node(id);
        }
        Ok(self.root_repr())
    }

    /// Recomputes one node; if it changed, records the old value and
    /// schedules its parents.
    fn set_node(&mut self, id: NodeId) {
        let (ub, lb) = self.node_bounds(id);
        if ub.to_bits() == self.ub[id].to_bits() && lb.to_bits() == self.lb[id].to_bits() {
            return;
        }
        self.frames.push(Frame {
            node: id,
            ub: self.ub[id],
            lb: self.lb[id],
        });
        self.ub[id] = ub;
        self.lb[id] = lb;
        for &p in self.circuit.parents(id) {
            if !self.queued[p] {
                self.queued[p] = true;
                self.queue.push(Reverse(p));
            }
        }
    }

    /// Undoes every assignment made above `level`, restoring the exact
    /// previous node values.
    pub fn backtrack(&mut self, level: u32) {
        while let Some(rec) = self.assigns.last().copied() {
            if rec.level <= level {
                break;
            }
            self.assigns.pop();
            for f in self.frames.drain(rec.frame_start..).rev() {
                self.ub[f.node] = f.ub;
                self.lb[f.node] = f.lb;
            }
            self.status[rec.var as usize] = None;
        }
    }
}
