use std::collections::HashMap;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, CircuitBuilder, NodeId};
use crate::compile::{Factor, FactorGraph, NetworkKind};
use crate::error::{Error, Result};
use crate::formula::Var;

/// Random Bayesian network over `n` binary variables in topological order
/// `0..n`. Parents are drawn from earlier variables, at most `max_parents`
/// each, until `round(edge_fraction · Σ min(i, max_parents))` edges exist.
/// Each conditional table row is two uniform draws normalized to sum 1.
pub fn gen_random_bn(
    n: u32,
    max_parents: usize,
    edge_fraction: f64,
    seed: u64,
) -> Result<FactorGraph> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "network needs at least one variable".into(),
        ));
    }
    if !(0.0..=1.0).contains(&edge_fraction) {
        return Err(Error::InvalidArgument(format!(
            "edge fraction {edge_fraction} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let capacity: usize = (0..n as usize).map(|i| i.min(max_parents)).sum();
    let target = (edge_fraction * capacity as f64).round() as usize;

    let mut candidates: Vec<(u32, u32)> =
        (0..n).flat_map(|c| (0..c).map(move |p| (p, c))).collect();
    candidates.shuffle(&mut rng);
    let mut parents: Vec<Vec<u32>> = vec![Vec::new(); n as usize];
    let mut placed = 0;
    for (p, c) in candidates {
        if placed == target {
            break;
        }
        if parents[c as usize].len() < max_parents {
            parents[c as usize].push(p);
            placed += 1;
        }
    }

    let mut factors = Vec::with_capacity(n as usize);
    for (child, mut ps) in parents.into_iter().enumerate() {
        ps.sort_unstable();
        let rows = 1usize << ps.len();
        let mut table = Vec::with_capacity(2 * rows);
        for _ in 0..rows {
            let t: f64 = rng.gen_range(f64::EPSILON..1.0);
            let f: f64 = rng.gen_range(f64::EPSILON..1.0);
            table.push(t / (t + f));
            table.push(f / (t + f));
        }
        ps.push(child as u32);
        factors.push(Factor::new(ps, table)?);
    }
    FactorGraph::new(NetworkKind::Bayes, n, factors)
}

#[derive(Debug, Clone, Copy)]
pub struct RandomCircuitParams {
    pub num_vars: u32,
    pub max_nodes: usize,
    /// Chance that a sub-circuit for an already seen scope is reused.
    pub reuse: f64,
    /// Chance that a scope of two or more variables becomes a sum.
    pub sum: f64,
}

impl RandomCircuitParams {
    pub fn new(num_vars: u32, max_nodes: usize) -> Self {
        RandomCircuitParams {
            num_vars,
            max_nodes,
            reuse: 0.25,
            sum: 0.5,
        }
    }
}

struct Gen<'a> {
    b: CircuitBuilder,
    rng: &'a mut ChaCha8Rng,
    params: RandomCircuitParams,
    by_scope: HashMap<Vec<u32>, Vec<NodeId>>,
}

impl Gen<'_> {
    fn weight(&mut self) -> f64 {
        self.rng.gen_range(0.05..1.0)
    }

    fn leaf(&mut self, var: u32) -> NodeId {
        match self.rng.gen_range(0..6) {
            0 => self.b.indicator(var, self.rng.gen()),
            1 => {
                let t = self.b.indicator(var, true);
                let f = self.b.indicator(var, false);
                let (wt, wf) = (self.weight(), self.weight());
                self.b.sum(vec![(wt, t), (wf, f)])
            }
            _ => {
                let (wt, wf) = (self.weight(), self.weight());
                self.b.bernoulli(var, wt, wf)
            }
        }
    }

    fn split(&mut self, scope: &[u32]) -> Vec<Vec<u32>> {
        let parts = self.rng.gen_range(2..=scope.len().min(3));
        let mut shuffled = scope.to_vec();
        shuffled.shuffle(self.rng);
        let mut out: Vec<Vec<u32>> = vec![Vec::new(); parts];
        for (i, v) in shuffled.into_iter().enumerate() {
            // first `parts` variables seed each part so none is empty
            let k = if i < parts {
                i
            } else {
                self.rng.gen_range(0..parts)
            };
            out[k].push(v);
        }
        for p in &mut out {
            p.sort_unstable();
        }
        out
    }

    fn product(&mut self, scope: &[u32]) -> NodeId {
        let parts = self.split(scope);
        let mut children: Vec<NodeId> = parts.iter().map(|p| self.node(p)).collect();
        if self.rng.gen_bool(0.1) {
            let c = self.weight() * 2.0;
            children.push(self.b.constant(c));
        }
        self.b.product(children)
    }

    fn node(&mut self, scope: &[u32]) -> NodeId {
        if let Some(seen) = self.by_scope.get(scope) {
            if self.rng.gen_bool(self.params.reuse) {
                return *seen.choose(self.rng).unwrap();
            }
        }
        // a scope of s variables needs at least s leaves plus one product
        let tight = self.b.len() + 3 * scope.len() >= self.params.max_nodes;
        let id = if scope.len() == 1 {
            self.leaf(scope[0])
        } else if !tight && self.rng.gen_bool(self.params.sum) {
            let k = self.rng.gen_range(2..=3);
            let children: Vec<(f64, NodeId)> = (0..k)
                .map(|_| (self.weight(), self.product(scope)))
                .collect();
            self.b.sum(children)
        } else {
            self.product(scope)
        };
        self.by_scope.entry(scope.to_vec()).or_default().push(id);
        id
    }
}

/// Random smooth, decomposable circuit over all `num_vars` variables with
/// at most `max_nodes` nodes. Sums mix products over different splits of
/// the same scope; sub-circuits for a scope are sometimes shared.
pub fn random_circuit(params: RandomCircuitParams, seed: u64) -> Result<Circuit> {
    if params.num_vars == 0 || (params.max_nodes as u32) < 2 * params.num_vars {
        return Err(Error::InvalidArgument(format!(
            "cannot fit {} variables in {} nodes",
            params.num_vars, params.max_nodes
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scope: Vec<u32> = (0..params.num_vars).collect();
    loop {
        let mut g = Gen {
            b: CircuitBuilder::new(params.num_vars),
            rng: &mut rng,
            params,
            by_scope: HashMap::new(),
        };
        g.node(&scope);
        if g.b.len() <= params.max_nodes {
            return g.b.build();
        }
    }
}

/// Uniformly random shared variables: `min(⌊circuit_vars / 2⌋, formula_vars)`
/// distinct circuit variables paired with distinct formula variables from
/// `candidates`.
pub fn select_shared(circuit_vars: u32, candidates: &[Var], seed: u64) -> Vec<(u32, Var)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = (circuit_vars as usize / 2).min(candidates.len());
    let mut cvars: Vec<u32> = index::sample(&mut rng, circuit_vars as usize, k)
        .into_iter()
        .map(|i| i as u32)
        .collect();
    cvars.sort_unstable();
    let fvars = index::sample(&mut rng, candidates.len(), k);
    cvars
        .into_iter()
        .zip(fvars.into_iter().map(|i| candidates[i]))
        .collect()
}
