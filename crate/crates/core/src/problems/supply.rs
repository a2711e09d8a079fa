use std::sync::Arc;

use super::exactly_k;
use crate::compile::{compile, Factor, FactorGraph, NetworkKind};
use crate::error::{Error, Result};
use crate::formula::{CnfFormula, Var};
use crate::solver::{Cmp, PredicateSpec, SmcProblem};

/// Layered trade network with full connections between adjacent layers.
/// Edge variables are numbered layer by layer, upstream node major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredNetwork {
    pub layer_sizes: Vec<usize>,
    offsets: Vec<usize>,
}

impl LayeredNetwork {
    pub fn new(layer_sizes: Vec<usize>) -> Result<Self> {
        if layer_sizes.is_empty() || layer_sizes.contains(&0) {
            return Err(Error::InvalidArgument(
                "layer sizes must be positive".into(),
            ));
        }
        let mut offsets = vec![0];
        for w in layer_sizes.windows(2) {
            offsets.push(offsets.last().unwrap() + w[0] * w[1]);
        }
        Ok(LayeredNetwork {
            layer_sizes,
            offsets,
        })
    }

    pub fn num_edges(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// Edge from node `up` of `layer` to node `down` of `layer + 1`.
    pub fn edge_var(&self, layer: usize, up: usize, down: usize) -> Var {
        assert!(layer + 1 < self.layer_sizes.len());
        assert!(up < self.layer_sizes[layer] && down < self.layer_sizes[layer + 1]);
        Var::new((self.offsets[layer] + up * self.layer_sizes[layer + 1] + down) as u32)
    }

    /// `(layer, up, down)` for every edge, in variable order.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for l in 0..self.layer_sizes.len() - 1 {
            for u in 0..self.layer_sizes[l] {
                for d in 0..self.layer_sizes[l + 1] {
                    out.push((l, u, d));
                }
            }
        }
        out
    }
}

/// Every node trades with exactly `k_up` upstream and `k_down` downstream
/// neighbors. The first layer has no upstream side and the last none
/// downstream; a cardinality of 0 leaves that side unconstrained.
pub fn encode_supply_chain(net: &LayeredNetwork, k_up: usize, k_down: usize) -> Result<CnfFormula> {
    let sizes = &net.layer_sizes;
    let mut f = CnfFormula::new(net.num_edges() as u32);
    for (l, &size) in sizes.iter().enumerate() {
        for node in 0..size {
            if l > 0 && k_up > 0 {
                let ups: Vec<Var> = (0..sizes[l - 1])
                    .map(|u| net.edge_var(l - 1, u, node))
                    .collect();
                if ups.len() < k_up {
                    return Err(Error::InvalidArgument(format!(
                        "node {node} of layer {l} has {} upstream neighbors, needs {k_up}",
                        ups.len()
                    )));
                }
                f.extend(exactly_k(&ups, k_up)?)?;
            }
            if l + 1 < sizes.len() && k_down > 0 {
                let downs: Vec<Var> = (0..sizes[l + 1])
                    .map(|d| net.edge_var(l, node, d))
                    .collect();
                if downs.len() < k_down {
                    return Err(Error::InvalidArgument(format!(
                        "node {node} of layer {l} has {} downstream neighbors, needs {k_down}",
                        downs.len()
                    )));
                }
                f.extend(exactly_k(&downs, k_down)?)?;
            }
        }
    }
    Ok(f)
}

/// Extends a disaster network over `m` edge variables with `m` selector
/// variables `s_i = m + i` and factors `[¬s_i ∨ e_i]`. The marginal at a
/// selector assignment is the probability that every selected edge
/// survives.
pub fn supply_success_graph(disaster: &FactorGraph) -> Result<FactorGraph> {
    let m = disaster.num_vars;
    let mut factors = disaster.factors.clone();
    for i in 0..m {
        // scope (s, e), state 0 = true: TT, TF, FT, FF
        factors.push(Factor::new(vec![m + i, i], vec![1.0, 0.0, 1.0, 1.0])?);
    }
    FactorGraph::new(NetworkKind::Markov, 2 * m, factors)
}

/// Compilation order pairing each edge with its selector.
pub fn supply_order(m: u32) -> Vec<u32> {
    (0..m).flat_map(|i| [i, m + i]).collect()
}

/// Trade selection under cardinality constraints with one hard predicate:
/// the probability that every selected edge survives `disaster` (a network
/// over the edge variables) is at least `threshold`.
pub fn supply_problem(
    net: &LayeredNetwork,
    k_up: usize,
    k_down: usize,
    disaster: &FactorGraph,
    threshold: f64,
) -> Result<SmcProblem> {
    let m = net.num_edges() as u32;
    if disaster.num_vars != m {
        return Err(Error::InvalidArgument(format!(
            "disaster network has {} variables, network has {m} edges",
            disaster.num_vars
        )));
    }
    let cnf = encode_supply_chain(net, k_up, k_down)?;
    let success = supply_success_graph(disaster)?;
    let circuit = compile(&success, &supply_order(m))?;
    let shared = (0..m).map(|i| (m + i, Var::new(i))).collect();
    let mut pred = PredicateSpec::new(Arc::new(circuit), shared, Cmp::Ge, threshold);
    pred.source = Some(Arc::new(success));
    SmcProblem::new(cnf, vec![pred])
}
