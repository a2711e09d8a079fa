//! Reference implementations used as test oracles. They re-derive every
//! quantity from the raw data structures without going through the
//! library's evaluation code.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smc_core::circuit::{example_circuit, Circuit, Node};
use smc_core::compile::{Factor, FactorGraph, NetworkKind};
use smc_core::formula::{CnfFormula, Lit, Var};
use smc_core::solver::{Cmp, PredicateSpec, SmcProblem, ThresholdMode};

pub fn lit(l: i64) -> Lit {
    Lit::from_dimacs(l).unwrap()
}

pub fn bits(x: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| x >> i & 1 == 1).collect()
}

/// Node-by-node evaluation of a circuit under a total assignment.
pub fn eval_joint(c: &Circuit, values: &[bool]) -> f64 {
    let mut val = vec![0.0; c.num_nodes()];
    for (id, node) in c.nodes().iter().enumerate() {
        val[id] = match node {
            Node::Bernoulli {
                var,
                w_true,
                w_false,
            } => {
                if values[*var as usize] {
                    *w_true
                } else {
                    *w_false
                }
            }
            Node::Indicator { var, positive } => (values[*var as usize] == *positive) as u8 as f64,
            Node::Constant(v) => *v,
            Node::Product(ch) => ch.iter().map(|&i| val[i]).product(),
            Node::Sum(ch) => ch.iter().map(|&(w, i)| w * val[i]).sum(),
        };
    }
    val[c.num_nodes() - 1]
}

/// Variables mentioned by any leaf.
pub fn leaf_vars(c: &Circuit) -> Vec<u32> {
    let set: BTreeSet<u32> = c
        .nodes()
        .iter()
        .filter_map(|n| match n {
            Node::Bernoulli { var, .. } | Node::Indicator { var, .. } => Some(*var),
            _ => None,
        })
        .collect();
    set.into_iter().collect()
}

/// Sum of the joint over every completion of `partial`.
pub fn brute_marginal(c: &Circuit, partial: &[Option<bool>]) -> f64 {
    let free: Vec<u32> = leaf_vars(c)
        .into_iter()
        .filter(|&v| partial[v as usize].is_none())
        .collect();
    let mut values: Vec<bool> = partial.iter().map(|v| v.unwrap_or(false)).collect();
    let mut total = 0.0;
    for x in 0u64..1 << free.len() {
        for (i, &v) in free.iter().enumerate() {
            values[v as usize] = x >> i & 1 == 1;
        }
        total += eval_joint(c, &values);
    }
    total
}

/// Product of factor entries, indexing tables directly (state 0 = true,
/// last scope variable fastest).
pub fn fg_joint(fg: &FactorGraph, values: &[bool]) -> f64 {
    fg.factors
        .iter()
        .map(|f| {
            let mut idx = 0;
            for &v in &f.scope {
                idx = idx * 2 + if values[v as usize] { 0 } else { 1 };
            }
            f.table[idx]
        })
        .product()
}

pub fn fg_marginal(fg: &FactorGraph, partial: &[Option<bool>]) -> f64 {
    let n = fg.num_vars as usize;
    let free: Vec<usize> = (0..n)
        .filter(|&v| partial.get(v).copied().flatten().is_none())
        .collect();
    let mut values: Vec<bool> = (0..n)
        .map(|v| partial.get(v).copied().flatten().unwrap_or(false))
        .collect();
    let mut total = 0.0;
    for x in 0u64..1 << free.len() {
        for (i, &v) in free.iter().enumerate() {
            values[v] = x >> i & 1 == 1;
        }
        total += fg_joint(fg, &values);
    }
    total
}

pub fn clause_sat(lits: &[Lit], values: &[bool]) -> bool {
    lits.iter().any(|l| values[l.var().index()] == l.positive())
}

pub fn cnf_models(f: &CnfFormula) -> Vec<Vec<bool>> {
    let n = f.num_vars() as usize;
    (0u64..1 << n)
        .map(|x| bits(x, n))
        .filter(|m| f.clauses().iter().all(|c| clause_sat(c.lits(), m)))
        .collect()
}

fn holds(cmp: Cmp, m: f64, q: f64) -> bool {
    match cmp {
        Cmp::Ge => m >= q,
        Cmp::Gt => m > q,
        Cmp::Le => m <= q,
        Cmp::Lt => m < q,
    }
}

/// Predicate value under a total formula assignment, via the node-level
/// evaluator.
pub fn predicate_value(p: &PredicateSpec, values: &[bool]) -> bool {
    let mut partial = vec![None; p.circuit.num_vars() as usize];
    for (&cv, &v) in &p.shared {
        partial[cv as usize] = Some(values[v.index()]);
    }
    let m = brute_marginal(&p.circuit, &partial);
    let q = match p.threshold_mode {
        ThresholdMode::Absolute => p.threshold,
        ThresholdMode::PartitionFraction => {
            p.threshold * brute_marginal(&p.circuit, &vec![None; partial.len()])
        }
    };
    holds(p.cmp, m, q)
}

pub fn smc_model_ok(p: &SmcProblem, values: &[bool]) -> bool {
    p.cnf.clauses().iter().all(|c| clause_sat(c.lits(), values))
        && p.predicates.iter().all(|pr| {
            let want =
                pr.b.map_or(true, |b| values[b.var().index()] == b.positive());
            predicate_value(pr, values) == want
        })
}

/// All models of an SMC problem by enumeration.
pub fn smc_models(p: &SmcProblem) -> Vec<Vec<bool>> {
    let n = p.cnf.num_vars() as usize;
    assert!(n <= 20, "reference enumeration is for small problems");
    let mut cache: Vec<BTreeMap<Vec<bool>, bool>> = vec![BTreeMap::new(); p.predicates.len()];
    (0u64..1 << n)
        .map(|x| bits(x, n))
        .filter(|m| {
            if !p.cnf.clauses().iter().all(|c| clause_sat(c.lits(), m)) {
                return false;
            }
            p.predicates.iter().enumerate().all(|(i, pr)| {
                let key: Vec<bool> = pr.shared.values().map(|v| m[v.index()]).collect();
                let val = *cache[i]
                    .entry(key)
                    .or_insert_with(|| predicate_value(pr, m));
                let want = pr.b.map_or(true, |b| m[b.var().index()] == b.positive());
                val == want
            })
        })
        .collect()
}

/// The route-choice problem: x1..x4 are variables 1..4, b1 = 5, b2 = 6.
pub fn route_problem(q: f64) -> SmcProblem {
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

/// Random factor graph over `n` binary variables: a unary factor per
/// variable plus `extra` factors over random scopes of size 1 to 3.
pub fn random_factor_graph(n: u32, extra: usize, seed: u64) -> FactorGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors = Vec::new();
    for v in 0..n {
        factors.push(
            Factor::new(
                vec![v],
                vec![rng.gen_range(0.1..2.0), rng.gen_range(0.1..2.0)],
            )
            .unwrap(),
        );
    }
    for _ in 0..extra {
        let k = rng.gen_range(1..=3.min(n as usize));
        let scope: Vec<u32> = rand::seq::index::sample(&mut rng, n as usize, k)
            .into_iter()
            .map(|i| i as u32)
            .collect();
        // occasional zero entries exercise determinism in the tables
        let table: Vec<f64> = (0..1 << k)
            .map(|_| {
                if rng.gen_bool(0.1) {
                    0.0
                } else {
                    rng.gen_range(0.05..3.0)
                }
            })
            .collect();
        factors.push(Factor::new(scope, table).unwrap());
    }
    FactorGraph::new(NetworkKind::Markov, n, factors).unwrap()
}
