use std::sync::Arc;

use super::{gen_random_bn, select_shared};
use crate::compile::compile_default;
use crate::error::Result;
use crate::formula::{CnfFormula, Var};
use crate::solver::{Cmp, PredicateSpec, SmcProblem, ThresholdMode};

/// Parameters for attaching random network predicates to a formula.
#[derive(Debug, Clone, Copy)]
pub struct SmcGenParams {
    pub bn_vars: u32,
    pub num_predicates: usize,
    pub max_parents: usize,
    pub edge_fraction: f64,
    /// Threshold as a fraction of each network's partition value.
    pub fraction: f64,
    pub cmp: Cmp,
    /// Hard predicates have no linked literal; soft ones get a fresh one.
    pub hard: bool,
    pub seed: u64,
}

impl Default for SmcGenParams {
    fn default() -> Self {
        SmcGenParams {
            bn_vars: 8,
            num_predicates: 1,
            max_parents: 5,
            edge_fraction: 0.5,
            fraction: 0.1,
            cmp: Cmp::Ge,
            hard: true,
            seed: 0,
        }
    }
}

/// Adds predicates over compiled random networks to `cnf`. Shared
/// variables follow [`select_shared`] over the formula's original
/// variables.
pub fn gen_smc(mut cnf: CnfFormula, params: &SmcGenParams) -> Result<SmcProblem> {
    let originals: Vec<Var> = (0..cnf.num_vars()).map(Var::new).collect();
    let mut predicates = Vec::with_capacity(params.num_predicates);
    for i in 0..params.num_predicates as u64 {
        let seed = params.seed.wrapping_mul(1_000_003).wrapping_add(i);
        let bn = gen_random_bn(
            params.bn_vars,
            params.max_parents,
            params.edge_fraction,
            seed,
        )?;
        let circuit = Arc::new(compile_default(&bn)?);
        let shared = select_shared(params.bn_vars, &originals, seed ^ 0x5eed)
            .into_iter()
            .collect();
        let mut p = PredicateSpec::new(circuit, shared, params.cmp, params.fraction)
            .with_mode(ThresholdMode::PartitionFraction);
        p.source = Some(Arc::new(bn));
        if !params.hard {
            p = p.with_b(cnf.fresh_var().pos());
        }
        predicates.push(p);
    }
    SmcProblem::new(cnf, predicates)
}
