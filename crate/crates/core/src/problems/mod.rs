//! Instance generators and application encoders.

mod bn;
mod hampath;
mod manifest;
mod smc;
mod supply;

pub use bn::{gen_random_bn, random_circuit, select_shared, RandomCircuitParams};
pub use hampath::{decode_path, encode_hamiltonian_path, parse_edge_list, GraphSpec};
pub use manifest::{
    build_manifest, load_manifest, load_manifest_str, write_problem, Manifest, PredicateEntry,
};
pub use smc::{gen_smc, SmcGenParams};
pub use supply::{
    encode_supply_chain, supply_order, supply_problem, supply_success_graph, LayeredNetwork,
};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::formula::{Clause, CnfFormula, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub rows: usize,
    pub cols: usize,
    pub colors: usize,
}

impl GridSpec {
    /// A grid with three colors.
    pub fn new(rows: usize, cols: usize) -> Self {
        GridSpec {
            rows,
            cols,
            colors: 3,
        }
    }

    pub fn with_colors(mut self, colors: usize) -> Self {
        self.colors = colors;
        self
    }

    pub fn num_vars(&self) -> usize {
        self.rows * self.cols * self.colors
    }

    /// Variable meaning "node (r, c) has color `color`".
    pub fn var(&self, r: usize, c: usize, color: usize) -> Var {
        Var::new(((r * self.cols + c) * self.colors + color) as u32)
    }
}

/// k-coloring of a rows × cols grid graph: each node takes exactly one
/// color and 4-neighbors differ.
pub fn gen_kcolor(g: &GridSpec) -> CnfFormula {
    let mut f = CnfFormula::new(g.num_vars() as u32);
    let k = g.colors;
    let mut add = |lits: Vec<crate::formula::Lit>| f.add_clause(lits).expect("in range");
    for r in 0..g.rows {
        for c in 0..g.cols {
            add((0..k).map(|j| g.var(r, c, j).pos()).collect());
            for (a, b) in (0..k).tuple_combinations() {
                add(vec![g.var(r, c, a).neg(), g.var(r, c, b).neg()]);
            }
            let mut neighbors = Vec::new();
            if r + 1 < g.rows {
                neighbors.push((r + 1, c));
            }
            if c + 1 < g.cols {
                neighbors.push((r, c + 1));
            }
            for (nr, nc) in neighbors {
                for j in 0..k {
                    add(vec![g.var(r, c, j).neg(), g.var(nr, nc, j).neg()]);
                }
            }
        }
    }
    f
}

/// Renames variables by a seeded random permutation.
pub fn shuffle_vars(f: &CnfFormula, seed: u64) -> CnfFormula {
    let mut perm: Vec<u32> = (0..f.num_vars()).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    f.permute_vars(&perm)
}

/// Binomial encoding of "exactly `k` of `vars` are true".
pub fn exactly_k(vars: &[Var], k: usize) -> Result<Vec<Clause>> {
    let n = vars.len();
    if k > n {
        return Err(Error::InvalidArgument(format!(
            "exactly-{k} over {n} variables"
        )));
    }
    let mut out = Vec::new();
    // at most k: no k+1 of them together
    if k < n {
        for subset in vars.iter().combinations(k + 1) {
            out.push(Clause::new(subset.into_iter().map(|v| v.neg())).expect("distinct vars"));
        }
    }
    // at least k: every n-k+1 of them contains a true one
    if k > 0 {
        for subset in vars.iter().combinations(n - k + 1) {
            out.push(Clause::new(subset.into_iter().map(|v| v.pos())).expect("distinct vars"));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(f: &CnfFormula) -> usize {
        let n = f.num_vars() as usize;
        (0u32..1 << n)
            .filter(|bits| f.eval_full(&(0..n).map(|i| bits >> i & 1 == 1).collect::<Vec<_>>()))
            .count()
    }

    #[test]
    fn kcolor_counts() {
        let f = gen_kcolor(&GridSpec::new(2, 2));
        assert_eq!(f.num_vars(), 12);
        assert_eq!(count(&f), 18);
        assert_eq!(count(&gen_kcolor(&GridSpec::new(1, 1))), 3);
        assert_eq!(count(&gen_kcolor(&GridSpec::new(1, 2).with_colors(2))), 2);
    }

    #[test]
    fn exactly_k_counts() {
        let v: Vec<Var> = (0..4).map(Var::new).collect();
        let c = exactly_k(&v[..2], 1).unwrap();
        assert_eq!(c.len(), 2);
        let mut f = CnfFormula::new(4);
        f.extend(exactly_k(&v, 2).unwrap()).unwrap();
        assert_eq!(count(&f), 6);
        let z = exactly_k(&v[..3], 0).unwrap();
        assert_eq!(z.len(), 3);
        assert!(z.iter().all(|c| c.len() == 1));
        assert!(exactly_k(&v[..2], 3).is_err());
    }

    #[test]
    fn shuffle_preserves_count() {
        let f = gen_kcolor(&GridSpec::new(1, 2));
        let g = shuffle_vars(&f, 7);
        assert_eq!(count(&f), count(&g));
        assert_eq!(g, shuffle_vars(&f, 7));
    }
}
