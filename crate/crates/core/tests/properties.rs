mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::*;
use itertools::Itertools;
use proptest::prelude::*;
use smc_core::circuit::{
    parse_pc, write_pc, BoundState, Circuit, Node, NumericMode, ViolationKind,
};
use smc_core::compile::{compile, compile_with, parse_uai, write_uai, CompileOptions};
use smc_core::formula::{parse_dimacs, write_dimacs, CnfFormula, Var};
use smc_core::oracle::{brute_solve, verify};
use smc_core::problems::{
    decode_path, encode_hamiltonian_path, exactly_k, gen_kcolor, gen_random_bn, gen_smc,
    random_circuit, GraphSpec, GridSpec, RandomCircuitParams, SmcGenParams,
};
use smc_core::solver::{solve, Solver, SolverConfig, Status};
use smc_core::sweep::{sweep, SweepOptions};

fn circuit_strategy(max_vars: u32, max_nodes: usize) -> impl Strategy<Value = Circuit> {
    (1..=max_vars, any::<u64>()).prop_map(move |(n, seed)| {
        random_circuit(RandomCircuitParams::new(n, max_nodes), seed).unwrap()
    })
}

fn partial_strategy(n: usize) -> impl Strategy<Value = Vec<Option<bool>>> {
    prop::collection::vec(prop::option::of(any::<bool>()), n)
}

fn cnf_strategy(max_vars: u32, max_clauses: usize) -> impl Strategy<Value = CnfFormula> {
    (1..=max_vars).prop_flat_map(move |n| {
        let lit = (0..n, any::<bool>()).prop_map(|(v, s)| Var::new(v).lit(s));
        prop::collection::vec(prop::collection::vec(lit, 1..=3), 0..=max_clauses).prop_map(
            move |cs| {
                let mut f = CnfFormula::new(n);
                for c in cs {
                    f.add_clause(c).unwrap();
                }
                f
            },
        )
    })
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn marginal_matches_enumeration(
        (c, q) in circuit_strategy(7, 50).prop_flat_map(|c| {
            let n = c.num_vars() as usize;
            (Just(c), partial_strategy(n))
        })
    ) {
        let want = brute_marginal(&c, &q);
        prop_assert!(close(c.marginal(&q).unwrap(), want));
        let log = c.marginal_in(&q, NumericMode::Log).unwrap();
        prop_assert!(close(log.exp(), want));
    }

    #[test]
    fn bounds_contain_every_completion(
        (c, order, vals) in circuit_strategy(6, 40).prop_flat_map(|c| {
            let n = c.num_vars() as usize;
            (Just(c), Just((0..n as u32).collect::<Vec<_>>()).prop_shuffle(), prop::collection::vec(any::<bool>(), n))
        }),
        take in 0usize..6,
    ) {
        let c = Arc::new(c);
        let shared: Vec<u32> = order.iter().copied().take(take.max(1).min(order.len())).collect();
        let mut state = BoundState::new(c.clone(), &shared, NumericMode::Linear).unwrap();
        let mut partial: Vec<Option<bool>> = vec![None; c.num_vars() as usize];
        for (i, &v) in shared.iter().enumerate() {
            state.assign(v, vals[i], i as u32 + 1).unwrap();
            partial[v as usize] = Some(vals[i]);
            let (ub, lb) = state.root_bounds();
            let rest: Vec<u32> = shared[i + 1..].to_vec();
            for x in 0u64..1 << rest.len() {
                let mut full = partial.clone();
                for (j, &r) in rest.iter().enumerate() {
                    full[r as usize] = Some(x >> j & 1 == 1);
                }
                let m = brute_marginal(&c, &full);
                prop_assert!(lb <= m * (1.0 + 1e-9) + 1e-12 && m <= ub * (1.0 + 1e-9) + 1e-12);
            }
        }
        let exact = brute_marginal(&c, &partial);
        let (ub, lb) = state.root_bounds();
        prop_assert!(close(ub, exact) && close(lb, exact));
    }

    #[test]
    fn pc_text_round_trips(c in circuit_strategy(8, 60)) {
        prop_assert_eq!(parse_pc(&write_pc(&c)).unwrap(), c);
    }

    #[test]
    fn uai_text_round_trips(n in 1u32..9, seed in any::<u64>()) {
        let fg = gen_random_bn(n, 3, 0.5, seed).unwrap();
        prop_assert_eq!(parse_uai(&write_uai(&fg)).unwrap(), fg.clone());
        let mg = random_factor_graph(n, n as usize, seed);
        prop_assert_eq!(parse_uai(&write_uai(&mg)).unwrap(), mg);
    }

    #[test]
    fn dimacs_round_trips(f in cnf_strategy(10, 20)) {
        prop_assert_eq!(parse_dimacs(&write_dimacs(&f)).unwrap(), f);
    }

    #[test]
    fn compile_matches_enumeration_with_and_without_memo(
        n in 1u32..8,
        seed in any::<u64>(),
        q in partial_strategy(8),
    ) {
        let fg = random_factor_graph(n, 2 * n as usize, seed);
        let order: Vec<u32> = (0..n).rev().collect();
        let a = compile(&fg, &order).unwrap();
        let b = compile_with(&fg, &order, CompileOptions { memoize: false, ..Default::default() }).unwrap();
        prop_assert!(a.validation().is_valid() && b.validation().is_valid());
        prop_assert!(a.num_nodes() <= b.num_nodes());
        let q = &q[..n as usize];
        let want = fg_marginal(&fg, q);
        prop_assert!(close(a.marginal(q).unwrap(), want));
        prop_assert!(close(b.marginal(q).unwrap(), want));
    }

    #[test]
    fn validate_flags_overlapping_products_and_uneven_sums(c in circuit_strategy(5, 40)) {
        let root = c.root();
        let mut nodes = c.nodes().to_vec();
        let leaf = nodes.iter().position(|n| matches!(n, Node::Bernoulli { .. } | Node::Indicator { .. })).unwrap();
        // root already covers every variable, so this product overlaps
        nodes.push(Node::Product(vec![root, leaf]));
        let bad = Circuit::new(c.num_vars(), nodes).unwrap();
        prop_assert!(bad.validation().violations.iter().any(|v| v.kind == ViolationKind::NotDecomposable));

        if c.num_vars() > 1 {
            let mut nodes = c.nodes().to_vec();
            let other = nodes.len();
            nodes.push(Node::Constant(1.0));
            nodes.push(Node::Sum(vec![(0.5, root), (0.5, other)]));
            let bad = Circuit::new(c.num_vars(), nodes).unwrap();
            prop_assert!(bad.validation().violations.iter().any(|v| v.kind == ViolationKind::NotSmooth));
            prop_assert!(bad.marginal(&vec![None; c.num_vars() as usize]).is_err());
        }
    }

    #[test]
    fn plain_sat_agrees_with_enumeration(f in cnf_strategy(10, 40)) {
        let p = smc_core::solver::SmcProblem::new(f.clone(), vec![]).unwrap();
        let models = cnf_models(&f);
        let mut s = Solver::new(&p, SolverConfig::default()).unwrap();
        let r = s.solve();
        prop_assert_eq!(r.status == Status::Sat, !models.is_empty());
        if let Some(m) = &r.model {
            prop_assert!(models.contains(m));
        }
        // learned clauses are implied by the formula
        for c in s.learned_clauses() {
            for m in &models {
                prop_assert!(clause_sat(c.lits(), m), "learned {:?} excludes a model", c);
            }
        }
    }

    #[test]
    fn smc_learned_clauses_keep_every_model(seed in 0u64..400, soft in any::<bool>(), frac in prop::sample::select(vec![1e-3, 0.05, 0.3])) {
        let cnf = gen_kcolor(&GridSpec::new(1, 3));
        let p = gen_smc(cnf, &SmcGenParams { bn_vars: 6, fraction: frac, hard: !soft, seed, ..Default::default() }).unwrap();
        let models = smc_models(&p);
        for cfg in [SolverConfig::default(), SolverConfig::without_ulw()] {
            let mut s = Solver::new(&p, cfg).unwrap();
            let r = s.solve();
            prop_assert_eq!(r.status == Status::Sat, !models.is_empty());
            for c in s.learned_clauses() {
                for m in &models {
                    prop_assert!(clause_sat(c.lits(), m));
                }
            }
        }
    }

    #[test]
    fn solving_is_deterministic(seed in 0u64..200) {
        let p = gen_smc(gen_kcolor(&GridSpec::new(2, 2)), &SmcGenParams { bn_vars: 8, seed, ..Default::default() }).unwrap();
        let mut a = Solver::new(&p, SolverConfig::default()).unwrap();
        let mut b = Solver::new(&p, SolverConfig::default()).unwrap();
        let (ra, rb) = (a.solve(), b.solve());
        prop_assert_eq!(ra.status, rb.status);
        prop_assert_eq!(ra.model, rb.model);
        prop_assert_eq!(ra.stats.counters(), rb.stats.counters());
        prop_assert_eq!(a.decisions(), b.decisions());
    }

    #[test]
    fn exactly_k_has_binomial_count(n in 1usize..8, k in 0usize..8) {
        prop_assume!(k <= n);
        let vars: Vec<Var> = (0..n as u32).map(Var::new).collect();
        let mut f = CnfFormula::new(n as u32);
        f.extend(exactly_k(&vars, k).unwrap()).unwrap();
        let binom = (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1));
        prop_assert_eq!(cnf_models(&f).len(), binom);
    }

    #[test]
    fn hamiltonian_models_are_paths(n in 1usize..5, mask in any::<u16>()) {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let edges: Vec<(usize, usize)> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        let g = GraphSpec::new(n, edges).unwrap();
        let models = cnf_models(&encode_hamiltonian_path(&g).unwrap());
        let decoded: BTreeSet<Vec<usize>> = models.iter().map(|m| decode_path(m, n).unwrap()).collect();
        prop_assert_eq!(decoded.len(), models.len());
        // independent count over permutations
        let perms = (0..n).permutations(n);
        let paths: BTreeSet<Vec<usize>> = perms.filter(|p| p.windows(2).all(|w| g.adjacent(w[0], w[1]))).collect();
        prop_assert_eq!(decoded, paths);
    }

    #[test]
    fn grids_are_three_colorable(rows in 1usize..5, cols in 1usize..5) {
        let f = gen_kcolor(&GridSpec::new(rows, cols));
        let p = smc_core::solver::SmcProblem::new(f.clone(), vec![]).unwrap();
        let r = solve(&p, SolverConfig::default()).unwrap();
        prop_assert_eq!(r.status, Status::Sat);
        prop_assert!(f.eval_full(&r.model.unwrap()));
    }

    #[test]
    fn verify_accepts_exactly_the_enumerated_models(seed in 0u64..300, soft in any::<bool>()) {
        let cnf = encode_hamiltonian_path(&GraphSpec::complete(3)).unwrap();
        let p = gen_smc(cnf, &SmcGenParams { bn_vars: 4, fraction: 0.2, hard: !soft, seed, ..Default::default() }).unwrap();
        let models: BTreeSet<Vec<bool>> = brute_solve(&p, 24).unwrap().models.into_iter().collect();
        let n = p.cnf.num_vars() as usize;
        for x in 0u64..1 << n {
            let m = bits(x, n);
            prop_assert_eq!(verify(&p, &m).unwrap().passed(), models.contains(&m));
        }
    }

    #[test]
    fn hard_ge_sweeps_are_monotone(seed in 0u64..100) {
        let mut p = gen_smc(gen_kcolor(&GridSpec::new(1, 3)), &SmcGenParams { bn_vars: 6, seed, ..Default::default() }).unwrap();
        p.predicates[0].threshold_mode = smc_core::solver::ThresholdMode::PartitionFraction;
        let r = sweep(&p, &SweepOptions { step: 0.05, lo: 0.0, hi: 1.0, ..Default::default() }).unwrap();
        prop_assert!(r.flips() <= 1);
        // every threshold past the flip stays UNSAT
        if let Some(best) = r.best_threshold {
            let mut q = p.clone();
            q.predicates[0].threshold = best + 0.05;
            if best + 0.05 <= 1.0 + 1e-9 {
                prop_assert_eq!(solve(&q, SolverConfig::default()).unwrap().status, Status::Unsat);
                q.predicates[0].threshold = (best + 0.1).min(1.0);
                prop_assert_eq!(solve(&q, SolverConfig::default()).unwrap().status, Status::Unsat);
            }
        }
    }
}
