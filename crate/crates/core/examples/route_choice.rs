//! Pick one of two routes so that the chosen one is safe with probability
//! at least `q`. Road conditions x1..x4 follow a small circuit; b1 and b2
//! say which route is taken.
//!
//! cargo run --example route_choice -- 0.3

use std::collections::BTreeMap;
use std::sync::Arc;

use smc_core::circuit::example_circuit;
use smc_core::formula::{CnfFormula, Lit, Var};
use smc_core::solver::{solve, Cmp, PredicateSpec, SmcProblem, SolverConfig, Status};

fn main() -> smc_core::Result<()> {
    let q: f64 = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(0.5);
    let lit = |l: i64| Lit::from_dimacs(l).unwrap();

    // exactly one route; a route needs both of its roads open
    let mut cnf = CnfFormula::new(6);
    for c in [[5, 6], [-5, -6], [-5, 1], [-5, 2], [-6, 3], [-6, 4]] {
        cnf.add_clause(c.map(lit))?;
    }
    let roads = Arc::new(example_circuit());
    let route = |a: u32, b: u32, sel: i64| {
        PredicateSpec::new(
            roads.clone(),
            BTreeMap::from([(a, Var::new(a)), (b, Var::new(b))]),
            Cmp::Ge,
            q,
        )
        .with_b(lit(sel))
    };
    let p = SmcProblem::new(cnf, vec![route(0, 1, 5), route(2, 3, 6)])?;

    let r = solve(&p, SolverConfig::default())?;
    println!("q = {q}: {}", r.status);
    if r.status == Status::Sat {
        let m = r.model.unwrap();
        let taken = if m[4] { 1 } else { 2 };
        println!("take route {taken}; roads x1..x4 = {:?}", &m[..4]);
    }
    println!(
        "decisions {}, probabilistic conflicts {}",
        r.stats.decisions, r.stats.prob_conflicts
    );
    Ok(())
}
