//! Grid 3-coloring with a random-network predicate on a subset of the
//! color variables. Solved with and without bound propagation and checked
//! by the exhaustive verifier.

use smc_core::oracle::verify;
use smc_core::problems::{gen_kcolor, gen_smc, GridSpec, SmcGenParams};
use smc_core::solver::{solve, SolverConfig};

fn main() -> smc_core::Result<()> {
    let cnf = gen_kcolor(&GridSpec::new(3, 3));
    println!(
        "{} variables, {} clauses",
        cnf.num_vars(),
        cnf.clauses().len()
    );
    for fraction in [0.01, 0.05, 0.2] {
        let params = SmcGenParams {
            bn_vars: 10,
            fraction,
            seed: 4,
            ..Default::default()
        };
        let p = gen_smc(cnf.clone(), &params)?;
        for (name, cfg) in [
            ("ulw", SolverConfig::default()),
            ("no-ulw", SolverConfig::without_ulw()),
        ] {
            let r = solve(&p, cfg)?;
            let checked = match &r.model {
                Some(m) => verify(&p, m)?.passed().to_string(),
                None => "-".into(),
            };
            println!(
                "fraction {fraction:<5} {name:<7} {:<6} decisions {:<4} conflicts {:<4} verified {checked}",
                r.status.to_string(),
                r.stats.decisions,
                r.stats.conflicts()
            );
        }
    }
    Ok(())
}
