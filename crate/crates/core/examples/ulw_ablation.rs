//! Search effort with and without bound propagation on a batch of random
//! instances.

use smc_core::problems::{gen_kcolor, gen_smc, GridSpec, SmcGenParams};
use smc_core::solver::{solve, SolverConfig, Status};

fn main() -> smc_core::Result<()> {
    let cnf = gen_kcolor(&GridSpec::new(3, 4));
    println!("seed,status,ulw_decisions,ulw_conflicts,plain_decisions,plain_conflicts");
    let mut totals = [0u64; 4];
    for seed in 0..12 {
        let params = SmcGenParams {
            bn_vars: 12,
            fraction: 0.05,
            seed,
            ..Default::default()
        };
        let p = gen_smc(cnf.clone(), &params)?;
        let a = solve(&p, SolverConfig::default())?;
        let b = solve(&p, SolverConfig::without_ulw())?;
        assert_eq!(a.status == Status::Sat, b.status == Status::Sat);
        let row = [
            a.stats.decisions,
            a.stats.conflicts(),
            b.stats.decisions,
            b.stats.conflicts(),
        ];
        for (t, x) in totals.iter_mut().zip(row) {
            *t += x;
        }
        println!(
            "{seed},{},{},{},{},{}",
            a.status, row[0], row[1], row[2], row[3]
        );
    }
    println!(
        "total,,{},{},{},{}",
        totals[0], totals[1], totals[2], totals[3]
    );
    Ok(())
}
