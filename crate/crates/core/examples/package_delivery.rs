//! Delivery route as a Hamiltonian path, with a random-network predicate
//! over some of the position variables.

use smc_core::problems::{decode_path, encode_hamiltonian_path, gen_smc, GraphSpec, SmcGenParams};
use smc_core::solver::{solve, SolverConfig, Status};

fn main() -> smc_core::Result<()> {
    // a ring of six stops with two chords
    let mut edges: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
    edges.extend([(0, 3), (1, 4)]);
    let g = GraphSpec::new(6, edges)?;
    let cnf = encode_hamiltonian_path(&g)?;

    for fraction in [0.001, 0.05, 0.5] {
        let params = SmcGenParams {
            bn_vars: 12,
            fraction,
            seed: 9,
            ..Default::default()
        };
        let p = gen_smc(cnf.clone(), &params)?;
        let r = solve(&p, SolverConfig::default())?;
        print!("fraction {fraction:<6} {:<6}", r.status.to_string());
        if r.status == Status::Sat {
            print!(
                " path {:?}",
                decode_path(&r.model.unwrap(), g.n).expect("model encodes a path")
            );
        }
        println!();
    }
    Ok(())
}
