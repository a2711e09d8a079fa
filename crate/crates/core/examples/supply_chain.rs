//! Choose trade links in a layered supply network so that every chosen
//! link survives a random disaster with high probability. Sweeps the
//! threshold upward to find the most reliable feasible plan.

use smc_core::problems::{gen_random_bn, supply_problem, LayeredNetwork};
use smc_core::sweep::{sweep, SweepOptions};

fn main() -> smc_core::Result<()> {
    let net = LayeredNetwork::new(vec![2, 2, 2])?;
    let disaster = gen_random_bn(net.num_edges() as u32, 3, 0.5, 0)?;
    let p = supply_problem(&net, 1, 1, &disaster, 0.0)?;
    println!(
        "{} edges, {} formula variables",
        net.num_edges(),
        p.cnf.num_vars()
    );

    let r = sweep(
        &p,
        &SweepOptions {
            step: 0.02,
            ..Default::default()
        },
    )?;
    print!("{}", r.trace_csv());
    match (r.best_threshold, r.best_model) {
        (Some(q), Some(m)) => {
            println!("best threshold {q:.2}");
            for (i, (layer, up, down)) in net.edges().into_iter().enumerate() {
                if m[i] {
                    println!("  trade layer {layer}: {up} -> {down}");
                }
            }
        }
        _ => println!("no feasible plan"),
    }
    Ok(())
}
