//! Marginals, partition value and structural checks on a small circuit,
//! plus a text round trip.

use smc_core::circuit::{example_circuit, parse_pc, write_pc, NumericMode};

fn main() -> smc_core::Result<()> {
    let c = example_circuit();
    let v = c.validation();
    println!(
        "{} nodes over {} variables, smooth {}, decomposable {}",
        c.num_nodes(),
        c.num_vars(),
        v.smooth,
        v.decomposable
    );
    println!("Z = {}", c.partition()?);

    for (x1, x2) in [(false, false), (true, false), (false, true), (true, true)] {
        let q = [Some(x1), Some(x2), None, None];
        let lin = c.marginal(&q)?;
        let log = c.marginal_in(&q, NumericMode::Log)?;
        println!("P(x1={x1}, x2={x2}) = {lin:.3}  (log {log:.4})");
    }

    let text = write_pc(&c);
    assert_eq!(parse_pc(&text)?, c);
    println!("\n{text}");
    Ok(())
}
