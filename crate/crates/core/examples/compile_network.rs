//! Generate a random Bayesian network, write and re-read it in UAI form,
//! compile it to a circuit and compare against enumeration.

use smc_core::compile::{
    compile, compile_with, enumerate_marginal, parse_uai, write_uai, CompileOptions,
};
use smc_core::problems::gen_random_bn;

fn main() -> smc_core::Result<()> {
    let bn = gen_random_bn(10, 4, 0.5, 11)?;
    let text = write_uai(&bn);
    let bn = parse_uai(&text)?;
    println!("{} variables, {} factors", bn.num_vars, bn.factors.len());

    let order: Vec<u32> = (0..bn.num_vars).collect();
    let c = compile(&bn, &order)?;
    let flat = compile_with(
        &bn,
        &order,
        CompileOptions {
            memoize: false,
            ..Default::default()
        },
    )?;
    println!(
        "circuit: {} nodes ({} without sharing), valid {}",
        c.num_nodes(),
        flat.num_nodes(),
        c.validation().is_valid()
    );

    let mut q = vec![None; bn.num_vars as usize];
    q[0] = Some(true);
    q[4] = Some(false);
    println!(
        "P(x0=T, x4=F): circuit {:.8}, enumeration {:.8}",
        c.marginal(&q)?,
        enumerate_marginal(&bn, &q)?
    );
    println!("Z = {:.12}", c.partition()?);
    Ok(())
}
