//! Incremental upper and lower bounds on a marginal while variables are
//! assigned one at a time, then undone by backtracking.

use std::sync::Arc;

use smc_core::circuit::{BoundState, NumericMode};
use smc_core::compile::compile_default;
use smc_core::problems::gen_random_bn;

fn main() -> smc_core::Result<()> {
    let bn = gen_random_bn(8, 3, 0.5, 7)?;
    let c = Arc::new(compile_default(&bn)?);
    let shared: Vec<u32> = (0..8).collect();
    let mut s = BoundState::new(c.clone(), &shared, NumericMode::Linear)?;

    let (ub, lb) = s.root_bounds();
    println!("level 0: [{lb:.5}, {ub:.5}]");
    for (level, var) in (1..).zip([3u32, 0, 6, 1]) {
        let (ub, lb) = s.assign(var, level % 2 == 1, level)?;
        println!(
            "level {level}: x{var} := {}  [{lb:.5}, {ub:.5}]",
            level % 2 == 1
        );
    }

    s.backtrack(2);
    let (ub, lb) = s.root_bounds();
    println!("back to level 2: [{lb:.5}, {ub:.5}]");

    // once everything is assigned the interval collapses to the joint
    for (level, var) in (3..).zip([1u32, 2, 4, 5, 6, 7]) {
        s.assign(var, true, level)?;
    }
    let (ub, lb) = s.root_bounds();
    let exact = c.marginal(&shared.iter().map(|&v| s.value(v)).collect::<Vec<_>>())?;
    println!("full assignment: [{lb:.6}, {ub:.6}], exact {exact:.6}");
    Ok(())
}
