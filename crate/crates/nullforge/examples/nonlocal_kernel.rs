//! The fully banded (completely non-local) chain: its kernel from the
//! multinomial composition sum next to the elimination kernel, exactly.
//!
//! ```bash
//! cargo run --example nonlocal_kernel
//! ```

use num_rational::BigRational;

use nullforge::models::{nonlocal_cw, zero_mode_analytic, ZeroModeFormula};

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn main() {
    // Unit couplings, n = 2..8.
    for n in 2..=8usize {
        let couplings = vec![rat(1, 1); n + 1];
        let h = nonlocal_cw(n, &couplings).unwrap();
        let kernel = h.null_basis(0.0);
        let formula =
            zero_mode_analytic(&ZeroModeFormula::NonlocalMultinomial { couplings }, n).unwrap();
        println!(
            "n = {n}: multinomial kernel equals elimination kernel: {}",
            formula == kernel.vectors()[0]
        );
    }

    // A rational example with geometric bands a_k = (1/2)^k: the kernel picks
    // up large alternating entries.
    let n = 6;
    let couplings: Vec<BigRational> = (0..=n as i64).map(|k| rat(1, 1 << k)).collect();
    let h = nonlocal_cw(n, &couplings).unwrap();
    let formula = zero_mode_analytic(&ZeroModeFormula::NonlocalMultinomial { couplings }, n).unwrap();
    println!("\nn = {n}, a_k = 2^-k:");
    if let Some(comps) = formula.as_rational() {
        for (k, c) in comps.iter().enumerate() {
            println!("  component {:>2}: {c}", k + 1);
        }
    }
    println!("annihilates: {}", h.matvec(&formula).is_zero());
}
