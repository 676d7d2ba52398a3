//! Draws a synthetic instance and reports how far the noisy matrix and its
//! projection are from the true Laplacian.
//!
//!     cargo run --release --example generate [n] [s] [seed]

use optimal_laplacian::synth::{generate_instance, SynthParams};
use optimal_laplacian::{l1_distance, nearest_laplacian, Result};

fn main() -> Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |k: usize, default: &str| args.get(k).cloned().unwrap_or_else(|| default.into());
    let params = SynthParams {
        n: arg(0, "300").parse().expect("n"),
        k: 10,
        beta: 0.3,
        s: arg(1, "1").parse().expect("s"),
        seed: arg(2, "42").parse().expect("seed"),
    };
    let inst = generate_instance(&params)?;
    let r = nearest_laplacian(&inst.a, &inst.edges)?;

    println!("{params:?}");
    println!("directed edges     {}", inst.edges.len());
    println!(
        "||A - L*||_1       {:.4}",
        l1_distance(&inst.a, &inst.l_star)?
    );
    println!(
        "||L - L*||_1       {:.4}",
        l1_distance(&r.laplacian, &inst.l_star)?
    );
    println!("||A - L||_1        {:.4}", r.objective);
    println!("row-sum correction {:.4}", r.alpha_l1());
    Ok(())
}
