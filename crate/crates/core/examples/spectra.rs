//! Eigenvalues of the true Laplacian, the noisy matrix and the recovered
//! Laplacian for one instance, as CSV on stdout (`matrix,re,im`).
//!
//!     cargo run --release --example spectra > eigs.csv

use optimal_laplacian::io::format_f64;
use optimal_laplacian::spectra::eigenvalues;
use optimal_laplacian::synth::{generate_instance, SynthParams};
use optimal_laplacian::{nearest_laplacian, Result};

fn main() -> Result<()> {
    let s: f64 = std::env::args()
        .nth(1)
        .and_then(|v| v.parse().ok())
        .unwrap_or(1.0);
    let inst = generate_instance(&SynthParams {
        n: 300,
        k: 10,
        beta: 0.3,
        s,
        seed: 42,
    })?;
    let l = nearest_laplacian(&inst.a, &inst.edges)?.laplacian;

    println!("matrix,re,im");
    for (name, m) in [("Lstar", &inst.l_star), ("A", &inst.a), ("L", &l)] {
        let spec = eigenvalues(m)?;
        eprintln!(
            "{name:>5}: second-smallest real part {:.6}",
            spec.lambda2_real
        );
        for z in &spec.eigenvalues {
            println!("{name},{},{}", format_f64(z.re), format_f64(z.im));
        }
    }
    Ok(())
}
