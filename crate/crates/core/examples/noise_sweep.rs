//! Mean and variance of the second-smallest real part gap between the true
//! and recovered Laplacians across noise levels.
//!
//!     cargo run --release --example noise_sweep [trials] [seed]

use optimal_laplacian::cli::table2_csv;
use optimal_laplacian::spectra::{ave_var_sweep, SweepConfig};
use optimal_laplacian::Result;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let trials = args.next().and_then(|v| v.parse().ok()).unwrap_or(20);
    let seed = args.next().and_then(|v| v.parse().ok()).unwrap_or(7);
    let cfg = SweepConfig {
        n: 300,
        k: 10,
        beta: 0.3,
        trials,
        seed,
        threads: None,
    };
    let rows = ave_var_sweep(&[0.5, 1.0, 2.0, 3.0, 4.0, 5.0], &cfg)?;
    print!("{}", table2_csv(&rows));
    Ok(())
}
