//! Projection wall time at growing sizes, as CSV on stdout.
//!
//!     cargo run --release --example bench [sizes...]

use optimal_laplacian::bench::{bench_csv_row, bench_projection_with, BENCH_CSV_HEADER};
use optimal_laplacian::Result;

fn main() -> Result<()> {
    let mut sizes: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|v| v.parse().ok())
        .collect();
    if sizes.is_empty() {
        sizes = vec![500, 1000, 2000, 4000];
    }
    println!("{BENCH_CSV_HEADER}");
    let mut prev: Option<f64> = None;
    bench_projection_with(&sizes, 5, 1, |outcome| match outcome {
        Ok(r) => {
            println!("{}", bench_csv_row(r));
            if let Some(p) = prev {
                eprintln!(
                    "n = {}: x{:.2} over the previous size",
                    r.n,
                    r.median_seconds / p
                );
            }
            prev = Some(r.median_seconds);
        }
        Err((n, e)) => eprintln!("n = {n}: {e}"),
    })?;
    Ok(())
}
