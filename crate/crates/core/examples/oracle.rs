//! Certifies the projection on random instances by solving the same problem
//! as a linear program.
//!
//!     cargo run --release --example oracle [instances]

use optimal_laplacian::lp::{solve_nearest_laplacian_lp, DEFAULT_MAX_ITERS};
use optimal_laplacian::rng::Stream;
use optimal_laplacian::{nearest_laplacian, DenseMatrix, EdgeSet, Result};

fn main() -> Result<()> {
    let count: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(10);
    let mut rng = Stream::new(1);
    println!(
        "{:>3} {:>5} {:>18} {:>18} {:>9} {:>7}",
        "n", "edges", "projection", "simplex", "gap", "pivots"
    );
    for _ in 0..count {
        let n = 2 + rng.below(11);
        let pairs: Vec<_> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j)
            .collect();
        let edges = EdgeSet::new(n, pairs.into_iter().filter(|_| rng.uniform() < 0.5))?;
        let a = DenseMatrix::from_fn(n, |_, _| 3.0 * rng.normal())?;

        let fast = nearest_laplacian(&a, &edges)?.objective;
        let (_, sol) = solve_nearest_laplacian_lp(&a, &edges, DEFAULT_MAX_ITERS)?;
        println!(
            "{n:>3} {:>5} {fast:>18.12} {:>18.12} {:>9.1e} {:>7}",
            edges.len(),
            sol.objective_value,
            (fast - sol.objective_value).abs(),
            sol.pivots
        );
    }
    Ok(())
}
