//! Nearest Laplacian for a small matrix, with the row-sum corrections.
//!
//!     cargo run --example project

use optimal_laplacian::{nearest_laplacian, project_s1_s2, DenseMatrix, EdgeSet, Result};

fn main() -> Result<()> {
    let a = DenseMatrix::from_rows(&[[1.0, -2.0], [3.0, -4.0]])?;
    let edges = EdgeSet::complete(2)?;

    let clipped = project_s1_s2(&a, &edges)?;
    let r = nearest_laplacian(&a, &edges)?;

    println!("A       = {:?}", a.to_rows());
    println!("clipped = {:?}", clipped.to_rows());
    println!("L       = {:?}", r.laplacian.to_rows());
    println!("alpha   = {:?}", r.alpha);
    println!(
        "||A - L||_1 = {} = {} (clipping) + {} (row sums)",
        r.objective,
        r.relaxed_objective,
        r.alpha_l1()
    );

    // A sparser structure: a directed 4-cycle.
    let ring = EdgeSet::new(4, (0..4).map(|i| (i, (i + 1) % 4)))?;
    let b = DenseMatrix::from_fn(4, |i, j| {
        if i == j {
            2.0
        } else {
            -0.5 - (i + j) as f64 * 0.1
        }
    })?;
    let r = nearest_laplacian(&b, &ring)?;
    println!("\n4-cycle L = {:?}", r.laplacian.to_rows());
    println!("distance  = {}", r.objective);
    Ok(())
}
