//! Closed-form nearest points in the squared 2-norm.
//!
//!     cargo run --example l2_closed_forms

use optimal_laplacian::l2::{complete_graph_l2_row, zero_sum_projection};
use optimal_laplacian::Result;

fn main() -> Result<()> {
    let v = [3.0, -1.0, 4.0, 1.5];
    println!(
        "zero-sum projection of {v:?}: {:?}",
        zero_sum_projection(&v)?
    );

    for row in [[6.0, -2.0, -1.0], [3.0, -1.5, -1.5], [0.5, -3.0, -0.1]] {
        let sol = complete_graph_l2_row(&row, 0)?;
        match sol.values {
            Some(x) => println!("row {row:?} -> {x:?}"),
            None => println!("row {row:?} -> no closed form (negative row sum)"),
        }
    }
    Ok(())
}
