//! Nearest graph Laplacian to a square matrix, in the entrywise 1-norm,
//! when the edge structure is known.
//!
//! The main entry point is [`nearest_laplacian`]: an `O(n^2)` clip-and-
//! rebalance pass that returns a global minimiser together with the row-sum
//! deficits that certify it. Around it sit
//!
//! - [`lp`]: the same problem as a linear program, solved by a small dense
//!   simplex, used to cross-check optimality on instances with `n <= 30`;
//! - [`l2`]: closed forms for the squared 2-norm variant on complete graphs,
//!   and the condition under which they stop applying;
//! - [`synth`]: Watts–Strogatz instances with random weights and Gaussian
//!   noise, reproducible from a 64-bit seed;
//! - [`spectra`]: a nonsymmetric eigensolver and the second-smallest real
//!   part statistic used to compare recovered and true Laplacians;
//! - [`bench`]: timing of the projection across sizes;
//! - [`cli`]: the `optlap` command-line tool.
//!
//! ```
//! use optimal_laplacian::{nearest_laplacian, DenseMatrix, EdgeSet};
//!
//! let a = DenseMatrix::from_rows(&[[1.0, -2.0], [3.0, -4.0]]).unwrap();
//! let edges = EdgeSet::complete(2).unwrap();
//! let result = nearest_laplacian(&a, &edges).unwrap();
//! assert_eq!(result.laplacian.to_rows(), vec![vec![2.0, -2.0], vec![0.0, 0.0]]);
//! assert_eq!(result.objective, 8.0);
//! assert_eq!(result.alpha, vec![-1.0, 0.0]);
//! ```

pub mod bench;
pub mod cli;
pub mod error;
pub mod io;
pub mod l2;
pub mod lp;
pub mod matrix;
pub mod projection;
pub mod rng;
pub mod spectra;
pub mod synth;

pub use error::{Error, Result};
pub use matrix::{
    laplacian_from_weights, validate_laplacian, DenseMatrix, EdgeSet, LaplacianCheckReport,
};
pub use projection::{l1_distance, nearest_laplacian, project_s1_s2, ProjectionResult};
