//! Closed forms for the squared entrywise 2-norm.
//!
//! Under a zero-sum constraint alone the minimiser is mean subtraction. For
//! one row of a complete-graph matrix that already has the Laplacian sign
//! pattern, mean subtraction also respects the sign constraints when the
//! row sum is non-negative. When the row sum is negative it can push an
//! off-diagonal entry above zero, and no closed form is available; this is
//! reported through [`RowSolution::applicable`] rather than as an error.

use crate::error::{Error, Result};

/// Result of [`complete_graph_l2_row`].
#[derive(Clone, Debug, PartialEq)]
pub struct RowSolution {
    /// `Some` exactly when the closed form applies.
    pub values: Option<Vec<f64>>,
    pub applicable: bool,
}

/// Minimiser of `sum_i (x_i - a_i)^2` subject to `sum_i x_i = 0`.
pub fn zero_sum_projection(a: &[f64]) -> Result<Vec<f64>> {
    if a.is_empty() {
        return Err(Error::InvalidParam(
            "zero_sum_projection of an empty vector".into(),
        ));
    }
    let mean = a.iter().sum::<f64>() / a.len() as f64;
    Ok(a.iter().map(|v| v - mean).collect())
}

/// Squared-2-norm nearest Laplacian row for a complete graph.
///
/// `a_row` is row `i` of a matrix with the Laplacian sign pattern:
/// `a_row[i] >= 0` and every other entry `<= 0`. Anything else is rejected.
/// A row sum of exactly zero counts as applicable.
pub fn complete_graph_l2_row(a_row: &[f64], i: usize) -> Result<RowSolution> {
    let n = a_row.len();
    if i >= n {
        return Err(Error::InvalidParam(format!(
            "row index {i} out of range for length {n}"
        )));
    }
    if let Some((j, v)) = a_row.iter().enumerate().find(|&(_, v)| !v.is_finite()) {
        return Err(Error::InvalidParam(format!(
            "non-finite entry {v} at column {j}"
        )));
    }
    if a_row[i] < 0.0 {
        return Err(Error::InvalidParam(format!(
            "diagonal entry {} is negative; row is not in the sign-pattern set",
            a_row[i]
        )));
    }
    if let Some((j, v)) = a_row.iter().enumerate().find(|&(j, &v)| j != i && v > 0.0) {
        return Err(Error::InvalidParam(format!(
            "off-diagonal entry {v} at column {j} is positive; row is not in the sign-pattern set"
        )));
    }
    let sum: f64 = a_row.iter().sum();
    if sum < 0.0 {
        return Ok(RowSolution {
            values: None,
            applicable: false,
        });
    }
    Ok(RowSolution {
        values: Some(zero_sum_projection(a_row)?),
        applicable: true,
    })
}
