//! Dense square matrices, directed edge structures and the graph-Laplacian
//! membership test.
//!
//! Node indices are 0-based everywhere, including the on-disk formats in
//! [`crate::io`].

use std::fmt;
use std::ops::Index;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest `n` for which a dense `n x n` matrix may be allocated.
///
/// At 8 bytes per entry this is 2 GiB for a single matrix. The projection
/// path holds the input and the output only, so `n = 10_000` needs about
/// 1.6 GB.
pub const MAX_DENSE_N: usize = 16_384;

/// Default relative tolerance for [`validate_laplacian`].
pub const DEFAULT_TOL_REL: f64 = 1e-9;
/// Default absolute tolerance for [`validate_laplacian`].
pub const DEFAULT_TOL_ABS: f64 = 1e-12;

/// Row-major `n x n` matrix of finite reals.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(DenseMatrix {
            n,
            data: vec![0.0; n * n],
        })
    }

    /// Builds a matrix from `n * n` row-major entries.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        check_dim(n)?;
        if data.len() != n * n {
            return Err(Error::Dimension(format!(
                "expected {} entries for n = {n}, got {}",
                n * n,
                data.len()
            )));
        }
        check_finite(n, &data)?;
        Ok(DenseMatrix { n, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(n, data)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        check_dim(n)?;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        check_finite(n, &data)?;
        Ok(DenseMatrix { n, data })
    }

    /// Wraps a buffer that the caller has already checked.
    pub(crate) fn from_parts_unchecked(n: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        DenseMatrix { n, data }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.n.max(1))
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Entrywise 2-norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// `M * x` for a real vector.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        self.rows()
            .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n <= 8 {
            f.debug_struct("DenseMatrix")
                .field("n", &self.n)
                .field("rows", &self.to_rows())
                .finish()
        } else {
            write!(f, "DenseMatrix {{ n: {}, .. }}", self.n)
        }
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Dimension("matrix must have at least one row".into()));
    }
    if n > MAX_DENSE_N {
        return Err(Error::SizeCap {
            what: "dense matrix",
            n,
            cap: MAX_DENSE_N,
        });
    }
    Ok(())
}

fn check_finite(n: usize, data: &[f64]) -> Result<()> {
    match data.iter().position(|v| !v.is_finite()) {
        Some(k) => Err(Error::NonFinite {
            row: k / n,
            col: k % n,
        }),
        None => Ok(()),
    }
}

/// Known directed edge structure over `n >= 2` nodes, stored as sorted
/// out-neighbour lists. Self-loops are rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSet {
    n: usize,
    out: Vec<Vec<usize>>,
}

impl EdgeSet {
    /// Duplicate pairs are collapsed.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidEdge(format!(
                "need at least 2 nodes, got {n}"
            )));
        }
        let mut out = vec![Vec::new(); n];
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidEdge(format!(
                    "edge ({i}, {j}) out of range for n = {n}"
                )));
            }
            if i == j {
                return Err(Error::InvalidEdge(format!("self-loop ({i}, {i})")));
            }
            out[i].push(j);
        }
        for nb in &mut out {
            nb.sort_unstable();
            nb.dedup();
        }
        Ok(EdgeSet { n, out })
    }

    /// Every ordered pair `(i, j)` with `i != j`.
    pub fn complete(n: usize) -> Result<Self> {
        Self::new(
            n,
            (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))),
        )
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of directed edges.
    pub fn len(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.out.iter().all(Vec::is_empty)
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        i < self.n && self.out[i].binary_search(&j).is_ok()
    }

    /// Sorted out-neighbours of `i`.
    pub fn out_neighbors(&self, i: usize) -> &[usize] {
        &self.out[i]
    }

    /// Edges in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(i, nb)| nb.iter().map(move |&j| (i, j)))
    }

    pub fn is_symmetric(&self) -> bool {
        self.iter().all(|(i, j)| self.contains(j, i))
    }
}

/// Residuals of the three graph-Laplacian conditions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LaplacianCheckReport {
    /// `max_i |sum_j L_ij|`.
    pub row_sum_residual: f64,
    /// Largest magnitude of a negative diagonal or positive off-diagonal.
    pub sign_violation: f64,
    /// Largest `|L_ij|` over off-diagonal positions outside the edge set.
    pub structure_violation: f64,
    pub is_valid: bool,
}

/// Checks zero row sums, the sign pattern and the edge support of `l`.
///
/// `is_valid` holds when every residual is at most
/// `tol_abs + tol_rel * max|L_ij|`.
pub fn validate_laplacian(
    l: &DenseMatrix,
    edges: &EdgeSet,
    tol_rel: f64,
    tol_abs: f64,
) -> Result<LaplacianCheckReport> {
    let n = l.n();
    if n != edges.n() {
        return Err(Error::Dimension(format!(
            "matrix has n = {n}, edge set has n = {}",
            edges.n()
        )));
    }
    let mut row_sum_residual = 0.0f64;
    let mut sign_violation = 0.0f64;
    let mut structure_violation = 0.0f64;
    for i in 0..n {
        let row = l.row(i);
        let nb = edges.out_neighbors(i);
        let mut next = 0;
        let mut sum = 0.0;
        for (j, &v) in row.iter().enumerate() {
            sum += v;
            if j == i {
                if v < 0.0 {
                    sign_violation = sign_violation.max(-v);
                }
                continue;
            }
            let allowed = next < nb.len() && nb[next] == j;
            if allowed {
                next += 1;
                if v > 0.0 {
                    sign_violation = sign_violation.max(v);
                }
            } else {
                structure_violation = structure_violation.max(v.abs());
            }
        }
        row_sum_residual = row_sum_residual.max(sum.abs());
    }
    let tol = tol_abs + tol_rel * l.max_abs();
    Ok(LaplacianCheckReport {
        row_sum_residual,
        sign_violation,
        structure_violation,
        is_valid: row_sum_residual <= tol && sign_violation <= tol && structure_violation <= tol,
    })
}

/// `D - W` for a non-negative weight matrix supported on `edges`.
///
/// Each diagonal entry is the row degree accumulated in ascending column
/// order, so the result is a fixed point of [`crate::nearest_laplacian`].
pub fn laplacian_from_weights(weights: &DenseMatrix, edges: &EdgeSet) -> Result<DenseMatrix> {
    let n = weights.n();
    if n != edges.n() {
        return Err(Error::Dimension(format!(
            "weights have n = {n}, edge set has n = {}",
            edges.n()
        )));
    }
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        let row = &mut data[i * n..(i + 1) * n];
        let mut degree = 0.0;
        for &j in edges.out_neighbors(i) {
            let w = weights.get(i, j);
            if w < 0.0 {
                return Err(Error::InvalidParam(format!(
                    "negative weight {w} at ({i}, {j})"
                )));
            }
            row[j] = -w;
            degree += w;
        }
        row[i] = degree;
    }
    Ok(DenseMatrix::from_parts_unchecked(n, data))
}
