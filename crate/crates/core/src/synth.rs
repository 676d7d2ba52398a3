//! Synthetic instances: a Watts–Strogatz structure, independent uniform
//! weights per direction, the exact Laplacian of those weights and a dense
//! Gaussian perturbation of it.
//!
//! Draw order is part of the contract. One [`Stream`] seeded from
//! `params.seed` supplies, in order, the rewiring draws, the edge weights in
//! row-major edge order, and the noise in row-major order.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, EdgeSet, MAX_DENSE_N};
use crate::rng::Stream;

/// Edge weights are `WEIGHT_SCALE * u` with `u` uniform on `(0, 1)`.
pub const WEIGHT_SCALE: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthParams {
    pub n: usize,
    /// Mean degree of the ring lattice; even, `2 <= k < n`.
    pub k: usize,
    /// Rewiring probability.
    pub beta: f64,
    /// Noise scale.
    pub s: f64,
    pub seed: u64,
}

impl SynthParams {
    pub fn validate(&self) -> Result<()> {
        validate_ws(self.n, self.k, self.beta)?;
        if !(self.s.is_finite() && self.s >= 0.0) {
            return Err(Error::InvalidParam(format!(
                "noise scale s = {} must be >= 0",
                self.s
            )));
        }
        Ok(())
    }
}

fn validate_ws(n: usize, k: usize, beta: f64) -> Result<()> {
    if n > MAX_DENSE_N {
        return Err(Error::SizeCap {
            what: "synthetic instance",
            n,
            cap: MAX_DENSE_N,
        });
    }
    if !k.is_multiple_of(2) || k < 2 || k >= n {
        return Err(Error::InvalidParam(format!(
            "mean degree k = {k} must be even with 2 <= k < n = {n}"
        )));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::InvalidParam(format!(
            "rewiring probability {beta} not in [0, 1]"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthInstance {
    pub params: SynthParams,
    pub edges: EdgeSet,
    pub l_star: DenseMatrix,
    pub a: DenseMatrix,
}

/// Watts–Strogatz small-world structure, returned as a symmetric directed
/// edge set with exactly `n * k / 2` undirected edges.
///
/// Lattice edges `(i, i + j mod n)` are visited for `j = 1..=k/2`, then
/// `i = 0..n`. Each draws a uniform; below `beta` the far endpoint is
/// replaced by a uniformly chosen node that is neither `i` nor already a
/// neighbour of `i`. Nodes adjacent to every other node are left alone.
pub fn watts_strogatz(n: usize, k: usize, beta: f64, rng: &mut Stream) -> Result<EdgeSet> {
    validate_ws(n, k, beta)?;
    let mut adj: Vec<HashSet<usize>> = vec![HashSet::with_capacity(k + 2); n];
    for j in 1..=k / 2 {
        for i in 0..n {
            let t = (i + j) % n;
            adj[i].insert(t);
            adj[t].insert(i);
        }
    }
    for j in 1..=k / 2 {
        for i in 0..n {
            let t = (i + j) % n;
            let coin = rng.uniform();
            if coin >= beta || !adj[i].contains(&t) || adj[i].len() >= n - 1 {
                continue;
            }
            let w = loop {
                let w = rng.below(n);
                if w != i && !adj[i].contains(&w) {
                    break w;
                }
            };
            adj[i].remove(&t);
            adj[t].remove(&i);
            adj[i].insert(w);
            adj[w].insert(i);
        }
    }
    EdgeSet::new(
        n,
        adj.iter()
            .enumerate()
            .flat_map(|(i, nb)| nb.iter().map(move |&j| (i, j))),
    )
}

/// Structure and exact Laplacian of one instance, with the stream positioned
/// at the start of the noise draws.
pub(crate) fn generate_laplacian(params: &SynthParams) -> Result<(EdgeSet, DenseMatrix, Stream)> {
    params.validate()?;
    let n = params.n;
    let mut rng = Stream::new(params.seed);
    let edges = watts_strogatz(n, params.k, params.beta, &mut rng)?;
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        let row = &mut data[i * n..(i + 1) * n];
        let mut degree = 0.0;
        for &j in edges.out_neighbors(i) {
            let w = WEIGHT_SCALE * rng.uniform_open();
            row[j] = -w;
            degree += w;
        }
        row[i] = degree;
    }
    Ok((edges, DenseMatrix::from_parts_unchecked(n, data), rng))
}

/// Builds `(E, L*, A)` from `params`, with `A = L* + s * G` for a dense
/// standard-normal `G`.
pub fn generate_instance(params: &SynthParams) -> Result<SynthInstance> {
    let (edges, l_star, mut rng) = generate_laplacian(params)?;
    let s = params.s;
    let a: Vec<f64> = l_star
        .as_slice()
        .iter()
        .map(|&l| l + s * rng.normal())
        .collect();
    let a = DenseMatrix::from_row_major(params.n, a)?;
    Ok(SynthInstance {
        params: *params,
        edges,
        l_star,
        a,
    })
}

/// The noise matrix `G` that [`generate_instance`] would draw for these
/// parameters, alongside the structure and `L*`. `L*_ij + s * G_ij`
/// reproduces `A` bit for bit.
pub fn generate_with_noise(params: &SynthParams) -> Result<(EdgeSet, DenseMatrix, Vec<f64>)> {
    let (edges, l_star, mut rng) = generate_laplacian(params)?;
    let g = (0..params.n * params.n).map(|_| rng.normal()).collect();
    Ok((edges, l_star, g))
}

/// `L* + s * G` entrywise.
pub fn perturb(l_star: &DenseMatrix, noise: &[f64], s: f64) -> Result<DenseMatrix> {
    if noise.len() != l_star.as_slice().len() {
        return Err(Error::Dimension(
            "noise length does not match matrix".into(),
        ));
    }
    let a = l_star
        .as_slice()
        .iter()
        .zip(noise)
        .map(|(&l, &g)| l + s * g)
        .collect();
    DenseMatrix::from_row_major(l_star.n(), a)
}
