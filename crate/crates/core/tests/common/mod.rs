//! Reference implementations used only by the integration tests. None of
//! them share code with the library algorithms they check.

#![allow(dead_code)]

use itertools::Itertools;
use num_complex::Complex64;
use optimal_laplacian::rng::Stream;
use optimal_laplacian::{DenseMatrix, EdgeSet};

/// Random ordered-pair edge set where each off-diagonal pair is kept with
/// probability `density`.
pub fn random_edges(n: usize, density: f64, rng: &mut Stream) -> EdgeSet {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && (density >= 1.0 || rng.uniform() < density) {
                pairs.push((i, j));
            }
        }
    }
    EdgeSet::new(n, pairs).unwrap()
}

/// Dense matrix with standard normal entries times `scale`.
pub fn random_matrix(n: usize, scale: f64, rng: &mut Stream) -> DenseMatrix {
    DenseMatrix::from_fn(n, |_, _| scale * rng.normal()).unwrap()
}

/// Matrix whose entries are a mix of normals, exact zeros and entries that
/// already carry the Laplacian sign pattern, so clipping boundaries get hit.
pub fn mixed_matrix(n: usize, scale: f64, rng: &mut Stream) -> DenseMatrix {
    DenseMatrix::from_fn(n, |i, j| {
        let u = rng.uniform();
        if u < 0.1 {
            0.0
        } else if u < 0.4 {
            let v = scale * rng.uniform();
            if i == j {
                v
            } else {
                -v
            }
        } else {
            scale * rng.normal()
        }
    })
    .unwrap()
}

/// Laplacian built by hand from positive weights on `edges`.
pub fn random_laplacian(edges: &EdgeSet, scale: f64, rng: &mut Stream) -> DenseMatrix {
    let n = edges.n();
    let mut w = vec![0.0; n * n];
    for (i, j) in edges.iter() {
        w[i * n + j] = scale * rng.uniform_open();
    }
    DenseMatrix::from_fn(n, |i, j| {
        if i == j {
            (0..n).map(|k| w[i * n + k]).sum()
        } else {
            -w[i * n + j]
        }
    })
    .unwrap()
}

/// Entrywise 1-norm distance, summed independently of the library.
pub fn l1(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    let n = a.n();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            total += (a.get(i, j) - b.get(i, j)).abs();
        }
    }
    total
}

/// Sign, support and row-sum check with an absolute tolerance.
pub fn is_laplacian(l: &DenseMatrix, edges: &EdgeSet, tol: f64) -> bool {
    let n = l.n();
    (0..n).all(|i| {
        let row_ok = l.row(i).iter().sum::<f64>().abs() <= tol;
        let diag_ok = l.get(i, i) >= -tol;
        let off_ok = (0..n).filter(|&j| j != i).all(|j| {
            let v = l.get(i, j);
            if edges.contains(i, j) {
                v <= tol
            } else {
                v.abs() <= tol
            }
        });
        row_ok && diag_ok && off_ok
    })
}

/// Characteristic polynomial coefficients `c[0..=n]` (ascending powers,
/// `c[n] = 1`) by the Faddeev–LeVerrier recursion.
pub fn char_poly(m: &DenseMatrix) -> Vec<f64> {
    let n = m.n();
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut mk = vec![0.0; n * n];
    for k in 1..=n {
        // mk <- m * mk + c[n-k+1] I
        let mut next = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for l in 0..n {
                    acc += m.get(i, l) * mk[l * n + j];
                }
                next[i * n + j] = acc;
            }
            next[i * n + i] += c[n - k + 1];
        }
        mk = next;
        let mut tr = 0.0;
        for i in 0..n {
            for l in 0..n {
                tr += m.get(i, l) * mk[l * n + i];
            }
        }
        c[n - k] = -tr / k as f64;
    }
    c
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &ck in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ck;
    }
    (p, dp)
}

/// All roots of a monic polynomial by Durand–Kerner iteration followed by
/// a few Newton steps on each root.
pub fn poly_roots(c: &[f64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let radius = 1.0 + c[..n].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius).collect();
    for _ in 0..5000 {
        let mut change = 0.0f64;
        for k in 0..n {
            let (p, _) = horner(c, z[k]);
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != k {
                    denom *= z[k] - z[j];
                }
            }
            let step = p / denom;
            z[k] -= step;
            change = change.max(step.norm());
        }
        if change < 1e-15 * radius {
            break;
        }
    }
    for zk in z.iter_mut() {
        for _ in 0..5 {
            let (p, dp) = horner(c, *zk);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            *zk -= step;
        }
    }
    z
}

/// Smallest achievable maximum distance over all pairings of `a` with `b`.
pub fn best_matching_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    (0..b.len())
        .permutations(b.len())
        .map(|perm| {
            a.iter()
                .zip(perm)
                .map(|(x, j)| (x - b[j]).norm())
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Minimiser of `sum_j (x_j - a_j)^2` over rows `x` with `x_i >= 0`,
/// `x_j <= 0` for `j != i` and zero sum, by repeated grid refinement over
/// the off-diagonal entries. Returns the point and the final grid spacing.
pub fn grid_l2_row(a: &[f64], i: usize, final_spacing: f64) -> (Vec<f64>, f64) {
    let n = a.len();
    let off: Vec<usize> = (0..n).filter(|&j| j != i).collect();
    let d = off.len();
    const PTS: usize = 9;
    let objective = |x: &[f64]| {
        let diag: f64 = -x.iter().sum::<f64>();
        let mut f = (diag - a[i]).powi(2);
        for (k, &j) in off.iter().enumerate() {
            f += (x[k] - a[j]).powi(2);
        }
        f
    };
    let span = a.iter().map(|v| v.abs()).sum::<f64>() + 1.0;
    let mut center = vec![-0.5 * span; d];
    let mut half = span;
    let mut best = center.clone();
    loop {
        let spacing = 2.0 * half / (PTS - 1) as f64;
        let mut best_f = f64::INFINITY;
        let mut x = vec![0.0; d];
        for idx in 0..PTS.pow(d as u32) {
            let mut r = idx;
            let mut feasible = true;
            for k in 0..d {
                x[k] = center[k] - half + (r % PTS) as f64 * spacing;
                r /= PTS;
                if x[k] > 0.0 {
                    feasible = false;
                }
            }
            if !feasible {
                continue;
            }
            let f = objective(&x);
            if f < best_f {
                best_f = f;
                best.copy_from_slice(&x);
            }
        }
        if spacing <= final_spacing {
            let mut row = vec![0.0; n];
            row[i] = -best.iter().sum::<f64>();
            for (k, &j) in off.iter().enumerate() {
                row[j] = best[k];
            }
            return (row, spacing);
        }
        center.copy_from_slice(&best);
        half *= 0.5;
    }
}
