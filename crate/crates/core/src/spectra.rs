//! Eigenvalues of real nonsymmetric matrices and the second-smallest
//! real part statistic.
//!
//! The eigensolver balances the matrix with exact powers of two, reduces it
//! to upper Hessenberg form with Householder reflections, and deflates it
//! with the Francis double-shift QR iteration. Complex eigenvalues come out
//! as exact conjugate pairs.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::projection::nearest_laplacian;
use crate::rng::trial_seed;
use crate::synth::{generate_with_noise, perturb, SynthParams};

/// Largest matrix accepted by [`eigenvalues`].
pub const EIGEN_MAX_N: usize = 2000;

/// QR sweeps allowed per eigenvalue before giving up.
const MAX_SWEEPS: usize = 60;

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralSummary {
    /// All eigenvalues with multiplicity, ascending by real part and then
    /// by imaginary part.
    pub eigenvalues: Vec<Complex64>,
    /// Real part of the second eigenvalue in that order.
    pub lambda2_real: f64,
}

/// Eigenvalues of `m`, sorted, with the second-smallest real part.
pub fn eigenvalues(m: &DenseMatrix) -> Result<SpectralSummary> {
    if m.n() < 2 {
        return Err(Error::Dimension(
            "need n >= 2 for a second eigenvalue".into(),
        ));
    }
    let mut ev = eigenvalues_unsorted(m)?;
    sort_spectrum(&mut ev);
    let lambda2_real = ev[1].re;
    Ok(SpectralSummary {
        eigenvalues: ev,
        lambda2_real,
    })
}

/// Ascending real part, ties broken by ascending imaginary part.
pub fn sort_spectrum(ev: &mut [Complex64]) {
    ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Eigenvalues of `m` in deflation order.
pub fn eigenvalues_unsorted(m: &DenseMatrix) -> Result<Vec<Complex64>> {
    let n = m.n();
    if n > EIGEN_MAX_N {
        return Err(Error::SizeCap {
            what: "dense eigensolver",
            n,
            cap: EIGEN_MAX_N,
        });
    }
    let mut h = m.as_slice().to_vec();
    balance(&mut h, n);
    hessenberg(&mut h, n);
    hessenberg_qr(h, n)
}

/// Scales rows and columns by powers of two until row and column norms are
/// comparable. Similarity-preserving and exact in floating point.
fn balance(a: &mut [f64], n: usize) {
    const RADIX: f64 = 2.0;
    const RADIX2: f64 = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[j * n + i].abs();
                    r += a[i * n + j].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX2;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX2;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let inv = 1.0 / f;
                for v in &mut a[i * n..(i + 1) * n] {
                    *v *= inv;
                }
                for j in 0..n {
                    a[j * n + i] *= f;
                }
            }
        }
    }
}

/// In-place Householder reduction of a row-major matrix to upper
/// Hessenberg form. Entries below the subdiagonal are set to zero.
fn hessenberg(h: &mut [f64], n: usize) {
    if n < 3 {
        return;
    }
    let mut v = vec![0.0; n];
    let mut w = vec![0.0; n];
    for k in 0..n - 2 {
        let scale: f64 = (k + 1..n).map(|i| h[i * n + k].abs()).sum();
        if scale == 0.0 {
            continue;
        }
        for i in k + 1..n {
            v[i] = h[i * n + k] / scale;
        }
        let norm = (k + 1..n).map(|i| v[i] * v[i]).sum::<f64>().sqrt();
        let alpha = if v[k + 1] > 0.0 { -norm } else { norm };
        v[k + 1] -= alpha;
        let vtv: f64 = (k + 1..n).map(|i| v[i] * v[i]).sum();
        if vtv == 0.0 {
            continue;
        }
        let beta = 2.0 / vtv;

        // H <- (I - beta v v^T) H on rows k+1.., columns k..
        w[k..n].iter_mut().for_each(|x| *x = 0.0);
        for i in k + 1..n {
            let vi = v[i];
            let row = &h[i * n..(i + 1) * n];
            for j in k..n {
                w[j] += vi * row[j];
            }
        }
        for i in k + 1..n {
            let f = beta * v[i];
            let row = &mut h[i * n..(i + 1) * n];
            for j in k..n {
                row[j] -= f * w[j];
            }
        }
        // H <- H (I - beta v v^T) on all rows, columns k+1..
        for i in 0..n {
            let row = &mut h[i * n..(i + 1) * n];
            let s: f64 = (k + 1..n).map(|j| row[j] * v[j]).sum::<f64>() * beta;
            for j in k + 1..n {
                row[j] -= s * v[j];
            }
        }
        h[(k + 1) * n + k] = alpha * scale;
        for i in k + 2..n {
            h[i * n + k] = 0.0;
        }
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix, eigenvalues only.
fn hessenberg_qr(mut a: Vec<f64>, n: usize) -> Result<Vec<Complex64>> {
    let idx = |i: usize, j: usize| i * n + j;
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];

    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[idx(i, j)].abs();
        }
    }

    // `hi` is the last row of the active block; `shift` accumulates
    // exceptional shifts.
    let mut hi = n as isize - 1;
    let mut shift = 0.0;
    while hi >= 0 {
        let nn = hi as usize;
        let mut its = 0;
        loop {
            // Find the start `l` of the unreduced block ending at nn.
            let mut l = nn;
            while l > 0 {
                let mut s = a[idx(l - 1, l - 1)].abs() + a[idx(l, l)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[idx(l, l - 1)].abs() <= f64::EPSILON * s {
                    a[idx(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[idx(nn, nn)];
            if l == nn {
                // One root.
                wr[nn] = x + shift;
                wi[nn] = 0.0;
                hi -= 1;
                break;
            }
            let mut y = a[idx(nn - 1, nn - 1)];
            let mut w = a[idx(nn, nn - 1)] * a[idx(nn - 1, nn)];
            if l == nn - 1 {
                // Two roots from the trailing 2x2 block.
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                x += shift;
                if q >= 0.0 {
                    let z = p + z.copysign(p);
                    wr[nn - 1] = x + z;
                    wr[nn] = if z != 0.0 { x - w / z } else { x + z };
                    wi[nn - 1] = 0.0;
                    wi[nn] = 0.0;
                } else {
                    wr[nn - 1] = x + p;
                    wr[nn] = x + p;
                    wi[nn - 1] = -z;
                    wi[nn] = z;
                }
                hi -= 2;
                break;
            }

            if its == MAX_SWEEPS {
                return Err(Error::NoConvergence { row: nn });
            }
            if its > 0 && its % 10 == 0 {
                // Exceptional shift.
                shift += x;
                for i in 0..=nn {
                    a[idx(i, i)] -= x;
                }
                let s = a[idx(nn, nn - 1)].abs() + a[idx(nn - 1, nn - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;

            // Look for two consecutive small subdiagonals.
            let mut m = nn - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = a[idx(m, m)];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[idx(m + 1, m)] + a[idx(m, m + 1)];
                q = a[idx(m + 1, m + 1)] - z - rr - ss;
                r = a[idx(m + 2, m + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[idx(m, m - 1)].abs() * (q.abs() + r.abs());
                let v =
                    p.abs() * (a[idx(m - 1, m - 1)].abs() + z.abs() + a[idx(m + 1, m + 1)].abs());
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nn {
                a[idx(i, i - 2)] = 0.0;
                if i != m + 2 {
                    a[idx(i, i - 3)] = 0.0;
                }
            }

            // Double-shift QR step on rows/columns l..=nn, chasing the bulge.
            let mut k = m;
            while k < nn {
                if k != m {
                    p = a[idx(k, k - 1)];
                    q = a[idx(k + 1, k - 1)];
                    r = if k != nn - 1 {
                        a[idx(k + 2, k - 1)]
                    } else {
                        0.0
                    };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a[idx(k, k - 1)] = -a[idx(k, k - 1)];
                        }
                    } else {
                        a[idx(k, k - 1)] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q /= p;
                    r /= p;
                    // Row modification.
                    for j in k..=nn {
                        let mut pp = a[idx(k, j)] + q * a[idx(k + 1, j)];
                        if k != nn - 1 {
                            pp += r * a[idx(k + 2, j)];
                            a[idx(k + 2, j)] -= pp * z;
                        }
                        a[idx(k + 1, j)] -= pp * y;
                        a[idx(k, j)] -= pp * x;
                    }
                    // Column modification.
                    let mmin = nn.min(k + 3);
                    for i in l..=mmin {
                        let mut pp = x * a[idx(i, k)] + y * a[idx(i, k + 1)];
                        if k != nn - 1 {
                            pp += z * a[idx(i, k + 2)];
                            a[idx(i, k + 2)] -= pp * r;
                        }
                        a[idx(i, k + 1)] -= pp * q;
                        a[idx(i, k)] -= pp;
                    }
                }
                k += 1;
            }
        }
    }

    Ok(wr
        .into_iter()
        .zip(wi)
        .map(|(re, im)| Complex64::new(re, im))
        .collect())
}

/// Unit eigenvector for an eigenvalue estimate `lambda`, by two steps of
/// inverse iteration with a slightly perturbed shift.
pub fn eigenvector(m: &DenseMatrix, lambda: Complex64) -> Result<Vec<Complex64>> {
    let n = m.n();
    let scale = 1.0 + m.frobenius_norm();
    let mu = lambda + Complex64::new(1e-10 * scale, 1e-10 * scale);
    let mut lu: Vec<Complex64> = m
        .as_slice()
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    for i in 0..n {
        lu[i * n + i] -= mu;
    }
    let perm = lu_factor(&mut lu, n);
    let mut v = vec![Complex64::new(1.0, 0.0); n];
    for _ in 0..3 {
        v = lu_solve(&lu, &perm, n, &v);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::NoConvergence { row: 0 });
        }
        v.iter_mut().for_each(|z| *z /= norm);
    }
    Ok(v)
}

/// `||M v - lambda v||_2 / ||v||_2`.
pub fn eigen_residual(m: &DenseMatrix, lambda: Complex64, v: &[Complex64]) -> f64 {
    let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let res: f64 = m
        .rows()
        .zip(v)
        .map(|(row, vi)| {
            let mv: Complex64 = row.iter().zip(v).map(|(&a, z)| z * a).sum();
            (mv - lambda * vi).norm_sqr()
        })
        .sum();
    res.sqrt() / vnorm
}

fn lu_factor(a: &mut [Complex64], n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i * n + k].norm().total_cmp(&a[j * n + k].norm()))
            .unwrap();
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            perm.swap(k, p);
        }
        let mut piv = a[k * n + k];
        if piv.norm() == 0.0 {
            piv = Complex64::new(f64::EPSILON, 0.0);
            a[k * n + k] = piv;
        }
        for i in k + 1..n {
            let f = a[i * n + k] / piv;
            a[i * n + k] = f;
            if f.norm() != 0.0 {
                for j in k + 1..n {
                    let t = a[k * n + j];
                    a[i * n + j] -= f * t;
                }
            }
        }
    }
    perm
}

fn lu_solve(lu: &[Complex64], perm: &[usize], n: usize, b: &[Complex64]) -> Vec<Complex64> {
    let mut x: Vec<Complex64> = perm.iter().map(|&p| b[p]).collect();
    for i in 0..n {
        for j in 0..i {
            let t = lu[i * n + j] * x[j];
            x[i] -= t;
        }
    }
    for i in (0..n).rev() {
        for j in i + 1..n {
            let t = lu[i * n + j] * x[j];
            x[i] -= t;
        }
        x[i] /= lu[i * n + i];
    }
    x
}

/// Mean and population variance of `|Re lambda_2(L*) - Re lambda_2(L)|`
/// over independent trials at one noise level.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AveVarReport {
    pub s: f64,
    pub trials: usize,
    pub ave: f64,
    pub var: f64,
}

/// Setup for a noise-sensitivity sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub n: usize,
    pub k: usize,
    pub beta: f64,
    pub trials: usize,
    pub seed: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

/// [`ave_var_sweep`] for a single noise level.
pub fn ave_var(
    s: f64,
    n: usize,
    k: usize,
    beta: f64,
    trials: usize,
    seed: u64,
) -> Result<AveVarReport> {
    let cfg = SweepConfig {
        n,
        k,
        beta,
        trials,
        seed,
        threads: None,
    };
    Ok(ave_var_sweep(&[s], &cfg)?[0])
}

/// Ave/Var of the second-smallest real part gap for each noise level.
///
/// Trial `t` uses seed [`trial_seed`]`(seed, t)` and regenerates the whole
/// instance. The structure, weights and noise draws of a trial do not
/// depend on `s`, so every noise level sees the same `L*` and the same
/// Gaussian matrix scaled by `s`. Trials may run in parallel; the reduction
/// runs in trial order so results do not depend on the thread count.
pub fn ave_var_sweep(s_list: &[f64], cfg: &SweepConfig) -> Result<Vec<AveVarReport>> {
    if cfg.trials == 0 {
        return Err(Error::InvalidParam("trials must be >= 1".into()));
    }
    for &s in s_list {
        SynthParams {
            n: cfg.n,
            k: cfg.k,
            beta: cfg.beta,
            s,
            seed: 0,
        }
        .validate()?;
    }
    if cfg.n > EIGEN_MAX_N {
        return Err(Error::SizeCap {
            what: "dense eigensolver",
            n: cfg.n,
            cap: EIGEN_MAX_N,
        });
    }

    let run_trial = |t: usize| -> Result<Vec<f64>> {
        let params = SynthParams {
            n: cfg.n,
            k: cfg.k,
            beta: cfg.beta,
            s: 0.0,
            seed: trial_seed(cfg.seed, t as u64),
        };
        let (edges, l_star, noise) = generate_with_noise(&params)?;
        let star = eigenvalues(&l_star)?.lambda2_real;
        s_list
            .iter()
            .map(|&s| {
                let a = perturb(&l_star, &noise, s)?;
                let l = nearest_laplacian(&a, &edges)?.laplacian;
                Ok((star - eigenvalues(&l)?.lambda2_real).abs())
            })
            .collect()
    };

    let gaps: Vec<Vec<f64>> = match cfg.threads {
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build()
                .map_err(|e| Error::InvalidParam(format!("thread pool: {e}")))?;
            pool.install(|| {
                (0..cfg.trials)
                    .into_par_iter()
                    .map(run_trial)
                    .collect::<Result<_>>()
            })?
        }
        None => (0..cfg.trials)
            .into_par_iter()
            .map(run_trial)
            .collect::<Result<_>>()?,
    };

    let t = cfg.trials as f64;
    Ok(s_list
        .iter()
        .enumerate()
        .map(|(si, &s)| {
            let ave = gaps.iter().map(|g| g[si]).sum::<f64>() / t;
            let var = gaps.iter().map(|g| (g[si] - ave).powi(2)).sum::<f64>() / t;
            AveVarReport {
                s,
                trials: cfg.trials,
                ave,
                var,
            }
        })
        .collect())
}
