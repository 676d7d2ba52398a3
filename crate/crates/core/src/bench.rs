//! Wall-clock scaling of [`nearest_laplacian`].

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::projection::nearest_laplacian;
use crate::synth::{generate_instance, SynthParams};

/// Instance parameters used for every benchmark size.
pub const BENCH_K: usize = 10;
pub const BENCH_BETA: f64 = 0.3;
pub const BENCH_S: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub n: usize,
    pub repeats: usize,
    pub median_seconds: f64,
    pub min_seconds: f64,
}

/// Outcome for one size: a record, or the error that stopped it.
pub type BenchOutcome = std::result::Result<BenchRecord, (usize, Error)>;

/// Times the projection for each size. Generation happens outside the timed
/// region. A failing size is reported and the remaining sizes still run.
pub fn bench_projection(sizes: &[usize], repeats: usize, seed: u64) -> Result<Vec<BenchOutcome>> {
    bench_projection_with(sizes, repeats, seed, |_| {})
}

/// Like [`bench_projection`], calling `on_result` as each size finishes.
pub fn bench_projection_with(
    sizes: &[usize],
    repeats: usize,
    seed: u64,
    mut on_result: impl FnMut(&BenchOutcome),
) -> Result<Vec<BenchOutcome>> {
    if repeats < 3 {
        return Err(Error::InvalidParam(format!(
            "repeats = {repeats}, need at least 3"
        )));
    }
    if sizes.is_empty() || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParam(
            "sizes must be non-empty and strictly ascending".into(),
        ));
    }
    let mut out = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let outcome = bench_one(n, repeats, seed).map_err(|e| (n, e));
        on_result(&outcome);
        out.push(outcome);
    }
    Ok(out)
}

fn bench_one(n: usize, repeats: usize, seed: u64) -> Result<BenchRecord> {
    let params = SynthParams {
        n,
        k: BENCH_K,
        beta: BENCH_BETA,
        s: BENCH_S,
        seed,
    };
    let inst = generate_instance(&params)?;
    let mut times = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let start = Instant::now();
        let result = nearest_laplacian(&inst.a, &inst.edges)?;
        let elapsed = start.elapsed().as_secs_f64();
        std::hint::black_box(&result);
        drop(result);
        times.push(elapsed.max(f64::MIN_POSITIVE));
    }
    times.sort_by(f64::total_cmp);
    let median = if repeats % 2 == 1 {
        times[repeats / 2]
    } else {
        0.5 * (times[repeats / 2 - 1] + times[repeats / 2])
    };
    Ok(BenchRecord {
        n,
        repeats,
        median_seconds: median,
        min_seconds: times[0],
    })
}

pub const BENCH_CSV_HEADER: &str = "n,repeats,median_seconds,min_seconds";

pub fn bench_csv_row(r: &BenchRecord) -> String {
    format!(
        "{},{},{:.6e},{:.6e}",
        r.n, r.repeats, r.median_seconds, r.min_seconds
    )
}

pub fn bench_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(BENCH_CSV_HEADER);
    out.push('\n');
    for r in records {
        writeln!(out, "{}", bench_csv_row(r)).unwrap();
    }
    out
}
