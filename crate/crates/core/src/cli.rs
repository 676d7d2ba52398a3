//! Command-line front end.
//!
//! Exit codes: 0 success, 1 semantic error (dimensions, caps, bad
//! parameters, unreadable files), 2 parse error, 3 numerical failure
//! (eigensolver non-convergence, simplex stopping early).
//!
//! Every command checks its inputs before creating any output file. Output
//! files depend only on the flags, so repeated runs are byte-identical.
//! The JSON run report printed on stdout also carries the wall time.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::bench::{bench_csv_row, bench_projection_with, BENCH_CSV_HEADER};
use crate::error::{Error, Result};
use crate::io::{format_f64, parse_edges, parse_matrix_csv, write_edges, write_matrix_csv};
use crate::lp::{solve_nearest_laplacian_lp, DEFAULT_MAX_ITERS};
use crate::matrix::{validate_laplacian, DenseMatrix, EdgeSet, DEFAULT_TOL_ABS, DEFAULT_TOL_REL};
use crate::projection::nearest_laplacian;
use crate::spectra::{ave_var_sweep, eigenvalues, SweepConfig};
use crate::synth::{generate_instance, SynthParams};

#[derive(Debug, Parser)]
#[command(
    name = "optlap",
    version,
    about = "Nearest graph Laplacian under a known edge structure"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Nearest Laplacian to a matrix for a given edge structure.
    Project(ProjectArgs),
    /// Write a synthetic instance (A.csv, Lstar.csv, edges.txt, params.json).
    Generate(GenerateArgs),
    /// Solve the same problem as a linear program (n <= 30).
    Oracle(OracleArgs),
    /// Eigenvalues as "re,im" CSV.
    Spectra(SpectraArgs),
    /// Statistical experiments.
    #[command(subcommand)]
    Experiment(Experiment),
    /// Time the projection over a range of sizes.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub beta: f64,
    #[arg(long)]
    pub s: f64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
    pub max_iters: usize,
}

#[derive(Debug, Args)]
pub struct SpectraArgs {
    /// One or more matrix files. With several, the CSV gains a leading
    /// `matrix` column holding each file stem.
    #[arg(long, required = true, num_args = 1..)]
    pub matrix: Vec<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Experiment {
    /// Mean and variance of the second-smallest real part gap per noise level.
    Table2(Table2Args),
}

#[derive(Debug, Args)]
pub struct Table2Args {
    #[arg(long, default_value_t = 300)]
    pub n: usize,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[arg(long, default_value_t = 0.3)]
    pub beta: f64,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,3,4,5")]
    pub s_list: Vec<f64>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

/// Summary of one invocation.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    /// SHA-256 of each input file, keyed by path.
    pub inputs: BTreeMap<String, String>,
    pub params: Value,
    pub summary: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_seconds: Option<f64>,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } => 2,
        Error::NoConvergence { .. } | Error::Simplex(_) => 3,
        Error::Dimension(_)
        | Error::NonFinite { .. }
        | Error::InvalidEdge(_)
        | Error::InvalidParam(_)
        | Error::SizeCap { .. }
        | Error::Io { .. } => 1,
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(report) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn execute(command: Command) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = match command {
        Command::Project(a) => cmd_project(&a),
        Command::Generate(a) => cmd_generate(&a),
        Command::Oracle(a) => cmd_oracle(&a),
        Command::Spectra(a) => cmd_spectra(&a),
        Command::Experiment(Experiment::Table2(a)) => cmd_table2(&a),
        Command::Bench(a) => cmd_bench(&a),
    }?;
    report.wall_seconds = Some(start.elapsed().as_secs_f64());
    Ok(report)
}

struct Input {
    text: String,
    digest: String,
}

fn read_input(path: &Path) -> Result<Input> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let digest = hex_digest(&bytes);
    let text =
        String::from_utf8(bytes).map_err(|_| Error::parse(Some(path), 1, "file is not UTF-8"))?;
    Ok(Input { text, digest })
}

fn hex_digest(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(64);
    for b in Sha256::digest(bytes) {
        write!(s, "{b:02x}").unwrap();
    }
    s
}

fn with_path(err: Error, path: &Path) -> Error {
    match err {
        Error::Parse {
            path: None,
            line,
            message,
        } => Error::Parse {
            path: Some(path.to_path_buf()),
            line,
            message,
        },
        other => other,
    }
}

fn load_matrix(path: &Path, inputs: &mut BTreeMap<String, String>) -> Result<DenseMatrix> {
    let input = read_input(path)?;
    inputs.insert(path.display().to_string(), input.digest);
    parse_matrix_csv(&input.text).map_err(|e| with_path(e, path))
}

fn load_edges(path: &Path, inputs: &mut BTreeMap<String, String>) -> Result<EdgeSet> {
    let input = read_input(path)?;
    inputs.insert(path.display().to_string(), input.digest);
    parse_edges(&input.text).map_err(|e| with_path(e, path))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn cmd_project(a: &ProjectArgs) -> Result<RunReport> {
    let mut inputs = BTreeMap::new();
    let m = load_matrix(&a.matrix, &mut inputs)?;
    let edges = load_edges(&a.edges, &mut inputs)?;
    let result = nearest_laplacian(&m, &edges)?;
    let check = validate_laplacian(&result.laplacian, &edges, DEFAULT_TOL_REL, DEFAULT_TOL_ABS)?;
    let summary = json!({
        "n": m.n(),
        "objective": result.objective,
        "relaxed_objective": result.relaxed_objective,
        "alpha": result.alpha,
        "check": check,
    });
    let report = RunReport {
        command: "project".into(),
        inputs,
        params: json!({ "matrix": a.matrix, "edges": a.edges, "out": a.out }),
        summary,
        wall_seconds: None,
    };
    write_matrix_csv(&result.laplacian, &a.out)?;
    if let Some(path) = &a.report {
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        write_file(path, &(text + "\n"))?;
    }
    Ok(report)
}

fn cmd_generate(a: &GenerateArgs) -> Result<RunReport> {
    let params = SynthParams {
        n: a.n,
        k: a.k,
        beta: a.beta,
        s: a.s,
        seed: a.seed,
    };
    params.validate()?;
    let inst = generate_instance(&params)?;
    let meta = json!({
        "params": params,
        "directed_edges": inst.edges.len(),
        "weights": "10 * uniform(0, 1), independent per direction",
        "noise": "s * standard normal, all n^2 entries",
        "rng": "chacha8 + ratio-of-uniforms normals",
        "draw_order": ["rewiring", "weights (row-major edge order)", "noise (row-major)"],
    });
    fs::create_dir_all(&a.out_dir).map_err(|e| Error::io(&a.out_dir, e))?;
    write_matrix_csv(&inst.a, a.out_dir.join("A.csv"))?;
    write_matrix_csv(&inst.l_star, a.out_dir.join("Lstar.csv"))?;
    write_edges(&inst.edges, a.out_dir.join("edges.txt"))?;
    let text = serde_json::to_string_pretty(&meta).expect("params serialize");
    write_file(&a.out_dir.join("params.json"), &(text + "\n"))?;
    Ok(RunReport {
        command: "generate".into(),
        inputs: BTreeMap::new(),
        params: serde_json::to_value(params).expect("params serialize"),
        summary: json!({
            "out_dir": a.out_dir,
            "directed_edges": inst.edges.len(),
            "l1_distance_a_lstar": crate::projection::l1_distance(&inst.a, &inst.l_star)?,
        }),
        wall_seconds: None,
    })
}

fn cmd_oracle(a: &OracleArgs) -> Result<RunReport> {
    let mut inputs = BTreeMap::new();
    let m = load_matrix(&a.matrix, &mut inputs)?;
    let edges = load_edges(&a.edges, &mut inputs)?;
    let (problem, sol) = solve_nearest_laplacian_lp(&m, &edges, a.max_iters)?;
    let l = problem.laplacian_from(&sol.variable_values)?;
    let check = validate_laplacian(&l, &edges, 1e-7, 1e-8)?;
    Ok(RunReport {
        command: "oracle".into(),
        inputs,
        params: json!({ "max_iters": a.max_iters }),
        summary: json!({
            "optimum": sol.objective_value,
            "pivots": sol.pivots,
            "variables": problem.lp.num_vars,
            "check": check,
        }),
        wall_seconds: None,
    })
}

fn cmd_spectra(a: &SpectraArgs) -> Result<RunReport> {
    let mut inputs = BTreeMap::new();
    let mut matrices = Vec::new();
    for path in &a.matrix {
        matrices.push((path, load_matrix(path, &mut inputs)?));
    }
    let labelled = matrices.len() > 1;
    let mut csv = String::from(if labelled {
        "matrix,re,im\n"
    } else {
        "re,im\n"
    });
    let mut lambda2 = BTreeMap::new();
    for (path, m) in &matrices {
        let spec = eigenvalues(m)?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        for ev in &spec.eigenvalues {
            if labelled {
                write!(csv, "{label},").unwrap();
            }
            writeln!(csv, "{},{}", format_f64(ev.re), format_f64(ev.im)).unwrap();
        }
        lambda2.insert(path.display().to_string(), spec.lambda2_real);
    }
    write_file(&a.out, &csv)?;
    Ok(RunReport {
        command: "spectra".into(),
        inputs,
        params: json!({ "out": a.out }),
        summary: json!({ "lambda2_real": lambda2 }),
        wall_seconds: None,
    })
}

/// CSV `s,trials,ave,var`, one row per noise level.
pub fn table2_csv(rows: &[crate::spectra::AveVarReport]) -> String {
    let mut csv = String::from("s,trials,ave,var\n");
    for r in rows {
        writeln!(
            csv,
            "{},{},{},{}",
            r.s,
            r.trials,
            format_f64(r.ave),
            format_f64(r.var)
        )
        .unwrap();
    }
    csv
}

fn cmd_table2(a: &Table2Args) -> Result<RunReport> {
    if a.s_list.is_empty() {
        return Err(Error::InvalidParam("empty --s-list".into()));
    }
    let cfg = SweepConfig {
        n: a.n,
        k: a.k,
        beta: a.beta,
        trials: a.trials,
        seed: a.seed,
        threads: a.threads,
    };
    let rows = ave_var_sweep(&a.s_list, &cfg)?;
    write_file(&a.out, &table2_csv(&rows))?;
    Ok(RunReport {
        command: "experiment table2".into(),
        inputs: BTreeMap::new(),
        params: json!({
            "n": a.n, "k": a.k, "beta": a.beta, "trials": a.trials,
            "s_list": a.s_list, "seed": a.seed,
            "trial_instances": "regenerated per trial; seeds shared across noise levels",
        }),
        summary: serde_json::to_value(&rows).expect("rows serialize"),
        wall_seconds: None,
    })
}

fn cmd_bench(a: &BenchArgs) -> Result<RunReport> {
    if a.repeats < 3 {
        return Err(Error::InvalidParam(format!(
            "repeats = {}, need at least 3",
            a.repeats
        )));
    }
    if a.sizes.is_empty() || a.sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParam(
            "sizes must be non-empty and strictly ascending".into(),
        ));
    }
    let mut file = fs::File::create(&a.out).map_err(|e| Error::io(&a.out, e))?;
    writeln!(file, "{BENCH_CSV_HEADER}").map_err(|e| Error::io(&a.out, e))?;
    let mut io_err = None;
    let outcomes = bench_projection_with(&a.sizes, a.repeats, a.seed, |outcome| match outcome {
        Ok(rec) => {
            if let Err(e) = writeln!(file, "{}", bench_csv_row(rec)).and_then(|_| file.flush()) {
                io_err.get_or_insert(e);
            }
        }
        Err((n, e)) => eprintln!("bench n = {n} failed: {e}"),
    })?;
    if let Some(e) = io_err {
        return Err(Error::io(&a.out, e));
    }
    let summary: Vec<Value> = outcomes
        .iter()
        .map(|o| match o {
            Ok(r) => serde_json::to_value(r).expect("record serializes"),
            Err((n, e)) => json!({ "n": n, "error": e.to_string() }),
        })
        .collect();
    Ok(RunReport {
        command: "bench".into(),
        inputs: BTreeMap::new(),
        params: json!({ "sizes": a.sizes, "repeats": a.repeats, "seed": a.seed }),
        summary: Value::Array(summary),
        wall_seconds: None,
    })
}
