//! Linear-programming oracle for the nearest-Laplacian problem.
//!
//! The 1-norm objective is linearised with one auxiliary variable per free
//! entry, and the result is solved with a small dense two-phase simplex
//! using Bland's rule. This path is meant for certification on small
//! instances only: [`ORACLE_MAX_N`] caps the node count.

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, EdgeSet};

/// Largest node count accepted by [`build_problem1_lp`].
pub const ORACLE_MAX_N: usize = 30;

/// Default pivot budget for [`oracle_optimum`].
pub const DEFAULT_MAX_ITERS: usize = 200_000;

/// Coefficients below this magnitude are treated as zero when pivoting.
pub const PIVOT_TOL: f64 = 1e-11;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bound {
    pub lower: f64,
    pub upper: f64,
}

impl Bound {
    pub const FREE: Bound = Bound {
        lower: f64::NEG_INFINITY,
        upper: f64::INFINITY,
    };
    pub const NON_NEGATIVE: Bound = Bound {
        lower: 0.0,
        upper: f64::INFINITY,
    };
    pub const NON_POSITIVE: Bound = Bound {
        lower: f64::NEG_INFINITY,
        upper: 0.0,
    };
}

/// `coeffs . x (= or <=) rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearRow {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

/// `minimize c . x + offset` subject to equality rows, `<=` rows and
/// per-variable bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct LpProblem {
    pub num_vars: usize,
    pub objective_coeffs: Vec<f64>,
    pub objective_offset: f64,
    pub equality_rows: Vec<LinearRow>,
    pub inequality_rows: Vec<LinearRow>,
    pub variable_bounds: Vec<Bound>,
}

impl LpProblem {
    pub fn new(num_vars: usize) -> Self {
        LpProblem {
            num_vars,
            objective_coeffs: vec![0.0; num_vars],
            objective_offset: 0.0,
            equality_rows: Vec::new(),
            inequality_rows: Vec::new(),
            variable_bounds: vec![Bound::NON_NEGATIVE; num_vars],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParam(msg));
        if self.objective_coeffs.len() != self.num_vars {
            return bad(format!(
                "objective has {} coefficients, expected {}",
                self.objective_coeffs.len(),
                self.num_vars
            ));
        }
        if self.variable_bounds.len() != self.num_vars {
            return bad(format!(
                "{} bounds for {} variables",
                self.variable_bounds.len(),
                self.num_vars
            ));
        }
        for (k, row) in self
            .equality_rows
            .iter()
            .chain(&self.inequality_rows)
            .enumerate()
        {
            if row.coeffs.len() != self.num_vars {
                return bad(format!(
                    "constraint {k} has {} coefficients",
                    row.coeffs.len()
                ));
            }
            if !row.rhs.is_finite() || row.coeffs.iter().any(|c| !c.is_finite()) {
                return bad(format!("constraint {k} has a non-finite value"));
            }
        }
        if self.objective_coeffs.iter().any(|c| !c.is_finite())
            || !self.objective_offset.is_finite()
        {
            return bad("non-finite objective".into());
        }
        for (k, b) in self.variable_bounds.iter().enumerate() {
            if b.lower.is_nan()
                || b.upper.is_nan()
                || b.lower > b.upper
                || b.lower == f64::INFINITY
                || b.upper == f64::NEG_INFINITY
            {
                return bad(format!(
                    "variable {k} has invalid bounds [{}, {}]",
                    b.lower, b.upper
                ));
            }
        }
        Ok(())
    }

    pub fn objective_at(&self, x: &[f64]) -> f64 {
        self.objective_offset + dot(&self.objective_coeffs, x)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective including the offset, evaluated at `variable_values`.
    pub objective_value: f64,
    pub variable_values: Vec<f64>,
    pub pivots: usize,
}

/// How an original variable maps onto non-negative tableau columns.
#[derive(Clone, Copy, Debug)]
enum VarMap {
    /// `x = offset + sign * y`
    Shifted { col: usize, offset: f64, sign: f64 },
    /// `x = y_plus - y_minus`
    Split { plus: usize, minus: usize },
}

struct Tableau {
    rows: usize,
    /// Number of variable columns; column `width` holds the right-hand side.
    width: usize,
    /// `(rows + 1) x (width + 1)`, the last row is the reduced-cost row.
    data: Vec<f64>,
    basis: Vec<usize>,
    /// Columns at or beyond this index are artificial.
    first_artificial: usize,
}

impl Tableau {
    #[inline]
    fn stride(&self) -> usize {
        self.width + 1
    }

    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.stride() + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.width)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let stride = self.stride();
        let p = self.at(r, c);
        let (before, rest) = self.data.split_at_mut(r * stride);
        let (prow, after) = rest.split_at_mut(stride);
        for v in prow.iter_mut() {
            *v /= p;
        }
        prow[c] = 1.0;
        for row in before
            .chunks_exact_mut(stride)
            .chain(after.chunks_exact_mut(stride))
        {
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(prow.iter()) {
                    *v -= f * pv;
                }
                row[c] = 0.0;
            }
        }
        self.basis[r] = c;
    }

    /// Bland's rule: lowest-index improving column, then the lowest-index
    /// basic variable among the tied minimum ratios.
    fn choose_pivot(&self, allow_artificial: bool) -> PivotChoice {
        let cost = self.rows;
        let limit = if allow_artificial {
            self.width
        } else {
            self.first_artificial
        };
        let Some(c) = (0..limit).find(|&j| self.at(cost, j) < -PIVOT_TOL) else {
            return PivotChoice::Optimal;
        };
        let mut best: Option<(usize, f64)> = None;
        for r in 0..self.rows {
            let a = self.at(r, c);
            if a <= PIVOT_TOL {
                continue;
            }
            let ratio = self.rhs(r).max(0.0) / a;
            best = match best {
                None => Some((r, ratio)),
                Some((br, bratio)) => {
                    let tie = (ratio - bratio).abs() <= 1e-12 * (1.0 + bratio.abs());
                    if ratio < bratio && !tie || tie && self.basis[r] < self.basis[br] {
                        Some((r, ratio))
                    } else {
                        Some((br, bratio))
                    }
                }
            };
        }
        match best {
            Some((r, _)) => PivotChoice::Pivot(r, c),
            None => PivotChoice::Unbounded,
        }
    }

    fn set_cost_row(&mut self, costs: &[f64]) {
        let stride = self.stride();
        let cost_start = self.rows * stride;
        let mut z = vec![0.0; stride];
        z[..costs.len()].copy_from_slice(costs);
        for r in 0..self.rows {
            let cb = costs.get(self.basis[r]).copied().unwrap_or(0.0);
            if cb != 0.0 {
                let row = &self.data[r * stride..(r + 1) * stride];
                for (zv, v) in z.iter_mut().zip(row) {
                    *zv -= cb * v;
                }
            }
        }
        self.data[cost_start..cost_start + stride].copy_from_slice(&z);
    }

    /// Runs pivots until optimal, unbounded or out of budget.
    fn run(&mut self, allow_artificial: bool, pivots: &mut usize, max_iters: usize) -> LpStatus {
        loop {
            match self.choose_pivot(allow_artificial) {
                PivotChoice::Optimal => return LpStatus::Optimal,
                PivotChoice::Unbounded => return LpStatus::Unbounded,
                PivotChoice::Pivot(r, c) => {
                    if *pivots >= max_iters {
                        return LpStatus::IterationLimit;
                    }
                    self.pivot(r, c);
                    *pivots += 1;
                }
            }
        }
    }

    fn column_values(&self) -> Vec<f64> {
        let mut y = vec![0.0; self.width];
        for (r, &b) in self.basis.iter().enumerate() {
            y[b] = self.rhs(r);
        }
        y
    }
}

enum PivotChoice {
    Optimal,
    Unbounded,
    Pivot(usize, usize),
}

/// Solves `p` with a two-phase dense simplex and Bland's rule.
///
/// Variables are shifted, reflected or split so every tableau column is
/// non-negative, and finite upper bounds become explicit rows. `max_iters`
/// bounds the total number of pivots over both phases. The result is
/// deterministic for identical input.
pub fn simplex_solve(p: &LpProblem, max_iters: usize) -> Result<LpSolution> {
    p.validate()?;

    let mut maps = Vec::with_capacity(p.num_vars);
    let mut ncols = 0usize;
    let mut upper_rows: Vec<(usize, f64)> = Vec::new();
    for b in &p.variable_bounds {
        let map = match (b.lower.is_finite(), b.upper.is_finite()) {
            (true, upper_finite) => {
                if upper_finite {
                    upper_rows.push((ncols, b.upper - b.lower));
                }
                VarMap::Shifted {
                    col: ncols,
                    offset: b.lower,
                    sign: 1.0,
                }
            }
            (false, true) => VarMap::Shifted {
                col: ncols,
                offset: b.upper,
                sign: -1.0,
            },
            (false, false) => {
                ncols += 1;
                VarMap::Split {
                    plus: ncols - 1,
                    minus: ncols,
                }
            }
        };
        ncols += 1;
        maps.push(map);
    }
    let structural = ncols;

    // Rows over the structural columns, right-hand side adjusted for shifts.
    let transform = |row: &LinearRow| -> (Vec<f64>, f64) {
        let mut coeffs = vec![0.0; structural];
        let mut rhs = row.rhs;
        for (k, &a) in row.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            match maps[k] {
                VarMap::Shifted { col, offset, sign } => {
                    coeffs[col] += sign * a;
                    rhs -= a * offset;
                }
                VarMap::Split { plus, minus } => {
                    coeffs[plus] += a;
                    coeffs[minus] -= a;
                }
            }
        }
        (coeffs, rhs)
    };

    // (coeffs, rhs, has_slack)
    let mut rows: Vec<(Vec<f64>, f64, bool)> = Vec::new();
    for row in &p.equality_rows {
        let (c, r) = transform(row);
        rows.push((c, r, false));
    }
    for row in &p.inequality_rows {
        let (c, r) = transform(row);
        rows.push((c, r, true));
    }
    for &(col, ub) in &upper_rows {
        let mut c = vec![0.0; structural];
        c[col] = 1.0;
        rows.push((c, ub, true));
    }

    let m = rows.len();
    let num_slack = rows.iter().filter(|r| r.2).count();
    let needs_artificial: Vec<bool> = rows
        .iter()
        .map(|(_, rhs, slack)| !*slack || *rhs < 0.0)
        .collect();
    let num_art = needs_artificial.iter().filter(|&&a| a).count();
    let first_artificial = structural + num_slack;
    let width = first_artificial + num_art;

    let mut tab = Tableau {
        rows: m,
        width,
        data: vec![0.0; (m + 1) * (width + 1)],
        basis: vec![0; m],
        first_artificial,
    };
    let stride = width + 1;
    let mut slack_col = structural;
    let mut art_col = first_artificial;
    for (r, (coeffs, rhs, has_slack)) in rows.into_iter().enumerate() {
        let sign = if rhs < 0.0 { -1.0 } else { 1.0 };
        let row = &mut tab.data[r * stride..(r + 1) * stride];
        for (dst, c) in row.iter_mut().zip(&coeffs) {
            *dst = sign * c;
        }
        row[width] = sign * rhs;
        if has_slack {
            row[slack_col] = sign;
            if !needs_artificial[r] {
                tab.basis[r] = slack_col;
            }
            slack_col += 1;
        }
        if needs_artificial[r] {
            row[art_col] = 1.0;
            tab.basis[r] = art_col;
            art_col += 1;
        }
    }

    let mut std_costs = vec![0.0; structural];
    for (k, &c) in p.objective_coeffs.iter().enumerate() {
        match maps[k] {
            VarMap::Shifted { col, sign, .. } => std_costs[col] += sign * c,
            VarMap::Split { plus, minus } => {
                std_costs[plus] += c;
                std_costs[minus] -= c;
            }
        }
    }
    let recover = |tab: &Tableau| -> Vec<f64> {
        let y = tab.column_values();
        maps.iter()
            .map(|m| match *m {
                VarMap::Shifted { col, offset, sign } => offset + sign * y[col],
                VarMap::Split { plus, minus } => y[plus] - y[minus],
            })
            .collect()
    };
    let finish = |status: LpStatus, tab: &Tableau, pivots: usize| -> LpSolution {
        let x = recover(tab);
        LpSolution {
            status,
            objective_value: p.objective_at(&x),
            variable_values: x,
            pivots,
        }
    };

    let mut pivots = 0usize;

    // Phase 1: minimise the sum of artificials.
    if num_art > 0 {
        let mut phase1 = vec![0.0; width];
        for v in &mut phase1[first_artificial..] {
            *v = 1.0;
        }
        tab.set_cost_row(&phase1);
        let status = tab.run(true, &mut pivots, max_iters);
        if status == LpStatus::IterationLimit {
            return Ok(finish(status, &tab, pivots));
        }
        let infeasibility: f64 = (0..m)
            .filter(|&r| tab.basis[r] >= first_artificial)
            .map(|r| tab.rhs(r))
            .sum();
        let scale = 1.0 + (0..m).map(|r| tab.rhs(r).abs()).fold(0.0, f64::max);
        if infeasibility > 1e-9 * scale {
            return Ok(finish(LpStatus::Infeasible, &tab, pivots));
        }
        // Drive remaining artificials out of the basis; rows where that is
        // impossible are redundant and keep a zero artificial.
        for r in 0..m {
            if tab.basis[r] < first_artificial {
                continue;
            }
            if let Some(c) = (0..first_artificial).find(|&j| tab.at(r, j).abs() > PIVOT_TOL) {
                tab.pivot(r, c);
                pivots += 1;
            }
        }
    }

    // Phase 2.
    tab.set_cost_row(&std_costs);
    let status = tab.run(false, &mut pivots, max_iters);
    Ok(finish(status, &tab, pivots))
}

/// The linear program for the nearest-Laplacian problem, together with the
/// matrix position of every `L` variable.
#[derive(Clone, Debug)]
pub struct NearestLaplacianLp {
    pub n: usize,
    pub lp: LpProblem,
    /// `positions[k]` is the matrix entry of variable `k`. The auxiliary
    /// variable for position `k` is `positions.len() + k`.
    pub positions: Vec<(usize, usize)>,
}

impl NearestLaplacianLp {
    pub fn num_laplacian_vars(&self) -> usize {
        self.positions.len()
    }

    /// Rebuilds the matrix `L` from a solution vector.
    pub fn laplacian_from(&self, values: &[f64]) -> Result<DenseMatrix> {
        let mut data = vec![0.0; self.n * self.n];
        for (k, &(i, j)) in self.positions.iter().enumerate() {
            data[i * self.n + j] = values[k];
        }
        DenseMatrix::from_row_major(self.n, data)
    }
}

/// Builds `min ||A - L||_1` over graph Laplacians supported on `edges`.
///
/// Variables, in row-major order of their matrix positions: one `L_ii >= 0`
/// per node and one `L_ij <= 0` per edge, then one `t >= 0` per such
/// position with `t >= A - L` and `t >= L - A`. Off-diagonal positions
/// outside `edges` are fixed at zero and only add `|A_ij|` to the objective
/// offset. One equality row per node forces a zero row sum.
pub fn build_problem1_lp(a: &DenseMatrix, edges: &EdgeSet) -> Result<NearestLaplacianLp> {
    let n = a.n();
    if n != edges.n() {
        return Err(Error::Dimension(format!(
            "matrix has n = {n}, edge set has n = {}",
            edges.n()
        )));
    }
    if n > ORACLE_MAX_N {
        return Err(Error::SizeCap {
            what: "LP oracle",
            n,
            cap: ORACLE_MAX_N,
        });
    }

    let mut positions = Vec::new();
    let mut offset = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j || edges.contains(i, j) {
                positions.push((i, j));
            } else {
                offset += a.get(i, j).abs();
            }
        }
    }
    let np = positions.len();
    let num_vars = 2 * np;
    let mut lp = LpProblem::new(num_vars);
    lp.objective_offset = offset;
    for (k, &(i, j)) in positions.iter().enumerate() {
        lp.variable_bounds[k] = if i == j {
            Bound::NON_NEGATIVE
        } else {
            Bound::NON_POSITIVE
        };
        lp.variable_bounds[np + k] = Bound::NON_NEGATIVE;
        lp.objective_coeffs[np + k] = 1.0;

        let a_ij = a.get(i, j);
        let mut upper = vec![0.0; num_vars];
        upper[k] = 1.0;
        upper[np + k] = -1.0;
        lp.inequality_rows.push(LinearRow {
            coeffs: upper,
            rhs: a_ij,
        });
        let mut lower = vec![0.0; num_vars];
        lower[k] = -1.0;
        lower[np + k] = -1.0;
        lp.inequality_rows.push(LinearRow {
            coeffs: lower,
            rhs: -a_ij,
        });
    }
    for i in 0..n {
        let mut coeffs = vec![0.0; num_vars];
        for (k, &(pi, _)) in positions.iter().enumerate() {
            if pi == i {
                coeffs[k] = 1.0;
            }
        }
        lp.equality_rows.push(LinearRow { coeffs, rhs: 0.0 });
    }
    Ok(NearestLaplacianLp { n, lp, positions })
}

/// Solves the nearest-Laplacian LP and returns it with its solution.
pub fn solve_nearest_laplacian_lp(
    a: &DenseMatrix,
    edges: &EdgeSet,
    max_iters: usize,
) -> Result<(NearestLaplacianLp, LpSolution)> {
    let problem = build_problem1_lp(a, edges)?;
    let sol = simplex_solve(&problem.lp, max_iters)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Simplex(format!(
            "{:?} after {} pivots",
            sol.status, sol.pivots
        )));
    }
    Ok((problem, sol))
}

/// Optimal value of the nearest-Laplacian LP.
pub fn oracle_optimum(a: &DenseMatrix, edges: &EdgeSet) -> Result<f64> {
    oracle_optimum_with(a, edges, DEFAULT_MAX_ITERS)
}

pub fn oracle_optimum_with(a: &DenseMatrix, edges: &EdgeSet, max_iters: usize) -> Result<f64> {
    solve_nearest_laplacian_lp(a, edges, max_iters).map(|(_, sol)| sol.objective_value)
}
