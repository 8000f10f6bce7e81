//! Independent finite-difference solver: exact per-interval integration of
//! the derivative kernel against piecewise-linear-in-time `u` (an L1-type
//! scheme) and implicit central differences in space.

use crate::error::{Error, Result};
use crate::params::{DomainSpec, FracParams, SeriesControl};
use crate::solver::{same_nodes, FieldMeta, Method, ProblemSpec, SolutionField};
use crate::specfun::KernelAntiderivative;

/// Uniform grid with `t_n = n T / nt`, `n = 0..=nt`, and `x_i = i a / (nx + 1)`,
/// `i = 0..=nx + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdGrid {
    pub nt: usize,
    /// Number of interior spatial nodes.
    pub nx: usize,
    pub dt: f64,
    pub dx: f64,
    pub a: f64,
    pub t_max: f64,
}

impl FdGrid {
    pub fn new(nt: usize, nx: usize, d: &DomainSpec) -> Result<Self> {
        d.validate()?;
        if nt < 4 || nx < 4 {
            return Err(Error::InvalidParameter(format!(
                "grid needs nt, nx >= 4, got nt = {nt}, nx = {nx}"
            )));
        }
        Ok(Self {
            nt,
            nx,
            dt: d.t_max / nt as f64,
            dx: d.a / (nx + 1) as f64,
            a: d.a,
            t_max: d.t_max,
        })
    }

    /// The grid whose nodes are `t_nodes` (without `t = 0`) and `x_nodes`
    /// (walls included), if there is one.
    pub fn from_nodes(t_nodes: &[f64], x_nodes: &[f64], d: &DomainSpec) -> Result<Self> {
        let nt = t_nodes.len();
        let nx = x_nodes.len().saturating_sub(2);
        let t_max = *t_nodes
            .last()
            .ok_or_else(|| Error::GridMismatch("no t nodes".into()))?;
        let grid = Self::new(nt, nx, &DomainSpec { a: d.a, t_max })?;
        if !same_nodes(&grid.t_nodes(), t_nodes) || !same_nodes(&grid.x_nodes(), x_nodes) {
            return Err(Error::GridMismatch(
                "nodes are not a uniform grid starting at t = 0 and x = 0".into(),
            ));
        }
        Ok(grid)
    }

    pub fn t(&self, n: usize) -> f64 {
        self.t_max * n as f64 / self.nt as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.a * i as f64 / (self.nx + 1) as f64
    }

    /// `t_1, ..., t_nt`.
    pub fn t_nodes(&self) -> Vec<f64> {
        (1..=self.nt).map(|n| self.t(n)).collect()
    }

    /// `x_0, ..., x_(nx+1)`, walls included.
    pub fn x_nodes(&self) -> Vec<f64> {
        (0..=self.nx + 1).map(|i| self.x(i)).collect()
    }
}

/// Convolution weights `w[n][j] = W(t_n - t_j) - W(t_n - t_(j+1))`.
///
/// On a uniform grid the weight depends on `n - j` only, so the table stores
/// `b_m = W(t_(m+1)) - W(t_m)` and `w[n][j] = b_(n-1-j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTable {
    dt: f64,
    w_values: Vec<f64>,
    increments: Vec<f64>,
}

impl WeightTable {
    /// `w[n][j]` for `0 <= j < n`.
    pub fn weight(&self, n: usize, j: usize) -> f64 {
        self.increments[n - 1 - j]
    }

    /// `W(t_n)`.
    pub fn w_at(&self, n: usize) -> f64 {
        self.w_values[n]
    }

    pub fn row_sum(&self, n: usize) -> f64 {
        (0..n).map(|j| self.weight(n, j)).sum()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> usize {
        self.increments.len()
    }

    pub fn has_nonpositive(&self) -> bool {
        self.increments.iter().any(|&b| !(b > 0.0))
    }

    /// `sum_j w[n][j] (u_(j+1) - u_j) / dt` for one spatial node, where
    /// `history[j]` is `u` at `t_j`.
    pub fn apply(&self, n: usize, history: impl Fn(usize) -> f64) -> f64 {
        (0..n)
            .map(|j| self.weight(n, j) * (history(j + 1) - history(j)))
            .sum::<f64>()
            / self.dt
    }
}

pub fn build_weights(grid: &FdGrid, p: &FracParams, ctl: &SeriesControl) -> Result<WeightTable> {
    let w = KernelAntiderivative::new(p, ctl)?;
    let w_values = (0..=grid.nt)
        .map(|n| w.eval(grid.t(n)))
        .collect::<Result<Vec<_>>>()?;
    let increments = w_values.windows(2).map(|p| p[1] - p[0]).collect();
    Ok(WeightTable {
        dt: grid.dt,
        w_values,
        increments,
    })
}

/// Time-steps the problem on `grid`. The field carries the `t = 0` row in
/// [`SolutionField::initial`] and flags for non-positive weights and steps
/// where the system lost diagonal dominance.
pub fn fd_solve(ps: &ProblemSpec, grid: &FdGrid, ctl: &SeriesControl) -> Result<SolutionField> {
    ps.validate()?;
    let weights = build_weights(grid, &ps.params, ctl)?;
    let (nt, nx, dt) = (grid.nt, grid.nx, grid.dt);
    let xs = grid.x_nodes();
    let inv_dx2 = 1.0 / (grid.dx * grid.dx);
    let mut meta = FieldMeta {
        params: ps.params,
        domain: DomainSpec {
            a: grid.a,
            t_max: grid.t_max,
        },
        flags: Vec::new(),
    };
    if weights.has_nonpositive() {
        meta.flags.push("non-positive convolution weight".into());
    }

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(nt + 1);
    rows.push(xs.iter().map(|&x| ps.tau.eval(x)).collect());
    let c = weights.weight(1, 0) / dt;
    let (diag, off) = (c + 2.0 * inv_dx2, -inv_dx2);
    if !(diag.abs() >= 2.0 * off.abs()) {
        meta.flags.push("system not diagonally dominant".into());
    }
    let mut rhs = vec![0.0; nx];
    for n in 1..=nt {
        let t = grid.t(n);
        let (left, right) = (ps.phi0.eval(t), ps.phi1.eval(t));
        for (k, r) in rhs.iter_mut().enumerate() {
            let i = k + 1;
            let history: f64 = (0..n - 1)
                .map(|j| weights.weight(n, j) * (rows[j + 1][i] - rows[j][i]))
                .sum::<f64>()
                / dt;
            *r = ps.forcing.eval(t, xs[i]) + c * rows[n - 1][i] - history;
        }
        rhs[0] += left * inv_dx2;
        rhs[nx - 1] += right * inv_dx2;
        let interior = thomas(diag, off, &rhs).ok_or(Error::SingularSystem { step: n })?;
        let mut row = Vec::with_capacity(nx + 2);
        row.push(left);
        row.extend(interior);
        row.push(right);
        rows.push(row);
    }
    let initial = rows[0].clone();
    let values = rows[1..].concat();
    let mut field = SolutionField::new(grid.t_nodes(), xs, values, Method::Oracle, meta)?;
    field.initial = Some(initial);
    Ok(field)
}

/// Solves the constant-coefficient tridiagonal system `off u_(i-1) + diag u_i + off u_(i+1) = rhs_i`.
fn thomas(diag: f64, off: f64, rhs: &[f64]) -> Option<Vec<f64>> {
    let n = rhs.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut pivot = diag;
    for i in 0..n {
        if i > 0 {
            pivot = diag - off * c[i - 1];
        }
        if pivot == 0.0 || !pivot.is_finite() {
            return None;
        }
        c[i] = off / pivot;
        d[i] = (rhs[i] - if i > 0 { off * d[i - 1] } else { 0.0 }) / pivot;
    }
    for i in (0..n.saturating_sub(1)).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    d.iter().all(|v| v.is_finite()).then_some(d)
}

/// The discrete operator `D u - u_xx` at interior nodes, split into its parts.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualField {
    pub t_nodes: Vec<f64>,
    /// Interior nodes only.
    pub x_nodes: Vec<f64>,
    time: Vec<f64>,
    space: Vec<f64>,
}

impl ResidualField {
    /// `D u - u_xx` at `(t_nodes[i], x_nodes[j])`.
    pub fn value(&self, i: usize, j: usize) -> f64 {
        let k = i * self.x_nodes.len() + j;
        self.time[k] - self.space[k]
    }

    /// The discrete Prabhakar derivative `D u`.
    pub fn time_part(&self, i: usize, j: usize) -> f64 {
        self.time[i * self.x_nodes.len() + j]
    }

    /// The central second difference `u_xx`.
    pub fn space_part(&self, i: usize, j: usize) -> f64 {
        self.space[i * self.x_nodes.len() + j]
    }

    pub fn max_abs(&self) -> f64 {
        (0..self.t_nodes.len())
            .flat_map(|i| (0..self.x_nodes.len()).map(move |j| (i, j)))
            .fold(0.0f64, |m, (i, j)| m.max(self.value(i, j).abs()))
    }
}

/// Applies the discrete operator of [`fd_solve`] to a field sampled on the
/// grid nodes. The field must carry its `t = 0` row.
pub fn fd_apply_operator(
    field: &SolutionField,
    grid: &FdGrid,
    p: &FracParams,
    ctl: &SeriesControl,
) -> Result<ResidualField> {
    let xs = grid.x_nodes();
    if !same_nodes(&grid.t_nodes(), &field.t_nodes) || !same_nodes(&xs, &field.x_nodes) {
        return Err(Error::GridMismatch(
            "field is not sampled on the grid nodes".into(),
        ));
    }
    let initial = field
        .initial
        .as_ref()
        .ok_or_else(|| Error::GridMismatch("field lacks its t = 0 row".into()))?;
    let weights = build_weights(grid, p, ctl)?;
    let at = |n: usize, i: usize| {
        if n == 0 {
            initial[i]
        } else {
            field.value(n - 1, i)
        }
    };
    let inv_dx2 = 1.0 / (grid.dx * grid.dx);
    let (mut time, mut space) = (Vec::new(), Vec::new());
    for n in 1..=grid.nt {
        for i in 1..=grid.nx {
            time.push(weights.apply(n, |j| at(j, i)));
            space.push((at(n, i - 1) - 2.0 * at(n, i) + at(n, i + 1)) * inv_dx2);
        }
    }
    Ok(ResidualField {
        t_nodes: grid.t_nodes(),
        x_nodes: xs[1..=grid.nx].to_vec(),
        time,
        space,
    })
}
