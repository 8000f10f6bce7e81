//! Assembly of the solution `u = y + z`: the boundary and forcing part `y`
//! and the initial-data part `z`, with a posteriori checks of the result.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::greens::{decay_reach, Kernels, Side, TimeSlice, INTEGRATION_LEVEL};
use crate::oracle::{fd_apply_operator, FdGrid};
use crate::params::{DomainSpec, FracParams, SeriesControl};
use crate::quadrature::{graded_rule, GaussLegendre, QuadratureSpec};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type FieldFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Agreement demanded between a time integral and the same integral on a
/// mesh with half as many panels, relative to the integral of `|integrand|`.
pub const TIME_RULE_TOL: f64 = 1e-5;
/// Absolute accuracy of the kernel profiles relative to their unit scale,
/// limited by cancellation in the power series at large scaled distance.
const PROFILE_NOISE: f64 = 1e-6;

/// Chebyshev nodes per piece of a tabulated profile.
const CHEB: usize = 16;
/// Length of one tabulation piece in units of the profile width.
const PIECE: f64 = 1.0;
/// Widest spatial panel in units of the profile width.
const PANEL_WIDTHS: f64 = 2.0;

/// Data depending on one variable. `Zero` lets the solver skip a term.
#[derive(Clone, Default)]
pub enum ScalarData {
    #[default]
    Zero,
    Func(ScalarFn),
}

impl ScalarData {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        ScalarData::Func(Arc::new(f))
    }

    pub fn eval(&self, s: f64) -> f64 {
        match self {
            ScalarData::Zero => 0.0,
            ScalarData::Func(f) => f(s),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ScalarData::Zero)
    }
}

impl fmt::Debug for ScalarData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_zero() { "Zero" } else { "Func" })
    }
}

/// Data depending on `(t, x)`.
#[derive(Clone, Default)]
pub enum FieldData {
    #[default]
    Zero,
    Func(FieldFn),
}

impl FieldData {
    pub fn new(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        FieldData::Func(Arc::new(f))
    }

    pub fn eval(&self, t: f64, x: f64) -> f64 {
        match self {
            FieldData::Zero => 0.0,
            FieldData::Func(f) => f(t, x),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, FieldData::Zero)
    }
}

impl fmt::Debug for FieldData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_zero() { "Zero" } else { "Func" })
    }
}

/// Domain, parameters and data of one initial-boundary value problem.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub domain: DomainSpec,
    pub params: FracParams,
    /// `u(t, 0)`.
    pub phi0: ScalarData,
    /// `u(t, a)`.
    pub phi1: ScalarData,
    /// `u(0, x)`.
    pub tau: ScalarData,
    pub forcing: FieldData,
}

impl ProblemSpec {
    /// A problem with all data zero.
    pub fn new(domain: DomainSpec, params: FracParams) -> Self {
        Self {
            domain,
            params,
            phi0: ScalarData::Zero,
            phi1: ScalarData::Zero,
            tau: ScalarData::Zero,
            forcing: FieldData::Zero,
        }
    }

    pub fn with_phi0(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.phi0 = ScalarData::new(f);
        self
    }

    pub fn with_phi1(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.phi1 = ScalarData::new(f);
        self
    }

    pub fn with_tau(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.tau = ScalarData::new(f);
        self
    }

    pub fn with_forcing(mut self, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.forcing = FieldData::new(f);
        self
    }

    /// Checks the compatibility conditions `phi0(0) = tau(0)`, `phi1(0) = tau(a)`
    /// and spot-checks that `t^(1 - beta) f` stays bounded as `t -> 0`.
    pub fn validate(&self) -> Result<()> {
        self.validate_forcing()?;
        let a = self.domain.a;
        for (name, phi, x) in [
            ("phi0(0) = tau(0)", &self.phi0, 0.0),
            ("phi1(0) = tau(a)", &self.phi1, a),
        ] {
            let (lhs, rhs) = (phi.eval(0.0), self.tau.eval(x));
            if !lhs.is_finite() || !rhs.is_finite() || (lhs - rhs).abs() > 1e-12 {
                return Err(Error::InvalidParameter(format!(
                    "compatibility {name} violated: {lhs} vs {rhs}"
                )));
            }
        }
        Ok(())
    }

    /// The checks that do not involve the compatibility conditions, which
    /// tie the parts `y` and `z` together.
    fn validate_forcing(&self) -> Result<()> {
        self.domain.validate()?;
        let a = self.domain.a;
        if !self.forcing.is_zero() {
            let scaled = |t: f64| {
                (1..8)
                    .map(|i| {
                        let x = a * i as f64 / 8.0;
                        t.powf(1.0 - self.params.beta()) * self.forcing.eval(t, x).abs()
                    })
                    .fold(0.0, f64::max)
            };
            let near = scaled(1e-8);
            let far = scaled(1e-4).max(scaled(1e-2));
            if !near.is_finite() || !far.is_finite() || near > 10.0 * far + 1e-300 {
                return Err(Error::InvalidParameter(format!(
                    "t^(1 - beta) f does not look bounded near t = 0 ({near:e} at t = 1e-8, {far:e} further out)"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Greens,
    Oracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Greens => "greens",
            Method::Oracle => "oracle",
        })
    }
}

/// Parameters a field was computed with, plus any warnings raised on the way.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldMeta {
    pub params: FracParams,
    pub domain: DomainSpec,
    pub flags: Vec<String>,
}

/// `u` on a tensor grid, stored t-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionField {
    pub t_nodes: Vec<f64>,
    pub x_nodes: Vec<f64>,
    pub values: Vec<f64>,
    pub method: Method,
    pub meta: FieldMeta,
    /// Values at `t = 0` on `x_nodes`, when the method produces them.
    pub initial: Option<Vec<f64>>,
}

/// Largest pointwise discrepancy between two fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldDiff {
    pub max_abs: f64,
    /// `max_abs` divided by the largest magnitude of the reference field.
    pub max_rel: f64,
}

impl SolutionField {
    pub fn new(
        t_nodes: Vec<f64>,
        x_nodes: Vec<f64>,
        values: Vec<f64>,
        method: Method,
        meta: FieldMeta,
    ) -> Result<Self> {
        if values.len() != t_nodes.len() * x_nodes.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a {} x {} grid",
                values.len(),
                t_nodes.len(),
                x_nodes.len()
            )));
        }
        check_sorted("t", &t_nodes)?;
        check_sorted("x", &x_nodes)?;
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            let (i, j) = (k / x_nodes.len(), k % x_nodes.len());
            return Err(
                Error::Domain("non-finite value in field".into()).at(t_nodes[i], Some(x_nodes[j]))
            );
        }
        Ok(Self {
            t_nodes,
            x_nodes,
            values,
            method,
            meta,
            initial: None,
        })
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.x_nodes.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.x_nodes.len();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Discrepancy of `other` from `self`, which serves as the reference.
    pub fn compare(&self, other: &SolutionField) -> Result<FieldDiff> {
        if !same_nodes(&self.t_nodes, &other.t_nodes) || !same_nodes(&self.x_nodes, &other.x_nodes)
        {
            return Err(Error::GridMismatch("fields live on different nodes".into()));
        }
        let max_abs = self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        let scale = self.max_abs();
        Ok(FieldDiff {
            max_abs,
            max_rel: if scale > 0.0 {
                max_abs / scale
            } else {
                max_abs
            },
        })
    }

    /// Restriction to a subset of the nodes.
    pub fn restrict(&self, t_nodes: &[f64], x_nodes: &[f64]) -> Result<SolutionField> {
        let ti = locate(&self.t_nodes, t_nodes, "t")?;
        let xi = locate(&self.x_nodes, x_nodes, "x")?;
        let values = ti
            .iter()
            .flat_map(|&i| xi.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.value(i, j))
            .collect();
        Ok(SolutionField {
            t_nodes: ti.iter().map(|&i| self.t_nodes[i]).collect(),
            x_nodes: xi.iter().map(|&j| self.x_nodes[j]).collect(),
            values,
            method: self.method,
            meta: self.meta.clone(),
            initial: self
                .initial
                .as_ref()
                .map(|row| xi.iter().map(|&j| row[j]).collect()),
        })
    }
}

fn node_tol(v: f64) -> f64 {
    1e-9 * v.abs().max(1.0)
}

pub(crate) fn same_nodes(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(u, v)| (u - v).abs() <= node_tol(*u))
}

fn locate(have: &[f64], want: &[f64], name: &str) -> Result<Vec<usize>> {
    want.iter()
        .map(|w| {
            have.iter()
                .position(|h| (h - w).abs() <= node_tol(*w))
                .ok_or_else(|| {
                    Error::GridMismatch(format!("{name} = {w} is not a node of the field"))
                })
        })
        .collect()
}

fn check_sorted(name: &str, nodes: &[f64]) -> Result<()> {
    if nodes.is_empty() {
        return Err(Error::GridMismatch(format!("no {name} nodes")));
    }
    if nodes.windows(2).any(|w| !(w[0] < w[1])) || nodes.iter().any(|v| !v.is_finite()) {
        return Err(Error::GridMismatch(format!(
            "{name} nodes must be finite and strictly increasing"
        )));
    }
    Ok(())
}

/// A kernel slice tabulated as a piecewise Chebyshev interpolant of its
/// profile, for cheap evaluation at the many points of a spatial integral.
struct Tabulated {
    prefactor: f64,
    width: f64,
    /// End of the table in units of `width`; the profile is dropped beyond.
    z_end: f64,
    pieces: Vec<[f64; CHEB]>,
}

impl Tabulated {
    fn new(slice: &TimeSlice) -> Result<Self> {
        let width = slice.width();
        let z_end = slice.reach(INTEGRATION_LEVEL) / width;
        let n = ((z_end / PIECE).ceil() as usize).max(1);
        let mut pieces = Vec::with_capacity(n);
        let theta = |k: usize| std::f64::consts::PI * (k as f64 + 0.5) / CHEB as f64;
        for i in 0..n {
            let z0 = i as f64 * PIECE;
            let mut vals = [0.0; CHEB];
            for (k, v) in vals.iter_mut().enumerate() {
                let z = z0 + 0.5 * (theta(k).cos() + 1.0) * PIECE;
                *v = slice.profile(z * width)?.value;
            }
            let mut c = [0.0; CHEB];
            for (j, cj) in c.iter_mut().enumerate() {
                let s: f64 = vals
                    .iter()
                    .enumerate()
                    .map(|(k, v)| v * (j as f64 * theta(k)).cos())
                    .sum();
                *cj = 2.0 * s / CHEB as f64;
            }
            c[0] *= 0.5;
            pieces.push(c);
        }
        Ok(Self {
            prefactor: slice.prefactor(),
            width,
            z_end,
            pieces,
        })
    }

    fn profile(&self, z: f64) -> f64 {
        if z >= self.z_end {
            return 0.0;
        }
        let i = ((z / PIECE) as usize).min(self.pieces.len() - 1);
        let s = 2.0 * (z - i as f64 * PIECE) / PIECE - 1.0;
        let c = &self.pieces[i];
        let (mut b1, mut b2) = (0.0, 0.0);
        for &cj in c[1..].iter().rev() {
            let b0 = 2.0 * s * b1 - b2 + cj;
            b2 = b1;
            b1 = b0;
        }
        s * b1 - b2 + c[0]
    }

    fn reach(&self) -> f64 {
        self.z_end * self.width
    }

    /// Shifts `2ak` whose image pair can come within reach for `xi` in `[0, a]`.
    fn shifts(&self, x: f64, a: f64, n_images: usize) -> Vec<f64> {
        let reach = self.reach();
        let near = |lo: f64, hi: f64| {
            if lo <= 0.0 && hi >= 0.0 {
                0.0
            } else {
                lo.abs().min(hi.abs())
            }
        };
        let n = n_images as i64;
        (-n..=n)
            .map(|k| 2.0 * a * k as f64)
            .filter(|&s| near(x + s - a, x + s) < reach || near(x - s, x - s + a) < reach)
            .collect()
    }

    /// `int_0^a g(xi) K(x, xi) d xi` where `K` is the Dirichlet image sum of
    /// this slice. Each image pair is evaluated as
    /// `P(|x - xi + 2ak|) - P(|x + xi - 2ak|)`, in the frame reflected about
    /// `a/2` when `x + xi > a`, so the result is exactly zero at both walls.
    fn integrate(
        &self,
        x: f64,
        a: f64,
        n_images: usize,
        g: &dyn Fn(f64) -> f64,
        gl: &GaussLegendre,
    ) -> f64 {
        let reach = self.reach();
        let (lo, hi) = ((x - reach).max(0.0), (x + reach).min(a));
        let left = self.shifts(x, a, n_images);
        let right = self.shifts(a - x, a, n_images);
        let panel = (PANEL_WIDTHS * self.width).min(a / 8.0);
        let inv_w = 1.0 / self.width;
        let mut total = 0.0;
        for (s0, s1) in [(lo, x), (x, hi)] {
            if s1 <= s0 {
                continue;
            }
            let n = ((s1 - s0) / panel).ceil().max(1.0) as usize;
            let h = (s1 - s0) / n as f64;
            for j in 0..n {
                let (mid, half) = (s0 + (j as f64 + 0.5) * h, 0.5 * h);
                for (u, w) in gl.nodes.iter().zip(&gl.weights) {
                    let xi = mid + half * u;
                    let (fx, fxi, shifts) = if x + xi > a {
                        (a - x, a - xi, &right)
                    } else {
                        (x, xi, &left)
                    };
                    let mut k = 0.0;
                    for &s in shifts.iter() {
                        k += self.profile((fx - fxi + s).abs() * inv_w)
                            - self.profile((fxi - s + fx).abs() * inv_w);
                    }
                    total += half * w * g(xi) * k;
                }
            }
        }
        self.prefactor * total
    }
}

/// Evaluates the pieces of `u` for one problem.
struct Assembler<'a> {
    ps: &'a ProblemSpec,
    kernels: Kernels,
    q: QuadratureSpec,
    gl: GaussLegendre,
    ctl: SeriesControl,
}

impl<'a> Assembler<'a> {
    fn new(ps: &'a ProblemSpec, q: &QuadratureSpec, ctl: &SeriesControl) -> Result<Self> {
        ps.validate_forcing()?;
        q.validate()?;
        Ok(Self {
            ps,
            kernels: Kernels::new(&ps.params, ctl)?,
            q: *q,
            gl: GaussLegendre::new(q.nodes_per_panel),
            ctl: *ctl,
        })
    }

    fn a(&self) -> f64 {
        self.ps.domain.a
    }

    /// `z(t, x) = int_0^a tau(xi) G~(t, x, 0, xi) d xi` for every `x` in `xs`.
    fn initial_row(&self, t: f64, xs: &[f64]) -> Result<Vec<f64>> {
        if self.ps.tau.is_zero() {
            return Ok(vec![0.0; xs.len()]);
        }
        let tab = Tabulated::new(&self.kernels.initial_slice(t)?)?;
        let tau = |xi: f64| self.ps.tau.eval(xi);
        Ok(xs
            .iter()
            .map(|&x| tab.integrate(x, self.a(), self.ctl.n_images, &tau, &self.gl))
            .collect())
    }

    /// `int_0^t int_0^a f(eta, xi) G(t, x, eta, xi) d xi d eta` for every `x` in `xs`.
    fn forcing_row(&self, t: f64, xs: &[f64]) -> Result<Vec<f64>> {
        if self.ps.forcing.is_zero() {
            return Ok(vec![0.0; xs.len()]);
        }
        let (fine, scale) = self.forcing_pass(t, xs, self.q.n_panels)?;
        let (coarse, _) = self.forcing_pass(t, xs, (self.q.n_panels / 2).max(1))?;
        for (j, &x) in xs.iter().enumerate() {
            check_time_rule(fine[j], coarse[j], scale[j], &self.ctl)
                .map_err(|e| e.at(t, Some(x)))?;
        }
        Ok(fine)
    }

    fn forcing_pass(&self, t: f64, xs: &[f64], panels: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        let half = 0.5 * t;
        let grading = self.q.grading_for(self.ps.params.beta());
        // graded toward sigma = t - eta = 0 on one half and toward eta = 0 on the other
        let rule = graded_rule(half, grading, panels, &self.gl);
        let nodes = rule
            .iter()
            .map(|&(s, w)| (s, t - s, w))
            .chain(rule.iter().map(|&(e, w)| (t - e, e, w)));
        let mut value = vec![0.0; xs.len()];
        let mut scale = vec![0.0; xs.len()];
        for (sigma, eta, w) in nodes {
            let tab = Tabulated::new(&self.kernels.green_slice(sigma)?)?;
            let f = |xi: f64| self.ps.forcing.eval(eta, xi);
            for (j, &x) in xs.iter().enumerate() {
                let v = w * tab.integrate(x, self.a(), self.ctl.n_images, &f, &self.gl);
                value[j] += v;
                scale[j] += v.abs();
            }
        }
        Ok((value, scale))
    }

    /// `int_0^t phi(eta) G_xi(t, x, eta, wall) d eta`, signed as it enters `u`.
    fn boundary_term(&self, t: f64, x: f64, side: Side) -> Result<f64> {
        let (phi, d, sign) = match side {
            Side::Left => (&self.ps.phi0, x, 1.0),
            Side::Right => (&self.ps.phi1, self.a() - x, -1.0),
        };
        if phi.is_zero() {
            return Ok(0.0);
        }
        let (fine, scale, mass) = self.boundary_pass(t, x, d, side, phi, 1.0)?;
        let (coarse, _, _) = self.boundary_pass(t, x, d, side, phi, 2.0)?;
        check_time_rule(
            fine,
            coarse,
            scale + mass * PROFILE_NOISE / TIME_RULE_TOL,
            &self.ctl,
        )?;
        Ok(sign * fine)
    }

    /// Integrates in `v = ln s` with `s = d / (t - eta)^beta1`, the scaled
    /// distance to the wall; this resolves the peak of the kernel at
    /// `eta -> t`, whose width shrinks like `d^(1/beta1)`.
    fn boundary_pass(
        &self,
        t: f64,
        x: f64,
        d: f64,
        side: Side,
        phi: &ScalarData,
        stretch: f64,
    ) -> Result<(f64, f64, f64)> {
        let rho = self.ps.params.beta1();
        let lambda = self.ps.params.alpha() / rho;
        let v_lo = (d / t.powf(rho)).ln();
        let v_hi = decay_reach(rho, INTEGRATION_LEVEL).ln();
        let (mut value, mut scale, mut mass) = (0.0, 0.0, 0.0);
        let mut v0 = v_lo;
        let mut buf = Vec::with_capacity(self.gl.nodes.len());
        while v0 < v_hi {
            let h = stretch * 0.5f64.min(2.0 / lambda).min((-v0).exp());
            let v1 = (v0 + h).min(v_hi);
            buf.clear();
            self.gl.push_interval(v0, v1, &mut buf);
            for &(v, w) in &buf {
                let width = d * (-v).exp();
                let sigma = width.powf(1.0 / rho);
                let k = self
                    .kernels
                    .omega_profile_at_width(width)?
                    .boundary_images(x, side, self.a(), self.ctl.n_images, &self.ctl)?;
                let wphi = w * phi.eval((t - sigma).max(0.0)) / rho;
                value += wphi * k.value;
                scale += (wphi * k.value).abs();
                mass += wphi.abs();
            }
            v0 = v1;
        }
        Ok((value, scale, mass))
    }

    fn boundary_row(&self, t: f64, xs: &[f64]) -> Result<Vec<f64>> {
        let a = self.a();
        xs.iter()
            .map(|&x| {
                if x <= 0.0 {
                    Ok(self.ps.phi0.eval(t))
                } else if x >= a {
                    Ok(self.ps.phi1.eval(t))
                } else {
                    let left = self.boundary_term(t, x, Side::Left)?;
                    let right = self.boundary_term(t, x, Side::Right)?;
                    Ok(left + right)
                }
                .map_err(|e: Error| e.at(t, Some(x)))
            })
            .collect()
    }

    fn row(&self, t: f64, xs: &[f64]) -> Result<Vec<f64>> {
        let b = self.boundary_row(t, xs)?;
        let z = self.initial_row(t, xs).map_err(|e| e.at(t, None))?;
        let f = self.forcing_row(t, xs).map_err(|e| e.at(t, None))?;
        Ok(b.iter()
            .zip(&z)
            .zip(&f)
            .map(|((b, z), f)| b + z + f)
            .collect())
    }
}

fn check_time_rule(fine: f64, coarse: f64, scale: f64, ctl: &SeriesControl) -> Result<()> {
    if (fine - coarse).abs() > TIME_RULE_TOL * scale + ctl.abs_tol {
        return Err(Error::QuadratureFailure { coarse, fine });
    }
    Ok(())
}

fn check_point(ps: &ProblemSpec, t: f64, x: f64) -> Result<()> {
    if !(t > 0.0 && t <= ps.domain.t_max * (1.0 + 1e-12)) {
        return Err(Error::Domain(format!(
            "t = {t} outside (0, {}]",
            ps.domain.t_max
        )));
    }
    if !(0.0..=ps.domain.a).contains(&x) {
        return Err(Error::Domain(format!(
            "x = {x} outside [0, {}]",
            ps.domain.a
        )));
    }
    Ok(())
}

/// Boundary and forcing part `y(t, x)` at an interior point.
pub fn solve_y(
    ps: &ProblemSpec,
    t: f64,
    x: f64,
    q: &QuadratureSpec,
    ctl: &SeriesControl,
) -> Result<f64> {
    check_point(ps, t, x)?;
    if x <= 0.0 || x >= ps.domain.a {
        return Err(Error::Domain(format!(
            "y needs an interior point, got x = {x}"
        )));
    }
    let asm = Assembler::new(ps, q, ctl)?;
    let b = asm.boundary_row(t, &[x])?[0];
    let f = asm.forcing_row(t, &[x]).map_err(|e| e.at(t, Some(x)))?[0];
    Ok(b + f)
}

/// Initial-data part `z(t, x)`.
pub fn solve_z(ps: &ProblemSpec, t: f64, x: f64, ctl: &SeriesControl) -> Result<f64> {
    check_point(ps, t, x)?;
    let asm = Assembler::new(ps, &QuadratureSpec::default(), ctl)?;
    Ok(asm.initial_row(t, &[x]).map_err(|e| e.at(t, Some(x)))?[0])
}

/// `u = y + z` on the tensor grid `t_nodes x x_nodes`.
///
/// Wall nodes take the boundary data, the limit of the boundary part; the
/// initial and forcing parts are evaluated there and vanish with the kernels.
pub fn solve_u(
    ps: &ProblemSpec,
    t_nodes: &[f64],
    x_nodes: &[f64],
    q: &QuadratureSpec,
    ctl: &SeriesControl,
) -> Result<SolutionField> {
    check_sorted("t", t_nodes)?;
    check_sorted("x", x_nodes)?;
    for &t in t_nodes {
        check_point(ps, t, 0.0)?;
    }
    for &x in x_nodes {
        check_point(ps, t_nodes[0], x)?;
    }
    ps.validate()?;
    let asm = Assembler::new(ps, q, ctl)?;
    let rows = parallel_map(t_nodes, |t| asm.row(t, x_nodes));
    let mut values = Vec::with_capacity(t_nodes.len() * x_nodes.len());
    for row in rows {
        values.extend(row?);
    }
    let meta = FieldMeta {
        params: ps.params,
        domain: ps.domain,
        flags: Vec::new(),
    };
    SolutionField::new(
        t_nodes.to_vec(),
        x_nodes.to_vec(),
        values,
        Method::Greens,
        meta,
    )
}

/// Applies `f` to every item on scoped worker threads, preserving order.
fn parallel_map<T: Send>(items: &[f64], f: impl Fn(f64) -> T + Sync) -> Vec<T> {
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(items.len().max(1));
    if workers <= 1 {
        return items.iter().map(|&t| f(t)).collect();
    }
    let f = &f;
    let mut slots: Vec<Option<T>> = (0..items.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    items
                        .iter()
                        .enumerate()
                        .skip(w)
                        .step_by(workers)
                        .map(|(i, &t)| (i, f(t)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, v) in h.join().expect("worker panicked") {
                slots[i] = Some(v);
            }
        }
    });
    slots
        .into_iter()
        .map(|s| s.expect("every slot filled"))
        .collect()
}

/// Outcome of [`verify_solution`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerificationReport {
    /// `max_t |u(t, wall) - phi(t)|`, with wall values extrapolated linearly
    /// when the grid does not contain the walls.
    pub boundary_error: f64,
    /// `max_x |u(t_min, x) - tau(x)|`.
    pub initial_error: f64,
    /// `max |D u - u_xx - f|` over interior nodes, using the oracle's discrete
    /// operator; `None` when the grid is not uniform with `t_n = n dt` and
    /// walls included.
    pub residual: Option<f64>,
    /// Largest of `|D u|`, `|u_xx|` and `|f|` over the same nodes.
    pub residual_scale: f64,
}

impl VerificationReport {
    pub fn scaled_residual(&self) -> Option<f64> {
        self.residual.map(|r| {
            if self.residual_scale > 0.0 {
                r / self.residual_scale
            } else {
                r
            }
        })
    }
}

/// Checks boundary values, initial values and the equation residual of a field.
pub fn verify_solution(
    ps: &ProblemSpec,
    field: &SolutionField,
    ctl: &SeriesControl,
) -> Result<VerificationReport> {
    let (xs, a) = (&field.x_nodes, ps.domain.a);
    let nx = xs.len();
    let wall = |i: usize, target: f64| -> f64 {
        let row = field.row(i);
        if nx == 1 {
            return row[0];
        }
        let (j0, j1) = if target <= 0.5 * a {
            (0, 1)
        } else {
            (nx - 1, nx - 2)
        };
        if (xs[j0] - target).abs() <= node_tol(target) {
            return row[j0];
        }
        row[j0] + (row[j0] - row[j1]) * (target - xs[j0]) / (xs[j0] - xs[j1])
    };
    let mut boundary_error: f64 = 0.0;
    for (i, &t) in field.t_nodes.iter().enumerate() {
        boundary_error = boundary_error.max((wall(i, 0.0) - ps.phi0.eval(t)).abs());
        boundary_error = boundary_error.max((wall(i, a) - ps.phi1.eval(t)).abs());
    }
    let initial_error = xs.iter().enumerate().fold(0.0, |m: f64, (j, &x)| {
        m.max((field.value(0, j) - ps.tau.eval(x)).abs())
    });

    let (mut residual, mut residual_scale) = (None, 0.0);
    if let Ok(grid) = FdGrid::from_nodes(&field.t_nodes, xs, &ps.domain) {
        let mut with_initial = field.clone();
        if with_initial.initial.is_none() {
            with_initial.initial = Some(xs.iter().map(|&x| ps.tau.eval(x)).collect());
        }
        let op = fd_apply_operator(&with_initial, &grid, &ps.params, ctl)?;
        let mut worst: f64 = 0.0;
        for (i, &t) in op.t_nodes.iter().enumerate() {
            for (j, &x) in op.x_nodes.iter().enumerate() {
                let f = ps.forcing.eval(t, x);
                worst = worst.max((op.value(i, j) - f).abs());
                residual_scale = f64::max(
                    residual_scale,
                    op.time_part(i, j)
                        .abs()
                        .max(op.space_part(i, j).abs())
                        .max(f.abs()),
                );
            }
        }
        residual = Some(worst);
    }
    Ok(VerificationReport {
        boundary_error,
        initial_error,
        residual,
        residual_scale,
    })
}
