//! The invariant suite behind `--mode verify`.
//!
//! Every check returns an [`Outcome`] with the measured numbers; a numerical
//! error inside a check counts as a failure of that check only.

use std::f64::consts::PI;
use std::io::Write;

use prabhakar_green::greens::{omega_kernel, Kernels};
use prabhakar_green::operators::{
    prabhakar_deriv_caputo, prabhakar_deriv_rl, prabhakar_integral, relation_residual,
    vanishing_integral_limit, PrabhakarOrder, TimeFunction,
};
use prabhakar_green::oracle::{build_weights, fd_solve, FdGrid};
use prabhakar_green::solver::{
    solve_u, solve_y, solve_z, verify_solution, FieldDiff, ProblemSpec, SolutionField,
};
use prabhakar_green::specfun::{
    bivariate_e12, gamma, kernel_antiderivative_w, pochhammer, prabhakar_ml, recip_gamma, wright_e,
    E12Params, KernelAntiderivative, PrabhakarSeries,
};
use prabhakar_green::{DomainSpec, FracParams, QuadratureSpec, Result, SeriesControl};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{
    example_problem, Mode, RunConfig, BETA_SWEEP, EXAMPLE_ALPHA, EXAMPLE_DELTA, EXAMPLE_GAMMA,
    EXAMPLE_T,
};

/// What the suite runs on.
#[derive(Debug, Clone)]
pub struct Settings {
    /// `alpha`, `gamma`, `delta` of the run with `beta = 0.5`.
    pub base: FracParams,
    pub betas: Vec<f64>,
    pub domain: DomainSpec,
    /// Output grid of the cross-method comparison, `nx` counting the walls.
    pub nt: usize,
    pub nx: usize,
    pub cross_tol: f64,
    pub quadrature: QuadratureSpec,
    pub series: SeriesControl,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            base: FracParams::new(EXAMPLE_ALPHA, 0.5, EXAMPLE_GAMMA, EXAMPLE_DELTA)
                .expect("example parameters are valid"),
            betas: BETA_SWEEP.to_vec(),
            domain: DomainSpec::new(PI, EXAMPLE_T).expect("example domain is valid"),
            nt: 64,
            nx: 34,
            cross_tol: 5e-2,
            quadrature: QuadratureSpec {
                n_panels: 16,
                ..Default::default()
            },
            series: SeriesControl::default(),
        }
    }
}

impl Settings {
    pub fn from_config(cfg: &RunConfig) -> Self {
        let p = cfg.params[0];
        Self {
            base: p.with_beta(0.5).expect("0.5 is a valid order"),
            betas: cfg.params.iter().map(|p| p.beta()).collect(),
            domain: cfg.domain,
            nt: cfg.nt,
            nx: cfg.nx,
            cross_tol: cfg.verify_tol,
            quadrature: cfg.quadrature,
            series: cfg.series,
        }
    }

    pub fn params(&self, beta: f64) -> Result<FracParams> {
        self.base.with_beta(beta)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

pub type CheckFn = fn(&Settings) -> Result<Outcome>;

pub struct Check {
    pub module: &'static str,
    pub name: &'static str,
    pub run: CheckFn,
}

impl Check {
    /// Runs the check, folding errors into a failed outcome.
    pub fn outcome(&self, s: &Settings) -> Outcome {
        (self.run)(s).unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")))
    }
}

pub fn suite() -> Vec<Check> {
    let c = |module, name, run| Check { module, name, run };
    vec![
        c("specfun", "recip_gamma recurrence", recip_gamma_recurrence),
        c("specfun", "Vandermonde identity", vandermonde_identity),
        c("specfun", "Cauchy-product regrouping", cauchy_regrouping),
        c("specfun", "gamma = 0 reduction", gamma_zero_reduction),
        c("specfun", "E^1_{1,1} = exp", exp_reduction),
        c("specfun", "Wright beta = 0 reduction", wright_beta_zero),
        c("specfun", "omega / E12 identity", omega_e12_identity),
        c("operators", "linearity", operator_linearity),
        c(
            "operators",
            "gamma = 0 Caputo powers",
            caputo_classical_powers,
        ),
        c("operators", "RL / Caputo relation", relation_basket),
        c("operators", "vanishing integral exponent", decay_exponent),
        c("greens", "G vanishes on the walls", green_walls),
        c("greens", "G symmetric in (x, xi)", green_symmetry),
        c("greens", "G depends on t - eta", green_translation),
        c("greens", "G~ closed form vs quadrature", tilde_dual_path),
        c("greens", "image tail", image_tail),
        c("solver", "manufactured solution", manufactured_greens),
        c("solver", "superposition", superposition),
        c("solver", "example fields on the walls", example_walls),
        c("solver", "boundary attainment", boundary_attainment),
        c("solver", "initial attainment", initial_attainment),
        c("solver", "example 1 decays faster with beta", beta_decay),
        c("solver", "example 2 grows faster with beta", beta_growth),
        c("oracle", "weight telescoping", weight_telescoping),
        c("oracle", "gamma = 0 L1 weights", l1_weights),
        c("oracle", "manufactured convergence", fd_convergence),
        c("oracle", "greens vs oracle", cross_method),
    ]
}

/// Runs every check, printing one line each; returns the names of failures.
pub fn run_suite(s: &Settings, log: &mut dyn Write) -> Vec<String> {
    let mut failed = Vec::new();
    for check in suite() {
        let o = check.outcome(s);
        let mark = if o.pass { "PASS" } else { "FAIL" };
        writeln!(
            log,
            "{mark}  {:<9} {:<36} {}",
            check.module, check.name, o.detail
        )
        .ok();
        if !o.pass {
            failed.push(format!("{}: {}", check.module, check.name));
        }
    }
    let total = suite().len();
    writeln!(log, "{} of {total} checks passed", total - failed.len()).ok();
    failed
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn power(p: i32) -> TimeFunction {
    TimeFunction::with_derivative(move |s| s.powi(p), move |s| p as f64 * s.powi(p - 1))
}

pub fn recip_gamma_recurrence(_: &Settings) -> Result<Outcome> {
    let mut r = rng(1);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let x: f64 = r.gen_range(-5.0..5.0);
        if (x - x.round()).abs() < 1e-6 {
            continue;
        }
        let (lhs, rhs) = (recip_gamma(x + 1.0), recip_gamma(x) / x);
        worst = worst.max((lhs - rhs).abs() / lhs.abs().max(1.0));
    }
    Ok(Outcome::new(
        worst <= 1e-12,
        format!("worst {worst:.2e} over 500 draws in [-5, 5] (tol 1e-12)"),
    ))
}

pub fn vandermonde_identity(_: &Settings) -> Result<Outcome> {
    let mut r = rng(22);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let (d, g): (f64, f64) = (r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
        for k in 0..=12 {
            let terms: Vec<f64> = (0..=k)
                .map(|m| {
                    pochhammer(d, m) * pochhammer(g, k - m) / (factorial(m) * factorial(k - m))
                })
                .collect();
            let lhs: f64 = terms.iter().sum();
            let rhs = pochhammer(d + g, k) / factorial(k);
            // near-cancelling sums are judged against their terms
            let scale: f64 = terms.iter().map(|t| t.abs()).sum();
            worst = worst.max((lhs - rhs).abs() / rhs.abs().max(1e-3 * scale));
        }
    }
    Ok(Outcome::new(
        worst <= 1e-10,
        format!("worst relative {worst:.2e} over 50 draws, k <= 12 (tol 1e-10)"),
    ))
}

pub fn cauchy_regrouping(s: &Settings) -> Result<Outcome> {
    let ctl = s.series;
    let (a, b) = (
        PrabhakarSeries::new(0.8, 0.9, 0.3, &ctl)?,
        PrabhakarSeries::new(0.8, 1.5, -0.3, &ctl)?,
    );
    let z: f64 = 0.7;
    let n = 60;
    let ak: Vec<f64> = (0..n)
        .map(|k| a.coefficient(k) * z.powi(k as i32))
        .collect();
    let bk: Vec<f64> = (0..n)
        .map(|k| b.coefficient(k) * z.powi(k as i32))
        .collect();
    let product = ak.iter().sum::<f64>() * bk.iter().sum::<f64>();
    let regrouped: f64 = (0..n)
        .map(|k| (0..=k).map(|m| ak[m] * bk[k - m]).sum::<f64>())
        .sum();
    let direct = prabhakar_ml(0.8, 0.9, 0.3, z, &ctl)? * prabhakar_ml(0.8, 1.5, -0.3, z, &ctl)?;
    let tol = ctl.abs_tol + ctl.rel_tol * product.abs();
    let (e1, e2) = ((product - regrouped).abs(), (direct - regrouped).abs());
    Ok(Outcome::new(
        e1 <= tol && e2 <= 10.0 * tol,
        format!("regrouped {e1:.2e}, against evaluated product {e2:.2e} (tol {tol:.2e})"),
    ))
}

pub fn gamma_zero_reduction(s: &Settings) -> Result<Outcome> {
    let mut r = rng(3);
    let mut mismatches = 0;
    for _ in 0..200 {
        let (alpha, beta, z) = (
            r.gen_range(0.1..3.0),
            r.gen_range(-3.0..3.0),
            r.gen_range(-5.0..5.0),
        );
        if prabhakar_ml(alpha, beta, 0.0, z, &s.series)? != recip_gamma(beta) {
            mismatches += 1;
        }
    }
    Ok(Outcome::new(
        mismatches == 0,
        format!("{mismatches} of 200 draws differ from 1/Gamma(beta)"),
    ))
}

pub fn exp_reduction(s: &Settings) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for z in linspace(-5.0, 5.0, 41) {
        worst = worst.max(rel(prabhakar_ml(1.0, 1.0, 1.0, z, &s.series)?, z.exp()));
    }
    Ok(Outcome::new(
        worst <= 1e-10,
        format!("worst relative {worst:.2e} on |z| <= 5 (tol 1e-10)"),
    ))
}

pub fn wright_beta_zero(s: &Settings) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for z in [-3.0, -0.5, 0.4, 2.0] {
        let lhs = wright_e(0.7, 0.0, 1.2, 1.6, z, &s.series)?;
        let rhs = prabhakar_ml(0.7, 1.2, 1.0, z, &s.series)? * recip_gamma(1.6);
        worst = worst.max(rel(lhs, rhs));
    }
    let at_one = rel(
        wright_e(1.0, 0.0, 1.0, 1.0, 1.0, &s.series)?,
        std::f64::consts::E,
    );
    Ok(Outcome::new(
        worst <= 1e-12 && at_one <= 1e-12,
        format!("worst relative {worst:.2e}, e at z = 1 off by {at_one:.2e} (tol 1e-12)"),
    ))
}

pub fn omega_e12_identity(s: &Settings) -> Result<Outcome> {
    let p = s.base;
    let mut worst: f64 = 0.0;
    for (t, x) in [(0.6f64, 0.4f64), (0.2, 0.1), (1.5, 1.0), (2.0, 0.05)] {
        let direct = t * omega_kernel(t, x, &p, &s.series)?;
        let series = bivariate_e12(
            &E12Params::omega(&p),
            -x * t.powf(-p.beta1()),
            p.delta() * t.powf(p.alpha()),
            &s.series,
        )?;
        worst = worst.max(rel(direct, series));
    }
    Ok(Outcome::new(
        worst <= 1e-10,
        format!("worst relative {worst:.2e} over 4 points (tol 1e-10)"),
    ))
}

pub fn operator_linearity(s: &Settings) -> Result<Outcome> {
    let (p, q, ctl) = (s.base, QuadratureSpec::default(), s.series);
    let g = TimeFunction::with_derivative(f64::sin, f64::cos);
    let h = power(2);
    let order = PrabhakarOrder::derivative_kernel(&p);
    let mut r = rng(4);
    let mut worst: f64 = 0.0;
    for _ in 0..6 {
        let (a, b, t): (f64, f64, f64) = (
            r.gen_range(-3.0..3.0),
            r.gen_range(-3.0..3.0),
            r.gen_range(0.1..2.0),
        );
        let sum = TimeFunction::combine(a, &g, b, &h);
        type Op<'a> = &'a dyn Fn(&TimeFunction) -> Result<f64>;
        let ops: [Op; 3] = [
            &|f| prabhakar_integral(f, t, &order, &q, &ctl),
            &|f| prabhakar_deriv_rl(f, t, &p, &q, &ctl),
            &|f| prabhakar_deriv_caputo(f, t, &p, &q, &ctl),
        ];
        for op in ops {
            let (lhs, rhs) = (op(&sum)?, a * op(&g)? + b * op(&h)?);
            worst = worst.max((lhs - rhs).abs() / rhs.abs().max(1.0));
        }
    }
    Ok(Outcome::new(
        worst <= 1e-9,
        format!("worst {worst:.2e} over 6 draws x 3 operators (tol 1e-9)"),
    ))
}

pub fn caputo_classical_powers(s: &Settings) -> Result<Outcome> {
    let (q, t) = (QuadratureSpec::default(), 1.1f64);
    let mut worst: f64 = 0.0;
    for &beta in &s.betas {
        let p = FracParams::new(s.base.alpha(), beta, 0.0, s.base.delta())?;
        for k in 1..=3 {
            let v = prabhakar_deriv_caputo(&power(k), t, &p, &q, &s.series)?;
            let kf = k as f64;
            let exact = gamma(kf + 1.0) * t.powf(kf - beta) * recip_gamma(kf + 1.0 - beta);
            worst = worst.max(rel(v, exact));
        }
    }
    Ok(Outcome::new(
        worst <= 1e-6,
        format!("worst relative {worst:.2e} for t^1..t^3 (tol 1e-6)"),
    ))
}

pub fn relation_basket(s: &Settings) -> Result<Outcome> {
    let q = QuadratureSpec::default();
    let basket = [
        power(1),
        power(2),
        TimeFunction::with_derivative(f64::sin, f64::cos),
        TimeFunction::with_derivative(|s| s + 2.0, |_| 1.0),
    ];
    let mut worst: f64 = 0.0;
    for g in &basket {
        for t in [0.5, 1.0] {
            worst = worst.max(relation_residual(g, t, &s.base, &q, &s.series)?);
        }
    }
    Ok(Outcome::new(
        worst <= 1e-6,
        format!("worst residual {worst:.2e} on s, s^2, sin s, s + 2 (tol 1e-6)"),
    ))
}

pub fn decay_exponent(s: &Settings) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut vanishing = true;
    for &beta in &s.betas {
        let p = s.params(beta)?;
        for g in [
            TimeFunction::constant(1.0),
            TimeFunction::new(|s| 2.0 + s.cos()),
        ] {
            let fit = vanishing_integral_limit(&g, &p, &s.series)?;
            let slope = fit.slope.unwrap_or(f64::NAN);
            worst = worst.max((slope - (1.0 - beta)).abs());
            vanishing &= fit.values.windows(2).all(|w| w[1].abs() < w[0].abs());
        }
    }
    Ok(Outcome::new(
        worst <= 0.05 && vanishing,
        format!("slope within {worst:.3} of 1 - beta (tol 0.05), values decreasing: {vanishing}"),
    ))
}

pub fn green_walls(s: &Settings) -> Result<Outcome> {
    let (d, k) = (s.domain, Kernels::new(&s.base, &s.series)?);
    let mut worst: f64 = 0.0;
    for (t, eta) in [(0.5, 0.0), (1.0, 0.6), (2.0, 0.1), (0.05, 0.01)] {
        for xi in linspace(0.0, d.a, 7) {
            worst = worst.max(k.green(t, 0.0, eta, xi, &d)?.value.abs());
            worst = worst.max(k.green(t, d.a, eta, xi, &d)?.value.abs());
        }
    }
    Ok(Outcome::new(
        worst <= s.series.abs_tol,
        format!(
            "max |G| on the walls {worst:.2e} (tol {:.0e})",
            s.series.abs_tol
        ),
    ))
}

pub fn green_symmetry(s: &Settings) -> Result<Outcome> {
    let (d, k) = (s.domain, Kernels::new(&s.base, &s.series)?);
    let mut r = rng(5);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let t = r.gen_range(0.1..d.t_max);
        let eta = r.gen_range(0.0..0.95) * t;
        let (x, xi) = (r.gen_range(0.0..d.a), r.gen_range(0.0..d.a));
        let diff = k.green(t, x, eta, xi, &d)?.value - k.green(t, xi, eta, x, &d)?.value;
        worst = worst.max(diff.abs());
    }
    Ok(Outcome::new(
        worst <= 1e-10,
        format!("worst {worst:.2e} over 100 draws (tol 1e-10)"),
    ))
}

pub fn green_translation(s: &Settings) -> Result<Outcome> {
    let (d, k) = (s.domain, Kernels::new(&s.base, &s.series)?);
    let mut r = rng(6);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let t = r.gen_range(0.2..d.t_max);
        let eta = r.gen_range(0.0..0.9) * t;
        let (x, xi) = (r.gen_range(0.0..d.a), r.gen_range(0.0..d.a));
        let diff = k.green(t, x, eta, xi, &d)?.value - k.green(t - eta, x, 0.0, xi, &d)?.value;
        worst = worst.max(diff.abs());
    }
    Ok(Outcome::new(
        worst <= 1e-10,
        format!("worst {worst:.2e} over 100 draws (tol 1e-10)"),
    ))
}

/// Closed form against quadrature on a 5 x 5 x 5 set of `(t, x, xi)`.
pub fn tilde_dual_path(s: &Settings) -> Result<Outcome> {
    let (d, k) = (s.domain, Kernels::new(&s.base, &s.series)?);
    let ts = [0.05, 0.2, 0.4, 0.7, 1.0].map(|f| f * d.t_max);
    let xs = [0.3, 0.9, 1.5, 2.2, 2.9].map(|f| f * d.a / PI);
    let xis = [0.2, 0.8, 1.6, 2.4, 3.0].map(|f| f * d.a / PI);
    let mut worst: f64 = 0.0;
    let mut at = (0.0, 0.0, 0.0);
    for t in ts {
        for x in xs {
            for xi in xis {
                let closed = k.green_tilde(t, x, xi, &d)?.value;
                let quad = k.green_tilde_quadrature(t, x, xi, &d, &s.quadrature)?;
                let e = (closed - quad).abs() / closed.abs().max(1e-3);
                if e > worst {
                    worst = e;
                    at = (t, x, xi);
                }
            }
        }
    }
    Ok(Outcome::new(
        worst <= 1e-6,
        format!(
            "worst relative {worst:.2e} at (t, x, xi) = ({:.2}, {:.2}, {:.2}) (tol 1e-6)",
            at.0, at.1, at.2
        ),
    ))
}

pub fn image_tail(s: &Settings) -> Result<Outcome> {
    let d = s.domain;
    let wide = SeriesControl {
        n_images: 2 * s.series.n_images,
        ..s.series
    };
    let (narrow, wide) = (
        Kernels::new(&s.base, &s.series)?,
        Kernels::new(&s.base, &wide)?,
    );
    let mut worst: f64 = 0.0;
    let mut tail: f64 = 0.0;
    for (t, x, eta, xi) in [
        (d.t_max, 0.1 * d.a, 0.0, 0.9 * d.a),
        (0.5 * d.t_max, 0.5 * d.a, 0.25 * d.t_max, 0.5 * d.a),
        (0.25 * d.t_max, 0.95 * d.a, 0.1 * d.t_max, 0.05 * d.a),
    ] {
        let (a, b) = (
            narrow.green(t, x, eta, xi, &d)?,
            wide.green(t, x, eta, xi, &d)?,
        );
        worst = worst.max((a.value - b.value).abs());
        tail = tail.max(a.truncation_estimate);
        let (a, b) = (
            narrow.green_tilde(t, x, xi, &d)?,
            wide.green_tilde(t, x, xi, &d)?,
        );
        worst = worst.max((a.value - b.value).abs());
        tail = tail.max(a.truncation_estimate);
    }
    Ok(Outcome::new(
        worst <= s.series.abs_tol && tail <= s.series.abs_tol,
        format!(
            "{} vs {} images: change {worst:.2e}, tail estimate {tail:.2e} (tol {:.0e})",
            s.series.n_images,
            2 * s.series.n_images,
            s.series.abs_tol
        ),
    ))
}

/// `u = (1 + t) sin x` with the forcing that makes it exact.
pub fn manufactured_problem(s: &Settings, beta: f64) -> Result<ProblemSpec> {
    let p = s.params(beta)?;
    let w = KernelAntiderivative::new(&p, &s.series)?;
    Ok(ProblemSpec::new(s.domain, p)
        .with_tau(f64::sin)
        .with_forcing(move |t, x| x.sin() * (w.eval(t).unwrap_or(f64::NAN) + 1.0 + t)))
}

/// Max error relative to the max of `(1 + t) sin x` over the field's nodes.
pub fn manufactured_error(field: &SolutionField) -> f64 {
    let (mut worst, mut scale) = (0.0f64, 0.0f64);
    for (i, t) in field.t_nodes.iter().enumerate() {
        for (j, x) in field.x_nodes.iter().enumerate() {
            let exact = (1.0 + t) * x.sin();
            worst = worst.max((field.value(i, j) - exact).abs());
            scale = scale.max(exact.abs());
        }
    }
    worst / scale
}

pub fn manufactured_greens(s: &Settings) -> Result<Outcome> {
    let ts: Vec<f64> = (1..=11).map(|i| s.domain.t_max * i as f64 / 11.0).collect();
    let xs = linspace(0.0, s.domain.a, 11);
    let mut errors = Vec::new();
    for &beta in &s.betas {
        let field = solve_u(
            &manufactured_problem(s, beta)?,
            &ts,
            &xs,
            &s.quadrature,
            &s.series,
        )?;
        errors.push(manufactured_error(&field));
    }
    let worst = errors.iter().fold(0.0f64, |m, e| m.max(*e));
    Ok(Outcome::new(
        worst <= 1e-2,
        format!("11 x 11 relative errors {} (tol 1e-2)", list(&errors)),
    ))
}

pub fn superposition(s: &Settings) -> Result<Outcome> {
    let (d, p) = (s.domain, s.base);
    let first = ProblemSpec::new(d, p).with_tau(f64::sin);
    let second = ProblemSpec::new(d, p)
        .with_phi0(|t| t)
        .with_phi1(|t| t * t)
        .with_forcing(|t, x| x * t);
    let both = ProblemSpec::new(d, p)
        .with_tau(f64::sin)
        .with_phi0(|t| t)
        .with_phi1(|t| t * t)
        .with_forcing(|t, x| x * t);
    let ts = [0.15 * d.t_max, 0.55 * d.t_max, d.t_max];
    let xs = [0.0, 0.13 * d.a, 0.5 * d.a, 0.92 * d.a, d.a];
    let solve = |ps: &ProblemSpec| solve_u(ps, &ts, &xs, &s.quadrature, &s.series);
    let (u1, u2, u) = (solve(&first)?, solve(&second)?, solve(&both)?);
    let worst = (0..u.values.len())
        .map(|k| (u.values[k] - u1.values[k] - u2.values[k]).abs())
        .fold(0.0f64, f64::max);
    Ok(Outcome::new(
        worst <= 1e-9,
        format!("worst {worst:.2e} over 15 nodes (tol 1e-9)"),
    ))
}

pub fn example_walls(s: &Settings) -> Result<Outcome> {
    let ts = [0.05 * s.domain.t_max, 0.5 * s.domain.t_max, s.domain.t_max];
    let xs = linspace(0.0, s.domain.a, 7);
    let mut worst: f64 = 0.0;
    for mode in [Mode::Example1, Mode::Example2] {
        for &beta in &s.betas {
            let ps = example_problem(mode, s.domain, s.params(beta)?);
            let field = solve_u(&ps, &ts, &xs, &s.quadrature, &s.series)?;
            worst = worst.max(verify_solution(&ps, &field, &s.series)?.boundary_error);
        }
    }
    Ok(Outcome::new(
        worst <= 1e-8,
        format!("max boundary error {worst:.2e} (tol 1e-8)"),
    ))
}

/// `|y - 1|` for `phi0 = 1` at `x = 1e-2 a` and `x = 1e-3 a`, time `T / 2`.
pub fn boundary_errors(s: &Settings, beta: f64) -> Result<[f64; 2]> {
    let ps = ProblemSpec::new(s.domain, s.params(beta)?).with_phi0(|_| 1.0);
    let t = 0.5 * s.domain.t_max;
    let at = |k: f64| -> Result<f64> {
        Ok((solve_y(&ps, t, k * s.domain.a, &s.quadrature, &s.series)? - 1.0).abs())
    };
    Ok([at(1e-2)?, at(1e-3)?])
}

pub fn boundary_attainment(s: &Settings) -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for &beta in &s.betas {
        let [coarse, fine] = boundary_errors(s, beta)?;
        pass &= fine < coarse;
        parts.push(format!("beta {beta}: {coarse:.2e} -> {fine:.2e}"));
    }
    Ok(Outcome::new(
        pass,
        format!("|u - phi0| at x = 1e-2 a, 1e-3 a: {}", parts.join("; ")),
    ))
}

/// Max over nine `x` of `|z(t, x) - sin x|` for Example 1 at `t = 1e-2, 1e-3`.
pub fn initial_errors(s: &Settings, beta: f64) -> Result<[f64; 2]> {
    let ps = example_problem(Mode::Example1, s.domain, s.params(beta)?);
    let xs = linspace(0.0, s.domain.a, 9);
    let at = |t: f64| -> Result<f64> {
        xs.iter().try_fold(0.0f64, |m, &x| {
            Ok(m.max((solve_z(&ps, t, x, &s.series)? - x.sin()).abs()))
        })
    };
    Ok([at(1e-2)?, at(1e-3)?])
}

pub fn initial_attainment(s: &Settings) -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for &beta in &s.betas {
        let [coarse, fine] = initial_errors(s, beta)?;
        pass &= fine < coarse;
        parts.push(format!("beta {beta}: {coarse:.2e} -> {fine:.2e}"));
    }
    Ok(Outcome::new(
        pass,
        format!("max |u - tau| at t = 1e-2, 1e-3: {}", parts.join("; ")),
    ))
}

fn sorted_betas(s: &Settings) -> Vec<f64> {
    let mut b = s.betas.clone();
    b.sort_by(f64::total_cmp);
    b.dedup();
    b
}

/// `u(T, a / 2)` of an example for each `beta` in increasing order.
pub fn midpoint_values(s: &Settings, mode: Mode) -> Result<Vec<f64>> {
    let (t, x) = (s.domain.t_max, 0.5 * s.domain.a);
    sorted_betas(s)
        .into_iter()
        .map(|beta| {
            let ps = example_problem(mode, s.domain, s.params(beta)?);
            match mode {
                Mode::Example1 => solve_z(&ps, t, x, &s.series),
                _ => solve_y(&ps, t, x, &s.quadrature, &s.series),
            }
        })
        .collect()
}

pub fn beta_decay(s: &Settings) -> Result<Outcome> {
    let v = midpoint_values(s, Mode::Example1)?;
    Ok(Outcome::new(
        v.len() >= 2 && v.windows(2).all(|w| w[1] < w[0]),
        format!("u(T, a/2) for beta {:?}: {}", sorted_betas(s), list(&v)),
    ))
}

pub fn beta_growth(s: &Settings) -> Result<Outcome> {
    let v = midpoint_values(s, Mode::Example2)?;
    Ok(Outcome::new(
        v.len() >= 2 && v.windows(2).all(|w| w[1] > w[0]),
        format!("u(T, a/2) for beta {:?}: {}", sorted_betas(s), list(&v)),
    ))
}

pub fn weight_telescoping(s: &Settings) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for &beta in &s.betas {
        let g = FdGrid::new(40, 8, &s.domain)?;
        let w = build_weights(&g, &s.params(beta)?, &s.series)?;
        for n in 1..=40 {
            worst = worst.max((w.row_sum(n) - w.w_at(n)).abs());
        }
    }
    Ok(Outcome::new(
        worst <= 1e-12,
        format!("worst |sum_j w[n][j] - W(t_n)| {worst:.2e} (tol 1e-12)"),
    ))
}

pub fn l1_weights(s: &Settings) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for &beta in &s.betas {
        let p = FracParams::new(s.base.alpha(), beta, 0.0, s.base.delta())?;
        let g = FdGrid::new(16, 4, &s.domain)?;
        let w = build_weights(&g, &p, &s.series)?;
        let c = recip_gamma(2.0 - beta);
        for n in 1..=16 {
            for j in 0..n {
                let (a, b) = (g.t(n) - g.t(j), g.t(n) - g.t(j + 1));
                let l1 = c * (a.powf(1.0 - beta) - b.powf(1.0 - beta));
                worst = worst.max(rel(w.weight(n, j), l1));
            }
        }
        worst = worst.max(rel(
            w.weight(1, 0),
            kernel_antiderivative_w(g.dt, &p, &s.series)?,
        ));
    }
    Ok(Outcome::new(
        worst <= 1e-12,
        format!("worst relative {worst:.2e} (tol 1e-12)"),
    ))
}

/// Oracle errors on the manufactured solution at `(32, 16)` and `(64, 32)`.
pub fn fd_errors(s: &Settings) -> Result<[f64; 2]> {
    let ps = manufactured_problem(s, s.base.beta())?;
    let err = |nt: usize, nx: usize| -> Result<f64> {
        let g = FdGrid::new(nt, nx, &s.domain)?;
        Ok(manufactured_error(&fd_solve(&ps, &g, &s.series)?))
    };
    Ok([err(32, 16)?, err(64, 32)?])
}

pub fn fd_convergence(s: &Settings) -> Result<Outcome> {
    let [coarse, fine] = fd_errors(s)?;
    let ratio = coarse / fine;
    Ok(Outcome::new(
        fine <= 2e-2 && ratio >= 1.5,
        format!("errors {coarse:.2e} (32/16) -> {fine:.2e} (64/32), ratio {ratio:.2} (need <= 2e-2, >= 1.5)"),
    ))
}

/// Greens against the oracle on the `(nt, nx)` grid, and against the oracle
/// on the doubled grid sampled at the same nodes.
pub fn cross_method_case(s: &Settings, mode: Mode, beta: f64) -> Result<(FieldDiff, FieldDiff)> {
    let ps = example_problem(mode, s.domain, s.params(beta)?);
    let coarse = FdGrid::new(s.nt, s.nx - 2, &s.domain)?;
    let fine = FdGrid::new(2 * s.nt, 2 * (s.nx - 1) - 1, &s.domain)?;
    let (ts, xs) = (coarse.t_nodes(), coarse.x_nodes());
    let greens = solve_u(&ps, &ts, &xs, &s.quadrature, &s.series)?;
    let at_grid = greens.compare(&fd_solve(&ps, &coarse, &s.series)?)?;
    let refined = greens.compare(&fd_solve(&ps, &fine, &s.series)?.restrict(&ts, &xs)?)?;
    Ok((at_grid, refined))
}

pub fn cross_method(s: &Settings) -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for mode in [Mode::Example1, Mode::Example2] {
        for &beta in &s.betas {
            let (d, r) = cross_method_case(s, mode, beta)?;
            pass &= d.max_rel <= s.cross_tol && r.max_rel < d.max_rel;
            parts.push(format!(
                "{} beta {beta}: {:.2e} -> {:.2e}",
                mode.name(),
                d.max_rel,
                r.max_rel
            ));
        }
    }
    Ok(Outcome::new(
        pass,
        format!(
            "max rel at nt {}, nx {} then refined oracle (tol {:.0e}): {}",
            s.nt,
            s.nx,
            s.cross_tol,
            parts.join("; ")
        ),
    ))
}

fn list(v: &[f64]) -> String {
    v.iter()
        .map(|x| format!("{x:.4e}"))
        .collect::<Vec<_>>()
        .join(", ")
}
