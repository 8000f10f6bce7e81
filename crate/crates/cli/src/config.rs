//! Run configuration. Flags override the config file, which overrides the
//! defaults of the selected mode.
//!
//! The file format is flat `key = value` text with `#` comments; keys are the
//! long flag names (`verify-tol`, `oracle-refine`, ...). `beta` may be given
//! as a comma-separated list or repeated.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use prabhakar_green::solver::{Method, ProblemSpec};
use prabhakar_green::{DomainSpec, FracParams, QuadratureSpec, SeriesControl};

use crate::expr::{DataExpr, Vars};
use crate::CliError;

pub const EXAMPLE_ALPHA: f64 = 0.8;
pub const EXAMPLE_GAMMA: f64 = 0.3;
pub const EXAMPLE_DELTA: f64 = 0.5;
pub const EXAMPLE_T: f64 = 2.0;
pub const BETA_SWEEP: [f64; 3] = [0.1, 0.5, 0.9];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Initial data `tau = sin x`, no boundary data or source.
    Example1,
    /// Source `f = t sin x` from zero data.
    Example2,
    /// Data given by `--tau`, `--phi0`, `--phi1`, `--forcing`.
    Custom,
    /// Run the invariant suite.
    Verify,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Example1 => "example1",
            Mode::Example2 => "example2",
            Mode::Custom => "custom",
            Mode::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    Greens,
    Oracle,
    Both,
}

impl MethodChoice {
    pub fn methods(self) -> &'static [Method] {
        match self {
            MethodChoice::Greens => &[Method::Greens],
            MethodChoice::Oracle => &[Method::Oracle],
            MethodChoice::Both => &[Method::Greens, Method::Oracle],
        }
    }
}

/// Settings as given on the command line or in a file; unset fields fall
/// through to the next source.
#[derive(Debug, Clone, Default, PartialEq, Args)]
pub struct RunArgs {
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Mittag-Leffler order of the kernel [default: 0.8]
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Repeat for a sweep [default: 0.1 0.5 0.9]
    #[arg(long)]
    pub beta: Vec<f64>,
    /// Kernel exponent, the derivative uses `E^-gamma` [default: 0.3]
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Kernel argument scale [default: 0.5]
    #[arg(long)]
    pub delta: Option<f64>,
    /// Length of the space interval [default: pi]
    #[arg(long)]
    pub a: Option<f64>,
    /// Time horizon [default: 2]
    #[arg(long = "T", value_name = "T")]
    pub t_max: Option<f64>,
    /// Output time levels t = T n / nt, n = 1..=nt [default: 41; verify: 64]
    #[arg(long)]
    pub nt: Option<usize>,
    /// Output space nodes, walls included [default: 21; verify: 34]
    #[arg(long)]
    pub nx: Option<usize>,
    /// Green's-function solution, finite-difference oracle, or both [default: greens]
    #[arg(long, value_enum)]
    pub method: Option<MethodChoice>,
    /// Output directory [default: .]
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `key = value` file with the same keys as the flags; flags win
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Cross-method tolerance of the verification suite [default: 0.05]
    #[arg(long)]
    pub verify_tol: Option<f64>,
    /// Quadrature panels per integral [default: 16]
    #[arg(long)]
    pub panels: Option<usize>,
    /// Image shells kept in the kernel sums [default: 8]
    #[arg(long)]
    pub images: Option<usize>,
    /// Oracle grid refinement relative to the output grid [default: 4]
    #[arg(long)]
    pub oracle_refine: Option<usize>,
    /// Initial data tau(x), custom mode [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
    /// Boundary data at x = 0, phi0(t), custom mode [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub phi0: Option<String>,
    /// Boundary data at x = a, phi1(t), custom mode [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub phi1: Option<String>,
    /// Source f(t, x), custom mode [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub forcing: Option<String>,
}

fn number(v: &str) -> Result<f64, String> {
    v.parse().map_err(|_| format!("{v:?} is not a number"))
}

fn count(v: &str) -> Result<usize, String> {
    v.parse()
        .map_err(|_| format!("{v:?} is not a non-negative integer"))
}

fn choice<T: ValueEnum>(v: &str) -> Result<T, String> {
    T::from_str(v, true)
}

impl RunArgs {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_file_text(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn from_file_text(text: &str) -> Result<Self, String> {
        let mut args = RunArgs::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", n + 1))?;
            args.set(key.trim(), value.trim())
                .map_err(|e| format!("line {}: {e}", n + 1))?;
        }
        Ok(args)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "mode" => self.mode = Some(choice(value)?),
            "alpha" => self.alpha = Some(number(value)?),
            "beta" => {
                for v in value.split(',') {
                    self.beta.push(number(v.trim())?);
                }
            }
            "gamma" => self.gamma = Some(number(value)?),
            "delta" => self.delta = Some(number(value)?),
            "a" => self.a = Some(number(value)?),
            "T" => self.t_max = Some(number(value)?),
            "nt" => self.nt = Some(count(value)?),
            "nx" => self.nx = Some(count(value)?),
            "method" => self.method = Some(choice(value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "verify-tol" => self.verify_tol = Some(number(value)?),
            "panels" => self.panels = Some(count(value)?),
            "images" => self.images = Some(count(value)?),
            "oracle-refine" => self.oracle_refine = Some(count(value)?),
            "tau" => self.tau = Some(value.to_string()),
            "phi0" => self.phi0 = Some(value.to_string()),
            "phi1" => self.phi1 = Some(value.to_string()),
            "forcing" => self.forcing = Some(value.to_string()),
            "config" => return Err("a config file cannot include another".into()),
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    /// Field-wise merge in which the values set in `self` win.
    pub fn or(self, fallback: RunArgs) -> RunArgs {
        RunArgs {
            mode: self.mode.or(fallback.mode),
            alpha: self.alpha.or(fallback.alpha),
            beta: if self.beta.is_empty() {
                fallback.beta
            } else {
                self.beta
            },
            gamma: self.gamma.or(fallback.gamma),
            delta: self.delta.or(fallback.delta),
            a: self.a.or(fallback.a),
            t_max: self.t_max.or(fallback.t_max),
            nt: self.nt.or(fallback.nt),
            nx: self.nx.or(fallback.nx),
            method: self.method.or(fallback.method),
            out: self.out.or(fallback.out),
            config: self.config.or(fallback.config),
            verify_tol: self.verify_tol.or(fallback.verify_tol),
            panels: self.panels.or(fallback.panels),
            images: self.images.or(fallback.images),
            oracle_refine: self.oracle_refine.or(fallback.oracle_refine),
            tau: self.tau.or(fallback.tau),
            phi0: self.phi0.or(fallback.phi0),
            phi1: self.phi1.or(fallback.phi1),
            forcing: self.forcing.or(fallback.forcing),
        }
    }
}

/// Example 1 puts `tau = sin x` on the domain, Example 2 the source
/// `f = t sin x`; every other mode gets zero data.
pub fn example_problem(mode: Mode, domain: DomainSpec, p: FracParams) -> ProblemSpec {
    let ps = ProblemSpec::new(domain, p);
    match mode {
        Mode::Example1 => ps.with_tau(f64::sin),
        Mode::Example2 => ps.with_forcing(|t, x| t * x.sin()),
        _ => ps,
    }
}

/// Data of a custom run.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomData {
    pub tau: DataExpr,
    pub phi0: DataExpr,
    pub phi1: DataExpr,
    pub forcing: DataExpr,
}

/// A fully resolved run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: Mode,
    /// One parameter set per swept `beta`.
    pub params: Vec<FracParams>,
    pub domain: DomainSpec,
    pub nt: usize,
    pub nx: usize,
    pub method: MethodChoice,
    pub quadrature: QuadratureSpec,
    pub series: SeriesControl,
    pub oracle_refine: usize,
    pub out: PathBuf,
    pub verify_tol: f64,
    pub data: Option<CustomData>,
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

impl RunConfig {
    /// Merges `flags` with the config file they name, then applies defaults.
    pub fn from_args(flags: RunArgs) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => RunArgs::from_file(path)?,
            None => RunArgs::default(),
        };
        Self::resolve(flags.or(file))
    }

    pub fn resolve(args: RunArgs) -> Result<Self, CliError> {
        let mode = args
            .mode
            .ok_or_else(|| invalid("no mode given (example1, example2, custom or verify)"))?;
        let verify = mode == Mode::Verify;

        let betas = if args.beta.is_empty() {
            BETA_SWEEP.to_vec()
        } else {
            args.beta.clone()
        };
        let params = betas
            .iter()
            .map(|&beta| {
                FracParams::new(
                    args.alpha.unwrap_or(EXAMPLE_ALPHA),
                    beta,
                    args.gamma.unwrap_or(EXAMPLE_GAMMA),
                    args.delta.unwrap_or(EXAMPLE_DELTA),
                )
                .map_err(invalid)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let domain = DomainSpec::new(args.a.unwrap_or(PI), args.t_max.unwrap_or(EXAMPLE_T))
            .map_err(invalid)?;

        let nt = args.nt.unwrap_or(if verify { 64 } else { 41 });
        let nx = args.nx.unwrap_or(if verify { 34 } else { 21 });
        if nt == 0 || nx == 0 {
            return Err(invalid("nt and nx must be at least 1"));
        }
        let method = args.method.unwrap_or(MethodChoice::Greens);
        let oracle_refine = args.oracle_refine.unwrap_or(4);
        if oracle_refine == 0 {
            return Err(invalid("oracle-refine must be at least 1"));
        }
        if verify {
            if nt < 4 || nx < 6 {
                return Err(invalid("verify needs nt >= 4 and nx >= 6"));
            }
        } else if method != MethodChoice::Greens
            && (nx < 2 || nt * oracle_refine < 4 || (nx - 1) * oracle_refine < 5)
        {
            return Err(invalid(format!(
                "the oracle needs nx >= 2, nt * oracle-refine >= 4 and \
                 (nx - 1) * oracle-refine >= 5 (nt = {nt}, nx = {nx}, oracle-refine = {oracle_refine})"
            )));
        }

        let quadrature = QuadratureSpec {
            n_panels: args.panels.unwrap_or(16),
            ..Default::default()
        };
        quadrature.validate().map_err(invalid)?;
        let series = SeriesControl {
            n_images: args.images.unwrap_or(SeriesControl::default().n_images),
            ..Default::default()
        };
        series.validate().map_err(invalid)?;

        let verify_tol = args.verify_tol.unwrap_or(5e-2);
        if !(verify_tol.is_finite() && verify_tol > 0.0) {
            return Err(invalid(format!(
                "verify-tol must be positive, got {verify_tol}"
            )));
        }

        let given = [&args.tau, &args.phi0, &args.phi1, &args.forcing];
        let data = if mode == Mode::Custom {
            let parse = |key: &str, v: &Option<String>, vars: Vars| match v {
                Some(s) => DataExpr::parse(key, s, vars),
                None => Ok(DataExpr::zero()),
            };
            Some(CustomData {
                tau: parse("tau", &args.tau, Vars::X)?,
                phi0: parse("phi0", &args.phi0, Vars::T)?,
                phi1: parse("phi1", &args.phi1, Vars::T)?,
                forcing: parse("forcing", &args.forcing, Vars::TX)?,
            })
        } else if given.iter().any(|v| v.is_some()) {
            return Err(invalid(
                "tau, phi0, phi1 and forcing apply to custom mode only",
            ));
        } else {
            None
        };

        let cfg = RunConfig {
            mode,
            params,
            domain,
            nt,
            nx,
            method,
            quadrature,
            series,
            oracle_refine,
            out: args.out.unwrap_or_else(|| PathBuf::from(".")),
            verify_tol,
            data,
        };
        if !verify {
            for p in &cfg.params {
                cfg.problem(*p).validate().map_err(invalid)?;
            }
        }
        Ok(cfg)
    }

    /// The problem solved for one parameter set.
    pub fn problem(&self, p: FracParams) -> ProblemSpec {
        match (&self.mode, &self.data) {
            (Mode::Custom, Some(d)) => {
                let mut ps = ProblemSpec::new(self.domain, p);
                if !d.tau.is_zero() {
                    let e = d.tau.clone();
                    ps = ps.with_tau(move |x| e.eval(0.0, x));
                }
                if !d.phi0.is_zero() {
                    let e = d.phi0.clone();
                    ps = ps.with_phi0(move |t| e.eval(t, 0.0));
                }
                if !d.phi1.is_zero() {
                    let e = d.phi1.clone();
                    ps = ps.with_phi1(move |t| e.eval(t, 0.0));
                }
                if !d.forcing.is_zero() {
                    let e = d.forcing.clone();
                    ps = ps.with_forcing(move |t, x| e.eval(t, x));
                }
                ps
            }
            (mode, _) => example_problem(*mode, self.domain, p),
        }
    }

    /// Output nodes: `t = T n / nt` for `n = 1..=nt`, and `nx` equispaced
    /// points from wall to wall (the midpoint when `nx = 1`).
    pub fn output_nodes(&self) -> (Vec<f64>, Vec<f64>) {
        let (t_max, a) = (self.domain.t_max, self.domain.a);
        let ts = (1..=self.nt)
            .map(|n| t_max * n as f64 / self.nt as f64)
            .collect();
        let xs = if self.nx == 1 {
            vec![0.5 * a]
        } else {
            (0..self.nx)
                .map(|i| a * i as f64 / (self.nx - 1) as f64)
                .collect()
        };
        (ts, xs)
    }
}
