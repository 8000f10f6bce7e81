//! Prabhakar fractional integral and the Riemann-Liouville-type and
//! regularized (Caputo-type) Prabhakar derivatives of functions of time.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::params::{FracParams, SeriesControl};
use crate::quadrature::{graded_rule, uniform_rule, GaussLegendre, QuadratureSpec};
use crate::specfun::PrabhakarSeries;

type Scalar = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A function of time with an optional derivative.
#[derive(Clone)]
pub struct TimeFunction {
    eval: Scalar,
    deriv: Option<Scalar>,
}

impl fmt::Debug for TimeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TimeFunction")
            .field("has_derivative", &self.deriv.is_some())
            .finish()
    }
}

impl TimeFunction {
    pub fn new(eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(eval),
            deriv: None,
        }
    }

    pub fn with_derivative(
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            eval: Arc::new(eval),
            deriv: Some(Arc::new(deriv)),
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::with_derivative(move |_| c, |_| 0.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    pub fn deriv(&self, t: f64) -> Option<f64> {
        self.deriv.as_ref().map(|d| d(t))
    }

    pub fn has_derivative(&self) -> bool {
        self.deriv.is_some()
    }

    /// `a g + b h`; the derivative is kept when both operands carry one.
    pub fn combine(a: f64, g: &TimeFunction, b: f64, h: &TimeFunction) -> TimeFunction {
        let (g1, h1) = (g.eval.clone(), h.eval.clone());
        let eval: Scalar = Arc::new(move |t| a * g1(t) + b * h1(t));
        let deriv = match (&g.deriv, &h.deriv) {
            (Some(gd), Some(hd)) => {
                let (gd, hd) = (gd.clone(), hd.clone());
                Some(Arc::new(move |t| a * gd(t) + b * hd(t)) as Scalar)
            }
            _ => None,
        };
        TimeFunction { eval, deriv }
    }

    /// `g - g(0)`.
    pub fn minus_initial(&self) -> TimeFunction {
        let g0 = self.eval(0.0);
        TimeFunction::combine(1.0, self, -g0, &TimeFunction::constant(1.0))
    }
}

/// Order `(alpha, beta', gamma', delta)` of a Prabhakar integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrabhakarOrder {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl PrabhakarOrder {
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Self {
        Self {
            alpha,
            beta,
            gamma,
            delta,
        }
    }

    /// The order `(alpha, 1 - beta, -gamma, delta)` inside both derivatives.
    pub fn derivative_kernel(p: &FracParams) -> Self {
        Self::new(p.alpha(), 1.0 - p.beta(), -p.gamma(), p.delta())
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("operators need t > 0, got {t}")));
    }
    Ok(())
}

/// Evaluate `int_0^t kernel(t - s) h(s) ds` on one mesh, returning the value
/// and the integral of the absolute integrand. `h` receives both `s` and
/// `t - s`, the latter free of the rounding in forming `s`.
fn convolve(
    kernel: &dyn Fn(f64) -> Result<f64>,
    h: &dyn Fn(f64, f64) -> f64,
    t: f64,
    q_near: f64,
    n_panels: usize,
    gl: &GaussLegendre,
) -> Result<(f64, f64)> {
    let half = 0.5 * t;
    let (mut sum, mut abs) = (0.0, 0.0);
    for (sigma, w) in graded_rule(half, q_near, n_panels, gl) {
        let v = w * kernel(sigma)? * h(t - sigma, sigma);
        sum += v;
        abs += v.abs();
    }
    for (s, w) in uniform_rule(0.0, half, n_panels, gl) {
        let v = w * kernel(t - s)? * h(s, t - s);
        sum += v;
        abs += v.abs();
    }
    Ok((sum, abs))
}

/// Run [`convolve`] at `n_panels` and `2 n_panels` and insist they agree.
fn convolve_checked(
    kernel: &dyn Fn(f64) -> Result<f64>,
    h: &dyn Fn(f64, f64) -> f64,
    t: f64,
    q_near: f64,
    q: &QuadratureSpec,
    ctl: &SeriesControl,
) -> Result<f64> {
    q.validate()?;
    let gl = GaussLegendre::new(q.nodes_per_panel);
    let (coarse, _) = convolve(kernel, h, t, q_near, q.n_panels, &gl)?;
    let (fine, abs) = convolve(kernel, h, t, q_near, 2 * q.n_panels, &gl)?;
    if (coarse - fine).abs() > 10.0 * (ctl.rel_tol * abs + ctl.abs_tol) {
        return Err(Error::QuadratureFailure { coarse, fine });
    }
    Ok(fine)
}

/// Prabhakar integral `int_0^t (t-s)^(beta'-1) E^gamma'_{alpha,beta'}[delta (t-s)^alpha] g(s) ds`.
pub fn prabhakar_integral(
    g: &TimeFunction,
    t: f64,
    order: &PrabhakarOrder,
    q: &QuadratureSpec,
    ctl: &SeriesControl,
) -> Result<f64> {
    check_time(t)?;
    if !(order.beta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "integral order needs beta' > 0, got {}",
            order.beta
        )));
    }
    let series = PrabhakarSeries::new(order.alpha, order.beta, order.gamma, ctl)?;
    let kernel = |s: f64| -> Result<f64> {
        Ok(s.powf(order.beta - 1.0) * series.eval(order.delta * s.powf(order.alpha))?)
    };
    convolve_checked(
        &kernel,
        &|s, _| g.eval(s),
        t,
        q.grading_for(order.beta),
        q,
        ctl,
    )
}

/// RL-type derivative `d/dt I^{alpha,1-beta,-gamma,delta} g`, evaluated as
/// `g(t) k(t) + int_0^t k'(t-s) (g(s) - g(t)) ds` with the termwise kernel
/// derivative `k'(s) = s^(-beta-1) E^-gamma_{alpha,-beta}(delta s^alpha)`.
///
/// Within `sqrt(eps) t` of `s = t` the difference `g(s) - g(t)` is rounding
/// noise, which `k'` would amplify, so it is replaced by its secant there.
pub fn prabhakar_deriv_rl(
    g: &TimeFunction,
    t: f64,
    p: &FracParams,
    q: &QuadratureSpec,
    ctl: &SeriesControl,
) -> Result<f64> {
    check_time(t)?;
    let k = PrabhakarSeries::new(p.alpha(), 1.0 - p.beta(), -p.gamma(), ctl)?;
    let dk = PrabhakarSeries::new(p.alpha(), -p.beta(), -p.gamma(), ctl)?;
    let (alpha, beta, delta) = (p.alpha(), p.beta(), p.delta());
    let gt = g.eval(t);
    let kt = t.powf(-beta) * k.eval(delta * t.powf(alpha))?;
    let kernel =
        |s: f64| -> Result<f64> { Ok(s.powf(-beta - 1.0) * dk.eval(delta * s.powf(alpha))?) };
    let near = t - t * f64::EPSILON.sqrt();
    let (c, slope) = (t - near, (g.eval(near) - gt) / (t - near));
    let diff = |s: f64, sigma: f64| {
        if sigma < c {
            sigma * slope
        } else {
            g.eval(s) - gt
        }
    };
    let tail = convolve_checked(&kernel, &diff, t, q.grading_for(1.0 - beta), q, ctl)?;
    Ok(gt * kt + tail)
}

/// Cross-check of [`prabhakar_deriv_rl`]: central difference of the integral
/// with step `1e-4 t`.
pub fn prabhakar_deriv_rl_fd(
    g: &TimeFunction,
    t: f64,
    p: &FracParams,
    q: &QuadratureSpec,
    ctl: &SeriesControl,
) -> Result<f64> {
    check_time(t)?;
    let h = 1e-4 * t;
    let order = PrabhakarOrder::derivative_kernel(p);
    let up = prabhakar_integral(g, t + h, &order, q, ctl)?;
    let down = prabhakar_integral(g, t - h, &order, q, ctl)?;
    Ok((up - down) / (2.0 * h))
}

/// Regularized derivative `I^{alpha,1-beta,-gamma,delta} g'`.
pub fn prabhakar_deriv_caputo(
    g: &TimeFunction,
    t: f64,
    p: &FracParams,
    q: &QuadratureSpec,
    ctl: &SeriesControl,
) -> Result<f64> {
    check_time(t)?;
    let d = g.deriv.clone().ok_or(Error::MissingDerivative)?;
    let dg = TimeFunction {
        eval: d,
        deriv: None,
    };
    prabhakar_integral(&dg, t, &PrabhakarOrder::derivative_kernel(p), q, ctl)
}

/// `|D_caputo g(t) - D_rl (g - g(0))(t)|`: the two derivatives agree for
/// absolutely continuous `g`.
pub fn relation_residual(
    g: &TimeFunction,
    t: f64,
    p: &FracParams,
    q: &QuadratureSpec,
    ctl: &SeriesControl,
) -> Result<f64> {
    let caputo = prabhakar_deriv_caputo(g, t, p, q, ctl)?;
    let rl = prabhakar_deriv_rl(&g.minus_initial(), t, p, q, ctl)?;
    Ok((caputo - rl).abs())
}

/// Small-time behaviour of `I^{alpha,1-beta,-gamma,delta} g`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    /// Least-squares slope of `ln|I|` against `ln t`; `None` if a value is 0.
    pub slope: Option<f64>,
}

/// Sample the integral at `t = 1e-1 .. 1e-4` and fit its power-law decay.
pub fn vanishing_integral_limit(
    g: &TimeFunction,
    p: &FracParams,
    ctl: &SeriesControl,
) -> Result<DecayFit> {
    let times = vec![1e-1, 1e-2, 1e-3, 1e-4];
    let order = PrabhakarOrder::derivative_kernel(p);
    let q = QuadratureSpec::default();
    let values = times
        .iter()
        .map(|&t| prabhakar_integral(g, t, &order, &q, ctl))
        .collect::<Result<Vec<_>>>()?;
    let slope = if values.contains(&0.0) {
        None
    } else {
        let xs: Vec<f64> = times.iter().map(|t| t.ln()).collect();
        let ys: Vec<f64> = values.iter().map(|v| v.abs().ln()).collect();
        let n = xs.len() as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        Some(sxy / sxx)
    };
    Ok(DecayFit {
        times,
        values,
        slope,
    })
}
