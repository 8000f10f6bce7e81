use super::gamma::{affine, ln_abs_gamma, recip_gamma_split};
use super::series::{first_pole_free, StopRule};
use crate::error::{Error, Result};
use crate::params::{FracParams, SeriesControl};

/// Precomputed coefficients `(gamma)_k / (k! Gamma(alpha k + beta))` of a
/// Prabhakar function, for repeated evaluation at many arguments.
#[derive(Debug, Clone)]
pub struct PrabhakarSeries {
    coeffs: Vec<f64>,
    start: usize,
    ctl: SeriesControl,
}

impl PrabhakarSeries {
    pub fn new(alpha: f64, beta: f64, gamma: f64, ctl: &SeriesControl) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        ctl.validate()?;
        let mut coeffs = Vec::with_capacity(ctl.k_max + 1);
        let mut ratio = 1.0; // (gamma)_k / k!
        for k in 0..=ctl.k_max {
            if k > 0 {
                ratio *= (gamma + (k - 1) as f64) / k as f64;
            }
            coeffs.push(ratio * recip_gamma_split(affine(&[(alpha, k as f64)], beta)));
        }
        Ok(Self {
            coeffs,
            start: first_pole_free(alpha, beta),
            ctl: *ctl,
        })
    }

    pub fn coefficient(&self, k: usize) -> f64 {
        self.coeffs[k]
    }

    pub fn eval(&self, z: f64) -> Result<f64> {
        let mut rule = StopRule::new(&self.ctl, self.start);
        let mut sum = 0.0;
        let mut zk = 1.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            let term = c * zk;
            sum += term;
            if rule.settled(k, term, sum) {
                return Ok(sum);
            }
            zk *= z;
        }
        Err(Error::NonConvergence {
            context: "Prabhakar series",
            limit: self.ctl.k_max,
        })
    }
}

/// Three-parameter Mittag-Leffler function `E^gamma_{alpha,beta}(z)`.
pub fn prabhakar_ml(alpha: f64, beta: f64, gamma: f64, z: f64, ctl: &SeriesControl) -> Result<f64> {
    PrabhakarSeries::new(alpha, beta, gamma, ctl)?.eval(z)
}

/// Beyond this log-magnitude a Wright term is formed through its logarithm.
const DIRECT_LN: f64 = 600.0;

/// Wright-type function `e^{mu,delta}_{alpha,beta}(z) = sum z^n / (Gamma(alpha n + mu) Gamma(delta - beta n))`.
pub fn wright_e(
    alpha: f64,
    beta: f64,
    mu: f64,
    delta: f64,
    z: f64,
    ctl: &SeriesControl,
) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    ctl.validate()?;
    let mut rule = StopRule::new(ctl, first_pole_free(alpha, mu));
    let mut sum = 0.0;
    let ln_z = z.abs().ln();
    for n in 0..=ctl.k_max {
        let nf = n as f64;
        let (l1, s1) = ln_abs_gamma(alpha * nf + mu);
        let ln_zn = if n == 0 { 0.0 } else { nf * ln_z };
        let (l2, s2) = ln_abs_gamma(delta - beta * nf);
        let term = if s1 == 0.0 || s2 == 0.0 || (n > 0 && z == 0.0) {
            0.0
        } else if l1.abs() < DIRECT_LN && l2.abs() < DIRECT_LN && ln_zn.abs() < DIRECT_LN {
            recip_gamma_split(affine(&[(alpha, nf)], mu))
                * recip_gamma_split(affine(&[(-beta, nf)], delta))
                * z.powi(n as i32)
        } else {
            let sz = if z < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
            sz * s1 * s2 * (ln_zn - l1 - l2).exp()
        };
        sum += term;
        if rule.settled(n, term, sum) {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence {
        context: "Wright-type series",
        limit: ctl.k_max,
    })
}

/// `W(t) = t^{1-beta} E^{-gamma}_{alpha,2-beta}(delta t^alpha)`, the antiderivative
/// of the memory kernel of the regularized Prabhakar derivative.
pub fn kernel_antiderivative_w(t: f64, p: &FracParams, ctl: &SeriesControl) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::Domain(format!("W needs t >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let e = prabhakar_ml(
        p.alpha(),
        2.0 - p.beta(),
        -p.gamma(),
        p.delta() * t.powf(p.alpha()),
        ctl,
    )?;
    Ok(t.powf(1.0 - p.beta()) * e)
}

/// Evaluator for `W` with the series coefficients built once.
#[derive(Debug, Clone)]
pub struct KernelAntiderivative {
    series: PrabhakarSeries,
    p: FracParams,
}

impl KernelAntiderivative {
    pub fn new(p: &FracParams, ctl: &SeriesControl) -> Result<Self> {
        Ok(Self {
            series: PrabhakarSeries::new(p.alpha(), 2.0 - p.beta(), -p.gamma(), ctl)?,
            p: *p,
        })
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if t <= 0.0 {
            return Ok(0.0);
        }
        Ok(t.powf(1.0 - self.p.beta())
            * self.series.eval(self.p.delta() * t.powf(self.p.alpha()))?)
    }
}
