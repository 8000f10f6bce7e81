use crate::error::{Error, Result};

/// The four parameters of the regularized Prabhakar derivative.
///
/// Fields are private so that the `0 < beta < 1` and `alpha > 0` checks
/// cannot be bypassed; the halves used by the kernels are derived on demand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
}

impl FracParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        if beta == 1.0 {
            return Err(Error::InvalidParameter(
                "beta = 1 is excluded: the derivative order must satisfy 0 < beta < 1".into(),
            ));
        }
        if !(beta.is_finite() && beta > 0.0 && beta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "beta must lie in (0, 1), got {beta}"
            )));
        }
        if !gamma.is_finite() || !delta.is_finite() {
            return Err(Error::InvalidParameter(
                "gamma and delta must be finite".into(),
            ));
        }
        Ok(Self {
            alpha,
            beta,
            gamma,
            delta,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn beta1(&self) -> f64 {
        self.beta / 2.0
    }
    pub fn gamma1(&self) -> f64 {
        self.gamma / 2.0
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.alpha, beta, self.gamma, self.delta)
    }
}

/// Rectangular space-time domain `(0, t_max) x (0, a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainSpec {
    pub a: f64,
    pub t_max: f64,
}

impl DomainSpec {
    pub fn new(a: f64, t_max: f64) -> Result<Self> {
        let d = Self { a, t_max };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.a > 0.0 && self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "domain needs 0 < a, T < inf, got a = {}, T = {}",
                self.a, self.t_max
            )));
        }
        Ok(())
    }
}

/// Truncation orders and tolerances for every power series and image sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    /// Maximum order of series in the spatial variable (and of single series).
    pub k_max: usize,
    /// Maximum order of the inner series in `delta * t^alpha`.
    pub i_max: usize,
    /// Image sums run over `n` in `[-n_images, n_images]`.
    pub n_images: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            k_max: 170,
            i_max: 60,
            n_images: 8,
            abs_tol: 1e-14,
            rel_tol: 1e-12,
        }
    }
}

impl SeriesControl {
    pub fn validate(&self) -> Result<()> {
        if self.k_max < 1 || self.i_max < 1 || self.n_images < 1 {
            return Err(Error::InvalidParameter(
                "series orders must be at least 1".into(),
            ));
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter(
                "series tolerances must be positive".into(),
            ));
        }
        Ok(())
    }
}
