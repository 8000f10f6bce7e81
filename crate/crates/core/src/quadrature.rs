//! Composite Gauss-Legendre rules on algebraically graded meshes.

use crate::error::{Error, Result};

/// Mesh description for weakly singular integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub n_panels: usize,
    /// `None` selects `max(2, 2/beta')` for an endpoint singularity `s^(beta'-1)`.
    pub grading_exponent: Option<f64>,
    pub nodes_per_panel: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            n_panels: 64,
            grading_exponent: None,
            nodes_per_panel: 8,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_panels < 1 || self.nodes_per_panel < 1 {
            return Err(Error::InvalidParameter(
                "quadrature needs at least one panel and node".into(),
            ));
        }
        if let Some(q) = self.grading_exponent {
            if !(q >= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "grading exponent must be >= 1, got {q}"
                )));
            }
        }
        Ok(())
    }

    /// Grading exponent for an endpoint singularity of type `s^(beta_prime - 1)`.
    pub fn grading_for(&self, beta_prime: f64) -> f64 {
        self.grading_exponent
            .unwrap_or_else(|| (2.0 / beta_prime).max(2.0))
    }

    pub fn doubled(&self) -> Self {
        Self {
            n_panels: 2 * self.n_panels,
            ..*self
        }
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                let p = if n == 0 {
                    1.0
                } else if n == 1 {
                    x
                } else {
                    p1
                };
                let pm = if n == 1 { 1.0 } else { p0 };
                dp = nf * (x * p - pm) / (x * x - 1.0);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            if n == 1 {
                x = 0.0;
                dp = 1.0;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Append nodes and weights for `[lo, hi]` to `out`.
    pub fn push_interval(&self, lo: f64, hi: f64, out: &mut Vec<(f64, f64)>) {
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            out.push((mid + half * x, half * w));
        }
    }
}

/// Rule for `int_0^len h(s) ds`, clustered at `s = 0` through `s = len * u^q`
/// with composite Gauss-Legendre in `u`.
pub fn graded_rule(len: f64, q: f64, n_panels: usize, gl: &GaussLegendre) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n_panels * gl.nodes.len());
    let step = 1.0 / n_panels as f64;
    for j in 0..n_panels {
        let (u0, u1) = (j as f64 * step, (j + 1) as f64 * step);
        let (mid, half) = (0.5 * (u0 + u1), 0.5 * (u1 - u0));
        for (x, w) in gl.nodes.iter().zip(&gl.weights) {
            let u: f64 = mid + half * x;
            out.push((len * u.powf(q), len * q * u.powf(q - 1.0) * half * w));
        }
    }
    out
}

/// Uniform composite rule on `[lo, hi]`.
pub fn uniform_rule(lo: f64, hi: f64, n_panels: usize, gl: &GaussLegendre) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n_panels * gl.nodes.len());
    let h = (hi - lo) / n_panels as f64;
    for j in 0..n_panels {
        gl.push_interval(lo + j as f64 * h, lo + (j + 1) as f64 * h, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        for n in 1..12 {
            let gl = GaussLegendre::new(n);
            for p in 0..(2 * n) {
                let s: f64 = gl
                    .nodes
                    .iter()
                    .zip(&gl.weights)
                    .map(|(x, w)| w * x.powi(p as i32))
                    .sum();
                let exact = if p % 2 == 1 {
                    0.0
                } else {
                    2.0 / (p as f64 + 1.0)
                };
                assert!((s - exact).abs() < 1e-14, "n = {n}, p = {p}: {s}");
            }
        }
    }

    #[test]
    fn graded_rule_handles_endpoint_singularity() {
        let gl = GaussLegendre::new(8);
        let beta: f64 = 0.1;
        let rule = graded_rule(1.0, 2.0 / beta, 32, &gl);
        let s: f64 = rule.iter().map(|(x, w)| w * x.powf(beta - 1.0)).sum();
        assert!((s - 1.0 / beta).abs() < 1e-12, "{s}");
    }
}
