//! WebAssembly bindings for the static page in `www/`.
//!
//! Every exported function returns a flat `Float64Array` of samples. The
//! plain-Rust versions (no `js_` prefix) are what the bindings wrap.

use std::f64::consts::PI;

use prabhakar_green::greens::Kernels;
use prabhakar_green::solver::{solve_u, ProblemSpec};
use prabhakar_green::specfun::PrabhakarSeries;
use prabhakar_green::{DomainSpec, FracParams, QuadratureSpec, SeriesControl};
use wasm_bindgen::prelude::*;

pub const ALPHA: f64 = 0.8;
pub const GAMMA: f64 = 0.3;
pub const DELTA: f64 = 0.5;
pub const T_MAX: f64 = 2.0;

/// `n >= 2` equispaced points on `[lo, hi]`, both ends exact.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let h = (hi - lo) / (n - 1) as f64;
    let mut v: Vec<f64> = (0..n).map(|i| lo + h * i as f64).collect();
    v[n - 1] = hi;
    v
}

fn check_count(n: usize) -> Result<(), String> {
    if (2..=2001).contains(&n) {
        Ok(())
    } else {
        Err(format!("sample count must be in 2..=2001, got {n}"))
    }
}

/// `E^gamma_{alpha,beta}(z)` at `n` points of `[z_lo, z_hi]`.
pub fn mittag_leffler_curve(
    alpha: f64,
    beta: f64,
    gamma: f64,
    z_lo: f64,
    z_hi: f64,
    n: usize,
) -> Result<Vec<f64>, String> {
    check_count(n)?;
    let series = PrabhakarSeries::new(alpha, beta, gamma, &SeriesControl::default())
        .map_err(|e| e.to_string())?;
    linspace(z_lo, z_hi, n)
        .into_iter()
        .map(|z| series.eval(z).map_err(|e| e.to_string()))
        .collect()
}

/// `G(t, x; 0, xi)` on `[0, pi]` at `n` points of `x`, for the example
/// `alpha`, `gamma`, `delta` and the given `beta`.
pub fn green_profile(beta: f64, t: f64, xi: f64, n: usize) -> Result<Vec<f64>, String> {
    check_count(n)?;
    let p = FracParams::new(ALPHA, beta, GAMMA, DELTA).map_err(|e| e.to_string())?;
    let d = DomainSpec::new(PI, T_MAX).map_err(|e| e.to_string())?;
    let k = Kernels::new(&p, &SeriesControl::default()).map_err(|e| e.to_string())?;
    linspace(0.0, PI, n)
        .into_iter()
        .map(|x| {
            k.green(t, x, 0.0, xi, &d)
                .map(|v| v.value)
                .map_err(|e| e.to_string())
        })
        .collect()
}

/// `u(t, x)` of example 1 (`tau = sin x`) or example 2 (`f = t sin x`) at
/// `nx` points of `[0, pi]`.
pub fn example_slice(example: u8, beta: f64, t: f64, nx: usize) -> Result<Vec<f64>, String> {
    check_count(nx)?;
    let p = FracParams::new(ALPHA, beta, GAMMA, DELTA).map_err(|e| e.to_string())?;
    let d = DomainSpec::new(PI, T_MAX).map_err(|e| e.to_string())?;
    let ps = match example {
        1 => ProblemSpec::new(d, p).with_tau(f64::sin),
        2 => ProblemSpec::new(d, p).with_forcing(|t, x| t * x.sin()),
        _ => return Err(format!("no example {example}")),
    };
    let q = QuadratureSpec {
        n_panels: 16,
        ..Default::default()
    };
    let xs = linspace(0.0, PI, nx);
    let field =
        solve_u(&ps, &[t], &xs, &q, &SeriesControl::default()).map_err(|e| e.to_string())?;
    Ok(field.row(0).to_vec())
}

#[wasm_bindgen(js_name = mittagLefflerCurve)]
pub fn js_mittag_leffler_curve(
    alpha: f64,
    beta: f64,
    gamma: f64,
    z_lo: f64,
    z_hi: f64,
    n: usize,
) -> Result<Vec<f64>, JsError> {
    mittag_leffler_curve(alpha, beta, gamma, z_lo, z_hi, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = greenProfile)]
pub fn js_green_profile(beta: f64, t: f64, xi: f64, n: usize) -> Result<Vec<f64>, JsError> {
    green_profile(beta, t, xi, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = exampleSlice)]
pub fn js_example_slice(example: u8, beta: f64, t: f64, nx: usize) -> Result<Vec<f64>, JsError> {
    example_slice(example, beta, t, nx).map_err(|e| JsError::new(&e))
}
