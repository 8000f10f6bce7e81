//! Green's function `G`, initial-data kernel `G~`, boundary kernels built
//! from `omega`, and the free-space kernel `v`.
//!
//! Every kernel is a radial profile `P(r / w)` scaled by a time-dependent
//! prefactor, where `w = sigma^beta1` and `P` is an `E12` series in `-r / w`.
//! Image sums over `n` are accumulated shell by shell (`n` and `-n` together),
//! which makes `G(x, xi) = G(xi, x)` and `G(0, xi) = 0` hold bit for bit.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::params::{DomainSpec, FracParams, SeriesControl};
use crate::quadrature::{graded_rule, GaussLegendre, QuadratureSpec};
use crate::specfun::{E12Params, E12Slice, E12Table, PrabhakarSeries, SeriesValue};

/// Decay level (`exp(-level)`) beyond which an image term is not evaluated.
const SKIP_LEVEL: f64 = 40.0;
/// Decay level at which spatial integrals are cut off.
pub const INTEGRATION_LEVEL: f64 = 23.0;

/// A kernel value with its error bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: f64,
    /// Bound on the discarded image tail (the outermost retained shell).
    pub truncation_estimate: f64,
    /// Accumulated rounding and negligible-term bounds.
    pub rounding_estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// The wall `xi = 0`.
    Left,
    /// The wall `xi = a`.
    Right,
}

/// How `G~` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TildePath {
    /// The double series obtained by integrating `G` termwise.
    ClosedForm,
    /// Direct quadrature of `int_0^t eta^-beta E(..) G(t, x, eta, xi) d eta`.
    Quadrature,
    /// Both, failing with [`Error::PathMismatch`] beyond `1e-6` relative.
    Verified,
}

/// Exponent `Y(z)` of the super-exponential decay `exp(-Y)` of the profiles.
fn decay_exponent(rho: f64, z: f64) -> f64 {
    (1.0 - rho) * (rho.powf(rho) * z).powf(1.0 / (1.0 - rho))
}

/// Scaled distance at which the profiles have decayed to `exp(-level)`.
pub fn decay_reach(rho: f64, level: f64) -> f64 {
    (level / (1.0 - rho)).powf(1.0 - rho) / rho.powf(rho)
}

/// Lazily built coefficient tables for one parameter set.
#[derive(Debug)]
pub struct Kernels {
    p: FracParams,
    ctl: SeriesControl,
    green: OnceLock<Result<E12Table>>,
    initial: OnceLock<Result<E12Table>>,
    omega: OnceLock<Result<E12Table>>,
    memory: OnceLock<Result<PrabhakarSeries>>,
}

impl Kernels {
    pub fn new(p: &FracParams, ctl: &SeriesControl) -> Result<Self> {
        ctl.validate()?;
        Ok(Self {
            p: *p,
            ctl: *ctl,
            green: OnceLock::new(),
            initial: OnceLock::new(),
            omega: OnceLock::new(),
            memory: OnceLock::new(),
        })
    }

    pub fn params(&self) -> &FracParams {
        &self.p
    }

    pub fn control(&self) -> &SeriesControl {
        &self.ctl
    }

    fn table<'a>(
        &self,
        cell: &'a OnceLock<Result<E12Table>>,
        make: fn(&FracParams) -> E12Params,
    ) -> Result<&'a E12Table> {
        cell.get_or_init(|| E12Table::new(&make(&self.p), &self.ctl))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn slice(&self, table: &E12Table, sigma: f64, prefactor: f64) -> Result<TimeSlice> {
        if !(sigma > 0.0) {
            return Err(Error::Domain(format!(
                "kernel time argument must be positive, got {sigma}"
            )));
        }
        let rho = self.p.beta1();
        Ok(TimeSlice {
            prefactor,
            width: sigma.powf(rho),
            rho,
            series: table.at_y(self.p.delta() * sigma.powf(self.p.alpha()))?,
        })
    }

    /// Profile of `G` at elapsed time `sigma = t - eta`.
    pub fn green_slice(&self, sigma: f64) -> Result<TimeSlice> {
        let table = self.table(&self.green, E12Params::green)?;
        self.slice(table, sigma, 0.5 * sigma.powf(self.p.beta1() - 1.0))
    }

    /// Profile of `G~` at time `t`.
    pub fn initial_slice(&self, t: f64) -> Result<TimeSlice> {
        let table = self.table(&self.initial, E12Params::initial)?;
        self.slice(table, t, 0.5 * t.powf(-self.p.beta1()))
    }

    /// Profile of `omega` at elapsed time `sigma`.
    pub fn omega_slice(&self, sigma: f64) -> Result<TimeSlice> {
        let table = self.table(&self.omega, E12Params::omega)?;
        self.slice(table, sigma, 1.0 / sigma)
    }

    /// Profile of `omega` at the elapsed time whose spatial scale is `width`,
    /// with unit prefactor so that it stays finite as the time underflows.
    pub fn omega_profile_at_width(&self, width: f64) -> Result<TimeSlice> {
        if !(width > 0.0) {
            return Err(Error::Domain(format!(
                "profile width must be positive, got {width}"
            )));
        }
        let table = self.table(&self.omega, E12Params::omega)?;
        let sigma = width.powf(1.0 / self.p.beta1());
        Ok(TimeSlice {
            prefactor: 1.0,
            width,
            rho: self.p.beta1(),
            series: table.at_y(self.p.delta() * sigma.powf(self.p.alpha()))?,
        })
    }

    /// Memory kernel `s^-beta E^-gamma_{alpha,1-beta}(delta s^alpha)` of the derivative.
    pub fn memory_kernel(&self, s: f64) -> Result<f64> {
        let series = self
            .memory
            .get_or_init(|| {
                PrabhakarSeries::new(
                    self.p.alpha(),
                    1.0 - self.p.beta(),
                    -self.p.gamma(),
                    &self.ctl,
                )
            })
            .as_ref()
            .map_err(Clone::clone)?;
        Ok(s.powf(-self.p.beta()) * series.eval(self.p.delta() * s.powf(self.p.alpha()))?)
    }

    pub fn omega(&self, t: f64, x: f64) -> Result<f64> {
        if x < 0.0 {
            return Err(Error::Domain(format!("omega needs x >= 0, got {x}")));
        }
        let s = self.omega_slice(t)?;
        Ok(s.prefactor * s.profile(x)?.value)
    }

    pub fn green(&self, t: f64, x: f64, eta: f64, xi: f64, d: &DomainSpec) -> Result<KernelValue> {
        check_space(x, d)?;
        check_space(xi, d)?;
        if eta < 0.0 || eta >= t {
            return Err(Error::Domain(format!(
                "G needs 0 <= eta < t, got eta = {eta}, t = {t}"
            )));
        }
        self.green_slice(t - eta)?
            .dirichlet_images(x, xi, d.a, self.ctl.n_images, &self.ctl)
    }

    pub fn green_tilde(&self, t: f64, x: f64, xi: f64, d: &DomainSpec) -> Result<KernelValue> {
        check_space(x, d)?;
        check_space(xi, d)?;
        self.initial_slice(t)?
            .dirichlet_images(x, xi, d.a, self.ctl.n_images, &self.ctl)
    }

    /// `G~` by direct quadrature over `eta`, split at `t/2` and graded toward both ends.
    pub fn green_tilde_quadrature(
        &self,
        t: f64,
        x: f64,
        xi: f64,
        d: &DomainSpec,
        q: &QuadratureSpec,
    ) -> Result<f64> {
        check_space(x, d)?;
        check_space(xi, d)?;
        q.validate()?;
        if !(t > 0.0) {
            return Err(Error::Domain(format!("G~ needs t > 0, got {t}")));
        }
        let gl = GaussLegendre::new(q.nodes_per_panel);
        let half = 0.5 * t;
        let mut total = 0.0;
        for (eta, w) in graded_rule(half, q.grading_for(1.0 - self.p.beta()), q.n_panels, &gl) {
            let g = self.green_slice(t - eta)?.dirichlet_images(
                x,
                xi,
                d.a,
                self.ctl.n_images,
                &self.ctl,
            )?;
            total += w * self.memory_kernel(eta)? * g.value;
        }
        for (sigma, w) in graded_rule(half, q.grading_for(self.p.beta1()), q.n_panels, &gl) {
            let g = self.green_slice(sigma)?.dirichlet_images(
                x,
                xi,
                d.a,
                self.ctl.n_images,
                &self.ctl,
            )?;
            total += w * self.memory_kernel(t - sigma)? * g.value;
        }
        Ok(total)
    }

    pub fn boundary(
        &self,
        t: f64,
        x: f64,
        eta: f64,
        side: Side,
        d: &DomainSpec,
    ) -> Result<KernelValue> {
        check_space(x, d)?;
        if eta < 0.0 || eta >= t {
            return Err(Error::Domain(format!(
                "G_xi needs 0 <= eta < t, got eta = {eta}, t = {t}"
            )));
        }
        self.omega_slice(t - eta)?
            .boundary_images(x, side, d.a, self.ctl.n_images, &self.ctl)
    }
}

fn check_space(x: f64, d: &DomainSpec) -> Result<()> {
    if !(0.0..=d.a).contains(&x) {
        return Err(Error::Domain(format!(
            "spatial argument {x} outside [0, {}]",
            d.a
        )));
    }
    Ok(())
}

/// A kernel frozen at one time argument.
#[derive(Debug, Clone)]
pub struct TimeSlice {
    prefactor: f64,
    width: f64,
    rho: f64,
    series: E12Slice,
}

struct Accumulator {
    value: f64,
    rounding: f64,
}

impl TimeSlice {
    pub fn prefactor(&self) -> f64 {
        self.prefactor
    }

    /// Spatial scale `sigma^beta1` of the profile.
    pub fn width(&self) -> f64 {
        self.width
    }

    /// Distance beyond which the profile is below `exp(-level)`.
    pub fn reach(&self, level: f64) -> f64 {
        self.width * decay_reach(self.rho, level)
    }

    /// Profile value at distance `r >= 0`, without the prefactor.
    pub fn profile(&self, r: f64) -> Result<SeriesValue> {
        let z = r / self.width;
        let bound = 10.0 * (-decay_exponent(self.rho, z)).exp();
        if z > decay_reach(self.rho, SKIP_LEVEL) {
            return Ok(SeriesValue {
                value: 0.0,
                error: bound,
                negligible: true,
                largest_term: 0.0,
            });
        }
        let mut v = self.series.eval_decaying(-z)?;
        if v.negligible {
            v.error = v.error.min(bound);
        }
        Ok(v)
    }

    fn add(&self, acc: &mut Accumulator, sign: f64, r: f64) -> Result<f64> {
        let v = self.profile(r)?;
        acc.value += sign * v.value;
        acc.rounding += v.error + f64::EPSILON * v.value.abs();
        Ok(v.value.abs() + v.error)
    }

    /// `prefactor * sum_n [P(|x - xi + 2an|) - P(|x + xi + 2an|)]`.
    ///
    /// Points with `x + xi > a` are evaluated in the reflected frame
    /// `(a - x, a - xi)`, so that the kernel vanishes exactly at both walls.
    pub fn dirichlet_images(
        &self,
        x: f64,
        xi: f64,
        a: f64,
        n_images: usize,
        ctl: &SeriesControl,
    ) -> Result<KernelValue> {
        let (x, xi) = if x + xi > a { (a - x, a - xi) } else { (x, xi) };
        let (diff, sum) = (x - xi, x + xi);
        let mut shell_total = Accumulator {
            value: 0.0,
            rounding: 0.0,
        };
        let mut last_shell = 0.0;
        for k in 0..=n_images {
            let mut plus = Accumulator {
                value: 0.0,
                rounding: 0.0,
            };
            let mut minus = Accumulator {
                value: 0.0,
                rounding: 0.0,
            };
            let shift = 2.0 * a * k as f64;
            let mut size = self.add(&mut plus, 1.0, (diff + shift).abs())?;
            size += self.add(&mut minus, 1.0, (sum + shift).abs())?;
            if k > 0 {
                size += self.add(&mut plus, 1.0, (diff - shift).abs())?;
                size += self.add(&mut minus, 1.0, (sum - shift).abs())?;
            }
            shell_total.value += plus.value - minus.value;
            shell_total.rounding += plus.rounding + minus.rounding;
            last_shell = size;
        }
        self.finish(shell_total, last_shell, n_images, ctl)
    }

    /// `prefactor * sum_n sign(c_n) P(|c_n|)` with `c_n = x + 2na` on the left
    /// wall and `c_n = x + (2n - 1)a` on the right wall.
    pub fn boundary_images(
        &self,
        x: f64,
        side: Side,
        a: f64,
        n_images: usize,
        ctl: &SeriesControl,
    ) -> Result<KernelValue> {
        let mut total = Accumulator {
            value: 0.0,
            rounding: 0.0,
        };
        let mut last_shell = 0.0;
        match side {
            Side::Left => {
                for k in 0..=n_images {
                    let shift = 2.0 * a * k as f64;
                    let mut size = 0.0;
                    let c = x + shift;
                    size += self.add(&mut total, sign(c), c.abs())?;
                    if k > 0 {
                        let c = x - shift;
                        size += self.add(&mut total, sign(c), c.abs())?;
                    }
                    last_shell = size;
                }
            }
            Side::Right => {
                // shell k: the images at n = k + 1 and n = -k, on either side of the wall
                for k in 0..=n_images {
                    let shift = 2.0 * a * k as f64;
                    let c_up = (x + a) + shift;
                    let c_down = (x - a) - shift;
                    let mut size = self.add(&mut total, sign(c_up), c_up.abs())?;
                    size += self.add(&mut total, sign(c_down), c_down.abs())?;
                    last_shell = size;
                }
            }
        }
        self.finish(total, last_shell, n_images, ctl)
    }

    fn finish(
        &self,
        acc: Accumulator,
        last_shell: f64,
        n_images: usize,
        ctl: &SeriesControl,
    ) -> Result<KernelValue> {
        let scale = self.prefactor.abs();
        let truncation_estimate = scale * last_shell;
        if n_images > 0 && truncation_estimate > ctl.abs_tol {
            return Err(Error::NonConvergence {
                context: "image sum",
                limit: n_images,
            });
        }
        Ok(KernelValue {
            value: self.prefactor * acc.value,
            truncation_estimate,
            rounding_estimate: scale * acc.rounding,
        })
    }
}

fn sign(c: f64) -> f64 {
    if c > 0.0 {
        1.0
    } else if c < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `omega(t, x) = t^-1 E12(-x t^-beta1, delta t^alpha)` at the omega instantiation.
pub fn omega_kernel(t: f64, x: f64, p: &FracParams, ctl: &SeriesControl) -> Result<f64> {
    Kernels::new(p, ctl)?.omega(t, x)
}

/// Derivative `G_xi` of the Green's function at the wall selected by `side`.
pub fn boundary_kernel_gxi(
    t: f64,
    x: f64,
    eta: f64,
    side: Side,
    d: &DomainSpec,
    p: &FracParams,
    ctl: &SeriesControl,
) -> Result<KernelValue> {
    Kernels::new(p, ctl)?.boundary(t, x, eta, side, d)
}

/// Green's function `G(t, x, eta, xi)` of the Dirichlet problem.
pub fn green_g(
    t: f64,
    x: f64,
    eta: f64,
    xi: f64,
    d: &DomainSpec,
    p: &FracParams,
    ctl: &SeriesControl,
) -> Result<KernelValue> {
    Kernels::new(p, ctl)?.green(t, x, eta, xi, d)
}

/// Initial-data kernel `G~(t, x, 0, xi)`.
#[allow(clippy::too_many_arguments)]
pub fn green_g_tilde(
    t: f64,
    x: f64,
    xi: f64,
    d: &DomainSpec,
    p: &FracParams,
    q: &QuadratureSpec,
    ctl: &SeriesControl,
    path: TildePath,
) -> Result<KernelValue> {
    let k = Kernels::new(p, ctl)?;
    match path {
        TildePath::ClosedForm => k.green_tilde(t, x, xi, d),
        TildePath::Quadrature => {
            let value = k.green_tilde_quadrature(t, x, xi, d, q)?;
            Ok(KernelValue {
                value,
                truncation_estimate: 0.0,
                rounding_estimate: 0.0,
            })
        }
        TildePath::Verified => {
            let closed = k.green_tilde(t, x, xi, d)?;
            let quadrature = k.green_tilde_quadrature(t, x, xi, d, q)?;
            if (closed.value - quadrature).abs()
                > 1e-6 * closed.value.abs().max(quadrature.abs()) + 1e-12
            {
                return Err(Error::PathMismatch {
                    closed: closed.value,
                    quadrature,
                });
            }
            Ok(closed)
        }
    }
}

/// Free-space kernel `v(t, x, eta, xi)`: the `n = 0` image of `G` alone.
pub fn free_space_v(
    t: f64,
    x: f64,
    eta: f64,
    xi: f64,
    p: &FracParams,
    ctl: &SeriesControl,
) -> Result<f64> {
    if eta >= t {
        return Err(Error::Domain(format!(
            "v needs eta < t, got eta = {eta}, t = {t}"
        )));
    }
    let s = Kernels::new(p, ctl)?.green_slice(t - eta)?;
    Ok(s.prefactor * s.profile((x - xi).abs())?.value)
}
