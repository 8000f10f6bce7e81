use super::gamma::{affine, ln_abs_gamma, ln_abs_pochhammer, pochhammer_split, recip_gamma_split};
use super::series::{first_pole_free, SeriesValue, StopRule, NEGLIGIBLE_GROWTH};
use crate::error::{Error, Result};
use crate::params::{FracParams, SeriesControl};

/// Parameters of the bivariate Mittag-Leffler-type function
///
/// `E12(x, y) = sum_{n,m} Gamma(a1 n + b1 m + d1) x^n y^m /
///   (Gamma(a2 n + b2 m + d2) Gamma(a3 n + d3) Gamma(a4 n + d4) Gamma(b3 m + d5))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct E12Params {
    pub a1: f64,
    pub b1: f64,
    pub d1: f64,
    pub a2: f64,
    pub b2: f64,
    pub d2: f64,
    pub a3: f64,
    pub d3: f64,
    pub a4: f64,
    pub d4: f64,
    pub b3: f64,
    pub d5: f64,
}

impl E12Params {
    /// `top = [a1, b1, d1]`, `bottom = [a2, b2, d2, a3, d3, a4, d4, b3, d5]`.
    pub fn new(top: [f64; 3], bottom: [f64; 9]) -> Self {
        let [a1, b1, d1] = top;
        let [a2, b2, d2, a3, d3, a4, d4, b3, d5] = bottom;
        Self {
            a1,
            b1,
            d1,
            a2,
            b2,
            d2,
            a3,
            d3,
            a4,
            d4,
            b3,
            d5,
        }
    }

    pub fn delta1(&self) -> f64 {
        self.a2 + self.a3 + self.a4 - self.a1
    }

    pub fn delta2(&self) -> f64 {
        self.b2 + self.b3 - self.b1
    }

    /// True when `Gamma(a1 n + m + d1) / Gamma(a3 n + d3)` is a Pochhammer symbol.
    pub fn is_foldable(&self) -> bool {
        self.a1 == self.a3 && self.d1 == self.d3 && self.b1 == 1.0
    }

    /// Kernel of the Green's function `G`.
    pub fn green(p: &FracParams) -> Self {
        let (b1, g1) = (p.beta1(), p.gamma1());
        Self::new(
            [-g1, 1.0, g1],
            [-b1, p.alpha(), b1, -g1, g1, 1.0, 1.0, 1.0, 1.0],
        )
    }

    /// Kernel of the initial-data function `G~`.
    pub fn initial(p: &FracParams) -> Self {
        let (b1, g1) = (p.beta1(), p.gamma1());
        Self::new(
            [-g1, 1.0, -g1],
            [-b1, p.alpha(), 1.0 - b1, -g1, -g1, 1.0, 1.0, 1.0, 1.0],
        )
    }

    /// Kernel of `t omega(t, x)`.
    pub fn omega(p: &FracParams) -> Self {
        let (b1, g1) = (p.beta1(), p.gamma1());
        Self::new(
            [-g1, 1.0, 0.0],
            [-b1, p.alpha(), 0.0, -g1, 0.0, 1.0, 1.0, 1.0, 1.0],
        )
    }
}

#[derive(Debug, Clone)]
struct Row {
    coeffs: Vec<f64>,
    start: usize,
}

/// Coefficients of `E12` tabulated once per parameter set.
#[derive(Debug, Clone)]
pub struct E12Table {
    params: E12Params,
    rows: Vec<Row>,
    ctl: SeriesControl,
    row_ctl: SeriesControl,
}

impl E12Table {
    pub fn new(p: &E12Params, ctl: &SeriesControl) -> Result<Self> {
        ctl.validate()?;
        let (delta1, delta2) = (p.delta1(), p.delta2());
        if !(delta1 > 0.0 && delta2 > 0.0) {
            return Err(Error::DivergentParameters { delta1, delta2 });
        }
        let foldable = p.is_foldable();
        let mut rows = Vec::with_capacity(ctl.k_max + 1);
        for n in 0..=ctl.k_max {
            let nf = n as f64;
            let mut coeffs = Vec::with_capacity(ctl.i_max + 1);
            let (l4, s4) = ln_abs_gamma(p.a4 * nf + p.d4);
            for m in 0..=ctl.i_max {
                let mf = m as f64;
                let (l2, s2) = ln_abs_gamma(p.a2 * nf + p.b2 * mf + p.d2);
                let (l5, s5) = ln_abs_gamma(p.b3 * mf + p.d5);
                let (ln_num, s_num) = if foldable {
                    ln_abs_pochhammer(p.d3 + p.a3 * nf, m)
                } else {
                    let arg = p.a1 * nf + p.b1 * mf + p.d1;
                    let (l1, s1) = ln_abs_gamma(arg);
                    if s1 == 0.0 {
                        return Err(Error::UnfoldablePole { arg });
                    }
                    let (l3, s3) = ln_abs_gamma(p.a3 * nf + p.d3);
                    (l1 - l3, s1 * s3)
                };
                let sign = s_num * s2 * s4 * s5;
                let ln_c = ln_num - l2 - l4 - l5;
                coeffs.push(if sign == 0.0 {
                    0.0
                } else if foldable && ln_c > MIN_DIRECT_LN {
                    // products of accurately rounded factors beat exp of a large log
                    pochhammer_split(affine(&[(p.a3, nf)], p.d3), m)
                        * recip_gamma_split(affine(&[(p.a2, nf), (p.b2, mf)], p.d2))
                        * recip_gamma_split(affine(&[(p.b3, mf)], p.d5))
                        * recip_gamma_split(affine(&[(p.a4, nf)], p.d4))
                } else {
                    sign * ln_c.exp()
                });
            }
            let start = first_pole_free(p.b2, p.a2 * nf + p.d2).max(first_pole_free(p.b3, p.d5));
            rows.push(Row { coeffs, start });
        }
        let row_ctl = SeriesControl {
            abs_tol: f64::EPSILON,
            rel_tol: f64::EPSILON,
            ..*ctl
        };
        Ok(Self {
            params: *p,
            rows,
            ctl: *ctl,
            row_ctl,
        })
    }

    pub fn params(&self) -> &E12Params {
        &self.params
    }

    pub fn coefficient(&self, n: usize, m: usize) -> f64 {
        self.rows[n].coeffs[m]
    }

    /// Collapse the inner series at fixed `y`, leaving a power series in `x`.
    pub fn at_y(&self, y: f64) -> Result<E12Slice> {
        let mut coeffs = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            if y == 0.0 {
                coeffs.push(row.coeffs[0]);
                continue;
            }
            // The outer series may cancel by up to NEGLIGIBLE_GROWTH, which would
            // amplify any row error by as much, so rows are summed to machine
            // precision relative to their largest term rather than to rel_tol.
            let mut rule = StopRule::new(&self.row_ctl, row.start);
            let (mut sum, mut scale) = (0.0f64, 0.0f64);
            let mut ym = 1.0;
            let mut done = false;
            for (m, c) in row.coeffs.iter().enumerate() {
                let term = c * ym;
                sum += term;
                scale = scale.max(term.abs());
                if rule.settled_scaled(m, term, sum, scale) {
                    done = true;
                    break;
                }
                ym *= y;
            }
            // an unsettled row only matters if the outer series reaches it
            coeffs.push(if done { sum } else { f64::NAN });
        }
        Ok(E12Slice {
            coeffs,
            ctl: self.ctl,
        })
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<SeriesValue> {
        self.at_y(y)?.eval(x)
    }
}

/// `E12(., y)` at a fixed second argument: a power series in `x`.
#[derive(Debug, Clone)]
pub struct E12Slice {
    coeffs: Vec<f64>,
    ctl: SeriesControl,
}

impl E12Slice {
    /// Column coefficients `C_n(y)`; NaN marks a row whose inner series did not settle.
    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Sum the series in full. A result lost in rounding noise is reported
    /// as 0 and flagged.
    pub fn eval(&self, x: f64) -> Result<SeriesValue> {
        self.sum(x, false)
    }

    /// Like [`eval`](Self::eval) for the kernel instantiations, whose value at
    /// negative `x` is known to decay like the inverse of the largest term:
    /// summation stops as soon as that term passes [`NEGLIGIBLE_GROWTH`].
    pub fn eval_decaying(&self, x: f64) -> Result<SeriesValue> {
        self.sum(x, x < 0.0)
    }

    fn sum(&self, x: f64, early_drop: bool) -> Result<SeriesValue> {
        let mut rule = StopRule::new(&self.ctl, 0);
        let (mut sum, mut sum_sq, mut largest) = (0.0f64, 0.0f64, 0.0f64);
        let mut xn = 1.0;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_nan() {
                return Err(Error::NonConvergence {
                    context: "E12 inner series",
                    limit: self.ctl.i_max,
                });
            }
            let term = c * xn;
            sum += term;
            sum_sq += term * term;
            largest = largest.max(term.abs());
            if early_drop && largest > NEGLIGIBLE_GROWTH {
                return Ok(dropped(largest));
            }
            if rule.settled(n, term, sum) {
                let rounding = ROUNDING_EPS * sum_sq.sqrt();
                if sum.abs() <= rounding {
                    // nothing but rounding noise is left; 0 is the better estimate
                    return Ok(SeriesValue {
                        value: 0.0,
                        error: 2.0 * rounding,
                        negligible: true,
                        largest_term: largest,
                    });
                }
                return Ok(SeriesValue {
                    value: sum,
                    error: rounding,
                    negligible: false,
                    largest_term: largest,
                });
            }
            xn *= x;
        }
        Err(Error::NonConvergence {
            context: "E12 outer series",
            limit: self.ctl.k_max,
        })
    }
}

/// Per-term relative error of coefficient times power, a few ulps; the errors
/// are independent from term to term, so they add in quadrature.
const ROUNDING_EPS: f64 = 4.0 * f64::EPSILON;

/// Below `exp(MIN_DIRECT_LN)` a coefficient is built from logarithms so that
/// no factor product leaves the normal range.
const MIN_DIRECT_LN: f64 = -690.0;

fn dropped(largest: f64) -> SeriesValue {
    SeriesValue {
        value: 0.0,
        error: 1.0 / largest,
        negligible: true,
        largest_term: largest,
    }
}

/// Bivariate Mittag-Leffler-type function `E12(x, y)`.
pub fn bivariate_e12(p: &E12Params, x: f64, y: f64, ctl: &SeriesControl) -> Result<f64> {
    Ok(E12Table::new(p, ctl)?.eval(x, y)?.value)
}
