use crate::params::SeriesControl;

/// Consecutive small terms required before a series is declared settled.
pub const QUIET_RUN: usize = 3;

/// Partial sums whose largest term exceeds this are cancellation-dominated.
///
/// For the alternating Wright-type series behind every kernel, the true sum
/// is then below `1 / max|term|` (observed in extended precision), so the
/// value is reported as 0 with that bound instead of as rounding noise.
pub const NEGLIGIBLE_GROWTH: f64 = 1e8;

/// Tolerance stop rule: settles after [`QUIET_RUN`] consecutive terms
/// below `abs_tol + rel_tol * |partial|`. Terms with index below `start`
/// never count, which keeps isolated gamma-pole zeros from faking a stop.
#[derive(Debug, Clone)]
pub struct StopRule {
    abs_tol: f64,
    rel_tol: f64,
    start: usize,
    quiet: usize,
}

impl StopRule {
    pub fn new(ctl: &SeriesControl, start: usize) -> Self {
        Self {
            abs_tol: ctl.abs_tol,
            rel_tol: ctl.rel_tol,
            start,
            quiet: 0,
        }
    }

    /// Feed term `k` after it was added to `partial`; true once settled.
    pub fn settled(&mut self, k: usize, term: f64, partial: f64) -> bool {
        self.settled_scaled(k, term, partial, 1.0)
    }

    /// As [`settled`](Self::settled) for a series normalized by `scale`,
    /// i.e. with absolute tolerance `abs_tol * scale`.
    pub fn settled_scaled(&mut self, k: usize, term: f64, partial: f64, scale: f64) -> bool {
        if k < self.start {
            return false;
        }
        if term.abs() <= self.abs_tol * scale + self.rel_tol * partial.abs() {
            self.quiet += 1;
        } else {
            self.quiet = 0;
        }
        self.quiet >= QUIET_RUN
    }
}

/// Index before which `1/Gamma(slope * k + offset)` may vanish at several
/// consecutive `k`. That only happens for integer slopes; otherwise pole
/// zeros are isolated and the stop rule may count from the first term.
pub fn first_pole_free(slope: f64, offset: f64) -> usize {
    if slope <= 0.0 || offset > 0.0 || slope.fract() != 0.0 {
        return 0;
    }
    (-offset / slope).floor() as usize + 1
}

/// A series value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    /// Rounding estimate plus, when `negligible`, the bound on the dropped value.
    pub error: f64,
    /// True if the sum was replaced by 0 because of catastrophic cancellation.
    pub negligible: bool,
    pub largest_term: f64,
}

impl SeriesValue {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            error: 0.0,
            negligible: false,
            largest_term: value.abs(),
        }
    }
}
