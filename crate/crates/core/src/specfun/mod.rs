//! Special functions: gamma family, Prabhakar and Wright-type series,
//! and the bivariate Mittag-Leffler-type function `E12`.

mod e12;
mod gamma;
mod prabhakar;
mod series;

pub use e12::{bivariate_e12, E12Params, E12Slice, E12Table};
pub use gamma::{gamma, ln_abs_gamma, ln_gamma, pochhammer, recip_gamma, sin_pi};
pub use prabhakar::{
    kernel_antiderivative_w, prabhakar_ml, wright_e, KernelAntiderivative, PrabhakarSeries,
};
pub use series::{SeriesValue, StopRule, NEGLIGIBLE_GROWTH, QUIET_RUN};
