// Generated by tests/oracles/generate.py; do not edit.
#![allow(dead_code, clippy::excessive_precision)]

/// E^0.3_{0.8,0.9}(0.5), 200-term partial sum.
pub const PRABHAKAR_08_09_03_AT_05: f64 = 1.1458118042441621;
/// W(1) at alpha 0.8, beta 0.5, gamma 0.3, delta 0.5.
pub const W_EXAMPLE_AT_1: f64 = 9.8628210728151696e-1;
/// E12 at the omega instantiation, (x, y) = (-0.7, 0.2), beta 0.5, brute-force double sum.
pub const E12_OMEGA_M07_02: f64 = 9.4992574724035935e-2;
/// E12 at the Green instantiation, (x, y) = (-0.5, 0), single series.
pub const E12_GREEN_Y0_M05: f64 = 2.556573190490282e-1;
/// Prabhakar integral of s at t = 1, order (0.8, 0.5, 0.3, 0.5), termwise.
pub const INTEGRAL_OF_S_AT_1: f64 = 8.1633033545772045e-1;
/// Prabhakar integral of 1 at t = 1, order (0.8, 0.5, 0.3, 0.5), termwise.
pub const INTEGRAL_OF_ONE_AT_1: f64 = 1.2832260440567521;
/// Left-wall kernel at t = 1, eta = 0.3, x = pi/2, a = pi, beta 0.5, 30 images.
pub const GXI_LEFT_REF: f64 = 1.4664679687628835e-1;
/// Right-wall kernel at the same point.
pub const GXI_RIGHT_REF: f64 = -1.4664679687628835e-1;
/// G~(0.5, 1.2, 0, 1.9), a = pi, beta 0.5.
pub const G_TILDE_REF: f64 = 2.2157450798055249e-1;
/// G(1, 1.0, 0.2, 2.0), a = pi, beta 0.5.
pub const G_REF: f64 = 9.5515934992563836e-2;
