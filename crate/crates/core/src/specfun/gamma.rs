//! Gamma function family on the real line (Stirling series with upward shift).

use std::f64::consts::PI;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
/// Arguments from here on use the Stirling series directly.
const STIRLING_FROM: f64 = 10.0;
/// `B_2k / (2k (2k - 1))` for `k = 1..=8`.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// `sin(pi x)` with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    if x == x.floor() {
        return 0.0;
    }
    let r = x - 2.0 * (x / 2.0).round();
    let (s, r) = if r < 0.0 { (-1.0, -r) } else { (1.0, r) };
    let r = if r > 0.5 { 1.0 - r } else { r };
    s * (PI * r).sin()
}

/// `ln Gamma(y) - ((y - 1/2) ln y - y + ln(2 pi) / 2)` for `y >= 10`.
fn stirling_tail(y: f64) -> f64 {
    let r = 1.0 / (y * y);
    STIRLING.iter().rev().fold(0.0, |acc, c| acc * r + c) / y
}

/// `y >= 10` shifted from `x` by `n` with the rounding `lost` in `y`, and
/// `x (x + 1) ... (x + n - 1)`.
fn shift_up(x: f64) -> (f64, f64, f64) {
    if x >= STIRLING_FROM {
        return (x, 0.0, 1.0);
    }
    let n = (STIRLING_FROM - x).ceil();
    let y = x + n;
    let back = y - x;
    let lost = (x - (y - back)) + (n - back);
    let product = (0..n as u32).fold(1.0, |p, i| p * (x + i as f64));
    (y, lost, product)
}

/// Rounding correction `lost * psi(y)` to `ln Gamma(y)`.
fn shift_correction(y: f64, lost: f64) -> f64 {
    lost * (y.ln() - 0.5 / y)
}

/// `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        return (PI / sin_pi(x)).ln() - ln_gamma(1.0 - x);
    }
    let (y, lost, product) = shift_up(x);
    HALF_LN_2PI + (y - 0.5) * y.ln() - y + stirling_tail(y) + shift_correction(y, lost)
        - product.ln()
}

/// `Gamma(x)` on the whole real line; infinite at the poles.
pub fn gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return PI / (sin_pi(x) * gamma(1.0 - x));
    }
    if x == x.floor() && x <= 23.0 {
        return (1..x as u32).fold(1.0, |p, k| p * k as f64);
    }
    if x > 171.7 {
        return f64::INFINITY;
    }
    let (y, lost, product) = shift_up(x);
    // y^(y - 1/2) is split so that it does not overflow before e^-y damps it
    let h = y.powf(0.5 * (y - 0.5));
    let tail = (stirling_tail(y) + shift_correction(y, lost)).exp();
    (2.0 * PI).sqrt() * h * (-y).exp() * h * tail / product
}

/// `1/Gamma(x)`; exactly zero at the non-positive integers.
pub fn recip_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x < 0.5 {
        // reflection: 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi
        let y = 1.0 - x;
        if y < 171.0 {
            return sin_pi(x) * gamma(y) / PI;
        }
        return sin_pi(x) * (ln_gamma(y) - PI.ln()).exp();
    }
    if x < 171.0 {
        1.0 / gamma(x)
    } else {
        (-ln_gamma(x)).exp()
    }
}

/// A value `hi + lo` carried to about twice working precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Split {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// `c + sum a_i x_i` with every product and sum error kept.
///
/// Gamma arguments near a pole and Pochhammer factors near zero turn the
/// rounding of their affine argument into a large relative error; the
/// retained `lo` part restores it.
pub(crate) fn affine(terms: &[(f64, f64)], c: f64) -> Split {
    let (mut hi, mut lo) = (c, 0.0);
    for &(a, x) in terms {
        let p = a * x;
        let e = a.mul_add(x, -p);
        let (s, err) = two_sum(hi, p);
        hi = s;
        lo += err + e;
    }
    let (hi, err) = two_sum(hi, lo);
    Split { hi, lo: err }
}

/// `pi cot(pi x)` for non-integer `x`.
fn pi_cot_pi(x: f64) -> f64 {
    let r = x - x.round();
    PI / (PI * r).tan()
}

/// Digamma function `psi = Gamma' / Gamma` away from the poles.
pub(crate) fn digamma(x: f64) -> f64 {
    if x < 0.5 {
        return digamma(1.0 - x) - pi_cot_pi(x);
    }
    let mut shift = 0.0;
    let mut y = x;
    while y < STIRLING_FROM {
        shift += 1.0 / y;
        y += 1.0;
    }
    let r = 1.0 / (y * y);
    let tail = r
        * (1.0 / 12.0
            - r * (1.0 / 120.0
                - r * (1.0 / 252.0
                    - r * (1.0 / 240.0 - r * (1.0 / 132.0 - r * (691.0 / 32760.0 - r / 12.0))))));
    y.ln() - 0.5 / y - tail - shift
}

/// `1/Gamma(hi + lo)` to first order in `lo`.
pub(crate) fn recip_gamma_split(x: Split) -> f64 {
    let v = recip_gamma(x.hi);
    if x.lo == 0.0 {
        return v;
    }
    if v == 0.0 {
        // next to the pole at -k, 1/Gamma(-k + e) = (-1)^k k! e
        let k = -x.hi;
        let sign = if k % 2.0 == 0.0 { 1.0 } else { -1.0 };
        return sign * gamma(k + 1.0) * x.lo;
    }
    v * (1.0 - digamma(x.hi) * x.lo)
}

/// `(c)_k` for a split base, to first order in `c.lo`.
pub(crate) fn pochhammer_split(c: Split, k: usize) -> f64 {
    let (mut p, mut corr) = (1.0, 0.0);
    for i in 0..k {
        let (f, e) = two_sum(c.hi, i as f64);
        let e = e + c.lo;
        if f == 0.0 {
            if e == 0.0 {
                return 0.0;
            }
            p *= e;
        } else {
            p *= f;
            corr += e / f;
        }
    }
    p * (1.0 + corr)
}

/// `ln|Gamma(x)|` together with the sign of `Gamma(x)`; `(inf, 0)` at the poles.
pub fn ln_abs_gamma(x: f64) -> (f64, f64) {
    if is_nonpositive_integer(x) {
        return (f64::INFINITY, 0.0);
    }
    if x > 0.0 {
        return (ln_gamma(x), 1.0);
    }
    let s = sin_pi(x);
    ((PI / s.abs()).ln() - ln_gamma(1.0 - x), s.signum())
}

/// Rising factorial `c (c + 1) ... (c + k - 1)`.
pub fn pochhammer(c: f64, k: usize) -> f64 {
    let mut p = 1.0;
    for i in 0..k {
        let f = c + i as f64;
        if f == 0.0 {
            return 0.0;
        }
        p *= f;
    }
    p
}

/// `ln|(c)_k|` and the sign of `(c)_k`; sign is 0 when a factor vanishes.
pub fn ln_abs_pochhammer(c: f64, k: usize) -> (f64, f64) {
    let mut l = 0.0;
    let mut s = 1.0;
    for i in 0..k {
        let f = c + i as f64;
        if f == 0.0 {
            return (f64::NEG_INFINITY, 0.0);
        }
        if f < 0.0 {
            s = -s;
        }
        l += f.abs().ln();
    }
    (l, s)
}
