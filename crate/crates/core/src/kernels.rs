//! Scalar kernels shared by the range certificates and the Student-t
//! experiment: Lambert W0 and its Hoorfar-Hassani bounds, log-gamma with
//! Karatsuba's two-sided bounds, and the Yang-Chu coefficient set.

use std::f64::consts::{E, PI};

use crate::error::{domain, Result};

const INV_E: f64 = 1.0 / E;
const LN_SQRT_PI: f64 = 0.572_364_942_924_700_087_071_713_675_677;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_780_329_736_406;

/// Principal branch `W0(x)`, the solution `w >= -1` of `w e^w = x`.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if x.is_nan() || x < -INV_E {
        return Err(domain("lambert_w0", format!("x = {x} < -1/e")));
    }
    if x == -INV_E {
        return Ok(-1.0);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    if x > E {
        return Ok(w0_of_log(x.ln()));
    }
    if x.abs() < 1e-8 {
        return Ok(x * (1.0 - x * (1.0 - 1.5 * x)));
    }

    let mut w = if x < -0.25 {
        // branch-point expansion in p = sqrt(2(ex + 1))
        let p = (2.0 * (E * x + 1.0)).max(0.0).sqrt();
        -1.0 + p * (1.0 - p * (1.0 / 3.0 - p * 11.0 / 72.0))
    } else {
        x.ln_1p()
    };
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1 <= 0.0 {
            break;
        }
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        let next = (w - step).max(-1.0);
        if (next - w).abs() <= 2.0 * f64::EPSILON * w.abs().max(f64::MIN_POSITIVE) {
            w = next;
            break;
        }
        w = next;
    }
    Ok(w)
}

/// `W0(exp(ln_x))` without forming `exp(ln_x)`; valid for every finite
/// `ln_x` (arguments below `-1/e` are rejected through [`lambert_w0`]).
pub fn lambert_w0_ln(ln_x: f64) -> Result<f64> {
    if ln_x.is_nan() {
        return Err(domain("lambert_w0_ln", "NaN argument"));
    }
    if ln_x > 1.0 {
        Ok(w0_of_log(ln_x))
    } else {
        lambert_w0(ln_x.exp())
    }
}

// Solves w + ln w = ln_x for ln_x > 1 (so w > 1) with Halley steps seeded
// from the Hoorfar-Hassani upper bound.
fn w0_of_log(ln_x: f64) -> f64 {
    if ln_x == f64::INFINITY {
        return f64::INFINITY;
    }
    let mut w = hh_upper_ln(ln_x);
    for _ in 0..64 {
        let g = w + w.ln() - ln_x;
        let g1 = 1.0 + 1.0 / w;
        let g2 = -1.0 / (w * w);
        let step = 2.0 * g * g1 / (2.0 * g1 * g1 - g * g2);
        let next = w - step;
        let done = (next - w).abs() <= 2.0 * f64::EPSILON * w;
        w = next;
        if done {
            break;
        }
    }
    w
}

fn hh_upper_ln(l1: f64) -> f64 {
    let l2 = l1.ln();
    l1 - l2 + (E / (E - 1.0)) * (l2 / l1)
}

fn hh_lower_ln(l1: f64) -> f64 {
    let l2 = l1.ln();
    l1 - l2 + 0.5 * (l2 / l1)
}

/// Hoorfar-Hassani upper bound on `W0(x)` for `x >= e`.
pub fn w0_upper_bound_hh(x: f64) -> Result<f64> {
    if !(x >= E) {
        return Err(domain("w0_upper_bound_hh", format!("x = {x} < e")));
    }
    Ok(hh_upper_ln(x.ln()))
}

/// Hoorfar-Hassani lower bound on `W0(x)` for `x >= e`.
pub fn w0_lower_bound_hh(x: f64) -> Result<f64> {
    if !(x >= E) {
        return Err(domain("w0_lower_bound_hh", format!("x = {x} < e")));
    }
    Ok(hh_lower_ln(x.ln()))
}

/// [`w0_upper_bound_hh`] taking `log x` (requires `log x >= 1`).
pub fn w0_upper_bound_hh_ln(ln_x: f64) -> Result<f64> {
    if !(ln_x >= 1.0) {
        return Err(domain("w0_upper_bound_hh_ln", format!("log x = {ln_x} < 1")));
    }
    Ok(hh_upper_ln(ln_x))
}

/// [`w0_lower_bound_hh`] taking `log x` (requires `log x >= 1`).
pub fn w0_lower_bound_hh_ln(ln_x: f64) -> Result<f64> {
    if !(ln_x >= 1.0) {
        return Err(domain("w0_lower_bound_hh_ln", format!("log x = {ln_x} < 1")));
    }
    Ok(hh_lower_ln(ln_x))
}

/// Karatsuba's bracket on `Gamma(1 + x)`, held as logarithms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaBounds {
    pub ln_lo: f64,
    pub ln_hi: f64,
}

impl GammaBounds {
    pub fn lo(&self) -> f64 {
        self.ln_lo.exp()
    }

    pub fn hi(&self) -> f64 {
        self.ln_hi.exp()
    }

    /// Strict containment of `log Gamma(1+x)`.
    pub fn contains_ln(&self, ln_gamma: f64) -> bool {
        self.ln_lo < ln_gamma && ln_gamma < self.ln_hi
    }
}

/// `sqrt(pi) (x/e)^x (8x^3 + 4x^2 + x + c)^(1/6)` with `c = 1/100` (lower)
/// and `c = 1/30` (upper).
pub fn karatsuba_gamma_bounds(x: f64) -> Result<GammaBounds> {
    if !(x > 0.0) {
        return Err(domain("karatsuba_gamma_bounds", format!("x = {x} <= 0")));
    }
    let base = LN_SQRT_PI + x * (x.ln() - 1.0);
    let sextic = |c: f64| {
        if x > 1.0 {
            let r = 1.0 / x;
            3.0 * x.ln() + (8.0 + r * (4.0 + r * (1.0 + r * c))).ln()
        } else {
            (c + x * (1.0 + x * (4.0 + 8.0 * x))).ln()
        }
    };
    Ok(GammaBounds {
        ln_lo: base + sextic(1.0 / 100.0) / 6.0,
        ln_hi: base + sextic(1.0 / 30.0) / 6.0,
    })
}

/// `log Gamma(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain("log_gamma", format!("x = {x} <= 0")));
    }
    Ok(ln_gamma(x))
}

// B_2k / (2k (2k-1)) for k = 1..8
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

// zeta(k) - 1 for k = 2..31
const ZETA_MINUS_ONE: [f64; 30] = [
    6.44934066848226436472e-1,
    2.020569031595942854e-1,
    8.2323233711138191516e-2,
    3.69277551433699263314e-2,
    1.73430619844491397145e-2,
    8.3492773819228268398e-3,
    4.07735619794433937869e-3,
    2.00839282608221441785e-3,
    9.94575127818085337146e-4,
    4.94188604119464558702e-4,
    2.46086553308048298638e-4,
    1.22713347578489146752e-4,
    6.12481350587048292585e-5,
    3.05882363070204935517e-5,
    1.52822594086518717326e-5,
    7.6371976378997622736e-6,
    3.81729326499983985646e-6,
    1.90821271655393892566e-6,
    9.53962033872796113152e-7,
    4.76932986787806463117e-7,
    2.38450502727732990004e-7,
    1.19219925965311073068e-7,
    5.96081890512594796124e-8,
    2.98035035146522801861e-8,
    1.49015548283650412347e-8,
    7.45071178983542949198e-9,
    3.72533402478845705482e-9,
    1.8626597235130490064e-9,
    9.31327432419668182872e-10,
    4.65662906503378407299e-10,
];

const ONE_MINUS_EULER: f64 = 0.422_784_335_098_467_139_393_487_9;

/// Infallible `log Gamma` for internal callers; NaN outside `x > 0`.
pub(crate) fn ln_gamma(x: f64) -> f64 {
    if !(x > 0.0) {
        return f64::NAN;
    }
    if x >= 10.0 {
        return stirling(x);
    }
    if x < 0.5 {
        return ln_gamma_near_two(x) - x.ln_1p() - x.ln();
    }
    if x < 1.5 {
        return ln_gamma_near_two(x - 1.0) - (x - 1.0).ln_1p();
    }
    // shift down into [1.5, 2.5]; x - n is exact here
    let mut y = x;
    let mut prod = 1.0;
    while y > 2.5 {
        y -= 1.0;
        prod *= y;
    }
    ln_gamma_near_two(y - 2.0) + prod.ln()
}

// log Gamma(2 + eps) for |eps| <= 1/2 (also used at eps = x - 1 for
// log Gamma(1 + eps) after removing log(1 + eps)).
fn ln_gamma_near_two(eps: f64) -> f64 {
    let mut sum = 0.0;
    let mut p = -eps;
    for (i, c) in ZETA_MINUS_ONE.iter().enumerate() {
        p *= -eps;
        sum += c * p / (i + 2) as f64;
    }
    eps * ONE_MINUS_EULER + sum
}

fn stirling(x: f64) -> f64 {
    let r = 1.0 / x;
    let r2 = r * r;
    let mut series = 0.0;
    for c in STIRLING.iter().rev() {
        series = series * r2 + c;
    }
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + series * r
}

/// Yang-Chu coefficient set for order `nu >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YangChuCoefficients {
    pub nu: f64,
    pub c0: f64,
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
}

/// `c0 = 2 (Gamma(nu)/sqrt(pi))^(2/(2nu-1))` evaluated in log space, with
/// the min/max combinations against `nu/2 + 1/4` and `nu - 1/2`.
pub fn yang_chu_coefficients(nu: f64) -> Result<YangChuCoefficients> {
    if !(nu >= 1.0) || !nu.is_finite() {
        return Err(domain("yang_chu_coefficients", format!("nu = {nu} < 1")));
    }
    let c0 = 2.0 * ((ln_gamma(nu) - LN_SQRT_PI) * 2.0 / (2.0 * nu - 1.0)).exp();
    let m1 = nu / 2.0 + 0.25;
    let m2 = nu - 0.5;
    Ok(YangChuCoefficients {
        nu,
        c0,
        a1: c0.min(m1),
        b1: c0.max(m1),
        a2: 1.0 / c0.max(m2),
        b2: 1.0 / c0.min(m2),
    })
}

impl YangChuCoefficients {
    /// Open interval `((2nu/e)(2/e)^(1/(2nu-1)), 2nu/e)` known to contain `c0`.
    pub fn c0_bracket(&self) -> (f64, f64) {
        let hi = 2.0 * self.nu / E;
        (hi * (2.0 / E).powf(1.0 / (2.0 * self.nu - 1.0)), hi)
    }

    /// Log-space bounds on `K_nu(z)` from the large-`z` family:
    /// `K_1/2(z) (1 + a1/z)^(nu-1/2) < K_nu(z) < K_1/2(z) (1 + b1/z)^(nu-1/2)`.
    pub fn ln_bounds_large_z(&self, z: f64) -> (f64, f64) {
        let ln_k_half = 0.5 * (PI / (2.0 * z)).ln() - z;
        let p = self.nu - 0.5;
        (
            ln_k_half + p * (self.a1 / z).ln_1p(),
            ln_k_half + p * (self.b1 / z).ln_1p(),
        )
    }

    /// Log-space bounds on `K_nu(z)` from the small-`z` family:
    /// `(1 + a2 z)^(nu-1/2) < (2/Gamma(nu)) (z/2)^nu e^z K_nu(z) < (1 + b2 z)^(nu-1/2)`.
    pub fn ln_bounds_small_z(&self, z: f64) -> (f64, f64) {
        let shift = ln_gamma(self.nu) - std::f64::consts::LN_2 - self.nu * (z / 2.0).ln() - z;
        let p = self.nu - 0.5;
        (
            shift + p * (self.a2 * z).ln_1p(),
            shift + p * (self.b2 * z).ln_1p(),
        )
    }
}
