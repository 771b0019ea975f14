//! Student-t characteristic function and its Gil-Pelaez inversion.
//!
//! `phi_nu(t) = 2 psi_(nu/2)(sqrt(nu) |t|)` with
//! `psi_nu(z) = K_nu(z) (z/2)^nu / Gamma(nu)`. Three evaluation methods are
//! offered so their floating-point behaviour can be compared:
//!
//! * `Direct`: the formula in linear arithmetic, as a textbook
//!   implementation would write it. It overflows for large orders.
//! * `LogDirect`: logarithms of the same linear-space Bessel value.
//! * `LogRecursion`: every term in log space with `log K` from the
//!   log-domain recursion.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::kernels::ln_gamma;
use crate::quadrature::{gauss_kronrod_integrate, QuadratureConfig, QuadratureResult};
use crate::recursion::log_k;
use crate::seed::bessel_k;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Direct,
    LogDirect,
    LogRecursion,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Direct, Method::LogDirect, Method::LogRecursion];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::LogDirect => "logdirect",
            Method::LogRecursion => "logrec",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Method::Direct),
            "logdirect" => Ok(Method::LogDirect),
            "logrec" => Ok(Method::LogRecursion),
            _ => Err(domain("Method::from_str", format!("unknown method `{s}`"))),
        }
    }
}

/// Arithmetic used for the characteristic function. `Single` rounds every
/// intermediate through `f32`, emulating a binary32 implementation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Precision {
    Double,
    Single,
}

fn check_nu(op: &'static str, nu: f64) -> Result<()> {
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(domain(op, format!("nu = {nu} must be positive and finite")));
    }
    Ok(())
}

/// `psi_nu(z) = K_nu(z) (z/2)^nu / Gamma(nu)`, evaluated in log space;
/// `psi_nu(0) = 1/2`.
pub fn psi(nu: f64, z: f64) -> Result<f64> {
    check_nu("psi", nu)?;
    if !(z >= 0.0) || !z.is_finite() {
        return Err(domain("psi", format!("z = {z} must be >= 0 and finite")));
    }
    if z == 0.0 {
        return Ok(0.5);
    }
    Ok((log_k(nu, z)? - ln_gamma(nu) + nu * (0.5 * z).ln()).exp())
}

fn r32(x: f64) -> f64 {
    x as f32 as f64
}

/// `phi_nu(t)` in double precision.
pub fn student_cf(nu: f64, t: f64, method: Method) -> Result<f64> {
    student_cf_with(nu, t, method, Precision::Double)
}

/// `phi_nu(t)` with an explicit arithmetic. Non-finite values from the
/// `Direct` and `LogDirect` methods are returned as they are.
pub fn student_cf_with(nu: f64, t: f64, method: Method, precision: Precision) -> Result<f64> {
    check_nu("student_cf", nu)?;
    if t.is_nan() {
        return Err(domain("student_cf", "t is NaN"));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    let half = 0.5 * nu;
    let z = nu.sqrt() * t.abs();
    if z.is_infinite() {
        return Ok(0.0);
    }
    let single = precision == Precision::Single;
    let rd = |x: f64| if single { r32(x) } else { x };
    match method {
        Method::Direct => {
            // K(z) z^(nu/2) / (Gamma(nu/2) 2^(nu/2 - 1))
            let k = rd(bessel_k(half, z)?);
            let zp = rd(rd(z).powf(rd(half)));
            let g = rd(ln_gamma(half).exp());
            let p2 = rd(rd(2.0).powf(rd(half - 1.0)));
            Ok(rd(rd(rd(k * zp) / g) / p2))
        }
        Method::LogDirect | Method::LogRecursion => {
            let lk = if method == Method::LogDirect {
                bessel_k(half, z)?.ln()
            } else {
                log_k(half, z)?
            };
            let s = rd(rd(lk) - rd(ln_gamma(half)) + rd(rd(half) * rd((0.5 * z).ln())));
            Ok(rd(rd(s + LN_2).exp()))
        }
    }
}

/// `(1/pi) int_0^inf cos(t x) phi_nu(t) dt`.
pub fn gil_pelaez_pdf(nu: f64, x: f64, method: Method) -> Result<QuadratureResult> {
    Ok(gil_pelaez_pdf_with(nu, x, method, Precision::Double, &QuadratureConfig::from_env())?.0)
}

/// `1/2 + (1/pi) int_0^inf sin(t x) phi_nu(t) / t dt`.
pub fn gil_pelaez_cdf(nu: f64, x: f64, method: Method) -> Result<QuadratureResult> {
    check_nu("gil_pelaez_cdf", nu)?;
    let cfg = QuadratureConfig::from_env();
    let f = |t: f64| {
        if t == 0.0 {
            return x;
        }
        let phi = student_cf(nu, t, method).unwrap_or(f64::NAN);
        (t * x).sin() * phi / t
    };
    let mut r = gauss_kronrod_integrate(f, &cfg);
    r.value = 0.5 + r.value / PI;
    r.abs_error_estimate /= PI;
    Ok(r)
}

/// Gil-Pelaez density where non-finite characteristic-function values are
/// replaced by 1. Returns the quadrature result and whether any
/// replacement happened.
pub fn gil_pelaez_pdf_with(
    nu: f64,
    x: f64,
    method: Method,
    precision: Precision,
    cfg: &QuadratureConfig,
) -> Result<(QuadratureResult, bool)> {
    check_nu("gil_pelaez_pdf", nu)?;
    let replaced = std::sync::atomic::AtomicBool::new(false);
    let f = |t: f64| {
        let phi = match student_cf_with(nu, t, method, precision) {
            Ok(v) if v.is_finite() => v,
            _ => {
                replaced.store(true, std::sync::atomic::Ordering::Relaxed);
                1.0
            }
        };
        (t * x).cos() * phi
    };
    let mut r = gauss_kronrod_integrate(f, cfg);
    r.value /= PI;
    r.abs_error_estimate /= PI;
    Ok((r, replaced.into_inner()))
}

/// Closed-form Student-t density, evaluated in log space.
pub fn student_pdf_closed(nu: f64, x: f64) -> Result<f64> {
    check_nu("student_pdf_closed", nu)?;
    let ln = ln_gamma(0.5 * (nu + 1.0)) - ln_gamma(0.5 * nu) - 0.5 * (nu * PI).ln()
        - 0.5 * (nu + 1.0) * (x * x / nu).ln_1p();
    Ok(ln.exp())
}

/// One cell of [`error_report`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRow {
    pub nu: f64,
    pub x: f64,
    pub method: Method,
    pub pdf_gilpelaez: f64,
    pub pdf_closed: f64,
    pub abs_error: f64,
    /// Some characteristic-function value was non-finite and replaced by 1.
    pub overflow_flag: bool,
    pub converged: bool,
}

/// Gil-Pelaez density against the closed form on every
/// `(nu, x, method)` cell. Cells are independent and computed in parallel;
/// the output order is `nu`, then `x`, then `method`.
pub fn error_report(
    nu_list: &[f64],
    x_grid: &[f64],
    methods: &[Method],
    precision: Precision,
    cfg: &QuadratureConfig,
) -> Result<Vec<ErrorRow>> {
    if nu_list.is_empty() || x_grid.is_empty() || methods.is_empty() {
        return Err(domain("error_report", "empty grid"));
    }
    for &nu in nu_list {
        check_nu("error_report", nu)?;
    }
    let cells: Vec<(f64, f64, Method)> = nu_list
        .iter()
        .flat_map(|&nu| {
            x_grid
                .iter()
                .flat_map(move |&x| methods.iter().map(move |&m| (nu, x, m)))
        })
        .collect();
    cells
        .par_iter()
        .map(|&(nu, x, method)| {
            let (r, overflow_flag) = gil_pelaez_pdf_with(nu, x, method, precision, cfg)?;
            let pdf_closed = student_pdf_closed(nu, x)?;
            Ok(ErrorRow {
                nu,
                x,
                method,
                pdf_gilpelaez: r.value,
                pdf_closed,
                abs_error: (r.value - pdf_closed).abs(),
                overflow_flag,
                converged: r.converged,
            })
        })
        .collect()
}
