//! Overflow and underflow certificates for `K_nu(z)` in a given
//! [`FloatSystem`], and the bisection search for the actual frontiers.
//!
//! Every threshold is computed from `log B` and `log x0` so that bounds for
//! systems wider than `f64` (or with astronomically large intermediate
//! arguments) stay finite.

use std::f64::consts::{E, LN_2, PI};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::floatsys::FloatSystem;
use crate::kernels::{lambert_w0_ln, w0_lower_bound_hh_ln, w0_upper_bound_hh_ln};
use crate::recursion::log_k;

/// Smallest order for which the no-overflow threshold is valid,
/// `e / (2(4 - e))`.
pub const OVERFLOW_SUFFICIENT_MIN_NU: f64 = E / (2.0 * (4.0 - E));

/// Smallest order covered by the certificates in [`classify`].
pub const MIN_CERTIFIED_NU: f64 = 1.0;

const FRONTIER_MAX_BISECTIONS: usize = 60;

fn check_ln_b(op: &'static str, ln_b: f64) -> Result<()> {
    if ln_b.is_nan() || ln_b.is_infinite() {
        return Err(domain(op, format!("log B = {ln_b} must be finite")));
    }
    Ok(())
}

fn check_z(op: &'static str, z: f64) -> Result<()> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(domain(op, format!("z = {z} must be positive and finite")));
    }
    Ok(())
}

fn ln_of(op: &'static str, b: f64) -> Result<f64> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(domain(op, format!("B = {b} must be positive and finite")));
    }
    Ok(b.ln())
}

/// Order above which `K_nu(z) > B` is guaranteed (for `nu >= 1`).
pub fn overflow_necessary_threshold(b: f64, z: f64) -> Result<f64> {
    let ln_b = ln_of("overflow_necessary_threshold", b)?;
    check_z("overflow_necessary_threshold", z)?;
    Ok(overflow_necessary_threshold_ln(ln_b, z))
}

/// [`overflow_necessary_threshold`] taking `log B`.
///
/// `1/2 + A / W0((2 / (z0 e)) A)` with `z0 = max(z, pi / (B^2 e))` and
/// `A = log B + z0 - log(pi / (z0 e)) / 2`. At `z0 = z` the boundary case is
/// included by continuity.
pub fn overflow_necessary_threshold_ln(ln_b: f64, z: f64) -> f64 {
    let z_floor = (PI.ln() - 2.0 * ln_b - 1.0).exp();
    let z0 = z.max(z_floor);
    let a = ln_b + z0 - 0.5 * (PI / (z0 * E)).ln();
    let ln_arg = (2.0 / (z0 * E)).ln() + a.ln();
    match lambert_w0_ln(ln_arg) {
        Ok(w) => 0.5 + a / w,
        Err(_) => f64::NAN,
    }
}

/// Order below which `K_nu(z) < B` is guaranteed, for orders at least
/// [`OVERFLOW_SUFFICIENT_MIN_NU`].
pub fn overflow_sufficient_threshold(b: f64, z: f64) -> Result<f64> {
    let ln_b = ln_of("overflow_sufficient_threshold", b)?;
    check_z("overflow_sufficient_threshold", z)?;
    Ok(overflow_sufficient_threshold_ln(ln_b, z))
}

/// [`overflow_sufficient_threshold`] taking `log B`.
///
/// `log x0 / W0((2 / (z e)) log x0) - z e / 2` with
/// `log x0 = log B - log K_(1/2)(z) + ((1 + z e)/2) log(1 + 2/(z e))`.
/// Returns `-inf` (no certificate) when `x0 <= 1`.
pub fn overflow_sufficient_threshold_ln(ln_b: f64, z: f64) -> f64 {
    let ze = z * E;
    let ln_k_half = 0.5 * (PI / (2.0 * z)).ln() - z;
    let ln_x0 = ln_b - ln_k_half + 0.5 * (1.0 + ze) * (2.0 / ze).ln_1p();
    if !(ln_x0 > 0.0) {
        return f64::NEG_INFINITY;
    }
    match lambert_w0_ln((2.0 / ze).ln() + ln_x0.ln()) {
        Ok(w) => ln_x0 / w - 0.5 * ze,
        Err(_) => f64::NAN,
    }
}

fn underflow_ln_x0(op: &'static str, ln_b: f64, nu: f64) -> Result<f64> {
    check_ln_b(op, ln_b)?;
    // B <= 2 sqrt(pi / (2e))
    if ln_b > LN_2 + 0.5 * (PI / (2.0 * E)).ln() {
        return Err(domain(op, format!("B = exp({ln_b}) exceeds 2 sqrt(pi/(2e))")));
    }
    if !(nu >= 1.0) || !nu.is_finite() {
        return Err(domain(op, format!("nu = {nu} must be >= 1")));
    }
    Ok((2.0 * nu - 1.0) * LN_2 + PI.ln() - 2.0 * ln_b)
}

fn order_floor(nu: f64) -> f64 {
    (2.0 * nu / E).max(0.5 * nu + 0.25)
}

/// Argument above which `K_nu(z) < B` is guaranteed, for `nu >= 1`:
/// `max{log(x0)/2, 2 nu/e, nu/2 + 1/4}` with `x0 = 2^(2nu-1) pi / B^2`.
///
/// Uses `W0(x0) <= log x0`, which is looser than
/// [`underflow_necessary_z_hh`] by a few units but has the simple closed
/// form `nu log 2 + const`.
pub fn underflow_necessary_z(b: f64, nu: f64) -> Result<f64> {
    underflow_necessary_z_ln(ln_of("underflow_necessary_z", b)?, nu)
}

/// [`underflow_necessary_z`] taking `log B`.
pub fn underflow_necessary_z_ln(ln_b: f64, nu: f64) -> Result<f64> {
    let ln_x0 = underflow_ln_x0("underflow_necessary_z", ln_b, nu)?;
    Ok((0.5 * ln_x0).max(order_floor(nu)))
}

/// Tighter form of [`underflow_necessary_z`], bounding `W0(x0)` by the
/// Hoorfar-Hassani upper bound instead of `log x0`.
pub fn underflow_necessary_z_hh(b: f64, nu: f64) -> Result<f64> {
    underflow_necessary_z_hh_ln(ln_of("underflow_necessary_z_hh", b)?, nu)
}

/// [`underflow_necessary_z_hh`] taking `log B`.
pub fn underflow_necessary_z_hh_ln(ln_b: f64, nu: f64) -> Result<f64> {
    let ln_x0 = underflow_ln_x0("underflow_necessary_z_hh", ln_b, nu)?;
    Ok((0.5 * w0_upper_bound_hh_ln(ln_x0)?).max(order_floor(nu)))
}

/// Argument below which `K_nu(z) >= B` is guaranteed for every
/// `nu >= 1/2`: `W_lower(pi / B^2) / 2`, for `B <= sqrt(pi / e)`.
pub fn underflow_sufficient_z(b: f64) -> Result<f64> {
    underflow_sufficient_z_ln(ln_of("underflow_sufficient_z", b)?)
}

/// [`underflow_sufficient_z`] taking `log B`.
pub fn underflow_sufficient_z_ln(ln_b: f64) -> Result<f64> {
    check_ln_b("underflow_sufficient_z", ln_b)?;
    let ln_x0 = PI.ln() - 2.0 * ln_b;
    if !(ln_x0 >= 1.0) {
        return Err(domain(
            "underflow_sufficient_z",
            format!("B = exp({ln_b}) exceeds sqrt(pi/e)"),
        ));
    }
    Ok(0.5 * w0_lower_bound_hh_ln(ln_x0)?)
}

/// Whether `K~_nu(z) = e^z K_nu(z)` can never underflow in `sys` for
/// `nu >= 0` and `0 < z <= B_OFL`, which holds when `L <= -(U + 1)/2`.
pub fn scaled_never_underflows(sys: FloatSystem) -> bool {
    2 * sys.min_exponent() as i64 <= -(sys.max_exponent() as i64 + 1)
}

/// Sufficient condition for `u_nu(z) = log K_nu(z) < B`:
/// `max{nu, e^2/(2(e-2))} <= B + y log(y/B)` with `y = min(z, 1)`.
///
/// The test does not imply the bound `nu log(nu / y) <= B` it is meant to
/// stand for, so it can certify wrongly: `B = 10, nu = 7.6, z = 1` passes
/// although `u = 12.27`, and so does `B = 1000, nu = 134, z = 1e-22` with
/// `u = 7495`. It is harmless for `B = B_OFL` and orders that fit in memory.
pub fn u_no_overflow_sufficient(b: f64, nu: f64, z: f64) -> Result<bool> {
    if !(b > 0.0) {
        return Err(domain("u_no_overflow_sufficient", format!("B = {b} must be positive")));
    }
    check_z("u_no_overflow_sufficient", z)?;
    let y = z.min(1.0);
    let floor = E * E / (2.0 * (E - 2.0));
    // y (log y - log B): the quotient y / B underflows for tiny z
    Ok(nu.abs().max(floor) <= b + y * (y.ln() - b.ln()))
}

/// Lower bound on `u_nu(z)` valid for every `nu >= 0`:
/// `-z + log(pi / (2z + 1/2)) / 2`.
pub fn u_lower_bound(z: f64) -> f64 {
    -z + 0.5 * (PI / (2.0 * z + 0.5)).ln()
}

/// The coarser bound `u_nu(z) >= -2z`.
pub fn u_lower_bound_simple(z: f64) -> f64 {
    -2.0 * z
}

/// Outcome of [`classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    CertifiedOverflow,
    CertifiedNoOverflow,
    CertifiedUnderflow,
    CertifiedNoUnderflow,
    /// Only produced by [`classify_exact`]: neither overflow nor underflow.
    CertifiedNormal,
    Undecided,
}

/// What decided a [`Verdict`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Certificate {
    OverflowNecessary,
    OverflowSufficient,
    UnderflowNecessary,
    UnderflowSufficient,
    /// Direct comparison of `log_k` with the levels.
    DirectEvaluation,
    /// `nu < 1`: outside the hypotheses of the certificates.
    OrderBelowOne,
    /// Between the sufficient and necessary curves.
    Gap,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionVerdict {
    pub nu: f64,
    pub z: f64,
    pub verdict: Verdict,
    pub decided_by: Certificate,
}

/// Classify `(nu, z)` using the analytic certificates only, cheapest
/// first. Undecided points are reported as such.
pub fn classify(sys: FloatSystem, nu: f64, z: f64) -> Result<RegionVerdict> {
    check_z("classify", z)?;
    if !nu.is_finite() {
        return Err(domain("classify", format!("nu = {nu} must be finite")));
    }
    let nu = nu.abs();
    let out = |verdict, decided_by| Ok(RegionVerdict {
        nu,
        z,
        verdict,
        decided_by,
    });
    if nu < MIN_CERTIFIED_NU {
        return out(Verdict::Undecided, Certificate::OrderBelowOne);
    }
    let ln_ofl = sys.ln_ofl();
    let ln_ufl = sys.ln_ufl();
    if nu >= overflow_necessary_threshold_ln(ln_ofl, z) {
        return out(Verdict::CertifiedOverflow, Certificate::OverflowNecessary);
    }
    if z >= underflow_necessary_z_hh_ln(ln_ufl, nu)? {
        return out(Verdict::CertifiedUnderflow, Certificate::UnderflowNecessary);
    }
    if nu >= OVERFLOW_SUFFICIENT_MIN_NU && nu <= overflow_sufficient_threshold_ln(ln_ofl, z) {
        return out(Verdict::CertifiedNoOverflow, Certificate::OverflowSufficient);
    }
    if z <= underflow_sufficient_z_ln(ln_ufl)? {
        return out(Verdict::CertifiedNoUnderflow, Certificate::UnderflowSufficient);
    }
    out(Verdict::Undecided, Certificate::Gap)
}

/// [`classify`], escalating undecided points (including `nu < 1`) to a
/// direct comparison of `log_k` against the levels.
pub fn classify_exact(sys: FloatSystem, nu: f64, z: f64) -> Result<RegionVerdict> {
    let v = classify(sys, nu, z)?;
    if v.verdict != Verdict::Undecided {
        return Ok(v);
    }
    let u = log_k(v.nu, z)?;
    let verdict = if u > sys.ln_ofl() {
        Verdict::CertifiedOverflow
    } else if u < sys.ln_ufl() {
        Verdict::CertifiedUnderflow
    } else {
        Verdict::CertifiedNormal
    };
    Ok(RegionVerdict {
        verdict,
        decided_by: Certificate::DirectEvaluation,
        ..v
    })
}

/// Which frontier to trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FrontierKind {
    Overflow,
    Underflow,
}

impl fmt::Display for FrontierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FrontierKind::Overflow => "overflow",
            FrontierKind::Underflow => "underflow",
        })
    }
}

impl FromStr for FrontierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "overflow" => Ok(FrontierKind::Overflow),
            "underflow" => Ok(FrontierKind::Underflow),
            _ => Err(domain("FrontierKind::from_str", format!("unknown kind `{s}`"))),
        }
    }
}

/// One point of a frontier. For the overflow kind `at` is `z` and the other
/// fields are orders; for the underflow kind `at` is `nu` and the other
/// fields are arguments `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontierSample {
    pub at: f64,
    pub sufficient: f64,
    pub empirical: f64,
    pub necessary: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrontierCurve {
    pub kind: FrontierKind,
    pub system: FloatSystem,
    pub samples: Vec<FrontierSample>,
}

/// Trace the actual frontier by bisection between the analytic curves.
///
/// Overflow: for each `z` in `grid`, the order where `log K_nu(z)` crosses
/// `log B_OFL`. Underflow: for each order `nu >= 1` in `grid`, the argument
/// where `log K_nu(z)` crosses `log B_UFL`.
pub fn frontier_search(sys: FloatSystem, kind: FrontierKind, grid: &[f64]) -> Result<FrontierCurve> {
    if grid.is_empty() {
        return Err(domain("frontier_search", "empty grid"));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(domain("frontier_search", "grid must be strictly increasing"));
    }
    let samples = grid
        .par_iter()
        .map(|&x| match kind {
            FrontierKind::Overflow => overflow_sample(sys, x),
            FrontierKind::Underflow => underflow_sample(sys, x),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FrontierCurve {
        kind,
        system: sys,
        samples,
    })
}

fn overflow_sample(sys: FloatSystem, z: f64) -> Result<FrontierSample> {
    check_z("frontier_search", z)?;
    let ln_ofl = sys.ln_ofl();
    let sufficient = overflow_sufficient_threshold_ln(ln_ofl, z);
    let necessary = overflow_necessary_threshold_ln(ln_ofl, z);
    let lo = sufficient.max(0.0);
    let empirical = bisect(lo, necessary, |nu| Ok(log_k(nu, z)? - ln_ofl)).map_err(|e| located(e, z))?;
    Ok(FrontierSample {
        at: z,
        sufficient,
        empirical,
        necessary,
    })
}

fn underflow_sample(sys: FloatSystem, nu: f64) -> Result<FrontierSample> {
    let ln_ufl = sys.ln_ufl();
    let sufficient = underflow_sufficient_z_ln(ln_ufl)?;
    let necessary = underflow_necessary_z_hh_ln(ln_ufl, nu)?;
    let empirical = bisect(sufficient, necessary, |z| Ok(ln_ufl - log_k(nu, z)?)).map_err(|e| located(e, nu))?;
    Ok(FrontierSample {
        at: nu,
        sufficient,
        empirical,
        necessary,
    })
}

fn located(e: Error, at: f64) -> Error {
    match e {
        Error::Bracket { lo, hi, .. } => Error::Bracket { lo, hi, at },
        other => other,
    }
}

// Root of an increasing-through-zero `f` on [lo, hi].
fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let (flo, fhi) = (f(lo)?, f(hi)?);
    if !(flo <= 0.0 && fhi >= 0.0) {
        return Err(Error::Bracket { lo, hi, at: f64::NAN });
    }
    for _ in 0..FRONTIER_MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
