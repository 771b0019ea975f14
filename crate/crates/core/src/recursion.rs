//! `log K_nu(z)` by forward recursion in the log domain, and `log I_nu(z)`
//! through the Wronskian.
//!
//! Orders live on the lattice `b + N` with `b = nu - floor(nu)` in `[0, 1)`.
//! While `log K` is still non-positive the walk advances the ratio
//! `K_(m+1)/K_m` in linear space. Once `u_m = log K_m(z) > 0` it switches to
//!
//! ```text
//! u_(m+1) = u_(m-1) + log1p((2m/z) exp(u_m - u_(m-1)))
//! ```
//!
//! which never forms `K` itself and whose condition number is at most one.

use crate::error::{domain, Error, Result};
use crate::range;
use crate::seed::{log_add_exp, ratio_cf, scaled_seed};

const CF_TINY: f64 = 1e-30;
const CF_MAX_ITER: usize = 10_000;

/// `(u, u_next) = (log K_nu(z), log K_(nu+1)(z))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogBesselValue {
    pub nu: f64,
    pub z: f64,
    pub u: f64,
    pub u_next: f64,
}

impl LogBesselValue {
    /// `K_(nu+1)(z) / K_nu(z)`.
    pub fn ratio(&self) -> f64 {
        (self.u_next - self.u).exp()
    }
}

/// Where the log recursion starts for a given `(nu, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Nu0Choice {
    /// `u_nu <= 0`: the value is reached without the log recursion.
    Direct,
    /// Smallest lattice point `nu0 <= nu` with `u_nu0 > 0`.
    Recursion { nu0: f64 },
}

fn check_args(op: &'static str, nu: f64, z: f64) -> Result<()> {
    if !nu.is_finite() {
        return Err(domain(op, format!("nu = {nu} must be finite")));
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(domain(op, format!("z = {z} must be positive and finite")));
    }
    Ok(())
}

/// One step of the log recurrence: from `u_(m-1)`, `u_m` at order `m`,
/// return `u_(m+1)`.
pub fn log_recurrence_step(m: f64, z: f64, u_prev: f64, u_cur: f64) -> f64 {
    let d = u_cur - u_prev;
    let c = 2.0 * m / z;
    let t = c * d.exp();
    if t.is_finite() && c.is_finite() {
        u_prev + t.ln_1p()
    } else {
        // (2m/z) e^d beyond f64: log1p(e^a) = a + log1p(e^-a)
        let a = (2.0 * m).ln() - z.ln() + d;
        u_prev + a + (-a).exp().ln_1p()
    }
}

/// Apply `steps` recurrence steps starting from `(u_nu0, u_(nu0+1))`,
/// returning `(u_(nu0+steps), u_(nu0+steps+1))`.
pub fn forward_log_recursion(nu0: f64, z: f64, u0: f64, u1: f64, steps: u64) -> (f64, f64) {
    let (mut ua, mut ub) = (u0, u1);
    for k in 0..steps {
        let next = log_recurrence_step(nu0 + 1.0 + k as f64, z, ua, ub);
        ua = ub;
        ub = next;
    }
    (ua, ub)
}

// Walk state on the lattice: order base + k carries the scaled log
// `log K~` in `ut` and the ratio K_(base+k+1)/K_(base+k) in `r`. The
// recurrence only sees differences, so it runs on scaled values unchanged.
struct Walk {
    base: f64,
    k: u64,
    ut: f64,
    r: f64,
    ln_r: f64,
}

// Advance by ratios while u = ut - z <= 0, for at most `limit` steps.
fn direct_walk(nu: f64, z: f64, limit: u64) -> Result<Walk> {
    let base = nu - nu.floor();
    let seed = scaled_seed(base, z)?;
    let ln_r = seed.ln_kt1 - seed.ln_kt0;
    let mut w = Walk {
        base,
        k: 0,
        ut: seed.ln_kt0,
        r: ln_r.exp(),
        ln_r,
    };
    while w.k < limit && w.ut <= z {
        w.ut += w.ln_r;
        w.k += 1;
        w.r = 1.0 / w.r + 2.0 * (base + w.k as f64) / z;
        w.ln_r = w.r.ln();
    }
    Ok(w)
}

// Scaled pair (log K~_nu, log K~_(nu+1)) for nu >= 0.
fn scaled_pair(nu: f64, z: f64) -> Result<(f64, f64)> {
    let n = nu.floor() as u64;
    let w = direct_walk(nu, z, n)?;
    let u0 = w.ut;
    let u1 = w.ut + w.ln_r;
    Ok(forward_log_recursion(w.base + w.k as f64, z, u0, u1, n - w.k))
}

/// `(log K_nu(z), log K_(nu+1)(z))`. Negative orders use `K_-nu = K_nu`.
pub fn log_k_pair(nu: f64, z: f64) -> Result<LogBesselValue> {
    check_args("log_k", nu, z)?;
    let nu = nu.abs();
    let (ut, ut_next) = scaled_pair(nu, z)?;
    Ok(LogBesselValue {
        nu,
        z,
        u: ut - z,
        u_next: ut_next - z,
    })
}

/// `log K_nu(z)` for real `nu` and `z > 0`.
pub fn log_k(nu: f64, z: f64) -> Result<f64> {
    Ok(log_k_pair(nu, z)?.u)
}

/// `log K~_nu(z) = log K_nu(z) + z`, computed without forming `log K`.
pub fn log_k_scaled(nu: f64, z: f64) -> Result<f64> {
    check_args("log_k_scaled", nu, z)?;
    Ok(scaled_pair(nu.abs(), z)?.0)
}

/// Locate the start of the log recursion.
///
/// Orders up to the no-overflow threshold at `B = 1` are certified to have
/// `u < 0` and return [`Nu0Choice::Direct`] without evaluation. Otherwise
/// the lattice is walked upward, capped at the necessary threshold at
/// `B = 1`, beyond which `u > 0` is certified.
pub fn select_nu0(nu: f64, z: f64) -> Result<Nu0Choice> {
    check_args("select_nu0", nu, z)?;
    let nu = nu.abs();
    if nu >= range::OVERFLOW_SUFFICIENT_MIN_NU && nu <= range::overflow_sufficient_threshold_ln(0.0, z) {
        return Ok(Nu0Choice::Direct);
    }
    let n = nu.floor() as u64;
    let base = nu - nu.floor();
    let cap = range::overflow_necessary_threshold_ln(0.0, z);
    let limit = if cap.is_finite() && cap > base {
        n.min((cap - base).ceil() as u64)
    } else {
        n
    };
    let mut w = direct_walk(nu, z, limit)?;
    if w.ut <= z && w.k < n {
        // cap reached without crossing; keep walking rather than trust it
        w = direct_walk(nu, z, n)?;
    }
    if w.ut <= z {
        Ok(Nu0Choice::Direct)
    } else {
        Ok(Nu0Choice::Recursion {
            nu0: w.base + w.k as f64,
        })
    }
}

/// `log K_nu(z)` as `log K_b(z) + sum_k log r_(b+k)(z)`, with the first
/// ratio taken from the continued fraction and the rest from the ratio
/// recursion `r_m = 1/r_(m-1) + 2m/z`. An independent route to the value of
/// [`log_k`].
pub fn log_k_sum_of_ratios(nu: f64, z: f64) -> Result<f64> {
    check_args("log_k_sum_of_ratios", nu, z)?;
    let nu = nu.abs();
    let n = nu.floor() as u64;
    let base = nu - nu.floor();
    let seed = scaled_seed(base, z)?;
    let (mut u, _) = seed.ln_unscaled();
    if n == 0 {
        return Ok(u);
    }
    let mut r = match ratio_cf(base, z) {
        Ok(r) => r,
        Err(Error::NoConvergence { .. }) => seed.ratio(),
        Err(e) => return Err(e),
    };
    let mut sum = 0.0;
    let mut comp = 0.0;
    for k in 1..=n {
        // compensated sum: thousands of terms of similar size
        let y = r.ln() - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        r = 1.0 / r + 2.0 * (base + k as f64) / z;
    }
    u += sum;
    Ok(u)
}

/// `I_(nu+1)(z) / I_nu(z) = 1 / (2(nu+1)/z + 1 / (2(nu+2)/z + ...))` by the
/// modified Lentz method.
pub fn i_ratio_cf(nu: f64, z: f64) -> Result<f64> {
    check_args("i_ratio_cf", nu, z)?;
    if nu < 0.0 {
        return Err(domain("i_ratio_cf", format!("nu = {nu} must be >= 0")));
    }
    let mut f = CF_TINY;
    let mut c = f;
    let mut d = 0.0;
    for j in 1..=CF_MAX_ITER {
        let b = 2.0 * (nu + j as f64) / z;
        d += b;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = b + 1.0 / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < f64::EPSILON {
            return Ok(f);
        }
    }
    Err(Error::NoConvergence {
        op: "i_ratio_cf",
        iterations: CF_MAX_ITER,
    })
}

/// `log I_nu(z)` from `W(I_nu, K_nu) = -1/z`:
/// `log I_nu = -log z - log K_nu - log(I_(nu+1)/I_nu + K_(nu+1)/K_nu)`.
pub fn log_i(nu: f64, z: f64) -> Result<f64> {
    check_args("log_i", nu, z)?;
    if nu < 0.0 {
        return Err(domain("log_i", format!("nu = {nu} must be >= 0")));
    }
    let pair = log_k_pair(nu, z)?;
    let ri = i_ratio_cf(nu, z)?;
    Ok(-z.ln() - pair.u - log_add_exp(ri.ln(), pair.u_next - pair.u))
}
