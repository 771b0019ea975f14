//! Binary floating-point systems described by their significand precision
//! and exponent range.
//!
//! The analyzed system is decoupled from the computing system: levels are
//! returned as `f64` and also as exact base-2 logarithms so that systems
//! wider than `f64` can still be reasoned about in log space.

use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};

/// A binary floating-point system `(P, L, U)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FloatSystem {
    precision_bits: u32,
    min_exponent: i32,
    max_exponent: i32,
}

/// The three characteristic levels of a [`FloatSystem`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Levels {
    /// Smallest positive subnormal number, `2^(L-P)`.
    pub sdn: f64,
    /// Underflow level, `2^L`.
    pub ufl: f64,
    /// Overflow level, `(1 - 2^-P) 2^(U+1)`.
    pub ofl: f64,
}

impl FloatSystem {
    /// IEEE-754 binary32 as tabulated with `P = 23`.
    pub const SINGLE: FloatSystem = FloatSystem {
        precision_bits: 23,
        min_exponent: -126,
        max_exponent: 127,
    };

    /// IEEE-754 binary64 as tabulated with `P = 52`.
    pub const DOUBLE: FloatSystem = FloatSystem {
        precision_bits: 52,
        min_exponent: -1022,
        max_exponent: 1023,
    };

    pub fn new(precision_bits: u32, min_exponent: i32, max_exponent: i32) -> Result<Self> {
        if precision_bits < 1 {
            return Err(domain("FloatSystem::new", "precision must be at least 1 bit"));
        }
        if min_exponent >= 0 || max_exponent <= 0 {
            return Err(domain(
                "FloatSystem::new",
                format!("need L < 0 < U, got L={min_exponent}, U={max_exponent}"),
            ));
        }
        Ok(FloatSystem {
            precision_bits,
            min_exponent,
            max_exponent,
        })
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn min_exponent(&self) -> i32 {
        self.min_exponent
    }

    pub fn max_exponent(&self) -> i32 {
        self.max_exponent
    }

    /// Levels as `f64`. Levels outside the `f64` range saturate to `0` or
    /// `inf`; use the `ln_*` accessors for such systems.
    pub fn derived_levels(&self) -> Levels {
        Levels {
            sdn: pow2(self.min_exponent as i64 - self.precision_bits as i64),
            ufl: pow2(self.min_exponent as i64),
            ofl: (2.0 - pow2(1 - self.precision_bits as i64)) * pow2(self.max_exponent as i64),
        }
    }

    /// `log(B_SDN)`, exact up to one rounding.
    pub fn ln_sdn(&self) -> f64 {
        (self.min_exponent as f64 - self.precision_bits as f64) * std::f64::consts::LN_2
    }

    /// `log(B_UFL)`.
    pub fn ln_ufl(&self) -> f64 {
        self.min_exponent as f64 * std::f64::consts::LN_2
    }

    /// `log(B_OFL)`.
    pub fn ln_ofl(&self) -> f64 {
        (self.max_exponent as f64 + 1.0) * std::f64::consts::LN_2
            + (-pow2(-(self.precision_bits as i64))).ln_1p()
    }
}

// 2^e, exact whenever the result is representable (including subnormals).
fn pow2(e: i64) -> f64 {
    if e > 1023 {
        f64::INFINITY
    } else if e >= -1022 {
        f64::from_bits(((e + 1023) as u64) << 52)
    } else if e >= -1074 {
        f64::from_bits(1u64 << (e + 1074))
    } else {
        0.0
    }
}

impl fmt::Display for FloatSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FloatSystem::SINGLE => write!(f, "single"),
            FloatSystem::DOUBLE => write!(f, "double"),
            s => write!(
                f,
                "custom:{},{},{}",
                s.precision_bits, s.min_exponent, s.max_exponent
            ),
        }
    }
}

impl FromStr for FloatSystem {
    type Err = Error;

    /// Accepts `single`, `double` or `custom:P,L,U`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(FloatSystem::SINGLE),
            "double" => Ok(FloatSystem::DOUBLE),
            _ => {
                let body = s.strip_prefix("custom:").ok_or_else(|| {
                    domain("FloatSystem::from_str", format!("unknown float system `{s}`"))
                })?;
                let parts: Vec<&str> = body.split(',').map(str::trim).collect();
                let bad = || domain("FloatSystem::from_str", format!("malformed `{s}`"));
                if parts.len() != 3 {
                    return Err(bad());
                }
                let p = parts[0].parse::<u32>().map_err(|_| bad())?;
                let l = parts[1].parse::<i32>().map_err(|_| bad())?;
                let u = parts[2].parse::<i32>().map_err(|_| bad())?;
                FloatSystem::new(p, l, u)
            }
        }
    }
}
