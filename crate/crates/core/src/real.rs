//! High-precision real values, evaluation settings and outward-rounded helpers.

use std::fmt;

use rug::float::Round;
use rug::{Float, Rational};

use crate::error::{Error, Result};

pub const DEFAULT_BITS: u32 = 256;
pub const DEFAULT_MAX_TERMS: usize = 100_000;
pub const DEFAULT_POLE_TOL: f64 = 1e-9;

/// Knobs shared by every series evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    /// Working precision in bits of every `Float` produced.
    pub bits: u32,
    /// Hard cap on the number of series terms.
    pub max_terms: usize,
    /// Minimum admissible `|1 - P(k)*lambda|` for ordinary generating functions.
    pub pole_tol: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            bits: DEFAULT_BITS,
            max_terms: DEFAULT_MAX_TERMS,
            pole_tol: DEFAULT_POLE_TOL,
        }
    }
}

impl EvalConfig {
    pub fn with_bits(bits: u32) -> Self {
        EvalConfig {
            bits,
            ..Default::default()
        }
    }
}

/// A high-precision value together with a rigorous bound on the error made by
/// truncating its defining series.
///
/// `rounding_bound` separately bounds the floating-point error of the final
/// conversion/multiplication steps; `error_bound()` is their sum.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub value: Float,
    pub trunc_bound: Float,
    pub rounding_bound: Float,
    pub terms_used: usize,
    pub precision_bits: u32,
}

impl EvalResult {
    pub fn error_bound(&self) -> Float {
        Float::with_val_round(
            self.precision_bits,
            &self.trunc_bound + &self.rounding_bound,
            Round::Up,
        )
        .0
    }

    /// `|value - exact|`, computed with enough guard bits that the comparison
    /// against `error_bound()` is not polluted by the subtraction itself.
    pub fn distance_to(&self, exact: &Rational) -> Float {
        let bits = 2 * self.precision_bits + 64;
        let exact = Float::with_val(bits, exact);
        let diff = Float::with_val(bits, &self.value - &exact);
        diff.abs()
    }

    pub fn distance_to_float(&self, other: &Float) -> Float {
        let bits = 2 * self.precision_bits + 64;
        Float::with_val(bits, &self.value - other).abs()
    }

    /// True when `exact` lies inside `value ± error_bound()`.
    pub fn encloses(&self, exact: &Rational) -> bool {
        self.distance_to(exact) <= self.error_bound()
    }

    pub fn value_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

impl fmt::Display for EvalResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ± {} ({} terms)",
            format_float(&self.value, 20),
            format_float(&self.trunc_bound, 3),
            self.terms_used
        )
    }
}

pub(crate) fn check_tolerance(rel_tol: f64) -> Result<Rational> {
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(Error::InvalidTolerance(rel_tol));
    }
    Ok(Rational::from_f64(rel_tol).expect("finite tolerance"))
}

/// Upper bound of `r` as a `Float` of the given precision.
pub fn float_up(bits: u32, r: &Rational) -> Float {
    Float::with_val_round(bits, r, Round::Up).0
}

pub fn float_down(bits: u32, r: &Rational) -> Float {
    Float::with_val_round(bits, r, Round::Down).0
}

/// Upper bound of `a * b` for nonnegative `a`, `b`.
pub fn mul_up(bits: u32, a: &Float, b: &Float) -> Float {
    Float::with_val_round(bits, a * b, Round::Up).0
}

pub fn add_up(bits: u32, a: &Float, b: &Float) -> Float {
    Float::with_val_round(bits, a + b, Round::Up).0
}

/// Upper bound of `exp(r)`.
pub fn exp_up(bits: u32, r: &Rational) -> Float {
    let mut arg = float_up(bits, r);
    arg.exp_round(Round::Up);
    arg
}

/// Nearest-rounded `exp(r)`.
pub fn exp_rational(bits: u32, r: &Rational) -> Float {
    let arg = Float::with_val(bits + 32, r);
    Float::with_val(bits, arg.exp_ref())
}

/// `2^(shift - bits)`, the size of `2^shift` units in the last place.
pub fn ulps(bits: u32, shift: i32) -> Float {
    let mut u = Float::with_val(bits, 1);
    u >>= bits as i32 - shift;
    u
}

/// Relative rounding allowance `|v| * 2^(shift - bits)`.
pub fn rounding_of(v: &Float, shift: i32) -> Float {
    let bits = v.prec();
    mul_up(bits, &Float::with_val(bits, v.abs_ref()), &ulps(bits, shift))
}

/// Number of significant decimal digits carried by a `bits`-bit float.
pub fn decimal_digits(bits: u32) -> usize {
    ((bits as f64) * std::f64::consts::LOG10_2).ceil() as usize
}

/// Scientific-notation decimal rendering with `digits` significant digits,
/// rounded to nearest, e.g. `3.6787944117e-1`. Zero renders as `0`.
pub fn format_float(v: &Float, digits: usize) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let digits = digits.max(1);
    let (neg, mantissa, exp) = v.to_sign_string_exp_round(10, Some(digits), Round::Nearest);
    let exp = exp.expect("finite nonzero float has an exponent") - 1;
    let mut out = String::with_capacity(mantissa.len() + 8);
    if neg {
        out.push('-');
    }
    out.push_str(&mantissa[..1]);
    if mantissa.len() > 1 {
        out.push('.');
        out.push_str(&mantissa[1..]);
    }
    out.push_str(&format!("e{}", exp));
    out
}

/// Full-precision rendering matching the float's own precision.
pub fn format_full(v: &Float) -> String {
    format_float(v, decimal_digits(v.prec()))
}
