//! Exponential and ordinary generating functions of Dobinski-type sequences,
//! evaluated in their interchanged-summation forms
//! `G(lambda) = sum_k e^{lambda P(k)} / D(k)` and
//! `G_o(lambda) = sum_k 1 / (D(k) (1 - P(k) lambda))`.

use rug::{Complete, Float, Rational};

use crate::error::{Error, Result};
use crate::poly::PolynomialQ;
use crate::real::{
    add_up, check_tolerance, exp_rational, exp_up, float_up, mul_up, rounding_of, ulps,
    EvalConfig, EvalResult,
};
use crate::series::{finish_exact, stopping_scale, SeriesSpec};

/// Number of consecutive growing terms, inside the region where the ratio
/// bound already forces decay, after which an EGF is declared divergent.
const GROWTH_STREAK: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenFunKind {
    Egf,
    Ogf,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenFunSpec {
    pub spec: SeriesSpec,
    pub kind: GenFunKind,
}

impl GenFunSpec {
    pub fn eval(&self, lambda: &Rational, rel_tol: f64, cfg: &EvalConfig) -> Result<EvalResult> {
        match self.kind {
            GenFunKind::Egf => egf_eval(&self.spec, lambda, rel_tol, cfg),
            GenFunKind::Ogf => ogf_eval(&self.spec, lambda, rel_tol, cfg),
        }
    }
}

/// Bound on the step factor `e^{u(k+1) - u(k)}` of `e^{u(k)}`, `u = lambda P`,
/// valid for every `k >= from`.
#[derive(Clone, Debug)]
pub(crate) struct ExpGrowth {
    pub(crate) exponent: PolynomialQ,
    pub(crate) factor: Float,
    pub(crate) from: u64,
}

impl ExpGrowth {
    /// Fails when `e^{u(k)} x^k / k!` cannot decay: `deg u >= 2` with positive
    /// leading coefficient.
    pub(crate) fn analyze(p: &PolynomialQ, lambda: &Rational, bits: u32) -> Result<Self> {
        let exponent = p.scale(lambda);
        let (factor, from) = match exponent.degree() {
            0 => (Float::with_val(bits, 1), 0),
            1 => (exp_up(bits, &exponent.coeff(1)), 0),
            d => {
                if exponent.leading() > 0 {
                    return Err(Error::Divergent(format!(
                        "exp(lambda P(k)) grows like exp(c k^{d}) with c > 0; \
                         the factorial cannot compensate"
                    )));
                }
                let from = (-&exponent)
                    .increasing_from()
                    .expect("positive leading coefficient");
                (Float::with_val(bits, 1), from)
            }
        };
        Ok(ExpGrowth {
            exponent,
            factor,
            from,
        })
    }

    /// Whether `term(k+1) <= term(k) / 2` holds for every `k >= k0`.
    pub(crate) fn ratio_ok(&self, k0: u64, x_up: &Float) -> bool {
        if k0 < self.from {
            return false;
        }
        let bits = self.factor.prec();
        let r = mul_up(bits, &self.factor, x_up) / (k0 + 1);
        r <= 0.5f64
    }
}

/// `sum_k e^{lambda P(k)} x^k / (s k!)` with adaptive truncation.
pub fn egf_eval(
    spec: &SeriesSpec,
    lambda: &Rational,
    rel_tol: f64,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    let tol = check_tolerance(rel_tol)?;
    let bits = cfg.bits;
    let wb = bits + 32;
    let growth = ExpGrowth::analyze(spec.p(), lambda, wb)?;
    let x_up = float_up(wb, spec.x());
    let tol = Float::with_val(wb, &tol);
    let mut sum = Float::new(wb);
    let mut weight = Rational::from(1);
    let mut prev_term = Float::new(wb);
    let mut streak = 0usize;
    for k in 0..cfg.max_terms {
        let u = growth.exponent.eval_int(k as i64);
        let term = Float::with_val(wb, exp_rational(wb, &u) * Float::with_val(wb, &weight));
        sum += &term;
        let k0 = k as u64 + 1;
        weight *= spec.x();
        weight /= k0;
        if growth.ratio_ok(k0, &x_up) {
            if k > 0 && term > prev_term {
                streak += 1;
                if streak >= GROWTH_STREAK {
                    return Err(Error::Divergent(format!(
                        "terms grew for {GROWTH_STREAK} consecutive k up to k = {k}"
                    )));
                }
            } else {
                streak = 0;
            }
            let next = exp_up(wb, &growth.exponent.eval_int(k0 as i64));
            let tail = mul_up(wb, &mul_up(wb, &next, &float_up(wb, &weight)), &Float::with_val(wb, 2));
            if tail <= Float::with_val(wb, &tol * &sum) {
                return Ok(finish_float(spec, &sum, &tail, k + 1, bits));
            }
        }
        prev_term = term;
    }
    Err(Error::TermCapExceeded {
        cap: cfg.max_terms,
    })
}

/// Scales a positive floating-point partial sum by `1/s`.
fn finish_float(spec: &SeriesSpec, sum: &Float, tail: &Float, terms: usize, bits: u32) -> EvalResult {
    let wb = sum.prec();
    let (inv_near, inv_up) = spec.inverse_scale(wb);
    let value = Float::with_val(bits, sum * &inv_near);
    let trunc_bound = Float::with_val_round(bits, tail * &inv_up, rug::float::Round::Up).0;
    // each term carries a few ulps at wb bits, each addition half an ulp of
    // the running (monotone) sum
    let accumulated = mul_up(
        bits,
        &Float::with_val(bits, value.abs_ref()),
        &(ulps(wb, 3) * (terms as u32 + 4)),
    );
    let rounding_bound = add_up(bits, &accumulated, &rounding_of(&value, 2));
    EvalResult {
        value,
        trunc_bound,
        rounding_bound,
        terms_used: terms,
        precision_bits: bits,
    }
}

/// `sum_k x^k / (s k! (1 - P(k) lambda))`, summed exactly.
///
/// Beyond the index where `|1 - lambda P(k)| >= 1` holds for good, the factor
/// is at most one and the tail is dominated by the normalized weights.
pub fn ogf_eval(
    spec: &SeriesSpec,
    lambda: &Rational,
    rel_tol: f64,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    let tol = check_tolerance(rel_tol)?;
    let pole_tol = Rational::from_f64(cfg.pole_tol).ok_or(Error::InvalidTolerance(cfg.pole_tol))?;
    let u = spec.p().scale(lambda);
    // For deg u >= 1, `settled(k)` says 1/|1 - u(j)| <= 1 for every j >= k.
    let (settle_from, constant_factor) = if u.degree() == 0 {
        let gap = (Rational::from(1) - u.coeff(0)).abs();
        if gap < pole_tol {
            return Err(Error::Pole {
                k: 0,
                gap: gap.to_string(),
            });
        }
        (0, gap.recip())
    } else if u.leading() > 0 {
        (u.increasing_from().expect("positive leading coefficient"), Rational::from(1))
    } else {
        ((-&u).increasing_from().expect("positive leading coefficient"), Rational::from(1))
    };
    let rising = u.leading() > 0;
    let settled = |k: u64| -> bool {
        if u.degree() == 0 {
            return true;
        }
        let v = u.eval_int(k as i64);
        k >= settle_from && if rising { v >= 2 } else { v <= 0 }
    };
    let half = Rational::from((1, 2));
    let mut sum = Rational::new();
    let mut abs_mass = Rational::new();
    let mut weight = Rational::from(1);
    for k in 0..cfg.max_terms {
        let gap = Rational::from(1) - u.eval_int(k as i64);
        if gap.abs_ref().complete() < pole_tol {
            return Err(Error::Pole {
                k,
                gap: gap.to_string(),
            });
        }
        let term = (&weight / &gap).complete();
        abs_mass += term.abs_ref().complete();
        sum += term;
        let k0 = k as u64 + 1;
        weight *= spec.x();
        weight /= k0;
        let decays = spec.x() / Rational::from(k0 + 1) <= half;
        if decays && settled(k0) {
            let bound = (&weight * &constant_factor).complete() * 2u32;
            let scale = stopping_scale(&sum, &abs_mass, cfg.bits);
            if bound <= (&tol * &scale).complete() {
                return Ok(finish_exact(spec, &sum, &bound, k + 1, cfg.bits));
            }
        }
    }
    Err(Error::TermCapExceeded {
        cap: cfg.max_terms,
    })
}

/// `e^{x (e^lambda - 1)}`, or `e^{x (e^lambda - 1 - lambda)}` when `restricted`.
pub fn egf_closed_form_bell(lambda: &Rational, x: &Rational, restricted: bool, bits: u32) -> Float {
    let wb = bits + 32;
    let lam = Float::with_val(wb, lambda);
    let mut inner = Float::with_val(wb, lam.exp_ref()) - 1u32;
    if restricted {
        inner -= &lam;
    }
    inner *= Float::with_val(wb, x);
    Float::with_val(bits, inner.exp_ref())
}

/// `sum_{n <= m_max} values[n] lambda^n / n!`, exact until the final rounding.
pub fn egf_partial_from_numbers(
    values: &[Rational],
    lambda: &Rational,
    m_max: usize,
    bits: u32,
) -> Result<Float> {
    if values.len() < m_max + 1 {
        return Err(Error::Precondition(format!(
            "need {} values, got {}",
            m_max + 1,
            values.len()
        )));
    }
    let mut acc = Rational::new();
    let mut factor = Rational::from(1);
    for (n, v) in values.iter().take(m_max + 1).enumerate() {
        if n > 0 {
            factor *= lambda;
            factor /= n as u64;
        }
        acc += (v * &factor).complete();
    }
    Ok(Float::with_val(bits, &acc))
}
