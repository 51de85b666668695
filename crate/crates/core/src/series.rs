//! Error-bounded evaluation of generalized Dobinski sums
//! `sum_k P(k)^n / D(k)` with `D(k) = s k! x^{-k}`.
//!
//! Partial sums are accumulated as exact rationals; the only rounding happens
//! in the final multiplication by `e^{-x}` (or `1/s`).
//!
//! Truncation uses geometric domination: with `d = deg(P) n` and
//! `A = (sum |c_i|)^n`, the term bound `t(k) = A k^d x^k / k!` has ratio
//! `t(k+1)/t(k) = (1 + 1/k)^d x / (k+1)`, which decreases in `k`. Once that
//! ratio is at most 1/2 at `k0`, the tail from `k0` on is below `2 t(k0)`.

use rug::float::Round;
use rug::ops::Pow;
use rug::{Complete, Float, Rational};

use crate::error::{Error, Result};
use crate::normal::{bell_type_eval, HamiltonianSpec};
use crate::par::{self, Execution};
use crate::poly::PolynomialQ;
use crate::real::{check_tolerance, float_up, mul_up, rounding_of, EvalConfig, EvalResult};

/// Normalization of the factorial-family denominator `D(k) = s k! x^{-k}`.
#[derive(Clone, Debug, PartialEq)]
pub enum Scale {
    /// `s = e^x`, making the weights `e^{-x} x^k / k!` a probability distribution.
    Auto,
    Explicit(Float),
}

/// The pair `(P, D)` defining a Dobinski-type sum.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSpec {
    p: PolynomialQ,
    x: Rational,
    scale: Scale,
}

impl SeriesSpec {
    pub fn auto(p: PolynomialQ, x: Rational) -> Result<Self> {
        if x <= 0 {
            return Err(Error::NonPositiveIntensity(x.to_string()));
        }
        Ok(SeriesSpec {
            p,
            x,
            scale: Scale::Auto,
        })
    }

    pub fn explicit(p: PolynomialQ, x: Rational, s: Float) -> Result<Self> {
        if !(s.is_finite() && s > 0) {
            return Err(Error::NonPositiveScale);
        }
        let mut spec = Self::auto(p, x)?;
        spec.scale = Scale::Explicit(s);
        Ok(spec)
    }

    /// `P(k) = k`: Bell polynomials `B(n, x)`.
    pub fn bell(x: Rational) -> Result<Self> {
        Self::auto(PolynomialQ::identity(), x)
    }

    /// `P(k) = k - x`: singleton-free (restricted) Bell polynomials, whose
    /// exponential generating function is `e^{x (e^lambda - 1 - lambda)}`.
    /// At `x = 1` this is `P(k) = k - 1` and yields the restricted Bell numbers.
    pub fn restricted_bell(x: Rational) -> Result<Self> {
        let p = PolynomialQ::new(vec![(-&x).complete(), Rational::from(1)]);
        Self::auto(p, x)
    }

    pub fn p(&self) -> &PolynomialQ {
        &self.p
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn scale(&self) -> &Scale {
        &self.scale
    }

    pub fn is_auto(&self) -> bool {
        matches!(self.scale, Scale::Auto)
    }

    /// `1/s` rounded to nearest and rounded up.
    pub(crate) fn inverse_scale(&self, bits: u32) -> (Float, Float) {
        match &self.scale {
            Scale::Auto => {
                let neg_x = (-&self.x).complete();
                let near = crate::real::exp_rational(bits, &neg_x);
                let up = crate::real::exp_up(bits, &neg_x);
                (near, up)
            }
            Scale::Explicit(s) => {
                let near = Float::with_val(bits, s.recip_ref());
                let up = Float::with_val_round(bits, s.recip_ref(), Round::Up).0;
                (near, up)
            }
        }
    }
}

/// Dominating sequence `A k^d x^k / k!` for `|P(k)|^n x^k / k!`, `k >= 1`.
#[derive(Clone, Debug)]
pub(crate) struct TailBounder {
    a: Rational,
    d: u32,
    x: Rational,
}

impl TailBounder {
    pub(crate) fn new(p: &PolynomialQ, n: u32, x: &Rational) -> Self {
        TailBounder {
            a: p.abs_coeff_sum().pow(n),
            d: p.degree() as u32 * n,
            x: x.clone(),
        }
    }

    /// `(1 + 1/k)^d x / (k+1) <= 1/2`; once true it stays true for larger `k`.
    pub(crate) fn ratio_ok(&self, k: usize) -> bool {
        if k == 0 {
            return false;
        }
        let growth = Rational::from((k as u64 + 1, k as u64)).pow(self.d);
        let ratio = growth * &self.x / Rational::from(k as u64 + 1);
        ratio <= (1, 2)
    }

    /// `A k^d w` where `w = x^k / k!`.
    pub(crate) fn term_bound(&self, k: usize, weight: &Rational) -> Rational {
        let kd = Rational::from(k as u64).pow(self.d);
        (&self.a * kd) * weight
    }

    /// Rigorous bound on `sum_{k >= k0} |P(k)|^n x^k / k!` where `weight` is
    /// `x^{k0} / k0!`. Terms are bounded one at a time until the ratio test
    /// holds, then the geometric remainder is added.
    pub(crate) fn tail_from(&self, k0: usize, weight: &Rational, cap: usize) -> Result<Rational> {
        let mut acc = Rational::new();
        let mut k = k0;
        let mut w = weight.clone();
        if k == 0 {
            // k^d is 1 at k = 0 only when d = 0; |P(0)|^n <= A in that case.
            if self.d == 0 {
                acc += (&self.a * &w).complete();
            }
            w *= &self.x;
            k = 1;
        }
        while !self.ratio_ok(k) {
            acc += self.term_bound(k, &w);
            w *= &self.x;
            w /= k as u64 + 1;
            k += 1;
            if k > cap {
                return Err(Error::TermCapExceeded { cap });
            }
        }
        acc += self.term_bound(k, &w) * 2u32;
        Ok(acc)
    }
}

/// `|sum|`, or the cancellation floor `2^{-bits} sum |t_k|` when the partial
/// sum is much smaller than its terms (e.g. an exact value of zero).
pub(crate) fn stopping_scale(sum: &Rational, abs_mass: &Rational, bits: u32) -> Rational {
    let floor = (abs_mass >> bits).complete();
    let s = sum.abs_ref().complete();
    if s > floor {
        s
    } else {
        floor
    }
}

/// Finishes an exact partial sum: multiplies by `1/s` and attaches bounds.
pub(crate) fn finish_exact(
    spec: &SeriesSpec,
    sum: &Rational,
    unscaled_bound: &Rational,
    terms_used: usize,
    bits: u32,
) -> EvalResult {
    let (inv_near, inv_up) = spec.inverse_scale(bits);
    let value = Float::with_val(bits, Float::with_val(bits, sum) * &inv_near);
    let trunc_bound = mul_up(bits, &float_up(bits, unscaled_bound), &inv_up);
    // conversion, scale and product each contribute at most half an ulp
    let rounding_bound = rounding_of(&value, 2);
    EvalResult {
        value,
        trunc_bound,
        rounding_bound,
        terms_used,
        precision_bits: bits,
    }
}

/// `sum_{k=0}^{K} P(k)^n x^k / (s k!)` with `K` chosen adaptively so the
/// truncation bound falls below `rel_tol` times the partial sum.
pub fn eval_bell_type(
    spec: &SeriesSpec,
    n: u32,
    rel_tol: f64,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    let tol = check_tolerance(rel_tol)?;
    let bounder = TailBounder::new(&spec.p, n, &spec.x);
    let mut sum = Rational::new();
    let mut abs_mass = Rational::new();
    let mut weight = Rational::from(1);
    for k in 0..cfg.max_terms {
        let pk = spec.p.eval_int(k as i64);
        if pk != 0 || n == 0 {
            let term = pk.pow(n) * &weight;
            abs_mass += term.abs_ref().complete();
            sum += term;
        }
        weight *= &spec.x;
        weight /= k as u64 + 1;
        let k0 = k + 1;
        if bounder.ratio_ok(k0) {
            let bound = bounder.term_bound(k0, &weight) * 2u32;
            let scale = stopping_scale(&sum, &abs_mass, cfg.bits);
            if bound <= (&tol * &scale).complete() {
                return Ok(finish_exact(spec, &sum, &bound, k0, cfg.bits));
            }
        }
    }
    Err(Error::TermCapExceeded {
        cap: cfg.max_terms,
    })
}

/// `B_alpha(n, x) = e^{-x} sum_k H(k)^n x^k / k!`.
pub fn eval_bell_type_poly(
    h: &HamiltonianSpec,
    n: u32,
    x: &Rational,
    rel_tol: f64,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    let spec = SeriesSpec::auto(h.poly().clone(), x.clone())?;
    eval_bell_type(&spec, n, rel_tol, cfg)
}

/// Evaluates one spec at many exponents.
pub fn eval_bell_type_many(
    spec: &SeriesSpec,
    ns: &[u32],
    rel_tol: f64,
    cfg: &EvalConfig,
    exec: Execution,
) -> Vec<Result<EvalResult>> {
    par::map(exec, ns, |&n| eval_bell_type(spec, n, rel_tol, cfg))
}

/// Exact normal-ordering value against the truncated series.
#[derive(Clone, Debug)]
pub struct CrossCheckReport {
    pub exact: Rational,
    pub series: EvalResult,
    pub discrepancy: Float,
    pub allowance: Float,
    pub passed: bool,
}

pub fn cross_check(
    h: &HamiltonianSpec,
    n: u32,
    x: &Rational,
    rel_tol: f64,
    cfg: &EvalConfig,
) -> Result<CrossCheckReport> {
    let series = eval_bell_type_poly(h, n, x, rel_tol, cfg)?;
    let exact = bell_type_eval(h, n, x);
    let discrepancy = series.distance_to(&exact);
    let allowance = series.error_bound();
    let passed = discrepancy <= allowance;
    Ok(CrossCheckReport {
        exact,
        series,
        discrepancy,
        allowance,
        passed,
    })
}
