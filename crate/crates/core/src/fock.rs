//! Truncated Fock-space oracle.
//!
//! Every operator in scope is a function of the number operator and hence
//! diagonal on `|m>`, so a coherent-state expectation reduces to a weighted
//! sum over the Poisson distribution `|<m|z>|^2 = e^{-|z|^2} |z|^{2m} / m!`.
//! The weights here are produced by floating-point recursion, independently
//! of the exact rational route used by the series evaluators.

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::genfun::ExpGrowth;
use crate::normal::{stirling_type, HamiltonianSpec, NormalForm};
use crate::par::{self, Execution};
use crate::real::{add_up, exp_up, float_up, mul_up, rounding_of, ulps, EvalResult};
use crate::series::TailBounder;

/// Keep the first `dim` number states `|0>, ..., |dim-1>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FockTruncation {
    dim: usize,
}

impl FockTruncation {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Precondition("Fock truncation needs dim >= 1".into()));
        }
        Ok(FockTruncation { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Smallest dimension whose omitted coherent mass, weighted by `m^degree`,
    /// is below `1e-16`.
    pub fn auto(z_sq: &Rational, degree: u32) -> Self {
        let bounder = TailBounder::new(&crate::poly::PolynomialQ::identity(), degree, z_sq);
        let target = Rational::from_f64(1e-16).expect("finite");
        let mut weight = Rational::from(1);
        let mut m = 0usize;
        loop {
            m += 1;
            weight *= z_sq;
            weight /= m as u64;
            if bounder.ratio_ok(m) {
                let tail = bounder.term_bound(m, &weight) * 2u32;
                if tail < target {
                    return FockTruncation { dim: m };
                }
            }
        }
    }
}

/// Number-state populations of a coherent state, truncated.
#[derive(Clone, Debug)]
pub struct CoherentVector {
    z_sq: Rational,
    components: Vec<Float>,
    mass_defect: Float,
}

impl CoherentVector {
    pub fn new(z_sq: &Rational, trunc: FockTruncation, bits: u32) -> Result<Self> {
        if *z_sq <= 0 {
            return Err(Error::NonPositiveIntensity(z_sq.to_string()));
        }
        let wb = bits + 32;
        let z = Float::with_val(wb, z_sq);
        let mut w = Float::with_val(wb, -&z);
        w.exp_mut();
        let mut components = Vec::with_capacity(trunc.dim);
        for m in 0..trunc.dim {
            components.push(w.clone());
            w *= &z;
            w /= m as u32 + 1;
        }
        let m = trunc.dim;
        let mut tail_weight = Rational::from(1);
        for i in 1..=m {
            tail_weight *= z_sq;
            tail_weight /= i as u64;
        }
        let bounder = TailBounder::new(&crate::poly::PolynomialQ::one(), 0, z_sq);
        let tail = bounder.tail_from(m, &tail_weight, usize::MAX)?;
        let neg = Rational::from(-z_sq);
        let mass_defect = mul_up(bits, &float_up(bits, &tail), &exp_up(bits, &neg));
        Ok(CoherentVector {
            z_sq: z_sq.clone(),
            components,
            mass_defect,
        })
    }

    pub fn z_sq(&self) -> &Rational {
        &self.z_sq
    }

    /// `|<m|z>|^2` for `m < dim`.
    pub fn components(&self) -> &[Float] {
        &self.components
    }

    /// Bound on the population of the discarded states.
    pub fn mass_defect(&self) -> &Float {
        &self.mass_defect
    }

    pub fn total_mass(&self) -> Float {
        let wb = self.components.first().map_or(64, |c| c.prec());
        Float::with_val(wb, Float::sum(self.components.iter()))
    }
}

/// Outcome of an exact number-state check of a normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFormReport {
    pub passed: bool,
    pub checked: u64,
    /// Smallest `m` where `H(m)^n` and the normal form disagree.
    pub first_failure: Option<u64>,
}

/// Computes the normal form of `H^n` and checks it on `|0>, ..., |m_max>`.
pub fn verify_normal_form(h: &HamiltonianSpec, n: u32, m_max: u64) -> Result<NormalFormReport> {
    let needed = n as u64 * h.n_deg() as u64;
    if m_max < needed {
        return Err(Error::Precondition(format!(
            "m_max = {m_max} must be at least n * deg(H) = {needed}"
        )));
    }
    Ok(verify_normal_form_with(h, &stirling_type(h, n), m_max))
}

/// Checks `H(m)^n = sum_k S(n,k) m!/(m-k)!` exactly for `0 <= m <= m_max`,
/// the right side being `<m| sum_k S(n,k) (a^dag)^k a^k |m>`.
pub fn verify_normal_form_with(h: &HamiltonianSpec, nf: &NormalForm, m_max: u64) -> NormalFormReport {
    let n = nf.power();
    let first_failure = (0..=m_max).find(|&m| {
        let lhs = h.poly().eval_int(m as i64).pow(n);
        lhs != nf.eval_on_number_state(m)
    });
    NormalFormReport {
        passed: first_failure.is_none(),
        checked: m_max + 1,
        first_failure,
    }
}

/// Runs `verify_normal_form` over many `(H, n)` cases.
pub fn verify_normal_form_grid(
    cases: &[(HamiltonianSpec, u32)],
    m_max: u64,
    exec: Execution,
) -> Vec<Result<NormalFormReport>> {
    par::map(exec, cases, |(h, n)| verify_normal_form(h, *n, m_max))
}

fn coherent_sum(
    vector: &CoherentVector,
    bits: u32,
    f: impl Fn(usize) -> Float,
) -> (Float, Float) {
    let mut acc = Float::new(bits + 32);
    let mut abs = Float::new(bits + 32);
    for (m, w) in vector.components.iter().enumerate() {
        let t = Float::with_val(bits + 32, w * f(m));
        abs += Float::with_val(bits + 32, t.abs_ref());
        acc += t;
    }
    let dim = vector.components.len() as u32;
    // weights carry at most (m + 2) ulps each after the recursion
    let rounding = mul_up(bits, &Float::with_val(bits, &abs), &(ulps(bits + 32, 2) * (dim + 4)));
    (acc, rounding)
}

/// `<z| (a^dag a)^n |z>` on the truncated space, with a bound on the
/// contribution of the discarded states.
pub fn expect_number_power(
    n: u32,
    z_sq: &Rational,
    trunc: FockTruncation,
    bits: u32,
) -> Result<EvalResult> {
    let vector = CoherentVector::new(z_sq, trunc, bits)?;
    let wb = bits + 32;
    let (sum, accumulated) = coherent_sum(&vector, bits, |m| Float::with_val(wb, m).pow(n));
    let m = trunc.dim;
    let mut weight = Rational::from(1);
    for i in 1..=m {
        weight *= z_sq;
        weight /= i as u64;
    }
    let bounder = TailBounder::new(&crate::poly::PolynomialQ::identity(), n, z_sq);
    let tail = bounder.tail_from(m, &weight, usize::MAX)?;
    let neg = Rational::from(-z_sq);
    let trunc_bound = mul_up(bits, &float_up(bits, &tail), &exp_up(bits, &neg));
    let value = Float::with_val(bits, &sum);
    let rounding_bound = add_up(bits, &accumulated, &rounding_of(&value, 1));
    Ok(EvalResult {
        value,
        trunc_bound,
        rounding_bound,
        terms_used: m,
        precision_bits: bits,
    })
}

/// `<z| exp(lambda H(a^dag a)) |z>` on the truncated space.
pub fn coherent_expect_exp(
    h: &HamiltonianSpec,
    lambda: &Rational,
    z_sq: &Rational,
    trunc: FockTruncation,
    bits: u32,
) -> Result<EvalResult> {
    let wb = bits + 32;
    let growth = ExpGrowth::analyze(h.poly(), lambda, wb)?;
    let vector = CoherentVector::new(z_sq, trunc, bits)?;
    let (sum, accumulated) = coherent_sum(&vector, bits, |m| {
        let u = Float::with_val(wb, &growth.exponent.eval_int(m as i64));
        Float::with_val(wb, u.exp_ref())
    });
    // discarded states: term(m) = e^{u(m)} e^{-z} z^m / m!, bounded one at a
    // time until the step factor forces halving, then geometrically
    let z_up = float_up(wb, z_sq);
    let neg = Rational::from(-z_sq);
    let mut weight = Rational::from(1);
    let mut m = 0usize;
    while m < trunc.dim {
        m += 1;
        weight *= z_sq;
        weight /= m as u64;
    }
    let mut tail = Float::new(wb);
    loop {
        let term = mul_up(
            wb,
            &exp_up(wb, &growth.exponent.eval_int(m as i64)),
            &float_up(wb, &weight),
        );
        if growth.ratio_ok(m as u64, &z_up) {
            tail = add_up(wb, &tail, &(term * 2u32));
            break;
        }
        tail = add_up(wb, &tail, &term);
        m += 1;
        weight *= z_sq;
        weight /= m as u64;
    }
    let trunc_bound = mul_up(bits, &tail, &exp_up(wb, &neg));
    let value = Float::with_val(bits, &sum);
    let rounding_bound = add_up(bits, &accumulated, &rounding_of(&value, 1));
    Ok(EvalResult {
        value,
        trunc_bound,
        rounding_bound,
        terms_used: trunc.dim,
        precision_bits: bits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genfun::{egf_closed_form_bell, egf_eval};
    use crate::poly::PolynomialQ;
    use crate::real::EvalConfig;
    use crate::series::SeriesSpec;
    use crate::stirling::bell_polynomial;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn ham(coeffs: &[i64]) -> HamiltonianSpec {
        HamiltonianSpec::new(PolynomialQ::from_ints(coeffs)).unwrap()
    }

    #[test]
    fn normal_form_checks() {
        let rep = verify_normal_form(&HamiltonianSpec::number_operator(), 3, 10).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.checked, 11);
        assert!(verify_normal_form(&ham(&[0, 2, 1]), 2, 20).unwrap().passed);
        assert!(verify_normal_form(&ham(&[0, 2, 1]), 2, 3).is_err());
    }

    #[test]
    fn tampered_normal_form_fails_at_one() {
        let h = ham(&[0, 2, 1]);
        let mut nf = stirling_type(&h, 2);
        let bumped = nf.get(1) + 1u32;
        nf.set(1, bumped);
        let rep = verify_normal_form_with(&h, &nf, 20);
        assert!(!rep.passed);
        assert_eq!(rep.first_failure, Some(1));
    }

    #[test]
    fn number_power_expectations() {
        let t = FockTruncation::new(60).unwrap();
        let r = expect_number_power(1, &q(1, 1), t, 256).unwrap();
        assert!(r.encloses(&q(1, 1)));
        let r = expect_number_power(0, &q(5, 2), FockTruncation::auto(&q(5, 2), 0), 256).unwrap();
        assert!(r.encloses(&q(1, 1)));
        let r = expect_number_power(3, &q(2, 1), FockTruncation::new(80).unwrap(), 256).unwrap();
        assert!(r.encloses(&q(22, 1)));
        assert_eq!(bell_polynomial(3).eval_int(2), 22);
    }

    #[test]
    fn small_truncation_has_honest_bound() {
        let t = FockTruncation::new(3).unwrap();
        let r = expect_number_power(4, &q(4, 1), t, 128).unwrap();
        let exact = bell_polynomial(4).eval(&q(4, 1));
        assert!(r.encloses(&exact));
        assert!(r.trunc_bound > 1);
    }

    #[test]
    fn exp_expectations() {
        let t = FockTruncation::new(80).unwrap();
        let r = coherent_expect_exp(&HamiltonianSpec::number_operator(), &q(1, 1), &q(1, 1), t, 256).unwrap();
        let closed = egf_closed_form_bell(&q(1, 1), &q(1, 1), false, 256);
        assert!(r.distance_to_float(&closed) <= r.error_bound());
        let r = coherent_expect_exp(&ham(&[1, 1, 1]), &Rational::new(), &q(3, 1), t, 256).unwrap();
        assert!(r.encloses(&q(1, 1)));
        let sq = ham(&[0, 0, 1]);
        let r = coherent_expect_exp(&sq, &q(-1, 1), &q(1, 1), t, 256).unwrap();
        let spec = SeriesSpec::auto(sq.poly().clone(), q(1, 1)).unwrap();
        let g = egf_eval(&spec, &q(-1, 1), 1e-14, &EvalConfig::default()).unwrap();
        assert!(r.distance_to_float(&g.value) < 1e-10);
        assert!(matches!(
            coherent_expect_exp(&sq, &q(1, 1), &q(1, 1), t, 256),
            Err(Error::Divergent(_))
        ));
    }

    #[test]
    fn mass_defect_shrinks_with_dimension() {
        let z = q(4, 1);
        let mut last: Option<Float> = None;
        for dim in [1usize, 2, 4, 8, 16, 32, 64] {
            let v = CoherentVector::new(&z, FockTruncation::new(dim).unwrap(), 128).unwrap();
            let total = Float::with_val(128, v.total_mass() + v.mass_defect());
            assert!(total >= 1f64 - 1e-30);
            if let Some(prev) = &last {
                assert!(v.mass_defect() <= prev);
            }
            last = Some(v.mass_defect().clone());
        }
        assert!(last.unwrap() < 1e-16);
    }

    #[test]
    fn auto_truncation() {
        let t = FockTruncation::auto(&q(4, 1), 8);
        assert!(t.dim() > 20);
        assert!(FockTruncation::new(0).is_err());
    }

    #[test]
    fn grid_sequential_and_parallel_agree() {
        let cases: Vec<_> = (1..6).map(|d| (ham(&[1, -2, 0, d]), (d % 3) as u32 + 1)).collect();
        let a = verify_normal_form_grid(&cases, 40, Execution::Sequential);
        let b = verify_normal_form_grid(&cases, 40, Execution::Parallel);
        assert_eq!(a, b);
        assert!(a.iter().all(|r| r.as_ref().unwrap().passed));
    }
}
