//! Exact and series routes against each other and against direct oracles.

use dobinski::{
    bell_type_eval, eval_bell_type, eval_bell_type_many, stirling_type, verify_normal_form_grid,
    EvalConfig, Execution, HamiltonianSpec, PolynomialQ, SeriesSpec,
};
use proptest::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1u64..=5).prop_map(|(p, q)| Rational::from((p, q)))
}

fn nonzero_poly() -> impl Strategy<Value = PolynomialQ> {
    prop::collection::vec(small_rational(), 1..=4)
        .prop_map(PolynomialQ::new)
        .prop_filter("nonzero", |p| !p.is_zero())
}

fn positive_x() -> impl Strategy<Value = Rational> {
    (1i64..=12, 1u64..=4).prop_map(|(p, q)| Rational::from((p, q)))
}

fn eval(p: &PolynomialQ, x: &Rational) -> Rational {
    p.coeffs().iter().rev().fold(Rational::new(), |acc, c| acc * x + c)
}

/// `sum_k alpha_k m!/(m-k)!` taken straight from the coefficients.
fn on_number_state(coeffs: &[Rational], m: i64) -> Rational {
    coeffs.iter().enumerate().fold(Rational::new(), |acc, (k, c)| {
        let falling = (0..k as i64).fold(Integer::from(1), |f, i| f * (m - i));
        acc + Rational::from(c * falling)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normal_form_reproduces_powers(p in nonzero_poly(), n in 0u32..=4) {
        let h = HamiltonianSpec::new(p.clone()).unwrap();
        let nf = stirling_type(&h, n);
        for m in 0..=30i64 {
            prop_assert_eq!(on_number_state(nf.coeffs(), m), eval(&p, &Rational::from(m)).pow(n));
        }
    }

    #[test]
    fn series_encloses_exact_value(p in nonzero_poly(), n in 0u32..=4, x in positive_x()) {
        let h = HamiltonianSpec::new(p.clone()).unwrap();
        let exact = bell_type_eval(&h, n, &x);
        let spec = SeriesSpec::auto(p, x).unwrap();
        let r = eval_bell_type(&spec, n, 1e-12, &EvalConfig::default()).unwrap();
        prop_assert!(r.encloses(&exact), "series {} vs exact {}", r.value, exact);
    }

    #[test]
    fn explicit_scale_matches_auto(n in 0u32..=6, x in positive_x()) {
        let cfg = EvalConfig::default();
        let auto = SeriesSpec::bell(x.clone()).unwrap();
        let s = Float::with_val(cfg.bits + 64, Float::with_val(cfg.bits + 64, &x).exp_ref());
        let explicit = SeriesSpec::explicit(PolynomialQ::identity(), x, s).unwrap();
        let a = eval_bell_type(&auto, n, 1e-20, &cfg).unwrap();
        let b = eval_bell_type(&explicit, n, 1e-20, &cfg).unwrap();
        let gap = Float::with_val(cfg.bits, &a.value - &b.value).abs();
        let allowed = Float::with_val(cfg.bits, a.error_bound() + b.error_bound());
        let slack = Float::with_val(cfg.bits, a.value.abs_ref()) >> (cfg.bits as i32 - 8);
        prop_assert!(gap <= allowed + slack);
    }
}

#[test]
fn sequential_and_parallel_batches_agree() {
    let spec = SeriesSpec::bell(Rational::from((7, 3))).unwrap();
    let ns: Vec<u32> = (0..24).collect();
    let cfg = EvalConfig::default();
    let seq = eval_bell_type_many(&spec, &ns, 1e-15, &cfg, Execution::Sequential);
    let par = eval_bell_type_many(&spec, &ns, 1e-15, &cfg, Execution::Parallel);
    for (a, b) in seq.iter().zip(&par) {
        let (a, b) = (a.as_ref().unwrap(), b.as_ref().unwrap());
        assert_eq!(a.value, b.value);
        assert_eq!(a.terms_used, b.terms_used);
    }

    let cases: Vec<(HamiltonianSpec, u32)> = (1..=6)
        .map(|d| (HamiltonianSpec::new(PolynomialQ::monomial(d, Rational::from(1))).unwrap(), 3))
        .collect();
    let seq = verify_normal_form_grid(&cases, 25, Execution::Sequential);
    let par = verify_normal_form_grid(&cases, 25, Execution::Parallel);
    for (a, b) in seq.iter().zip(&par) {
        assert!(a.as_ref().unwrap().passed);
        assert_eq!(a.as_ref().unwrap().checked, b.as_ref().unwrap().checked);
    }
}

#[test]
fn number_operator_powers_give_touchard_polynomials() {
    // B(4,x) = x + 7x^2 + 6x^3 + x^4
    let x = Rational::from((2, 5));
    let want = &x + 7 * x.clone().pow(2) + 6 * x.clone().pow(3) + x.clone().pow(4);
    assert_eq!(bell_type_eval(&HamiltonianSpec::number_operator(), 4, &x), want);
}
