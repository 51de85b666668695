//! Normal ordering of powers of a polynomial in the number operator.
//!
//! For `H(a^dag a) = sum_k alpha_k (a^dag a)^k`, the `n`-th power is written as
//! `sum_k S_alpha(n,k) (a^dag)^k a^k`. Because `(a^dag)^k a^k` acts on the
//! number state `|m>` as the falling factorial `m (m-1) ... (m-k+1)`, the
//! coefficients are obtained by expanding `H(m)^n` in the falling-factorial
//! basis.

use rug::{Complete, Rational};

use crate::error::{Error, Result};
use crate::poly::PolynomialQ;
use crate::stirling::{falling_factorial, StirlingTriangle};

/// A nonzero polynomial `H(m)` standing for a function of the number operator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HamiltonianSpec {
    poly: PolynomialQ,
}

impl HamiltonianSpec {
    pub fn new(poly: PolynomialQ) -> Result<Self> {
        if poly.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(HamiltonianSpec { poly })
    }

    /// `H(m) = m`, whose powers normal-order with plain Stirling numbers.
    pub fn number_operator() -> Self {
        HamiltonianSpec {
            poly: PolynomialQ::identity(),
        }
    }

    pub fn poly(&self) -> &PolynomialQ {
        &self.poly
    }

    /// Smallest index with nonvanishing coefficient (`N_0`).
    pub fn n0(&self) -> usize {
        self.poly.lowest_degree().expect("nonzero polynomial")
    }

    /// Largest index with nonvanishing coefficient (`N`).
    pub fn n_deg(&self) -> usize {
        self.poly.degree()
    }
}

impl TryFrom<PolynomialQ> for HamiltonianSpec {
    type Error = Error;
    fn try_from(poly: PolynomialQ) -> Result<Self> {
        Self::new(poly)
    }
}

/// Coefficients `k -> S_alpha(n, k)` of a normally ordered power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    power: u32,
    coeffs: Vec<Rational>,
}

impl NormalForm {
    pub fn from_coeffs(power: u32, coeffs: Vec<Rational>) -> Self {
        NormalForm { power, coeffs }
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    /// Dense coefficients, index `k` for `(a^dag)^k a^k`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn get(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, k: usize, value: Rational) {
        if k >= self.coeffs.len() {
            self.coeffs.resize(k + 1, Rational::new());
        }
        self.coeffs[k] = value;
    }

    /// Nonzero entries in increasing `k`.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| **c != 0)
    }

    /// Diagonal matrix element on `|m>`: `sum_k S_alpha(n,k) m!/(m-k)!`.
    pub fn eval_on_number_state(&self, m: u64) -> Rational {
        let mut acc = Rational::new();
        for (k, c) in self.nonzero() {
            if k as u64 > m {
                break;
            }
            acc += c * Rational::from(falling_factorial(m as i64, k));
        }
        acc
    }

    /// The Bell-type polynomial `sum_k S_alpha(n,k) x^k`.
    pub fn bell_type_polynomial(&self) -> PolynomialQ {
        PolynomialQ::new(self.coeffs.clone())
    }
}

/// Exact Stirling-type coefficients of `H(a^dag a)^n`.
pub fn stirling_type(h: &HamiltonianSpec, n: u32) -> NormalForm {
    let q = h.poly.pow(n);
    let triangle = StirlingTriangle::global();
    let top = q.degree();
    let mut coeffs = vec![Rational::new(); top + 1];
    for (j, qj) in q.coeffs().iter().enumerate() {
        if *qj == 0 {
            continue;
        }
        let row = triangle.row(j);
        for (k, s) in row.iter().enumerate() {
            if *s != 0 {
                coeffs[k] += (qj * s).complete();
            }
        }
    }
    NormalForm { power: n, coeffs }
}

/// `B_alpha(n, x) = sum_k S_alpha(n,k) x^k`, exactly.
pub fn bell_type_eval(h: &HamiltonianSpec, n: u32, x: &Rational) -> Rational {
    stirling_type(h, n).bell_type_polynomial().eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stirling::stirling2;
    use proptest::prelude::*;

    fn ham(coeffs: &[i64]) -> HamiltonianSpec {
        HamiltonianSpec::new(PolynomialQ::from_ints(coeffs)).unwrap()
    }

    fn row(n: usize) -> Vec<Rational> {
        (0..=n).map(|k| Rational::from(stirling2(n, k))).collect()
    }

    fn trimmed(nf: &NormalForm) -> Vec<Rational> {
        PolynomialQ::new(nf.coeffs().to_vec()).coeffs().to_vec()
    }

    #[test]
    fn spec_accessors() {
        let h = ham(&[0, 2, 0, 1]);
        assert_eq!(h.n0(), 1);
        assert_eq!(h.n_deg(), 3);
        assert_eq!(HamiltonianSpec::new(PolynomialQ::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn number_operator_gives_stirling_rows() {
        let nf = stirling_type(&HamiltonianSpec::number_operator(), 3);
        let got: Vec<_> = nf.nonzero().map(|(k, c)| (k, c.clone())).collect();
        assert_eq!(got, vec![(1, 1.into()), (2, 3.into()), (3, 1.into())]);
        for n in 0..=12 {
            let nf = stirling_type(&HamiltonianSpec::number_operator(), n);
            assert_eq!(trimmed(&nf), PolynomialQ::new(row(n as usize)).coeffs());
        }
    }

    #[test]
    fn square_gives_even_rows() {
        let sq = ham(&[0, 0, 1]);
        let nf = stirling_type(&sq, 1);
        let got: Vec<_> = nf.nonzero().map(|(k, c)| (k, c.clone())).collect();
        assert_eq!(got, vec![(1, 1.into()), (2, 1.into())]);
        for n in 0..=6u32 {
            let nf = stirling_type(&sq, n);
            assert_eq!(trimmed(&nf), PolynomialQ::new(row(2 * n as usize)).coeffs());
        }
    }

    #[test]
    fn constants_and_zeroth_power() {
        let c = HamiltonianSpec::new(PolynomialQ::constant(Rational::from((3, 2)))).unwrap();
        let nf = stirling_type(&c, 2);
        assert_eq!(nf.coeffs(), &[Rational::from((9, 4))]);
        let h = ham(&[4, 1, 1]);
        let nf0 = stirling_type(&h, 0);
        assert_eq!(nf0.coeffs(), &[Rational::from(1)]);
        // constant term of H(m)^n
        assert_eq!(stirling_type(&h, 3).get(0), 64);
    }

    #[test]
    fn bell_type_values() {
        let one = Rational::from(1);
        assert_eq!(bell_type_eval(&HamiltonianSpec::number_operator(), 3, &one), 5);
        assert_eq!(bell_type_eval(&ham(&[0, 0, 1]), 1, &one), 2);
        assert_eq!(bell_type_eval(&ham(&[7, -1, 3]), 0, &Rational::from((5, 3))), 1);
    }

    fn small_ham() -> impl Strategy<Value = HamiltonianSpec> {
        prop::collection::vec((-9i64..=9, 1i64..=9), 1..=4).prop_filter_map("nonzero", |cs| {
            HamiltonianSpec::new(PolynomialQ::new(
                cs.into_iter().map(|(n, d)| Rational::from((n, d))).collect(),
            ))
            .ok()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn falling_factorial_identity(h in small_ham(), n in 0u32..=4) {
            let nf = stirling_type(&h, n);
            prop_assert!(nf.coeffs().len() <= n as usize * h.n_deg() + 1);
            for m in 0..=40u64 {
                let lhs = {
                    let v = h.poly().eval_int(m as i64);
                    let mut acc = Rational::from(1);
                    for _ in 0..n { acc *= &v; }
                    acc
                };
                prop_assert_eq!(lhs, nf.eval_on_number_state(m));
            }
        }

        #[test]
        fn powers_multiply_on_number_states(h in small_ham(), a in 0u32..=3, b in 0u32..=3) {
            let sum = stirling_type(&h, a + b);
            let fa = stirling_type(&h, a);
            let fb = stirling_type(&h, b);
            for m in 0..=40u64 {
                let prod = fa.eval_on_number_state(m) * fb.eval_on_number_state(m);
                prop_assert_eq!(sum.eval_on_number_state(m), prod);
            }
        }
    }
}
