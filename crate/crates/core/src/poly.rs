//! Dense univariate polynomials with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Complete, Integer, Rational};

/// A polynomial `c_0 + c_1 k + ... + c_d k^d` with trailing zeros trimmed,
/// so the leading coefficient is nonzero unless the polynomial is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PolynomialQ {
    coeffs: Vec<Rational>,
}

impl PolynomialQ {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        PolynomialQ { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn zero() -> Self {
        PolynomialQ { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::from(1))
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `P(k) = k`.
    pub fn identity() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn monomial(degree: usize, c: Rational) -> Self {
        let mut coeffs = vec![Rational::new(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    /// Coefficients indexed by degree.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, degree: usize) -> Rational {
        self.coeffs.get(degree).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Smallest index with a nonzero coefficient.
    pub fn lowest_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| *c != 0)
    }

    pub fn eval(&self, at: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= at;
            acc += c;
        }
        acc
    }

    pub fn eval_int(&self, at: i64) -> Rational {
        self.eval(&Rational::from(at))
    }

    pub fn scale(&self, by: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| (c * by).complete()).collect())
    }

    /// `self^n` by repeated squaring.
    pub fn pow(&self, mut n: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `Q(k) = P(k + 1)`.
    pub fn shifted_by_one(&self) -> Self {
        let d = self.coeffs.len();
        let mut out = vec![Rational::new(); d];
        for (i, c) in self.coeffs.iter().enumerate() {
            for (j, slot) in out.iter_mut().enumerate().take(i + 1) {
                let binom = Integer::binomial_u(i as u32, j as u32).complete();
                *slot += c * Rational::from(binom);
            }
        }
        Self::new(out)
    }

    /// `P(k + 1) - P(k)`.
    pub fn forward_difference(&self) -> Self {
        &self.shifted_by_one() - self
    }

    /// `sum |c_i|`; bounds `|P(k)| <= abs_coeff_sum * k^deg` for every `k >= 1`.
    pub fn abs_coeff_sum(&self) -> Rational {
        self.coeffs.iter().fold(Rational::new(), |acc, c| acc + c.abs_ref().complete())
    }

    /// For a polynomial with positive leading coefficient and degree at least
    /// one, an index `k_stop` such that `P(k + 1) > P(k)` for every integer
    /// `k >= k_stop`. `None` otherwise.
    ///
    /// The forward difference has positive leading coefficient, so every real
    /// root lies below the Cauchy bound `1 + max |d_i / d_top|`.
    pub fn increasing_from(&self) -> Option<u64> {
        if self.degree() == 0 || self.leading() <= 0 {
            return None;
        }
        let diff = self.forward_difference();
        if diff.degree() == 0 {
            return Some(0);
        }
        let top = diff.leading();
        let ratio = diff.coeffs[..diff.degree()]
            .iter()
            .map(|c| (c / &top).complete().abs())
            .max()
            .unwrap_or_default();
        let cauchy = ratio + 1u32;
        let stop = cauchy.ceil().into_numer_denom().0;
        Some(stop.to_u64().expect("monotonicity bound fits in u64"))
    }

    /// Exact minimum of `P(k)` over integers `k >= 0`, or `None` when `P` is
    /// unbounded below there.
    pub fn min_over_naturals(&self) -> Option<Rational> {
        if self.is_constant() {
            return Some(self.coeff(0));
        }
        let stop = self.increasing_from()?;
        (0..=stop as i64).map(|k| self.eval_int(k)).min()
    }

    pub fn max_over_naturals(&self) -> Option<Rational> {
        (-self).min_over_naturals().map(|m| -m)
    }
}

impl<'a> Add<&'a PolynomialQ> for &'a PolynomialQ {
    type Output = PolynomialQ;
    fn add(self, rhs: &PolynomialQ) -> PolynomialQ {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolynomialQ::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a PolynomialQ> for &'a PolynomialQ {
    type Output = PolynomialQ;
    fn sub(self, rhs: &PolynomialQ) -> PolynomialQ {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolynomialQ::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a PolynomialQ> for &'a PolynomialQ {
    type Output = PolynomialQ;
    fn mul(self, rhs: &PolynomialQ) -> PolynomialQ {
        if self.is_zero() || rhs.is_zero() {
            return PolynomialQ::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += (a * b).complete();
            }
        }
        PolynomialQ::new(out)
    }
}

impl Neg for &PolynomialQ {
    type Output = PolynomialQ;
    fn neg(self) -> PolynomialQ {
        PolynomialQ::new(self.coeffs.iter().map(|c| (-c).complete()).collect())
    }
}

impl fmt::Display for PolynomialQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mag = c.abs_ref().complete();
            match (d, mag == 1) {
                (0, _) => write!(f, "{}", mag)?,
                (_, true) => {}
                (_, false) => write!(f, "{}*", mag)?,
            }
            match d {
                0 => {}
                1 => write!(f, "k")?,
                _ => write!(f, "k^{}", d)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rug::ops::Pow;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn trims_and_reports_degree() {
        let p = PolynomialQ::from_ints(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), 1);
        assert_eq!(p.leading(), 2);
        assert!(PolynomialQ::from_ints(&[0, 0]).is_zero());
        assert_eq!(PolynomialQ::zero().degree(), 0);
    }

    #[test]
    fn evaluates_and_multiplies() {
        let p = PolynomialQ::from_ints(&[-1, 1]); // k - 1
        let sq = p.pow(2);
        assert_eq!(sq, PolynomialQ::from_ints(&[1, -2, 1]));
        assert_eq!(sq.eval_int(5), 16);
        assert_eq!(p.pow(0), PolynomialQ::one());
        assert_eq!(p.to_string(), "k - 1");
        let r = PolynomialQ::new(vec![q(1, 2), q(-3, 4), q(0, 1), q(2, 1)]);
        assert_eq!(r.to_string(), "2*k^3 - 3/4*k + 1/2");
    }

    #[test]
    fn forward_difference_of_square() {
        // (k+1)^2 - k^2 = 2k + 1
        let p = PolynomialQ::from_ints(&[0, 0, 1]);
        assert_eq!(p.forward_difference(), PolynomialQ::from_ints(&[1, 2]));
    }

    #[test]
    fn naturals_minimum() {
        assert_eq!(PolynomialQ::identity().min_over_naturals(), Some(Rational::new()));
        assert_eq!(
            PolynomialQ::from_ints(&[-1, 1]).min_over_naturals(),
            Some(Rational::from(-1))
        );
        // (k-2)^2 - 1 = k^2 - 4k + 3, minimum -1 at k = 2
        assert_eq!(
            PolynomialQ::from_ints(&[3, -4, 1]).min_over_naturals(),
            Some(Rational::from(-1))
        );
        assert_eq!(PolynomialQ::from_ints(&[0, -1]).min_over_naturals(), None);
        assert_eq!(
            PolynomialQ::from_ints(&[0, -1]).max_over_naturals(),
            Some(Rational::new())
        );
    }

    fn small_poly() -> impl Strategy<Value = PolynomialQ> {
        prop::collection::vec((-9i64..=9, 1i64..=9), 1..=4)
            .prop_map(|cs| PolynomialQ::new(cs.into_iter().map(|(n, d)| q(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn increasing_from_is_sound(p in small_poly()) {
            if let Some(stop) = p.increasing_from() {
                for k in stop as i64..stop as i64 + 60 {
                    prop_assert!(p.eval_int(k + 1) > p.eval_int(k));
                }
            }
        }

        #[test]
        fn minimum_is_attained_and_lower(p in small_poly()) {
            if let Some(min) = p.min_over_naturals() {
                for k in 0..80 {
                    prop_assert!(p.eval_int(k) >= min);
                }
            }
        }

        #[test]
        fn pow_agrees_pointwise(p in small_poly(), n in 0u32..5, k in -5i64..10) {
            let lhs = p.pow(n).eval_int(k);
            let v = p.eval_int(k);
            let mut rhs = Rational::from(1);
            for _ in 0..n { rhs *= &v; }
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn coefficient_sum_bounds_values(p in small_poly(), k in 1i64..50) {
            let bound = p.abs_coeff_sum() * Rational::from(k).pow(p.degree() as i32);
            let v = p.eval_int(k);
            prop_assert!(v.abs_ref().complete() <= bound);
        }
    }
}
