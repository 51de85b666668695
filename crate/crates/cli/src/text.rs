//! Text forms used on the command line: rationals and polynomial specs.
//!
//! Polynomials are comma-separated `degree:coefficient` pairs, so `1:1` is
//! `P(k) = k` and `2:1,1:1` is `k^2 + k`. Coefficients and other rationals
//! are integers, `p/q`, or plain decimals such as `-0.25` or `1e-6`.

use dobinski::PolynomialQ;
use rug::{Integer, Rational};

pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty number".into());
    }
    if s.contains('/') || !s.contains(['.', 'e', 'E']) {
        let parsed = Rational::parse(s).map_err(|e| format!("bad rational `{s}`: {e}"))?;
        return Ok(Rational::from(parsed));
    }
    parse_decimal(s)
}

/// Exact value of a decimal literal like `-12.5e-3`.
fn parse_decimal(s: &str) -> Result<Rational, String> {
    let bad = || format!("bad number `{s}`");
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer = Integer::from_str_radix(if digits.is_empty() { "0" } else { &digits }, 10)
        .map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let power = Integer::from(Integer::u_pow_u(10, scale.unsigned_abs()));
    let mut value = Rational::from(numer);
    if scale >= 0 {
        value *= power;
    } else {
        value /= power;
    }
    Ok(if neg { -value } else { value })
}

pub fn parse_poly(text: &str) -> Result<PolynomialQ, String> {
    let mut coeffs: Vec<Option<Rational>> = Vec::new();
    for pair in text.split(',') {
        let pair = pair.trim();
        let (deg, coef) = pair
            .split_once(':')
            .ok_or_else(|| format!("expected `degree:coefficient`, got `{pair}`"))?;
        let deg: usize = deg
            .trim()
            .parse()
            .map_err(|_| format!("bad degree `{}`", deg.trim()))?;
        if deg > 64 {
            return Err(format!("degree {deg} too large"));
        }
        let coef = parse_rational(coef)?;
        if coeffs.len() <= deg {
            coeffs.resize(deg + 1, None);
        }
        if coeffs[deg].is_some() {
            return Err(format!("degree {deg} given twice"));
        }
        coeffs[deg] = Some(coef);
    }
    let poly = PolynomialQ::new(coeffs.into_iter().map(Option::unwrap_or_default).collect());
    if poly.is_zero() {
        return Err("polynomial needs at least one nonzero coefficient".into());
    }
    Ok(poly)
}

/// Inverse of `parse_poly`: nonzero terms, highest degree first.
pub fn format_poly(p: &PolynomialQ) -> String {
    if p.is_zero() {
        return "0:0".into();
    }
    p.coeffs()
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| **c != 0)
        .map(|(d, c)| format!("{d}:{c}"))
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3/6").unwrap(), Rational::from((1, 2)));
        assert_eq!(parse_rational("-7").unwrap(), -7);
        assert_eq!(parse_rational("0.1").unwrap(), Rational::from((1, 10)));
        assert_eq!(parse_rational("-1e-6").unwrap(), Rational::from((-1, 1_000_000)));
        assert_eq!(parse_rational("2.5E2").unwrap(), 250);
        assert_eq!(parse_rational(".5").unwrap(), Rational::from((1, 2)));
        for bad in ["", "1/0", "abc", "1.2.3", "e5", "1/x"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn polys() {
        assert_eq!(parse_poly("1:1").unwrap(), PolynomialQ::identity());
        assert_eq!(parse_poly("2:1, 1:1").unwrap(), PolynomialQ::from_ints(&[0, 1, 1]));
        assert_eq!(parse_poly("0:-1,1:1").unwrap(), PolynomialQ::from_ints(&[-1, 1]));
        assert!(parse_poly("1:1,1:2").is_err());
        assert!(parse_poly("0:0").is_err());
        assert!(parse_poly("x:1").is_err());
        assert!(parse_poly("1").is_err());
        assert_eq!(format_poly(&parse_poly("0:1/2,3:-4").unwrap()), "3:-4,0:1/2");
    }

    proptest! {
        #[test]
        fn printed_specs_reparse(cs in prop::collection::vec((-50i64..=50, 1i64..=12), 1..6)) {
            let p = PolynomialQ::new(cs.into_iter().map(|(n, d)| Rational::from((n, d))).collect());
            prop_assume!(!p.is_zero());
            let text = format_poly(&p);
            prop_assert_eq!(parse_poly(&text).unwrap(), p);
        }
    }
}
