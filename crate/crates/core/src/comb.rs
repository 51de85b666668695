//! Dirac-comb weight functions `W(y) = sum_k delta(y - P(k)) / D(k)` and the
//! moment problems they solve.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};

use rug::ops::Pow;
use rug::{Complete, Float, Rational};

use crate::error::{Error, Result};
use crate::poly::PolynomialQ;
use crate::real::{
    add_up, float_up, format_float, decimal_digits, mul_up, rounding_of, EvalConfig, EvalResult,
};
use crate::series::{SeriesSpec, TailBounder};

/// One point mass. `weight` is the unscaled `x^k / k!`, summed over every
/// index in `indices` when atoms with equal locations have been merged.
#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub indices: Vec<usize>,
    pub location: Rational,
    pub weight: Rational,
}

/// Truncated comb: atoms for `k = 0..=K` plus a bound on the omitted mass.
#[derive(Clone, Debug)]
pub struct DiracComb {
    spec: SeriesSpec,
    atoms: Vec<Atom>,
    last_index: usize,
    next_weight: Rational,
    unscaled_defect: Rational,
    mass_defect: Float,
    inv_scale: Float,
    inv_scale_up: Float,
    bits: u32,
    max_terms: usize,
}

/// Smallest comb whose omitted tail mass is at most `mass_tol`.
pub fn build_comb(spec: &SeriesSpec, mass_tol: f64, cfg: &EvalConfig) -> Result<DiracComb> {
    if !(mass_tol > 0.0 && mass_tol.is_finite()) {
        return Err(Error::InvalidTolerance(mass_tol));
    }
    let bits = cfg.bits;
    let (inv_scale, inv_scale_up) = spec.inverse_scale(bits);
    let target = Float::with_val(bits, mass_tol);
    let mass = TailBounder::new(spec.p(), 0, spec.x());
    let mut atoms = Vec::new();
    let mut weight = Rational::from(1);
    for k in 0..cfg.max_terms {
        atoms.push(Atom {
            indices: vec![k],
            location: spec.p().eval_int(k as i64),
            weight: weight.clone(),
        });
        weight *= spec.x();
        weight /= k as u64 + 1;
        if mass.ratio_ok(k + 1) {
            let defect = (&weight * 2u32).complete();
            let scaled = mul_up(bits, &float_up(bits, &defect), &inv_scale_up);
            if scaled <= target {
                return Ok(DiracComb {
                    spec: spec.clone(),
                    atoms,
                    last_index: k,
                    next_weight: weight,
                    unscaled_defect: defect,
                    mass_defect: scaled,
                    inv_scale,
                    inv_scale_up,
                    bits,
                    max_terms: cfg.max_terms,
                });
            }
        }
    }
    Err(Error::TermCapExceeded {
        cap: cfg.max_terms,
    })
}

impl DiracComb {
    pub fn spec(&self) -> &SeriesSpec {
        &self.spec
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Largest series index `K` represented.
    pub fn last_index(&self) -> usize {
        self.last_index
    }

    /// Upper bound on the omitted mass `sum_{k > K} 1/D(k)`.
    pub fn mass_defect(&self) -> &Float {
        &self.mass_defect
    }

    /// The same bound before multiplication by `1/s`, exact.
    pub fn unscaled_mass_defect(&self) -> &Rational {
        &self.unscaled_defect
    }

    pub fn precision_bits(&self) -> u32 {
        self.bits
    }

    /// The weight `1/D(k)` of an atom in working precision.
    pub fn weight_of(&self, atom: &Atom) -> Float {
        Float::with_val(self.bits, Float::with_val(self.bits, &atom.weight) * &self.inv_scale)
    }

    pub fn location_of(&self, atom: &Atom) -> Float {
        Float::with_val(self.bits, &atom.location)
    }

    /// Sum of the retained weights.
    pub fn total_mass(&self) -> Float {
        let exact: Rational = self.atoms.iter().map(|a| &a.weight).sum();
        Float::with_val(self.bits, Float::with_val(self.bits, &exact) * &self.inv_scale)
    }

    /// Combines atoms sharing an exact location. Moments are unchanged.
    pub fn merged(&self) -> DiracComb {
        let mut by_location: BTreeMap<Rational, Atom> = BTreeMap::new();
        for atom in &self.atoms {
            by_location
                .entry(atom.location.clone())
                .and_modify(|a| {
                    a.indices.extend_from_slice(&atom.indices);
                    a.weight += &atom.weight;
                })
                .or_insert_with(|| atom.clone());
        }
        DiracComb {
            atoms: by_location.into_values().collect(),
            ..self.clone()
        }
    }
}

/// `sum_atoms weight * location^n`, with the truncation bound covering every
/// omitted index `k > K` through `|P(k)|^n / D(k)`.
pub fn moment(comb: &DiracComb, n: u32) -> Result<EvalResult> {
    let bits = comb.bits;
    let mut sum = Rational::new();
    for atom in &comb.atoms {
        if atom.location != 0 || n == 0 {
            sum += (&atom.location).pow(n).complete() * &atom.weight;
        }
    }
    let bounder = TailBounder::new(comb.spec.p(), n, comb.spec.x());
    let tail = bounder.tail_from(comb.last_index + 1, &comb.next_weight, comb.max_terms)?;
    let value = Float::with_val(bits, Float::with_val(bits, &sum) * &comb.inv_scale);
    let trunc_bound = mul_up(bits, &float_up(bits, &tail), &comb.inv_scale_up);
    let rounding_bound = rounding_of(&value, 2);
    Ok(EvalResult {
        value,
        trunc_bound,
        rounding_bound,
        terms_used: comb.last_index + 1,
        precision_bits: bits,
    })
}

/// Outcome of the positivity/normalization check.
#[derive(Clone, Debug)]
pub struct DistributionReport {
    pub all_positive: bool,
    pub total_mass: Float,
    pub mass_defect: Float,
    /// `|total_mass - 1|`.
    pub deviation: Float,
    pub allowance: Float,
    pub passed: bool,
}

/// Checks that the comb is a positive, normalized distribution:
/// every weight positive and `|mass - 1| <= mass_defect + rounding`.
pub fn check_distribution(comb: &DiracComb) -> DistributionReport {
    let bits = comb.bits;
    let all_positive = comb.atoms.iter().all(|a| a.weight > 0) && comb.inv_scale > 0;
    let total_mass = comb.total_mass();
    let deviation = Float::with_val(bits, &total_mass - 1u32).abs();
    let allowance = add_up(bits, &comb.mass_defect, &rounding_of(&Float::with_val(bits, 1), 3));
    let passed = all_positive && deviation <= allowance;
    DistributionReport {
        all_positive,
        total_mass,
        mass_defect: comb.mass_defect.clone(),
        deviation,
        allowance,
        passed,
    }
}

/// Which classical moment problem a comb with atoms at `{P(k)}` solves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MomentProblem {
    /// Support on the whole real line.
    Hamburger,
    /// Support in `[0, inf)`.
    Stieltjes,
    /// Bounded support.
    Hausdorff,
}

impl fmt::Display for MomentProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MomentProblem::Hamburger => "Hamburger",
            MomentProblem::Stieltjes => "Stieltjes",
            MomentProblem::Hausdorff => "Hausdorff",
        })
    }
}

/// Classifies by the range of `{P(k) : k = 0, 1, 2, ...}`, exactly.
pub fn classify(p: &PolynomialQ) -> MomentProblem {
    if p.is_constant() {
        return MomentProblem::Hausdorff;
    }
    match p.min_over_naturals() {
        Some(min) if min >= 0 => MomentProblem::Stieltjes,
        _ => MomentProblem::Hamburger,
    }
}

/// One exported row: exact location and its weight.
#[derive(Clone, Debug, PartialEq)]
pub struct CombRow {
    pub location: Rational,
    pub weight: Float,
}

/// Atoms with `y_min <= location <= y_max`, merged and sorted ascending.
pub fn export_comb(comb: &DiracComb, y_min: &Rational, y_max: &Rational) -> Result<Vec<CombRow>> {
    if y_min >= y_max {
        return Err(Error::InvalidRange {
            min: y_min.to_string(),
            max: y_max.to_string(),
        });
    }
    let merged = comb.merged();
    Ok(merged
        .atoms
        .iter()
        .filter(|a| a.location >= *y_min && a.location <= *y_max)
        .map(|a| CombRow {
            location: a.location.clone(),
            weight: merged.weight_of(a),
        })
        .collect())
}

/// Writes rows as CSV with header `location,weight`, every number in
/// scientific decimal with as many digits as `bits` carries.
pub fn write_csv<W: Write>(out: &mut W, rows: &[CombRow], bits: u32) -> io::Result<()> {
    let digits = decimal_digits(bits);
    writeln!(out, "location,weight")?;
    for row in rows {
        let loc = Float::with_val(bits, &row.location);
        writeln!(
            out,
            "{},{}",
            format_float(&loc, digits),
            format_float(&row.weight, digits)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stirling::bell_number;

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    fn bell_comb(tol: f64) -> DiracComb {
        build_comb(&SeriesSpec::bell(Rational::from(1)).unwrap(), tol, &cfg()).unwrap()
    }

    #[test]
    fn bell_comb_atoms() {
        let comb = bell_comb(1e-12);
        let e_inv = Float::with_val(256, -1).exp();
        let mut fact = 1u64;
        for (k, atom) in comb.atoms().iter().enumerate() {
            if k > 0 {
                fact *= k as u64;
            }
            assert_eq!(atom.location, k as i64);
            assert_eq!(atom.indices, vec![k]);
            let expect = Float::with_val(256, &e_inv / fact);
            assert!((comb.weight_of(atom) - expect).abs() < 1e-70);
        }
        assert!(*comb.mass_defect() <= 1e-12);
    }

    #[test]
    fn restricted_comb_starts_at_minus_one() {
        let spec = SeriesSpec::restricted_bell(Rational::from(1)).unwrap();
        let comb = build_comb(&spec, 1e-12, &cfg()).unwrap();
        let first = &comb.atoms()[0];
        assert_eq!(first.location, -1);
        let e_inv = Float::with_val(256, -1).exp();
        assert!((comb.weight_of(first) - e_inv).abs() < 1e-70);
        let m2 = moment(&comb, 2).unwrap();
        assert!(m2.encloses(&Rational::from(1)));
    }

    #[test]
    fn constant_comb_collapses() {
        let spec = SeriesSpec::auto(PolynomialQ::zero(), Rational::from(1)).unwrap();
        let comb = build_comb(&spec, 1e-12, &cfg()).unwrap().merged();
        assert_eq!(comb.len(), 1);
        assert_eq!(comb.atoms()[0].location, 0);
        assert!((comb.total_mass() - 1u32).abs() <= 1e-12);
    }

    #[test]
    fn moments_match_bell_numbers() {
        let comb = bell_comb(1e-12);
        let m3 = moment(&comb, 3).unwrap();
        assert!(m3.encloses(&Rational::from(5)));
        let m0 = moment(&comb, 0).unwrap();
        assert!(m0.encloses(&Rational::from(1)));
        let fine = bell_comb(1e-60);
        for n in 0..=15u32 {
            let m = moment(&fine, n).unwrap();
            let exact = Rational::from(bell_number(n as usize));
            assert!(m.encloses(&exact), "n={n}");
            assert!(m.distance_to(&exact) <= Float::with_val(64, &exact) * 1e-12);
        }
    }

    #[test]
    fn distribution_checks() {
        assert!(check_distribution(&bell_comb(1e-12)).passed);
        let x3 = SeriesSpec::bell(Rational::from(3)).unwrap();
        assert!(check_distribution(&build_comb(&x3, 1e-12, &cfg()).unwrap()).passed);
        let two_e = Float::with_val(256, 1).exp() * 2u32;
        let half = SeriesSpec::explicit(PolynomialQ::identity(), Rational::from(1), two_e).unwrap();
        let rep = check_distribution(&build_comb(&half, 1e-12, &cfg()).unwrap());
        assert!(!rep.passed);
        assert!((rep.total_mass - 0.5f64).abs() < 1e-12);
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&PolynomialQ::identity()), MomentProblem::Stieltjes);
        assert_eq!(classify(&PolynomialQ::from_ints(&[-1, 1])), MomentProblem::Hamburger);
        assert_eq!(classify(&PolynomialQ::from_ints(&[5])), MomentProblem::Hausdorff);
        assert_eq!(classify(&PolynomialQ::zero()), MomentProblem::Hausdorff);
        // (k-2)^2 >= 0, k^2 - 5k + 6 = (k-2)(k-3) is 0 at both roots
        assert_eq!(classify(&PolynomialQ::from_ints(&[4, -4, 1])), MomentProblem::Stieltjes);
        assert_eq!(classify(&PolynomialQ::from_ints(&[6, -5, 1])), MomentProblem::Stieltjes);
        // k^2 - 5k + 6.2 > 0 on integers, k^2 - 5k + 5 < 0 at k = 2
        let shifted = PolynomialQ::new(vec![Rational::from((31, 5)), (-5).into(), 1.into()]);
        assert_eq!(classify(&shifted), MomentProblem::Stieltjes);
        assert_eq!(classify(&PolynomialQ::from_ints(&[5, -5, 1])), MomentProblem::Hamburger);
        assert_eq!(classify(&PolynomialQ::from_ints(&[100, 0, 0, -1])), MomentProblem::Hamburger);
    }

    #[test]
    fn merging_preserves_moments() {
        let spec = SeriesSpec::auto(PolynomialQ::from_ints(&[4, -4, 1]), Rational::from(1)).unwrap();
        let comb = build_comb(&spec, 1e-20, &cfg()).unwrap();
        let merged = comb.merged();
        assert!(merged.len() < comb.len());
        assert_eq!(merged.atoms()[1].indices, vec![1, 3]);
        for n in 0..8 {
            let a = moment(&comb, n).unwrap();
            let b = moment(&merged, n).unwrap();
            assert_eq!(a.value, b.value);
        }
    }

    #[test]
    fn export_ranges() {
        let comb = bell_comb(1e-12);
        let rows = export_comb(&comb, &Rational::from(0), &Rational::from(5)).unwrap();
        assert_eq!(rows.len(), 6);
        for (k, w) in rows.windows(2).enumerate() {
            assert!(w[0].location < w[1].location);
            // w_{k+1} = w_k / (k+1)
            let ratio = Float::with_val(256, &w[1].weight / &w[0].weight);
            assert!((ratio * (k as u32 + 1) - 1u32).abs() < 1e-70);
        }
        assert!(matches!(
            export_comb(&comb, &Rational::from(10), &Rational::from(9)),
            Err(Error::InvalidRange { .. })
        ));
        let restricted = build_comb(
            &SeriesSpec::restricted_bell(Rational::from(1)).unwrap(),
            1e-12,
            &cfg(),
        )
        .unwrap();
        let rows = export_comb(&restricted, &Rational::from(-2), &Rational::from(1)).unwrap();
        let locs: Vec<_> = rows.iter().map(|r| r.location.clone()).collect();
        assert_eq!(locs, vec![Rational::from(-1), 0.into(), 1.into()]);
    }

    #[test]
    fn csv_layout() {
        let comb = bell_comb(1e-12);
        let rows = export_comb(&comb, &Rational::from(0), &Rational::from(1)).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows, 64).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "location,weight");
        assert_eq!(lines[1], "0,3.6787944117144232160e-1");
        assert_eq!(lines[2], "1.0000000000000000000e0,3.6787944117144232160e-1");
    }

    #[test]
    fn rejects_bad_mass_tol() {
        let spec = SeriesSpec::bell(Rational::from(1)).unwrap();
        assert!(build_comb(&spec, 0.0, &cfg()).is_err());
        assert!(build_comb(&spec, -1.0, &cfg()).is_err());
    }
}
