//! One-shot verification suite: every module exercised against an
//! independent route, one pass/fail line per check.

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Float, Rational};

use crate::comb::{build_comb, check_distribution, classify, export_comb, moment, write_csv, MomentProblem};
use crate::fock::{coherent_expect_exp, expect_number_power, verify_normal_form_grid, FockTruncation};
use crate::genfun::{egf_closed_form_bell, egf_eval, egf_partial_from_numbers, ogf_eval};
use crate::normal::{stirling_type, HamiltonianSpec};
use crate::oracle;
use crate::par::{self, Execution};
use crate::poly::PolynomialQ;
use crate::real::EvalConfig;
use crate::series::{cross_check, eval_bell_type, SeriesSpec};
use crate::stirling::{bell_number, bell_polynomial, restricted_bell, stirling2};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grid {
    Small,
    Full,
}

impl std::str::FromStr for Grid {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "small" => Ok(Grid::Small),
            "full" => Ok(Grid::Full),
            other => Err(format!("unknown grid `{other}` (expected small|full)")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:<24} {:>8.3}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

type Check = fn(Grid) -> Result<String, String>;

const CHECKS: &[(&str, Check)] = &[
    ("bell-sequence", check_bell_sequence),
    ("dobinski-agreement", check_dobinski_agreement),
    ("restricted-bell", check_restricted_bell),
    ("stirling-type", check_stirling_type),
    ("moment-problem", check_moment_problem),
    ("generating-functions", check_generating_functions),
    ("ordinary-gf", check_ogf),
    ("coherent-state", check_coherent_state),
    ("comb-export", check_comb_export),
];

/// Runs every check; output order is fixed regardless of `exec`.
pub fn run_suite(grid: Grid, exec: Execution) -> Vec<CheckOutcome> {
    par::map(exec, CHECKS, |(name, check)| {
        let start = Instant::now();
        let result = check(grid);
        let elapsed = start.elapsed();
        let (passed, detail) = match result {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        CheckOutcome {
            name,
            passed,
            detail,
            elapsed,
        }
    })
}

/// Random nonzero Hamiltonians of degree 1..=3 with coefficients `p/q`,
/// `|p| <= 9`, `1 <= q <= 9`, from a fixed seed.
pub fn random_hamiltonians(count: usize, seed: u64) -> Vec<HamiltonianSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let deg = rng.gen_range(1..=3);
            let mut coeffs: Vec<Rational> = (0..=deg)
                .map(|_| Rational::from((rng.gen_range(-9i64..=9), rng.gen_range(1i64..=9))))
                .collect();
            while coeffs[deg] == 0 {
                coeffs[deg] = Rational::from((rng.gen_range(1i64..=9), rng.gen_range(1i64..=9)));
            }
            HamiltonianSpec::new(PolynomialQ::new(coeffs)).expect("nonzero leading coefficient")
        })
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn rel_err(value: &Float, exact: &Float) -> Float {
    let diff = Float::with_val(value.prec(), value - exact).abs();
    if exact.is_zero() {
        diff
    } else {
        diff / Float::with_val(exact.prec(), exact.abs_ref())
    }
}

fn xs() -> [Rational; 3] {
    [Rational::from((1, 2)), Rational::from(1), Rational::from(3)]
}

fn check_bell_sequence(grid: Grid) -> Result<String, String> {
    let expect = [1u32, 1, 2, 5, 15, 52, 203, 877];
    for (n, b) in expect.iter().enumerate() {
        ensure(bell_number(n) == *b, || format!("B({n}) = {}", bell_number(n)))?;
    }
    let brute = if grid == Grid::Full { 11 } else { 10 };
    for n in 0..=brute {
        ensure(bell_number(n) == oracle::count_partitions(n), || format!("B({n}) vs enumeration"))?;
        for k in 0..=n {
            ensure(stirling2(n, k) == oracle::count_partitions_with_blocks(n, k), || {
                format!("S({n},{k}) vs enumeration")
            })?;
        }
    }
    Ok(format!("B(0..7) = 1,1,2,5,15,52,203,877; enumeration agrees to n = {brute}"))
}

fn check_dobinski_agreement(grid: Grid) -> Result<String, String> {
    let cfg = EvalConfig::default();
    let n_max = if grid == Grid::Full { 30 } else { 20 };
    let mut worst = Float::new(64);
    for x in xs() {
        let spec = SeriesSpec::bell(x.clone()).map_err(err)?;
        for n in 0..=n_max {
            let r = eval_bell_type(&spec, n, 1e-12, &cfg).map_err(err)?;
            let exact = bell_polynomial(n as usize).eval(&x);
            let dist = r.distance_to(&exact);
            ensure(dist <= r.trunc_bound, || format!("n={n} x={x}: error exceeds bound"))?;
            let rel = rel_err(&r.value, &Float::with_val(512, &exact));
            ensure(rel <= 1e-12, || format!("n={n} x={x}: rel err {}", rel.to_f64()))?;
            worst = worst.max(&Float::with_val(64, &rel));
        }
    }
    Ok(format!("n <= {n_max}, x in {{1/2,1,3}}: worst rel err {:.2e}", worst.to_f64()))
}

fn check_restricted_bell(_grid: Grid) -> Result<String, String> {
    let cfg = EvalConfig::default();
    let expect = [1i64, 0, 1, 1, 4, 11, 41, 162];
    let spec = SeriesSpec::restricted_bell(Rational::from(1)).map_err(err)?;
    for (n, b) in expect.iter().enumerate() {
        ensure(restricted_bell(n) == *b, || format!("exact route n={n}"))?;
        let r = eval_bell_type(&spec, n as u32, 1e-12, &cfg).map_err(err)?;
        ensure(r.encloses(&Rational::from(*b)), || format!("series route n={n}: {r}"))?;
    }
    for n in 0..=10 {
        ensure(restricted_bell(n) == oracle::count_singleton_free_partitions(n), || {
            format!("n={n} vs enumeration")
        })?;
    }
    Ok("1,0,1,1,4,11,41,162 by both routes".into())
}

fn check_stirling_type(grid: Grid) -> Result<String, String> {
    let count = if grid == Grid::Full { 200 } else { 50 };
    let specs = random_hamiltonians(count, 0x5eed);
    let cases: Vec<(HamiltonianSpec, u32)> = specs
        .iter()
        .enumerate()
        .map(|(i, h)| (h.clone(), (i % 5) as u32))
        .collect();
    for (i, rep) in verify_normal_form_grid(&cases, 40, Execution::Parallel).into_iter().enumerate() {
        let rep = rep.map_err(err)?;
        ensure(rep.passed, || format!("case {i}: fails at m = {:?}", rep.first_failure))?;
    }
    let cfg = EvalConfig::default();
    let checks = par::map(Execution::Parallel, &cases, |(h, n)| {
        xs().iter()
            .map(|x| cross_check(h, *n, x, 1e-12, &cfg).map(|r| r.passed))
            .collect::<Vec<_>>()
    });
    for (i, row) in checks.into_iter().enumerate() {
        for r in row {
            ensure(r.map_err(err)?, || format!("case {i}: cross-check failed"))?;
        }
    }
    let square = HamiltonianSpec::new(PolynomialQ::from_ints(&[0, 0, 1])).map_err(err)?;
    for n in 0..=6u32 {
        let nf = stirling_type(&square, n);
        let row: Vec<Rational> = (0..=2 * n as usize)
            .map(|k| Rational::from(stirling2(2 * n as usize, k)))
            .collect();
        ensure(PolynomialQ::new(nf.coeffs().to_vec()) == PolynomialQ::new(row), || {
            format!("m^2 power {n} is not row {}", 2 * n)
        })?;
    }
    Ok(format!("{count} random Hamiltonians exact at m <= 40 and cross-checked at 3 x values"))
}

fn check_moment_problem(_grid: Grid) -> Result<String, String> {
    let cfg = EvalConfig::default();
    let spec = SeriesSpec::bell(Rational::from(1)).map_err(err)?;
    let comb = build_comb(&spec, 1e-12, &cfg).map_err(err)?;
    let dist = check_distribution(&comb);
    ensure(dist.passed && dist.deviation <= 1e-12, || "Bell comb not normalized".into())?;
    for n in 0..=15u32 {
        let m = moment(&comb, n).map_err(err)?;
        ensure(m.encloses(&Rational::from(bell_number(n as usize))), || format!("moment {n}"))?;
    }
    let labels = [
        (PolynomialQ::identity(), MomentProblem::Stieltjes),
        (PolynomialQ::from_ints(&[-1, 1]), MomentProblem::Hamburger),
        (PolynomialQ::from_ints(&[5]), MomentProblem::Hausdorff),
        (PolynomialQ::zero(), MomentProblem::Hausdorff),
    ];
    for (p, want) in labels {
        ensure(classify(&p) == want, || format!("classify({p})"))?;
    }
    Ok(format!("{} atoms, mass defect {:.1e}", comb.len(), comb.mass_defect().to_f64()))
}

fn check_generating_functions(_grid: Grid) -> Result<String, String> {
    let cfg = EvalConfig::default();
    let lambdas = [Rational::from(-1), Rational::new(), Rational::from((1, 2)), Rational::from(1)];
    for x in xs() {
        for restricted in [false, true] {
            let spec = if restricted {
                SeriesSpec::restricted_bell(x.clone())
            } else {
                SeriesSpec::bell(x.clone())
            }
            .map_err(err)?;
            for lam in &lambdas {
                let r = egf_eval(&spec, lam, 1e-13, &cfg).map_err(err)?;
                let closed = egf_closed_form_bell(lam, &x, restricted, cfg.bits);
                ensure(r.distance_to_float(&closed) <= 1e-10, || {
                    format!("EGF x={x} lambda={lam} restricted={restricted}")
                })?;
            }
        }
        // central difference at 0 against B(1, x) = x
        let spec = SeriesSpec::bell(x.clone()).map_err(err)?;
        let h = Rational::from((1, 1_000_000));
        let plus = egf_eval(&spec, &h, 1e-15, &cfg).map_err(err)?.value;
        let minus = egf_eval(&spec, &Rational::from(-&h), 1e-15, &cfg).map_err(err)?.value;
        let fd = Float::with_val(cfg.bits, plus - minus) * 500_000u32;
        let target = Float::with_val(cfg.bits, &x);
        ensure(rel_err(&fd, &target) <= 1e-5, || format!("derivative at x={x}"))?;
    }
    let lam = Rational::from((1, 10));
    let bells: Vec<Rational> = (0..=25).map(|n| Rational::from(bell_number(n))).collect();
    let restricted: Vec<Rational> = (0..=25).map(|n| Rational::from(restricted_bell(n))).collect();
    for (values, flag) in [(&bells, false), (&restricted, true)] {
        let partial = egf_partial_from_numbers(values, &lam, 25, cfg.bits).map_err(err)?;
        let closed = egf_closed_form_bell(&lam, &Rational::from(1), flag, cfg.bits);
        ensure(Float::with_val(cfg.bits, partial - closed).abs() <= 1e-10, || {
            format!("partial EGF restricted={flag}")
        })?;
    }
    Ok("closed forms, partial sums and derivative agree".into())
}

fn check_ogf(grid: Grid) -> Result<String, String> {
    let cfg = EvalConfig::default();
    let spec = SeriesSpec::bell(Rational::from(1)).map_err(err)?;
    let r = ogf_eval(&spec, &Rational::from((-1, 2)), 1e-14, &cfg).map_err(err)?;
    let terms = if grid == Grid::Full { 10_000 } else { 2_000 };
    let direct = oracle::poisson_sum(cfg.bits, &Rational::from(1), terms, |k| {
        Float::with_val(cfg.bits, 2) / (k as u32 + 2)
    });
    ensure(r.distance_to_float(&direct) <= 1e-12, || "OGF at -1/2 vs direct sum".into())?;
    for j in 1..=3u64 {
        match ogf_eval(&spec, &Rational::from((1, j)), 1e-12, &cfg) {
            Err(Error::Pole { k, .. }) if k as u64 == j => {}
            other => return Err(format!("lambda = 1/{j}: expected pole, got {other:?}")),
        }
    }
    Ok(format!("matches {terms}-term direct sum; poles at 1, 1/2, 1/3"))
}

fn check_coherent_state(_grid: Grid) -> Result<String, String> {
    let bits = 256;
    let cfg = EvalConfig::default();
    let zs = [Rational::from((1, 2)), Rational::from(1), Rational::from(4)];
    let trunc = FockTruncation::new(120).map_err(err)?;
    for z in &zs {
        for n in 0..=8u32 {
            let r = expect_number_power(n, z, trunc, bits).map_err(err)?;
            let exact = bell_polynomial(n as usize).eval(z);
            let rel = rel_err(&r.value, &Float::with_val(512, &exact));
            ensure(rel <= 1e-10, || format!("<(a+a)^{n}> at |z|^2 = {z}"))?;
        }
        let cases: Vec<(PolynomialQ, Vec<Rational>)> = vec![
            (
                PolynomialQ::identity(),
                [(-1, 1), (-1, 2), (0, 1), (1, 2), (1, 1)].iter().map(|&v| Rational::from(v)).collect(),
            ),
            (
                PolynomialQ::from_ints(&[0, 0, 1]),
                [(-1, 1), (-1, 10), (0, 1)].iter().map(|&v| Rational::from(v)).collect(),
            ),
            (
                PolynomialQ::from_ints(&[1, -2, 0, 1]),
                [(-1, 2), (-1, 20)].iter().map(|&v| Rational::from(v)).collect(),
            ),
        ];
        for (p, lambdas) in cases {
            let h = HamiltonianSpec::new(p.clone()).map_err(err)?;
            let spec = SeriesSpec::auto(p, z.clone()).map_err(err)?;
            for lam in lambdas {
                let fock = coherent_expect_exp(&h, &lam, z, trunc, bits)
                    .map_err(err)?;
                let series = egf_eval(&spec, &lam, 1e-14, &cfg).map_err(err)?;
                let gap = fock.distance_to_float(&series.value);
                let allowed = Float::with_val(bits, fock.error_bound() + series.error_bound());
                ensure(gap <= 1e-10 && gap <= allowed, || {
                    format!("exp({lam} H) at |z|^2 = {z}")
                })?;
            }
        }
    }
    Ok("number powers and exponentials agree with exact and series routes".into())
}

fn check_comb_export(_grid: Grid) -> Result<String, String> {
    let cfg = EvalConfig::default();
    let spec = SeriesSpec::bell(Rational::from(1)).map_err(err)?;
    let comb = build_comb(&spec, 1e-12, &cfg).map_err(err)?;
    let rows = export_comb(&comb, &Rational::new(), &Rational::from(5)).map_err(err)?;
    ensure(rows.len() == 6, || format!("{} rows", rows.len()))?;
    let mut buf = Vec::new();
    write_csv(&mut buf, &rows, cfg.bits).map_err(|e| e.to_string())?;
    let text = String::from_utf8(buf).map_err(|e| e.to_string())?;
    let e_inv = Float::with_val(cfg.bits, -1).exp();
    let mut fact = Float::with_val(cfg.bits, 1);
    for (k, line) in text.lines().skip(1).enumerate() {
        if k > 0 {
            fact *= k as u32;
        }
        let (loc, w) = line.split_once(',').ok_or("malformed row")?;
        let loc = Float::with_val(cfg.bits, Float::parse(loc).map_err(|e| e.to_string())?);
        let w = Float::with_val(cfg.bits, Float::parse(w).map_err(|e| e.to_string())?);
        ensure(loc == k as u32, || format!("row {k}: location"))?;
        let want = Float::with_val(cfg.bits, &e_inv / &fact);
        ensure(rel_err(&w, &want) <= 1e-70, || format!("row {k}: weight"))?;
    }
    Ok("six atoms (k, e^-1/k!) for 0 <= y <= 5".into())
}
