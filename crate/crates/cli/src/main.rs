//! `dobinski`: Bell-type numbers, Dobinski series, Dirac combs and generating
//! functions from the command line.

mod text;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dobinski::real::format_full;
use dobinski::verify::{run_suite, Grid};
use dobinski::{
    bell_number, bell_polynomial, build_comb, classify, egf_eval, eval_bell_type, export_comb,
    ogf_eval, restricted_bell, restricted_bell_polynomial, stirling2, stirling_type, write_csv,
    EvalConfig, EvalResult, Execution, HamiltonianSpec, PolynomialQ, SeriesSpec, StirlingTriangle,
};
use rug::Rational;
use serde_json::{json, Map, Value};

use crate::text::{format_poly, parse_poly, parse_rational};

#[derive(Debug, Parser)]
#[command(name = "dobinski", version, about = "Bell-type numbers and Dobinski-type series")]
struct Cli {
    /// Working precision in bits for every high-precision value
    #[arg(long, global = true, env = "DOBINSKI_BITS", default_value_t = dobinski::real::DEFAULT_BITS,
          value_parser = clap::value_parser!(u32).range(16..=1_048_576))]
    bits: u32,

    /// Write results to FILE instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Stirling numbers of the second kind S(n,k), or the whole row n
    Stirling {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Bell numbers B(n), Bell polynomials B(n,x), or their singleton-free variants
    Bell {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        x: Option<Rational>,
        #[arg(long)]
        restricted: bool,
    },
    /// Normal-ordering coefficients of H(a^dag a)^n as a JSON map k -> rational
    StirlingType {
        #[arg(long, value_parser = parse_poly, allow_hyphen_values = true)]
        poly: PolynomialQ,
        #[arg(long)]
        n: u32,
    },
    /// Truncated Dobinski sum e^{-x} sum_k P(k)^n x^k / k!
    Dobinski {
        #[arg(long, value_parser = parse_poly, allow_hyphen_values = true)]
        poly: PolynomialQ,
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        x: Rational,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Exponential generating function sum_k e^{lambda P(k)} e^{-x} x^k / k!
    Egf(GenFunArgs),
    /// Ordinary generating function sum_k e^{-x} x^k / (k! (1 - lambda P(k)))
    Ogf(GenFunArgs),
    /// Dirac-comb weight function as CSV atoms, and/or its moment-problem class
    Comb {
        #[arg(long, value_parser = parse_poly, allow_hyphen_values = true)]
        poly: PolynomialQ,
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        x: Rational,
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        ymin: Option<Rational>,
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        ymax: Option<Rational>,
        #[arg(long)]
        classify: bool,
        /// Bound on the mass of the omitted atoms
        #[arg(long, default_value_t = 1e-12)]
        mass_tol: f64,
    },
    /// Run the verification suite and print a pass/fail table
    Verify {
        #[arg(long, default_value = "small")]
        grid: Grid,
    },
}

#[derive(Debug, Args)]
struct GenFunArgs {
    #[arg(long, value_parser = parse_poly, allow_hyphen_values = true)]
    poly: PolynomialQ,
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    x: Rational,
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    lambda: Rational,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

/// What a command produced: text for the output stream and an exit code.
struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

fn math_error(e: dobinski::Error) -> Output {
    let mut obj = Map::new();
    obj.insert("error".into(), json!(e.kind()));
    obj.insert("detail".into(), json!(e.to_string()));
    if let dobinski::Error::Pole { k, .. } = &e {
        obj.insert("k".into(), json!(k));
    }
    Output {
        text: format!("{}\n", Value::Object(obj)),
        code: 1,
    }
}

fn eval_json(poly: &PolynomialQ, r: &EvalResult) -> String {
    let v = json!({
        "poly": format_poly(poly),
        "value": format_full(&r.value),
        "trunc_bound": format_full(&r.trunc_bound),
        "rounding_bound": format_full(&r.rounding_bound),
        "terms_used": r.terms_used,
        "precision_bits": r.precision_bits,
    });
    format!("{v}\n")
}

fn run(cli: &Cli) -> Result<Output, dobinski::Error> {
    let cfg = EvalConfig::with_bits(cli.bits);
    let out = match &cli.command {
        Command::Stirling { n, k: Some(k) } => Output::ok(format!("{}\n", stirling2(*n, *k))),
        Command::Stirling { n, k: None } => {
            let row = StirlingTriangle::global().row(*n);
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            Output::ok(format!("{}\n", cells.join(" ")))
        }
        Command::Bell { n, x, restricted } => {
            let text = match (x, restricted) {
                (None, false) => bell_number(*n).to_string(),
                (None, true) => restricted_bell(*n).to_string(),
                (Some(x), false) => bell_polynomial(*n).eval(x).to_string(),
                (Some(x), true) => restricted_bell_polynomial(*n).eval(x).to_string(),
            };
            Output::ok(format!("{text}\n"))
        }
        Command::StirlingType { poly, n } => {
            let h = HamiltonianSpec::new(poly.clone())?;
            let nf = stirling_type(&h, *n);
            let map: Map<String, Value> = nf
                .nonzero()
                .map(|(k, c)| (k.to_string(), json!(c.to_string())))
                .collect();
            Output::ok(format!("{}\n", Value::Object(map)))
        }
        Command::Dobinski { poly, n, x, tol } => {
            let spec = SeriesSpec::auto(poly.clone(), x.clone())?;
            Output::ok(eval_json(poly, &eval_bell_type(&spec, *n, *tol, &cfg)?))
        }
        Command::Egf(args) => {
            let spec = SeriesSpec::auto(args.poly.clone(), args.x.clone())?;
            Output::ok(eval_json(&args.poly, &egf_eval(&spec, &args.lambda, args.tol, &cfg)?))
        }
        Command::Ogf(args) => {
            let spec = SeriesSpec::auto(args.poly.clone(), args.x.clone())?;
            Output::ok(eval_json(&args.poly, &ogf_eval(&spec, &args.lambda, args.tol, &cfg)?))
        }
        Command::Comb {
            poly,
            x,
            ymin,
            ymax,
            classify: want_class,
            mass_tol,
        } => {
            let class = classify(poly);
            let ranged = ymin.is_some() || ymax.is_some();
            if *want_class && !ranged {
                return Ok(Output::ok(format!("{class}\n")));
            }
            let spec = SeriesSpec::auto(poly.clone(), x.clone())?;
            let comb = build_comb(&spec, *mass_tol, &cfg)?;
            let lo = ymin.clone().unwrap_or_else(|| {
                comb.atoms().iter().map(|a| a.location.clone()).min().unwrap_or_default()
            });
            let mut hi = ymax.clone().unwrap_or_else(|| {
                comb.atoms().iter().map(|a| a.location.clone()).max().unwrap_or_default()
            });
            if ymax.is_none() && hi <= lo {
                hi = Rational::from(&lo + 1u32);
            }
            let rows = export_comb(&comb, &lo, &hi)?;
            let mut buf = Vec::new();
            write_csv(&mut buf, &rows, cli.bits).expect("writing to memory");
            if *want_class {
                eprintln!("{class}");
            }
            Output::ok(String::from_utf8(buf).expect("ascii csv"))
        }
        Command::Verify { grid } => {
            let outcomes = run_suite(*grid, Execution::Parallel);
            let mut text = String::new();
            for o in &outcomes {
                text.push_str(&format!("{o}\n"));
            }
            let passed = outcomes.iter().filter(|o| o.passed).count();
            text.push_str(&format!("{passed}/{} checks passed\n", outcomes.len()));
            Output {
                text,
                code: if passed == outcomes.len() { 0 } else { 1 },
            }
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let line = rendered.lines().next().unwrap_or("error: invalid arguments");
            eprintln!("{line}");
            return ExitCode::from(2);
        }
    };
    let output = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            let out = math_error(e);
            print!("{}", out.text);
            return ExitCode::from(out.code);
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, &output.text),
        None => std::io::stdout().write_all(output.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(output.code)
}
