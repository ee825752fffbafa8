use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use spatial_stirling::factorial::{falling, rising};
use spatial_stirling::ground::{PointFn, PointMeasure};
use spatial_stirling::ktransform::{kinverse, ktransform, star};
use spatial_stirling::poisson::{poisson_expect, poisson_expect_finite, poisson_expect_series};
use spatial_stirling::polyop::euler_expand;
use spatial_stirling::random::RatGen;
use spatial_stirling::report::Report;
use spatial_stirling::scalar::{rational_string, Scalar};
use spatial_stirling::stirling::{apply, classical_triangle, Kind};
use spatial_stirling::suite::{run_suites, suites_of, SuiteConfig, SUITES};
use spatial_stirling::symtensor::{GradedFn, SymFn};
use spatial_stirling::touchard::{ruc_measure, touchard_measure};
use spatial_stirling::wick::{check_katriel, katriel_rhs, normal_order, RefMeasure, WordOp};
use spatial_stirling::{Qi, Q};

/// Spatial Stirling operators, Touchard measures and Wick algebra on a
/// finite ground set.
#[derive(Parser, Debug)]
#[command(name = "spatial-stirling", version)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// Ground set size for generated inputs.
    #[arg(long, global = true, default_value_t = 3)]
    m: usize,
    /// Largest rank or degree exercised by verification suites.
    #[arg(long, global = true, default_value_t = 5)]
    nmax: usize,
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Bound on numerators and denominators of generated rationals.
    #[arg(long, global = true, default_value_t = 5)]
    bound: i64,
    #[arg(long, global = true, value_enum, default_value_t = Field::Q)]
    field: Field,
    /// Use f64 arithmetic instead of exact rationals.
    #[arg(long, global = true)]
    float: bool,
    /// Truncation of float series.
    #[arg(long = "K", global = true, default_value_t = 100)]
    k_max: usize,
    /// Tolerance for float comparisons.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    #[value(name = "Q")]
    Q,
    #[value(name = "Qi")]
    Qi,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Factorial measures.
    Factorial {
        #[command(subcommand)]
        cmd: FactorialCmd,
    },
    /// Stirling and Lah operators.
    Stirling {
        #[command(subcommand)]
        cmd: StirlingCmd,
    },
    /// Differential operators on polynomials of a measure.
    Polyop {
        #[command(subcommand)]
        cmd: PolyopCmd,
    },
    /// The K-transform and the star product.
    Ktransform {
        #[command(subcommand)]
        cmd: KCmd,
    },
    /// The Poisson functional.
    Poisson {
        #[command(subcommand)]
        cmd: PoissonCmd,
    },
    /// Touchard, Bell and RUC measures.
    Touchard {
        #[command(subcommand)]
        cmd: TouchardCmd,
    },
    /// Creation and annihilation operators.
    Wick {
        #[command(subcommand)]
        cmd: WickCmd,
    },
    /// Run every verification suite.
    VerifyAll,
}

#[derive(Subcommand, Debug)]
enum FactorialCmd {
    /// Falling (or rising) factorial measure of a weight vector.
    Measure {
        #[arg(long)]
        omega: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rising: bool,
    },
    Verify(VerifyArgs),
}

#[derive(Subcommand, Debug)]
enum StirlingCmd {
    /// Classical triangle on the one-point ground set.
    Triangle {
        #[arg(long)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        /// Plain text rows instead of JSON.
        #[arg(long)]
        table: bool,
    },
    /// Apply A(n,k) to a symmetric function.
    Apply {
        #[arg(long)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long = "fn")]
        f: PathBuf,
    },
    Verify(VerifyArgs),
}

#[derive(Subcommand, Debug)]
enum PolyopCmd {
    /// Coefficients of a polynomial in falling factorial measures.
    EulerExpand {
        #[arg(long)]
        poly: PathBuf,
    },
    Verify(VerifyArgs),
}

#[derive(Subcommand, Debug)]
enum KCmd {
    Forward {
        #[arg(long = "in")]
        input: PathBuf,
    },
    Inverse {
        #[arg(long = "in")]
        input: PathBuf,
    },
    Star {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "in2")]
        input2: PathBuf,
    },
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum PoissonRoute {
    Stirling,
    Finite,
    Series,
}

#[derive(Subcommand, Debug)]
enum PoissonCmd {
    /// The Poisson expectation of a polynomial.
    Expect {
        #[arg(long)]
        omega: PathBuf,
        #[arg(long)]
        poly: PathBuf,
        #[arg(long, value_enum, default_value_t = PoissonRoute::Stirling)]
        route: PoissonRoute,
    },
    Verify(VerifyArgs),
}

#[derive(Subcommand, Debug)]
enum TouchardCmd {
    /// Touchard measure T_n(ω), or D_n(ω) = T_n(-ω) with --ruc.
    Measure {
        #[arg(long)]
        omega: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ruc: bool,
    },
    Verify(VerifyArgs),
}

#[derive(Subcommand, Debug)]
enum WickCmd {
    /// Normal order a product of n random densities and compare with the
    /// Stirling expansion.
    Katriel {
        #[arg(long)]
        n: usize,
    },
    /// Normal order a word read from JSON.
    NormalOrder {
        #[arg(long = "in")]
        input: PathBuf,
        /// Reference measure; defaults to unit weights on --m points.
        #[arg(long)]
        sigma: Option<PathBuf>,
    },
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite name within the module; all of the module's suites if omitted.
    #[arg(long)]
    suite: Option<String>,
}

enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match (cli.opts.float, cli.opts.field) {
        (true, Field::Qi) => Err(anyhow::anyhow!("--float is only available over the real field")),
        (true, Field::Q) => run::<f64>(&cli),
        (false, Field::Q) => run::<Q>(&cli),
        (false, Field::Qi) => run::<Qi>(&cli),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run<S: Scalar>(cli: &Cli) -> Result<Outcome> {
    let o = &cli.opts;
    match &cli.cmd {
        Cmd::Factorial { cmd } => match cmd {
            FactorialCmd::Measure { omega, n, rising: up } => {
                let omega: PointMeasure<S> = read(omega, PointMeasure::from_json)?;
                let mu = if *up { rising(&omega, *n) } else { falling(&omega, *n) };
                emit(&mu.to_json())
            }
            FactorialCmd::Verify(v) => verify::<S>(o, "factorial", v),
        },
        Cmd::Stirling { cmd } => match cmd {
            StirlingCmd::Triangle { kind, n, table } => {
                let rows: Vec<String> = classical_triangle(*kind, *n)?
                    .iter()
                    .map(|row| row.iter().map(rational_string).collect::<Vec<_>>().join(" "))
                    .collect();
                if *table {
                    for row in &rows {
                        println!("{row}");
                    }
                    Ok(Outcome::Pass)
                } else {
                    emit(&json!({ "kind": kind.symbol(), "n": n, "rows": rows }))
                }
            }
            StirlingCmd::Apply { kind, n, k, f } => {
                let f: SymFn<S> = read(f, SymFn::from_json)?;
                emit(&apply(*kind, *n, *k, &f)?.to_json())
            }
            StirlingCmd::Verify(v) => verify::<S>(o, "stirling", v),
        },
        Cmd::Polyop { cmd } => match cmd {
            PolyopCmd::EulerExpand { poly } => {
                let p: GradedFn<S> = read(poly, GradedFn::from_json)?;
                let g = euler_expand(&p)?;
                emit(&Value::Array(g.iter().map(SymFn::to_json).collect()))
            }
            PolyopCmd::Verify(v) => verify::<S>(o, "polyop", v),
        },
        Cmd::Ktransform { cmd } => match cmd {
            KCmd::Forward { input } => emit(&ktransform(&read::<GradedFn<S>>(input, GradedFn::from_json)?)?.to_json()),
            KCmd::Inverse { input } => emit(&kinverse(&read::<GradedFn<S>>(input, GradedFn::from_json)?)?.to_json()),
            KCmd::Star { input, input2 } => {
                let f: GradedFn<S> = read(input, GradedFn::from_json)?;
                let g: GradedFn<S> = read(input2, GradedFn::from_json)?;
                emit(&star(&f, &g)?.to_json())
            }
            KCmd::Verify(v) => verify::<S>(o, "ktransform", v),
        },
        Cmd::Poisson { cmd } => match cmd {
            PoissonCmd::Expect { omega, poly, route } => {
                let value = match route {
                    PoissonRoute::Stirling => poisson_expect(
                        &read(omega, PointMeasure::<S>::from_json)?,
                        &read(poly, GradedFn::from_json)?,
                    )?
                    .to_json(),
                    PoissonRoute::Finite => poisson_expect_finite(
                        &read(omega, PointMeasure::<S>::from_json)?,
                        &read(poly, GradedFn::from_json)?,
                    )?
                    .to_json(),
                    PoissonRoute::Series => {
                        if o.field == Field::Qi {
                            bail!("the series route needs real inputs");
                        }
                        let omega: PointMeasure<Q> = read(omega, PointMeasure::from_json)?;
                        let p: GradedFn<Q> = read(poly, GradedFn::from_json)?;
                        json!(poisson_expect_series(&omega, &p, o.k_max)?)
                    }
                };
                emit(&json!({ "route": format!("{route:?}").to_lowercase(), "value": value }))
            }
            PoissonCmd::Verify(v) => verify::<S>(o, "poisson", v),
        },
        Cmd::Touchard { cmd } => match cmd {
            TouchardCmd::Measure { omega, n, ruc } => {
                let omega: PointMeasure<S> = read(omega, PointMeasure::from_json)?;
                let mu = if *ruc {
                    ruc_measure(&omega, *n)?
                } else {
                    touchard_measure(&omega, *n)?
                };
                emit(&mu.to_json())
            }
            TouchardCmd::Verify(v) => verify::<S>(o, "touchard", v),
        },
        Cmd::Wick { cmd } => match cmd {
            WickCmd::Katriel { n } => {
                if *n == 0 || o.m == 0 {
                    bail!("katriel needs n >= 1 and m >= 1");
                }
                let mut rng = RatGen::new(o.seed, o.bound);
                let sigma = rng.nonzero_measure::<S>(o.m);
                let xis: Vec<PointFn<S>> = (0..*n).map(|_| rng.point_fn(o.m)).collect();
                let refm = RefMeasure::new(sigma.clone())?;
                let report = check_katriel(&refm, &xis)?;
                let out = json!({
                    "sigma": sigma.to_json(),
                    "xi": xis.iter().map(PointFn::to_json).collect::<Vec<_>>(),
                    "expansion": katriel_rhs(&refm, &xis)?.to_json(),
                    "report": report.to_json(),
                });
                emit_verdict(&out, report.passed())
            }
            WickCmd::NormalOrder { input, sigma } => {
                let word = read(input, |v: &Value| {
                    v.as_array()
                        .ok_or_else(|| spatial_stirling::Error::Json("a word is an array of factors".into()))?
                        .iter()
                        .map(WordOp::<S>::from_json)
                        .collect::<spatial_stirling::Result<Vec<_>>>()
                })?;
                let sigma = match sigma {
                    Some(path) => read(path, PointMeasure::<S>::from_json)?,
                    None => PointMeasure::constant(o.m, S::one()),
                };
                emit(&normal_order(&RefMeasure::new(sigma)?, &word)?.to_json())
            }
            WickCmd::Verify(v) => verify::<S>(o, "wick", v),
        },
        Cmd::VerifyAll => run_and_report::<S>(o, SUITES),
    }
}

fn config(o: &Opts) -> SuiteConfig {
    SuiteConfig {
        m: o.m,
        nmax: o.nmax,
        seed: o.seed,
        bound: o.bound,
        k_max: o.k_max,
        tol: o.tol,
    }
}

fn verify<S: Scalar>(o: &Opts, module: &str, v: &VerifyArgs) -> Result<Outcome> {
    let names = match &v.suite {
        Some(s) => {
            let full = format!("{module}.{s}");
            match SUITES.iter().find(|n| **n == full) {
                Some(name) => vec![*name],
                None => bail!("unknown suite {s:?}; available: {}", short_names(module).join(", ")),
            }
        }
        None => suites_of(module),
    };
    run_and_report::<S>(o, &names)
}

fn short_names(module: &str) -> Vec<String> {
    suites_of(module)
        .iter()
        .map(|s| s.trim_start_matches(module).trim_start_matches('.').to_string())
        .collect()
}

fn run_and_report<S: Scalar>(o: &Opts, names: &[&str]) -> Result<Outcome> {
    let reports = run_suites::<S>(names, &config(o))?;
    let passed = reports.iter().all(Report::passed);
    let out = json!({
        "passed": passed,
        "suites": reports.iter().map(Report::to_json).collect::<Vec<_>>(),
    });
    emit_verdict(&out, passed)
}

fn read<T>(path: &Path, parse: impl FnOnce(&Value) -> spatial_stirling::Result<T>) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    parse(&v).with_context(|| format!("in {}", path.display()))
}

fn emit(v: &Value) -> Result<Outcome> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(Outcome::Pass)
}

fn emit_verdict(v: &Value, passed: bool) -> Result<Outcome> {
    emit(v)?;
    Ok(if passed { Outcome::Pass } else { Outcome::Fail })
}
