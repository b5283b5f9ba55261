//! `arbigeom` command-line interface.
//!
//! Exit codes: 0 on success, 1 on domain errors (bad files, dimension
//! mismatches, invalid markets), 2 on usage errors. Certificates are
//! re-verified before anything is printed.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use arbigeom::arbitrage::{detect, verify_verdict, PayoffMatrix};
use arbigeom::arrangement::{is_generic, orthant_census_with_cap, q, Genericity, SignVector, DEFAULT_CENSUS_CAP};
use arbigeom::cones::{decompose, is_pointed, member, split_point, Cone};
use arbigeom::json;
use arbigeom::lpcore::{farkas, verify_outcome, FarkasOutcome};
use arbigeom::montecarlo::{estimate_arbitrage_probability, SimConfig};
use arbigeom::pricing::{
    build_payoff_matrix_with, call_security, price_call, risk_neutral_probs, BernoulliMarket, SecurityPayoff,
};
use arbigeom::ratmath::{dot, format_rational, format_vector, parse_matrix, parse_rational, parse_vector, Rational};
use arbigeom::Error;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

pub const THREADS_ENV: &str = "ARBIGEOM_THREADS";

#[derive(Debug, Parser)]
#[command(name = "arbigeom", version, about = "Exact arbitrage certificates and orthant geometry for payoff matrices")]
pub struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Payoff/generator matrix as CSV (row = scenario, column = investment).
    #[arg(long, global = true, value_name = "FILE")]
    matrix: Option<PathBuf>,

    /// Seed for randomized subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide arbitrage for --matrix and print the certificate.
    Detect,
    /// Farkas alternative for A = --matrix and b = --target.
    Farkas {
        #[arg(long, value_name = "FILE")]
        target: PathBuf,
    },
    /// Lineality space and pointed slice of the cone spanned by the matrix columns.
    Cone {
        /// Optional point to test for membership and split.
        #[arg(long, value_name = "FILE")]
        point: Option<PathBuf>,
    },
    /// Orthants met by the column space of --matrix.
    Orthants {
        /// List every orthant that is met.
        #[arg(long)]
        list: bool,
        /// Override the scenario cap for the census.
        #[arg(long, default_value_t = DEFAULT_CENSUS_CAP)]
        max_m: usize,
    },
    /// Table of Q(m,n).
    Qtable {
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..=4096))]
        max_m: u32,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..=4096))]
        max_n: u32,
    },
    /// Monte Carlo estimate of the arbitrage probability for Gaussian payoffs.
    Simulate(SimulateArgs),
    /// One-period binomial market: risk-neutral probabilities and call price.
    Price(PriceArgs),
    /// Check that every n×n row-submatrix of --matrix is nonsingular.
    GenericCheck,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(short = 'm', value_parser = clap::value_parser!(u32).range(1..=1024))]
    m: u32,
    #[arg(short = 'n', value_parser = clap::value_parser!(u32).range(1..=1024))]
    n: u32,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Target orthant as a string of + and - (default all +).
    #[arg(long)]
    orthant: Option<String>,
}

#[derive(Debug, Args)]
struct PriceArgs {
    #[arg(long, value_parser = rational_arg)]
    spot: Rational,
    #[arg(long, value_parser = rational_arg)]
    up: Rational,
    #[arg(long, value_parser = rational_arg)]
    down: Rational,
    #[arg(long, value_parser = rational_arg)]
    rate: Rational,
    #[arg(long, value_parser = rational_arg)]
    strike: Rational,
    /// Extra security as PRICE,PAYOFF_UP,PAYOFF_DOWN (repeatable).
    #[arg(long, value_parser = security_arg)]
    security: Vec<(Rational, Rational, Rational)>,
    /// Append the all-zero risk-free column to the payoff matrix.
    #[arg(long)]
    risk_free: bool,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s)
}

fn security_arg(s: &str) -> Result<(Rational, Rational, Rational), String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [p, up, down] = parts[..] else {
        return Err(format!("expected PRICE,PAYOFF_UP,PAYOFF_DOWN, got `{s}`"));
    };
    Ok((parse_rational(p)?, parse_rational(up)?, parse_rational(down)?))
}

#[derive(Debug)]
enum CliError {
    Domain(String),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

type CliResult = Result<String, CliError>;

/// Parses `args` (including the program name), runs the command, and
/// returns the process exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    configure_threads();
    match execute(&cli) {
        Ok(text) => {
            let _ = writeln!(out, "{}", text.trim_end());
            0
        }
        Err(CliError::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn configure_threads() {
    let threads = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()).unwrap_or(0);
    // Fails only if a pool already exists, e.g. on repeated in-process runs.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Domain(format!("cannot read {}: {e}", path.display())))
}

fn load_matrix(cli: &Cli) -> Result<PayoffMatrix, CliError> {
    let path = cli.matrix.as_deref().ok_or_else(|| CliError::Usage("this command needs --matrix FILE".into()))?;
    let a = parse_matrix(&read_file(path)?).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))?;
    Ok(PayoffMatrix::new(a)?)
}

fn load_vector(path: &Path) -> Result<Vec<Rational>, CliError> {
    parse_vector(&read_file(path)?).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON value serializes")
}

fn execute(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Detect => cmd_detect(cli),
        Command::Farkas { target } => cmd_farkas(cli, target),
        Command::Cone { point } => cmd_cone(cli, point.as_deref()),
        Command::Orthants { list, max_m } => cmd_orthants(cli, *list, *max_m),
        Command::Qtable { max_m, max_n } => Ok(cmd_qtable(cli.json, *max_m as usize, *max_n as usize)),
        Command::Simulate(args) => cmd_simulate(cli, args),
        Command::Price(args) => cmd_price(cli, args),
        Command::GenericCheck => cmd_generic(cli),
    }
}

fn cmd_detect(cli: &Cli) -> CliResult {
    let a = load_matrix(cli)?;
    let verdict = detect(&a);
    assert!(verify_verdict(&a, &verdict), "internal error: verdict certificate failed verification");
    if cli.json {
        let mut v = json::verdict(&a, &verdict);
        v["m"] = json!(a.m());
        v["n"] = json!(a.n());
        return Ok(pretty(&v));
    }
    Ok(verdict.to_string())
}

fn cmd_farkas(cli: &Cli, target: &Path) -> CliResult {
    let a = load_matrix(cli)?.into_matrix();
    let b = load_vector(target)?;
    let outcome = farkas(&a, &b)?;
    assert!(verify_outcome(&a, &b, &outcome), "internal error: Farkas certificate failed verification");
    if cli.json {
        return Ok(pretty(&json::farkas_outcome(&outcome)));
    }
    Ok(match &outcome {
        FarkasOutcome::Combination { x } => format!("COMBINATION x={}", format_vector(x)),
        FarkasOutcome::Separator { y } => {
            let ya = a.vec_mul(y).expect("y has m entries");
            format!(
                "SEPARATOR y={} yTA={} yTb={}",
                format_vector(y),
                format_vector(&ya),
                format_rational(&dot(y, &b))
            )
        }
    })
}

fn cmd_cone(cli: &Cli, point: Option<&Path>) -> CliResult {
    let cone = Cone::from_matrix(load_matrix(cli)?.matrix())?;
    let d = decompose(&cone);
    assert!(d.verify(&cone), "internal error: cone decomposition failed verification");
    let pointed = d.lineality_basis.is_empty();
    debug_assert_eq!(pointed, is_pointed(&cone));

    let split = match point {
        None => None,
        Some(path) => {
            let x = load_vector(path)?;
            match member(&cone, &x)? {
                None => Some((x, None)),
                Some(weights) => {
                    let (u, v) = split_point(&d, &x)?;
                    Some((x, Some((weights, u, v))))
                }
            }
        }
    };

    if cli.json {
        let mut out = json!({
            "pointed": pointed,
            "lineality_basis": json::vectors(&d.lineality_basis),
            "slice_generators": json::vectors(&d.slice_generators),
        });
        if let Some((x, found)) = &split {
            out["point"] = match found {
                None => json!({ "x": json::vector(x), "member": false }),
                Some((w, u, v)) => json!({
                    "x": json::vector(x),
                    "member": true,
                    "weights": json::vector(w),
                    "u": json::vector(u),
                    "v": json::vector(v),
                }),
            };
        }
        return Ok(pretty(&out));
    }

    let mut s = String::new();
    writeln!(s, "pointed: {pointed}").unwrap();
    writeln!(s, "lineality basis ({}):", d.lineality_basis.len()).unwrap();
    for b in &d.lineality_basis {
        writeln!(s, "  {}", format_vector(b)).unwrap();
    }
    writeln!(s, "slice generators:").unwrap();
    for g in &d.slice_generators {
        writeln!(s, "  {}", format_vector(g)).unwrap();
    }
    if let Some((x, found)) = &split {
        match found {
            None => writeln!(s, "point {} is NOT in the cone", format_vector(x)).unwrap(),
            Some((w, u, v)) => {
                writeln!(s, "point {} = generators · {}", format_vector(x), format_vector(w)).unwrap();
                writeln!(s, "  pointed part u = {}", format_vector(u)).unwrap();
                writeln!(s, "  lineality part v = {}", format_vector(v)).unwrap();
            }
        }
    }
    Ok(s)
}

fn cmd_orthants(cli: &Cli, list: bool, max_m: usize) -> CliResult {
    let a = load_matrix(cli)?;
    let census = orthant_census_with_cap(&a, max_m)?;
    let generic = a.n() <= a.m() && is_generic(&a)?.is_generic();
    let expected = q(a.m(), a.n());
    if cli.json {
        let mut out = json!({
            "m": a.m(),
            "n": a.n(),
            "count": census.count,
            "total": json::integer(&(1u128 << a.m())),
            "generic": generic,
            "q": json::integer(&expected),
        });
        if list {
            out["hits"] = Value::Array(census.hit_vectors().iter().map(|d| json!(d.to_string())).collect());
        }
        return Ok(pretty(&out));
    }
    let mut s = format!("{} of {} orthants met (Q({},{}) = {expected}", census.count, 1u128 << a.m(), a.m(), a.n());
    s.push_str(if generic { ", matrix is generic)" } else { ", matrix is not generic)" });
    if list {
        for d in census.hit_vectors() {
            write!(s, "\n{d}").unwrap();
        }
    }
    Ok(s)
}

/// Aligned grid or JSON of `Q(m,n)` for `1 ≤ m ≤ max_m`, `1 ≤ n ≤ max_n`.
pub fn cmd_qtable(as_json: bool, max_m: usize, max_n: usize) -> String {
    let rows: Vec<Vec<String>> =
        (1..=max_m).map(|m| (1..=max_n).map(|n| q(m, n).to_string()).collect()).collect();
    if as_json {
        let rows: Vec<Value> = rows
            .iter()
            .map(|r| Value::Array(r.iter().map(|x| Value::Number(json::integer(x))).collect()))
            .collect();
        return pretty(&json!({ "max_m": max_m, "max_n": max_n, "rows": rows }));
    }
    let width = rows.iter().flatten().map(String::len).chain([max_n.to_string().len()]).max().unwrap_or(1);
    let label = max_m.to_string().len().max(3);
    let mut s = format!("{:>label$} |", "m\\n");
    for n in 1..=max_n {
        write!(s, " {n:>width$}").unwrap();
    }
    s.push('\n');
    s.push_str(&"-".repeat(label + 1));
    s.push('+');
    s.push_str(&"-".repeat((width + 1) * max_n));
    for (i, row) in rows.iter().enumerate() {
        write!(s, "\n{:>label$} |", i + 1).unwrap();
        for x in row {
            write!(s, " {x:>width$}").unwrap();
        }
    }
    s
}

fn cmd_simulate(cli: &Cli, args: &SimulateArgs) -> CliResult {
    let (m, n) = (args.m as usize, args.n as usize);
    let mut cfg = SimConfig::new(m, n, args.trials, cli.seed);
    if let Some(text) = &args.orthant {
        cfg = cfg.with_target(parse_orthant(text)?);
    }
    let report = estimate_arbitrage_probability(&cfg)?;
    if cli.json {
        return Ok(report.to_json());
    }
    Ok(format!(
        "m={m} n={n} trials={} seed={}\nhits={} estimate={:.6} (95% CI [{:.6}, {:.6}], se {:.6})\ntheoretical Q(m,n)/2^m = {} = {:.6}",
        report.trials,
        report.seed,
        report.hits,
        report.estimate,
        report.ci95.0,
        report.ci95.1,
        report.std_error,
        format_rational(&report.theoretical),
        report.theoretical_f64()
    ))
}

fn parse_orthant(text: &str) -> Result<SignVector, CliError> {
    let signs: Vec<i64> = text
        .chars()
        .map(|c| match c {
            '+' => Ok(1),
            '-' => Ok(-1),
            other => Err(CliError::Usage(format!("orthant must be a string of + and -, found `{other}`"))),
        })
        .collect::<Result<_, _>>()?;
    Ok(SignVector::from_signs(&signs)?)
}

fn cmd_price(cli: &Cli, args: &PriceArgs) -> CliResult {
    let mkt = BernoulliMarket::new(
        args.spot.clone(),
        args.up.clone(),
        args.down.clone(),
        args.rate.clone(),
        args.strike.clone(),
    );
    let (pi_u, pi_d) = risk_neutral_probs(&mkt)?;
    let call_price = price_call(&mkt)?;
    let mut securities = vec![call_security(&mkt, call_price.clone())?];
    for (p, up, down) in &args.security {
        securities.push(SecurityPayoff::new(p.clone(), up.clone(), down.clone())?);
    }
    let a = build_payoff_matrix_with(&mkt, &securities, args.risk_free)?;
    let verdict = detect(&a);
    assert!(verify_verdict(&a, &verdict), "internal error: verdict certificate failed verification");
    if cli.json {
        return Ok(pretty(&json!({
            "pi_u": json::rational(&pi_u),
            "pi_d": json::rational(&pi_d),
            "call_price": json::rational(&call_price),
            "verdict": json::verdict(&a, &verdict),
        })));
    }
    Ok(format!(
        "pi_u = {}\npi_d = {}\ncall price = {}\n{verdict}",
        format_rational(&pi_u),
        format_rational(&pi_d),
        format_rational(&call_price)
    ))
}

fn cmd_generic(cli: &Cli) -> CliResult {
    let a = load_matrix(cli)?;
    let g = is_generic(&a)?;
    if cli.json {
        return Ok(pretty(&match &g {
            Genericity::Generic => json!({ "generic": true }),
            Genericity::Degenerate { deleted_rows } => json!({ "generic": false, "deleted_rows": deleted_rows }),
        }));
    }
    Ok(match g {
        Genericity::Generic => "GENERIC".to_string(),
        Genericity::Degenerate { deleted_rows } => {
            format!("NOT GENERIC: deleting rows {deleted_rows:?} leaves a singular submatrix")
        }
    })
}
