//! `qdefinetti`: compute, verify and sweep finite q-de Finetti bounds.
//!
//! Exit codes: 0 success, 1 a mathematical check failed, 2 usage or input
//! error.

mod output;

use std::fs;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qdefinetti::json::{measure_from_json, measure_to_json, MixingRecord};
use qdefinetti::scalar::{format_f64, format_rational};
use qdefinetti::verify::{run_all, VerifyOptions};
use qdefinetti::{
    approx_error, compute_sweep, decompose, distance_report, extreme_measure, fit_log_slope,
    q_bernoulli, q_binomial, random_q_exch, upper_constant, DeltaQPoint, N1Rule, QParam,
    RateSweepConfig, Rational, Scalar,
};
use serde_json::json;

/// Environment variable holding the number of worker threads for sweeps.
const THREADS_ENV: &str = "QDEFINETTI_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "qdefinetti",
    version,
    about = "Finite q-exchangeable measures and q^n de Finetti bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the Gaussian binomial [n, k] at q.
    Qbinom {
        n: usize,
        k: usize,
        #[arg(long, value_parser = parse_q)]
        q: Rational,
    },
    /// Distance between (e_{n,n1})_k and (nu_{q^n1})_k with both bounds.
    Distance {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = parse_q)]
        q: Rational,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Certify the bounds over a range of n (CSV by default).
    Sweep(SweepArgs),
    /// Fit the slope of ln D against n over a sweep.
    Fit {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Allowed deviation of the slope from ln q.
        #[arg(long, default_value_t = 0.05)]
        tolerance: f64,
    },
    /// Write a measure as JSON.
    Measure {
        #[command(subcommand)]
        kind: MeasureKind,
        #[arg(long, global = true)]
        output: Option<PathBuf>,
    },
    /// Decompose a JSON measure into extreme measures and report the
    /// approximation error on k coordinates.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Run every invariant suite up to max-n for each q.
    VerifyAll {
        #[arg(long)]
        max_n: usize,
        #[arg(long, value_delimiter = ',', value_parser = parse_q, default_value = "1/2,1/3,2/3")]
        q: Vec<Rational>,
        /// Corrupt the q-binomial reference values to check that failures are reported.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Debug, clap::Args)]
struct SweepArgs {
    #[arg(long, value_parser = parse_q)]
    q: Rational,
    #[arg(long)]
    k: usize,
    /// Inclusive range `a..b`, or a single value.
    #[arg(long, value_parser = parse_range)]
    n: RangeInclusive<usize>,
    /// `half`, `equal`, `fixed:<v>` or `list:<v>,<v>,...`.
    #[arg(long, value_parser = parse_n1_rule)]
    n1: N1Rule,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum MeasureKind {
    /// Extreme measure e_{n,k}.
    Extreme {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = parse_q)]
        q: Rational,
    },
    /// q-Bernoulli measure with x = q^exponent.
    Bernoulli {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        exponent: usize,
        #[arg(long, value_parser = parse_q)]
        q: Rational,
    },
    /// Seeded random q-exchangeable measure.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_q)]
        q: Rational,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_q(s: &str) -> Result<Rational, String> {
    QParam::<Rational>::parse(s)
        .map(|q| q.value().clone())
        .map_err(|e| e.to_string())
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = || format!("`{s}` is not a range a..b");
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            Ok(a.trim().parse().map_err(|_| bad())?..=b.trim().parse().map_err(|_| bad())?)
        }
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            Ok(v..=v)
        }
    }
}

fn parse_n1_rule(s: &str) -> Result<N1Rule, String> {
    s.parse().map_err(|e: qdefinetti::Error| e.to_string())
}

#[derive(Debug)]
enum CliError {
    /// Bad arguments or input files.
    Usage(String),
    /// A mathematical check failed.
    Check(String),
}

impl From<qdefinetti::Error> for CliError {
    fn from(e: qdefinetti::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult = Result<(), CliError>;

fn emit(text: &str, path: Option<&PathBuf>) -> CliResult {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn qparam<S: Scalar>(q: &Rational) -> Result<QParam<S>, CliError> {
    Ok(QParam::from_rational(q)?)
}

fn cmd_qbinom(n: usize, k: usize, q: &Rational) -> CliResult {
    if k > n {
        return Err(CliError::Usage(format!(
            "need k <= n, got n = {n}, k = {k}"
        )));
    }
    let value = q_binomial(n, k, &qparam::<Rational>(q)?)?;
    println!("{}", format_rational(&value));
    Ok(())
}

fn cmd_distance(n: usize, n1: usize, k: usize, q: &Rational, format: Format) -> CliResult {
    let report = distance_report(n, n1, k, &qparam::<Rational>(q)?)?;
    let label = format_rational(q);
    let text = match format {
        Format::Table => output::render_report(&report, &label),
        Format::Json => {
            serde_json::to_string_pretty(&output::report_json(&report, &label)).unwrap() + "\n"
        }
        Format::Csv => output::render_csv(std::slice::from_ref(&report), &label).0,
    };
    print!("{text}");
    if report.passes() {
        Ok(())
    } else {
        Err(CliError::Check(format!(
            "bounds violated at n = {n}, n1 = {n1}, k = {k}"
        )))
    }
}

fn sweep_config<S: Scalar>(args: &SweepArgs) -> Result<RateSweepConfig<S>, CliError> {
    let cfg = RateSweepConfig {
        q: qparam::<S>(&args.q)?,
        k: args.k,
        n_range: args.n.clone(),
        n1_rule: args.n1.clone(),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn run_sweep<S: Scalar>(args: &SweepArgs) -> CliResult {
    let cfg = sweep_config::<S>(args)?;
    let reports = compute_sweep(&cfg)?;
    let label = format_rational(&args.q);
    let all_pass = reports.iter().all(|r| r.passes());
    let text = match args.format {
        Format::Csv => output::render_csv(&reports, &label).0,
        Format::Json => output::render_json(&reports, &label),
        Format::Table => output::render_table(&reports),
    };
    emit(&text, args.output.as_ref())?;
    if all_pass {
        Ok(())
    } else {
        let bad = reports.iter().filter(|r| !r.passes()).count();
        Err(CliError::Check(format!(
            "{bad} report(s) violate their bounds"
        )))
    }
}

fn cmd_sweep(args: &SweepArgs) -> CliResult {
    match args.mode {
        ModeArg::Exact => run_sweep::<Rational>(args),
        ModeArg::Float => run_sweep::<f64>(args),
    }
}

fn run_fit<S: Scalar>(args: &SweepArgs, tolerance: f64) -> CliResult {
    let cfg = sweep_config::<S>(args)?;
    let reports = compute_sweep(&cfg)?;
    if let Some(bad) = reports.iter().find(|r| !r.passes()) {
        return Err(CliError::Check(format!(
            "bounds violated at n = {}, n1 = {}",
            bad.n, bad.n1
        )));
    }
    let slope = fit_log_slope(&reports)?;
    let target = args.q.to_f64().ln();
    let ok = (slope - target).abs() <= tolerance;
    let text = match args.format {
        Format::Json => {
            let v = json!({
                "q": format_rational(&args.q),
                "k": args.k,
                "n_range": [args.n.start(), args.n.end()],
                "n1": args.n1.to_string(),
                "slope": slope,
                "ln_q": target,
                "tolerance": tolerance,
                "pass": ok,
            });
            serde_json::to_string_pretty(&v).unwrap() + "\n"
        }
        _ => format!(
            "slope = {}\nln q  = {}\n|slope - ln q| = {:.3e} (tolerance {tolerance})\n{}\n",
            format_f64(slope),
            format_f64(target),
            (slope - target).abs(),
            if ok { "PASS" } else { "FAIL" }
        ),
    };
    emit(&text, args.output.as_ref())?;
    if ok {
        Ok(())
    } else {
        Err(CliError::Check(format!(
            "slope {slope} is not within {tolerance} of ln q = {target}"
        )))
    }
}

fn cmd_fit(args: &SweepArgs, tolerance: f64) -> CliResult {
    match args.mode {
        ModeArg::Exact => run_fit::<Rational>(args, tolerance),
        ModeArg::Float => run_fit::<f64>(args, tolerance),
    }
}

fn cmd_measure(kind: &MeasureKind, output: Option<&PathBuf>) -> CliResult {
    let m = match kind {
        MeasureKind::Extreme { n, k, q } => extreme_measure(*n, *k, &qparam(q)?)?,
        MeasureKind::Bernoulli { n, exponent, q } => {
            q_bernoulli(*n, DeltaQPoint::new(*exponent), &qparam(q)?)
        }
        MeasureKind::Random { n, q, seed } => random_q_exch(*n, &qparam(q)?, *seed),
    };
    emit(&(measure_to_json(&m) + "\n"), output)
}

fn cmd_decompose(file: &PathBuf, k: usize, format: Format) -> CliResult {
    let text = fs::read_to_string(file)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", file.display())))?;
    let m = measure_from_json(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
    if k > m.n() {
        return Err(CliError::Usage(format!(
            "need k <= n = {}, got k = {k}",
            m.n()
        )));
    }
    let mu = decompose(&m);
    let err = approx_error(&m, k)?;
    let bound = upper_constant(k, m.q()) * m.q().pow(m.n() as i64);
    let ok = err <= bound;
    let out = match format {
        Format::Json => {
            let v = json!({
                "mixing": MixingRecord::from(&mu),
                "k": k,
                "approx_error": format_rational(&err),
                "upper": format_rational(&bound),
                "pass": ok,
            });
            serde_json::to_string_pretty(&v).unwrap() + "\n"
        }
        _ => {
            let mut s = format!("n = {}, q = {}\n", m.n(), format_rational(m.q().value()));
            for (i, a) in mu.alpha().iter().enumerate() {
                s += &format!("alpha[{i}] = {}\n", format_rational(a));
            }
            s += &format!("k = {k}\n");
            s += &format!(
                "||P_k - P_mu,k|| = {} (~{})\n",
                format_rational(&err),
                format_f64(err.to_f64())
            );
            s += &format!(
                "c_k q^n          = {} (~{})\n",
                format_rational(&bound),
                format_f64(bound.to_f64())
            );
            s += if ok { "PASS\n" } else { "FAIL\n" };
            s
        }
    };
    print!("{out}");
    if ok {
        Ok(())
    } else {
        Err(CliError::Check(format!(
            "approximation error exceeds c_k q^n for k = {k}"
        )))
    }
}

fn cmd_verify_all(max_n: usize, qs: &[Rational], inject_fault: bool) -> CliResult {
    const MAX_N: usize = 24;
    if max_n > MAX_N {
        return Err(CliError::Usage(format!("--max-n is limited to {MAX_N}")));
    }
    let opts = VerifyOptions {
        max_n,
        qs: qs
            .iter()
            .map(qparam::<Rational>)
            .collect::<Result<_, _>>()?,
        inject_fault,
    };
    let labels: Vec<String> = qs.iter().map(format_rational).collect();
    println!("verify-all: max n = {max_n}, q = {}", labels.join(", "));
    match run_all(&opts) {
        Ok(outcomes) => {
            for o in outcomes {
                println!("{:<22} {:>8} checks  PASS", o.name, o.checks);
            }
            println!("all suites passed");
            Ok(())
        }
        Err(ce) => Err(CliError::Check(format!("counterexample {ce}"))),
    }
}

fn configure_threads() -> CliResult {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> CliResult {
    configure_threads()?;
    match &cli.command {
        Command::Qbinom { n, k, q } => cmd_qbinom(*n, *k, q),
        Command::Distance {
            n,
            n1,
            k,
            q,
            format,
        } => cmd_distance(*n, *n1, *k, q, *format),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Fit { sweep, tolerance } => cmd_fit(sweep, *tolerance),
        Command::Measure { kind, output } => cmd_measure(kind, output.as_ref()),
        Command::Decompose { file, k, format } => cmd_decompose(file, *k, *format),
        Command::VerifyAll {
            max_n,
            q,
            inject_fault,
        } => cmd_verify_all(*max_n, q, *inject_fault),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qdefinetti::scalar::parse_rational;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..16").unwrap(), 2..=16);
        assert_eq!(parse_range("2..=16").unwrap(), 2..=16);
        assert_eq!(parse_range("5").unwrap(), 5..=5);
        assert!(parse_range("a..3").is_err());
        assert!(parse_range("5..4").unwrap().is_empty());
    }

    #[test]
    fn q_values() {
        assert_eq!(parse_q("2/4").unwrap(), parse_rational("1/2").unwrap());
        assert!(parse_q("0.5").is_err());
        assert!(parse_q("1").is_err());
        assert!(parse_q("5/3").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
