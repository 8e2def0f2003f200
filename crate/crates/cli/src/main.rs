//! `abctk`: batch front end for the height/radical toolkit.
//!
//! Every computation is a subcommand with machine-readable output (JSON by
//! default, CSV with `--format csv`). Exit codes are stable: 0 on success
//! (inequality holds), 1 when a checked inequality is violated, 2 on input
//! or guard errors. Numeric configuration comes from flags, with
//! `ABCTK_*` environment-variable fallbacks (flags take precedence).

use std::fmt::Write as _;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::Zero;

use abc_core::config::NumericConfig;
use abc_core::nevanlinna::{
    formal_abc_report, logder_lemma_margin, pj_residual, proximity, rho_scan,
};
use abc_core::ntabc::{abc_check, enumerate_scan, product_formula_residual};
use abc_core::parser::{parse_int_triple, parse_mero_triple, parse_rational};
use abc_core::report::{fmt_real, json_escape, SCHEMA_VERSION};
use abc_core::triple::FunctionModel;

/// Residual thresholds for exit-code purposes.
const PJ_EXIT_TOL: f64 = 1e-6;
const SLACK_EXIT_TOL: f64 = -1e-6;
const PRODUCT_FORMULA_EXIT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct ConfigArgs {
    /// Quadrature convergence tolerance
    #[arg(long, global = true, env = "ABCTK_QUAD_TOL", default_value_t = 1e-10)]
    quad_tol: f64,
    /// Root-update tolerance for the simultaneous iteration
    #[arg(long, global = true, env = "ABCTK_ROOT_TOL", default_value_t = 1e-12)]
    root_tol: f64,
    /// Relative tolerance for merging nearby sites
    #[arg(long, global = true, env = "ABCTK_CLUSTER_TOL", default_value_t = 1e-9)]
    cluster_tol: f64,
    /// Relative circle-guard distance (times rho)
    #[arg(long, global = true, env = "ABCTK_GUARD_FACTOR", default_value_t = 1e-6)]
    guard_factor: f64,
    /// Node budget for circle quadrature
    #[arg(long, global = true, env = "ABCTK_MAX_QUAD_NODES", default_value_t = 1 << 20)]
    max_quad_nodes: usize,
    /// Output format
    #[arg(long, global = true, env = "ABCTK_FORMAT", value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for scans
    #[arg(long, global = true, env = "ABCTK_WORKERS", default_value_t = default_workers())]
    workers: usize,
}

fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get().min(8))
        .unwrap_or(1)
}

impl ConfigArgs {
    fn numeric(&self) -> NumericConfig {
        NumericConfig {
            quad_tol: self.quad_tol,
            max_quad_nodes: self.max_quad_nodes,
            root_tol: self.root_tol,
            cluster_tol: self.cluster_tol,
            guard_factor: self.guard_factor,
            ..NumericConfig::default()
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "abctk",
    version,
    about = "Heights, radicals and abc inequality checks for meromorphic and integer triples"
)]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Poisson-Jensen residual of a rational function on |z| = rho
    Pj {
        /// Expression for f, e.g. "(z^2-1)/(z+2)"
        #[arg(long, allow_hyphen_values = true, conflicts_with = "file", required_unless_present = "file")]
        f: Option<String>,
        /// File with one expression per line (blank lines skipped)
        #[arg(long)]
        file: Option<std::path::PathBuf>,
        #[arg(long)]
        rho: f64,
    },
    /// Height, radicals and slack of a meromorphic triple at one radius
    AbcMero {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long)]
        rho: f64,
    },
    /// Radius scan of h, r_na, r_arch against 2 log h + C log log h
    Scan {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long)]
        rho_min: f64,
        #[arg(long)]
        rho_max: f64,
        #[arg(long)]
        steps: usize,
        /// Coefficient of the log log h term
        #[arg(long = "C", default_value_t = 10.0)]
        c_coeff: f64,
        /// Write the per-radius CSV table to this file
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Proximity function m(f, rho)
    Proximity {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long)]
        rho: f64,
    },
    /// Margin of the lemma on the logarithmic derivative
    LogderLemma {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long)]
        rho: f64,
    },
    /// abc test h <= r_na + 4 sqrt(h) for integer triples
    AbcInt {
        /// Comma-separated triple, e.g. "1,8,-9"
        #[arg(long, allow_hyphen_values = true, conflicts_with = "file", required_unless_present = "file")]
        triple: Option<String>,
        /// File with one comma-separated triple per line (blank lines skipped)
        #[arg(long)]
        file: Option<std::path::PathBuf>,
    },
    /// Exhaustive abc scan of primitive triples with c <= max-c
    AbcScan {
        #[arg(long)]
        max_c: u64,
        /// How many top-quality triples to report
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Artin-Whaples product-formula residual of a nonzero rational
    ProductFormula {
        /// Rational number, e.g. "5/9" or "-12"
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = cli.config.numeric();
    let outcome = cfg.validate().and_then(|()| run(&cli.command, &cli.config, &cfg));
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: &Command, args: &ConfigArgs, cfg: &NumericConfig) -> abc_core::Result<ExitCode> {
    match cmd {
        Command::Pj { f, file, rho } => {
            let inputs = gather_inputs(f.as_deref(), file.as_deref())?;
            if args.format == Format::Csv {
                println!("{}", abc_core::nevanlinna::PjReport::CSV_HEADER);
            }
            let mut all_hold = true;
            for text in &inputs {
                let func = FunctionModel::Rational(parse_rational(text)?);
                let report = pj_residual(&func, *rho, cfg)?;
                match args.format {
                    Format::Json => println!("{}", report.to_json(text)),
                    Format::Csv => println!("{}", report.to_csv_row()),
                }
                all_hold &= report.residual.abs() < PJ_EXIT_TOL;
            }
            Ok(exit_flag(all_hold))
        }
        Command::AbcMero { a, b, c, rho } => {
            let triple = parse_mero_triple(a, b, c)?;
            let report = formal_abc_report(&triple, *rho, cfg)?;
            let text = triple.to_string();
            match args.format {
                Format::Json => println!("{}", report.to_json(&text)),
                Format::Csv => {
                    println!("{}", abc_core::nevanlinna::AbcReport::CSV_HEADER);
                    println!("{}", report.to_csv_row());
                }
            }
            Ok(exit_flag(report.slack >= SLACK_EXIT_TOL))
        }
        Command::Scan {
            a,
            b,
            c,
            rho_min,
            rho_max,
            steps,
            c_coeff,
            out,
        } => {
            let triple = parse_mero_triple(a, b, c)?;
            let summary = rho_scan(&triple, *rho_min, *rho_max, *steps, *c_coeff, args.workers, cfg)?;
            let text = triple.to_string();
            if let Some(path) = out {
                std::fs::write(path, summary.to_csv()).map_err(|e| {
                    abc_core::Error::InvalidGrid(format!("cannot write {}: {e}", path.display()))
                })?;
                println!("{}", summary.to_json(&text));
            } else {
                match args.format {
                    Format::Json => println!("{}", summary.to_json(&text)),
                    Format::Csv => print!("{}", summary.to_csv()),
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Proximity { f, rho } => {
            let func = FunctionModel::Rational(parse_rational(f)?);
            let report = proximity(&func, *rho, cfg)?;
            println!(
                "{{\"schema_version\":{SCHEMA_VERSION},\"kind\":\"proximity\",\"f\":\"{}\",\
                 \"rho\":{},\"m\":{},\"quad_error\":{}}}",
                json_escape(f),
                fmt_real(*rho),
                fmt_real(report.value),
                fmt_real(report.quad_error),
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::LogderLemma { f, rho } => {
            let func = FunctionModel::Rational(parse_rational(f)?);
            let report = logder_lemma_margin(&func, *rho, cfg)?;
            println!("{}", report.to_json(f, *rho));
            Ok(ExitCode::SUCCESS)
        }
        Command::AbcInt { triple, file } => {
            let inputs = gather_inputs(triple.as_deref(), file.as_deref())?;
            if args.format == Format::Csv {
                println!("{}", abc_core::ntabc::NtReport::CSV_HEADER);
            }
            let mut all_hold = true;
            for text in &inputs {
                let t = parse_int_triple(text)?;
                let report = abc_check(&t, cfg)?;
                match args.format {
                    Format::Json => println!("{}", report.to_json(&t)),
                    Format::Csv => println!("{}", report.to_csv_row(&t)),
                }
                all_hold &= report.holds;
            }
            Ok(exit_flag(all_hold))
        }
        Command::AbcScan { max_c, top } => {
            let outcome = enumerate_scan(*max_c, *top, args.workers)?;
            match args.format {
                Format::Json => println!("{}", outcome.to_json(*max_c)),
                Format::Csv => print!("{}", outcome.to_csv()),
            }
            Ok(exit_flag(outcome.violations.is_empty()))
        }
        Command::ProductFormula { x } => {
            let value = BigRational::from_str(x)
                .map_err(|_| abc_core::Error::MalformedInteger(x.clone()))?;
            if value.is_zero() {
                return Err(abc_core::Error::ZeroEntry);
            }
            let residual = product_formula_residual(&value, cfg)?;
            let mut line = String::new();
            let _ = write!(
                line,
                "{{\"schema_version\":{SCHEMA_VERSION},\"kind\":\"product-formula\",\
                 \"x\":\"{}\",\"residual\":{}}}",
                json_escape(x),
                fmt_real(residual),
            );
            println!("{line}");
            Ok(exit_flag(residual.abs() < PRODUCT_FORMULA_EXIT_TOL))
        }
    }
}

fn exit_flag(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

/// One input from a flag, or one per nonblank line of a file.
fn gather_inputs(flag: Option<&str>, file: Option<&std::path::Path>) -> abc_core::Result<Vec<String>> {
    match (flag, file) {
        (Some(text), None) => Ok(vec![text.to_string()]),
        (None, Some(path)) => {
            let content = std::fs::read_to_string(path).map_err(|e| {
                abc_core::Error::MalformedInteger(format!("cannot read {}: {e}", path.display()))
            })?;
            Ok(content
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(String::from)
                .collect())
        }
        // clap enforces exactly one of the two
        _ => unreachable!("argument parsing guarantees one input source"),
    }
}
