//! CLI for the wsigma laboratory.
//!
//! Exit codes: 0 success, 1 normative audit failure, 2 usage error,
//! 3 I/O error.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wsigma::audit::{normative_failures, run_full_audit};
use wsigma::classical::invariants;
use wsigma::hermite::h_r;
use wsigma::quad::{build_rule, sigma_at_nodes, w_r_integral_cached};
use wsigma::taylor::{build_coeff_table, w_r_polynomial};
use wsigma::{Complex64, Lattice, TruncationPolicy};

use report::{
    render_audit, render_coeffs, render_invariants, render_table, CoeffRow, OutputFormat,
    RunConfig, TableRow,
};

#[derive(Parser)]
#[command(
    name = "wsigma",
    version,
    about = "Taylor coefficients of the Weierstrass sigma-function by three routes, plus a lattice-sum identity audit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cell area, nu, mu, quasi-periods, g2/g3 and Eisenstein series of one lattice
    Invariants(CommonArgs),
    /// The coefficients W_r by recursion, lattice series, and Gaussian integral
    Coeffs(CommonArgs),
    /// Audit the identity catalogue over the fixed lattice panel
    Audit(AuditArgs),
    /// Dump the exact recursion table a_{m,n} for 2m+3n <= rmax
    Table(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Lattice basis as four reals: re(w1) im(w1) re(w2) im(w2)
    #[arg(
        long,
        num_args = 4,
        value_names = ["RE1", "IM1", "RE2", "IM2"],
        conflicts_with = "preset",
        required_unless_present_any = ["preset", "config"],
        allow_negative_numbers = true
    )]
    lattice: Option<Vec<f64>>,
    /// Named lattice instead of an explicit basis
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// JSON file holding {"lattice": [re1, im1, re2, im2]}
    #[arg(long, conflicts_with_all = ["lattice", "preset"])]
    config: Option<PathBuf>,
    #[command(flatten)]
    knobs: Knobs,
}

#[derive(Args)]
struct AuditArgs {
    /// Recorded in the report config; the audit always runs its fixed panel
    #[arg(
        long,
        num_args = 4,
        value_names = ["RE1", "IM1", "RE2", "IM2"],
        conflicts_with = "preset",
        allow_negative_numbers = true
    )]
    lattice: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    #[command(flatten)]
    knobs: Knobs,
}

#[derive(Args)]
struct Knobs {
    /// Sup-norm shell bound for Gaussian lattice sums
    #[arg(long, default_value_t = 12)]
    max_shell: u32,
    /// Requested absolute tail bound
    #[arg(long = "tol", default_value_t = 1e-10)]
    target_tol: f64,
    /// Gauss-Hermite nodes per axis
    #[arg(long, default_value_t = 32)]
    quad_order: u32,
    /// Largest Taylor index r
    #[arg(long = "rmax", default_value_t = 6)]
    r_max: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Square,
    Hexagonal,
    Generic,
}

impl Preset {
    fn basis(self) -> [f64; 4] {
        match self {
            Preset::Square => [1.0, 0.0, 0.0, 1.0],
            Preset::Hexagonal => [1.0, 0.0, 0.5, 3.0f64.sqrt() / 2.0],
            Preset::Generic => [1.0, 0.0, 0.3, 1.2],
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
            Format::Text => OutputFormat::Text,
        }
    }
}

const EXIT_NORMATIVE_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse(); // clap exits with 2 on usage errors
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Invariants(args) => {
            let (lat, config) = resolve_lattice(&args)?;
            let policy = policy_of(&config);
            let inv = invariants(&lat, &policy).map_err(|e| usage(e.to_string()))?;
            write_out(
                &args.knobs.out,
                &render_invariants(&config, &lat, &inv, args.knobs.format.into()),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Coeffs(args) => {
            let (lat, config) = resolve_lattice(&args)?;
            let policy = policy_of(&config);
            let inv = invariants(&lat, &policy).map_err(|e| usage(e.to_string()))?;
            let table = build_coeff_table(config.r_max);
            let rule = build_rule(lat.nu(), config.quad_order);
            let cache = sigma_at_nodes(&lat, &inv, &rule, &policy);
            let h0 = h_r(&lat, &inv, 0, &policy).value;
            let rows: Vec<CoeffRow> = (0..=config.r_max)
                .map(|r| {
                    let recursion = w_r_polynomial(&table, r)
                        .expect("table sized to r_max")
                        .eval(inv.g2, inv.g3);
                    let series = h_r(&lat, &inv, r, &policy).value / h0;
                    let integral = Some(w_r_integral_cached(&inv, &rule, &cache, r));
                    let dev = |a: Complex64, b: Complex64| {
                        (a - b).norm() / a.norm().max(b.norm()).max(1.0)
                    };
                    CoeffRow {
                        r,
                        recursion,
                        series,
                        integral,
                        dev_recursion_series: dev(recursion, series),
                        dev_recursion_integral: integral.map(|i| dev(recursion, i)),
                        dev_series_integral: integral.map(|i| dev(series, i)),
                    }
                })
                .collect();
            write_out(
                &args.knobs.out,
                &render_coeffs(&config, &rows, args.knobs.format.into()),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Audit(args) => {
            let config = RunConfig {
                lattice: args
                    .lattice
                    .as_deref()
                    .map(|v| [v[0], v[1], v[2], v[3]])
                    .or_else(|| args.preset.map(Preset::basis)),
                max_shell: args.knobs.max_shell,
                target_tol: args.knobs.target_tol,
                quad_order: args.knobs.quad_order,
                r_max: args.knobs.r_max,
            };
            validate(&config)?;
            let policy = policy_of(&config);
            let reports = run_full_audit(&policy, config.quad_order, config.r_max)
                .map_err(|e| usage(e.to_string()))?;
            write_out(
                &args.knobs.out,
                &render_audit(&config, &reports, args.knobs.format.into()),
            )?;
            if normative_failures(&reports) > 0 {
                Ok(ExitCode::from(EXIT_NORMATIVE_FAILURE))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Table(args) => {
            let (_, config) = resolve_lattice(&args)?;
            let table = build_coeff_table(config.r_max);
            let rows: Vec<TableRow> = table
                .rows()
                .into_iter()
                .map(|(m, n, v)| TableRow {
                    m,
                    n,
                    numerator: v.numer().to_string(),
                    denominator: v.denom().to_string(),
                })
                .collect();
            write_out(
                &args.knobs.out,
                &render_table(&config, &rows, args.knobs.format.into()),
            )?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[derive(serde::Deserialize)]
struct LatticeFile {
    lattice: [f64; 4],
}

fn resolve_lattice(args: &CommonArgs) -> Result<(Lattice, RunConfig), Failure> {
    let basis = match (&args.lattice, args.preset, &args.config) {
        (Some(v), _, _) => [v[0], v[1], v[2], v[3]],
        (None, Some(p), _) => p.basis(),
        (None, None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure {
                code: EXIT_IO,
                message: format!("cannot read {}: {e}", path.display()),
            })?;
            let file: LatticeFile = serde_json::from_str(&text)
                .map_err(|e| usage(format!("bad config {}: {e}", path.display())))?;
            file.lattice
        }
        (None, None, None) => {
            return Err(usage("one of --lattice, --preset, --config is required"))
        }
    };
    let lat = Lattice::new(
        Complex64::new(basis[0], basis[1]),
        Complex64::new(basis[2], basis[3]),
    )
    .map_err(|e| usage(e.to_string()))?;
    let config = RunConfig {
        lattice: Some(basis),
        max_shell: args.knobs.max_shell,
        target_tol: args.knobs.target_tol,
        quad_order: args.knobs.quad_order,
        r_max: args.knobs.r_max,
    };
    validate(&config)?;
    Ok((lat, config))
}

fn validate(config: &RunConfig) -> Result<(), Failure> {
    if config.max_shell < 1 {
        return Err(usage("--max-shell must be at least 1"));
    }
    if config.quad_order < 2 {
        return Err(usage("--quad-order must be at least 2"));
    }
    let tol_ok = config.target_tol > 0.0; // false for NaN too
    if !tol_ok {
        return Err(usage("--tol must be positive"));
    }
    Ok(())
}

fn policy_of(config: &RunConfig) -> TruncationPolicy {
    TruncationPolicy::new(config.max_shell, config.target_tol)
}

fn write_out(path: &Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match path {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(p) => std::fs::write(p, content).map_err(|e| Failure {
            code: EXIT_IO,
            message: format!("cannot write {}: {e}", p.display()),
        }),
    }
}
