mod commands;
mod config;
mod error;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hermlift::hecke::HeckeOpId;
use hermlift::maass::Bounds;

use crate::commands::{CongruenceArgs, Produced, SynthArgs};
use crate::config::Config;
use crate::error::CliError;

/// Maass lifts to U(2,2), hermitian Hecke operators and congruences, in exact arithmetic.
///
/// Defaults for seeds, bounds and the depth cap may be set in a TOML file
/// named by the HERMLIFT_CONFIG environment variable.
#[derive(Debug, Parser)]
#[command(name = "hermlift", version)]
struct Cli {
    /// Print one JSON record per line instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct BoundArgs {
    /// Largest scaled determinant D*t1*t3 - N(w) in the table.
    #[arg(long)]
    bound_det: Option<i64>,
    /// Largest diagonal entry t1, t3 in the table.
    #[arg(long)]
    bound_diag: Option<i64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Class group, reduced forms, composition table and characters.
    Classgroup {
        /// Prime discriminant D (so the field is Q(sqrt(-D))).
        d: i64,
    },
    /// Lift a newform file to a coefficient table (identity component).
    Lift {
        newform: PathBuf,
        #[arg(long, default_value_t = 0)]
        chi: usize,
        #[command(flatten)]
        bounds: BoundArgs,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Apply a Hecke operator (`T0@p`, `T@p`, `Up@p`, `T1@p`, `T2@p`, `Delta@p`) to a table.
    Hecke {
        table: PathBuf,
        op: HeckeOpId,
        /// Evaluate only on points stored in the table, even for Maass input.
        #[arg(long)]
        strict: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Test a table for membership in the Maass space.
    CheckMaass { table: PathBuf },
    /// Descend a Maass table to q-expansions, one per ideal class.
    Descend {
        table: PathBuf,
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Local Euler factors of the lift's standard L-function.
    Euler {
        newform: PathBuf,
        /// Comma-separated rational primes (default: all below 50).
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        #[arg(long, default_value_t = 0)]
        chi: usize,
        /// Check the factorization into two shifted base-change factors.
        #[arg(long, alias = "verify-product134")]
        verify_factorization: bool,
    },
    /// Congruence depths of the first file against the others (all tables or all newforms).
    Congruence {
        #[arg(required = true, num_args = 2..)]
        files: Vec<PathBuf>,
        #[arg(long)]
        ell: Option<u64>,
        #[arg(long)]
        cap: Option<i64>,
        #[arg(long, default_value_t = 0)]
        chi: usize,
        /// Comma-separated operators for newform inputs.
        #[arg(long, value_delimiter = ',')]
        ops: Option<Vec<HeckeOpId>>,
        /// Fail unless some other input reaches this depth.
        #[arg(long)]
        min_depth: Option<i64>,
    },
    /// Write random newform-shaped data, or a perturbation of an existing file.
    Synth {
        #[arg(long, default_value_t = 23)]
        field: i64,
        /// Hermitian weight (the elliptic weight is one less).
        #[arg(long, default_value_t = 8)]
        k: u32,
        #[arg(long, default_value = "gaussian")]
        ring: String,
        #[arg(long, default_value_t = 1000)]
        p_max: u64,
        #[arg(long, default_value_t = 50)]
        coeff_bound: i64,
        #[arg(long)]
        seed: Option<u64>,
        /// Perturb this newform file instead of drawing a new one.
        #[arg(long, requires = "modulus")]
        like: Option<PathBuf>,
        /// Keep every a(p) fixed modulo this integer.
        #[arg(long, requires = "like")]
        modulus: Option<u64>,
        #[arg(long)]
        label: Option<String>,
        #[arg(short, long)]
        output: PathBuf,
    },
}

const DEFAULT_SEED: u64 = 1;
const DEFAULT_CAP: i64 = 32;
const DEFAULT_DIAG: i64 = 3;

fn bounds(args: &BoundArgs, cfg: &Config, d: i64) -> Result<Bounds, CliError> {
    let det = args.bound_det.or(cfg.bound_det).unwrap_or(4 * d);
    let diag = args.bound_diag.or(cfg.bound_diag).unwrap_or(DEFAULT_DIAG);
    if det <= 0 || diag <= 0 {
        return Err(CliError::Usage("bounds must be positive".into()));
    }
    Ok(Bounds::new(det, diag))
}

fn field_of(newform: &Path) -> Result<i64, CliError> {
    Ok(commands::load_newform(newform)?.d)
}

fn run(cli: &Cli) -> Result<(Produced, Option<PathBuf>), CliError> {
    let cfg = Config::from_env()?;
    Ok(match &cli.command {
        Command::Classgroup { d } => (commands::classgroup(*d)?, None),
        Command::Lift {
            newform,
            chi,
            bounds: b,
            output,
        } => {
            let b = bounds(b, &cfg, field_of(newform)?)?;
            (commands::lift(newform, *chi, b)?, Some(output.clone()))
        }
        Command::Hecke {
            table,
            op,
            strict,
            output,
        } => (commands::hecke(table, *op, *strict)?, Some(output.clone())),
        Command::CheckMaass { table } => (commands::check(table)?, None),
        Command::Descend { table, n_max } => (commands::descend(table, n_max.or(cfg.n_max))?, None),
        Command::Euler {
            newform,
            primes,
            chi,
            verify_factorization,
        } => (commands::euler(newform, primes.clone(), *chi, *verify_factorization)?, None),
        Command::Congruence {
            files,
            ell,
            cap,
            chi,
            ops,
            min_depth,
        } => {
            let ell = ell
                .or(cfg.ell)
                .ok_or_else(|| CliError::Usage("--ell is required (or `ell` in the config file)".into()))?;
            let args = CongruenceArgs {
                files,
                ell,
                cap: cap.or(cfg.cap).unwrap_or(DEFAULT_CAP),
                chi_index: *chi,
                ops: ops.clone(),
                min_depth: *min_depth,
            };
            (commands::congruence(&args)?, None)
        }
        Command::Synth {
            field,
            k,
            ring,
            p_max,
            coeff_bound,
            seed,
            like,
            modulus,
            label,
            output,
        } => {
            let args = SynthArgs {
                field: *field,
                k: *k,
                ring,
                p_max: *p_max,
                coeff_bound: *coeff_bound,
                seed: seed.or(cfg.seed).unwrap_or(DEFAULT_SEED),
                like: like.as_deref(),
                modulus: *modulus,
                label: label.as_deref(),
            };
            (commands::synth(&args)?, Some(output.clone()))
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((produced, path)) => {
            if let (Some(text), Some(path)) = (&produced.file, &path) {
                if let Err(e) = std::fs::write(path, text) {
                    let err = CliError::io(path, e);
                    eprintln!("error[{}]: {err}", err.kind());
                    return ExitCode::from(err.exit_code());
                }
            }
            for w in &produced.report.warnings {
                eprintln!("warning: {w}");
            }
            print!("{}", produced.report.render(cli.json));
            if produced.report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(err) => {
            eprintln!("error[{}]: {err}", err.kind());
            ExitCode::from(err.exit_code())
        }
    }
}
