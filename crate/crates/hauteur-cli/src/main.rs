//! `hauteur`: exact lower bounds for the Weil height on composita of ray
//! class fields, extension counts of p-adic fields, splitting densities and
//! a numerical height oracle.
//!
//! Exit codes: 0 success, 2 invalid input, 3 domain error (the requested
//! bound is not positive), 4 internal precision failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hauteur_cli::{report, reproduce, scenario, CliError};

use hauteur::density::{natural_density, DensityQuery, SplittingKind};
use hauteur::heightbound::evaluate_scenario_with_precision;
use hauteur::heightoracle::{self, AlgebraicNumber};
use hauteur::krasner::{self, LocalField};

#[derive(Parser)]
#[command(
    name = "hauteur",
    version,
    about = "Height lower bounds on composita of ray class fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count extensions of a p-adic field.
    Krasner {
        /// Residue characteristic (a prime).
        #[arg(short)]
        p: u64,
        /// Absolute degree of the base field over the p-adic rationals.
        #[arg(short = 'F', long = "field-degree", default_value_t = 1)]
        abs_degree: u64,
        /// Count extensions of this degree.
        #[arg(short)]
        d: Option<u64>,
        /// Count only the totally ramified extensions.
        #[arg(long)]
        totally_ramified: bool,
        /// Tabulate all (e, f) profiles with e * f up to this degree.
        #[arg(long, value_name = "DMAX", conflicts_with = "d")]
        profiles: Option<u64>,
    },
    /// Evaluate a scenario file into a bound report.
    Bound {
        /// Path to a .scenario file.
        file: PathBuf,
    },
    /// Recompute the bundled reference values and compare to the goldens.
    Reproduce {
        /// Run a single row (e.g. ex3_4).
        #[arg(long, value_name = "ROW")]
        only: Option<String>,
        /// Read golden files from this directory instead of the built-ins.
        #[arg(long, value_name = "DIR")]
        golden_dir: Option<PathBuf>,
    },
    /// Weil height of an algebraic number given by its minimal polynomial.
    Height {
        /// Polynomial in the variable x, e.g. "x^2 - x - 1".
        polynomial: String,
        /// Working precision in bits (overrides HAUTEUR_PRECISION_BITS).
        #[arg(long)]
        bits: Option<u32>,
    },
    /// Natural density of fields with prescribed splitting at a prime.
    Density {
        /// The prime (odd).
        #[arg(short)]
        p: u64,
        /// Field degree (2 to 5).
        #[arg(short)]
        n: u32,
        /// The prime stays inert.
        #[arg(long, conflicts_with = "totally_ramified")]
        inert: bool,
        /// The prime is totally ramified (degrees 2 and 3 only).
        #[arg(long)]
        totally_ramified: bool,
    },
}

/// Precision in bits: flag, then HAUTEUR_PRECISION_BITS, then the default.
fn precision_bits(flag: Option<u32>) -> Result<u32, CliError> {
    if let Some(bits) = flag {
        return validate_bits(bits);
    }
    match std::env::var("HAUTEUR_PRECISION_BITS") {
        Ok(raw) => {
            let bits: u32 = raw.parse().map_err(|_| {
                CliError::Input(format!(
                    "HAUTEUR_PRECISION_BITS must be an integer, got '{raw}'"
                ))
            })?;
            validate_bits(bits)
        }
        Err(_) => Ok(hauteur::heightbound::DEFAULT_PRECISION_BITS),
    }
}

fn validate_bits(bits: u32) -> Result<u32, CliError> {
    if !(16..=65536).contains(&bits) {
        return Err(CliError::Input(format!(
            "precision must lie between 16 and 65536 bits, got {bits}"
        )));
    }
    Ok(bits)
}

/// Fixed-point decimal with up to 6 significant digits, trailing zeros
/// trimmed ("0.240606", "0").
fn short_decimal(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let mut s = if v.abs() >= 1e15 || v.abs() < 1e-9 {
        format!("{v:.5e}")
    } else {
        let digits = (6 - (v.abs().log10().floor() as i32 + 1)).clamp(0, 12);
        format!("{v:.*}", digits as usize)
    };
    if s.contains('.') && !s.contains('e') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    s
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Krasner {
            p,
            abs_degree,
            d,
            totally_ramified,
            profiles,
        } => {
            let field = LocalField::new(p, abs_degree)?;
            match (d, profiles) {
                (Some(degree), None) => {
                    let count = if totally_ramified {
                        krasner::count_totally_ramified(&field, degree)?
                    } else {
                        krasner::count_extensions(&field, degree)?
                    };
                    println!("{count}");
                }
                (None, Some(dmax)) => {
                    if totally_ramified {
                        return Err(CliError::Input(
                            "--totally-ramified applies to -d, not --profiles".into(),
                        ));
                    }
                    println!("e\tf\tcount");
                    for (profile, count) in krasner::enumerate_profiles(&field, dmax)? {
                        println!("{}\t{}\t{count}", profile.e, profile.f);
                    }
                }
                _ => {
                    return Err(CliError::Input(
                        "exactly one of -d or --profiles is required".into(),
                    ))
                }
            }
        }
        Command::Bound { file } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", file.display())))?;
            let sc = scenario::load_scenario(&text)?;
            let bits = precision_bits(None)?;
            let bound = evaluate_scenario_with_precision(&sc, bits)?;
            print!("{}", report::Report::from_bound(&bound)?.render());
        }
        Command::Reproduce { only, golden_dir } => {
            let goldens = reproduce::GoldenSource { dir: golden_dir };
            let all_passed = reproduce::run(only.as_deref(), &goldens)?;
            if !all_passed {
                std::process::exit(1);
            }
        }
        Command::Height { polynomial, bits } => {
            let bits = precision_bits(bits)?;
            let number = AlgebraicNumber::parse(&polynomial)?;
            let height = heightoracle::weil_height(&number, bits)?;
            println!("{}", short_decimal(height.value));
        }
        Command::Density {
            p,
            n,
            inert,
            totally_ramified,
        } => {
            let kind = match (inert, totally_ramified) {
                (true, false) => SplittingKind::Inert,
                (false, true) => SplittingKind::TotallyRamified,
                _ => {
                    return Err(CliError::Input(
                        "exactly one of --inert or --totally-ramified is required".into(),
                    ))
                }
            };
            let query = DensityQuery::new(p, n, kind)?;
            println!("{}", natural_density(&query)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
