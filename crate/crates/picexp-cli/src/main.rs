//! Thin argument layer over the library pipelines. Exit codes are part of
//! the contract: 0 success, 1 usage or parse error, 2 verification
//! violation, 3 internal inconsistency.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use picexp_cli::input::{self, VerifyInput};
use picexp_cli::pipeline::{self, BoundsRequest, RowOptions, DEFAULT_CAP};
use picexp_cli::report::{self, COVER_COLUMNS, CURVE_COLUMNS};
use picexp_cli::sweep::{self, SweepSpec};
use picexp_cli::CliError;
use picexp_core::exact::LogBase;
use picexp_core::nonfibral::CoveringMap;
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "picexp",
    version,
    about = "Exact class-group and covering checks for hyperelliptic curves over finite fields"
)]
struct Cli {
    /// Enumeration budget; any single scan needing more than this many
    /// steps is skipped (sweep rows) or refused (single commands).
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: u128,
    /// Seed for sampled modes; recorded in every artifact.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Directory receiving sweep artifacts.
    #[arg(long, global = true, default_value = ".")]
    output_dir: PathBuf,
    /// Output shape for verify rows.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Base of the logarithm in the comparison-only cube-root reference:
    /// "e" or an integer >= 2.
    #[arg(long, global = true, default_value = "e")]
    log_base: String,
    /// Working precision in bits for enclosure arithmetic.
    #[arg(long, global = true, default_value_t = 64)]
    prec: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MapKind {
    /// The degree-2 map to the line given by the x-coordinate.
    #[value(name = "x-map")]
    XMap,
    /// The bielliptic covering read from --cover.
    Phi,
}

#[derive(Subcommand)]
enum Command {
    /// Point counts, L-polynomial, class number, and Weil interval of a curve.
    Zeta {
        /// Curve JSON file.
        #[arg(long)]
        curve: PathBuf,
    },
    /// Class group order, exponent, invariant factors, and order histogram.
    Jacobian {
        /// Curve JSON file.
        #[arg(long)]
        curve: PathBuf,
    },
    /// Evaluate every bound the supplied scalars determine.
    Bounds {
        /// Genus for the exponent and order-count bounds.
        #[arg(long)]
        g: Option<u64>,
        /// Field size (prime power).
        #[arg(long)]
        q: Option<u64>,
        /// Gonality.
        #[arg(long)]
        gon: Option<u64>,
        /// Order threshold for the order-count bound.
        #[arg(long)]
        m: Option<u64>,
        /// Source genus for the relative bounds.
        #[arg(long)]
        g1: Option<u64>,
        /// Target genus for the relative bounds.
        #[arg(long)]
        g2: Option<u64>,
        /// Covering degree for the relative bounds.
        #[arg(long = "deg-phi")]
        deg_phi: Option<u64>,
    },
    /// Count non-fibral degree-k closed points and compare to the bound.
    Nonfibral {
        /// Curve JSON file (required for the x-map).
        #[arg(long)]
        curve: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = MapKind::XMap)]
        map: MapKind,
        /// Cover JSON file (required for phi).
        #[arg(long)]
        cover: Option<PathBuf>,
        /// Prime degree of the closed points to count.
        #[arg(long)]
        k: u64,
    },
    /// Relative class group profile of a bielliptic cover.
    Relative {
        /// Cover JSON file.
        #[arg(long)]
        cover: PathBuf,
    },
    /// Enumerate and verify a curve corpus; writes sweep.csv and sweep.json.
    Sweep {
        /// Field characteristic.
        #[arg(long)]
        p: u64,
        /// Field extension degree.
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        genus: usize,
        /// Also enumerate even-degree models (degree 2g+2).
        #[arg(long)]
        include_even: bool,
        /// Keep only the first N valid curves in enumeration order.
        #[arg(long)]
        max_curves: Option<usize>,
    },
    /// One fully populated report row for a curve or cover file.
    Verify {
        /// Curve or cover JSON file; the "F" key marks a cover.
        #[arg(long)]
        input: PathBuf,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(1))
        }
    }
}

fn run() -> Result<u8, CliError> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return Ok(code);
        }
    };
    let log_base = parse_log_base(&cli.log_base)?;
    let opts = RowOptions {
        cap: cli.cap,
        prec: cli.prec,
    };

    match &cli.command {
        Command::Zeta { curve } => {
            let c = input::parse_curve_file(curve)?;
            emit_json(&pipeline::zeta_output(&c, cli.cap)?)?;
            Ok(0)
        }
        Command::Jacobian { curve } => {
            let c = input::parse_curve_file(curve)?;
            emit_json(&pipeline::jacobian_output(&c, cli.cap, cli.seed)?)?;
            Ok(0)
        }
        Command::Bounds {
            g,
            q,
            gon,
            m,
            g1,
            g2,
            deg_phi,
        } => {
            let req = BoundsRequest {
                g: *g,
                q: *q,
                gon: *gon,
                m: *m,
                g1: *g1,
                g2: *g2,
                deg_phi: *deg_phi,
            };
            emit_json(&pipeline::bounds_report(&req, log_base, cli.prec)?)?;
            Ok(0)
        }
        Command::Nonfibral {
            curve,
            map,
            cover,
            k,
        } => {
            let out = match map {
                MapKind::XMap => {
                    let path = curve.as_ref().ok_or_else(|| {
                        CliError::Input(String::from("--curve is required for the x-map"))
                    })?;
                    let c = input::parse_curve_file(path)?;
                    let g = u64::try_from(c.genus())
                        .map_err(|_| CliError::Input(String::from("genus out of range")))?;
                    let q = pipeline::field_order(c.field())?;
                    let xm = CoveringMap::x_map(&c);
                    pipeline::nonfibral_output(&xm, g, q, *k, cli.cap)?
                }
                MapKind::Phi => {
                    let path = cover.as_ref().ok_or_else(|| {
                        CliError::Input(String::from("--cover is required for phi"))
                    })?;
                    let cv = input::parse_cover_file(path)?;
                    let q = pipeline::field_order(cv.base())?;
                    let phi = cv.covering_map()?;
                    pipeline::nonfibral_output(&phi, 2, q, *k, cli.cap)?
                }
            };
            let pass = out.pass;
            emit_json(&out)?;
            Ok(if pass { 0 } else { 2 })
        }
        Command::Relative { cover } => {
            let cv = input::parse_cover_file(cover)?;
            let row = pipeline::cover_row(&cv, &opts)?;
            let pass = row.pass_all;
            emit_json(&row)?;
            Ok(if pass { 0 } else { 2 })
        }
        Command::Sweep {
            p,
            n,
            genus,
            include_even,
            max_curves,
        } => {
            let spec = SweepSpec {
                p: *p,
                n: *n,
                genus: *genus,
                include_even: *include_even,
                max_curves: *max_curves,
                cap: cli.cap,
                seed: cli.seed,
                prec: cli.prec,
                output_dir: cli.output_dir.clone(),
            };
            let outcome = sweep::run_sweep(&spec)?;
            let s = &outcome.report.summary;
            eprintln!(
                "sweep: {} curves, {} rows with skips, {} violations -> {}, {}",
                s.curves_processed,
                s.rows_with_skips,
                s.violations,
                outcome.csv_path.display(),
                outcome.json_path.display()
            );
            Ok(if s.violations == 0 { 0 } else { 2 })
        }
        Command::Verify { input: path } => match input::parse_verify_file(path)? {
            VerifyInput::Curve(c) => {
                let row = pipeline::curve_row(&c, &opts)?;
                emit_row(cli.format, &CURVE_COLUMNS, row.csv_record(), &row, &cli)?;
                Ok(if row.pass_all { 0 } else { 2 })
            }
            VerifyInput::Cover(cv) => {
                let row = pipeline::cover_row(&cv, &opts)?;
                emit_row(cli.format, &COVER_COLUMNS, row.csv_record(), &row, &cli)?;
                Ok(if row.pass_all { 0 } else { 2 })
            }
        },
    }
}

fn emit_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    println!("{}", report::to_json_pretty(value)?);
    Ok(())
}

fn emit_row<T: Serialize>(
    format: Format,
    columns: &[&str],
    record: Vec<String>,
    row: &T,
    cli: &Cli,
) -> Result<(), CliError> {
    match format {
        Format::Json => emit_json(row),
        Format::Csv => {
            let mut buf = Vec::new();
            report::write_csv(
                &mut buf,
                "picexp-row-v1",
                cli.seed,
                cli.cap,
                columns,
                std::iter::once(record),
            )?;
            print!("{}", String::from_utf8_lossy(&buf));
            Ok(())
        }
    }
}

fn parse_log_base(s: &str) -> Result<LogBase, CliError> {
    if s == "e" {
        return Ok(LogBase::E);
    }
    match s.parse::<u64>() {
        Ok(b) if b >= 2 => Ok(LogBase::Int(b)),
        _ => Err(CliError::Input(format!(
            "--log-base must be \"e\" or an integer >= 2, got {s}"
        ))),
    }
}
