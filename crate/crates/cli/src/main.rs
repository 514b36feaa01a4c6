//! `thinfd`: reduction, membership queries, region boundaries and
//! verification batches from the command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::CliError;

#[derive(Debug, Parser)]
#[command(name = "thinfd", version, about = "Thin fundamental sets for SL(2,Z)")]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Cone half-angle: a number or `pi/N`.
    #[arg(long, global = true, default_value = "pi/12", value_parser = parse_angle)]
    pub epsilon: f64,
    /// Master seed for every random stream.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Sample count for `verify l2` and `bench`.
    #[arg(long, global = true)]
    pub samples: Option<u64>,
    /// Boundary tolerance τ and the determinant tolerance for matrix input.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Use the classical fundamental set instead of `F_ε`.
    #[arg(long, global = true)]
    pub classical: bool,
    /// Accept `ε = π/6` (Siegel containment is then not guaranteed).
    #[arg(long, global = true)]
    pub allow_eps_max: bool,
    /// Human-readable key/value listing instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Kan,
    Kna,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Oracle,
    Stabilizer,
    L2,
    All,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Iwasawa coordinates of a 2×2 matrix given row-major.
    Decompose {
        #[arg(required = true, num_args = 1..=4, allow_negative_numbers = true, value_name = "M11 M12 M21 M22")]
        matrix: Vec<String>,
        #[arg(long, value_enum, default_value_t = Mode::Kan)]
        mode: Mode,
    },
    /// Reduce a matrix into F_ε (or the classical set with --classical).
    Reduce {
        #[arg(required = true, num_args = 1..=4, allow_negative_numbers = true, value_name = "M11 M12 M21 M22")]
        matrix: Vec<String>,
    },
    /// Classify KAN coordinates (θ, a, t), or (θ, a, T) with --mode kna.
    Membership {
        #[arg(allow_negative_numbers = true)]
        theta: f64,
        a: f64,
        #[arg(allow_negative_numbers = true)]
        t: f64,
        #[arg(long, value_enum, default_value_t = Mode::Kan)]
        mode: Mode,
    },
    /// The admissible t-set for (a, θ), optionally with the canonical
    /// representative of a given t.
    TSet {
        a: f64,
        #[arg(allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, allow_negative_numbers = true)]
        t: Option<f64>,
    },
    /// Region boundary polylines as JSON, CSV or SVG.
    Boundary {
        #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_angle)]
        theta: f64,
        #[arg(long, default_value_t = 64)]
        n: usize,
    },
    /// Run a verification suite; exits 5 unless every check passes.
    Verify {
        #[arg(value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Interior points per set for the stabilizer suite.
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = 50)]
        entry_bound: i64,
        /// Random lattices for the cone-minimum oracle comparison.
        #[arg(long, default_value_t = 10_000)]
        lattices: usize,
    },
    /// Time the reduction pipeline on seeded random elements.
    Bench,
}

/// Parses `0.26`, `pi/12`, `π/12`, `pi` or `2pi/25`.
fn parse_angle(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let lower = s.to_ascii_lowercase().replace('π', "pi");
    let value = if let Some(idx) = lower.find("pi") {
        let (coef, rest) = lower.split_at(idx);
        let coef = match coef.trim().trim_end_matches('*') {
            "" => 1.0,
            "-" => -1.0,
            c => c.parse::<f64>().map_err(|e| format!("bad coefficient in {s:?}: {e}"))?,
        };
        let rest = &rest[2..];
        let den = match rest.trim() {
            "" => 1.0,
            r => r
                .strip_prefix('/')
                .ok_or_else(|| format!("expected pi/N, got {s:?}"))?
                .trim()
                .parse::<f64>()
                .map_err(|e| format!("bad denominator in {s:?}: {e}"))?,
        };
        coef * std::f64::consts::PI / den
    } else {
        s.parse::<f64>().map_err(|e| format!("bad angle {s:?}: {e}"))?
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("angle {s:?} is not finite"))
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("THINFD_THREADS") else { return Ok(()) };
    let cap: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| CliError::invalid(format!("THINFD_THREADS must be a positive integer, got {raw:?}")))?;
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    rayon::ThreadPoolBuilder::new()
        .num_threads(cap.min(available))
        .build_global()
        .map_err(|e| CliError::invalid(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let o = &cli.opts;
    match cli.command {
        Command::Decompose { matrix, mode } => commands::decompose(o, &matrix, mode),
        Command::Reduce { matrix } => commands::reduce(o, &matrix),
        Command::Membership { theta, a, t, mode } => commands::membership(o, theta, a, t, mode),
        Command::TSet { a, theta, t } => commands::t_set(o, a, theta, t),
        Command::Boundary { theta, n } => commands::boundary(o, theta, n),
        Command::Verify { suite, points, entry_bound, lattices } => {
            commands::verify(o, suite, points, entry_bound, lattices)
        }
        Command::Bench => commands::bench(o),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("thinfd: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("pi/12").unwrap(), PI / 12.0);
        assert_eq!(parse_angle("π/6").unwrap(), PI / 6.0);
        assert_eq!(parse_angle("2pi/25").unwrap(), 2.0 * PI / 25.0);
        assert_eq!(parse_angle("-pi/24").unwrap(), -PI / 24.0);
        assert_eq!(parse_angle("0.25").unwrap(), 0.25);
        assert!(parse_angle("pi/").is_err());
        assert!(parse_angle("tau").is_err());
        assert!(parse_angle("inf").is_err());
    }

    #[test]
    fn cli_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
