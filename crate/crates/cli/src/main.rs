//! Command-line front end for the disk transform library.
//!
//! Subcommands evaluate the sharp constant C_q, sample transforms and Green
//! potentials of catalog densities on polar grids, and run the verification
//! suites. Exit codes: 0 on success, 1 when a verification suite ran but
//! some check failed, 2 for configuration errors.

mod commands;
mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use disk_cauchy::{
    cauchy_integral, cauchy_transform, conj_cauchy_transform, green_potential, j0star_transform,
};

use crate::commands::{Payload, PointOp};
use crate::output::{Format, RunConfig};

const THREADS_VAR: &str = "DISK_CAUCHY_THREADS";

#[derive(Parser)]
#[command(
    name = "disk-cauchy",
    version,
    about = "Green potentials and Cauchy transforms on the unit disk"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Relative tolerance for series and quadrature evaluations.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,

    /// Seed for randomized verification suites; deterministic commands
    /// ignore it but still echo it.
    #[arg(long, global = true, default_value_t = 1729)]
    seed: u64,

    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the sharp constant C_q with its two series parts.
    Constants {
        /// Norm exponent q, inside [1.05, 1.95].
        #[arg(long)]
        q: f64,
    },
    /// Sample C_q along an interval of exponents.
    CqCurve {
        /// Left endpoint of the exponent interval.
        #[arg(long, default_value_t = 1.05)]
        from: f64,
        /// Right endpoint of the exponent interval.
        #[arg(long, default_value_t = 1.95)]
        to: f64,
        /// Number of samples, endpoints included.
        #[arg(long, default_value_t = 19)]
        steps: usize,
    },
    /// Sample a transform of a catalog density on a polar grid.
    Transform {
        /// Density id: one, zero, example2, smooth:gauss,
        /// example1:alpha=<a>, or power:s=<s>.
        #[arg(long)]
        g: String,
        /// Which transform to sample.
        #[arg(long, value_enum)]
        op: OpTag,
        /// Grid resolution as RADIALxANGULAR; rings are Chebyshev points,
        /// angles are uniform.
        #[arg(long, default_value = "64x128")]
        grid: String,
    },
    /// Sample the Green potential of a catalog density on a polar grid.
    Potential {
        /// Density id, as for transform.
        #[arg(long)]
        g: String,
        /// Grid resolution as RADIALxANGULAR.
        #[arg(long, default_value = "64x128")]
        grid: String,
    },
    /// Run a verification suite and emit its checks.
    Verify {
        /// Suite id: constants, ex1, ex2, thm1, thm2, or thm3.
        #[arg(long)]
        suite: String,
        /// Sample or family size for randomized suites; 0 keeps each
        /// suite's default.
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OpTag {
    /// d/dz of the Green potential.
    Cauchy,
    /// d/dzbar of the Green potential.
    ConjCauchy,
    /// Integral of g(t) / (t - z).
    CauchyIntegral,
    /// Integral of conj(t) g(t) / (1 - z conj(t)).
    J0star,
}

impl OpTag {
    fn id(self) -> &'static str {
        match self {
            OpTag::Cauchy => "cauchy",
            OpTag::ConjCauchy => "conj-cauchy",
            OpTag::CauchyIntegral => "cauchy-integral",
            OpTag::J0star => "j0star",
        }
    }

    fn operation(self) -> PointOp {
        match self {
            OpTag::Cauchy => cauchy_transform,
            OpTag::ConjCauchy => conj_cauchy_transform,
            OpTag::CauchyIntegral => cauchy_integral,
            OpTag::J0star => j0star_transform,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(message) = configure_threads() {
        eprintln!("error: {message}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, String> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(format!("tolerance must be a positive real, got {}", cli.tol));
    }
    let config = resolve_config(cli);
    let mut code = 0;
    let payload = match &cli.command {
        Command::Constants { q } => Payload::Constants(commands::constants(*q, cli.tol)?),
        Command::CqCurve { from, to, steps } => {
            Payload::Curve(commands::cq_curve(*from, *to, *steps, cli.tol)?)
        }
        Command::Transform { g, op, grid } => {
            Payload::Samples(commands::sample_grid(g, grid, cli.tol, op.operation())?)
        }
        Command::Potential { g, grid } => {
            Payload::Samples(commands::sample_grid(g, grid, cli.tol, green_potential)?)
        }
        Command::Verify { suite, samples } => {
            let result = commands::verify(suite, *samples, cli.seed, cli.tol)?;
            code = verify_exit_code(result.passed());
            Payload::Verify(result)
        }
    };
    let rendered = output::render(&config, &payload, cli.format);
    output::write_artifact(cli.out.as_deref(), &rendered)
        .map_err(|e| format!("could not write output: {e}"))?;
    Ok(code)
}

fn verify_exit_code(passed: bool) -> u8 {
    if passed {
        0
    } else {
        1
    }
}

/// Sizes the global thread pool from the environment. Unset means the
/// default; anything but a positive integer is a configuration error.
fn configure_threads() -> Result<(), String> {
    let Some(raw) = std::env::var_os(THREADS_VAR) else {
        return Ok(());
    };
    let raw = raw.to_string_lossy();
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_VAR} must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| format!("could not size the thread pool: {e}"))
}

fn resolve_config(cli: &Cli) -> RunConfig {
    let mut parameters = BTreeMap::new();
    let command = match &cli.command {
        Command::Constants { q } => {
            parameters.insert("q".to_string(), q.to_string());
            "constants"
        }
        Command::CqCurve { from, to, steps } => {
            parameters.insert("from".to_string(), from.to_string());
            parameters.insert("to".to_string(), to.to_string());
            parameters.insert("steps".to_string(), steps.to_string());
            "cq-curve"
        }
        Command::Transform { g, op, grid } => {
            parameters.insert("g".to_string(), g.clone());
            parameters.insert("op".to_string(), op.id().to_string());
            parameters.insert("grid".to_string(), grid.clone());
            "transform"
        }
        Command::Potential { g, grid } => {
            parameters.insert("g".to_string(), g.clone());
            parameters.insert("grid".to_string(), grid.clone());
            "potential"
        }
        Command::Verify { suite, samples } => {
            parameters.insert("suite".to_string(), suite.clone());
            parameters.insert("samples".to_string(), samples.to_string());
            "verify"
        }
    };
    RunConfig {
        command: command.to_string(),
        parameters,
        output_path: cli
            .out
            .as_deref()
            .map_or_else(|| "stdout".to_string(), |p| p.display().to_string()),
        format: cli.format.id().to_string(),
        seed: cli.seed,
        tolerance: cli.tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verify_exit_codes_follow_suite_outcome() {
        assert_eq!(verify_exit_code(true), 0);
        assert_eq!(verify_exit_code(false), 1);
    }

    #[test]
    fn cli_declaration_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn config_resolution_echoes_defaults_and_overrides() {
        let cli = Cli::try_parse_from(["disk-cauchy", "constants", "--q", "1.5"]).unwrap();
        let config = resolve_config(&cli);
        assert_eq!(config.command, "constants");
        assert_eq!(config.parameters["q"], "1.5");
        assert_eq!(config.output_path, "stdout");
        assert_eq!(config.format, "json");
        assert_eq!(config.seed, 1729);
        assert_eq!(config.tolerance, 1e-6);

        let cli = Cli::try_parse_from([
            "disk-cauchy",
            "verify",
            "--suite",
            "ex2",
            "--seed",
            "7",
            "--tol",
            "1e-4",
            "--format",
            "csv",
        ])
        .unwrap();
        let config = resolve_config(&cli);
        assert_eq!(config.command, "verify");
        assert_eq!(config.parameters["suite"], "ex2");
        assert_eq!(config.parameters["samples"], "0");
        assert_eq!(config.format, "csv");
        assert_eq!(config.seed, 7);
        assert_eq!(config.tolerance, 1e-4);
    }

    #[test]
    fn unknown_flags_and_subcommands_are_rejected() {
        assert!(Cli::try_parse_from(["disk-cauchy", "constants", "--q", "1.5", "--bogus"]).is_err());
        assert!(Cli::try_parse_from(["disk-cauchy", "plot"]).is_err());
        assert!(Cli::try_parse_from(["disk-cauchy", "transform", "--g", "one"]).is_err());
    }
}
