//! Argument types. One subcommand per exposed operation family; unknown
//! flags are rejected by the parser.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::CliError;
use tailbound_core::OrliczFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "tailbound",
    version,
    about = "Concentration bounds for generalized sub-Gaussian canonical processes, \
             with seeded Monte Carlo verification"
)]
pub struct Cli {
    /// Output format printed to stdout.
    #[arg(long, global = true, value_enum, default_value = "table")]
    pub format: Format,

    /// Directory for result files written by `verify` and `calibrate`
    /// (default: $TAILBOUND_OUT, falling back to the working directory).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the Young-Fenchel transform phi*(y).
    Conjugate {
        /// Orlicz function: quadratic | scaled-quadratic | power:<p> |
        /// exp-type | exp-type-dual | custom:<csv>
        #[arg(long)]
        phi: String,
        #[arg(long)]
        y: f64,
    },
    /// Check the N-function axioms and standard properties on a grid.
    ValidatePhi {
        #[arg(long)]
        phi: String,
        /// Optional single-column CSV of grid points (default: the standard
        /// symmetric log grid).
        #[arg(long)]
        grid_csv: Option<PathBuf>,
    },
    /// Solve the constrained maximization N_v(t).
    Nv {
        #[arg(long)]
        phi: String,
        /// Comma-separated coefficients, e.g. `--t 3,4`.
        #[arg(long)]
        t: String,
        #[arg(long)]
        v: f64,
        /// Also run the brute-force grid oracle with this step (dim <= 4).
        #[arg(long)]
        oracle_step: Option<f64>,
    },
    /// Canonical-process tail bounds.
    TailBound {
        #[arg(long, value_enum)]
        mode: TailMode,
        #[arg(long)]
        phi: String,
        #[arg(long)]
        t: String,
        /// Budget v (general mode).
        #[arg(long)]
        v: Option<f64>,
        /// Scale s >= 1 (general mode).
        #[arg(long)]
        s: Option<f64>,
        /// K = max_i tau_{phi_i*}(X_i) (general mode).
        #[arg(long)]
        k: Option<f64>,
        /// Threshold z (iid mode).
        #[arg(long)]
        z: Option<f64>,
        #[arg(long)]
        k1: Option<f64>,
        #[arg(long)]
        k2: Option<f64>,
        /// Universal constant of the iid exponent.
        #[arg(long, default_value_t = 1.0)]
        c: f64,
    },
    /// Uniformly randomized Hoeffding threshold.
    Randomized {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        phi: String,
        /// Realization of the uniform variable; 1 gives the classical
        /// threshold.
        #[arg(long, default_value_t = 1.0)]
        u: f64,
        /// Constant C (stated cap 4).
        #[arg(long, default_value_t = 4.0)]
        c_const: f64,
    },
    /// Tail bound for a general function of independent inputs.
    FunctionalBound {
        /// Deviation t > 0.
        #[arg(long)]
        t: f64,
        /// Exponent constant A (skip when --model is given).
        #[arg(long)]
        a: Option<f64>,
        /// Exponent constant B (skip when --model is given).
        #[arg(long)]
        b: Option<f64>,
        /// JSON file with a discrete function model; (A, B) are computed.
        #[arg(long)]
        model: Option<PathBuf>,
        /// Orlicz function for the moment-ratio norms (required with --model).
        #[arg(long)]
        phi: Option<String>,
    },
    /// PCA reconstruction-error bound, or the empirical gap of a data set.
    Pca {
        /// Projection rank d.
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        k3: Option<f64>,
        /// CSV of sample points (row per point) for the empirical gap.
        #[arg(long)]
        data: Option<PathBuf>,
        /// CSV of the population second-moment matrix (row per row).
        #[arg(long)]
        pop: Option<PathBuf>,
    },
    /// Rademacher-complexity bound, or the empirical complexity of a data set.
    Rademacher {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        l: f64,
        #[arg(long)]
        norm_x: Option<f64>,
        #[arg(long)]
        complexity: Option<f64>,
        /// CSV of sample points for the empirical complexity estimate.
        #[arg(long)]
        data: Option<PathBuf>,
        /// Sign-vector draws for the estimate.
        #[arg(long, default_value_t = 10_000)]
        n_eps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a dominance-verification campaign from a config file.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Override the config seed; fully determines the output bytes.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Calibrate a universal constant against a campaign.
    Calibrate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        constant: String,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TailMode {
    General,
    Iid,
}

/// Parse an Orlicz function spec string.
pub fn parse_phi(spec: &str) -> Result<OrliczFunction, CliError> {
    match spec {
        "quadratic" => Ok(OrliczFunction::quadratic()),
        "scaled-quadratic" => Ok(OrliczFunction::scaled_quadratic()),
        "exp-type" => Ok(OrliczFunction::exp_type()),
        "exp-type-dual" => Ok(OrliczFunction::exp_type_dual()),
        other => {
            if let Some(p) = other.strip_prefix("power:") {
                let p: f64 = p
                    .parse()
                    .map_err(|_| CliError::Config(format!("bad power exponent in {spec:?}")))?;
                return OrliczFunction::power(p).map_err(CliError::Domain);
            }
            if let Some(path) = other.strip_prefix("custom:") {
                let knots = crate::io::read_phi_knots(std::path::Path::new(path))?;
                return OrliczFunction::custom(&knots).map_err(CliError::Domain);
            }
            Err(CliError::Config(format!(
                "unknown phi {spec:?}; expected quadratic | scaled-quadratic | power:<p> | \
                 exp-type | exp-type-dual | custom:<csv>"
            )))
        }
    }
}

/// Parse a comma-separated coefficient list.
pub fn parse_coefficients(spec: &str) -> Result<Vec<f64>, CliError> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("bad coefficient {s:?}")))
        })
        .collect()
}
