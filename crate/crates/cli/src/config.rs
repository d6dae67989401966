//! Campaign configuration files: a TOML key-value schema mapped onto the
//! library's campaign types. Unknown keys are rejected.
//!
//! ```toml
//! kind = "canonical-general"      # or "canonical-iid"
//! trials = 1000000
//! seed = 7
//! # stream = 0                    # draw-stream index (default 0)
//! # ci_alpha = 0.0027             # interval miscoverage (default 3-sigma)
//! # threshold_scale = 1.0         # sanity knob; < 1 breaks dominance
//!
//! t = [0.3, -1.2, 0.7]            # or: t_csv = "t.csv" (one CSV row)
//!
//! [model]
//! family = "gaussian"             # gaussian | uniform-symmetric | rademacher |
//! sigma = 1.0                     # exponential | discrete | mixture | shifted
//!
//! [phi]
//! kind = "quadratic"              # quadratic | scaled-quadratic | power |
//! # p = 3.0                       # exp-type; power takes p
//! # csv = "phi.csv"               # custom tabulated (x, phi(x))
//!
//! [grid]
//! v = [1.0, 2.0, 4.0]             # canonical-general
//! s = [1.0, 2.0]
//! # z = [0.5, 1.0, 2.0]           # canonical-iid
//! # c = 1.0                       # iid constants; K1/K2 default to the
//! # k1 = 1.0                      # norms computed from the model
//! # k2 = 1.5
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::{args::parse_phi, CliError, CliResult};
use tailbound_core::montecarlo::{BoundSpec, CampaignConfig};
use tailbound_core::norms::RandomModel;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    kind: String,
    trials: u64,
    seed: u64,
    #[serde(default)]
    stream: u64,
    ci_alpha: Option<f64>,
    threshold_scale: Option<f64>,
    t: Option<Vec<f64>>,
    t_csv: Option<String>,
    model: RandomModel,
    phi: PhiConfig,
    grid: GridConfig,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PhiConfig {
    kind: String,
    p: Option<f64>,
    csv: Option<String>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct GridConfig {
    v: Option<Vec<f64>>,
    s: Option<Vec<f64>>,
    z: Option<Vec<f64>>,
    c: Option<f64>,
    k1: Option<f64>,
    k2: Option<f64>,
}

/// Load and resolve a campaign config file.
pub fn load_campaign_config(path: &Path) -> CliResult<CampaignConfig> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot open {}: {e}", path.display())))?;
    let file: FileConfig = toml::from_str(&raw)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;

    let phi_spec = match (file.phi.kind.as_str(), file.phi.p, &file.phi.csv) {
        ("power", Some(p), _) => format!("power:{p}"),
        ("power", None, _) => {
            return Err(CliError::Config(String::from("phi kind \"power\" needs p")))
        }
        ("custom", _, Some(csv)) => format!("custom:{csv}"),
        ("custom", _, None) => {
            return Err(CliError::Config(String::from("phi kind \"custom\" needs csv")))
        }
        (other, _, _) => other.to_string(),
    };
    let phi = parse_phi(&phi_spec)?;

    let t = match (file.t, file.t_csv) {
        (Some(t), None) => t,
        (None, Some(csv)) => crate::io::read_coefficient_row(Path::new(&csv))?,
        (Some(_), Some(_)) => {
            return Err(CliError::Config(String::from("give t or t_csv, not both")))
        }
        (None, None) => return Err(CliError::Config(String::from("missing t (or t_csv)"))),
    };

    let bound = match file.kind.as_str() {
        "canonical-general" => BoundSpec::CanonicalGeneral {
            v_grid: file
                .grid
                .v
                .ok_or_else(|| CliError::Config(String::from("canonical-general needs grid.v")))?,
            s_grid: file
                .grid
                .s
                .ok_or_else(|| CliError::Config(String::from("canonical-general needs grid.s")))?,
        },
        "canonical-iid" => BoundSpec::CanonicalIid {
            z_grid: file
                .grid
                .z
                .ok_or_else(|| CliError::Config(String::from("canonical-iid needs grid.z")))?,
            c: file.grid.c.unwrap_or(1.0),
            k1: file.grid.k1,
            k2: file.grid.k2,
        },
        other => {
            return Err(CliError::Config(format!(
                "unknown campaign kind {other:?}; expected canonical-general or canonical-iid"
            )))
        }
    };

    let config = CampaignConfig {
        bound,
        model: file.model,
        phi,
        t,
        trials: file.trials,
        seed: file.seed,
        stream: file.stream,
        ci_alpha: file.ci_alpha.unwrap_or(tailbound_core::montecarlo::DEFAULT_CI_ALPHA),
        threshold_scale: file.threshold_scale.unwrap_or(1.0),
    };
    config.validate()?;
    Ok(config)
}
