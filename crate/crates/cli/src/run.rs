//! Subcommand dispatch: maps each CLI invocation onto the library operation,
//! prints the report in the requested format, and writes result files for
//! campaigns.

use std::path::{Path, PathBuf};

use crate::args::{parse_coefficients, parse_phi, Cli, Command, TailMode};
use crate::report::{emit_report, Fields, Report};
use crate::{CliError, CliResult};

use tailbound_core::applications;
use tailbound_core::canonical::{self, CoefficientVector};
use tailbound_core::functional;
use tailbound_core::montecarlo;
use tailbound_core::orlicz;
use tailbound_core::randomized;
use tailbound_core::rng::Seed;

/// Process outcome. `verify` succeeds only when every grid point is
/// dominated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success,
    DomainFailure,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::DomainFailure => 1,
        }
    }
}

fn output_dir(cli_out: &Option<PathBuf>) -> PathBuf {
    cli_out
        .clone()
        .or_else(|| std::env::var_os("TAILBOUND_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn write_file(dir: &Path, name: &str, bytes: &str) -> CliResult<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, bytes)?;
    Ok(path)
}

fn missing(flag: &str, mode: &str) -> CliError {
    CliError::Config(format!("{mode} requires --{flag}"))
}

pub fn run(cli: Cli) -> CliResult<ExitStatus> {
    let format = cli.format;
    match cli.command {
        Command::Conjugate { phi, y } => {
            let phi_fn = parse_phi(&phi)?;
            let value = phi_fn.conjugate(y)?;
            let report = Fields::new()
                .text("phi", &phi_fn.kind_name())
                .num("y", y)
                .num("conjugate", value);
            print!("{}", emit_report(&report, format));
            Ok(ExitStatus::Success)
        }
        Command::ValidatePhi { phi, grid_csv } => {
            let phi_fn = parse_phi(&phi)?;
            let grid = match grid_csv {
                Some(path) => crate::io::read_samples(&path)?,
                None => orlicz::standard_validation_grid(),
            };
            let report = orlicz::validate_n_function(&phi_fn, &grid)?;
            print!("{}", emit_report(&report, format));
            Ok(if report.all_pass() {
                ExitStatus::Success
            } else {
                ExitStatus::DomainFailure
            })
        }
        Command::Nv {
            phi,
            t,
            v,
            oracle_step,
        } => {
            let phi_fn = parse_phi(&phi)?;
            let t = CoefficientVector::new(&parse_coefficients(&t)?)?;
            let phis = vec![phi_fn; t.len()];
            let solution = canonical::solve_nv(&phis, &t, v)?;
            match oracle_step {
                Some(step) => {
                    let oracle = canonical::nv_brute_force(&phis, &t, v, step)?;
                    let report = Fields::new()
                        .num("value", solution.value)
                        .num("oracle", oracle)
                        .num("difference", solution.value - oracle)
                        .list("maximizer", &solution.maximizer);
                    print!("{}", emit_report(&report, format));
                }
                None => print!("{}", emit_report(&solution, format)),
            }
            Ok(ExitStatus::Success)
        }
        Command::TailBound {
            mode,
            phi,
            t,
            v,
            s,
            k,
            z,
            k1,
            k2,
            c,
        } => {
            let phi_fn = parse_phi(&phi)?;
            let t = CoefficientVector::new(&parse_coefficients(&t)?)?;
            let report = match mode {
                TailMode::General => {
                    let v = v.ok_or_else(|| missing("v", "general mode"))?;
                    let s = s.ok_or_else(|| missing("s", "general mode"))?;
                    let k = k.ok_or_else(|| missing("k", "general mode"))?;
                    let phis = vec![phi_fn; t.len()];
                    let nv = canonical::solve_nv(&phis, &t, v)?;
                    canonical::tail_bound_general(&nv, s, k)?
                }
                TailMode::Iid => {
                    let z = z.ok_or_else(|| missing("z", "iid mode"))?;
                    let k1 = k1.ok_or_else(|| missing("k1", "iid mode"))?;
                    let k2 = k2.ok_or_else(|| missing("k2", "iid mode"))?;
                    canonical::tail_bound_iid(z, &t, &phi_fn, k1, k2, c)?
                }
            };
            print!("{}", emit_report(&report, format));
            Ok(ExitStatus::Success)
        }
        Command::Randomized {
            alpha,
            tau,
            phi,
            u,
            c_const,
        } => {
            let phi_fn = parse_phi(&phi)?;
            let threshold =
                randomized::randomized_hoeffding_threshold(alpha, tau, &phi_fn, c_const, u)?;
            let classical = randomized::classical_threshold(alpha, tau, &phi_fn, c_const)?;
            let report = Fields::new()
                .num("alpha", alpha)
                .num("tau", tau)
                .num("u", u)
                .num("C", c_const)
                .num("threshold", threshold)
                .num("classical", classical);
            print!("{}", emit_report(&report, format));
            Ok(ExitStatus::Success)
        }
        Command::FunctionalBound {
            t,
            a,
            b,
            model,
            phi,
        } => {
            let (a_const, b_const, computed) = match model {
                Some(path) => {
                    let phi = phi.ok_or_else(|| missing("phi", "--model"))?;
                    let phi_fn = parse_phi(&phi)?;
                    let fm = crate::io::read_function_model(&path)?;
                    let inputs = functional::functional_norm_inputs(&fm, &phi_fn)?;
                    (inputs.a, inputs.b, true)
                }
                None => {
                    let a = a.ok_or_else(|| missing("a", "direct mode"))?;
                    let b = b.ok_or_else(|| missing("b", "direct mode"))?;
                    (a, b, false)
                }
            };
            let bound = functional::med_tail_bound(t, a_const, b_const)?;
            let report = Fields::new()
                .num("t", t)
                .num("A", a_const)
                .num("B", b_const)
                .boolean("computed_from_model", computed)
                .num("bound", bound);
            print!("{}", emit_report(&report, format));
            Ok(ExitStatus::Success)
        }
        Command::Pca {
            d,
            n,
            delta,
            k3,
            data,
            pop,
        } => {
            let report = match data {
                Some(data_path) => {
                    let pop_path = pop.ok_or_else(|| missing("pop", "empirical mode"))?;
                    let sample = crate::io::read_points(&data_path)?;
                    let (population, dim) = crate::io::read_matrix(&pop_path)?;
                    let inst = applications::PcaInstance::new(dim, d, population, sample)?;
                    let gap = applications::pca_empirical_gap(&inst)?;
                    Fields::new()
                        .int("d", d as u64)
                        .int("n", inst.sample.len() as u64)
                        .int("dimension", dim as u64)
                        .num("empirical_gap", gap)
                }
                None => {
                    let n = n.ok_or_else(|| missing("n", "bound mode"))?;
                    let delta = delta.ok_or_else(|| missing("delta", "bound mode"))?;
                    let k3 = k3.ok_or_else(|| missing("k3", "bound mode"))?;
                    let bound = applications::pca_bound(d, n, delta, k3)?;
                    Fields::new()
                        .int("d", d as u64)
                        .int("n", n as u64)
                        .num("delta", delta)
                        .num("K3", k3)
                        .num("bound", bound)
                }
            };
            print!("{}", emit_report(&report, format));
            Ok(ExitStatus::Success)
        }
        Command::Rademacher {
            n,
            delta,
            l,
            norm_x,
            complexity,
            data,
            n_eps,
            seed,
        } => {
            let report = match data {
                Some(path) => {
                    let sample = crate::io::read_points(&path)?;
                    let est = applications::rademacher_complexity_linear(
                        &sample,
                        l,
                        n_eps,
                        Seed::new(seed),
                    )?;
                    Fields::new()
                        .int("n", sample.len() as u64)
                        .num("L", l)
                        .int("sign_draws", est.sign_draws as u64)
                        .num("complexity", est.value)
                        .num("std_error", est.std_error)
                }
                None => {
                    let n = n.ok_or_else(|| missing("n", "bound mode"))?;
                    let delta = delta.ok_or_else(|| missing("delta", "bound mode"))?;
                    let norm_x = norm_x.ok_or_else(|| missing("norm-x", "bound mode"))?;
                    let complexity =
                        complexity.ok_or_else(|| missing("complexity", "bound mode"))?;
                    let bound = applications::rademacher_bound(n, delta, l, norm_x, complexity)?;
                    Fields::new()
                        .int("n", n as u64)
                        .num("delta", delta)
                        .num("L", l)
                        .num("norm_x", norm_x)
                        .num("complexity", complexity)
                        .num("bound", bound)
                }
            };
            print!("{}", emit_report(&report, format));
            Ok(ExitStatus::Success)
        }
        Command::Verify { config, seed } => {
            let mut campaign = crate::config::load_campaign_config(&config)?;
            if let Some(seed) = seed {
                campaign.seed = seed;
            }
            let result = montecarlo::verify_dominance(&campaign)?;
            print!("{}", emit_report(&result, format));
            let dir = output_dir(&cli.out);
            write_file(&dir, "results.json", &result.to_json())?;
            write_file(&dir, "results.csv", &result.to_csv())?;
            Ok(if result.summary.all_dominated {
                ExitStatus::Success
            } else {
                ExitStatus::DomainFailure
            })
        }
        Command::Calibrate {
            config,
            constant,
            seed,
        } => {
            let mut campaign = crate::config::load_campaign_config(&config)?;
            if let Some(seed) = seed {
                campaign.seed = seed;
            }
            let value = montecarlo::calibrate_constant(&campaign, &constant)?;
            let grid = match &campaign.bound {
                montecarlo::BoundSpec::CanonicalIid { z_grid, .. } => z_grid.clone(),
                montecarlo::BoundSpec::CanonicalGeneral { v_grid, .. } => v_grid.clone(),
            };
            let report = Fields::new()
                .text("constant", &constant)
                .num("value", value)
                .list("grid", &grid)
                .int("trials", campaign.trials)
                .int("seed", campaign.seed);
            print!("{}", emit_report(&report, format));
            let dir = output_dir(&cli.out);
            write_file(&dir, "calibration.json", &report.to_json())?;
            Ok(ExitStatus::Success)
        }
    }
}
