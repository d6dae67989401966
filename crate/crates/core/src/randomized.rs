//! Uniformly randomized Markov inequality and the randomized Hoeffding
//! threshold, plus the classical (`U = 1`) comparison and a seeded validity
//! campaign.
//!
//! The randomized threshold is
//! `C tau (2 log(1/alpha) + log U) / phi^(-1)(log(1/alpha))` with `U`
//! uniform on (0, 1]; `log U < 0` makes it strictly tighter than the
//! classical threshold in expectation (`E log U = -1`).

use alloc::format;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fmath::{abs, ln, sqrt};
use crate::norms::{tau_phi_norm, tau_phi_norm_of_sum, RandomModel};
use crate::orlicz::OrliczFunction;
use crate::rng::{Seed, StreamRng};
use crate::stats::clopper_pearson;

/// Stated cap of the universal constant in the randomized Hoeffding bound.
pub const DEFAULT_C: f64 = 4.0;

/// A randomized threshold with every ingredient recorded.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RandomizedThreshold {
    pub alpha: f64,
    pub c: f64,
    pub tau: f64,
    pub u: f64,
    pub threshold: f64,
}

impl RandomizedThreshold {
    pub fn new(alpha: f64, tau: f64, phi: &OrliczFunction, c: f64, u: f64) -> Result<Self> {
        let threshold = randomized_hoeffding_threshold(alpha, tau, phi, c, u)?;
        Ok(RandomizedThreshold {
            alpha,
            c,
            tau,
            u,
            threshold,
        })
    }
}

fn check_alpha(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha must lie in (0,1), got {alpha}")));
    }
    Ok(ln(1.0 / alpha))
}

/// `C tau (2 log(1/alpha) + log u) / phi^(-1)(log(1/alpha))`.
///
/// For very small `u` the numerator goes negative and so does the threshold;
/// that is the literal form of the randomized inequality and is preserved.
pub fn randomized_hoeffding_threshold(
    alpha: f64,
    tau: f64,
    phi: &OrliczFunction,
    c: f64,
    u: f64,
) -> Result<f64> {
    let log_inv_alpha = check_alpha(alpha)?;
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::domain(format!("tau must be finite and >= 0, got {tau}")));
    }
    if !(c > 0.0) {
        return Err(Error::domain(format!("C must be > 0, got {c}")));
    }
    if !(u > 0.0 && u <= 1.0) {
        return Err(Error::domain(format!("u must lie in (0,1], got {u}")));
    }
    let denom = phi.inverse(log_inv_alpha)?;
    if denom == 0.0 {
        return Err(Error::domain("phi^(-1)(log(1/alpha)) = 0"));
    }
    Ok(c * tau * (2.0 * log_inv_alpha + ln(u)) / denom)
}

/// The classical threshold is the randomized one evaluated at `u = 1`
/// (identical code path, so the reduction is exact).
pub fn classical_threshold(alpha: f64, tau: f64, phi: &OrliczFunction, c: f64) -> Result<f64> {
    randomized_hoeffding_threshold(alpha, tau, phi, c, 1.0)
}

/// Outcome of the randomized Markov identity check
/// `P(X >= U/a) = E[min(aX, 1)]` estimated by Monte Carlo with shared draws.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MarkovCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub se_lhs: f64,
    pub se_rhs: f64,
    /// `|lhs - rhs|` in units of the standard error of the paired
    /// per-trial difference.
    pub discrepancy_se: f64,
    pub trials: u64,
}

/// Estimate both sides of the uniformly randomized Markov identity with a
/// shared seed: each trial draws one `X` used by both sides and one `U` used
/// by the left side only.
pub fn randomized_markov_check(
    model: &RandomModel,
    a: f64,
    n_trials: u64,
    seed: Seed,
) -> Result<MarkovCheck> {
    if !(a > 0.0) {
        return Err(Error::domain(format!("a must be > 0, got {a}")));
    }
    if n_trials == 0 {
        return Err(Error::domain("need at least one trial"));
    }
    let mut rng = StreamRng::new(seed);
    let n = n_trials as f64;
    let (mut sum_l, mut sum_r) = (0.0f64, 0.0f64);
    let (mut sq_l, mut sq_r, mut sq_d) = (0.0f64, 0.0f64, 0.0f64);
    let mut sum_d = 0.0f64;
    for _ in 0..n_trials {
        let x = model.sample(&mut rng);
        if x < 0.0 {
            return Err(Error::domain(format!(
                "randomized Markov requires nonnegative X, drew {x}"
            )));
        }
        let u = rng.uniform_open_closed();
        let l = if x >= u / a { 1.0 } else { 0.0 };
        let r = (a * x).min(1.0);
        let d = l - r;
        sum_l += l;
        sum_r += r;
        sum_d += d;
        sq_l += l * l;
        sq_r += r * r;
        sq_d += d * d;
    }
    let mean_l = sum_l / n;
    let mean_r = sum_r / n;
    let mean_d = sum_d / n;
    let var = |sq: f64, mean: f64| (sq / n - mean * mean).max(0.0);
    let se_l = sqrt(var(sq_l, mean_l) / n);
    let se_r = sqrt(var(sq_r, mean_r) / n);
    let se_d = sqrt(var(sq_d, mean_d) / n);
    let diff = abs(mean_l - mean_r);
    let discrepancy_se = if diff == 0.0 {
        0.0
    } else {
        diff / se_d.max(1e-300)
    };
    Ok(MarkovCheck {
        lhs: mean_l,
        rhs: mean_r,
        se_lhs: se_l,
        se_rhs: se_r,
        discrepancy_se,
        trials: n_trials,
    })
}

/// Which variable the norm in the randomized threshold refers to. The
/// statement carries no explicit `n`, so both readings are implemented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TauMode {
    /// `tau_phi(sum_i X_i)`: recovers the classical `sqrt(n)` scaling for
    /// i.i.d. Gaussian summands under quadratic `phi`. Default.
    Sum,
    /// `tau_phi(X_1)`, the per-summand reading.
    Summand,
}

/// Mean thresholds observed over a campaign.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MeanThresholds {
    pub randomized: f64,
    pub classical: f64,
}

/// Result of a randomized-threshold validity campaign.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RandomizedCampaignResult {
    pub alpha: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub mode: TauMode,
    pub tau: f64,
    pub violations: u64,
    pub trials: u64,
    pub violation_rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub mean_thresholds: MeanThresholds,
    /// Standard error of the per-trial (randomized - classical) gap.
    pub threshold_gap_se: f64,
}

/// Draw `(X_1..X_n, U)` per trial and compare the centered sum against the
/// randomized threshold. Ties count as non-violations, which keeps the
/// degenerate zero-variance case at rate 0.
#[allow(clippy::too_many_arguments)]
pub fn randomized_validity_campaign(
    model: &RandomModel,
    n_summands: usize,
    alpha: f64,
    phi: &OrliczFunction,
    c: f64,
    n_trials: u64,
    mode: TauMode,
    seed: Seed,
) -> Result<RandomizedCampaignResult> {
    check_alpha(alpha)?;
    if n_summands == 0 {
        return Err(Error::domain("need at least one summand"));
    }
    if n_trials == 0 {
        return Err(Error::domain("need at least one trial"));
    }
    let centered = model.centered();
    let tau = match mode {
        TauMode::Sum => tau_phi_norm_of_sum(&centered, n_summands, phi)?.value,
        TauMode::Summand => tau_phi_norm(&centered, phi)?.value,
    };
    let classical = classical_threshold(alpha, tau, phi, c)?;
    let mean_x = model.mean();
    let mut rng = StreamRng::new(seed);
    let mut violations = 0u64;
    let mut sum_thr = 0.0f64;
    let mut sum_gap_sq = 0.0f64;
    let mut sum_gap = 0.0f64;
    for _ in 0..n_trials {
        let mut s = 0.0;
        for _ in 0..n_summands {
            s += model.sample(&mut rng) - mean_x;
        }
        let u = rng.uniform_open_closed();
        let thr = randomized_hoeffding_threshold(alpha, tau, phi, c, u)?;
        if s > thr {
            violations += 1;
        }
        sum_thr += thr;
        let gap = thr - classical;
        sum_gap += gap;
        sum_gap_sq += gap * gap;
    }
    let n = n_trials as f64;
    let rate = violations as f64 / n;
    let (ci_low, ci_high) = clopper_pearson(violations, n_trials, 0.0027);
    let gap_mean = sum_gap / n;
    let gap_var = (sum_gap_sq / n - gap_mean * gap_mean).max(0.0);
    Ok(RandomizedCampaignResult {
        alpha,
        c,
        mode,
        tau,
        violations,
        trials: n_trials,
        violation_rate: rate,
        ci_low,
        ci_high,
        mean_thresholds: MeanThresholds {
            randomized: sum_thr / n,
            classical,
        },
        threshold_gap_se: sqrt(gap_var / n),
    })
}
