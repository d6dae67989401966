//! Concentration for general functions of independent inputs: centered
//! conditional versions, tilted expectations, the tilted-variance integral
//! inequality, the Maurer infimum bound, the functional tail bound driven by
//! the moment-ratio norms of the conditional fluctuations, and the
//! Hilbert-space mean bound.

use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fmath::{abs, exp, sqrt};
use crate::norms::{moment_orlicz_norm, RandomModel};
use crate::opt::{golden_min, lin_grid};
use crate::orlicz::OrliczFunction;

/// Cap on exhaustive enumeration of a discrete model's support grid.
pub const ENUMERATION_LIMIT: u64 = 1_000_000;
/// `p_max` for the moment-ratio norms of conditional fluctuations. Bounded
/// conditionals have `||X||_p <= max |x|` while `phi^(-1)(p)` grows, so the
/// supremum sits well below this.
pub const FUNCTIONAL_P_MAX: f64 = 64.0;
/// Nodes per axis of the tensor Gauss-Legendre rule in the integral check.
const GAUSS_LEGENDRE_NODES: usize = 32;

/// One coordinate's finite support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoordinateSupport {
    pub values: Vec<f64>,
    pub probs: Vec<f64>,
}

/// Built-in or tabulated function over the support grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FunctionKind {
    Sum,
    Product,
    Coordinate { k: usize },
    Constant { c: f64 },
    /// Row-major table over the support grid.
    Table { values: Vec<f64> },
}

/// A function of `n` independent coordinates with finite supports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteFunctionModel {
    pub supports: Vec<CoordinateSupport>,
    pub f: FunctionKind,
}

impl DiscreteFunctionModel {
    pub fn new(supports: Vec<CoordinateSupport>, f: FunctionKind) -> Result<Self> {
        if supports.is_empty() {
            return Err(Error::domain("need at least one coordinate"));
        }
        for (i, s) in supports.iter().enumerate() {
            if s.values.is_empty() || s.values.len() != s.probs.len() {
                return Err(Error::domain(format!(
                    "coordinate {i} needs matching nonempty values/probs"
                )));
            }
            let total: f64 = s.probs.iter().sum();
            if abs(total - 1.0) > 1e-12 {
                return Err(Error::domain(format!(
                    "coordinate {i} probs sum to {total}, expected 1"
                )));
            }
        }
        let model = DiscreteFunctionModel { supports, f };
        let size = model.grid_size();
        if size > ENUMERATION_LIMIT {
            return Err(Error::TooLarge {
                size,
                limit: ENUMERATION_LIMIT,
            });
        }
        if let FunctionKind::Table { values } = &model.f {
            if values.len() as u64 != size {
                return Err(Error::domain(format!(
                    "table has {} entries for a grid of {size}",
                    values.len()
                )));
            }
        }
        if let FunctionKind::Coordinate { k } = &model.f {
            if *k >= model.supports.len() {
                return Err(Error::domain(format!("coordinate index {k} out of range")));
            }
        }
        Ok(model)
    }

    /// Tabulate an arbitrary function over the full support grid.
    pub fn from_fn(
        supports: Vec<CoordinateSupport>,
        f: impl Fn(&[f64]) -> f64,
    ) -> Result<Self> {
        let probe = DiscreteFunctionModel::new(supports.clone(), FunctionKind::Constant { c: 0.0 })?;
        let size = probe.grid_size() as usize;
        let mut values = Vec::with_capacity(size);
        let mut point = alloc::vec![0.0f64; supports.len()];
        let mut idx = alloc::vec![0usize; supports.len()];
        for flat in 0..size {
            probe.unflatten(flat as u64, &mut idx);
            for (j, &i) in idx.iter().enumerate() {
                point[j] = supports[j].values[i];
            }
            values.push(f(&point));
        }
        DiscreteFunctionModel::new(supports, FunctionKind::Table { values })
    }

    /// `n` fair +-1 coins.
    pub fn fair_coins(n: usize, f: FunctionKind) -> Result<Self> {
        let support = CoordinateSupport {
            values: alloc::vec![-1.0, 1.0],
            probs: alloc::vec![0.5, 0.5],
        };
        DiscreteFunctionModel::new(alloc::vec![support; n], f)
    }

    pub fn arity(&self) -> usize {
        self.supports.len()
    }

    pub fn grid_size(&self) -> u64 {
        self.supports
            .iter()
            .fold(1u64, |acc, s| acc.saturating_mul(s.values.len() as u64))
    }

    fn unflatten(&self, mut flat: u64, idx: &mut [usize]) {
        for (j, s) in self.supports.iter().enumerate().rev() {
            let m = s.values.len() as u64;
            idx[j] = (flat % m) as usize;
            flat /= m;
        }
    }

    fn flatten(&self, idx: &[usize]) -> u64 {
        let mut flat = 0u64;
        for (j, s) in self.supports.iter().enumerate() {
            flat = flat * s.values.len() as u64 + idx[j] as u64;
        }
        flat
    }

    /// Evaluate `f` at a grid point given by per-coordinate indices.
    pub fn eval_idx(&self, idx: &[usize]) -> f64 {
        debug_assert_eq!(idx.len(), self.arity());
        match &self.f {
            FunctionKind::Sum => idx
                .iter()
                .zip(&self.supports)
                .map(|(&i, s)| s.values[i])
                .sum(),
            FunctionKind::Product => idx
                .iter()
                .zip(&self.supports)
                .map(|(&i, s)| s.values[i])
                .product(),
            FunctionKind::Coordinate { k } => self.supports[*k].values[idx[*k]],
            FunctionKind::Constant { c } => *c,
            FunctionKind::Table { values } => values[self.flatten(idx) as usize],
        }
    }

    fn point_prob(&self, idx: &[usize]) -> f64 {
        idx.iter()
            .zip(&self.supports)
            .map(|(&i, s)| s.probs[i])
            .product()
    }

    /// `E f(X)` by exhaustive enumeration.
    pub fn expectation(&self) -> f64 {
        let size = self.grid_size() as usize;
        let mut idx = alloc::vec![0usize; self.arity()];
        let mut acc = 0.0;
        for flat in 0..size {
            self.unflatten(flat as u64, &mut idx);
            acc += self.point_prob(&idx) * self.eval_idx(&idx);
        }
        acc
    }

    /// Exact `P(f(X) - E f(X) > t)` by exhaustive enumeration.
    pub fn centered_tail_probability(&self, t: f64) -> f64 {
        let mean = self.expectation();
        let size = self.grid_size() as usize;
        let mut idx = alloc::vec![0usize; self.arity()];
        let mut acc = 0.0;
        for flat in 0..size {
            self.unflatten(flat as u64, &mut idx);
            if self.eval_idx(&idx) - mean > t {
                acc += self.point_prob(&idx);
            }
        }
        acc
    }
}

/// The `k`-th centered conditional version of `f` at the frozen point `x`
/// (given by support indices): the distribution of
/// `f(x with slot k resampled) - E f(x with slot k resampled)`.
/// The result has mean zero by construction.
pub fn centered_conditional(
    fm: &DiscreteFunctionModel,
    x: &[usize],
    k: usize,
) -> Result<RandomModel> {
    if k >= fm.arity() {
        return Err(Error::domain(format!(
            "coordinate index {k} out of range for arity {}",
            fm.arity()
        )));
    }
    if x.len() != fm.arity() {
        return Err(Error::domain("point arity mismatch"));
    }
    for (j, (&i, s)) in x.iter().zip(&fm.supports).enumerate() {
        if i >= s.values.len() {
            return Err(Error::domain(format!("index {i} out of support {j}")));
        }
    }
    let support = &fm.supports[k];
    let mut idx: Vec<usize> = x.into();
    let mut values = Vec::with_capacity(support.values.len());
    for i in 0..support.values.len() {
        idx[k] = i;
        values.push(fm.eval_idx(&idx));
    }
    let mean: f64 = values.iter().zip(&support.probs).map(|(v, p)| v * p).sum();
    let centered: Vec<f64> = values.iter().map(|v| v - mean).collect();
    RandomModel::discrete(&centered, &support.probs)
}

/// Exponentially tilted expectation `E[Y e^X] / E[e^X]` over a finite
/// distribution, stabilized by the largest tilt so it never overflows for
/// finite inputs.
pub fn tilted_expectation(values: &[f64], tilts: &[f64], probs: &[f64]) -> Result<f64> {
    if values.len() != tilts.len() || values.len() != probs.len() || values.is_empty() {
        return Err(Error::domain("values, tilts and probs must have equal nonzero length"));
    }
    let m = tilts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut num = 0.0;
    let mut den = 0.0;
    for ((y, x), p) in values.iter().zip(tilts).zip(probs) {
        let w = p * exp(x - m);
        num += y * w;
        den += w;
    }
    Ok(num / den)
}

/// Variance of `X` under the `sX`-tilted measure.
fn tilted_variance(values: &[f64], probs: &[f64], s: f64) -> f64 {
    let tilts: Vec<f64> = values.iter().map(|&x| s * x).collect();
    let m1 = tilted_expectation(values, &tilts, probs).unwrap();
    let squares: Vec<f64> = values.iter().map(|&x| x * x).collect();
    let m2 = tilted_expectation(&squares, &tilts, probs).unwrap();
    (m2 - m1 * m1).max(0.0)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = alloc::vec![0.0f64; n];
    let mut weights = alloc::vec![0.0f64; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = crate::fmath::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P'_n(x)
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if abs(dx) < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Outcome of the tilted-variance integral inequality check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntegralCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub norm: f64,
    pub pass: bool,
}

/// Check `int_0^1 int_t^1 Var_{sX}(X) ds dt <= e^2 ||X||^2 / (1 - e ||X||)^2`
/// for a finite centered distribution, where `||X||` is the moment-ratio norm
/// under `phi` (which must satisfy `phi^(-1)(1) = 1` and yield a norm below
/// `1/e`). The double integral uses a tensor Gauss-Legendre rule; the
/// integrand is smooth on finite-support tilts.
pub fn fe_integral_check(dist: &RandomModel, phi: &OrliczFunction) -> Result<IntegralCheck> {
    let (values, probs) = dist
        .as_discrete()
        .ok_or_else(|| Error::domain("integral check needs a finite discrete distribution"))?;
    let mean: f64 = values.iter().zip(&probs).map(|(v, p)| v * p).sum();
    let scale = values.iter().fold(0.0f64, |m, &v| m.max(abs(v)));
    if abs(mean) > 1e-9 * scale.max(1.0) {
        return Err(Error::NotCentered { mean });
    }
    let norm = moment_orlicz_norm(dist, phi, FUNCTIONAL_P_MAX)?.value;
    let e = core::f64::consts::E;
    if norm >= 1.0 / e {
        return Err(Error::HypothesisViolated(format!(
            "moment-ratio norm {norm} is not below 1/e"
        )));
    }
    let (nodes, ws) = gauss_legendre(GAUSS_LEGENDRE_NODES);
    let mut lhs = 0.0;
    for (tn, tw) in nodes.iter().zip(&ws) {
        let t = 0.5 * (tn + 1.0);
        let span = 1.0 - t;
        let mut inner = 0.0;
        for (sn, sw) in nodes.iter().zip(&ws) {
            let s = t + span * 0.5 * (sn + 1.0);
            inner += sw * 0.5 * span * tilted_variance(&values, &probs, s);
        }
        lhs += tw * 0.5 * inner;
    }
    let rhs = e * e * norm * norm / ((1.0 - e * norm) * (1.0 - e * norm));
    Ok(IntegralCheck {
        lhs,
        rhs,
        norm,
        pass: lhs <= rhs + 1e-6,
    })
}

/// Closed-form upper bound of the Maurer infimum:
/// `-t^2 / (2 (2 C1 + a t))`.
pub fn m20_rhs(c1: f64, a: f64, t: f64) -> Result<f64> {
    if !(c1 > 0.0) || !(a >= 0.0) || !(t > 0.0) {
        return Err(Error::domain(format!(
            "requires C1 > 0, a >= 0, t > 0; got C1 = {c1}, a = {a}, t = {t}"
        )));
    }
    Ok(-t * t / (2.0 * (2.0 * c1 + a * t)))
}

/// Grid-plus-golden-section minimum of `-beta t + C1 beta^2 / (1 - a beta)`
/// over `beta in [0, 1/a)` (or an interval wide enough to contain the
/// unconstrained minimizer `t / (2 C1)` when `a = 0`).
pub fn m20_lhs_grid(c1: f64, a: f64, t: f64, grid_points: usize) -> Result<f64> {
    if !(c1 > 0.0) || !(a >= 0.0) || !(t > 0.0) {
        return Err(Error::domain(format!(
            "requires C1 > 0, a >= 0, t > 0; got C1 = {c1}, a = {a}, t = {t}"
        )));
    }
    if grid_points < 2 {
        return Err(Error::domain("need at least two grid points"));
    }
    let hi = if a == 0.0 {
        (50.0 / t).max(t / c1)
    } else {
        (1.0 / a) * (1.0 - 1e-12)
    };
    let h = |beta: f64| -beta * t + c1 * beta * beta / (1.0 - a * beta);
    let grid = lin_grid(0.0, hi, grid_points);
    let mut best_i = 0;
    let mut best = h(grid[0]);
    for (i, &b) in grid.iter().enumerate().skip(1) {
        let v = h(b);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let lo = if best_i == 0 { grid[0] } else { grid[best_i - 1] };
    let up = if best_i + 1 == grid.len() {
        grid[best_i]
    } else {
        grid[best_i + 1]
    };
    if lo == up {
        return Ok(best);
    }
    let (_, refined) = golden_min(h, lo, up, 150);
    Ok(refined.min(best))
}

/// Tail bound for `f(X) - E f(X)` in terms of
/// `A = || sum_k ||f_k(X)||^2 ||_inf` and `B = max_k || ||f_k(X)|| ||_inf`:
/// `exp(-t^2 / (4 e^2 A + 2 e B t))`.
///
/// When `A = B = 0` the function has no fluctuation at all and the exact
/// tail is zero, which is returned explicitly.
pub fn med_tail_bound(t: f64, a_const: f64, b_const: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("requires t > 0, got {t}")));
    }
    if !(a_const >= 0.0) || !(b_const >= 0.0) {
        return Err(Error::domain("A and B must be >= 0"));
    }
    if a_const == 0.0 && b_const == 0.0 {
        return Ok(0.0);
    }
    let e = core::f64::consts::E;
    Ok(exp(-t * t / (4.0 * e * e * a_const + 2.0 * e * b_const * t)))
}

/// The exponent ingredients of the functional tail bound.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FunctionalBoundInputs {
    /// `max_x sum_k ||f_k(X)(x)||^2` over the support grid.
    pub a: f64,
    /// `max_{k, x} ||f_k(X)(x)||`.
    pub b: f64,
}

/// Compute `(A, B)` for a discrete model by enumerating the support grid:
/// for every frozen point `x` and coordinate `k`, the moment-ratio norm of
/// the centered conditional fluctuation. The sup over `x` is exact for
/// discrete models. Conditionals do not depend on the frozen coordinate `k`,
/// so norms are memoized per `(k, x_{-k})`.
pub fn functional_norm_inputs(
    fm: &DiscreteFunctionModel,
    phi: &OrliczFunction,
) -> Result<FunctionalBoundInputs> {
    let size = fm.grid_size();
    if size > ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            size,
            limit: ENUMERATION_LIMIT,
        });
    }
    let n = fm.arity();
    let size = size as usize;
    // memo[k] maps the reduced index (coordinate k dropped) to the norm
    let mut memo: Vec<Vec<f64>> = Vec::with_capacity(n);
    for k in 0..n {
        let reduced: usize = size / fm.supports[k].values.len();
        memo.push(alloc::vec![f64::NAN; reduced]);
    }
    let reduced_index = |fm: &DiscreteFunctionModel, idx: &[usize], k: usize| -> usize {
        let mut flat = 0usize;
        for (j, s) in fm.supports.iter().enumerate() {
            if j == k {
                continue;
            }
            flat = flat * s.values.len() + idx[j];
        }
        flat
    };

    let mut a_max = 0.0f64;
    let mut b_max = 0.0f64;
    let mut idx = alloc::vec![0usize; n];
    for flat in 0..size {
        fm.unflatten(flat as u64, &mut idx);
        let mut sum_sq = 0.0;
        for (k, memo_k) in memo.iter_mut().enumerate() {
            let r = reduced_index(fm, &idx, k);
            let norm = if memo_k[r].is_nan() {
                let dist = centered_conditional(fm, &idx, k)?;
                let (values, _) = dist.as_discrete().unwrap();
                let v = if values.iter().all(|&v| v == 0.0) {
                    0.0
                } else {
                    moment_orlicz_norm(&dist, phi, FUNCTIONAL_P_MAX)?.value
                };
                memo_k[r] = v;
                v
            } else {
                memo_k[r]
            };
            sum_sq += norm * norm;
            b_max = b_max.max(norm);
        }
        a_max = a_max.max(sum_sq);
    }
    Ok(FunctionalBoundInputs { a: a_max, b: b_max })
}

/// Check `n >= ln(1/delta) >= 1` and return `ln(1/delta)`.
pub(crate) fn ln_inv_delta_checked(n: usize, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(format!("delta must lie in (0,1), got {delta}")));
    }
    let l = crate::fmath::ln(1.0 / delta);
    if l < 1.0 {
        return Err(Error::domain(format!(
            "hypothesis ln(1/delta) >= 1 fails: ln(1/{delta}) = {l}"
        )));
    }
    if (n as f64) < l {
        return Err(Error::domain(format!(
            "hypothesis n >= ln(1/delta) fails: n = {n}, ln(1/delta) = {l}"
        )));
    }
    Ok(l)
}

/// Hilbert-space mean deviation bound:
/// `||mean(X) - E X|| <= 6 e ||(||X_1||)|| sqrt(ln(1/delta) / n)` with
/// probability at least `1 - delta`, for `n >= ln(1/delta) >= 1`.
///
/// The stated constant `6e` absorbs an additive `2 sqrt(n)`-scale
/// expectation term and two deviation terms whose composition is loose; the
/// bound is implemented exactly in its final stated form, so coverage tests
/// should expect generous slack.
pub fn vector_mean_bound(n: usize, delta: f64, norm: f64) -> Result<f64> {
    let l = ln_inv_delta_checked(n, delta)?;
    if !(norm >= 0.0) {
        return Err(Error::domain("norm must be >= 0"));
    }
    Ok(6.0 * core::f64::consts::E * norm * sqrt(l / n as f64))
}
