//! Orlicz N-functions: evaluation, inversion, differentiation, Young-Fenchel
//! conjugation and axiom validation.
//!
//! An N-function is even, convex, vanishes at zero, and satisfies
//! `phi(x)/x -> 0` at zero and `-> inf` at infinity. The built-in families
//! carry closed forms for the inverse and the conjugate; custom tabulated
//! functions fall back to monotone bisection and bracketed golden-section
//! maximization.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fmath::{abs, exp_m1, ln_1p, powf, sqrt};
use crate::opt::golden_max;

/// Absolute tolerance of the numerical Young-Fenchel maximization.
pub const CONJUGATE_ABS_TOL: f64 = 1e-9;
/// Relative tolerance of the monotone-bisection inverse.
pub const INVERSE_REL_TOL: f64 = 1e-12;
/// Cap of the conjugate bracket search; N-function superlinearity puts the
/// maximizer below this for every finite argument.
pub const CONJUGATE_BRACKET_CAP: f64 = 1e12;

/// Finite-difference step base for custom-function derivatives.
const DERIVATIVE_STEP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum Kind {
    /// `alpha * |x|^p / p` with `p > 1`. Covers the quadratic (`p=2, alpha=1`)
    /// and scaled-quadratic (`p=2, alpha=2`) families.
    Power { p: f64, alpha: f64 },
    /// `e^|x| - |x| - 1`.
    ExpType,
    /// `(1+|x|) ln(1+|x|) - |x|`, the conjugate of `ExpType`.
    ExpTypeDual,
    /// Piecewise-linear interpolant of tabulated `(x, phi(x))` knots with
    /// linear extrapolation beyond the last knot. Knots start at `(0, 0)`.
    Custom { xs: Vec<f64>, ys: Vec<f64> },
}

/// An Orlicz N-function candidate. Immutable after construction; all
/// operations are pure and safe for concurrent use.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrliczFunction {
    kind: Kind,
}

impl OrliczFunction {
    /// `phi(x) = x^2 / 2`.
    pub fn quadratic() -> Self {
        Self {
            kind: Kind::Power { p: 2.0, alpha: 1.0 },
        }
    }

    /// `phi(x) = x^2`. Normalized so that `phi^(-1)(1) = 1`.
    pub fn scaled_quadratic() -> Self {
        Self {
            kind: Kind::Power { p: 2.0, alpha: 2.0 },
        }
    }

    /// `phi(x) = |x|^p / p`, `p > 1`.
    pub fn power(p: f64) -> Result<Self> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::domain(format!("power exponent must be > 1, got {p}")));
        }
        Ok(Self {
            kind: Kind::Power { p, alpha: 1.0 },
        })
    }

    /// `phi(x) = e^|x| - |x| - 1`.
    pub fn exp_type() -> Self {
        Self { kind: Kind::ExpType }
    }

    /// `phi(x) = (1+|x|) ln(1+|x|) - |x|`, the Young-Fenchel conjugate of
    /// [`OrliczFunction::exp_type`].
    pub fn exp_type_dual() -> Self {
        Self {
            kind: Kind::ExpTypeDual,
        }
    }

    /// Piecewise-linear function through tabulated `(x, phi(x))` knots.
    ///
    /// Requires at least two knots, strictly increasing finite `x` starting
    /// at `(0, 0)`. Values are deliberately not required to be convex or even
    /// monotone: [`validate_n_function`] is the judge of the axioms, so it
    /// must be possible to construct counterexamples.
    pub fn custom(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::domain("custom function needs at least two knots"));
        }
        if points[0] != (0.0, 0.0) {
            return Err(Error::domain("custom function must start at the knot (0, 0)"));
        }
        let mut xs = Vec::with_capacity(points.len());
        let mut ys = Vec::with_capacity(points.len());
        for &(x, y) in points {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::domain("custom knots must be finite"));
            }
            if let Some(&last) = xs.last() {
                if x <= last {
                    return Err(Error::domain(format!(
                        "custom knots must be strictly increasing in x (at x = {x})"
                    )));
                }
            }
            xs.push(x);
            ys.push(y);
        }
        Ok(Self {
            kind: Kind::Custom { xs, ys },
        })
    }

    /// Whether the conjugate has a closed form.
    pub fn has_analytic_conjugate(&self) -> bool {
        !matches!(self.kind, Kind::Custom { .. })
    }

    /// Whether the inverse has a closed form.
    pub fn has_analytic_inverse(&self) -> bool {
        matches!(self.kind, Kind::Power { .. })
    }

    /// Human-readable family name, used in reports.
    pub fn kind_name(&self) -> String {
        match &self.kind {
            Kind::Power { p, alpha } => {
                if *p == 2.0 && *alpha == 1.0 {
                    String::from("quadratic")
                } else if *p == 2.0 && *alpha == 2.0 {
                    String::from("scaled-quadratic")
                } else if *alpha == 1.0 {
                    format!("power(p={p})")
                } else {
                    format!("power(p={p}, alpha={alpha})")
                }
            }
            Kind::ExpType => String::from("exp-type"),
            Kind::ExpTypeDual => String::from("exp-type-dual"),
            Kind::Custom { xs, .. } => format!("custom({} knots)", xs.len()),
        }
    }

    /// `phi(|x|)`; evenness is built in.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::domain(format!("evaluate requires finite x, got {x}")));
        }
        Ok(self.eval_abs(abs(x)))
    }

    fn eval_abs(&self, u: f64) -> f64 {
        match &self.kind {
            Kind::Power { p, alpha } => {
                if *p == 2.0 {
                    alpha * u * u / 2.0
                } else {
                    alpha * powf(u, *p) / p
                }
            }
            Kind::ExpType => exp_m1(u) - u,
            Kind::ExpTypeDual => (1.0 + u) * ln_1p(u) - u,
            Kind::Custom { xs, ys } => {
                let n = xs.len();
                if u >= xs[n - 1] {
                    let slope = (ys[n - 1] - ys[n - 2]) / (xs[n - 1] - xs[n - 2]);
                    return ys[n - 1] + slope * (u - xs[n - 1]);
                }
                // binary search for the segment containing u
                let mut lo = 0usize;
                let mut hi = n - 1;
                while hi - lo > 1 {
                    let mid = (lo + hi) / 2;
                    if xs[mid] <= u {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let w = (u - xs[lo]) / (xs[hi] - xs[lo]);
                ys[lo] + w * (ys[hi] - ys[lo])
            }
        }
    }

    /// Unique `x >= 0` with `phi(x) = y`; closed form where available, else
    /// monotone bisection to relative tolerance [`INVERSE_REL_TOL`].
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if !(y >= 0.0) {
            return Err(Error::domain(format!("inverse requires y >= 0, got {y}")));
        }
        if y == 0.0 {
            return Ok(0.0);
        }
        match &self.kind {
            Kind::Power { p, alpha } => {
                if *p == 2.0 {
                    Ok(sqrt(2.0 * y / alpha))
                } else {
                    Ok(powf(p * y / alpha, 1.0 / p))
                }
            }
            _ => {
                // Bracket by doubling, then bisect. phi is increasing for the
                // built-ins; for non-monotone custom data this returns a root
                // of the first bracket found.
                let mut hi = 1.0;
                while self.eval_abs(hi) < y {
                    hi *= 2.0;
                    if hi > 1e300 {
                        return Err(Error::Divergence(format!(
                            "inverse bracket exceeded 1e300 for y = {y}"
                        )));
                    }
                }
                let mut lo = 0.0;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if self.eval_abs(mid) < y {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if (hi - lo) <= INVERSE_REL_TOL * hi.max(1e-300) {
                        break;
                    }
                }
                Ok(0.5 * (lo + hi))
            }
        }
    }

    /// Derivative of `phi`. Analytic for the built-ins; central difference
    /// with step `1e-6 * max(1, |x|)` for custom tabulations. Odd symmetry
    /// is respected.
    pub fn derivative(&self, x: f64) -> f64 {
        let s = if x < 0.0 { -1.0 } else if x > 0.0 { 1.0 } else { 0.0 };
        let u = abs(x);
        match &self.kind {
            Kind::Power { p, alpha } => {
                if *p == 2.0 {
                    alpha * x
                } else {
                    s * alpha * powf(u, p - 1.0)
                }
            }
            Kind::ExpType => s * exp_m1(u),
            Kind::ExpTypeDual => s * ln_1p(u),
            Kind::Custom { .. } => {
                let h = DERIVATIVE_STEP * u.max(1.0);
                let fp = self.eval_abs(abs(u + h));
                let fm = self.eval_abs(abs(u - h));
                s * (fp - fm) / (2.0 * h)
            }
        }
    }

    /// Inverse of the derivative on `x > 0`, used by the KKT solver. Only
    /// available for the strictly convex built-ins.
    pub(crate) fn derivative_inverse(&self, y: f64) -> Option<f64> {
        debug_assert!(y >= 0.0);
        match &self.kind {
            Kind::Power { p, alpha } => {
                if *p == 2.0 {
                    Some(y / alpha)
                } else {
                    Some(powf(y / alpha, 1.0 / (p - 1.0)))
                }
            }
            Kind::ExpType => Some(ln_1p(y)),
            Kind::ExpTypeDual => Some(exp_m1(y)),
            Kind::Custom { .. } => None,
        }
    }

    /// Whether `phi` is strictly convex on `(0, inf)`.
    pub fn strictly_convex(&self) -> bool {
        !matches!(self.kind, Kind::Custom { .. })
    }

    /// Young-Fenchel transform `phi*(y) = sup_x (xy - phi(x))`.
    ///
    /// Closed form for the built-in families; numerical concave maximization
    /// (bracketing by derivative sign, then golden section) for custom
    /// tabulations, to absolute tolerance [`CONJUGATE_ABS_TOL`].
    pub fn conjugate(&self, y: f64) -> Result<f64> {
        if !y.is_finite() {
            return Err(Error::domain(format!("conjugate requires finite y, got {y}")));
        }
        let u = abs(y);
        match &self.kind {
            Kind::Power { p, alpha } => {
                let q = p / (p - 1.0);
                let alpha_star = powf(*alpha, 1.0 - q);
                if q == 2.0 {
                    Ok(alpha_star * u * u / 2.0)
                } else {
                    Ok(alpha_star * powf(u, q) / q)
                }
            }
            Kind::ExpType => Ok((1.0 + u) * ln_1p(u) - u),
            Kind::ExpTypeDual => Ok(exp_m1(u) - u),
            Kind::Custom { .. } => conjugate_sup(|x| self.eval_abs(x), u),
        }
    }

    /// The conjugate as an [`OrliczFunction`], for families that stay closed
    /// under conjugation: `quadratic` is self-dual, `power(p)` pairs with
    /// `power(q)`, `exp-type` pairs with `exp-type-dual`.
    pub fn conjugate_pair(&self) -> Result<OrliczFunction> {
        match &self.kind {
            Kind::Power { p, alpha } => {
                let q = p / (p - 1.0);
                Ok(OrliczFunction {
                    kind: Kind::Power {
                        p: q,
                        alpha: powf(*alpha, 1.0 - q),
                    },
                })
            }
            Kind::ExpType => Ok(OrliczFunction::exp_type_dual()),
            Kind::ExpTypeDual => Ok(OrliczFunction::exp_type()),
            Kind::Custom { .. } => Err(Error::domain(
                "custom tabulated functions have no closed conjugate; use conjugate() pointwise",
            )),
        }
    }
}

/// Numerical Young-Fenchel transform of an arbitrary even nonnegative `phi`
/// given as a closure on `x >= 0`: `sup_{x>=0} (x|y| - phi(x))`.
///
/// The bracket starts at `[0, 1]` and doubles until the objective turns
/// over, capped at [`CONJUGATE_BRACKET_CAP`]; a still-increasing objective at
/// the cap means the supremum diverges (sub-linear growth of `phi`).
pub fn conjugate_sup(phi: impl Fn(f64) -> f64, y: f64) -> Result<f64> {
    let u = abs(y);
    if u == 0.0 {
        return Ok(0.0);
    }
    let g = |x: f64| x * u - phi(x);
    let mut hi = 1.0;
    let mut g_prev = g(hi);
    loop {
        let next = hi * 2.0;
        if next > CONJUGATE_BRACKET_CAP {
            // Objective still rising at the cap: declare the transform
            // unbounded unless the tail has flattened out numerically.
            let tail_slope = (g(CONJUGATE_BRACKET_CAP) - g(CONJUGATE_BRACKET_CAP / 2.0))
                / (CONJUGATE_BRACKET_CAP / 2.0);
            if tail_slope > 1e-12 {
                return Err(Error::UnboundedConjugate { y });
            }
            hi = CONJUGATE_BRACKET_CAP;
            break;
        }
        let g_next = g(next);
        if g_next < g_prev {
            hi = next;
            break;
        }
        g_prev = g_next;
        hi = next;
    }
    // 100 iterations shrink the bracket by ~1e-21; the value is limited by
    // f64 rounding of the objective long before that
    let (_, value) = golden_max(g, 0.0, hi, 100);
    // sup >= g(0) = 0 always
    Ok(value.max(0.0))
}

/// Result of checking one N-function property on a grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub property: String,
    pub pass: bool,
    /// Description of a violating point, when the check fails.
    pub witness: Option<String>,
}

/// Validation report for the N-function axioms plus the four standard
/// N-function properties (scaling, linear minorant, ratio monotonicity,
/// superadditivity). Failures are report entries, not errors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub function: String,
    pub checks: Vec<PropertyCheck>,
    /// Largest admissible `c` with `phi(x) > c x` for grid points `x > 1`.
    pub largest_c: Option<f64>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, property: &str) -> Option<&PropertyCheck> {
        self.checks.iter().find(|c| c.property == property)
    }
}

/// The grid used by default in validation reports: zero plus a symmetric
/// log-spaced sweep of `[1e-3, 1e3]`.
pub fn standard_validation_grid() -> Vec<f64> {
    let pos = crate::opt::log_grid(1e-3, 1e3, 61);
    let mut grid = Vec::with_capacity(2 * pos.len() + 1);
    for &x in pos.iter().rev() {
        grid.push(-x);
    }
    grid.push(0.0);
    grid.extend_from_slice(&pos);
    grid
}

fn slack(scale: f64) -> f64 {
    1e-9 * scale.max(1.0)
}

/// Check the N-function axioms and the four standard properties on `grid`.
///
/// The vanishing/divergence of `phi(x)/x` is probed at `x = 1e-6` (ratio
/// must be below `1e-3`) and `x = 1e6` (ratio must be above `1e3`).
pub fn validate_n_function(phi: &OrliczFunction, grid: &[f64]) -> Result<ValidationReport> {
    if grid.is_empty() {
        return Err(Error::domain("validation grid must be nonempty"));
    }
    let mut pos: Vec<f64> = grid.iter().copied().filter(|&x| x > 0.0).collect();
    pos.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if pos.is_empty() {
        return Err(Error::domain("validation grid must contain positive points"));
    }

    let mut checks = Vec::new();
    let val = |x: f64| phi.eval_abs(abs(x));

    // even: phi(x) = phi(-x)
    {
        let mut witness = None;
        for &x in grid {
            let (a, b) = (val(x), val(-x));
            if a.is_finite() && b.is_finite() && abs(a - b) > slack(abs(a)) {
                witness = Some(format!("phi({x}) = {a} but phi({}) = {b}", -x));
                break;
            }
        }
        checks.push(PropertyCheck {
            property: String::from("even"),
            pass: witness.is_none(),
            witness,
        });
    }

    // phi(0) = 0
    {
        let v0 = val(0.0);
        let pass = v0 == 0.0;
        checks.push(PropertyCheck {
            property: String::from("zero-at-zero"),
            pass,
            witness: if pass { None } else { Some(format!("phi(0) = {v0}")) },
        });
    }

    // strictly increasing on x > 0
    {
        let mut witness = None;
        for w in pos.windows(2) {
            let (a, b) = (val(w[0]), val(w[1]));
            if a.is_finite() && b.is_finite() && b <= a {
                witness = Some(format!(
                    "phi({}) = {a} >= phi({}) = {b} but x increased",
                    w[0], w[1]
                ));
                break;
            }
        }
        checks.push(PropertyCheck {
            property: String::from("strictly-increasing"),
            pass: witness.is_none(),
            witness,
        });
    }

    // phi(x)/x -> 0 at 0 and -> inf at infinity, probed at 1e-6 / 1e6
    {
        let r0 = val(1e-6) / 1e-6;
        let pass = r0 <= 1e-3;
        checks.push(PropertyCheck {
            property: String::from("ratio-vanishes-at-zero"),
            pass,
            witness: if pass {
                None
            } else {
                Some(format!("phi(1e-6)/1e-6 = {r0} > 1e-3"))
            },
        });
        let r1 = val(1e6) / 1e6;
        let pass = r1 >= 1e3;
        checks.push(PropertyCheck {
            property: String::from("ratio-diverges-at-infinity"),
            pass,
            witness: if pass {
                None
            } else {
                Some(format!("phi(1e6)/1e6 = {r1} < 1e3"))
            },
        });
    }

    // midpoint convexity on all grid pairs
    {
        let mut witness = None;
        'outer: for (i, &x) in grid.iter().enumerate() {
            for &y in grid.iter().skip(i + 1) {
                let m = 0.5 * (x + y);
                let (fx, fy, fm) = (val(x), val(y), val(m));
                if !fx.is_finite() || !fy.is_finite() || !fm.is_finite() {
                    continue;
                }
                let rhs = 0.5 * (fx + fy);
                if fm > rhs + slack(abs(rhs)) {
                    witness = Some(format!(
                        "phi(({x} + {y})/2) = {fm} > (phi({x}) + phi({y}))/2 = {rhs}"
                    ));
                    break 'outer;
                }
            }
        }
        checks.push(PropertyCheck {
            property: String::from("midpoint-convex"),
            pass: witness.is_none(),
            witness,
        });
    }

    // beta-scaling: phi(beta x) >= beta phi(x) for beta > 1
    {
        let mut witness = None;
        'outer: for &beta in &[1.5, 2.0, 10.0] {
            for &x in grid {
                let (lhs, rhs) = (val(beta * x), beta * val(x));
                if !rhs.is_finite() {
                    continue;
                }
                if lhs < rhs - slack(abs(rhs)) {
                    witness = Some(format!("phi({beta} * {x}) = {lhs} < {beta} * phi({x}) = {rhs}"));
                    break 'outer;
                }
            }
        }
        checks.push(PropertyCheck {
            property: String::from("beta-scaling"),
            pass: witness.is_none(),
            witness,
        });
    }

    // linear minorant: exists c > 0 with phi(x) > c x for x > 1
    let mut largest_c: Option<f64> = None;
    {
        let mut c_min = f64::INFINITY;
        let mut any = false;
        for &x in pos.iter().filter(|&&x| x > 1.0) {
            let v = val(x);
            if v.is_finite() {
                c_min = c_min.min(v / x);
            }
            any = true;
        }
        let pass = any && c_min > 0.0;
        if any && c_min.is_finite() {
            largest_c = Some(c_min);
        }
        checks.push(PropertyCheck {
            property: String::from("linear-minorant"),
            pass,
            witness: if pass {
                None
            } else if any {
                Some(format!("min phi(x)/x over grid x > 1 is {c_min}"))
            } else {
                Some(String::from("grid has no points x > 1"))
            },
        });
    }

    // phi(x)/x nondecreasing on x > 0
    {
        let mut witness = None;
        for w in pos.windows(2) {
            let (ra, rb) = (val(w[0]) / w[0], val(w[1]) / w[1]);
            if ra.is_finite() && rb.is_finite() && rb < ra - slack(abs(ra)) {
                witness = Some(format!(
                    "phi(x)/x drops from {ra} at x = {} to {rb} at x = {}",
                    w[0], w[1]
                ));
                break;
            }
        }
        checks.push(PropertyCheck {
            property: String::from("ratio-nondecreasing"),
            pass: witness.is_none(),
            witness,
        });
    }

    // superadditivity: phi(x) + phi(y) <= phi(|x| + |y|)
    {
        let mut witness = None;
        'outer: for (i, &x) in pos.iter().enumerate() {
            for &y in pos.iter().skip(i) {
                let lhs = val(x) + val(y);
                let rhs = val(x + y);
                if !lhs.is_finite() {
                    continue;
                }
                if rhs < lhs - slack(abs(lhs)) {
                    witness = Some(format!(
                        "phi({x}) + phi({y}) = {lhs} > phi({}) = {rhs}",
                        x + y
                    ));
                    break 'outer;
                }
            }
        }
        checks.push(PropertyCheck {
            property: String::from("superadditive"),
            pass: witness.is_none(),
            witness,
        });
    }

    Ok(ValidationReport {
        function: phi.kind_name(),
        checks,
        largest_c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::E;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!(abs(a - b) <= tol, "expected {b}, got {a} (tol {tol})");
    }

    #[test]
    fn evaluate_closed_forms() {
        assert_close(OrliczFunction::quadratic().evaluate(2.0).unwrap(), 2.0, 0.0);
        assert_close(
            OrliczFunction::power(3.0).unwrap().evaluate(1.0).unwrap(),
            1.0 / 3.0,
            1e-15,
        );
        assert_close(OrliczFunction::exp_type().evaluate(1.0).unwrap(), E - 2.0, 1e-15);
        assert_close(OrliczFunction::scaled_quadratic().evaluate(3.0).unwrap(), 9.0, 0.0);
    }

    #[test]
    fn evaluate_is_even() {
        for phi in [
            OrliczFunction::quadratic(),
            OrliczFunction::power(2.5).unwrap(),
            OrliczFunction::exp_type(),
            OrliczFunction::exp_type_dual(),
        ] {
            for x in [0.0, 0.3, 1.0, 7.5] {
                assert_eq!(phi.evaluate(x).unwrap(), phi.evaluate(-x).unwrap());
            }
        }
    }

    #[test]
    fn evaluate_rejects_non_finite() {
        assert!(OrliczFunction::quadratic().evaluate(f64::NAN).is_err());
        assert!(OrliczFunction::quadratic().evaluate(f64::INFINITY).is_err());
    }

    #[test]
    fn inverse_closed_and_bisected() {
        assert_close(OrliczFunction::quadratic().inverse(2.0).unwrap(), 2.0, 1e-14);
        for phi in [
            OrliczFunction::quadratic(),
            OrliczFunction::scaled_quadratic(),
            OrliczFunction::power(3.0).unwrap(),
            OrliczFunction::exp_type(),
        ] {
            assert_eq!(phi.inverse(0.0).unwrap(), 0.0);
        }
        // exp-type: phi(1) = e - 2, so inverse(e - 2) = 1
        let x = OrliczFunction::exp_type().inverse(E - 2.0).unwrap();
        assert_close(x, 1.0, 1e-10);
        let back = OrliczFunction::exp_type().evaluate(x).unwrap();
        assert_close(back, E - 2.0, 1e-10);
        assert!(OrliczFunction::quadratic().inverse(-1.0).is_err());
    }

    #[test]
    fn inverse_of_evaluate_is_identity() {
        for phi in [
            OrliczFunction::quadratic(),
            OrliczFunction::scaled_quadratic(),
            OrliczFunction::power(3.0).unwrap(),
            OrliczFunction::power(1.5).unwrap(),
            OrliczFunction::exp_type(),
            OrliczFunction::exp_type_dual(),
        ] {
            let mut x = 0.0;
            while x <= 100.0 {
                let y = phi.evaluate(x).unwrap();
                let back = phi.inverse(y).unwrap();
                assert!(
                    abs(back - x) <= 1e-9 * x.max(1e-12),
                    "{}: inverse(phi({x})) = {back}",
                    phi.kind_name()
                );
                x += 2.5;
            }
        }
    }

    #[test]
    fn derivative_closed_forms() {
        assert_close(OrliczFunction::quadratic().derivative(3.0), 3.0, 0.0);
        assert_close(OrliczFunction::power(3.0).unwrap().derivative(2.0), 4.0, 1e-14);
        assert_close(OrliczFunction::exp_type().derivative(1.0), E - 1.0, 1e-14);
        // odd symmetry
        assert_close(OrliczFunction::exp_type().derivative(-1.0), -(E - 1.0), 1e-14);
        assert_eq!(OrliczFunction::power(3.0).unwrap().derivative(0.0), 0.0);
    }

    #[test]
    fn derivative_matches_central_differences() {
        for phi in [
            OrliczFunction::quadratic(),
            OrliczFunction::scaled_quadratic(),
            OrliczFunction::power(3.0).unwrap(),
            OrliczFunction::exp_type(),
            OrliczFunction::exp_type_dual(),
        ] {
            let mut x: f64 = 0.1;
            while x <= 10.0 {
                let h = 1e-6 * x.max(1.0);
                let fd = (phi.evaluate(x + h).unwrap() - phi.evaluate(x - h).unwrap()) / (2.0 * h);
                let d = phi.derivative(x);
                assert!(
                    abs(d - fd) <= 1e-5 * abs(fd).max(1e-8),
                    "{} at x = {x}: analytic {d}, fd {fd}",
                    phi.kind_name()
                );
                x += 0.1;
            }
        }
    }

    #[test]
    fn conjugate_closed_forms() {
        // quadratic is self-dual
        assert_close(OrliczFunction::quadratic().conjugate(2.0).unwrap(), 2.0, 1e-14);
        // scaled-quadratic x^2 has conjugate y^2/4
        assert_close(OrliczFunction::scaled_quadratic().conjugate(2.0).unwrap(), 1.0, 1e-14);
        // exp-type at y = e - 1: (1 + y) ln(1 + y) - y = e - (e - 1) = 1
        assert_close(OrliczFunction::exp_type().conjugate(E - 1.0).unwrap(), 1.0, 1e-12);
        // evenness in y
        assert_eq!(
            OrliczFunction::power(3.0).unwrap().conjugate(-1.0).unwrap(),
            OrliczFunction::power(3.0).unwrap().conjugate(1.0).unwrap()
        );
    }

    #[test]
    fn conjugate_power_matches_grid_oracle() {
        // sup_x (x - |x|^3/3) over x in [0, 10], step 1e-5
        let phi = OrliczFunction::power(3.0).unwrap();
        let mut best = 0.0f64;
        let mut x = 0.0;
        while x <= 10.0 {
            best = best.max(x - x * x * x / 3.0);
            x += 1e-5;
        }
        assert_close(best, 2.0 / 3.0, 1e-5);
        assert_close(phi.conjugate(1.0).unwrap(), 2.0 / 3.0, 1e-12);
    }

    #[test]
    fn conjugate_exp_type_matches_grid_oracle() {
        let phi = OrliczFunction::exp_type();
        let y = E - 1.0;
        let mut best = 0.0f64;
        let mut x = 0.0;
        while x <= 10.0 {
            best = best.max(x * y - (exp_m1(x) - x));
            x += 1e-5;
        }
        assert_close(phi.conjugate(y).unwrap(), best, 1e-8);
    }

    #[test]
    fn conjugate_sup_agrees_with_closed_forms() {
        for phi in [
            OrliczFunction::quadratic(),
            OrliczFunction::power(3.0).unwrap(),
            OrliczFunction::exp_type(),
        ] {
            for y in [0.0, 0.5, 1.0, 3.0, 7.0] {
                let numeric = conjugate_sup(|x| phi.eval_abs(x), y).unwrap();
                let closed = phi.conjugate(y).unwrap();
                assert!(
                    abs(numeric - closed) <= 1e-8 * closed.max(1.0),
                    "{} at y = {y}: numeric {numeric}, closed {closed}",
                    phi.kind_name()
                );
            }
        }
    }

    #[test]
    fn unbounded_conjugate_of_sublinear_custom() {
        // phi(x) = x for x >= 0: conjugate diverges for y > 1
        let phi = OrliczFunction::custom(&[(0.0, 0.0), (1.0, 1.0), (1000.0, 1000.0)]).unwrap();
        match phi.conjugate(2.0) {
            Err(Error::UnboundedConjugate { .. }) => {}
            other => panic!("expected UnboundedConjugate, got {other:?}"),
        }
        // ... but stays finite for y below the tail slope
        assert!(phi.conjugate(0.5).unwrap().is_finite());
    }

    #[test]
    fn fenchel_young_inequality_on_grid() {
        for phi in [
            OrliczFunction::quadratic(),
            OrliczFunction::scaled_quadratic(),
            OrliczFunction::power(3.0).unwrap(),
            OrliczFunction::exp_type(),
        ] {
            let grid = crate::opt::lin_grid(-8.0, 8.0, 33);
            for &x in &grid {
                for &y in &grid {
                    let lhs = x * y;
                    let rhs = phi.evaluate(x).unwrap() + phi.conjugate(y).unwrap();
                    assert!(
                        rhs - lhs >= -1e-9,
                        "{}: Fenchel-Young violated at ({x}, {y})",
                        phi.kind_name()
                    );
                }
            }
        }
    }

    #[test]
    fn double_conjugation_recovers_phi() {
        // Numerical phi** vs phi on a coarse grid (the acceptance suite runs
        // the fine 0.01-step version).
        for phi in [
            OrliczFunction::quadratic(),
            OrliczFunction::scaled_quadratic(),
            OrliczFunction::power(3.0).unwrap(),
            OrliczFunction::exp_type(),
        ] {
            let mut x = -10.0;
            while x <= 10.0 {
                let xx = abs(x);
                let double = conjugate_sup(|u| conjugate_sup(|w| phi.eval_abs(w), u).unwrap(), xx)
                    .unwrap();
                let direct = phi.evaluate(x).unwrap();
                assert!(
                    abs(double - direct) <= 1e-6,
                    "{} at x = {x}: phi** = {double}, phi = {direct}",
                    phi.kind_name()
                );
                x += 0.5;
            }
        }
    }

    #[test]
    fn custom_interpolates_and_extrapolates() {
        let phi = OrliczFunction::custom(&[(0.0, 0.0), (1.0, 0.5), (2.0, 2.0)]).unwrap();
        assert_close(phi.evaluate(0.5).unwrap(), 0.25, 1e-15);
        assert_close(phi.evaluate(1.5).unwrap(), 1.25, 1e-15);
        assert_close(phi.evaluate(-1.5).unwrap(), 1.25, 1e-15);
        // linear extrapolation with the last slope (1.5 per unit)
        assert_close(phi.evaluate(3.0).unwrap(), 3.5, 1e-15);
    }

    #[test]
    fn custom_constructor_rejects_bad_knots() {
        assert!(OrliczFunction::custom(&[(0.0, 0.0)]).is_err());
        assert!(OrliczFunction::custom(&[(1.0, 1.0), (2.0, 2.0)]).is_err());
        assert!(OrliczFunction::custom(&[(0.0, 0.0), (0.0, 1.0)]).is_err());
        assert!(OrliczFunction::custom(&[(0.0, 0.0), (1.0, f64::NAN)]).is_err());
    }

    #[test]
    fn validator_passes_builtins() {
        let grid = standard_validation_grid();
        for phi in [
            OrliczFunction::quadratic(),
            OrliczFunction::scaled_quadratic(),
            OrliczFunction::power(3.0).unwrap(),
            OrliczFunction::exp_type(),
        ] {
            let report = validate_n_function(&phi, &grid).unwrap();
            assert!(
                report.all_pass(),
                "{} failed: {:?}",
                phi.kind_name(),
                report.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>()
            );
            assert!(report.largest_c.unwrap() > 0.0);
        }
    }

    #[test]
    fn validator_flags_linear_growth() {
        let knots: Vec<(f64, f64)> = (0..=100).map(|i| (i as f64 * 10.0, i as f64 * 10.0)).collect();
        let phi = OrliczFunction::custom(&knots).unwrap();
        let report = validate_n_function(&phi, &standard_validation_grid()).unwrap();
        let check = report.check("ratio-diverges-at-infinity").unwrap();
        assert!(!check.pass, "linear phi must fail the growth axiom");
    }

    #[test]
    fn validator_flags_non_convex_custom() {
        // phi(x) = x^2 (1.5 + sin x) tabulated on [0, 20]
        let knots: Vec<(f64, f64)> = (0..=400)
            .map(|i| {
                let x = i as f64 * 0.05;
                (x, x * x * (1.5 + libm::sin(x)))
            })
            .collect();
        let phi = OrliczFunction::custom(&knots).unwrap();
        let grid = crate::opt::lin_grid(0.0, 20.0, 81);
        let report = validate_n_function(&phi, &grid).unwrap();
        let check = report.check("midpoint-convex").unwrap();
        assert!(!check.pass);
        assert!(check.witness.is_some(), "failure must carry a witnessing triple");
    }

    #[test]
    fn conjugate_pair_round_trips() {
        let p3 = OrliczFunction::power(3.0).unwrap();
        let q = p3.conjugate_pair().unwrap();
        assert_eq!(q.kind_name(), "power(p=1.5)");
        let back = q.conjugate_pair().unwrap();
        for x in [0.0, 0.7, 2.0, 5.0] {
            assert_close(back.evaluate(x).unwrap(), p3.evaluate(x).unwrap(), 1e-12);
        }
        assert_eq!(
            OrliczFunction::exp_type().conjugate_pair().unwrap().kind_name(),
            "exp-type-dual"
        );
    }

    #[test]
    fn validation_grid_preconditions() {
        assert!(validate_n_function(&OrliczFunction::quadratic(), &[]).is_err());
        assert!(validate_n_function(&OrliczFunction::quadratic(), &[-1.0, 0.0]).is_err());
    }
}
