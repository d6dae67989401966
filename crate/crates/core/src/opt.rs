//! One-dimensional search primitives: golden-section refinement over grids.
//! Everything here assumes exact, side-effect-free objectives.

/// Inverse golden ratio.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section maximization of a unimodal `f` on `[lo, hi]`.
///
/// Returns `(argmax, max)`. 120 iterations shrink the bracket by a factor
/// ~1e-25, so the result is limited by f64 evaluation noise, not the bracket.
pub fn golden_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, iters: usize) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - (b - a) * INV_PHI;
    let mut d = a + (b - a) * INV_PHI;
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * INV_PHI;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * INV_PHI;
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    // Guard against flat plateaus: return the best point actually seen.
    if fc >= fx && fc >= fd {
        (c, fc)
    } else if fd >= fx {
        (d, fd)
    } else {
        (x, fx)
    }
}

/// Golden-section minimization of a unimodal `f` on `[lo, hi]`.
pub fn golden_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, iters: usize) -> (f64, f64) {
    let (x, fx) = golden_max(|u| -f(u), lo, hi, iters);
    (x, -fx)
}

/// Maximize `f` over a grid, then refine with golden section around the best
/// grid cell. The grid guarantees the refinement bracket contains the
/// global maximizer of a piecewise-unimodal objective.
pub fn grid_then_golden_max(f: impl Fn(f64) -> f64, grid: &[f64]) -> (f64, f64) {
    debug_assert!(!grid.is_empty());
    let mut best_i = 0;
    let mut best = f(grid[0]);
    for (i, &x) in grid.iter().enumerate().skip(1) {
        let v = f(x);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let lo = if best_i == 0 { grid[0] } else { grid[best_i - 1] };
    let hi = if best_i + 1 == grid.len() {
        grid[best_i]
    } else {
        grid[best_i + 1]
    };
    if lo == hi {
        return (grid[best_i], best);
    }
    let (x, fx) = golden_max(&f, lo, hi, 120);
    if fx >= best {
        (x, fx)
    } else {
        (grid[best_i], best)
    }
}

/// Log-spaced grid with `n` points from `lo` to `hi` (both positive).
pub fn log_grid(lo: f64, hi: f64, n: usize) -> alloc::vec::Vec<f64> {
    debug_assert!(lo > 0.0 && hi > lo && n >= 2);
    let llo = crate::fmath::ln(lo);
    let lhi = crate::fmath::ln(hi);
    (0..n)
        .map(|i| crate::fmath::exp(llo + (lhi - llo) * i as f64 / (n - 1) as f64))
        .collect()
}

/// Uniform grid with `n` points from `lo` to `hi`.
pub fn lin_grid(lo: f64, hi: f64, n: usize) -> alloc::vec::Vec<f64> {
    debug_assert!(n >= 2);
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fmath::abs;

    #[test]
    fn golden_finds_parabola_peak() {
        // the argmax of a smooth peak is only locatable to about sqrt(eps)
        // by value comparison; the value itself is machine-exact
        let (x, fx) = golden_max(|x| -(x - 1.3) * (x - 1.3) + 2.0, -10.0, 10.0, 120);
        assert!(abs(x - 1.3) < 1e-6);
        assert!(abs(fx - 2.0) < 1e-12);
    }

    #[test]
    fn grid_refinement_beats_grid() {
        let grid = lin_grid(0.0, 10.0, 11);
        let (x, fx) = grid_then_golden_max(|x| -(x - 3.7) * (x - 3.7), &grid);
        assert!(abs(x - 3.7) < 1e-6);
        assert!(fx > -1e-12);
    }
}
