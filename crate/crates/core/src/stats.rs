//! Exact binomial statistics for campaign verdicts: the regularized
//! incomplete beta function, Clopper-Pearson intervals, and binomial tail
//! p-values.

use crate::fmath::{abs, exp, ln, lgamma};

fn ln_beta(a: f64, b: f64) -> f64 {
    lgamma(a) + lgamma(b) - lgamma(a + b)
}

/// Continued-fraction expansion of the incomplete beta (modified Lentz).
fn betacf(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 300;
    const EPS: f64 = 3e-16;
    const FPMIN: f64 = 1e-300;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if abs(d) < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if abs(d) < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if abs(c) < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if abs(d) < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if abs(c) < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if abs(del - 1.0) < EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn betainc_reg(a: f64, b: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && b > 0.0);
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let front = exp(a * ln(x) + b * ln(1.0 - x) - ln_beta(a, b));
    if x < (a + 1.0) / (a + b + 2.0) {
        front * betacf(a, b, x) / a
    } else {
        1.0 - front * betacf(b, a, 1.0 - x) / b
    }
}

/// Inverse of `I_x(a, b)` in `x`, by bisection (monotone in x).
pub fn betainc_reg_inv(a: f64, b: f64, p: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p));
    if p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if betainc_reg(a, b, mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Exact two-sided Clopper-Pearson interval for `k` successes in `n` trials
/// at total miscoverage `alpha`.
pub fn clopper_pearson(k: u64, n: u64, alpha: f64) -> (f64, f64) {
    debug_assert!(k <= n && n > 0);
    let (kf, nf) = (k as f64, n as f64);
    let lo = if k == 0 {
        0.0
    } else {
        betainc_reg_inv(kf, nf - kf + 1.0, alpha / 2.0)
    };
    let hi = if k == n {
        1.0
    } else {
        betainc_reg_inv(kf + 1.0, nf - kf, 1.0 - alpha / 2.0)
    };
    (lo, hi)
}

/// Upper-tail binomial p-value `P(Bin(n, p) >= k)`.
pub fn binomial_upper_pvalue(k: u64, n: u64, p: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if k > n {
        return 0.0;
    }
    let p = p.clamp(0.0, 1.0);
    betainc_reg(k as f64, (n - k) as f64 + 1.0, p)
}

/// Sample mean and its standard error.
pub fn mean_and_se(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    if samples.is_empty() {
        return (0.0, 0.0);
    }
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, crate::fmath::sqrt(var / n))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values computed with scipy.special (betainc / betaincinv).
    #[test]
    fn betainc_matches_reference() {
        assert!(abs(betainc_reg(2.0, 3.0, 0.4) - 0.5247999999999999) < 1e-12);
        assert!(abs(betainc_reg(10.5, 3.25, 0.9) - 0.9068511636671819) < 1e-12);
        assert!(abs(betainc_reg(0.5, 0.5, 0.25) - 0.33333333333333337) < 1e-12);
    }

    #[test]
    fn betainc_inverse_round_trips() {
        for (a, b) in [(2.0, 3.0), (13.0, 988.0), (1.0, 1.0), (0.5, 4.5)] {
            for p in [0.001, 0.1, 0.5, 0.9, 0.999] {
                let x = betainc_reg_inv(a, b, p);
                assert!(abs(betainc_reg(a, b, x) - p) < 1e-10, "a={a} b={b} p={p}");
            }
        }
    }

    #[test]
    fn clopper_pearson_matches_reference() {
        let (lo, hi) = clopper_pearson(13, 1000, 0.0027);
        assert!(abs(lo - 0.004788885283928784) < 1e-9, "lo = {lo}");
        assert!(abs(hi - 0.02770610601563327) < 1e-9, "hi = {hi}");

        let (lo, hi) = clopper_pearson(0, 500, 0.0027);
        assert_eq!(lo, 0.0);
        assert!(abs(hi - 0.013128362672968213) < 1e-9);

        let (lo, hi) = clopper_pearson(500, 500, 0.0027);
        assert!(abs(lo - 0.9868716373270319) < 1e-9);
        assert_eq!(hi, 1.0);

        let (lo, hi) = clopper_pearson(5, 10, 0.05);
        assert!(abs(lo - 0.18708602844739855) < 1e-9);
        assert!(abs(hi - 0.8129139715526015) < 1e-9);

        // large-n case used by the dominance campaigns
        let (lo, hi) = clopper_pearson(133_000, 1_000_000, 0.0027);
        assert!(abs(lo - 0.13198311061816526) < 1e-9);
        assert!(abs(hi - 0.1340215412058207) < 1e-9);
    }

    #[test]
    fn binomial_pvalue_matches_reference() {
        assert!(abs(binomial_upper_pvalue(3, 10, 0.5) - 0.9453125) < 1e-12);
        assert!(abs(binomial_upper_pvalue(120, 1000, 0.1) - 0.021996144965794422) < 1e-12);
        assert_eq!(binomial_upper_pvalue(0, 10, 0.3), 1.0);
        assert_eq!(binomial_upper_pvalue(11, 10, 0.3), 0.0);
    }

    #[test]
    fn interval_brackets_the_estimate() {
        for (k, n) in [(1u64, 50u64), (25, 50), (49, 50)] {
            let (lo, hi) = clopper_pearson(k, n, 0.0027);
            let p_hat = k as f64 / n as f64;
            assert!(lo <= p_hat && p_hat <= hi);
            assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
        }
    }
}
