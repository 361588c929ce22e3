//! Shapiro-Wilk W test using Royston's (1995) approximation for the
//! coefficients and the p-value (algorithm AS R94), valid for 3 <= n <= 5000.

use statrs::distribution::{ContinuousCDF, Normal};

use super::{check_alpha, NormalityResult};
use crate::error::{Error, Result};

pub const MIN_N: usize = 3;
pub const MAX_N: usize = 5000;

// Polynomial coefficients, lowest order first.
const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056];
const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];
const C3: [f64; 4] = [0.5440, -0.39978, 0.025054, -6.714e-4];
const C4: [f64; 4] = [1.3822, -0.77857, 0.062767, -0.0020322];
const C5: [f64; 4] = [-1.5861, -0.31082, -0.083751, 0.0038915];
const C6: [f64; 3] = [-0.4803, -0.082676, 0.0030302];
const G: [f64; 2] = [-2.273, 0.459];

fn poly(coefficients: &[f64], x: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn standard_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal")
}

/// Royston's approximate coefficients for the upper half of the order
/// statistics, largest first. `a[i]` weights `x(n-1-i) - x(i)`.
pub fn coefficients(n: usize) -> Vec<f64> {
    let half = n / 2;
    if n == 3 {
        return vec![std::f64::consts::FRAC_1_SQRT_2];
    }
    let normal = standard_normal();
    let an25 = n as f64 + 0.25;
    // Expected normal order statistics m(n-i), positive for the upper half.
    let m: Vec<f64> = (0..half)
        .map(|i| -normal.inverse_cdf((i as f64 + 1.0 - 0.375) / an25))
        .collect();
    let summ2 = 2.0 * m.iter().map(|v| v * v).sum::<f64>();
    let ssumm2 = summ2.sqrt();
    let rsn = 1.0 / (n as f64).sqrt();

    let mut a = vec![0.0; half];
    a[0] = poly(&C1, rsn) + m[0] / ssumm2;
    let (first_scaled, fac) = if n > 5 {
        a[1] = poly(&C2, rsn) + m[1] / ssumm2;
        let num = summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1];
        let den = 1.0 - 2.0 * a[0] * a[0] - 2.0 * a[1] * a[1];
        (2, (num / den).sqrt())
    } else {
        let num = summ2 - 2.0 * m[0] * m[0];
        let den = 1.0 - 2.0 * a[0] * a[0];
        (1, (num / den).sqrt())
    };
    for i in first_scaled..half {
        a[i] = m[i] / fac;
    }
    a
}

/// Runs the Shapiro-Wilk test on `x`. Non-finite values are rejected.
pub fn shapiro_wilk(x: &[f64], alpha: f64) -> Result<NormalityResult> {
    check_alpha(alpha)?;
    let n = x.len();
    if !(MIN_N..=MAX_N).contains(&n) {
        return Err(Error::Argument(format!(
            "Shapiro-Wilk needs {MIN_N} <= n <= {MAX_N}, got n = {n}"
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Argument("sample contains non-finite values".into()));
    }
    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    let range = sorted[n - 1] - sorted[0];
    if range <= 0.0 {
        return Err(Error::Degenerate("sample has zero variance".into()));
    }

    // Scale by the range and centre so the statistic is affine invariant.
    let mean = sorted.iter().map(|v| v / range).sum::<f64>() / n as f64;
    let z: Vec<f64> = sorted.iter().map(|v| v / range - mean).collect();
    let a = coefficients(n);
    let numerator: f64 = a
        .iter()
        .enumerate()
        .map(|(i, ai)| ai * (z[n - 1 - i] - z[i]))
        .sum();
    let ss: f64 = z.iter().map(|v| v * v).sum();
    let w = (numerator * numerator / ss).min(1.0);
    let p = p_value(w, n);
    Ok(NormalityResult {
        w,
        p,
        n,
        normal_at_alpha: p > alpha,
    })
}

fn p_value(w: f64, n: usize) -> f64 {
    if n == 3 {
        // Exact distribution for n = 3; W cannot fall below 3/4.
        let pi6 = 6.0 / std::f64::consts::PI;
        let w = w.max(0.75);
        return (1.0 - pi6 * w.sqrt().acos()).clamp(0.0, 1.0);
    }
    let w1 = 1.0 - w;
    if w1 <= 0.0 {
        return 1.0;
    }
    let y = w1.ln();
    let an = n as f64;
    let normal = standard_normal();
    let p = if n <= 11 {
        let gamma = poly(&G, an);
        if y >= gamma {
            return 0.0;
        }
        let y = -(gamma - y).ln();
        let m = poly(&C3, an);
        let s = poly(&C4, an).exp();
        normal.sf((y - m) / s)
    } else {
        let ln_n = an.ln();
        let m = poly(&C5, ln_n);
        let s = poly(&C6, ln_n).exp();
        normal.sf((y - m) / s)
    };
    p.clamp(0.0, 1.0)
}
