//! Kendall's tau-b with tie correction.
//!
//! Tau is computed in O(n log n) by sorting on `x` and counting the
//! exchanges a merge sort needs to order `y` (Knight's method). Two-sided
//! p-values are exact for small samples and use the tie-corrected normal
//! approximation with continuity correction otherwise.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use super::{check_alpha, classify_strength, is_significant, CorrelationResult};
use crate::error::{Error, Result};

/// Largest sample for which the p-value comes from the exact permutation distribution.
pub const EXACT_MAX_N: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PValueMethod {
    Exact,
    Normal,
}

/// Pair counts behind a tau-b value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCounts {
    pub n: usize,
    /// Concordant minus discordant pairs.
    pub s: i64,
    /// All pairs, n(n-1)/2.
    pub total: i64,
    /// Pairs tied in x (including pairs tied in both).
    pub tied_x: i64,
    /// Pairs tied in y (including pairs tied in both).
    pub tied_y: i64,
}

impl PairCounts {
    pub fn tau_b(&self) -> f64 {
        let denom = ((self.total - self.tied_x) as f64 * (self.total - self.tied_y) as f64).sqrt();
        (self.s as f64 / denom).clamp(-1.0, 1.0)
    }
}

// Total order in which -0.0 and 0.0 compare equal, matching `==` used for tie detection.
fn cmp(a: f64, b: f64) -> Ordering {
    if a == b {
        Ordering::Equal
    } else {
        a.total_cmp(&b)
    }
}

/// Pairs sharing a value within each run of equal elements, given a comparison-sorted slice.
fn tied_pairs<T: Copy>(sorted: &[T], same: impl Fn(T, T) -> bool) -> i64 {
    let mut pairs = 0i64;
    let mut run = 1i64;
    for w in sorted.windows(2) {
        if same(w[0], w[1]) {
            run += 1;
        } else {
            pairs += run * (run - 1) / 2;
            run = 1;
        }
    }
    pairs + run * (run - 1) / 2
}

/// Merge sort on `values`, returning the number of inversions removed.
fn sort_counting_swaps(values: &mut [f64], scratch: &mut [f64]) -> i64 {
    let n = values.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = sort_counting_swaps(&mut values[..mid], &mut scratch[..mid])
        + sort_counting_swaps(&mut values[mid..], &mut scratch[mid..]);
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if cmp(values[j], values[i]) == Ordering::Less {
            scratch[k] = values[j];
            swaps += (mid - i) as i64;
            j += 1;
        } else {
            scratch[k] = values[i];
            i += 1;
        }
        k += 1;
    }
    scratch[k..k + (mid - i)].copy_from_slice(&values[i..mid]);
    k += mid - i;
    scratch[k..k + (n - j)].copy_from_slice(&values[j..n]);
    values.copy_from_slice(&scratch[..n]);
    swaps
}

pub fn pair_counts(x: &[f64], y: &[f64]) -> PairCounts {
    let n = x.len();
    let mut pairs: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
    pairs.sort_by(|a, b| cmp(a.0, b.0).then_with(|| cmp(a.1, b.1)));

    let total = (n as i64) * (n as i64 - 1) / 2;
    let tied_x = tied_pairs(&pairs, |a, b| a.0 == b.0);
    let tied_xy = tied_pairs(&pairs, |a, b| a == b);

    let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let mut scratch = vec![0.0; n];
    let swaps = sort_counting_swaps(&mut ys, &mut scratch);
    let tied_y = tied_pairs(&ys, |a, b| a == b);

    PairCounts {
        n,
        s: total - tied_x - tied_y + tied_xy - 2 * swaps,
        total,
        tied_x,
        tied_y,
    }
}

fn validate(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::Argument(format!(
            "length mismatch: x has {} values, y has {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "Kendall's tau needs n >= 2, got n = {}",
            x.len()
        )));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::Argument("non-finite value".into()));
    }
    for (name, v) in [("x", x), ("y", y)] {
        if v.iter().all(|&e| e == v[0]) {
            return Err(Error::Degenerate(format!("all {name} values are tied")));
        }
    }
    Ok(())
}

/// Sizes of each group of equal values.
fn tie_groups(values: &[f64]) -> Vec<u64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| cmp(*a, *b));
    let mut groups = Vec::new();
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            groups.push(run);
            run = 1;
        }
    }
    groups.push(run);
    groups
}

/// Variance of S under independence, corrected for ties in both variables.
pub fn s_variance(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let gx = tie_groups(x);
    let gy = tie_groups(y);
    let sum = |g: &[u64], f: &dyn Fn(f64) -> f64| g.iter().map(|&t| f(t as f64)).sum::<f64>();
    let v0 = n * (n - 1.0) * (2.0 * n + 5.0);
    let vt = sum(&gx, &|t| t * (t - 1.0) * (2.0 * t + 5.0));
    let vu = sum(&gy, &|t| t * (t - 1.0) * (2.0 * t + 5.0));
    let t2 = sum(&gx, &|t| t * (t - 1.0));
    let u2 = sum(&gy, &|t| t * (t - 1.0));
    let t3 = sum(&gx, &|t| t * (t - 1.0) * (t - 2.0));
    let u3 = sum(&gy, &|t| t * (t - 1.0) * (t - 2.0));
    let mut var = (v0 - vt - vu) / 18.0 + t2 * u2 / (2.0 * n * (n - 1.0));
    if n > 2.0 {
        var += t3 * u3 / (9.0 * n * (n - 1.0) * (n - 2.0));
    }
    var
}

fn normal_p(s: i64, var: f64) -> f64 {
    if s == 0 || var <= 0.0 {
        return 1.0;
    }
    let z = (s.abs() as f64 - 1.0) / var.sqrt();
    erfc(z / std::f64::consts::SQRT_2).clamp(0.0, 1.0)
}

/// Number of permutations of `n` distinct items by inversion count.
fn inversion_counts(n: usize) -> Vec<u64> {
    let mut counts = vec![1u64];
    for k in 1..n {
        // Inserting the (k+1)-th element adds 0..=k inversions.
        let mut next = vec![0u64; counts.len() + k];
        for (inv, &c) in counts.iter().enumerate() {
            for add in 0..=k {
                next[inv + add] += c;
            }
        }
        counts = next;
    }
    counts
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// S = C - D computed directly over all pairs.
fn s_by_pairs(x: &[f64], y: &[f64]) -> i64 {
    let mut s = 0i64;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let product = (cmp(x[i], x[j]) as i64) * (cmp(y[i], y[j]) as i64);
            s += product;
        }
    }
    s
}

/// Exact two-sided p = P(|S| >= |S_obs|) over all n! orderings of `y`.
fn exact_p(x: &[f64], y: &[f64], s_obs: i64) -> f64 {
    let n = x.len();
    let untied = |v: &[f64]| tie_groups(v).iter().all(|&g| g == 1);
    let extreme = if untied(x) && untied(y) {
        let max_s = (n * (n - 1) / 2) as i64;
        inversion_counts(n)
            .iter()
            .enumerate()
            .filter(|(inv, _)| (max_s - 2 * *inv as i64).abs() >= s_obs.abs())
            .map(|(_, &c)| c)
            .sum::<u64>()
    } else {
        count_extreme_permutations(x, y, s_obs.abs())
    };
    extreme as f64 / factorial(n) as f64
}

/// Heap's algorithm over positions of `y`; ties make some orderings repeat, which
/// is the correct weighting for the permutation distribution.
fn count_extreme_permutations(x: &[f64], y: &[f64], threshold: i64) -> u64 {
    let n = y.len();
    let mut perm = y.to_vec();
    let mut c = vec![0usize; n];
    let mut count = u64::from(s_by_pairs(x, &perm).abs() >= threshold);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            count += u64::from(s_by_pairs(x, &perm).abs() >= threshold);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    count
}

/// Kendall's tau-b between `x` and `y` with a two-sided p-value.
pub fn kendall_tau_b(x: &[f64], y: &[f64], alpha: f64) -> Result<CorrelationResult> {
    check_alpha(alpha)?;
    validate(x, y)?;
    let counts = pair_counts(x, y);
    let tau = counts.tau_b();
    let n = x.len();
    let (p, p_method) = if n <= EXACT_MAX_N {
        (exact_p(x, y, counts.s), PValueMethod::Exact)
    } else {
        (normal_p(counts.s, s_variance(x, y)), PValueMethod::Normal)
    };
    let (strength, direction) = classify_strength(tau)?;
    Ok(CorrelationResult {
        tau,
        p,
        n,
        strength,
        direction,
        significant: is_significant(p, alpha)?,
        p_method,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{Direction, Strength};

    #[test]
    fn identical_ranks_of_three() {
        let r = kendall_tau_b(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], 0.05).unwrap();
        assert_eq!(r.tau, 1.0);
        assert_eq!(r.p, 2.0 / 6.0);
        assert_eq!(r.p_method, PValueMethod::Exact);
        assert!(!r.significant);
        assert_eq!(
            (r.strength, r.direction),
            (Strength::Strong, Direction::Direct)
        );
    }

    #[test]
    fn perfect_reversal() {
        let r = kendall_tau_b(&[1.0, 2.0, 3.0, 4.0], &[4.0, 3.0, 2.0, 1.0], 0.05).unwrap();
        assert_eq!(r.tau, -1.0);
        assert_eq!(r.direction, Direction::Inverse);
    }

    #[test]
    fn tie_in_x() {
        let c = pair_counts(&[1.0, 2.0, 2.0, 3.0], &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!((c.s, c.tied_x, c.tied_y), (5, 1, 0));
        let r = kendall_tau_b(&[1.0, 2.0, 2.0, 3.0], &[1.0, 2.0, 3.0, 4.0], 0.05).unwrap();
        assert!((r.tau - 5.0 / 30f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn inversion_table_matches_mahonian_numbers() {
        assert_eq!(inversion_counts(1), vec![1]);
        assert_eq!(inversion_counts(3), vec![1, 2, 2, 1]);
        assert_eq!(inversion_counts(4), vec![1, 3, 5, 6, 5, 3, 1]);
        assert_eq!(inversion_counts(8).iter().sum::<u64>(), factorial(8));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            kendall_tau_b(&[1.0, 2.0], &[1.0], 0.05),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            kendall_tau_b(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0], 0.05),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(
            kendall_tau_b(&[1.0, 2.0, 3.0], &[4.0, 4.0, 4.0], 0.05),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(
            kendall_tau_b(&[1.0], &[1.0], 0.05),
            Err(Error::InsufficientData(_))
        ));
        assert!(kendall_tau_b(&[1.0, 2.0], &[1.0, 2.0], 1.5).is_err());
    }

    #[test]
    fn normal_approximation_without_ties() {
        // n = 10, S = 45 - 2 * 1 = 43: var = 10*9*25/18 = 125, z = 42 / sqrt(125).
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let mut y = x.clone();
        y.swap(0, 1);
        let r = kendall_tau_b(&x, &y, 0.05).unwrap();
        assert_eq!(r.p_method, PValueMethod::Normal);
        let expected = erfc(42.0 / 125f64.sqrt() / std::f64::consts::SQRT_2);
        assert!((r.p - expected).abs() < 1e-15);
        assert!((r.tau - 43.0 / 45.0).abs() < 1e-15);
    }

    #[test]
    fn zero_s_gives_p_one() {
        let r = kendall_tau_b(&[1.0, 2.0, 3.0, 4.0], &[1.0, 4.0, 3.0, 2.0], 0.05).unwrap();
        assert_eq!(r.tau, 0.0);
        assert_eq!(r.p, 1.0);
        assert_eq!(r.direction, Direction::None);
        assert_eq!(normal_p(0, 10.0), 1.0);
    }
}
