//! Statistical protocol: Shapiro-Wilk normality gate, Kendall's tau-b,
//! the significance rule and Cohen strength bands.

pub mod kendall;
pub mod shapiro;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use kendall::{kendall_tau_b, PValueMethod};
pub use shapiro::shapiro_wilk;

pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalityResult {
    pub w: f64,
    pub p: f64,
    pub n: usize,
    pub normal_at_alpha: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strength {
    None,
    Low,
    Medium,
    Strong,
}

impl fmt::Display for Strength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strength::None => "none",
            Strength::Low => "low",
            Strength::Medium => "medium",
            Strength::Strong => "strong",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Direct,
    Inverse,
    None,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Direct => "direct",
            Direction::Inverse => "inverse",
            Direction::None => "none",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub tau: f64,
    pub p: f64,
    pub n: usize,
    pub strength: Strength,
    pub direction: Direction,
    pub significant: bool,
    pub p_method: PValueMethod,
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::Argument(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )))
    }
}

/// Labels the strength and sign of an association.
///
/// `|tau|` is rounded to two decimals (half away from zero) before banding,
/// which closes the gaps between the 0.29/0.30 and 0.59/0.60 band edges:
/// 0 is none, up to 0.29 low, 0.30 to 0.59 medium, 0.60 and above strong.
/// Direction comes from the sign of the unrounded value.
pub fn classify_strength(tau: f64) -> Result<(Strength, Direction)> {
    if !(-1.0..=1.0).contains(&tau) {
        return Err(Error::Argument(format!(
            "tau must lie in [-1, 1], got {tau}"
        )));
    }
    // The nudge keeps decimal inputs such as 0.295 from rounding down on their
    // binary representation.
    let hundredths = (tau.abs() * 100.0 + 1e-9).round() as u32;
    let strength = match hundredths {
        0 => Strength::None,
        1..=29 => Strength::Low,
        30..=59 => Strength::Medium,
        _ => Strength::Strong,
    };
    let direction = if tau > 0.0 {
        Direction::Direct
    } else if tau < 0.0 {
        Direction::Inverse
    } else {
        Direction::None
    };
    Ok((strength, direction))
}

/// `p <= alpha`, boundary inclusive.
pub fn is_significant(p: f64, alpha: f64) -> Result<bool> {
    check_alpha(alpha)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Argument(format!("p must lie in [0, 1], got {p}")));
    }
    Ok(p <= alpha)
}
