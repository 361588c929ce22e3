//! Joins runtime and test-suite metrics into observations and runs the
//! correlation battery over them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linker::TestSuiteMetrics;
use crate::metrics::ClassMetrics;
use crate::stats::{kendall_tau_b, shapiro_wilk, CorrelationResult, NormalityResult};

/// A production class that has linked tests and was observed at runtime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservationRow {
    pub class_id: String,
    pub ic: u64,
    pub ec: u64,
    pub ef: u64,
    pub tloc: u64,
    pub ntc: u64,
}

impl ObservationRow {
    pub fn value(&self, variable: Variable) -> u64 {
        match variable {
            Variable::Ic => self.ic,
            Variable::Ec => self.ec,
            Variable::Ef => self.ef,
            Variable::Tloc => self.tloc,
            Variable::Ntc => self.ntc,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Variable {
    #[serde(rename = "IC")]
    Ic,
    #[serde(rename = "EC")]
    Ec,
    #[serde(rename = "EF")]
    Ef,
    #[serde(rename = "TLOC")]
    Tloc,
    #[serde(rename = "NTC")]
    Ntc,
}

impl Variable {
    pub const ALL: [Variable; 5] = [
        Variable::Ic,
        Variable::Ec,
        Variable::Ef,
        Variable::Tloc,
        Variable::Ntc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variable::Ic => "IC",
            Variable::Ec => "EC",
            Variable::Ef => "EF",
            Variable::Tloc => "TLOC",
            Variable::Ntc => "NTC",
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The eight correlated pairs: dynamic metrics against TLOC, against NTC, and
/// coupling against EF.
pub const PAIRS: [(Variable, Variable); 8] = [
    (Variable::Ic, Variable::Tloc),
    (Variable::Ec, Variable::Tloc),
    (Variable::Ef, Variable::Tloc),
    (Variable::Ic, Variable::Ntc),
    (Variable::Ec, Variable::Ntc),
    (Variable::Ef, Variable::Ntc),
    (Variable::Ic, Variable::Ef),
    (Variable::Ec, Variable::Ef),
];

/// Rows for classes present in both inputs, sorted by class id.
pub fn build_observation_table(
    dynamic: &ClassMetrics,
    tests: &[TestSuiteMetrics],
) -> Vec<ObservationRow> {
    let mut rows: Vec<ObservationRow> = tests
        .iter()
        .filter(|t| !t.link_sources.is_empty())
        .filter_map(|t| {
            let m = dynamic.get(&t.production_class)?;
            (!m.is_zero()).then(|| ObservationRow {
                class_id: t.production_class.clone(),
                ic: m.ic,
                ec: m.ec,
                ef: m.ef,
                tloc: t.tloc,
                ntc: t.ntc,
            })
        })
        .collect();
    rows.sort_by(|a, b| a.class_id.cmp(&b.class_id));
    rows.dedup_by(|a, b| a.class_id == b.class_id);
    rows
}

pub fn column(table: &[ObservationRow], variable: Variable) -> Vec<f64> {
    table.iter().map(|r| r.value(variable) as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CellOutcome {
    Computed(CorrelationResult),
    Degenerate { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixCell {
    pub x: Variable,
    pub y: Variable,
    pub outcome: CellOutcome,
}

impl MatrixCell {
    pub fn pair(&self) -> String {
        format!("{}/{}", self.x, self.y)
    }

    pub fn result(&self) -> Option<&CorrelationResult> {
        match &self.outcome {
            CellOutcome::Computed(r) => Some(r),
            CellOutcome::Degenerate { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum NormalityOutcome {
    Tested(NormalityResult),
    NotTested { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalityCheck {
    pub variable: Variable,
    pub outcome: NormalityOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub n: usize,
    pub alpha: f64,
    /// One cell per entry of [`PAIRS`], in that order.
    pub cells: Vec<MatrixCell>,
    /// Advisory Shapiro-Wilk results, one per variable.
    pub normality: Vec<NormalityCheck>,
}

impl CorrelationMatrix {
    pub fn cell(&self, x: Variable, y: Variable) -> Option<&MatrixCell> {
        self.cells.iter().find(|c| c.x == x && c.y == y)
    }
}

/// Kendall's tau-b for every pair in [`PAIRS`], plus the normality gate.
///
/// A constant column marks its own cells degenerate instead of failing.
pub fn correlate_all(table: &[ObservationRow], alpha: f64) -> Result<CorrelationMatrix> {
    if table.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "correlation needs at least 2 observations, got {}",
            table.len()
        )));
    }
    let mut cells = Vec::with_capacity(PAIRS.len());
    for (x, y) in PAIRS {
        let outcome = match kendall_tau_b(&column(table, x), &column(table, y), alpha) {
            Ok(r) => CellOutcome::Computed(r),
            Err(Error::Degenerate(reason)) => CellOutcome::Degenerate {
                reason: degenerate_reason(table, x, y).unwrap_or(reason),
            },
            Err(e) => return Err(e),
        };
        cells.push(MatrixCell { x, y, outcome });
    }
    let normality = Variable::ALL
        .iter()
        .map(|&variable| {
            let outcome = match shapiro_wilk(&column(table, variable), alpha) {
                Ok(r) => NormalityOutcome::Tested(r),
                Err(Error::Degenerate(reason) | Error::Argument(reason)) => {
                    NormalityOutcome::NotTested { reason }
                }
                Err(e) => return Err(e),
            };
            Ok(NormalityCheck { variable, outcome })
        })
        .collect::<Result<_>>()?;
    Ok(CorrelationMatrix {
        n: table.len(),
        alpha,
        cells,
        normality,
    })
}

fn degenerate_reason(table: &[ObservationRow], x: Variable, y: Variable) -> Option<String> {
    let constant: Vec<&str> = [x, y]
        .into_iter()
        .filter(|&v| table.iter().all(|r| r.value(v) == table[0].value(v)))
        .map(Variable::name)
        .collect();
    (!constant.is_empty()).then(|| format!("constant column: {}", constant.join(", ")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxplotSummary {
    pub variable: Variable,
    pub n: usize,
    /// Lower whisker: smallest value inside the lower fence, never above `q1`.
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    /// Upper whisker: largest value inside the upper fence, never below `q3`.
    pub max: f64,
    /// Values beyond 1.5 IQR from the box, ascending.
    pub outliers: Vec<f64>,
}

/// Quantile by linear interpolation between order statistics (`h = (n - 1) p`).
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn summarize_values(variable: Variable, values: &[f64]) -> Result<BoxplotSummary> {
    if values.is_empty() {
        return Err(Error::InsufficientData("boxplot of an empty sample".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q1 = quantile(&sorted, 0.25);
    let median = quantile(&sorted, 0.5);
    let q3 = quantile(&sorted, 0.75);
    let iqr = q3 - q1;
    let (low_fence, high_fence) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
    let (inside, outliers): (Vec<f64>, Vec<f64>) = sorted
        .iter()
        .partition(|&&v| v >= low_fence && v <= high_fence);
    // Whiskers end at the box when no inside value lies beyond it.
    let min = inside.first().map_or(q1, |&v| v.min(q1));
    let max = inside.last().map_or(q3, |&v| v.max(q3));
    Ok(BoxplotSummary {
        variable,
        n: sorted.len(),
        min,
        q1,
        median,
        q3,
        max,
        outliers,
    })
}

pub fn boxplot_summary(table: &[ObservationRow]) -> Result<Vec<BoxplotSummary>> {
    if table.is_empty() {
        return Err(Error::InsufficientData("boxplot of an empty table".into()));
    }
    Variable::ALL
        .iter()
        .map(|&v| summarize_values(v, &column(table, v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::linker::LinkSource;
    use crate::metrics::ClassDynamicMetrics;
    use crate::stats::Strength;

    fn suite(class: &str, tloc: u64, ntc: u64) -> TestSuiteMetrics {
        TestSuiteMetrics {
            production_class: class.into(),
            tloc,
            ntc,
            link_sources: BTreeMap::from([(format!("{class}Test"), LinkSource::Naming)]),
        }
    }

    fn row(class: &str, ic: u64, ec: u64, ef: u64, tloc: u64, ntc: u64) -> ObservationRow {
        ObservationRow {
            class_id: class.into(),
            ic,
            ec,
            ef,
            tloc,
            ntc,
        }
    }

    #[test]
    fn join_is_intersection() {
        let dynamic: ClassMetrics = [
            ("A".to_string(), ClassDynamicMetrics::new(1, 2, 3)),
            ("B".to_string(), ClassDynamicMetrics::new(0, 0, 1)),
        ]
        .into();
        let tests = vec![suite("C", 5, 1), suite("A", 10, 2)];
        let rows = build_observation_table(&dynamic, &tests);
        assert_eq!(rows, vec![row("A", 1, 2, 3, 10, 2)]);
        assert!(build_observation_table(&dynamic, &[suite("Z", 1, 1)]).is_empty());
    }

    #[test]
    fn exact_monotone_relation() {
        let table: Vec<_> = (1..=6)
            .map(|i| row(&format!("C{i}"), i % 3, 7 - i, i, 2 * i, i % 2 + 1))
            .collect();
        let m = correlate_all(&table, 0.05).unwrap();
        assert_eq!(m.cells.len(), 8);
        let ef_tloc = m
            .cell(Variable::Ef, Variable::Tloc)
            .unwrap()
            .result()
            .unwrap();
        assert_eq!(ef_tloc.tau, 1.0);
        assert_eq!(ef_tloc.strength, Strength::Strong);
        assert!(m
            .cells
            .iter()
            .filter_map(MatrixCell::result)
            .all(|r| r.n == 6));
        assert_eq!(m.normality.len(), 5);
    }

    #[test]
    fn constant_column_poisons_only_its_cells() {
        let table: Vec<_> = (1..=5)
            .map(|i| row(&format!("C{i}"), i, i * 2 % 5, i + 1, i * 3, 4))
            .collect();
        let m = correlate_all(&table, 0.05).unwrap();
        for cell in &m.cells {
            let degenerate = cell.result().is_none();
            assert_eq!(degenerate, cell.y == Variable::Ntc, "{}", cell.pair());
        }
        let ntc = m
            .normality
            .iter()
            .find(|c| c.variable == Variable::Ntc)
            .unwrap();
        assert!(matches!(ntc.outcome, NormalityOutcome::NotTested { .. }));
    }

    #[test]
    fn too_few_rows() {
        assert!(matches!(
            correlate_all(&[row("A", 1, 1, 1, 1, 1)], 0.05),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn two_rows_skip_normality() {
        let table = vec![row("A", 1, 2, 3, 4, 5), row("B", 2, 3, 4, 5, 6)];
        let m = correlate_all(&table, 0.05).unwrap();
        assert!(m
            .normality
            .iter()
            .all(|c| matches!(c.outcome, NormalityOutcome::NotTested { .. })));
    }

    #[test]
    fn boxplot_outlier() {
        let s = summarize_values(Variable::Ef, &[1.0, 2.0, 3.0, 4.0, 100.0]).unwrap();
        assert_eq!((s.q1, s.median, s.q3), (2.0, 3.0, 4.0));
        assert_eq!(s.outliers, vec![100.0]);
        assert_eq!((s.min, s.max), (1.0, 4.0));
    }

    #[test]
    fn boxplot_constant_and_single() {
        let s = summarize_values(Variable::Ic, &[7.0; 4]).unwrap();
        assert_eq!([s.min, s.q1, s.median, s.q3, s.max], [7.0; 5]);
        assert!(s.outliers.is_empty());
        let s = summarize_values(Variable::Ic, &[3.0]).unwrap();
        assert_eq!([s.min, s.q1, s.median, s.q3, s.max], [3.0; 5]);
        assert!(summarize_values(Variable::Ic, &[]).is_err());
        assert!(boxplot_summary(&[]).is_err());
    }

    #[test]
    fn whisker_clamped_to_box() {
        // q1 = 7.5 and the only value below the box is an outlier.
        let s = summarize_values(Variable::Ic, &[0.0, 10.0, 10.0, 10.0]).unwrap();
        assert_eq!(s.q1, 7.5);
        assert_eq!(s.outliers, vec![0.0]);
        assert_eq!(s.min, 7.5);
    }

    #[test]
    fn interpolated_quartiles() {
        let sorted = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&sorted, 0.25), 1.75);
        assert_eq!(quantile(&sorted, 0.5), 2.5);
        assert_eq!(quantile(&sorted, 0.75), 3.25);
    }
}
