//! Text, structured (JSON) and tab-separated renderings of analysis results.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analysis::{
    BoxplotSummary, CellOutcome, CorrelationMatrix, MatrixCell, NormalityOutcome, ObservationRow,
    Variable,
};
use crate::error::{Error, Result};
use crate::stats::PValueMethod;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Text,
    Structured,
    Tsv,
}

impl OutputFormat {
    /// File name of the correlation report in this format.
    pub fn report_file_name(self) -> &'static str {
        match self {
            OutputFormat::Text => "correlations.txt",
            OutputFormat::Structured => "correlations.json",
            OutputFormat::Tsv => "correlations.tsv",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "structured" => Ok(OutputFormat::Structured),
            "tsv" => Ok(OutputFormat::Tsv),
            other => Err(Error::Argument(format!(
                "unknown format `{other}` (expected text, structured or tsv)"
            ))),
        }
    }
}

pub fn render_correlations(matrix: &CorrelationMatrix, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => correlations_text(matrix),
        OutputFormat::Structured => correlations_json(matrix),
        OutputFormat::Tsv => correlations_tsv(matrix),
    }
}

fn cell_text(cell: Option<&MatrixCell>) -> String {
    match cell.map(|c| &c.outcome) {
        Some(CellOutcome::Computed(r)) => {
            let star = if r.significant { "*" } else { " " };
            let label = match r.strength {
                crate::stats::Strength::None => "none".to_string(),
                s => format!("{s} {}", r.direction),
            };
            format!("{:>7.3}{star} {:>6.3}  {label:<15}", r.tau, r.p)
        }
        Some(CellOutcome::Degenerate { .. }) | None => {
            format!("{:>7}  {:>6}  {:<15}", "n/a", "n/a", "degenerate")
        }
    }
}

fn table_section(
    out: &mut String,
    title: &str,
    rows: &[Variable],
    columns: &[Variable],
    matrix: &CorrelationMatrix,
) {
    let _ = writeln!(out, "{title}");
    let mut header = format!("{:<8}", "metric");
    for col in columns {
        header.push_str(&format!(
            " {:>7}  {:>6}  {:<15}",
            format!("{col} tau"),
            "p",
            "association"
        ));
    }
    let _ = writeln!(out, "{}", header.trim_end());
    for &row in rows {
        let mut line = format!("{:<8}", row.name());
        for &col in columns {
            line.push(' ');
            line.push_str(&cell_text(matrix.cell(row, col)));
        }
        let _ = writeln!(out, "{}", line.trim_end());
    }
    out.push('\n');
}

pub fn correlations_text(matrix: &CorrelationMatrix) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Kendall tau-b correlations (n = {}, alpha = {})\n",
        matrix.n, matrix.alpha
    );
    let testability = [Variable::Tloc, Variable::Ntc];
    table_section(
        &mut out,
        "Dynamic coupling vs test-suite metrics",
        &[Variable::Ic, Variable::Ec],
        &testability,
        matrix,
    );
    table_section(
        &mut out,
        "Execution frequency vs test-suite metrics",
        &[Variable::Ef],
        &testability,
        matrix,
    );
    table_section(
        &mut out,
        "Dynamic coupling vs execution frequency",
        &[Variable::Ic, Variable::Ec],
        &[Variable::Ef],
        matrix,
    );
    let _ = writeln!(out, "* significant at p <= {}", matrix.alpha);
    let methods: Vec<PValueMethod> = matrix
        .cells
        .iter()
        .filter_map(|c| c.result().map(|r| r.p_method))
        .collect();
    if methods.contains(&PValueMethod::Exact) {
        let _ = writeln!(out, "p-values: exact permutation distribution, two-sided");
    } else if !methods.is_empty() {
        let _ = writeln!(
            out,
            "p-values: normal approximation with tie correction and continuity correction, two-sided"
        );
    }
    for cell in &matrix.cells {
        if let CellOutcome::Degenerate { reason } = &cell.outcome {
            let _ = writeln!(out, "{}: not computed ({reason})", cell.pair());
        }
    }
    out.push('\n');
    let _ = writeln!(out, "Normality gate (Shapiro-Wilk, advisory)");
    let _ = writeln!(out, "{:<8} {:>7} {:>7}  normal", "variable", "W", "p");
    for check in &matrix.normality {
        match &check.outcome {
            NormalityOutcome::Tested(r) => {
                let _ = writeln!(
                    out,
                    "{:<8} {:>7.4} {:>7.4}  {}",
                    check.variable.name(),
                    r.w,
                    r.p,
                    if r.normal_at_alpha { "yes" } else { "no" }
                );
            }
            NormalityOutcome::NotTested { reason } => {
                let _ = writeln!(
                    out,
                    "{:<8} {:>7} {:>7}  n/a ({reason})",
                    check.variable.name(),
                    "-",
                    "-"
                );
            }
        }
    }
    out
}

#[derive(Serialize)]
struct JsonCell<'a> {
    pair: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    strength: Option<crate::stats::Strength>,
    #[serde(skip_serializing_if = "Option::is_none")]
    direction: Option<crate::stats::Direction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    significant: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_method: Option<PValueMethod>,
    #[serde(skip_serializing_if = "Option::is_none")]
    degenerate: Option<&'a str>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    n: usize,
    alpha: f64,
    cells: Vec<JsonCell<'a>>,
    normality: &'a [crate::analysis::NormalityCheck],
}

pub fn correlations_json(matrix: &CorrelationMatrix) -> String {
    let cells = matrix
        .cells
        .iter()
        .map(|cell| match &cell.outcome {
            CellOutcome::Computed(r) => JsonCell {
                pair: cell.pair(),
                tau: Some(r.tau),
                p: Some(r.p),
                n: r.n,
                strength: Some(r.strength),
                direction: Some(r.direction),
                significant: Some(r.significant),
                p_method: Some(r.p_method),
                degenerate: None,
            },
            CellOutcome::Degenerate { reason } => JsonCell {
                pair: cell.pair(),
                tau: None,
                p: None,
                n: matrix.n,
                strength: None,
                direction: None,
                significant: None,
                p_method: None,
                degenerate: Some(reason),
            },
        })
        .collect();
    let report = JsonReport {
        n: matrix.n,
        alpha: matrix.alpha,
        cells,
        normality: &matrix.normality,
    };
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    text
}

pub fn correlations_tsv(matrix: &CorrelationMatrix) -> String {
    let mut out = String::from("pair\ttau\tp\tn\tstrength\tdirection\tsignificant\n");
    for cell in &matrix.cells {
        match &cell.outcome {
            CellOutcome::Computed(r) => {
                let _ = writeln!(
                    out,
                    "{}\t{:.6}\t{:.6}\t{}\t{}\t{}\t{}",
                    cell.pair(),
                    r.tau,
                    r.p,
                    r.n,
                    r.strength,
                    r.direction,
                    r.significant
                );
            }
            CellOutcome::Degenerate { .. } => {
                let _ = writeln!(
                    out,
                    "{}\tNA\tNA\t{}\tdegenerate\tNA\tNA",
                    cell.pair(),
                    matrix.n
                );
            }
        }
    }
    out
}

const OBSERVATION_HEADER: &str = "class_id\tIC\tEC\tEF\tTLOC\tNTC";

pub fn observations_to_tsv(table: &[ObservationRow]) -> String {
    let mut out = format!("{OBSERVATION_HEADER}\n");
    for r in table {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            r.class_id, r.ic, r.ec, r.ef, r.tloc, r.ntc
        );
    }
    out
}

pub fn observations_from_tsv(text: &str, source_label: &str) -> Result<Vec<ObservationRow>> {
    let mut rows = Vec::new();
    for (index, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') || line == OBSERVATION_HEADER {
            continue;
        }
        let bad = |message: String| Error::Parse {
            source_label: source_label.to_string(),
            line: index + 1,
            message,
        };
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 6 {
            return Err(bad(format!("expected 6 fields, found {}", fields.len())));
        }
        let mut values = [0u64; 5];
        for (slot, (name, raw)) in values
            .iter_mut()
            .zip(["IC", "EC", "EF", "TLOC", "NTC"].iter().zip(&fields[1..]))
        {
            *slot = raw
                .parse()
                .map_err(|_| bad(format!("{name} `{raw}` is not a non-negative integer")))?;
        }
        let [ic, ec, ef, tloc, ntc] = values;
        rows.push(ObservationRow {
            class_id: fields[0].to_string(),
            ic,
            ec,
            ef,
            tloc,
            ntc,
        });
    }
    Ok(rows)
}

/// Five-number rows, one per variable; outliers comma-joined.
pub fn boxplots_to_tsv(summaries: &[BoxplotSummary]) -> String {
    let mut out = String::from("variable\tn\tmin\tq1\tmedian\tq3\tmax\toutliers\n");
    for s in summaries {
        let outliers: Vec<String> = s.outliers.iter().map(|v| format!("{v:.3}")).collect();
        let _ = writeln!(
            out,
            "{}\t{}\t{:.3}\t{:.3}\t{:.3}\t{:.3}\t{:.3}\t{}",
            s.variable,
            s.n,
            s.min,
            s.q1,
            s.median,
            s.q3,
            s.max,
            outliers.join(",")
        );
    }
    out
}
