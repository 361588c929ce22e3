//! Unit-test side of the analysis: finds production and test classes in a
//! source tree, measures test classes (TLOC, NTC) and links them to the
//! production classes they exercise.

pub mod lexer;
pub mod link;
pub mod profile;
pub mod scan;

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use link::{
    aggregate_test_metrics, compute_ntc, compute_tloc, link_all, link_by_callgraph, link_by_name,
    summarize_corpus,
};
pub use profile::{LanguageProfile, NamingMode, Profile, TlocMode};
pub use scan::{scan_sources, ScanOutput, ScanWarning};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitKind {
    Production,
    Test,
}

impl fmt::Display for UnitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnitKind::Production => "production",
            UnitKind::Test => "test",
        })
    }
}

/// One top-level class and the source lines attributed to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceUnit {
    /// Path relative to the scan root.
    pub path: PathBuf,
    /// Package-qualified class identifier, e.g. `app.core.Foo`.
    pub class_id: String,
    /// Simple class name, e.g. `Foo`.
    pub name: String,
    pub package: Option<String>,
    pub kind: UnitKind,
    pub lines: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkSource {
    Naming,
    #[serde(rename = "callgraph")]
    CallGraph,
    Both,
}

impl LinkSource {
    pub fn merge(self, other: LinkSource) -> LinkSource {
        if self == other {
            self
        } else {
            LinkSource::Both
        }
    }
}

impl fmt::Display for LinkSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LinkSource::Naming => "naming",
            LinkSource::CallGraph => "callgraph",
            LinkSource::Both => "both",
        })
    }
}

impl FromStr for LinkSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naming" => Ok(LinkSource::Naming),
            "callgraph" => Ok(LinkSource::CallGraph),
            "both" => Ok(LinkSource::Both),
            other => Err(Error::Argument(format!("unknown link source `{other}`"))),
        }
    }
}

/// A test class linked to a production class by one technique.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Link {
    pub test: String,
    pub production: String,
    pub source: LinkSource,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestSuiteMetrics {
    pub production_class: String,
    pub tloc: u64,
    pub ntc: u64,
    /// Linked test classes and how each link was found.
    pub link_sources: BTreeMap<String, LinkSource>,
}

impl TestSuiteMetrics {
    pub fn linked_tests(&self) -> impl Iterator<Item = &str> {
        self.link_sources.keys().map(String::as_str)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SizeBand {
    Small,
    Medium,
    Large,
    ExtraLarge,
}

impl SizeBand {
    /// Half-open KLOC bands: [0, 1) small, [1, 10) medium, [10, 100) large, 100+ extra-large.
    pub fn from_kloc(kloc: f64) -> SizeBand {
        if kloc < 1.0 {
            SizeBand::Small
        } else if kloc < 10.0 {
            SizeBand::Medium
        } else if kloc < 100.0 {
            SizeBand::Large
        } else {
            SizeBand::ExtraLarge
        }
    }
}

impl fmt::Display for SizeBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SizeBand::Small => "small",
            SizeBand::Medium => "medium",
            SizeBand::Large => "large",
            SizeBand::ExtraLarge => "extra-large",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub kloc: f64,
    pub noc: usize,
    pub test_class_count: usize,
    pub total_ntc: u64,
    pub test_kloc: f64,
    pub size_band: SizeBand,
}

impl CorpusSummary {
    pub fn to_tsv(&self) -> String {
        format!(
            "kloc\t{:.3}\nnoc\t{}\ntest_classes\t{}\nntc\t{}\ntest_kloc\t{:.3}\nsize_band\t{}\n",
            self.kloc,
            self.noc,
            self.test_class_count,
            self.total_ntc,
            self.test_kloc,
            self.size_band
        )
    }
}

/// `production_class<TAB>TLOC<TAB>NTC<TAB>linked_tests<TAB>link_sources`, lists comma-joined
/// and aligned, sorted by production class.
pub fn test_metrics_to_tsv(metrics: &[TestSuiteMetrics]) -> String {
    let mut sorted: Vec<&TestSuiteMetrics> = metrics.iter().collect();
    sorted.sort_by(|a, b| a.production_class.cmp(&b.production_class));
    let mut out = String::new();
    for m in sorted {
        let tests: Vec<&str> = m.link_sources.keys().map(String::as_str).collect();
        let sources: Vec<String> = m.link_sources.values().map(ToString::to_string).collect();
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            m.production_class,
            m.tloc,
            m.ntc,
            tests.join(","),
            sources.join(",")
        ));
    }
    out
}

pub fn test_metrics_from_tsv(text: &str, source_label: &str) -> Result<Vec<TestSuiteMetrics>> {
    let mut out = Vec::new();
    for (index, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |message: String| Error::Parse {
            source_label: source_label.to_string(),
            line: index + 1,
            message,
        };
        let fields: Vec<&str> = line.split('\t').collect();
        let [class, tloc, ntc, tests, sources] = fields[..] else {
            return Err(bad(format!("expected 5 fields, found {}", fields.len())));
        };
        let num = |name: &str, v: &str| {
            v.parse::<u64>()
                .map_err(|_| bad(format!("{name} `{v}` is not a non-negative integer")))
        };
        let tests: Vec<&str> = tests.split(',').filter(|t| !t.is_empty()).collect();
        let sources: Vec<&str> = sources.split(',').filter(|s| !s.is_empty()).collect();
        if tests.is_empty() || tests.len() != sources.len() {
            return Err(bad(
                "linked tests and link sources must be non-empty and aligned".into(),
            ));
        }
        let link_sources = tests
            .iter()
            .zip(&sources)
            .map(|(t, s)| {
                Ok((
                    t.to_string(),
                    s.parse().map_err(|e: Error| bad(e.to_string()))?,
                ))
            })
            .collect::<Result<_>>()?;
        out.push(TestSuiteMetrics {
            production_class: class.to_string(),
            tloc: num("TLOC", tloc)?,
            ntc: num("NTC", ntc)?,
            link_sources,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_band_boundaries() {
        assert_eq!(SizeBand::from_kloc(0.0), SizeBand::Small);
        assert_eq!(SizeBand::from_kloc(0.5), SizeBand::Small);
        assert_eq!(SizeBand::from_kloc(1.0), SizeBand::Medium);
        assert_eq!(SizeBand::from_kloc(9.999), SizeBand::Medium);
        assert_eq!(SizeBand::from_kloc(10.0), SizeBand::Large);
        assert_eq!(SizeBand::from_kloc(26.231), SizeBand::Large);
        assert_eq!(SizeBand::from_kloc(84.717), SizeBand::Large);
        assert_eq!(SizeBand::from_kloc(100.0), SizeBand::ExtraLarge);
    }

    #[test]
    fn test_metrics_tsv_round_trip() {
        let m = vec![TestSuiteMetrics {
            production_class: "app.Foo".into(),
            tloc: 12,
            ntc: 3,
            link_sources: [
                ("app.FooTest".to_string(), LinkSource::Both),
                ("app.ScenarioTest".to_string(), LinkSource::CallGraph),
            ]
            .into(),
        }];
        let text = test_metrics_to_tsv(&m);
        assert_eq!(
            text,
            "app.Foo\t12\t3\tapp.FooTest,app.ScenarioTest\tboth,callgraph\n"
        );
        assert_eq!(test_metrics_from_tsv(&text, "t").unwrap(), m);
    }

    #[test]
    fn test_metrics_tsv_rejects_misaligned() {
        assert!(test_metrics_from_tsv("a\t1\t1\tT1,T2\tnaming\n", "t").is_err());
        assert!(test_metrics_from_tsv("a\t1\t1\t\t\n", "t").is_err());
        assert!(test_metrics_from_tsv("a\t1\t1\tT1\tmagic\n", "t").is_err());
    }
}
