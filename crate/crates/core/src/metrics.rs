//! Dynamic class metrics: Import Coupling, Export Coupling and Execution Frequency.
//!
//! All three are occurrence counts over invocation records:
//!
//! * `IC(C)`: invocations received by `C` from a different in-scope class.
//! * `EC(C)`: invocations sent by `C` to a different in-scope class.
//! * `EF(C)`: executions of any method of `C`, i.e. the sum of its per-method counts.
//!
//! Self-invocations count toward EF but not coupling. Entry-point records (no
//! caller) count toward EF only.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trace::{ScopeFilter, Trace};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MethodFrequency {
    pub class_id: String,
    pub method: String,
    pub count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassDynamicMetrics {
    pub ic: u64,
    pub ec: u64,
    pub ef: u64,
}

impl ClassDynamicMetrics {
    pub fn new(ic: u64, ec: u64, ef: u64) -> Self {
        ClassDynamicMetrics { ic, ec, ef }
    }

    pub fn is_zero(&self) -> bool {
        self.ic == 0 && self.ec == 0 && self.ef == 0
    }
}

/// Per-class metrics keyed (and therefore ordered) by class identifier.
pub type ClassMetrics = BTreeMap<String, ClassDynamicMetrics>;

/// Execution count of every in-scope method that appears as a callee, ordered by class then method.
pub fn per_method_frequency(trace: &Trace, filter: &ScopeFilter) -> Vec<MethodFrequency> {
    let mut counts: BTreeMap<(&str, &str), u64> = BTreeMap::new();
    for event in &trace.events {
        if filter.in_scope(&event.callee_class) {
            *counts
                .entry((&event.callee_class, &event.callee_method))
                .or_default() += 1;
        }
    }
    counts
        .into_iter()
        .map(|((class_id, method), count)| MethodFrequency {
            class_id: class_id.to_string(),
            method: method.to_string(),
            count,
        })
        .collect()
}

pub fn compute_class_metrics(trace: &Trace, filter: &ScopeFilter) -> ClassMetrics {
    let mut metrics = ClassMetrics::new();
    for event in &trace.events {
        let callee = event.callee_class.as_str();
        let callee_in = filter.in_scope(callee);
        if callee_in {
            metrics.entry(callee.to_string()).or_default().ef += 1;
        }
        let Some(caller) = event.caller() else {
            continue;
        };
        if caller != callee && callee_in && filter.in_scope(caller) {
            metrics.entry(callee.to_string()).or_default().ic += 1;
            metrics.entry(caller.to_string()).or_default().ec += 1;
        }
    }
    metrics.retain(|_, m| !m.is_zero());
    metrics
}

/// How many classes a ranking keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum TopK {
    #[default]
    All,
    First(usize),
}

impl TopK {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            Err(Error::Argument("top_k must be positive".into()))
        } else {
            Ok(TopK::First(k))
        }
    }
}

impl FromStr for TopK {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(TopK::All);
        }
        let k = s
            .parse::<usize>()
            .map_err(|_| Error::Argument(format!("top_k `{s}` is neither `all` nor an integer")))?;
        TopK::new(k)
    }
}

impl fmt::Display for TopK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopK::All => f.write_str("all"),
            TopK::First(k) => write!(f, "{k}"),
        }
    }
}

impl From<TopK> for String {
    fn from(k: TopK) -> String {
        k.to_string()
    }
}

impl TryFrom<String> for TopK {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyClassRanking {
    pub entries: Vec<(String, u64)>,
}

/// Orders classes by execution frequency, highest first; ties by class id.
pub fn rank_key_classes(metrics: &ClassMetrics, top_k: TopK) -> Result<KeyClassRanking> {
    if top_k == TopK::First(0) {
        return Err(Error::Argument("top_k must be positive".into()));
    }
    let mut entries: Vec<(String, u64)> = metrics
        .iter()
        .map(|(class, m)| (class.clone(), m.ef))
        .collect();
    entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    if let TopK::First(k) = top_k {
        entries.truncate(k);
    }
    Ok(KeyClassRanking { entries })
}

/// `class_id<TAB>IC<TAB>EC<TAB>EF`, one line per class, sorted by class id.
pub fn metrics_to_tsv(metrics: &ClassMetrics) -> String {
    let mut out = String::new();
    for (class, m) in metrics {
        out.push_str(&format!("{class}\t{}\t{}\t{}\n", m.ic, m.ec, m.ef));
    }
    out
}

pub fn metrics_from_tsv(text: &str, source_label: &str) -> Result<ClassMetrics> {
    let mut metrics = ClassMetrics::new();
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
        let [class, ic, ec, ef] = fields[..] else {
            return Err(bad(format!("expected 4 fields, found {}", fields.len())));
        };
        let num = |name: &str, v: &str| {
            v.parse::<u64>()
                .map_err(|_| bad(format!("{name} `{v}` is not a non-negative integer")))
        };
        let m = ClassDynamicMetrics::new(num("IC", ic)?, num("EC", ec)?, num("EF", ef)?);
        if class.is_empty() {
            return Err(bad("missing class_id".into()));
        }
        if metrics.insert(class.to_string(), m).is_some() {
            return Err(bad(format!("duplicate class `{class}`")));
        }
    }
    Ok(metrics)
}

/// `rank<TAB>class_id<TAB>EF`, ranks starting at 1.
pub fn ranking_to_tsv(ranking: &KeyClassRanking) -> String {
    let mut out = String::new();
    for (rank, (class, ef)) in ranking.entries.iter().enumerate() {
        out.push_str(&format!("{}\t{class}\t{ef}\n", rank + 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::TraceEvent;

    fn worked_trace() -> Trace {
        Trace::from_events(
            "worked",
            vec![
                TraceEvent::entry(0, "main", ("A", "main")),
                TraceEvent::call(1, "main", ("A", "main"), ("B", "f")),
                TraceEvent::call(2, "main", ("B", "f"), ("C", "g")),
                TraceEvent::call(3, "main", ("A", "main"), ("C", "g")),
                TraceEvent::call(4, "main", ("C", "g"), ("C", "h")),
            ],
        )
    }

    #[test]
    fn worked_example() {
        let m = compute_class_metrics(&worked_trace(), &ScopeFilter::all());
        assert_eq!(m["A"], ClassDynamicMetrics::new(0, 2, 1));
        assert_eq!(m["B"], ClassDynamicMetrics::new(1, 1, 1));
        assert_eq!(m["C"], ClassDynamicMetrics::new(2, 0, 3));
        assert_eq!(m.len(), 3);
    }

    #[test]
    fn empty_trace() {
        let t = Trace::default();
        assert!(compute_class_metrics(&t, &ScopeFilter::all()).is_empty());
        assert!(per_method_frequency(&t, &ScopeFilter::all()).is_empty());
    }

    #[test]
    fn single_entry_point() {
        let t = Trace::from_events("e", vec![TraceEvent::entry(0, "main", ("A", "main"))]);
        let m = compute_class_metrics(&t, &ScopeFilter::all());
        assert_eq!(m["A"], ClassDynamicMetrics::new(0, 0, 1));
    }

    #[test]
    fn method_frequency_counts_callers_of_all_kinds() {
        let t = Trace::from_events(
            "f",
            vec![
                TraceEvent::entry(0, "main", ("A", "f")),
                TraceEvent::call(1, "main", ("B", "g"), ("A", "f")),
            ],
        );
        let got = per_method_frequency(&t, &ScopeFilter::all());
        assert_eq!(
            got,
            vec![MethodFrequency {
                class_id: "A".into(),
                method: "f".into(),
                count: 2
            }]
        );
    }

    #[test]
    fn out_of_scope_callee_absent() {
        let t = Trace::from_events(
            "s",
            vec![
                TraceEvent::call(0, "main", ("app.A", "f"), ("lib.X", "g")),
                TraceEvent::call(1, "main", ("lib.X", "g"), ("app.B", "h")),
            ],
        );
        let filter = ScopeFilter::new(["app."], Vec::<String>::new());
        let freq = per_method_frequency(&t, &filter);
        assert_eq!(freq.len(), 1);
        assert_eq!(freq[0].class_id, "app.B");
        let m = compute_class_metrics(&t, &filter);
        // lib.X is excluded, so neither call couples two in-scope classes.
        assert_eq!(m.len(), 1);
        assert_eq!(m["app.B"], ClassDynamicMetrics::new(0, 0, 1));
    }

    #[test]
    fn ranking_examples() {
        let m = compute_class_metrics(&worked_trace(), &ScopeFilter::all());
        let r = rank_key_classes(&m, TopK::All).unwrap();
        assert_eq!(
            r.entries,
            vec![("C".into(), 3), ("A".into(), 1), ("B".into(), 1)]
        );
        assert!(rank_key_classes(&ClassMetrics::new(), TopK::All)
            .unwrap()
            .entries
            .is_empty());
        let one: ClassMetrics = [("A".to_string(), ClassDynamicMetrics::new(0, 0, 5))].into();
        let r = rank_key_classes(&one, TopK::new(3).unwrap()).unwrap();
        assert_eq!(r.entries, vec![("A".into(), 5)]);
    }

    #[test]
    fn top_k_zero_rejected() {
        assert!(TopK::new(0).is_err());
        assert!("0".parse::<TopK>().is_err());
        assert!(rank_key_classes(&ClassMetrics::new(), TopK::First(0)).is_err());
        assert_eq!("ALL".parse::<TopK>().unwrap(), TopK::All);
        assert_eq!("4".parse::<TopK>().unwrap(), TopK::First(4));
    }

    #[test]
    fn tsv_round_trip() {
        let m = compute_class_metrics(&worked_trace(), &ScopeFilter::all());
        let text = metrics_to_tsv(&m);
        assert_eq!(text, "A\t0\t2\t1\nB\t1\t1\t1\nC\t2\t0\t3\n");
        assert_eq!(metrics_from_tsv(&text, "m").unwrap(), m);
    }

    #[test]
    fn tsv_rejects_garbage() {
        assert!(metrics_from_tsv("A\t1\t2\n", "m").is_err());
        assert!(metrics_from_tsv("A\t1\tx\t2\n", "m").is_err());
        assert!(metrics_from_tsv("A\t1\t1\t2\nA\t0\t0\t1\n", "m").is_err());
    }
}
