//! Execution-trace data model, wire-format parsing and the class scope filter.
//!
//! A trace is a flat list of method-invocation records. Each record names the
//! invoking class/method (absent for entry points) and the invoked class/method.
//! On disk one record is one line of six tab-separated fields:
//!
//! ```text
//! seq<TAB>thread<TAB>caller_class<TAB>caller_method<TAB>callee_class<TAB>callee_method
//! ```
//!
//! Absent caller fields are written as `-`. Lines starting with `#` are comments.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Placeholder written for an absent caller field.
pub const ABSENT: &str = "-";

const FIELD_COUNT: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TraceEvent {
    pub seq: u64,
    pub thread: String,
    pub caller_class: Option<String>,
    pub caller_method: Option<String>,
    pub callee_class: String,
    pub callee_method: String,
}

impl TraceEvent {
    pub fn call(
        seq: u64,
        thread: impl Into<String>,
        caller: (impl Into<String>, impl Into<String>),
        callee: (impl Into<String>, impl Into<String>),
    ) -> Self {
        TraceEvent {
            seq,
            thread: thread.into(),
            caller_class: Some(caller.0.into()),
            caller_method: Some(caller.1.into()),
            callee_class: callee.0.into(),
            callee_method: callee.1.into(),
        }
    }

    /// An invocation with no caller (program entry or external trigger).
    pub fn entry(
        seq: u64,
        thread: impl Into<String>,
        callee: (impl Into<String>, impl Into<String>),
    ) -> Self {
        TraceEvent {
            seq,
            thread: thread.into(),
            caller_class: None,
            caller_method: None,
            callee_class: callee.0.into(),
            callee_method: callee.1.into(),
        }
    }

    pub fn is_entry_point(&self) -> bool {
        self.caller_class.is_none() && self.caller_method.is_none()
    }

    /// Caller class, only when the caller is fully specified.
    pub fn caller(&self) -> Option<&str> {
        match (&self.caller_class, &self.caller_method) {
            (Some(class), Some(_)) => Some(class),
            _ => None,
        }
    }
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}\t{}",
            self.seq,
            self.thread,
            self.caller_class.as_deref().unwrap_or(ABSENT),
            self.caller_method.as_deref().unwrap_or(ABSENT),
            self.callee_class,
            self.callee_method
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Trace {
    pub events: Vec<TraceEvent>,
    pub source_label: String,
}

impl Trace {
    /// Builds a trace without validation; run [`validate_trace`] before computing metrics.
    pub fn from_events(source_label: impl Into<String>, events: Vec<TraceEvent>) -> Self {
        Trace {
            events,
            source_label: source_label.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Every class identifier mentioned by the trace, as caller or callee.
    pub fn classes(&self) -> BTreeSet<&str> {
        let mut classes = BTreeSet::new();
        for event in &self.events {
            classes.insert(event.callee_class.as_str());
            if let Some(caller) = event.caller_class.as_deref() {
                classes.insert(caller);
            }
        }
        classes
    }

    /// Serializes the trace in the wire format. Comments are not preserved.
    pub fn to_wire(&self) -> String {
        let mut out = String::new();
        for event in &self.events {
            out.push_str(&event.to_string());
            out.push('\n');
        }
        out
    }

    /// Joins several traces into one logical trace.
    ///
    /// Events keep file order, then seq order, and are renumbered `0..n` so the
    /// combined trace has globally unique seq values.
    pub fn concat(source_label: impl Into<String>, traces: Vec<Trace>) -> Trace {
        let events = traces
            .into_iter()
            .flat_map(|t| t.events)
            .enumerate()
            .map(|(i, mut event)| {
                event.seq = i as u64;
                event
            })
            .collect();
        Trace::from_events(source_label, events)
    }
}

/// Parses a trace in the wire format.
///
/// Events are returned ordered by seq; a conformant file is already in that order.
pub fn parse_trace<R: BufRead>(reader: R, source_label: &str) -> Result<Trace> {
    let mut events = Vec::new();
    let mut seen = HashSet::new();
    for (index, line) in reader.lines().enumerate() {
        let line_no = index + 1;
        let line = line.map_err(|e| parse_error(source_label, line_no, e.to_string()))?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let event = parse_line(line).map_err(|m| parse_error(source_label, line_no, m))?;
        if !seen.insert(event.seq) {
            return Err(Error::Validation {
                source_label: source_label.to_string(),
                violations: vec![Violation::DuplicateSeq { seq: event.seq }],
            });
        }
        events.push(event);
    }
    events.sort_by_key(|e| e.seq);
    Ok(Trace::from_events(source_label, events))
}

pub fn parse_trace_str(text: &str, source_label: &str) -> Result<Trace> {
    parse_trace(text.as_bytes(), source_label)
}

pub fn read_trace_file(path: &Path) -> Result<Trace> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_trace(std::io::BufReader::new(file), &path.display().to_string())
}

fn parse_error(source_label: &str, line: usize, message: String) -> Error {
    Error::Parse {
        source_label: source_label.to_string(),
        line,
        message,
    }
}

fn parse_line(line: &str) -> std::result::Result<TraceEvent, String> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != FIELD_COUNT {
        return Err(format!(
            "expected {FIELD_COUNT} tab-separated fields, found {}",
            fields.len()
        ));
    }
    const NAMES: [&str; FIELD_COUNT] = [
        "seq",
        "thread",
        "caller_class",
        "caller_method",
        "callee_class",
        "callee_method",
    ];
    for (name, value) in NAMES.iter().zip(&fields) {
        if value.is_empty() {
            return Err(format!("missing {name}"));
        }
    }
    let seq = fields[0]
        .parse::<u64>()
        .map_err(|_| format!("seq `{}` is not a non-negative integer", fields[0]))?;
    for (name, value) in [("callee_class", fields[4]), ("callee_method", fields[5])] {
        if value == ABSENT {
            return Err(format!("missing {name}"));
        }
    }
    let optional = |v: &str| (v != ABSENT).then(|| v.to_string());
    Ok(TraceEvent {
        seq,
        thread: fields[1].to_string(),
        caller_class: optional(fields[2]),
        caller_method: optional(fields[3]),
        callee_class: fields[4].to_string(),
        callee_method: fields[5].to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DuplicateSeq { seq: u64 },
    SeqOutOfOrder { seq: u64 },
    EmptyCallee { seq: u64 },
    IncompleteCaller { seq: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateSeq { seq } => write!(f, "seq {seq}: duplicate seq"),
            Violation::SeqOutOfOrder { seq } => write!(f, "seq {seq}: events not sorted by seq"),
            Violation::EmptyCallee { seq } => write!(f, "seq {seq}: empty callee class or method"),
            Violation::IncompleteCaller { seq } => write!(
                f,
                "seq {seq}: caller class and method must be both present or both absent"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub source_label: String,
    pub events: usize,
    pub classes: usize,
    pub threads: usize,
    pub entry_points: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Converts a report with violations into an error.
    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::Validation {
                source_label: self.source_label,
                violations: self.violations,
            })
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "trace\t{}", self.source_label)?;
        writeln!(f, "events\t{}", self.events)?;
        writeln!(f, "classes\t{}", self.classes)?;
        writeln!(f, "threads\t{}", self.threads)?;
        writeln!(f, "entry_points\t{}", self.entry_points)?;
        writeln!(f, "violations\t{}", self.violations.len())?;
        for violation in &self.violations {
            writeln!(f, "violation\t{violation}")?;
        }
        Ok(())
    }
}

pub fn validate_trace(trace: &Trace) -> ValidationReport {
    let mut violations = Vec::new();
    let mut seen = HashSet::new();
    let mut threads = HashSet::new();
    let mut previous: Option<u64> = None;
    for event in &trace.events {
        if !seen.insert(event.seq) {
            violations.push(Violation::DuplicateSeq { seq: event.seq });
        } else if previous.is_some_and(|p| event.seq < p) {
            violations.push(Violation::SeqOutOfOrder { seq: event.seq });
        }
        previous = Some(previous.map_or(event.seq, |p| p.max(event.seq)));
        if event.callee_class.is_empty() || event.callee_method.is_empty() {
            violations.push(Violation::EmptyCallee { seq: event.seq });
        }
        if event.caller_class.is_some() != event.caller_method.is_some() {
            violations.push(Violation::IncompleteCaller { seq: event.seq });
        }
        threads.insert(event.thread.as_str());
    }
    ValidationReport {
        source_label: trace.source_label.clone(),
        events: trace.events.len(),
        classes: trace.classes().len(),
        threads: threads.len(),
        entry_points: trace.events.iter().filter(|e| e.is_entry_point()).count(),
        violations,
    }
}

/// Restricts measurement to the system's own classes.
///
/// A class is in scope when it starts with some include prefix (or the include
/// list is empty) and starts with no exclude prefix.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ScopeFilter {
    #[serde(default)]
    pub include_prefixes: Vec<String>,
    #[serde(default)]
    pub exclude_prefixes: Vec<String>,
}

impl ScopeFilter {
    pub fn new<I, E>(include: I, exclude: E) -> Self
    where
        I: IntoIterator,
        I::Item: Into<String>,
        E: IntoIterator,
        E::Item: Into<String>,
    {
        ScopeFilter {
            include_prefixes: include.into_iter().map(Into::into).collect(),
            exclude_prefixes: exclude.into_iter().map(Into::into).collect(),
        }
    }

    /// Everything in scope.
    pub fn all() -> Self {
        ScopeFilter::default()
    }

    pub fn in_scope(&self, class_id: &str) -> bool {
        in_scope(class_id, self)
    }
}

pub fn in_scope(class_id: &str, filter: &ScopeFilter) -> bool {
    let included = filter.include_prefixes.is_empty()
        || filter
            .include_prefixes
            .iter()
            .any(|p| class_id.starts_with(p.as_str()));
    included
        && !filter
            .exclude_prefixes
            .iter()
            .any(|p| class_id.starts_with(p.as_str()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIVE: &str = "0\tmain\t-\t-\tapp.A\tmain\n\
                        1\tmain\tapp.A\tmain\tapp.B\tf\n\
                        2\tmain\tapp.B\tf\tapp.C\tg\n\
                        3\tmain\tapp.A\tmain\tapp.C\tg\n\
                        4\tmain\tapp.C\tg\tapp.C\th\n";

    #[test]
    fn empty_stream_is_empty_trace() {
        let trace = parse_trace_str("", "empty").unwrap();
        assert!(trace.is_empty());
    }

    #[test]
    fn five_lines_five_events() {
        let trace = parse_trace_str(FIVE, "five").unwrap();
        assert_eq!(trace.len(), 5);
        let seqs: Vec<u64> = trace.events.iter().map(|e| e.seq).collect();
        assert_eq!(seqs, vec![0, 1, 2, 3, 4]);
        assert!(trace.events[0].is_entry_point());
        assert_eq!(trace.events[1].caller(), Some("app.A"));
    }

    #[test]
    fn comments_and_blank_lines_skipped() {
        let text = "# tracer: test\n\n0\tt\t-\t-\tapp.A\tf\n   \n# end\n";
        assert_eq!(parse_trace_str(text, "c").unwrap().len(), 1);
    }

    #[test]
    fn crlf_line_endings_accepted() {
        let trace = parse_trace_str("0\tt\t-\t-\tapp.A\tf\r\n", "crlf").unwrap();
        assert_eq!(trace.events[0].callee_method, "f");
    }

    #[test]
    fn missing_callee_class_names_line() {
        let text = "0\tt\t-\t-\tapp.A\tf\n1\tt\tapp.A\tf\t\tg\n";
        match parse_trace_str(text, "bad").unwrap_err() {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 2);
                assert!(message.contains("callee_class"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn too_few_fields_rejected() {
        let err = parse_trace_str("0\tt\tapp.A\tf\n", "bad").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn non_integer_seq_rejected() {
        for seq in ["x", "-1", "1.5"] {
            let line = format!("{seq}\tt\t-\t-\tapp.A\tf\n");
            let err = parse_trace_str(&line, "bad").unwrap_err();
            assert!(matches!(err, Error::Parse { line: 1, .. }), "{seq}");
        }
    }

    #[test]
    fn duplicate_seq_is_validation_error() {
        let text = "0\tt\t-\t-\tapp.A\tf\n0\tt\t-\t-\tapp.B\tg\n";
        match parse_trace_str(text, "dup").unwrap_err() {
            Error::Validation { violations, .. } => {
                assert_eq!(violations, vec![Violation::DuplicateSeq { seq: 0 }]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn half_caller_parses_but_fails_validation() {
        let trace = parse_trace_str("0\tt\tapp.A\t-\tapp.B\tg\n", "half").unwrap();
        let report = validate_trace(&trace);
        assert_eq!(
            report.violations,
            vec![Violation::IncompleteCaller { seq: 0 }]
        );
        assert!(report.into_result().is_err());
    }

    #[test]
    fn validation_report_counts() {
        let trace = parse_trace_str(FIVE, "five").unwrap();
        let report = validate_trace(&trace);
        assert_eq!(report.events, 5);
        assert_eq!(report.classes, 3);
        assert_eq!(report.threads, 1);
        assert_eq!(report.entry_points, 1);
        assert!(report.violations.is_empty());
    }

    #[test]
    fn validation_flags_duplicate_seq() {
        let events = vec![
            TraceEvent::entry(3, "t", ("app.A", "f")),
            TraceEvent::entry(3, "t", ("app.A", "g")),
        ];
        let report = validate_trace(&Trace::from_events("dup", events));
        assert_eq!(report.violations, vec![Violation::DuplicateSeq { seq: 3 }]);
    }

    #[test]
    fn validation_flags_unsorted_and_empty_callee() {
        let events = vec![
            TraceEvent::entry(5, "t", ("app.A", "f")),
            TraceEvent::entry(2, "t", ("", "g")),
        ];
        let report = validate_trace(&Trace::from_events("x", events));
        assert_eq!(
            report.violations,
            vec![
                Violation::SeqOutOfOrder { seq: 2 },
                Violation::EmptyCallee { seq: 2 }
            ]
        );
    }

    #[test]
    fn scope_examples() {
        let app = ScopeFilter::new(["app."], Vec::<String>::new());
        assert!(in_scope("app.core.Foo", &app));
        assert!(!in_scope("lib.util.Bar", &app));
        let vendor = ScopeFilter::new(["app."], ["app.vendor."]);
        assert!(!in_scope("app.vendor.Baz", &vendor));
        assert!(in_scope("anything", &ScopeFilter::all()));
        let exclude_only = ScopeFilter::new(Vec::<String>::new(), ["java."]);
        assert!(!in_scope("java.lang.String", &exclude_only));
        assert!(in_scope("app.A", &exclude_only));
    }

    #[test]
    fn concat_renumbers_in_file_order() {
        let a = parse_trace_str("0\tt\t-\t-\tapp.A\tf\n1\tt\t-\t-\tapp.A\tg\n", "a").unwrap();
        let b = parse_trace_str("0\tt\t-\t-\tapp.B\tf\n", "b").unwrap();
        let joined = Trace::concat("a+b", vec![a, b]);
        let got: Vec<(u64, &str)> = joined
            .events
            .iter()
            .map(|e| (e.seq, e.callee_class.as_str()))
            .collect();
        assert_eq!(got, vec![(0, "app.A"), (1, "app.A"), (2, "app.B")]);
        assert!(validate_trace(&joined).is_valid());
    }

    #[test]
    fn wire_format_record() {
        let event = TraceEvent::call(17, "main", ("app.A", "run"), ("app.B", "init"));
        assert_eq!(event.to_string(), "17\tmain\tapp.A\trun\tapp.B\tinit");
    }
}
