use std::collections::{BTreeMap, BTreeSet};

use regex::Regex;
use std::sync::OnceLock;

use super::lexer::{code_lines, has_code};
use super::profile::{NamingMode, Profile, TlocMode};
use super::{CorpusSummary, Link, LinkSource, SizeBand, SourceUnit, TestSuiteMetrics, UnitKind};
use crate::error::{Error, Result};

pub fn compute_tloc(unit: &SourceUnit, profile: &Profile) -> u64 {
    count_lines(&unit.lines, profile)
}

fn count_lines(lines: &[String], profile: &Profile) -> u64 {
    match profile.tloc_mode {
        TlocMode::Raw => lines.len() as u64,
        TlocMode::Sloc => code_lines(lines, &profile.language)
            .iter()
            .filter(|c| has_code(c))
            .count() as u64,
    }
}

/// Non-overlapping matches of the test-case pattern over the unit's code,
/// comments removed and lines joined with `\n`.
pub fn compute_ntc(unit: &SourceUnit, profile: &Profile) -> u64 {
    let code = code_lines(&unit.lines, &profile.language).join("\n");
    profile.test_case.find_iter(&code).count() as u64
}

/// Links `FooTest` to `Foo` (and `TestFoo` to `Foo` in prefix mode).
///
/// When several production classes share the stem, the one in the test's
/// package wins; otherwise an ambiguous name produces no link.
pub fn link_by_name(
    tests: &[SourceUnit],
    prods: &[SourceUnit],
    profile: &Profile,
) -> BTreeSet<Link> {
    let mut by_name: BTreeMap<&str, Vec<&SourceUnit>> = BTreeMap::new();
    for p in prods.iter().filter(|p| p.kind == UnitKind::Production) {
        by_name.entry(p.name.as_str()).or_default().push(p);
    }
    let lang = &profile.language;
    let mut links = BTreeSet::new();
    for t in tests.iter().filter(|t| t.kind == UnitKind::Test) {
        let mut stems = Vec::new();
        if let Some(stem) = t.name.strip_suffix(lang.test_suffix.as_str()) {
            stems.push(stem);
        }
        if profile.naming_mode == NamingMode::SuffixOrPrefix {
            if let Some(stem) = t.name.strip_prefix(lang.test_prefix.as_str()) {
                stems.push(stem);
            }
        }
        let candidates: Vec<&SourceUnit> = stems
            .iter()
            .filter(|s| !s.is_empty())
            .filter_map(|s| by_name.get(s))
            .flatten()
            .copied()
            .collect();
        let chosen = match candidates.as_slice() {
            [] => None,
            [only] => Some(*only),
            many => {
                let same_package: Vec<_> = many.iter().filter(|p| p.package == t.package).collect();
                match same_package.as_slice() {
                    [only] => Some(**only),
                    _ => None,
                }
            }
        };
        if let Some(p) = chosen {
            links.insert(Link {
                test: t.class_id.clone(),
                production: p.class_id.clone(),
                source: LinkSource::Naming,
            });
        }
    }
    links
}

fn identifier() -> &'static Regex {
    static IDENT: OnceLock<Regex> = OnceLock::new();
    IDENT.get_or_init(|| Regex::new(r"[A-Za-z_$][A-Za-z0-9_$]*").expect("identifier pattern"))
}

/// Links a test to every production class whose simple name appears as a
/// whole-word token in the test's code (comments, literals, imports excluded).
pub fn link_by_callgraph(
    test: &SourceUnit,
    prods: &[SourceUnit],
    profile: &Profile,
) -> BTreeSet<Link> {
    let mut by_name: BTreeMap<&str, Vec<&SourceUnit>> = BTreeMap::new();
    for p in prods.iter().filter(|p| p.kind == UnitKind::Production) {
        by_name.entry(p.name.as_str()).or_default().push(p);
    }
    let mut referenced = BTreeSet::new();
    for line in code_lines(&test.lines, &profile.language) {
        if profile
            .reference_ignore
            .as_ref()
            .is_some_and(|r| r.is_match(&line))
        {
            continue;
        }
        for token in identifier().find_iter(&line) {
            if let Some(found) = by_name.get(token.as_str()) {
                referenced.extend(found.iter().map(|p| p.class_id.clone()));
            }
        }
    }
    referenced
        .into_iter()
        .filter(|p| *p != test.class_id)
        .map(|production| Link {
            test: test.class_id.clone(),
            production,
            source: LinkSource::CallGraph,
        })
        .collect()
}

/// Naming and call-graph links combined; a pair found by both is tagged `both`.
pub fn link_all(tests: &[SourceUnit], prods: &[SourceUnit], profile: &Profile) -> BTreeSet<Link> {
    let mut links = link_by_name(tests, prods, profile);
    for t in tests.iter().filter(|t| t.kind == UnitKind::Test) {
        links.extend(link_by_callgraph(t, prods, profile));
    }
    merge_sources(&links)
        .into_iter()
        .map(|((test, production), source)| Link {
            test,
            production,
            source,
        })
        .collect()
}

fn merge_sources(links: &BTreeSet<Link>) -> BTreeMap<(String, String), LinkSource> {
    let mut merged: BTreeMap<(String, String), LinkSource> = BTreeMap::new();
    for link in links {
        merged
            .entry((link.test.clone(), link.production.clone()))
            .and_modify(|s| *s = s.merge(link.source))
            .or_insert(link.source);
    }
    merged
}

/// Per production class, sums the TLOC and NTC of every linked test class.
/// A test linked to several production classes counts in full for each.
pub fn aggregate_test_metrics(
    links: &BTreeSet<Link>,
    tests: &[SourceUnit],
    profile: &Profile,
) -> Result<Vec<TestSuiteMetrics>> {
    let mut per_test: BTreeMap<&str, (u64, u64)> = BTreeMap::new();
    for t in tests.iter().filter(|t| t.kind == UnitKind::Test) {
        let entry = per_test.entry(t.class_id.as_str()).or_default();
        entry.0 += compute_tloc(t, profile);
        entry.1 += compute_ntc(t, profile);
    }
    let mut grouped: BTreeMap<String, BTreeMap<String, LinkSource>> = BTreeMap::new();
    for ((test, production), source) in merge_sources(links) {
        if !per_test.contains_key(test.as_str()) {
            return Err(Error::Argument(format!(
                "link references unknown test class `{test}`"
            )));
        }
        grouped.entry(production).or_default().insert(test, source);
    }
    Ok(grouped
        .into_iter()
        .map(|(production_class, link_sources)| {
            let (tloc, ntc) = link_sources.keys().fold((0, 0), |(l, n), t| {
                let (tl, tn) = per_test[t.as_str()];
                (l + tl, n + tn)
            });
            TestSuiteMetrics {
                production_class,
                tloc,
                ntc,
                link_sources,
            }
        })
        .collect())
}

pub fn summarize_corpus(units: &[SourceUnit], profile: &Profile) -> CorpusSummary {
    let mut production_lines = 0u64;
    let mut test_lines = 0u64;
    let mut noc = 0usize;
    let mut test_class_count = 0usize;
    let mut total_ntc = 0u64;
    for unit in units {
        let lines = count_lines(&unit.lines, profile);
        match unit.kind {
            UnitKind::Production => {
                noc += 1;
                production_lines += lines;
            }
            UnitKind::Test => {
                test_class_count += 1;
                test_lines += lines;
                total_ntc += compute_ntc(unit, profile);
            }
        }
    }
    let kloc = production_lines as f64 / 1000.0;
    CorpusSummary {
        kloc,
        noc,
        test_class_count,
        total_ntc,
        test_kloc: test_lines as f64 / 1000.0,
        size_band: SizeBand::from_kloc(kloc),
    }
}

#[cfg(test)]
mod tests {
    use std::path::PathBuf;

    use super::*;

    fn unit(class_id: &str, kind: UnitKind, body: &str) -> SourceUnit {
        let (package, name) = match class_id.rsplit_once('.') {
            Some((p, n)) => (Some(p.to_string()), n.to_string()),
            None => (None, class_id.to_string()),
        };
        SourceUnit {
            path: PathBuf::from(format!("{name}.java")),
            class_id: class_id.to_string(),
            name,
            package,
            kind,
            lines: body.lines().map(String::from).collect(),
        }
    }

    fn prod(id: &str) -> SourceUnit {
        unit(
            id,
            UnitKind::Production,
            &format!("class {} {{}}", id.rsplit('.').next().unwrap()),
        )
    }

    #[test]
    fn tloc_ten_line_fixture() {
        // 6 code lines, 2 blank, 2 comment-only.
        let body = "class FooTest {\n\
                    // setup\n\
                    \n\
                    @Test\n\
                    public void a() { run(); } // trailing\n\
                    /* block */\n\
                    \n\
                    @Test\n\
                    public void b() {}\n\
                    }";
        let t = unit("FooTest", UnitKind::Test, body);
        assert_eq!(t.lines.len(), 10);
        assert_eq!(compute_tloc(&t, &Profile::java()), 6);
        assert_eq!(
            compute_tloc(&t, &Profile::java().with_tloc_mode(TlocMode::Raw)),
            10
        );
        assert_eq!(compute_ntc(&t, &Profile::java()), 2);
    }

    #[test]
    fn tloc_blank_only_is_zero() {
        let t = unit("FooTest", UnitKind::Test, "\n   \n\t\n");
        assert_eq!(compute_tloc(&t, &Profile::java()), 0);
    }

    #[test]
    fn ntc_markers() {
        let three = "class T {\n@Test void a() {}\n@Test void b() {}\n@Test void c() {}\n}";
        assert_eq!(
            compute_ntc(&unit("T", UnitKind::Test, three), &Profile::java()),
            3
        );
        let helpers = "class T {\nvoid setUp() {}\nprivate int helper() { return 1; }\n}";
        assert_eq!(
            compute_ntc(&unit("T", UnitKind::Test, helpers), &Profile::java()),
            0
        );
        // JUnit 3 naming and an annotated test method on the following line.
        let mixed = "class T {\npublic void testOne() {}\n@Test\npublic void testTwo() {}\n\
                     @Test(expected = X.class)\n  @DisplayName(\"x\")\n  void three() {}\n\
                     // @Test void ghost() {}\n}";
        assert_eq!(
            compute_ntc(&unit("T", UnitKind::Test, mixed), &Profile::java()),
            3
        );
    }

    #[test]
    fn naming_links() {
        let tests = vec![
            unit("FooTest", UnitKind::Test, "class FooTest {}"),
            unit("TestFoo", UnitKind::Test, "class TestFoo {}"),
            unit("BarTest", UnitKind::Test, "class BarTest {}"),
        ];
        let prods = vec![prod("Foo")];
        let links = link_by_name(&tests, &prods, &Profile::java());
        assert_eq!(
            links.into_iter().collect::<Vec<_>>(),
            vec![Link {
                test: "FooTest".into(),
                production: "Foo".into(),
                source: LinkSource::Naming
            }]
        );
        let prefix = Profile::java().with_naming_mode(NamingMode::SuffixOrPrefix);
        assert_eq!(link_by_name(&tests, &prods, &prefix).len(), 2);
    }

    #[test]
    fn naming_prefers_same_package() {
        let tests = vec![unit("a.FooTest", UnitKind::Test, "class FooTest {}")];
        let prods = vec![prod("a.Foo"), prod("b.Foo")];
        let links = link_by_name(&tests, &prods, &Profile::java());
        assert_eq!(links.len(), 1);
        assert_eq!(links.iter().next().unwrap().production, "a.Foo");
        let elsewhere = vec![unit("c.FooTest", UnitKind::Test, "class FooTest {}")];
        assert!(link_by_name(&elsewhere, &prods, &Profile::java()).is_empty());
    }

    #[test]
    fn callgraph_whole_words() {
        let prods = vec![prod("Foo"), prod("Bar")];
        let t = unit("T", UnitKind::Test, "class T {\n  Foo x = new Foo();\n}");
        let links = link_by_callgraph(&t, &prods, &Profile::java());
        assert_eq!(links.len(), 1);
        assert_eq!(links.iter().next().unwrap().production, "Foo");

        let t = unit("T", UnitKind::Test, "class T {\n  FooBar x;\n}");
        assert!(link_by_callgraph(&t, &prods, &Profile::java()).is_empty());

        let t = unit(
            "T",
            UnitKind::Test,
            "import app.Bar;\nclass T {\n  // Bar in a comment\n  String s = \"Bar\";\n  Foo f; Bar b;\n}",
        );
        let got: Vec<String> = link_by_callgraph(&t, &prods, &Profile::java())
            .into_iter()
            .map(|l| l.production)
            .collect();
        assert_eq!(got, vec!["Bar", "Foo"]);
    }

    #[test]
    fn imports_alone_do_not_link() {
        let prods = vec![prod("app.Foo")];
        let t = unit("T", UnitKind::Test, "import app.Foo;\nclass T {}");
        assert!(link_by_callgraph(&t, &prods, &Profile::java()).is_empty());
    }

    #[test]
    fn aggregate_union_and_sources() {
        let t1 = unit(
            "FooTest",
            UnitKind::Test,
            "class FooTest {\n@Test void a() {}\n}",
        );
        let t2 = unit(
            "ScenarioTest",
            UnitKind::Test,
            "class ScenarioTest {\n@Test void a() { new Foo(); }\n@Test void b() {}\n\n}",
        );
        let tests = vec![t1, t2];
        let prods = vec![prod("Foo")];
        let links = link_all(&tests, &prods, &Profile::java());
        let got = aggregate_test_metrics(&links, &tests, &Profile::java()).unwrap();
        assert_eq!(got.len(), 1);
        let m = &got[0];
        assert_eq!(m.production_class, "Foo");
        assert_eq!((m.tloc, m.ntc), (3 + 4, 1 + 2));
        assert_eq!(m.link_sources["FooTest"], LinkSource::Naming);
        assert_eq!(m.link_sources["ScenarioTest"], LinkSource::CallGraph);
    }

    #[test]
    fn aggregate_singleton_and_missing() {
        let t = unit(
            "FooTest",
            UnitKind::Test,
            "class FooTest {\n@Test void a() { Foo f; }\n}",
        );
        let tests = vec![t];
        let prods = vec![prod("Foo"), prod("Untested")];
        let links = link_all(&tests, &prods, &Profile::java());
        let got = aggregate_test_metrics(&links, &tests, &Profile::java()).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].link_sources["FooTest"], LinkSource::Both);
        assert_eq!((got[0].tloc, got[0].ntc), (3, 1));
    }

    #[test]
    fn aggregate_rejects_unknown_test() {
        let links: BTreeSet<Link> = [Link {
            test: "Ghost".into(),
            production: "Foo".into(),
            source: LinkSource::Naming,
        }]
        .into();
        assert!(aggregate_test_metrics(&links, &[], &Profile::java()).is_err());
    }

    #[test]
    fn corpus_summary_bands() {
        let empty = summarize_corpus(&[], &Profile::java());
        assert_eq!(
            (empty.noc, empty.test_class_count, empty.total_ntc),
            (0, 0, 0)
        );
        assert_eq!(empty.kloc, 0.0);
        assert_eq!(empty.size_band, SizeBand::Small);

        let body = "x;\n".repeat(500);
        let half = summarize_corpus(
            &[unit("Big", UnitKind::Production, &body)],
            &Profile::java(),
        );
        assert_eq!(half.kloc, 0.5);
        assert_eq!(half.size_band, SizeBand::Small);
    }
}
