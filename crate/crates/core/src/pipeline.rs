//! End-to-end orchestration. Each stage reads and writes only the documented
//! file formats, so any stage can be run on its own or replaced.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::analysis::{
    boxplot_summary, build_observation_table, correlate_all, CorrelationMatrix, ObservationRow,
};
use crate::config::PipelineConfig;
use crate::error::{Error, Result};
use crate::linker::{
    aggregate_test_metrics, compute_ntc, compute_tloc, link_all, scan_sources, summarize_corpus,
    test_metrics_to_tsv, CorpusSummary, ScanWarning, SourceUnit, TestSuiteMetrics, UnitKind,
};
use crate::metrics::{
    compute_class_metrics, metrics_to_tsv, rank_key_classes, ranking_to_tsv, ClassMetrics,
};
use crate::report::{boxplots_to_tsv, observations_to_tsv, render_correlations};
use crate::trace::{read_trace_file, validate_trace, Trace};

pub const METRICS_FILE: &str = "metrics.tsv";
pub const KEY_CLASSES_FILE: &str = "key_classes.tsv";
pub const SOURCES_FILE: &str = "sources.tsv";
pub const CORPUS_FILE: &str = "corpus_summary.tsv";
pub const TEST_METRICS_FILE: &str = "test_metrics.tsv";
pub const OBSERVATIONS_FILE: &str = "observations.tsv";
pub const BOXPLOTS_FILE: &str = "boxplots.tsv";

/// Writes `contents` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let file_name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = dir.join(format!(".{file_name}.tmp"));
    std::fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Default)]
pub struct Artifacts {
    pub written: Vec<PathBuf>,
}

impl Artifacts {
    fn write(&mut self, dir: &Path, name: &str, contents: &str) -> Result<()> {
        let path = dir.join(name);
        write_atomic(&path, contents)?;
        self.written.push(path);
        Ok(())
    }
}

/// Parses and validates every trace, then joins them into one logical trace.
pub fn load_traces(paths: &[PathBuf]) -> Result<Trace> {
    let mut traces = Vec::with_capacity(paths.len());
    for path in paths {
        let trace = read_trace_file(path)?;
        validate_trace(&trace).into_result()?;
        traces.push(trace);
    }
    if traces.len() == 1 {
        return Ok(traces.pop().expect("one trace"));
    }
    let label = paths
        .iter()
        .map(|p| p.display().to_string())
        .collect::<Vec<_>>()
        .join("+");
    Ok(Trace::concat(label, traces))
}

/// Trace stage: dynamic metrics and the key-class ranking. No source scan.
pub fn metrics_stage(config: &PipelineConfig, artifacts: &mut Artifacts) -> Result<ClassMetrics> {
    let trace = load_traces(config.require_traces()?)?;
    let metrics = compute_class_metrics(&trace, &config.scope);
    let ranking = rank_key_classes(&metrics, config.top_k)?;
    artifacts.write(&config.out_dir, METRICS_FILE, &metrics_to_tsv(&metrics))?;
    artifacts.write(&config.out_dir, KEY_CLASSES_FILE, &ranking_to_tsv(&ranking))?;
    Ok(metrics)
}

#[derive(Debug)]
pub struct ScanResult {
    pub units: Vec<SourceUnit>,
    pub warnings: Vec<ScanWarning>,
    pub summary: CorpusSummary,
}

/// Source stage: units in scope (tests are always kept) and the corpus summary.
pub fn scan_stage(config: &PipelineConfig, artifacts: &mut Artifacts) -> Result<ScanResult> {
    let profile = config.compiled_profile()?;
    let scanned = scan_sources(config.require_source_root()?, &profile)?;
    let units: Vec<SourceUnit> = scanned
        .units
        .into_iter()
        .filter(|u| u.kind == UnitKind::Test || config.scope.in_scope(&u.class_id))
        .collect();
    let summary = summarize_corpus(&units, &profile);

    let mut listing = String::from("class_id\tkind\tpath\tlines\tntc\n");
    for u in &units {
        let ntc = match u.kind {
            UnitKind::Test => compute_ntc(u, &profile).to_string(),
            UnitKind::Production => "-".into(),
        };
        let _ = writeln!(
            listing,
            "{}\t{}\t{}\t{}\t{ntc}",
            u.class_id,
            u.kind,
            u.path.to_string_lossy().replace('\\', "/"),
            compute_tloc(u, &profile),
        );
    }
    artifacts.write(&config.out_dir, SOURCES_FILE, &listing)?;
    artifacts.write(&config.out_dir, CORPUS_FILE, &summary.to_tsv())?;
    Ok(ScanResult {
        units,
        warnings: scanned.warnings,
        summary,
    })
}

/// Link stage: per-production-class TLOC and NTC.
pub fn link_stage(
    config: &PipelineConfig,
    scan: &ScanResult,
    artifacts: &mut Artifacts,
) -> Result<Vec<TestSuiteMetrics>> {
    let profile = config.compiled_profile()?;
    let (tests, prods): (Vec<SourceUnit>, Vec<SourceUnit>) = scan
        .units
        .iter()
        .cloned()
        .partition(|u| u.kind == UnitKind::Test);
    let links = link_all(&tests, &prods, &profile);
    let metrics = aggregate_test_metrics(&links, &tests, &profile)?;
    artifacts.write(
        &config.out_dir,
        TEST_METRICS_FILE,
        &test_metrics_to_tsv(&metrics),
    )?;
    Ok(metrics)
}

#[derive(Debug)]
pub struct Analysis {
    pub observations: Vec<ObservationRow>,
    pub matrix: CorrelationMatrix,
}

/// Joins the two metric sets and writes the observation table, correlation
/// report and boxplot summaries.
pub fn analyze_stage(
    config: &PipelineConfig,
    dynamic: &ClassMetrics,
    tests: &[TestSuiteMetrics],
    artifacts: &mut Artifacts,
) -> Result<Analysis> {
    let observations = build_observation_table(dynamic, tests);
    artifacts.write(
        &config.out_dir,
        OBSERVATIONS_FILE,
        &observations_to_tsv(&observations),
    )?;
    if observations.is_empty() {
        return Err(Error::EmptyObservations);
    }
    let matrix = report_stage(config, &observations, artifacts)?;
    Ok(Analysis {
        observations,
        matrix,
    })
}

/// Correlation report and boxplots from an observation table.
pub fn report_stage(
    config: &PipelineConfig,
    observations: &[ObservationRow],
    artifacts: &mut Artifacts,
) -> Result<CorrelationMatrix> {
    if observations.is_empty() {
        return Err(Error::EmptyObservations);
    }
    let matrix = correlate_all(observations, config.alpha)?;
    let boxplots = boxplot_summary(observations)?;
    artifacts.write(
        &config.out_dir,
        config.output_format.report_file_name(),
        &render_correlations(&matrix, config.output_format),
    )?;
    artifacts.write(&config.out_dir, BOXPLOTS_FILE, &boxplots_to_tsv(&boxplots))?;
    Ok(matrix)
}

#[derive(Debug)]
pub struct RunOutcome {
    pub artifacts: Artifacts,
    pub warnings: Vec<ScanWarning>,
    pub corpus: CorpusSummary,
    pub analysis: Analysis,
}

/// parse → scope → metrics → scan → link → aggregate → join → correlate → report.
pub fn run_pipeline(config: &PipelineConfig) -> Result<RunOutcome> {
    config.validate()?;
    config.require_traces()?;
    config.require_source_root()?;
    let mut artifacts = Artifacts::default();
    let dynamic = metrics_stage(config, &mut artifacts)?;
    let scan = scan_stage(config, &mut artifacts)?;
    let tests = link_stage(config, &scan, &mut artifacts)?;
    let analysis = analyze_stage(config, &dynamic, &tests, &mut artifacts)?;
    Ok(RunOutcome {
        artifacts,
        warnings: scan.warnings,
        corpus: scan.summary,
        analysis,
    })
}

/// Reads a file produced by an earlier stage.
pub fn read_stage_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}
