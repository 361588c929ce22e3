//! Pipeline configuration: a TOML document whose keys mirror the command-line
//! flags. Command-line values replace file values key by key.
//!
//! ```toml
//! trace = ["traces/scenario.trace"]
//! src = "src"
//! include = ["app."]
//! exclude = ["app.vendor."]
//! alpha = 0.05
//! format = "text"          # text | structured | tsv
//! out = "out"
//! top_k = "all"            # or a positive integer
//! tloc_mode = "sloc"       # sloc | raw
//! naming_mode = "suffix"   # suffix | suffix_or_prefix
//!
//! [profile]
//! extensions = ["java"]
//! ```
//!
//! Relative paths in a file are resolved against the file's directory.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::linker::{LanguageProfile, NamingMode, Profile, TlocMode};
use crate::metrics::TopK;
use crate::report::OutputFormat;
use crate::stats::DEFAULT_ALPHA;
use crate::trace::ScopeFilter;

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub trace_paths: Vec<PathBuf>,
    pub source_root: Option<PathBuf>,
    pub scope: ScopeFilter,
    pub profile: LanguageProfile,
    pub alpha: f64,
    pub tloc_mode: TlocMode,
    pub naming_mode: NamingMode,
    pub output_format: OutputFormat,
    pub out_dir: PathBuf,
    pub top_k: TopK,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            trace_paths: Vec::new(),
            source_root: None,
            scope: ScopeFilter::default(),
            profile: LanguageProfile::default(),
            alpha: DEFAULT_ALPHA,
            tloc_mode: TlocMode::default(),
            naming_mode: NamingMode::default(),
            output_format: OutputFormat::default(),
            out_dir: PathBuf::from("out"),
            top_k: TopK::All,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum TopKValue {
    Count(i64),
    Word(String),
}

impl TopKValue {
    fn resolve(&self) -> Result<TopK> {
        match self {
            TopKValue::Count(k) if *k > 0 => Ok(TopK::First(*k as usize)),
            TopKValue::Count(k) => Err(Error::Config(format!("top_k must be positive, got {k}"))),
            TopKValue::Word(w) => w.parse().map_err(|e: Error| Error::Config(e.to_string())),
        }
    }
}

/// Every setting optional; used both for the config file and for flag overrides.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub trace: Option<Vec<PathBuf>>,
    pub src: Option<PathBuf>,
    pub include: Option<Vec<String>>,
    pub exclude: Option<Vec<String>>,
    pub alpha: Option<f64>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    #[serde(default, deserialize_with = "deserialize_top_k")]
    pub top_k: Option<TopK>,
    pub tloc_mode: Option<TlocMode>,
    pub naming_mode: Option<NamingMode>,
    pub profile: Option<LanguageProfile>,
}

fn deserialize_top_k<'de, D>(deserializer: D) -> std::result::Result<Option<TopK>, D::Error>
where
    D: serde::Deserializer<'de>,
{
    let raw = Option::<TopKValue>::deserialize(deserializer)?;
    raw.map(|v| v.resolve().map_err(serde::de::Error::custom))
        .transpose()
}

impl ConfigOverrides {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads a config file, resolving its relative paths against the file's directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut file = Self::from_toml(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let resolve = |p: PathBuf| if p.is_relative() { base.join(p) } else { p };
        file.trace = file.trace.map(|v| v.into_iter().map(resolve).collect());
        file.src = file.src.map(resolve);
        file.out = file.out.map(resolve);
        Ok(file)
    }

    /// Values present in `other` replace values in `self`.
    pub fn overlay(self, other: ConfigOverrides) -> ConfigOverrides {
        ConfigOverrides {
            trace: other.trace.or(self.trace),
            src: other.src.or(self.src),
            include: other.include.or(self.include),
            exclude: other.exclude.or(self.exclude),
            alpha: other.alpha.or(self.alpha),
            format: other.format.or(self.format),
            out: other.out.or(self.out),
            top_k: other.top_k.or(self.top_k),
            tloc_mode: other.tloc_mode.or(self.tloc_mode),
            naming_mode: other.naming_mode.or(self.naming_mode),
            profile: other.profile.or(self.profile),
        }
    }
}

impl PipelineConfig {
    pub fn from_overrides(o: ConfigOverrides) -> Result<Self> {
        let d = PipelineConfig::default();
        let config = PipelineConfig {
            trace_paths: o.trace.unwrap_or(d.trace_paths),
            source_root: o.src.or(d.source_root),
            scope: ScopeFilter {
                include_prefixes: o.include.unwrap_or_default(),
                exclude_prefixes: o.exclude.unwrap_or_default(),
            },
            profile: o.profile.unwrap_or(d.profile),
            alpha: o.alpha.unwrap_or(d.alpha),
            tloc_mode: o.tloc_mode.unwrap_or(d.tloc_mode),
            naming_mode: o.naming_mode.unwrap_or(d.naming_mode),
            output_format: o.format.unwrap_or(d.output_format),
            out_dir: o.out.unwrap_or(d.out_dir),
            top_k: o.top_k.unwrap_or(d.top_k),
        };
        config.validate()?;
        Ok(config)
    }

    /// Loads `config_path` (if any) and applies `flags` on top.
    pub fn load(config_path: Option<&Path>, flags: ConfigOverrides) -> Result<Self> {
        let file = match config_path {
            Some(path) => ConfigOverrides::from_file(path)?,
            None => ConfigOverrides::default(),
        };
        Self::from_overrides(file.overlay(flags))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.scope.include_prefixes.iter().any(String::is_empty)
            || self.scope.exclude_prefixes.iter().any(String::is_empty)
        {
            return Err(Error::Config("scope prefixes must not be empty".into()));
        }
        self.compiled_profile().map(|_| ())
    }

    pub fn compiled_profile(&self) -> Result<Profile> {
        Profile::new(self.profile.clone(), self.tloc_mode, self.naming_mode)
    }

    pub fn require_traces(&self) -> Result<&[PathBuf]> {
        if self.trace_paths.is_empty() {
            Err(Error::Config(
                "at least one trace file is required (--trace)".into(),
            ))
        } else {
            Ok(&self.trace_paths)
        }
    }

    pub fn require_source_root(&self) -> Result<&Path> {
        self.source_root
            .as_deref()
            .ok_or_else(|| Error::Config("a source root is required (--src)".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_document() {
        let text = r#"
            trace = ["a.trace", "b.trace"]
            src = "src"
            include = ["app."]
            exclude = ["app.vendor."]
            alpha = 0.01
            format = "structured"
            out = "results"
            top_k = 5
            tloc_mode = "raw"
            naming_mode = "suffix_or_prefix"

            [profile]
            test_suffix = "Tests"
        "#;
        let c = PipelineConfig::from_overrides(ConfigOverrides::from_toml(text).unwrap()).unwrap();
        assert_eq!(c.trace_paths.len(), 2);
        assert_eq!(c.scope.exclude_prefixes, vec!["app.vendor."]);
        assert_eq!(c.alpha, 0.01);
        assert_eq!(c.output_format, OutputFormat::Structured);
        assert_eq!(c.top_k, TopK::First(5));
        assert_eq!(c.tloc_mode, TlocMode::Raw);
        assert_eq!(c.naming_mode, NamingMode::SuffixOrPrefix);
        assert_eq!(c.profile.test_suffix, "Tests");
        assert_eq!(c.profile.extensions, vec!["java"]);
    }

    #[test]
    fn defaults() {
        let c = PipelineConfig::from_overrides(ConfigOverrides::default()).unwrap();
        assert_eq!(c.alpha, 0.05);
        assert_eq!(c.top_k, TopK::All);
        assert!(c.require_traces().is_err());
        assert!(c.require_source_root().is_err());
    }

    #[test]
    fn alpha_out_of_range() {
        let o = ConfigOverrides::from_toml("alpha = 1.5").unwrap();
        assert!(matches!(
            PipelineConfig::from_overrides(o),
            Err(Error::Config(_))
        ));
        let o = ConfigOverrides::from_toml("alpha = 0.0").unwrap();
        assert!(PipelineConfig::from_overrides(o).is_err());
    }

    #[test]
    fn flags_win() {
        let file =
            ConfigOverrides::from_toml("alpha = 0.01\ninclude = [\"app.\"]\ntop_k = \"all\"")
                .unwrap();
        let flags = ConfigOverrides {
            alpha: Some(0.1),
            top_k: Some(TopK::First(2)),
            ..Default::default()
        };
        let c = PipelineConfig::from_overrides(file.overlay(flags)).unwrap();
        assert_eq!(c.alpha, 0.1);
        assert_eq!(c.top_k, TopK::First(2));
        assert_eq!(c.scope.include_prefixes, vec!["app."]);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_top_k() {
        assert!(ConfigOverrides::from_toml("colour = \"blue\"").is_err());
        assert!(ConfigOverrides::from_toml("top_k = 0").is_err());
        assert!(ConfigOverrides::from_toml("top_k = \"many\"").is_err());
    }

    #[test]
    fn file_paths_relative_to_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pipeline.toml");
        std::fs::write(&path, "trace = [\"t/x.trace\"]\nsrc = \"/abs/src\"\n").unwrap();
        let o = ConfigOverrides::from_file(&path).unwrap();
        assert_eq!(o.trace.unwrap()[0], dir.path().join("t/x.trace"));
        assert_eq!(o.src.unwrap(), PathBuf::from("/abs/src"));
    }
}
