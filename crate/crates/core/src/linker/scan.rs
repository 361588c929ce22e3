use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

use super::lexer::{brace_delta, code_lines};
use super::profile::Profile;
use super::{SourceUnit, UnitKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanWarning {
    pub path: PathBuf,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct ScanOutput {
    /// Units sorted by class id, then path.
    pub units: Vec<SourceUnit>,
    pub warnings: Vec<ScanWarning>,
}

impl ScanOutput {
    pub fn tests(&self) -> impl Iterator<Item = &SourceUnit> {
        self.units.iter().filter(|u| u.kind == UnitKind::Test)
    }

    pub fn productions(&self) -> impl Iterator<Item = &SourceUnit> {
        self.units.iter().filter(|u| u.kind == UnitKind::Production)
    }
}

/// Walks `root` and splits every matching source file into one unit per
/// top-level class declaration.
pub fn scan_sources(root: &Path, profile: &Profile) -> Result<ScanOutput> {
    let meta = std::fs::metadata(root).map_err(|e| Error::io(root, e))?;
    if !meta.is_dir() {
        return Err(Error::io(
            root,
            std::io::Error::new(std::io::ErrorKind::NotADirectory, "not a directory"),
        ));
    }
    let mut out = ScanOutput::default();
    for entry in WalkDir::new(root).sort_by_file_name() {
        let entry = entry.map_err(|e| {
            let path = e.path().unwrap_or(root).to_path_buf();
            Error::io(path, e.into())
        })?;
        if !entry.file_type().is_file() || !profile.has_extension(entry.path()) {
            continue;
        }
        let bytes = std::fs::read(entry.path()).map_err(|e| Error::io(entry.path(), e))?;
        let text = String::from_utf8_lossy(&bytes);
        let relative = entry
            .path()
            .strip_prefix(root)
            .unwrap_or(entry.path())
            .to_path_buf();
        let units = split_units(&relative, &text, profile);
        if units.is_empty() {
            out.warnings.push(ScanWarning {
                path: relative,
                message: "no class declaration found; file skipped".into(),
            });
        }
        out.units.extend(units);
    }
    out.units.sort_by(|a, b| {
        a.class_id
            .cmp(&b.class_id)
            .then_with(|| a.path.cmp(&b.path))
    });
    for pair in out.units.windows(2) {
        if pair[0].class_id == pair[1].class_id {
            out.warnings.push(ScanWarning {
                path: pair[1].path.clone(),
                message: format!(
                    "class `{}` also declared in {}",
                    pair[1].class_id,
                    pair[0].path.display()
                ),
            });
        }
    }
    Ok(out)
}

/// Splits one file into units. Lines before the first declaration belong to the
/// first unit; nested declarations stay inside their outermost class.
pub fn split_units(relative_path: &Path, text: &str, profile: &Profile) -> Vec<SourceUnit> {
    let lines: Vec<&str> = text.lines().collect();
    let code = code_lines(&lines, &profile.language);
    let package = profile.package.as_ref().and_then(|re| {
        code.iter()
            .find_map(|line| re.captures(line).map(|c| c[1].to_string()))
    });
    let path_str = relative_path.to_string_lossy().replace('\\', "/");
    let test_path = profile.is_test_path(&path_str);

    let mut starts: Vec<(usize, String)> = Vec::new();
    let mut depth = 0i64;
    for (index, line) in code.iter().enumerate() {
        if depth <= 0 {
            if let Some(c) = profile.class_decl.captures(line) {
                starts.push((index, c[1].to_string()));
            }
        }
        depth += brace_delta(line);
    }

    let mut units = Vec::with_capacity(starts.len());
    for (i, (start, name)) in starts.iter().enumerate() {
        let begin = if i == 0 { 0 } else { *start };
        let end = starts.get(i + 1).map_or(lines.len(), |(next, _)| *next);
        let class_id = match &package {
            Some(pkg) if !pkg.is_empty() => format!("{pkg}.{name}"),
            _ => name.clone(),
        };
        let kind = if test_path || profile.is_test_name(name) {
            UnitKind::Test
        } else {
            UnitKind::Production
        };
        units.push(SourceUnit {
            path: relative_path.to_path_buf(),
            class_id,
            name: name.clone(),
            package: package.clone(),
            kind,
            lines: lines[begin..end].iter().map(|l| l.to_string()).collect(),
        });
    }
    units
}
