use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Source-language conventions used to find classes, comments and test cases.
///
/// The defaults describe Java sources with JUnit 3/4/5 tests.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LanguageProfile {
    /// File extensions (without the dot) that are scanned.
    pub extensions: Vec<String>,
    /// Locates a class declaration; capture group 1 is the class name.
    pub class_decl_pattern: String,
    /// Locates the namespace of a file; capture group 1 is the dotted package name.
    pub package_pattern: Option<String>,
    /// One match per test case, applied to a unit's code with comments removed.
    pub test_case_pattern: String,
    pub comment_prefixes: Vec<String>,
    pub block_comment_delims: Option<(String, String)>,
    /// Characters that open and close single-line string or character literals.
    pub string_quotes: Vec<char>,
    pub test_suffix: String,
    pub test_prefix: String,
    /// Patterns matched against a file's path relative to the scan root.
    pub test_file_markers: Vec<String>,
    /// Lines ignored by call-graph linking (imports and package declarations).
    pub reference_ignore_pattern: Option<String>,
}

impl Default for LanguageProfile {
    fn default() -> Self {
        LanguageProfile {
            extensions: vec!["java".into()],
            class_decl_pattern: r"\b(?:class|interface|enum|record)\s+([A-Za-z_$][A-Za-z0-9_$]*)"
                .into(),
            package_pattern: Some(r"^\s*package\s+([A-Za-z_$][A-Za-z0-9_$.]*)\s*;".into()),
            test_case_pattern: concat!(
                r"@Test\b[^\n]*?(?:\n[^\n]*?)*?\bvoid\s+[A-Za-z_$][A-Za-z0-9_$]*\s*\(",
                r"|\bvoid\s+test[A-Za-z0-9_$]*\s*\("
            )
            .into(),
            comment_prefixes: vec!["//".into()],
            block_comment_delims: Some(("/*".into(), "*/".into())),
            string_quotes: vec!['"', '\''],
            test_suffix: "Test".into(),
            test_prefix: "Test".into(),
            test_file_markers: vec![r"(^|/)src/test/".into()],
            reference_ignore_pattern: Some(r"^\s*(?:import|package)\b".into()),
        }
    }
}

/// How test lines of code are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TlocMode {
    /// Lines that are neither blank nor comment-only.
    #[default]
    Sloc,
    /// Every physical line.
    Raw,
}

/// Which test class names the naming-convention linker accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamingMode {
    /// `FooTest` tests `Foo`.
    #[default]
    Suffix,
    /// `FooTest` or `TestFoo` tests `Foo`.
    SuffixOrPrefix,
}

/// A validated [`LanguageProfile`] with its patterns compiled.
#[derive(Debug, Clone)]
pub struct Profile {
    pub language: LanguageProfile,
    pub tloc_mode: TlocMode,
    pub naming_mode: NamingMode,
    pub(crate) class_decl: Regex,
    pub(crate) package: Option<Regex>,
    pub(crate) test_case: Regex,
    pub(crate) test_file_markers: Vec<Regex>,
    pub(crate) reference_ignore: Option<Regex>,
}

fn compile(name: &str, pattern: &str) -> Result<Regex> {
    Regex::new(pattern).map_err(|e| Error::Config(format!("{name}: {e}")))
}

impl Profile {
    pub fn new(
        language: LanguageProfile,
        tloc_mode: TlocMode,
        naming_mode: NamingMode,
    ) -> Result<Self> {
        if language.test_suffix.is_empty() {
            return Err(Error::Config("test_suffix must not be empty".into()));
        }
        if naming_mode == NamingMode::SuffixOrPrefix && language.test_prefix.is_empty() {
            return Err(Error::Config("test_prefix must not be empty".into()));
        }
        if language.extensions.is_empty() {
            return Err(Error::Config(
                "at least one source extension is required".into(),
            ));
        }
        let class_decl = compile("class_decl_pattern", &language.class_decl_pattern)?;
        if class_decl.captures_len() < 2 {
            return Err(Error::Config(
                "class_decl_pattern needs a capture group for the class name".into(),
            ));
        }
        let package = language
            .package_pattern
            .as_deref()
            .map(|p| compile("package_pattern", p))
            .transpose()?;
        let test_case = compile("test_case_pattern", &language.test_case_pattern)?;
        let test_file_markers = language
            .test_file_markers
            .iter()
            .map(|p| compile("test_file_markers", p))
            .collect::<Result<_>>()?;
        let reference_ignore = language
            .reference_ignore_pattern
            .as_deref()
            .map(|p| compile("reference_ignore_pattern", p))
            .transpose()?;
        if let Some((open, close)) = &language.block_comment_delims {
            if open.is_empty() || close.is_empty() {
                return Err(Error::Config(
                    "block comment delimiters must not be empty".into(),
                ));
            }
        }
        if language.comment_prefixes.iter().any(String::is_empty) {
            return Err(Error::Config("comment prefixes must not be empty".into()));
        }
        Ok(Profile {
            language,
            tloc_mode,
            naming_mode,
            class_decl,
            package,
            test_case,
            test_file_markers,
            reference_ignore,
        })
    }

    pub fn java() -> Self {
        Profile::new(
            LanguageProfile::default(),
            TlocMode::Sloc,
            NamingMode::Suffix,
        )
        .expect("default profile compiles")
    }

    pub fn with_tloc_mode(mut self, mode: TlocMode) -> Self {
        self.tloc_mode = mode;
        self
    }

    pub fn with_naming_mode(mut self, mode: NamingMode) -> Self {
        self.naming_mode = mode;
        self
    }

    pub(crate) fn has_extension(&self, path: &std::path::Path) -> bool {
        path.extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| self.language.extensions.iter().any(|x| x == e))
    }

    /// Whether a class name marks a test class under the current naming mode.
    /// A prefix only counts when followed by an upper-case letter (`TestFoo`, not `Tester`).
    pub fn is_test_name(&self, name: &str) -> bool {
        let lang = &self.language;
        name.ends_with(&lang.test_suffix)
            || (self.naming_mode == NamingMode::SuffixOrPrefix
                && name
                    .strip_prefix(lang.test_prefix.as_str())
                    .and_then(|rest| rest.chars().next())
                    .is_some_and(char::is_uppercase))
    }

    pub fn is_test_path(&self, relative_path: &str) -> bool {
        self.test_file_markers
            .iter()
            .any(|r| r.is_match(relative_path))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_profile_compiles() {
        let p = Profile::java();
        assert!(p.is_test_name("FooTest"));
        assert!(!p.is_test_name("TestFoo"));
        assert!(p.is_test_path("module/src/test/java/FooTest.java"));
        assert!(!p.is_test_path("src/main/java/Foo.java"));
    }

    #[test]
    fn prefix_mode() {
        let p = Profile::java().with_naming_mode(NamingMode::SuffixOrPrefix);
        assert!(p.is_test_name("TestFoo"));
        assert!(!p.is_test_name("Tester"));
    }

    #[test]
    fn invalid_patterns_rejected() {
        let bad = LanguageProfile {
            test_case_pattern: "(".into(),
            ..LanguageProfile::default()
        };
        assert!(matches!(
            Profile::new(bad, TlocMode::Sloc, NamingMode::Suffix),
            Err(Error::Config(_))
        ));
        let no_group = LanguageProfile {
            class_decl_pattern: r"\bclass\s+\w+".into(),
            ..LanguageProfile::default()
        };
        assert!(Profile::new(no_group, TlocMode::Sloc, NamingMode::Suffix).is_err());
        let no_suffix = LanguageProfile {
            test_suffix: String::new(),
            ..LanguageProfile::default()
        };
        assert!(Profile::new(no_suffix, TlocMode::Sloc, NamingMode::Suffix).is_err());
    }
}
