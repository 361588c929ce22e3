//! Line-level lexing: strips comments and blanks out string literal contents.

use super::profile::LanguageProfile;

/// Code portion of each line: comments removed and literal contents dropped
/// (the quotes stay, so a line holding only a literal still counts as code).
pub fn code_lines<S: AsRef<str>>(lines: &[S], language: &LanguageProfile) -> Vec<String> {
    let mut in_block = false;
    lines
        .iter()
        .map(|line| strip_line(line.as_ref(), language, &mut in_block))
        .collect()
}

fn strip_line(line: &str, language: &LanguageProfile, in_block: &mut bool) -> String {
    let mut code = String::new();
    let mut quote: Option<char> = None;
    let mut rest = line;
    while let Some(c) = rest.chars().next() {
        if *in_block {
            let close = &language
                .block_comment_delims
                .as_ref()
                .expect("inside a block comment implies delimiters")
                .1;
            match rest.find(close.as_str()) {
                Some(end) => {
                    rest = &rest[end + close.len()..];
                    *in_block = false;
                    // Keep tokens on either side of the comment apart.
                    code.push(' ');
                }
                None => return code,
            }
            continue;
        }
        if let Some(q) = quote {
            if c == '\\' {
                let mut chars = rest.chars();
                chars.next();
                chars.next();
                rest = chars.as_str();
                continue;
            }
            if c == q {
                code.push(q);
                quote = None;
            }
            rest = &rest[c.len_utf8()..];
            continue;
        }
        if let Some((open, _)) = &language.block_comment_delims {
            if rest.starts_with(open.as_str()) {
                *in_block = true;
                rest = &rest[open.len()..];
                continue;
            }
        }
        if language
            .comment_prefixes
            .iter()
            .any(|p| rest.starts_with(p.as_str()))
        {
            return code;
        }
        if language.string_quotes.contains(&c) {
            quote = Some(c);
        }
        code.push(c);
        rest = &rest[c.len_utf8()..];
    }
    if let Some(q) = quote {
        // Unterminated literal: close it so later consumers see balanced quotes.
        code.push(q);
    }
    code
}

pub fn has_code(code: &str) -> bool {
    !code.trim().is_empty()
}

/// Net change in brace depth across one line of code.
pub fn brace_delta(code: &str) -> i64 {
    code.chars().fold(0, |d, c| match c {
        '{' => d + 1,
        '}' => d - 1,
        _ => d,
    })
}
