//! The textual `.greq` requirements language.
//!
//! ```text
//! organization Conference { agent Auteur agent Relecteur }
//! goal "Gérer les soumissions" {
//!   goal "Déposer une soumission" { responsible: Auteur entry: Article }
//! }
//! entity Article { attribute titre: text }
//! privilege for "Déposer une soumission" { entry Article { create, update(titre) } }
//! ```
//!
//! Declarations may appear in any order; names are resolved after the whole
//! file has been read.

mod lexer;
mod lower;
mod parser;
mod printer;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;
use core::ops::Range;

use crate::model::Model;

pub use printer::to_source;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SourceSpan {
    pub file: String,
    /// 1-based.
    pub line: usize,
    /// 1-based, counted in characters.
    pub column: usize,
    /// In characters, at least 1.
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    /// Token descriptions that would have been accepted; empty for
    /// resolution errors.
    pub expected: Vec<String>,
    /// Earlier declaration site, for duplicate declarations.
    pub secondary: Option<SourceSpan>,
}

impl core::fmt::Display for ParseError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "{}:{}:{}: {}",
            self.span.file, self.span.line, self.span.column, self.message
        )
    }
}

/// Byte-range error used before line/column positions are computed.
#[derive(Debug, Clone)]
pub(crate) struct RawError {
    pub range: Range<usize>,
    pub message: String,
    pub expected: Vec<String>,
    pub secondary: Option<Range<usize>>,
}

impl RawError {
    pub(crate) fn new(range: Range<usize>, message: impl Into<String>) -> Self {
        RawError {
            range,
            message: message.into(),
            expected: Vec::new(),
            secondary: None,
        }
    }
}

struct LineIndex<'s> {
    source: &'s str,
    line_starts: Vec<usize>,
}

impl<'s> LineIndex<'s> {
    fn new(source: &'s str) -> Self {
        let mut line_starts = alloc::vec![0];
        line_starts.extend(source.match_indices('\n').map(|(i, _)| i + 1));
        LineIndex {
            source,
            line_starts,
        }
    }

    fn span(&self, file: &str, range: &Range<usize>) -> SourceSpan {
        let mut start = range.start.min(self.source.len());
        // An error at end of input after a trailing newline points at that newline.
        if start == self.source.len() && self.source.ends_with('\n') {
            start -= 1;
        }
        let line = self.line_starts.partition_point(|&s| s <= start);
        let line_start = self.line_starts[line - 1];
        let column = self.source[line_start..start].chars().count() + 1;
        let line_end = self.source[start..]
            .find('\n')
            .map_or(self.source.len(), |n| start + n);
        let end = range.end.clamp(start, line_end);
        let length = self.source[start..end].chars().count().max(1);
        SourceSpan {
            file: file.into(),
            line,
            column,
            length,
        }
    }

    fn resolve(&self, file: &str, raw: RawError) -> ParseError {
        ParseError {
            span: self.span(file, &raw.range),
            message: raw.message,
            expected: raw.expected,
            secondary: raw.secondary.map(|r| self.span(file, &r)),
        }
    }
}

/// Parses `.greq` source into a resolved [`Model`] whose `source_name` is
/// `file_name`.
///
/// Lexical and syntax errors are collected across the whole file. Name
/// resolution only runs on a syntactically clean file, so a missing
/// declaration never shows up as a cascade of unknown-name errors.
pub fn parse_source(source: &str, file_name: &str) -> Result<Model, Vec<ParseError>> {
    let index = LineIndex::new(source);
    let (tokens, mut raw) = lexer::lex(source);
    let mut parser = parser::Parser::new(&tokens);
    let decls = parser.parse_model();
    raw.append(&mut parser.errors);
    if raw.is_empty() {
        match lower::lower(decls, file_name) {
            Ok(model) => return Ok(model),
            Err(errors) => raw = errors,
        }
    }
    let mut errors: Vec<ParseError> = raw
        .into_iter()
        .map(|e| index.resolve(file_name, e))
        .collect();
    errors.sort_by_key(|e| (e.span.line, e.span.column));
    Err(errors)
}

/// Renders errors as `file:line:col: message`, the offending source line and
/// a caret underline, ordered by position.
pub fn format_errors(errors: &[ParseError], source: &str) -> String {
    let lines: Vec<&str> = source.split('\n').collect();
    let mut sorted: Vec<&ParseError> = errors.iter().collect();
    sorted.sort_by_key(|e| (e.span.line, e.span.column));

    let mut out = String::new();
    for err in sorted {
        let _ = writeln!(out, "{err}");
        let text = lines
            .get(err.span.line.wrapping_sub(1))
            .copied()
            .unwrap_or("")
            .trim_end_matches('\r');
        let _ = writeln!(out, "{text}");
        for c in text.chars().take(err.span.column - 1) {
            out.push(if c == '\t' { '\t' } else { ' ' });
        }
        let pad = (err.span.column - 1).saturating_sub(text.chars().count());
        out.extend(core::iter::repeat_n(' ', pad));
        out.extend(core::iter::repeat_n('^', err.span.length));
        out.push('\n');
        if let Some(first) = &err.secondary {
            let _ = writeln!(
                out,
                "{}:{}:{}: note: first declared here",
                first.file, first.line, first.column
            );
        }
    }
    out
}
