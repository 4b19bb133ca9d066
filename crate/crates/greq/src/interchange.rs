//! Canonical `.greq.json` interchange form.
//!
//! Top-level keys come in the order `source_name`, `organizations`, `goals`,
//! `entities`, `relationships`, `privileges`. Optional fields are omitted when
//! absent. Output is UTF-8 with LF line endings, 2-space indentation and a
//! trailing newline.

use greq_core::{Model, ModelError};

use crate::to_json;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InterchangeError {
    /// Malformed JSON or a document that does not have the model's shape.
    #[error("{line}:{column} (byte {offset}): {message}")]
    Syntax {
        /// 0-based byte offset into the document.
        offset: usize,
        line: usize,
        column: usize,
        message: String,
    },
    /// Well-formed document describing an invalid model.
    #[error("{}", render_invariants(.0))]
    Invariant(Vec<ModelError>),
}

fn render_invariants(errors: &[ModelError]) -> String {
    errors
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn canonical_serialize(model: &Model) -> String {
    to_json(model)
}

pub fn canonical_deserialize(document: &str) -> Result<Model, InterchangeError> {
    let model: Model = serde_json::from_str(document).map_err(|e| syntax_error(document, &e))?;
    model.check().map_err(InterchangeError::Invariant)?;
    Ok(model)
}

fn syntax_error(document: &str, err: &serde_json::Error) -> InterchangeError {
    let (line, column) = (err.line(), err.column());
    let line_start: usize = document
        .split_inclusive('\n')
        .take(line.saturating_sub(1))
        .map(str::len)
        .sum();
    // serde_json counts the bytes consumed on the line: the offending byte is
    // the last one read, except at end of input where nothing was.
    let offset = if err.is_eof() {
        line_start + column
    } else {
        line_start + column.saturating_sub(1)
    };
    let message = err.to_string();
    let message = match message.rfind(" at line ") {
        Some(cut) => message[..cut].to_string(),
        None => message,
    };
    InterchangeError::Syntax {
        offset: offset.min(document.len()),
        line,
        column,
        message,
    }
}
