//! File formats and command line for the greq requirements toolkit.
//!
//! The model, parser and emitters live in `greq-core`; this crate adds the
//! canonical JSON interchange form (`.greq.json`), JSON renderings of the
//! metrics and application model, and the `greq` command.

pub mod cli;
pub mod interchange;

pub use cli::run_cli;
pub use interchange::{canonical_deserialize, canonical_serialize, InterchangeError};

use serde::Serialize;

/// Pretty JSON with 2-space indentation and a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("in-memory JSON encoding cannot fail");
    out.push('\n');
    out
}
