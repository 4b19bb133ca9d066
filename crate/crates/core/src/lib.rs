//! Core of the greq requirements toolkit.
//!
//! A requirements model is built from seven concepts: organizations, agents,
//! goals, entities, attributes, relationships and privileges. This crate
//! parses the textual `.greq` language into a [`Model`], checks it against the
//! diagnostic rule registry, answers concept-graph queries and renders the
//! model as concept maps, a Markdown requirements document, a WebML-style
//! application model and risk metrics.
//!
//! The crate is `no_std` and only needs `alloc`. File IO, JSON encoding and the
//! command line live in the `greq` crate.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod appmodel;
pub mod doc;
pub mod dsl;
pub mod graph;
pub mod mindmap;
pub mod model;
pub mod validate;

pub use analysis::{compute_metrics, render_metrics_text, MetricsReport};
pub use appmodel::{emit_app_model, AppModel};
pub use doc::emit_document;
pub use dsl::{format_errors, parse_source, to_source, ParseError, SourceSpan};
pub use graph::{build_graph, goal_view, ConceptGraph, GoalView};
pub use mindmap::{emit_mindmap, MapFilter, MapFormat};
pub use model::{
    Action, ActionSet, Agent, Attribute, AttributeKind, ElementKind, Entity, Goal, Model,
    ModelError, Organization, Privilege, Relationship, Step,
};
pub use validate::{run_diagnostics, Diagnostic, DiagnosticReport, Severity};
