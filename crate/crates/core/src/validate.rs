//! Diagnostics engine.
//!
//! Each [`Rule`] is an id, a severity and a predicate over the model. The
//! default registry is [`RULES`]; callers can run their own list through
//! [`run_rules`].
//!
//! | id   | severity | finding |
//! |------|----------|---------|
//! | R001 | error    | agent responsible for no goal |
//! | R002 | error    | leaf goal without a privilege |
//! | R003 | error    | leaf goal without a responsible agent, inherited or direct |
//! | R004 | error    | privilege walk leaves the concept graph |
//! | R005 | error    | privilege entry differs from the goal's entry entity |
//! | R006 | warning  | entity no privilege step touches |
//! | R007 | warning  | composite goal with no sub-goal |
//! | R008 | warning  | update action that lists no attribute |

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[cfg(feature = "serde")]
use serde::Serialize;

use crate::graph::{build_graph, walk_is_valid, ConceptGraph};
use crate::model::{Action, ElementKind, Model, Privilege};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

/// The element a diagnostic is about. Privileges are named after their goal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct Subject {
    pub kind: ElementKind,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct Diagnostic {
    pub rule_id: &'static str,
    pub severity: Severity,
    pub subject: Subject,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} '{}': {}",
            self.rule_id, self.severity, self.subject.kind, self.subject.name, self.message
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct DiagnosticReport {
    pub model_name: String,
    /// Sorted by rule id, then subject kind, then subject name.
    pub diagnostics: Vec<Diagnostic>,
}

impl DiagnosticReport {
    pub fn is_clean(&self) -> bool {
        self.diagnostics.is_empty()
    }

    pub fn has_errors(&self) -> bool {
        self.errors().next().is_some()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics
            .iter()
            .filter(|d| d.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics
            .iter()
            .filter(|d| d.severity == Severity::Warning)
    }

    /// Distinct rule ids of error-severity findings, sorted.
    pub fn blocking_rules(&self) -> Vec<&'static str> {
        let ids: BTreeSet<&'static str> = self.errors().map(|d| d.rule_id).collect();
        ids.into_iter().collect()
    }

    /// One `RULE severity kind 'name': message` line per diagnostic.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for d in &self.diagnostics {
            out.push_str(&format!("{d}\n"));
        }
        out
    }
}

/// Shared, precomputed state for rule predicates.
pub struct RuleContext<'m> {
    pub model: &'m Model,
    pub graph: ConceptGraph,
}

impl<'m> RuleContext<'m> {
    pub fn new(model: &'m Model) -> Self {
        RuleContext {
            model,
            graph: build_graph(model),
        }
    }

    /// Diagnostic subject for a privilege, with an ordinal prefix for the
    /// message when its goal has several.
    fn privilege_label(&self, index: usize) -> (Subject, String) {
        let p = &self.model.privileges[index];
        let siblings: Vec<usize> = (0..self.model.privileges.len())
            .filter(|&i| self.model.privileges[i].goal == p.goal)
            .collect();
        let prefix = if siblings.len() > 1 {
            let nth = siblings.iter().position(|&i| i == index).unwrap_or(0) + 1;
            format!("privilege #{nth}: ")
        } else {
            String::new()
        };
        (
            Subject {
                kind: ElementKind::Privilege,
                name: p.goal.clone(),
            },
            prefix,
        )
    }
}

pub struct Rule {
    pub id: &'static str,
    pub severity: Severity,
    pub summary: &'static str,
    pub check: fn(&RuleContext<'_>, &mut Vec<(Subject, String)>),
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Rule")
            .field("id", &self.id)
            .field("severity", &self.severity)
            .finish_non_exhaustive()
    }
}

pub static RULES: [Rule; 8] = [
    Rule {
        id: "R001",
        severity: Severity::Error,
        summary: "every agent is responsible for at least one goal",
        check: agent_has_goal,
    },
    Rule {
        id: "R002",
        severity: Severity::Error,
        summary: "every leaf goal gives access to the information system",
        check: leaf_goal_has_privilege,
    },
    Rule {
        id: "R003",
        severity: Severity::Error,
        summary: "every leaf goal has a responsible agent",
        check: leaf_goal_has_responsible,
    },
    Rule {
        id: "R004",
        severity: Severity::Error,
        summary: "every privilege walk follows the concept graph",
        check: walk_follows_graph,
    },
    Rule {
        id: "R005",
        severity: Severity::Error,
        summary: "privilege entry matches the goal's entry entity",
        check: entry_matches_goal,
    },
    Rule {
        id: "R006",
        severity: Severity::Warning,
        summary: "every entity is touched by a privilege step",
        check: entity_is_used,
    },
    Rule {
        id: "R007",
        severity: Severity::Warning,
        summary: "every composite goal has a sub-goal",
        check: composite_has_child,
    },
    Rule {
        id: "R008",
        severity: Severity::Warning,
        summary: "update actions list the attributes they write",
        check: update_lists_attributes,
    },
];

pub fn rule(id: &str) -> Option<&'static Rule> {
    RULES.iter().find(|r| r.id == id)
}

pub fn run_diagnostics(model: &Model) -> DiagnosticReport {
    run_rules(model, &RULES)
}

pub fn run_rules(model: &Model, rules: &[Rule]) -> DiagnosticReport {
    let ctx = RuleContext::new(model);
    let mut diagnostics = Vec::new();
    for rule in rules {
        let mut found = Vec::new();
        (rule.check)(&ctx, &mut found);
        diagnostics.extend(found.into_iter().map(|(subject, message)| Diagnostic {
            rule_id: rule.id,
            severity: rule.severity,
            subject,
            message,
        }));
    }
    // stable: findings with equal keys keep rule emission order
    diagnostics.sort_by(|a, b| {
        (a.rule_id, &a.subject.kind, &a.subject.name).cmp(&(
            b.rule_id,
            &b.subject.kind,
            &b.subject.name,
        ))
    });
    DiagnosticReport {
        model_name: model.source_name.clone(),
        diagnostics,
    }
}

fn subject(kind: ElementKind, name: &str) -> Subject {
    Subject {
        kind,
        name: name.into(),
    }
}

fn agent_has_goal(ctx: &RuleContext<'_>, out: &mut Vec<(Subject, String)>) {
    let goals = ctx.model.goals_preorder();
    for agent in ctx.model.agents() {
        if !goals
            .iter()
            .any(|v| v.goal.responsible.as_deref() == Some(agent.name.as_str()))
        {
            out.push((
                subject(ElementKind::Agent, &agent.name),
                "agent is not responsible for any goal".into(),
            ));
        }
    }
}

fn leaf_goal_has_privilege(ctx: &RuleContext<'_>, out: &mut Vec<(Subject, String)>) {
    for visit in ctx.model.leaf_goals() {
        if ctx.model.privileges_for(&visit.goal.name).next().is_none() {
            out.push((
                subject(ElementKind::Goal, &visit.goal.name),
                "leaf goal has no privilege into the information system".into(),
            ));
        }
    }
}

fn leaf_goal_has_responsible(ctx: &RuleContext<'_>, out: &mut Vec<(Subject, String)>) {
    for visit in ctx.model.leaf_goals() {
        if visit.responsible.is_none() {
            out.push((
                subject(ElementKind::Goal, &visit.goal.name),
                "leaf goal has no responsible agent, on itself or any ancestor".into(),
            ));
        }
    }
}

fn walk_follows_graph(ctx: &RuleContext<'_>, out: &mut Vec<(Subject, String)>) {
    for (i, p) in ctx.model.privileges.iter().enumerate() {
        if let Some(bad) = walk_is_valid(&ctx.graph, p).first_invalid {
            let (subj, prefix) = ctx.privilege_label(i);
            out.push((subj, format!("{prefix}{}", describe_bad_step(p, bad))));
        }
    }
}

fn describe_bad_step(p: &Privilege, bad: usize) -> String {
    let from = if bad == 0 {
        &p.entry_step.entity
    } else {
        &p.steps[bad - 1].entity
    };
    let step = &p.steps[bad];
    format!(
        "step {bad} follows `{}` from `{from}` to `{}`, but that relationship does not join them",
        step.via.as_deref().unwrap_or_default(),
        step.entity
    )
}

fn entry_matches_goal(ctx: &RuleContext<'_>, out: &mut Vec<(Subject, String)>) {
    for (i, p) in ctx.model.privileges.iter().enumerate() {
        let Some(expected) = ctx.model.goal(&p.goal).and_then(|g| g.entry.as_deref()) else {
            continue;
        };
        if p.entry_step.entity != expected {
            let (subj, prefix) = ctx.privilege_label(i);
            out.push((
                subj,
                format!(
                    "{prefix}enters through `{}` but the goal's entry point is `{expected}`",
                    p.entry_step.entity
                ),
            ));
        }
    }
}

fn entity_is_used(ctx: &RuleContext<'_>, out: &mut Vec<(Subject, String)>) {
    let touched: BTreeSet<&str> = ctx
        .model
        .privileges
        .iter()
        .flat_map(|p| p.walk())
        .map(|s| s.entity.as_str())
        .collect();
    for entity in &ctx.model.entities {
        if !touched.contains(entity.name.as_str()) {
            out.push((
                subject(ElementKind::Entity, &entity.name),
                "no privilege step touches this entity".into(),
            ));
        }
    }
}

fn composite_has_child(ctx: &RuleContext<'_>, out: &mut Vec<(Subject, String)>) {
    for visit in ctx.model.goals_preorder() {
        if visit.goal.children.as_ref().is_some_and(Vec::is_empty) {
            out.push((
                subject(ElementKind::Goal, &visit.goal.name),
                "composite goal has no sub-goal".into(),
            ));
        }
    }
}

fn update_lists_attributes(ctx: &RuleContext<'_>, out: &mut Vec<(Subject, String)>) {
    for (i, p) in ctx.model.privileges.iter().enumerate() {
        for step in p.walk() {
            if step.actions.contains(Action::Update) && step.updated_attributes.is_empty() {
                let (subj, prefix) = ctx.privilege_label(i);
                out.push((
                    subj,
                    format!("{prefix}update on `{}` lists no attribute", step.entity),
                ));
            }
        }
    }
}
