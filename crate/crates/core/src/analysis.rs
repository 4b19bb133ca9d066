//! Quantitative measures and at-risk goals and agents.
//!
//! A leaf goal is at risk when the diagnostics report flags it with R002 (no
//! access to the information system) or flags one of its privileges with
//! R004 (the walk leaves the concept graph). An agent's risk ratio is the
//! share of the leaf goals it is responsible for, directly or by
//! inheritance, that are at risk.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

#[cfg(feature = "serde")]
use serde::Serialize;

use crate::model::{ElementKind, Model};
use crate::validate::DiagnosticReport;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct ConceptCounts {
    pub organizations: usize,
    pub agents: usize,
    pub goals: usize,
    pub composite_goals: usize,
    pub leaf_goals: usize,
    pub entities: usize,
    pub attributes: usize,
    pub relationships: usize,
    pub privileges: usize,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct AgentMetrics {
    pub agent: String,
    /// Goals whose effective responsible agent is this one.
    pub goal_count: usize,
    pub leaf_goal_count: usize,
    pub at_risk_goals: Vec<String>,
    /// `at_risk_goals / leaf_goal_count`, 0 when the agent owns no leaf goal.
    pub risk_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct MetricsReport {
    pub model_name: String,
    pub counts: ConceptCounts,
    pub goal_tree_depth: usize,
    /// Share of entities touched by at least one privilege step; 1.0 when
    /// there are no entities.
    pub entity_coverage: f64,
    /// Every at-risk leaf goal, in goal pre-order.
    pub at_risk_goals: Vec<String>,
    pub agents: Vec<AgentMetrics>,
}

impl MetricsReport {
    pub fn agent(&self, name: &str) -> Option<&AgentMetrics> {
        self.agents.iter().find(|a| a.agent == name)
    }
}

/// Goal names flagged by R002 or R004 in `report`.
pub fn flagged_goals(report: &DiagnosticReport) -> BTreeSet<&str> {
    report
        .diagnostics
        .iter()
        .filter(|d| match d.rule_id {
            "R002" => d.subject.kind == ElementKind::Goal,
            "R004" => d.subject.kind == ElementKind::Privilege,
            _ => false,
        })
        .map(|d| d.subject.name.as_str())
        .collect()
}

pub fn compute_metrics(model: &Model, report: &DiagnosticReport) -> MetricsReport {
    let visits = model.goals_preorder();
    let leaf_goals = visits.iter().filter(|v| v.goal.is_leaf()).count();
    let counts = ConceptCounts {
        organizations: model.organizations.len(),
        agents: model.agents().count(),
        goals: visits.len(),
        composite_goals: visits.len() - leaf_goals,
        leaf_goals,
        entities: model.entities.len(),
        attributes: model.entities.iter().map(|e| e.attributes.len()).sum(),
        relationships: model.relationships.len(),
        privileges: model.privileges.len(),
        steps: model.privileges.iter().map(|p| 1 + p.steps.len()).sum(),
    };

    let touched: BTreeSet<&str> = model
        .privileges
        .iter()
        .flat_map(|p| p.walk())
        .map(|s| s.entity.as_str())
        .collect();
    let entity_coverage = if model.entities.is_empty() {
        1.0
    } else {
        let hit = model
            .entities
            .iter()
            .filter(|e| touched.contains(e.name.as_str()))
            .count();
        hit as f64 / model.entities.len() as f64
    };

    let flagged = flagged_goals(report);
    let at_risk = |name: &str| flagged.contains(name);
    let at_risk_goals = visits
        .iter()
        .filter(|v| v.goal.is_leaf() && at_risk(&v.goal.name))
        .map(|v| v.goal.name.clone())
        .collect();

    let agents = model
        .agents()
        .map(|agent| {
            let owned: Vec<_> = visits
                .iter()
                .filter(|v| v.responsible == Some(agent.name.as_str()))
                .collect();
            let leaves: Vec<_> = owned.iter().filter(|v| v.goal.is_leaf()).collect();
            let risky: Vec<String> = leaves
                .iter()
                .filter(|v| at_risk(&v.goal.name))
                .map(|v| v.goal.name.clone())
                .collect();
            let risk_ratio = if leaves.is_empty() {
                0.0
            } else {
                risky.len() as f64 / leaves.len() as f64
            };
            AgentMetrics {
                agent: agent.name.clone(),
                goal_count: owned.len(),
                leaf_goal_count: leaves.len(),
                at_risk_goals: risky,
                risk_ratio,
            }
        })
        .collect();

    MetricsReport {
        model_name: model.source_name.clone(),
        goal_tree_depth: model.goal_depth(),
        counts,
        entity_coverage,
        at_risk_goals,
        agents,
    }
}

/// Plain-text table rendering.
pub fn render_metrics_text(metrics: &MetricsReport) -> String {
    let c = &metrics.counts;
    let rows: [(&str, usize); 10] = [
        ("organizations", c.organizations),
        ("agents", c.agents),
        ("goals", c.goals),
        ("composite goals", c.composite_goals),
        ("leaf goals", c.leaf_goals),
        ("entities", c.entities),
        ("attributes", c.attributes),
        ("relationships", c.relationships),
        ("privileges", c.privileges),
        ("steps", c.steps),
    ];
    let mut out = String::new();
    let _ = writeln!(out, "metrics for {}", metrics.model_name);
    for (label, value) in rows {
        let _ = writeln!(out, "  {label:<16} {value}");
    }
    let _ = writeln!(
        out,
        "  {:<16} {}",
        "goal tree depth", metrics.goal_tree_depth
    );
    let _ = writeln!(
        out,
        "  {:<16} {:.2}",
        "entity coverage", metrics.entity_coverage
    );

    if !metrics.agents.is_empty() {
        let width = metrics
            .agents
            .iter()
            .map(|a| a.agent.chars().count())
            .max()
            .unwrap_or(0)
            .max("agent".len());
        out.push('\n');
        let _ = writeln!(
            out,
            "  {:<width$}  goals  leaf goals  at risk  risk ratio",
            "agent"
        );
        for a in &metrics.agents {
            let _ = writeln!(
                out,
                "  {:<width$}  {:>5}  {:>10}  {:>7}  {:>10.2}",
                a.agent,
                a.goal_count,
                a.leaf_goal_count,
                a.at_risk_goals.len(),
                a.risk_ratio
            );
        }
    }
    if !metrics.at_risk_goals.is_empty() {
        out.push('\n');
        out.push_str("  at-risk goals:\n");
        for g in &metrics.at_risk_goals {
            let _ = writeln!(out, "    - {g}");
        }
    }
    out
}
