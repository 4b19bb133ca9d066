//! Markdown requirements document.
//!
//! Five fixed sections: Enterprise, Goals (why the tool is built),
//! Information structure (how it is built), Privileges and Diagnostics.

use alloc::string::String;
use core::fmt::Write as _;

use crate::model::{Goal, GoalVisit, Model};
use crate::validate::DiagnosticReport;

pub fn emit_document(model: &Model, report: &DiagnosticReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Requirements: {}", model.source_name);

    out.push_str("\n## 1. Enterprise\n");
    if !model.organizations.is_empty() {
        out.push('\n');
    }
    for org in &model.organizations {
        let _ = writeln!(out, "- Organization **{}**", org.name);
        for agent in &org.agents {
            let _ = writeln!(out, "  - Agent {}", agent.name);
        }
    }

    out.push_str("\n## 2. Goals\n");
    let visits = model.goals_preorder();
    if !visits.is_empty() {
        out.push('\n');
    }
    for visit in &visits {
        write_goal_item(&mut out, visit);
    }

    out.push_str("\n## 3. Information structure\n");
    for entity in &model.entities {
        let _ = writeln!(out, "\n### Entity {}\n", entity.name);
        if entity.attributes.is_empty() {
            out.push_str("No attributes.\n");
            continue;
        }
        out.push_str("| Attribute | Kind |\n|---|---|\n");
        for attr in &entity.attributes {
            let _ = writeln!(out, "| {} | {} |", cell(&attr.name), attr.kind.as_str());
        }
    }
    if !model.relationships.is_empty() {
        out.push_str("\n### Relationships\n\n");
        for rel in &model.relationships {
            let _ = writeln!(out, "- {}: {} → {}", rel.name, rel.source, rel.target);
        }
    }

    out.push_str("\n## 4. Privileges\n");
    for visit in visits.iter().filter(|v| v.goal.is_leaf()) {
        let goal = &visit.goal.name;
        let _ = writeln!(out, "\n### Goal {goal}\n");
        let mut any = false;
        for (n, privilege) in model.privileges_for(goal).enumerate() {
            if any {
                out.push('\n');
            }
            any = true;
            let _ = writeln!(
                out,
                "Privilege {}, entry: {}\n",
                n + 1,
                privilege.entry_step.entity
            );
            out.push_str("| Step | Via | Entity | Actions |\n|---|---|---|---|\n");
            for (k, step) in privilege.walk().enumerate() {
                let via = step.via.as_deref().unwrap_or("(entry)");
                let _ = writeln!(
                    out,
                    "| {k} | {} | {} | {} |",
                    cell(via),
                    cell(&step.entity),
                    cell(&step.actions_text())
                );
            }
        }
        if !any {
            out.push_str("No privilege.\n");
        }
    }

    out.push_str("\n## 5. Diagnostics\n\n");
    if report.is_clean() {
        out.push_str("No findings.\n");
    } else {
        out.push_str("```text\n");
        out.push_str(&report.render_text());
        out.push_str("```\n");
    }
    out
}

fn write_goal_item(out: &mut String, visit: &GoalVisit<'_>) {
    let goal: &Goal = visit.goal;
    let indent = "  ".repeat(visit.depth - 1);
    let _ = write!(out, "{indent}- {}", goal.name);
    let mut notes = alloc::vec::Vec::new();
    match (&goal.responsible, visit.responsible) {
        (Some(agent), _) => notes.push(alloc::format!("responsible: {agent}")),
        (None, Some(agent)) if goal.is_leaf() => {
            notes.push(alloc::format!("responsible: {agent}, inherited"))
        }
        _ => {}
    }
    if let Some(entry) = &goal.entry {
        notes.push(alloc::format!("entry: {entry}"));
    }
    if goal.children.as_ref().is_some_and(|c| c.is_empty()) {
        notes.push("no sub-goals yet".into());
    }
    if !notes.is_empty() {
        let _ = write!(out, " ({})", notes.join("; "));
    }
    out.push('\n');
}

fn cell(text: &str) -> String {
    text.replace('|', "\\|")
}
