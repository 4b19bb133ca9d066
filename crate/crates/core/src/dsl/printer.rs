use alloc::string::String;
use core::fmt::Write as _;

use super::lexer::is_ident_char;
use crate::model::{Action, Goal, Model, Step};

const KEYWORDS: [&str; 19] = [
    "organization",
    "agent",
    "goal",
    "responsible",
    "entry",
    "entity",
    "attribute",
    "relationship",
    "privilege",
    "for",
    "step",
    "create",
    "read",
    "update",
    "delete",
    "text",
    "number",
    "date",
    "boolean",
];

/// Canonical `.greq` text for a model.
///
/// Declarations are grouped by modeling family in the order enterprise,
/// goals, information structure, privileges. Parsing the output with the
/// model's `source_name` gives back an equal model.
pub fn to_source(model: &Model) -> String {
    let mut out = String::new();
    let section = |out: &mut String| {
        if !out.is_empty() {
            out.push('\n');
        }
    };

    for org in &model.organizations {
        section(&mut out);
        let _ = writeln!(out, "organization {} {{", name(&org.name));
        for agent in &org.agents {
            let _ = writeln!(out, "  agent {}", name(&agent.name));
        }
        out.push_str("}\n");
    }
    for goal in &model.goals {
        section(&mut out);
        write_goal(&mut out, goal, 0);
    }
    for entity in &model.entities {
        section(&mut out);
        let _ = writeln!(out, "entity {} {{", name(&entity.name));
        for attr in &entity.attributes {
            let _ = writeln!(
                out,
                "  attribute {}: {}",
                name(&attr.name),
                attr.kind.as_str()
            );
        }
        out.push_str("}\n");
    }
    if !model.relationships.is_empty() {
        section(&mut out);
    }
    for rel in &model.relationships {
        let _ = writeln!(
            out,
            "relationship {}: {} -> {}",
            name(&rel.name),
            name(&rel.source),
            name(&rel.target)
        );
    }
    for p in &model.privileges {
        section(&mut out);
        let _ = writeln!(out, "privilege for {} {{", name(&p.goal));
        let _ = writeln!(
            out,
            "  entry {} {}",
            name(&p.entry_step.entity),
            actions(&p.entry_step)
        );
        for step in &p.steps {
            let via = step.via.as_deref().unwrap_or_default();
            let _ = writeln!(
                out,
                "  step {} -> {} {}",
                name(via),
                name(&step.entity),
                actions(step)
            );
        }
        out.push_str("}\n");
    }
    out
}

fn write_goal(out: &mut String, goal: &Goal, depth: usize) {
    let indent = "  ".repeat(depth);
    let _ = write!(out, "{indent}goal {}", name(&goal.name));
    let has_body = goal.responsible.is_some() || goal.entry.is_some() || goal.children.is_some();
    if !has_body {
        out.push('\n');
        return;
    }
    if goal.children.as_ref().is_some_and(|c| c.is_empty()) {
        out.push_str(" {}\n");
        return;
    }
    out.push_str(" {\n");
    if let Some(agent) = &goal.responsible {
        let _ = writeln!(out, "{indent}  responsible: {}", name(agent));
    }
    if let Some(entity) = &goal.entry {
        let _ = writeln!(out, "{indent}  entry: {}", name(entity));
    }
    for child in goal.children() {
        write_goal(out, child, depth + 1);
    }
    let _ = writeln!(out, "{indent}}}");
}

fn actions(step: &Step) -> String {
    let mut out = String::from("{ ");
    for (i, action) in step.actions.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(action.as_str());
        if action == Action::Update && !step.updated_attributes.is_empty() {
            out.push('(');
            for (k, attr) in step.updated_attributes.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                out.push_str(&name(attr));
            }
            out.push(')');
        }
    }
    out.push_str(" }");
    out
}

/// Bare identifier when unambiguous, quoted string otherwise.
fn name(text: &str) -> String {
    if !text.is_empty() && text.chars().all(is_ident_char) && !KEYWORDS.contains(&text) {
        return text.into();
    }
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_source;

    #[test]
    fn quoting_rules() {
        assert_eq!(name("Article"), "Article");
        assert_eq!(name("Déposer"), "Déposer");
        assert_eq!(name("Gérer les soumissions"), "\"Gérer les soumissions\"");
        assert_eq!(name("entry"), "\"entry\"");
        assert_eq!(name(""), "\"\"");
        assert_eq!(name("a\"b\\"), "\"a\\\"b\\\\\"");
    }

    #[test]
    fn degenerate_composite_round_trips() {
        let src = "goal Root {\n  goal Empty {}\n  goal Leaf\n}\n";
        let m = parse_source(src, "t").unwrap();
        assert_eq!(m.goals[0].children()[0].children, Some(alloc::vec![]));
        assert!(m.goals[0].children()[1].is_leaf());
        assert_eq!(to_source(&m), src);
    }
}
