//! Concept-map rendering for managerial review: Graphviz dot and FreeMind.
//!
//! Both formats are produced from the same node tree. The root is the model
//! name, with four branches: Organization, Goals, Concepts and Privileges.
//! Relationships are extra links between entity nodes.
//!
//! Node identifiers are `kind:name` and never depend on iteration order:
//!
//! | node | id |
//! |------|----|
//! | root | `model` |
//! | branch | `branch:organization`, `branch:goals`, `branch:concepts`, `branch:privileges` |
//! | organization / agent | `organization:NAME`, `agent:NAME` |
//! | goal | `goal:NAME` |
//! | entity / attribute | `entity:NAME`, `attribute:ENTITY.NAME` |
//! | privileges of a leaf goal | `access:GOAL` |
//! | step | `step:GOAL#N.K` (N-th privilege of the goal from 1, K-th step, 0 = entry) |

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use crate::model::{Goal, GoalVisit, Model, Step};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapFilter {
    Full,
    /// Only the information structure.
    ConceptsOnly,
    /// Only the goals an agent is responsible for, directly or through an
    /// ancestor, and their privileges.
    GoalsOfAgent(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapFormat {
    Dot,
    FreeMind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NodeKind {
    Root,
    Branch,
    Organization,
    Agent,
    Goal,
    Entity,
    Attribute,
    Access,
    Step,
}

#[derive(Debug, Clone)]
struct Node {
    id: String,
    label: String,
    kind: NodeKind,
    children: Vec<Node>,
}

impl Node {
    fn new(kind: NodeKind, id: String, label: impl Into<String>) -> Self {
        Node {
            id,
            label: label.into(),
            kind,
            children: Vec::new(),
        }
    }
}

struct Link {
    from: String,
    to: String,
    label: String,
}

struct ConceptMap {
    root: Node,
    links: Vec<Link>,
}

pub fn emit_mindmap(
    model: &Model,
    filter: &MapFilter,
    format: MapFormat,
) -> Result<String, MapError> {
    let map = build(model, filter)?;
    Ok(match format {
        MapFormat::Dot => render_dot(&map),
        MapFormat::FreeMind => render_freemind(&map),
    })
}

fn build(model: &Model, filter: &MapFilter) -> Result<ConceptMap, MapError> {
    if let MapFilter::GoalsOfAgent(agent) = filter {
        if !model.agents().any(|a| &a.name == agent) {
            return Err(MapError::UnknownAgent(agent.clone()));
        }
    }
    let visits = model.goals_preorder();
    let mut root = Node::new(NodeKind::Root, "model".into(), model.source_name.as_str());
    let mut links = Vec::new();

    let keep_goal = |v: &GoalVisit<'_>| match filter {
        MapFilter::GoalsOfAgent(agent) => v.responsible == Some(agent.as_str()),
        _ => true,
    };

    if matches!(filter, MapFilter::Full) {
        let mut branch = Node::new(
            NodeKind::Branch,
            "branch:organization".into(),
            "Organization",
        );
        for org in &model.organizations {
            let mut node = Node::new(
                NodeKind::Organization,
                format!("organization:{}", org.name),
                org.name.as_str(),
            );
            for agent in &org.agents {
                node.children.push(Node::new(
                    NodeKind::Agent,
                    format!("agent:{}", agent.name),
                    agent.name.as_str(),
                ));
            }
            branch.children.push(node);
        }
        root.children.push(branch);
    }

    if !matches!(filter, MapFilter::ConceptsOnly) {
        let mut branch = Node::new(NodeKind::Branch, "branch:goals".into(), "Goals");
        for goal in &model.goals {
            goal_nodes(goal, &visits, &keep_goal, &mut branch.children);
        }
        root.children.push(branch);
    }

    if matches!(filter, MapFilter::Full | MapFilter::ConceptsOnly) {
        let mut branch = Node::new(NodeKind::Branch, "branch:concepts".into(), "Concepts");
        for entity in &model.entities {
            let mut node = Node::new(
                NodeKind::Entity,
                format!("entity:{}", entity.name),
                entity.name.as_str(),
            );
            for attr in &entity.attributes {
                node.children.push(Node::new(
                    NodeKind::Attribute,
                    format!("attribute:{}.{}", entity.name, attr.name),
                    format!("{}: {}", attr.name, attr.kind.as_str()),
                ));
            }
            branch.children.push(node);
        }
        root.children.push(branch);
        links.extend(model.relationships.iter().map(|r| Link {
            from: format!("entity:{}", r.source),
            to: format!("entity:{}", r.target),
            label: r.name.clone(),
        }));
    }

    if !matches!(filter, MapFilter::ConceptsOnly) {
        let mut branch = Node::new(NodeKind::Branch, "branch:privileges".into(), "Privileges");
        for visit in visits.iter().filter(|v| v.goal.is_leaf() && keep_goal(v)) {
            let goal = &visit.goal.name;
            let mut access = Node::new(NodeKind::Access, format!("access:{goal}"), goal.as_str());
            for (n, privilege) in model.privileges_for(goal).enumerate() {
                let chain: Vec<Node> = privilege
                    .walk()
                    .enumerate()
                    .map(|(k, step)| {
                        Node::new(
                            NodeKind::Step,
                            format!("step:{goal}#{}.{k}", n + 1),
                            step_label(step),
                        )
                    })
                    .collect();
                if let Some(head) = nest_chain(chain) {
                    access.children.push(head);
                }
            }
            if !access.children.is_empty() {
                branch.children.push(access);
            }
        }
        root.children.push(branch);
    }

    Ok(ConceptMap { root, links })
}

/// Appends the node for `goal` (or, if filtered out, its kept descendants) to `out`.
fn goal_nodes(
    goal: &Goal,
    visits: &[GoalVisit<'_>],
    keep: &dyn Fn(&GoalVisit<'_>) -> bool,
    out: &mut Vec<Node>,
) {
    let visit = visits
        .iter()
        .find(|v| core::ptr::eq(v.goal, goal))
        .expect("goal comes from the same model");
    if keep(visit) {
        let mut node = Node::new(
            NodeKind::Goal,
            format!("goal:{}", goal.name),
            goal_label(visit),
        );
        for child in goal.children() {
            goal_nodes(child, visits, keep, &mut node.children);
        }
        out.push(node);
    } else {
        for child in goal.children() {
            goal_nodes(child, visits, keep, out);
        }
    }
}

fn nest_chain(chain: Vec<Node>) -> Option<Node> {
    chain.into_iter().rev().fold(None, |tail, mut node| {
        node.children.extend(tail);
        Some(node)
    })
}

fn goal_label(visit: &GoalVisit<'_>) -> String {
    let mut label = visit.goal.name.clone();
    if visit.goal.is_leaf() {
        if let Some(agent) = visit.responsible {
            let _ = write!(label, " [{agent}]");
        }
        if let Some(entry) = &visit.goal.entry {
            let _ = write!(label, " → {entry}");
        }
    }
    label
}

fn step_label(step: &Step) -> String {
    match &step.via {
        Some(via) => format!("{via} → {} {{{}}}", step.entity, step.actions_text()),
        None => format!("{} {{{}}}", step.entity, step.actions_text()),
    }
}

fn dot_quote(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => {}
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn dot_shape(kind: NodeKind) -> &'static str {
    match kind {
        NodeKind::Root => "doubleoctagon",
        NodeKind::Branch => "folder",
        NodeKind::Organization => "house",
        NodeKind::Agent => "oval",
        NodeKind::Goal => "parallelogram",
        NodeKind::Entity => "box",
        NodeKind::Attribute => "note",
        NodeKind::Access => "component",
        NodeKind::Step => "cds",
    }
}

fn render_dot(map: &ConceptMap) -> String {
    fn nodes(node: &Node, out: &mut String) {
        let _ = writeln!(
            out,
            "  {} [label={}, shape={}];",
            dot_quote(&node.id),
            dot_quote(&node.label),
            dot_shape(node.kind)
        );
        for child in &node.children {
            nodes(child, out);
        }
    }
    fn edges(node: &Node, out: &mut String) {
        for child in &node.children {
            let _ = writeln!(
                out,
                "  {} -> {};",
                dot_quote(&node.id),
                dot_quote(&child.id)
            );
            edges(child, out);
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", dot_quote(&map.root.label));
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [fontname=\"Helvetica\"];\n");
    nodes(&map.root, &mut out);
    edges(&map.root, &mut out);
    for link in &map.links {
        let _ = writeln!(
            out,
            "  {} -> {} [label={}, dir=none, style=dashed];",
            dot_quote(&link.from),
            dot_quote(&link.to),
            dot_quote(&link.label)
        );
    }
    out.push_str("}\n");
    out
}

fn xml_attr(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\n' => out.push_str("&#10;"),
            '\t' => out.push_str("&#9;"),
            '\r' => out.push_str("&#13;"),
            c => out.push(c),
        }
    }
    out
}

fn render_freemind(map: &ConceptMap) -> String {
    fn node(n: &Node, links: &[Link], depth: usize, out: &mut String) {
        let indent = "  ".repeat(depth);
        let outgoing: Vec<&Link> = links.iter().filter(|l| l.from == n.id).collect();
        let _ = write!(
            out,
            "{indent}<node ID=\"{}\" TEXT=\"{}\"",
            xml_attr(&n.id),
            xml_attr(&n.label)
        );
        if n.children.is_empty() && outgoing.is_empty() {
            out.push_str("/>\n");
            return;
        }
        out.push_str(">\n");
        for link in outgoing {
            let _ = writeln!(
                out,
                "{indent}  <arrowlink DESTINATION=\"{}\" MIDDLE_LABEL=\"{}\" STARTARROW=\"None\" ENDARROW=\"None\"/>",
                xml_attr(&link.to),
                xml_attr(&link.label)
            );
        }
        for child in &n.children {
            node(child, links, depth + 1, out);
        }
        let _ = writeln!(out, "{indent}</node>");
    }
    let mut out = String::from("<map version=\"1.0.1\">\n");
    node(&map.root, &map.links, 1, &mut out);
    out.push_str("</map>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Action, ActionSet, Relationship};

    #[test]
    fn chain_nesting() {
        let chain = alloc::vec![
            Node::new(NodeKind::Step, "a".into(), "a"),
            Node::new(NodeKind::Step, "b".into(), "b"),
        ];
        let head = nest_chain(chain).unwrap();
        assert_eq!(head.id, "a");
        assert_eq!(head.children[0].id, "b");
        assert!(nest_chain(Vec::new()).is_none());
    }

    #[test]
    fn step_labels() {
        let s = Step::entry(
            "Rapport",
            [Action::Create, Action::Update].into_iter().collect(),
        )
        .with_updates(["commentaire"]);
        assert_eq!(step_label(&s), "Rapport {create, update(commentaire)}");
        let s = Step::via(
            "commente",
            "Article",
            [Action::Read].into_iter().collect::<ActionSet>(),
        );
        assert_eq!(step_label(&s), "commente → Article {read}");
    }

    #[test]
    fn escaping() {
        assert_eq!(dot_quote("a \"b\"\\"), "\"a \\\"b\\\"\\\\\"");
        assert_eq!(xml_attr("<a & \"b\">"), "&lt;a &amp; &quot;b&quot;&gt;");
    }

    #[test]
    fn unknown_agent_filter() {
        let m = Model::new("m");
        assert_eq!(
            emit_mindmap(
                &m,
                &MapFilter::GoalsOfAgent("Inconnu".into()),
                MapFormat::Dot
            ),
            Err(MapError::UnknownAgent("Inconnu".into()))
        );
    }

    #[test]
    fn relationship_links_are_undirected_dashed() {
        let mut m = Model::new("m");
        m.relationships.push(Relationship {
            name: "r".into(),
            source: "A".into(),
            target: "B".into(),
        });
        let dot = emit_mindmap(&m, &MapFilter::ConceptsOnly, MapFormat::Dot).unwrap();
        assert!(dot.contains("\"entity:A\" -> \"entity:B\" [label=\"r\", dir=none, style=dashed];"));
    }
}
