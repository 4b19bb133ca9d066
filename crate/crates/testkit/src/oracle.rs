//! Brute-force recomputations, written independently of the core algorithms.

use std::collections::{BTreeMap, BTreeSet};

use greq_core::{Goal, Model, Privilege};

/// Undirected edge set keyed by relationship name and endpoint pair.
fn edge_set(model: &Model) -> BTreeSet<(String, String, String)> {
    let mut set = BTreeSet::new();
    for r in &model.relationships {
        set.insert((r.name.clone(), r.source.clone(), r.target.clone()));
        set.insert((r.name.clone(), r.target.clone(), r.source.clone()));
    }
    set
}

/// Index into `privilege.steps` of the first step that is not an edge
/// membership away from the previous entity.
pub fn first_invalid_step(model: &Model, privilege: &Privilege) -> Option<usize> {
    let edges = edge_set(model);
    let entities: Vec<&str> = std::iter::once(&privilege.entry_step)
        .chain(&privilege.steps)
        .map(|s| s.entity.as_str())
        .collect();
    (0..privilege.steps.len()).find(|&i| {
        let via = privilege.steps[i].via.clone().unwrap_or_default();
        !edges.contains(&(via, entities[i].to_string(), entities[i + 1].to_string()))
    })
}

/// Fixed-point closure over the edge list.
pub fn reachable(model: &Model, from: &str) -> BTreeSet<String> {
    let mut seen = BTreeSet::from([from.to_string()]);
    loop {
        let before = seen.len();
        for r in &model.relationships {
            if seen.contains(&r.source) || seen.contains(&r.target) {
                seen.insert(r.source.clone());
                seen.insert(r.target.clone());
            }
        }
        if seen.len() == before {
            return seen;
        }
    }
}

pub fn entity_coverage(model: &Model) -> f64 {
    if model.entities.is_empty() {
        return 1.0;
    }
    let touched = model
        .entities
        .iter()
        .filter(|e| {
            model.privileges.iter().any(|p| {
                p.entry_step.entity == e.name || p.steps.iter().any(|s| s.entity == e.name)
            })
        })
        .count();
    touched as f64 / model.entities.len() as f64
}

/// Leaf goals with their effective responsible agent.
pub fn leaf_owners(model: &Model) -> Vec<(String, Option<String>)> {
    fn go(goal: &Goal, inherited: Option<&String>, out: &mut Vec<(String, Option<String>)>) {
        let owner = goal.responsible.as_ref().or(inherited);
        match &goal.children {
            None => out.push((goal.name.clone(), owner.cloned())),
            Some(children) => {
                for c in children {
                    go(c, owner, out);
                }
            }
        }
    }
    let mut out = Vec::new();
    for g in &model.goals {
        go(g, None, &mut out);
    }
    out
}

/// A leaf goal is at risk when it has no privilege or one of its privileges
/// has a broken walk.
pub fn goal_at_risk(model: &Model, goal: &str) -> bool {
    let mine: Vec<&Privilege> = model.privileges.iter().filter(|p| p.goal == goal).collect();
    mine.is_empty() || mine.iter().any(|p| first_invalid_step(model, p).is_some())
}

/// Risk ratio per agent, every declared agent included.
pub fn risk_ratios(model: &Model) -> BTreeMap<String, f64> {
    let owners = leaf_owners(model);
    let mut out = BTreeMap::new();
    for org in &model.organizations {
        for agent in &org.agents {
            let leaves: Vec<&String> = owners
                .iter()
                .filter(|(_, o)| o.as_ref() == Some(&agent.name))
                .map(|(g, _)| g)
                .collect();
            let risky = leaves.iter().filter(|g| goal_at_risk(model, g)).count();
            let ratio = if leaves.is_empty() {
                0.0
            } else {
                risky as f64 / leaves.len() as f64
            };
            out.insert(agent.name.clone(), ratio);
        }
    }
    out
}
