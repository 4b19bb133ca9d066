//! The concept graph: entities as nodes, relationships as edges.
//!
//! Relationships are declared with a direction but privilege walks may follow
//! them either way, so every query here treats the graph as undirected.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;

use crate::model::{ActionSet, Model, Privilege};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConceptGraph {
    pub nodes: Vec<String>,
    pub edges: Vec<Edge>,
}

pub fn build_graph(model: &Model) -> ConceptGraph {
    ConceptGraph {
        nodes: model.entities.iter().map(|e| e.name.clone()).collect(),
        edges: model
            .relationships
            .iter()
            .map(|r| Edge {
                name: r.name.clone(),
                source: r.source.clone(),
                target: r.target.clone(),
            })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("unknown entity `{0}`")]
    UnknownEntity(String),
    #[error("unknown goal `{0}`")]
    UnknownGoal(String),
    #[error("goal `{0}` is composite; only leaf goals carry privileges")]
    CompositeGoal(String),
    #[error("goal `{0}` has no privilege")]
    NoPrivilege(String),
    #[error("privilege {privilege} of goal `{goal}` leaves the concept graph at step {step}")]
    InvalidWalk {
        goal: String,
        privilege: usize,
        step: usize,
    },
}

/// Outcome of checking one privilege walk against the graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkCheck {
    /// 0-based index into `Privilege::steps` of the first step whose
    /// relationship does not join it to the previous step's entity.
    pub first_invalid: Option<usize>,
}

impl WalkCheck {
    pub fn is_valid(self) -> bool {
        self.first_invalid.is_none()
    }
}

impl ConceptGraph {
    pub fn contains(&self, entity: &str) -> bool {
        self.nodes.iter().any(|n| n == entity)
    }

    /// True when the relationship `via` joins `a` and `b`, in either direction.
    pub fn joins(&self, via: &str, a: &str, b: &str) -> bool {
        self.edges.iter().any(|e| {
            e.name == via && ((e.source == a && e.target == b) || (e.source == b && e.target == a))
        })
    }

    fn neighbours<'a>(&'a self, entity: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.edges.iter().filter_map(move |e| {
            if e.source == entity {
                Some(e.target.as_str())
            } else if e.target == entity {
                Some(e.source.as_str())
            } else {
                None
            }
        })
    }
}

pub fn walk_is_valid(graph: &ConceptGraph, privilege: &Privilege) -> WalkCheck {
    let mut previous = privilege.entry_step.entity.as_str();
    for (i, step) in privilege.steps.iter().enumerate() {
        let joined = step
            .via
            .as_deref()
            .is_some_and(|via| graph.joins(via, previous, &step.entity));
        if !joined {
            return WalkCheck {
                first_invalid: Some(i),
            };
        }
        previous = &step.entity;
    }
    WalkCheck {
        first_invalid: None,
    }
}

/// Entities reachable from `from` over undirected edges, `from` included.
pub fn reachable_entities(
    graph: &ConceptGraph,
    from: &str,
) -> Result<BTreeSet<String>, GraphError> {
    if !graph.contains(from) {
        return Err(GraphError::UnknownEntity(from.into()));
    }
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut queue = VecDeque::from([from]);
    seen.insert(from.into());
    while let Some(node) = queue.pop_front() {
        for next in graph.neighbours(node) {
            if seen.insert(next.into()) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen)
}

/// Union of the actions granted on one entity by a goal's privileges.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EntityAccess {
    pub actions: ActionSet,
    /// First-seen order, no duplicates.
    pub updated_attributes: Vec<String>,
}

/// The partial view of the information system a leaf goal is granted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoalView {
    pub goal: String,
    /// Visited entities in walk order; each appears once.
    pub entities: Vec<String>,
    pub actions_by_entity: BTreeMap<String, EntityAccess>,
}

impl GoalView {
    pub fn access(&self, entity: &str) -> Option<&EntityAccess> {
        self.actions_by_entity.get(entity)
    }
}

/// Concatenates the goal's privilege walks in declaration order.
pub fn goal_view(model: &Model, goal: &str) -> Result<GoalView, GraphError> {
    let target = model
        .goal(goal)
        .ok_or_else(|| GraphError::UnknownGoal(goal.into()))?;
    if !target.is_leaf() {
        return Err(GraphError::CompositeGoal(goal.into()));
    }
    let graph = build_graph(model);
    let mut view = GoalView {
        goal: goal.into(),
        entities: Vec::new(),
        actions_by_entity: BTreeMap::new(),
    };
    for (pi, privilege) in model.privileges_for(goal).enumerate() {
        if let Some(step) = walk_is_valid(&graph, privilege).first_invalid {
            return Err(GraphError::InvalidWalk {
                goal: goal.into(),
                privilege: pi,
                step,
            });
        }
        for step in privilege.walk() {
            if !view.actions_by_entity.contains_key(&step.entity) {
                view.entities.push(step.entity.clone());
            }
            let access = view
                .actions_by_entity
                .entry(step.entity.clone())
                .or_default();
            access.actions = access.actions.union(step.actions);
            for attr in &step.updated_attributes {
                if !access.updated_attributes.contains(attr) {
                    access.updated_attributes.push(attr.clone());
                }
            }
        }
    }
    if view.entities.is_empty() {
        return Err(GraphError::NoPrivilege(goal.into()));
    }
    Ok(view)
}
