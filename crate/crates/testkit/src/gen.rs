//! Seeded random models.
//!
//! Generated models always satisfy the construction invariants
//! (`Model::check`). They are otherwise unconstrained: walks may leave the
//! concept graph, entries may disagree with the goal, agents may own nothing.

use greq_core::model::{Action, ActionSet, Agent, Attribute, AttributeKind, Entity, Goal, Model};
use greq_core::{Organization, Privilege, Relationship, Step};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone)]
pub struct GenParams {
    pub max_organizations: usize,
    pub max_agents: usize,
    pub max_goals: usize,
    pub max_goal_depth: usize,
    pub max_entities: usize,
    pub max_attributes: usize,
    pub max_relationships: usize,
    pub max_privileges: usize,
    pub max_steps: usize,
    /// Chance that a step follows a real edge of the current entity.
    pub p_edge_step: f64,
    /// Chance that a goal's privilege enters through the goal's declared entry.
    pub p_matching_entry: f64,
    pub p_empty_composite: f64,
    /// Use names that need quoting (spaces, accents, keywords, escapes).
    pub fancy_names: bool,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            max_organizations: 2,
            max_agents: 4,
            max_goals: 8,
            max_goal_depth: 3,
            max_entities: 6,
            max_attributes: 3,
            max_relationships: 8,
            max_privileges: 6,
            max_steps: 3,
            p_edge_step: 0.7,
            p_matching_entry: 0.8,
            p_empty_composite: 0.1,
            fancy_names: true,
        }
    }
}

const KEYWORDS: [&str; 6] = ["goal", "entry", "read", "text", "step", "for"];

fn name<R: Rng>(rng: &mut R, params: &GenParams, prefix: &str, i: usize) -> String {
    if !params.fancy_names {
        return format!("{prefix}{i}");
    }
    match rng.gen_range(0..6) {
        0 if i < KEYWORDS.len() => KEYWORDS[i].to_string(),
        1 => format!("{prefix} {i}"),
        2 => format!("É{prefix}_{i}"),
        3 => format!("{prefix}\"{i}\\"),
        _ => format!("{prefix}{i}"),
    }
}

fn actions<R: Rng>(rng: &mut R) -> ActionSet {
    loop {
        let set: ActionSet = Action::ALL
            .iter()
            .copied()
            .filter(|_| rng.gen_bool(0.4))
            .collect();
        if !set.is_empty() {
            return set;
        }
    }
}

fn step_on<R: Rng>(rng: &mut R, entity: &Entity, via: Option<String>) -> Step {
    let actions = actions(rng);
    let updated = if actions.contains(Action::Update) {
        entity
            .attributes
            .iter()
            .filter(|_| rng.gen_bool(0.5))
            .map(|a| a.name.clone())
            .collect()
    } else {
        Vec::new()
    };
    Step {
        entity: entity.name.clone(),
        via,
        actions,
        updated_attributes: updated,
    }
}

struct GoalBudget {
    left: usize,
    counter: usize,
}

fn goal<R: Rng>(
    rng: &mut R,
    params: &GenParams,
    budget: &mut GoalBudget,
    depth: usize,
    agents: &[String],
    entities: &[Entity],
) -> Goal {
    budget.left -= 1;
    let i = budget.counter;
    budget.counter += 1;
    let goal_name = name(rng, params, "G", i);
    if rng.gen_bool(params.p_empty_composite) {
        return Goal::composite(goal_name, Vec::new());
    }
    let mut g = Goal::leaf(goal_name);
    if !agents.is_empty() && rng.gen_bool(0.6) {
        g.responsible = agents.choose(rng).cloned();
    }
    if !entities.is_empty() && rng.gen_bool(0.7) {
        g.entry = entities.choose(rng).map(|e| e.name.clone());
    }
    if depth < params.max_goal_depth && budget.left > 0 && rng.gen_bool(0.4) {
        let mut children = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            if budget.left == 0 {
                break;
            }
            children.push(goal(rng, params, budget, depth + 1, agents, entities));
        }
        g.children = Some(children);
    }
    g
}

fn random_privilege<R: Rng>(
    rng: &mut R,
    params: &GenParams,
    model: &Model,
    goal: &Goal,
    edges_only: bool,
) -> Option<Privilege> {
    if model.entities.is_empty() {
        return None;
    }
    let entry = match &goal.entry {
        Some(e) if edges_only || rng.gen_bool(params.p_matching_entry) => {
            model.entity(e).expect("goal entry resolves")
        }
        _ => model.entities.choose(rng)?,
    };
    let entry_step = step_on(rng, entry, None);
    let mut steps = Vec::new();
    let mut current = entry.name.clone();
    for _ in 0..rng.gen_range(0..=params.max_steps) {
        let incident: Vec<&Relationship> = model
            .relationships
            .iter()
            .filter(|r| r.source == current || r.target == current)
            .collect();
        let (via, to) = if (edges_only || rng.gen_bool(params.p_edge_step)) && !incident.is_empty()
        {
            let r = incident.choose(rng)?;
            let other = if r.source == current {
                &r.target
            } else {
                &r.source
            };
            (r.name.clone(), other.clone())
        } else if edges_only {
            break;
        } else if let Some(r) = model.relationships.choose(rng) {
            (r.name.clone(), model.entities.choose(rng)?.name.clone())
        } else {
            break;
        };
        let entity = model.entity(&to).expect("entity exists");
        steps.push(step_on(rng, entity, Some(via)));
        current = to;
    }
    Some(Privilege {
        goal: goal.name.clone(),
        entry_step,
        steps,
    })
}

/// A random model that passes `Model::check`.
pub fn random_model<R: Rng>(rng: &mut R, params: &GenParams, source_name: &str) -> Model {
    let mut model = Model::new(source_name);

    let n_agents = rng.gen_range(0..=params.max_agents);
    let n_orgs = if n_agents == 0 {
        rng.gen_range(0..=1)
    } else {
        rng.gen_range(1..=params.max_organizations)
    };
    let mut agents = Vec::new();
    for o in 0..n_orgs {
        model.organizations.push(Organization {
            name: name(rng, params, "O", o),
            agents: Vec::new(),
        });
    }
    for a in 0..n_agents {
        let agent = name(rng, params, "A", a);
        agents.push(agent.clone());
        let org = rng.gen_range(0..n_orgs);
        model.organizations[org].agents.push(Agent { name: agent });
    }

    let kinds = [
        AttributeKind::Text,
        AttributeKind::Number,
        AttributeKind::Date,
        AttributeKind::Boolean,
    ];
    for e in 0..rng.gen_range(1..=params.max_entities) {
        let attributes = (0..rng.gen_range(0..=params.max_attributes))
            .map(|k| Attribute {
                name: name(rng, params, "a", k),
                kind: *kinds.choose(rng).unwrap(),
            })
            .collect();
        model.entities.push(Entity {
            name: name(rng, params, "E", e),
            attributes,
        });
    }
    for r in 0..rng.gen_range(0..=params.max_relationships) {
        let source = model.entities.choose(rng).unwrap().name.clone();
        let target = model.entities.choose(rng).unwrap().name.clone();
        model.relationships.push(Relationship {
            name: name(rng, params, "r", r),
            source,
            target,
        });
    }

    let mut budget = GoalBudget {
        left: rng.gen_range(0..=params.max_goals),
        counter: 0,
    };
    while budget.left > 0 && model.goals.len() < 3 {
        let g = goal(rng, params, &mut budget, 1, &agents, &model.entities);
        model.goals.push(g);
    }

    let leaves: Vec<Goal> = model.leaf_goals().iter().map(|v| v.goal.clone()).collect();
    if !leaves.is_empty() {
        for _ in 0..rng.gen_range(0..=params.max_privileges) {
            let g = leaves.choose(rng).unwrap();
            if let Some(p) = random_privilege(rng, params, &model, g, false) {
                model.privileges.push(p);
            }
        }
    }

    debug_assert_eq!(model.check(), Ok(()));
    model
}

/// `model` plus one privilege that follows real edges and enters through the
/// goal's declared entry. `None` when the model has no leaf goal.
pub fn add_valid_privilege<R: Rng>(
    rng: &mut R,
    params: &GenParams,
    model: &Model,
) -> Option<Model> {
    let leaves: Vec<Goal> = model.leaf_goals().iter().map(|v| v.goal.clone()).collect();
    let goal = leaves.choose(rng)?;
    let privilege = random_privilege(rng, params, model, goal, true)?;
    let mut out = model.clone();
    out.privileges.push(privilege);
    Some(out)
}

/// A variant of `model` with no error-severity finding: broken or
/// mismatched privileges are dropped, unowned leaf goals get an agent, bare
/// leaf goals get a valid privilege and idle agents are removed.
pub fn cleaned<R: Rng>(rng: &mut R, params: &GenParams, model: &Model) -> Model {
    let mut m = model.clone();
    let broken: Vec<bool> = m
        .privileges
        .iter()
        .map(|p| {
            let goal_entry = m.goal(&p.goal).and_then(|g| g.entry.as_ref());
            crate::oracle::first_invalid_step(&m, p).is_some()
                || goal_entry.is_some_and(|e| *e != p.entry_step.entity)
        })
        .collect();
    let mut flags = broken.into_iter();
    m.privileges.retain(|_| !flags.next().unwrap());

    let unowned: Vec<String> = m
        .leaf_goals()
        .iter()
        .filter(|v| v.responsible.is_none())
        .map(|v| v.goal.name.clone())
        .collect();
    if !unowned.is_empty() && m.agents().next().is_none() {
        if m.organizations.is_empty() {
            m.organizations.push(Organization {
                name: "Org".into(),
                agents: Vec::new(),
            });
        }
        m.organizations[0].agents.push(Agent {
            name: "Agent".into(),
        });
    }
    let agents: Vec<String> = m.agents().map(|a| a.name.clone()).collect();
    for name in &unowned {
        let agent = agents.choose(rng).cloned();
        set_responsible(&mut m.goals, name, agent);
    }

    let bare: Vec<Goal> = m
        .leaf_goals()
        .iter()
        .filter(|v| m.privileges_for(&v.goal.name).next().is_none())
        .map(|v| v.goal.clone())
        .collect();
    for goal in &bare {
        let p = random_privilege(rng, params, &m, goal, true).expect("models have entities");
        m.privileges.push(p);
    }

    let mut owners = std::collections::BTreeSet::new();
    for v in m.goals_preorder() {
        if let Some(a) = &v.goal.responsible {
            owners.insert(a.clone());
        }
    }
    for org in &mut m.organizations {
        org.agents.retain(|a| owners.contains(&a.name));
    }
    debug_assert_eq!(m.check(), Ok(()));
    m
}

fn set_responsible(goals: &mut [Goal], name: &str, agent: Option<String>) -> bool {
    for g in goals {
        if g.name == name {
            g.responsible = agent;
            return true;
        }
        if let Some(children) = &mut g.children {
            if set_responsible(children, name, agent.clone()) {
                return true;
            }
        }
    }
    false
}
