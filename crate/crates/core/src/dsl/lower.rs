//! Syntax tree to [`Model`], keeping a site table so invariant violations
//! found by [`Model::check`] point back into the source text.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use super::parser::{Decl, GoalDecl, StepDecl};
use super::RawError;
use crate::model::{
    Agent, Attribute, Entity, Goal, Model, ModelError, Organization, Privilege, Relationship, Site,
    Step, StepField, StepPos,
};

#[derive(Default)]
struct Spans(BTreeMap<Site, Range<usize>>);

impl Spans {
    fn put(&mut self, site: Site, range: &Range<usize>) {
        self.0.insert(site, range.clone());
    }
}

pub(crate) fn lower(decls: Vec<Decl>, file_name: &str) -> Result<Model, Vec<RawError>> {
    let mut model = Model::new(file_name);
    let mut spans = Spans::default();

    for decl in decls {
        match decl {
            Decl::Organization(org) => {
                let oi = model.organizations.len();
                spans.put(Site::Organization(oi), &org.name.range);
                let agents = org
                    .agents
                    .into_iter()
                    .enumerate()
                    .map(|(ai, a)| {
                        spans.put(Site::Agent { org: oi, agent: ai }, &a.range);
                        Agent { name: a.text }
                    })
                    .collect();
                model.organizations.push(Organization {
                    name: org.name.text,
                    agents,
                });
            }
            Decl::Goal(goal) => {
                let path = alloc::vec![model.goals.len()];
                let goal = lower_goal(goal, path, &mut spans);
                model.goals.push(goal);
            }
            Decl::Entity(entity) => {
                let ei = model.entities.len();
                spans.put(Site::Entity(ei), &entity.name.range);
                let attributes = entity
                    .attributes
                    .into_iter()
                    .enumerate()
                    .map(|(ai, (name, kind))| {
                        spans.put(
                            Site::Attribute {
                                entity: ei,
                                attribute: ai,
                            },
                            &name.range,
                        );
                        Attribute {
                            name: name.text,
                            kind,
                        }
                    })
                    .collect();
                model.entities.push(Entity {
                    name: entity.name.text,
                    attributes,
                });
            }
            Decl::Relationship(rel) => {
                let ri = model.relationships.len();
                spans.put(Site::Relationship(ri), &rel.name.range);
                spans.put(Site::RelationshipSource(ri), &rel.source.range);
                spans.put(Site::RelationshipTarget(ri), &rel.target.range);
                model.relationships.push(Relationship {
                    name: rel.name.text,
                    source: rel.source.text,
                    target: rel.target.text,
                });
            }
            Decl::Privilege(p) => {
                let pi = model.privileges.len();
                spans.put(Site::PrivilegeGoal(pi), &p.goal.range);
                let entry_step = lower_step(p.entry, pi, StepPos::Entry, &mut spans);
                let steps = p
                    .steps
                    .into_iter()
                    .enumerate()
                    .map(|(si, s)| lower_step(s, pi, StepPos::Step(si), &mut spans))
                    .collect();
                model.privileges.push(Privilege {
                    goal: p.goal.text,
                    entry_step,
                    steps,
                });
            }
        }
    }

    match model.check() {
        Ok(()) => Ok(model),
        Err(errors) => Err(errors.into_iter().map(|e| to_raw(e, &spans)).collect()),
    }
}

fn lower_goal(decl: GoalDecl, path: Vec<usize>, spans: &mut Spans) -> Goal {
    spans.put(Site::Goal(path.clone()), &decl.name.range);
    if let Some(r) = &decl.responsible {
        spans.put(Site::GoalResponsible(path.clone()), &r.range);
    }
    if let Some(e) = &decl.entry {
        spans.put(Site::GoalEntry(path.clone()), &e.range);
    }
    let has_props = decl.responsible.is_some() || decl.entry.is_some();
    let children = match decl.body {
        Some(body) if !body.is_empty() => Some(
            body.into_iter()
                .enumerate()
                .map(|(i, child)| {
                    let mut p = path.clone();
                    p.push(i);
                    lower_goal(child, p, spans)
                })
                .collect(),
        ),
        // `goal X {}`: a decomposition that has not been filled in yet
        Some(_) if !has_props => Some(Vec::new()),
        _ => None,
    };
    Goal {
        name: decl.name.text,
        responsible: decl.responsible.map(|n| n.text),
        entry: decl.entry.map(|n| n.text),
        children,
    }
}

fn lower_step(decl: StepDecl, privilege: usize, step: StepPos, spans: &mut Spans) -> Step {
    let at = |field| Site::Step {
        privilege,
        step,
        field,
    };
    spans.put(at(StepField::Entity), &decl.entity.range);
    spans.put(at(StepField::Actions), &decl.actions_range);
    if let Some(via) = &decl.via {
        spans.put(at(StepField::Via), &via.range);
    }
    for (k, name) in decl.updates.iter().enumerate() {
        spans.put(at(StepField::UpdatedAttribute(k)), &name.range);
    }
    Step {
        entity: decl.entity.text,
        via: decl.via.map(|n| n.text),
        actions: decl.actions.into_iter().collect(),
        updated_attributes: decl
            .updates
            .into_iter()
            .map(|n| n.text)
            .collect::<Vec<String>>(),
    }
}

fn to_raw(error: ModelError, spans: &Spans) -> RawError {
    let range_of = |site: &Site| {
        spans
            .0
            .get(site)
            .cloned()
            .unwrap_or_else(|| unreachable!("every lowered site has a span: {site}"))
    };
    let mut raw = RawError::new(range_of(error.site()), error.message());
    if let ModelError::Duplicate { first, .. } = &error {
        raw.secondary = Some(range_of(first));
    }
    raw
}
