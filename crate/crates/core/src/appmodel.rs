//! WebML-style application model: a data model plus one site view per agent.
//!
//! Derivation, per leaf goal, is one page named after the goal. Every step of
//! the goal's privileges contributes units on its entity:
//!
//! | action | units |
//! |--------|-------|
//! | read   | index, details |
//! | create | entry form |
//! | update | modify form listing the updated attributes |
//! | delete | none |
//!
//! Units of one step are chained by navigation links in the order index,
//! details, entry form, modify form. Each traversal step is reached from
//! every unit of the previous step by a link carrying the relationship name;
//! the link lands on the step's details unit when it has one, otherwise on its
//! first unit. A step without units breaks the chain.
//!
//! Only the structure and navigation axes are covered; there is no
//! presentation layer.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::Serialize;

use crate::model::{Action, Entity, Model, Relationship, Step};
use crate::validate::run_diagnostics;

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct AppModel {
    pub data_model: DataModel,
    pub site_views: Vec<SiteView>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct DataModel {
    pub entities: Vec<Entity>,
    pub relationships: Vec<Relationship>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct SiteView {
    pub agent: String,
    pub pages: Vec<Page>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct Page {
    /// The leaf goal the page serves.
    pub name: String,
    pub units: Vec<Unit>,
    pub links: Vec<Link>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum UnitKind {
    Index,
    Details,
    EntryForm,
    ModifyForm,
}

impl UnitKind {
    pub fn as_str(self) -> &'static str {
        match self {
            UnitKind::Index => "index",
            UnitKind::Details => "details",
            UnitKind::EntryForm => "entry_form",
            UnitKind::ModifyForm => "modify_form",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct Unit {
    /// `pN.sK.KIND`: N-th privilege of the goal (from 1), K-th step (0 = entry).
    pub id: String,
    pub kind: UnitKind,
    pub entity: String,
    /// Fields of a modify form.
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Vec::is_empty"))]
    pub attributes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct Link {
    pub source: String,
    pub target: String,
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub via: LinkVia,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum LinkVia {
    /// Between units of the same step.
    Navigation,
    /// Along a relationship, between consecutive steps.
    Relationship { relationship: String },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AppModelError {
    #[error("model has error diagnostics ({}); fix them before exporting", .rules.join(", "))]
    Blocked { rules: Vec<&'static str> },
}

/// Number of units a step yields.
pub fn units_for_actions(step: &Step) -> usize {
    step.actions
        .iter()
        .map(|a| match a {
            Action::Read => 2,
            Action::Create | Action::Update => 1,
            Action::Delete => 0,
        })
        .sum()
}

pub fn emit_app_model(model: &Model) -> Result<AppModel, AppModelError> {
    let report = run_diagnostics(model);
    if report.has_errors() {
        return Err(AppModelError::Blocked {
            rules: report.blocking_rules(),
        });
    }

    let visits = model.goals_preorder();
    let mut site_views = Vec::new();
    for agent in model.agents() {
        let owned: Vec<_> = visits
            .iter()
            .filter(|v| v.responsible == Some(agent.name.as_str()))
            .collect();
        if owned.is_empty() {
            continue;
        }
        let pages = owned
            .iter()
            .filter(|v| v.goal.is_leaf())
            .map(|v| page_for_goal(model, &v.goal.name))
            .collect();
        site_views.push(SiteView {
            agent: agent.name.clone(),
            pages,
        });
    }

    Ok(AppModel {
        data_model: DataModel {
            entities: model.entities.clone(),
            relationships: model.relationships.clone(),
        },
        site_views,
    })
}

fn page_for_goal(model: &Model, goal: &str) -> Page {
    let mut page = Page {
        name: goal.into(),
        units: Vec::new(),
        links: Vec::new(),
    };
    for (n, privilege) in model.privileges_for(goal).enumerate() {
        let mut previous: Vec<String> = Vec::new();
        for (k, step) in privilege.walk().enumerate() {
            let units = step_units(step, n + 1, k);
            for pair in units.windows(2) {
                page.links.push(Link {
                    source: pair[0].id.clone(),
                    target: pair[1].id.clone(),
                    via: LinkVia::Navigation,
                });
            }
            if let (Some(via), Some(target)) = (&step.via, landing_unit(&units)) {
                for source in &previous {
                    page.links.push(Link {
                        source: source.clone(),
                        target: target.id.clone(),
                        via: LinkVia::Relationship {
                            relationship: via.clone(),
                        },
                    });
                }
            }
            previous = units.iter().map(|u| u.id.clone()).collect();
            page.units.extend(units);
        }
    }
    page
}

fn landing_unit(units: &[Unit]) -> Option<&Unit> {
    units
        .iter()
        .find(|u| u.kind == UnitKind::Details)
        .or_else(|| units.first())
}

fn step_units(step: &Step, privilege: usize, index: usize) -> Vec<Unit> {
    let mut kinds = Vec::new();
    if step.actions.contains(Action::Read) {
        kinds.push(UnitKind::Index);
        kinds.push(UnitKind::Details);
    }
    if step.actions.contains(Action::Create) {
        kinds.push(UnitKind::EntryForm);
    }
    if step.actions.contains(Action::Update) {
        kinds.push(UnitKind::ModifyForm);
    }
    kinds
        .into_iter()
        .map(|kind| Unit {
            id: format!("p{privilege}.s{index}.{}", kind.as_str()),
            kind,
            entity: step.entity.clone(),
            attributes: if kind == UnitKind::ModifyForm {
                step.updated_attributes.clone()
            } else {
                Vec::new()
            },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ActionSet;

    fn set(actions: &[Action]) -> ActionSet {
        actions.iter().copied().collect()
    }

    #[test]
    fn unit_counts_per_action() {
        assert_eq!(
            units_for_actions(&Step::entry("E", set(&[Action::Read]))),
            2
        );
        assert_eq!(
            units_for_actions(&Step::entry("E", set(&[Action::Delete]))),
            0
        );
        assert_eq!(units_for_actions(&Step::entry("E", set(&Action::ALL))), 4);
        let units = step_units(
            &Step::entry("E", set(&Action::ALL)).with_updates(["a"]),
            1,
            0,
        );
        let kinds: Vec<_> = units.iter().map(|u| u.kind).collect();
        assert_eq!(
            kinds,
            [
                UnitKind::Index,
                UnitKind::Details,
                UnitKind::EntryForm,
                UnitKind::ModifyForm
            ]
        );
        assert_eq!(units[3].attributes, ["a"]);
        assert_eq!(units[0].id, "p1.s0.index");
    }

    #[test]
    fn landing_prefers_details() {
        let units = step_units(
            &Step::entry("E", set(&[Action::Create, Action::Read])),
            1,
            1,
        );
        assert_eq!(landing_unit(&units).unwrap().kind, UnitKind::Details);
        let units = step_units(&Step::entry("E", set(&[Action::Update])), 1, 1);
        assert_eq!(landing_unit(&units).unwrap().kind, UnitKind::ModifyForm);
        assert!(landing_unit(&[]).is_none());
    }

    #[test]
    fn blocked_by_error_diagnostics() {
        let mut m = Model::new("m");
        m.organizations.push(crate::model::Organization {
            name: "O".into(),
            agents: alloc::vec![crate::model::Agent {
                name: "Seul".into()
            }],
        });
        let err = emit_app_model(&m).unwrap_err();
        assert_eq!(
            err,
            AppModelError::Blocked {
                rules: alloc::vec!["R001"]
            }
        );
        assert_eq!(
            alloc::format!("{err}"),
            "model has error diagnostics (R001); fix them before exporting"
        );
    }
}
