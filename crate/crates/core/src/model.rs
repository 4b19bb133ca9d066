//! Resolved domain types for requirement models.
//!
//! Cross-references are held by name. [`Model::check`] enforces that every
//! name resolves to exactly one declaration of the right kind; models coming
//! out of the parser or the interchange decoder have always passed it.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct Model {
    pub source_name: String,
    pub organizations: Vec<Organization>,
    /// Roots of the goal decomposition forest.
    pub goals: Vec<Goal>,
    pub entities: Vec<Entity>,
    pub relationships: Vec<Relationship>,
    pub privileges: Vec<Privilege>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct Organization {
    pub name: String,
    pub agents: Vec<Agent>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct Agent {
    pub name: String,
}

/// A node of the goal decomposition forest.
///
/// `children` is `None` for a leaf goal. `Some` marks a composite goal; an
/// empty list is a degenerate composite (written `goal X {}`), which the
/// diagnostics engine reports as a warning.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct Goal {
    pub name: String,
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "Option::is_none")
    )]
    pub responsible: Option<String>,
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "Option::is_none")
    )]
    pub entry: Option<String>,
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "Option::is_none")
    )]
    pub children: Option<Vec<Goal>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct Entity {
    pub name: String,
    pub attributes: Vec<Attribute>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct Attribute {
    pub name: String,
    pub kind: AttributeKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum AttributeKind {
    Text,
    Number,
    Date,
    Boolean,
}

/// A binary, directed relationship between two entities. Self-loops are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct Relationship {
    pub name: String,
    pub source: String,
    pub target: String,
}

/// A goal-anchored walk through the concept graph: the partial view of the
/// information system granted to reach the goal.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct Privilege {
    pub goal: String,
    pub entry_step: Step,
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct Step {
    pub entity: String,
    /// Relationship traversed to reach `entity`; absent on the entry step.
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "Option::is_none")
    )]
    pub via: Option<String>,
    pub actions: ActionSet,
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "Vec::is_empty")
    )]
    pub updated_attributes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Action {
    Create,
    Read,
    Update,
    Delete,
}

impl AttributeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AttributeKind::Text => "text",
            AttributeKind::Number => "number",
            AttributeKind::Date => "date",
            AttributeKind::Boolean => "boolean",
        }
    }
}

impl Action {
    pub const ALL: [Action; 4] = [Action::Create, Action::Read, Action::Update, Action::Delete];

    pub fn as_str(self) -> &'static str {
        match self {
            Action::Create => "create",
            Action::Read => "read",
            Action::Update => "update",
            Action::Delete => "delete",
        }
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A set of CRUD actions. Iterates in the fixed order create, read, update, delete.
#[derive(Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct ActionSet(u8);

impl ActionSet {
    pub const fn empty() -> Self {
        ActionSet(0)
    }

    pub fn contains(self, action: Action) -> bool {
        self.0 & action.bit() != 0
    }

    pub fn insert(&mut self, action: Action) {
        self.0 |= action.bit();
    }

    pub fn union(self, other: ActionSet) -> ActionSet {
        ActionSet(self.0 | other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = Action> {
        Action::ALL.into_iter().filter(move |a| self.contains(*a))
    }
}

impl FromIterator<Action> for ActionSet {
    fn from_iter<I: IntoIterator<Item = Action>>(iter: I) -> Self {
        let mut set = ActionSet::empty();
        for a in iter {
            set.insert(a);
        }
        set
    }
}

impl fmt::Debug for ActionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for ActionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(a.as_str())?;
        }
        Ok(())
    }
}

#[cfg(feature = "serde")]
impl Serialize for ActionSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

#[cfg(feature = "serde")]
impl<'de> Deserialize<'de> for ActionSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let actions = Vec::<Action>::deserialize(deserializer)?;
        Ok(actions.into_iter().collect())
    }
}

impl Goal {
    pub fn leaf(name: impl Into<String>) -> Self {
        Goal {
            name: name.into(),
            responsible: None,
            entry: None,
            children: None,
        }
    }

    pub fn composite(name: impl Into<String>, children: Vec<Goal>) -> Self {
        Goal {
            name: name.into(),
            responsible: None,
            entry: None,
            children: Some(children),
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }

    pub fn children(&self) -> &[Goal] {
        self.children.as_deref().unwrap_or(&[])
    }
}

impl Step {
    pub fn entry(entity: impl Into<String>, actions: ActionSet) -> Self {
        Step {
            entity: entity.into(),
            via: None,
            actions,
            updated_attributes: Vec::new(),
        }
    }

    pub fn via(via: impl Into<String>, entity: impl Into<String>, actions: ActionSet) -> Self {
        Step {
            entity: entity.into(),
            via: Some(via.into()),
            actions,
            updated_attributes: Vec::new(),
        }
    }

    pub fn with_updates<I, S>(mut self, attributes: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.updated_attributes = attributes.into_iter().map(Into::into).collect();
        self
    }
}

impl Step {
    /// Actions with the updated attributes inline, e.g. `create, update(titre, auteurs)`.
    pub fn actions_text(&self) -> String {
        let mut out = String::new();
        for (i, action) in self.actions.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(action.as_str());
            if action == Action::Update && !self.updated_attributes.is_empty() {
                out.push('(');
                out.push_str(&self.updated_attributes.join(", "));
                out.push(')');
            }
        }
        out
    }
}

impl Privilege {
    /// Entry step followed by the traversal steps.
    pub fn walk(&self) -> impl Iterator<Item = &Step> {
        core::iter::once(&self.entry_step).chain(self.steps.iter())
    }
}

/// A goal visited during a pre-order walk of the forest.
#[derive(Debug, Clone, Copy)]
pub struct GoalVisit<'a> {
    pub goal: &'a Goal,
    pub parent: Option<&'a Goal>,
    /// Nearest declared `responsible` on the goal or one of its ancestors.
    pub responsible: Option<&'a str>,
    /// 1 for roots.
    pub depth: usize,
}

impl Model {
    pub fn new(source_name: impl Into<String>) -> Self {
        Model {
            source_name: source_name.into(),
            ..Model::default()
        }
    }

    pub fn agents(&self) -> impl Iterator<Item = &Agent> {
        self.organizations.iter().flat_map(|o| o.agents.iter())
    }

    /// Every goal in pre-order, with inherited responsibility resolved.
    pub fn goals_preorder(&self) -> Vec<GoalVisit<'_>> {
        fn walk<'a>(
            goal: &'a Goal,
            parent: Option<&'a Goal>,
            inherited: Option<&'a str>,
            depth: usize,
            out: &mut Vec<GoalVisit<'a>>,
        ) {
            let responsible = goal.responsible.as_deref().or(inherited);
            out.push(GoalVisit {
                goal,
                parent,
                responsible,
                depth,
            });
            for child in goal.children() {
                walk(child, Some(goal), responsible, depth + 1, out);
            }
        }
        let mut out = Vec::new();
        for root in &self.goals {
            walk(root, None, None, 1, &mut out);
        }
        out
    }

    pub fn leaf_goals(&self) -> Vec<GoalVisit<'_>> {
        self.goals_preorder()
            .into_iter()
            .filter(|v| v.goal.is_leaf())
            .collect()
    }

    pub fn goal(&self, name: &str) -> Option<&Goal> {
        self.goals_preorder()
            .into_iter()
            .find(|v| v.goal.name == name)
            .map(|v| v.goal)
    }

    pub fn entity(&self, name: &str) -> Option<&Entity> {
        self.entities.iter().find(|e| e.name == name)
    }

    pub fn relationship(&self, name: &str) -> Option<&Relationship> {
        self.relationships.iter().find(|r| r.name == name)
    }

    pub fn privileges_for<'a>(&'a self, goal: &'a str) -> impl Iterator<Item = &'a Privilege> + 'a {
        self.privileges.iter().filter(move |p| p.goal == goal)
    }

    /// Length of the longest root-to-leaf chain; 0 for an empty forest.
    pub fn goal_depth(&self) -> usize {
        self.goals_preorder()
            .iter()
            .map(|v| v.depth)
            .max()
            .unwrap_or(0)
    }

    /// Checks every structural invariant: unique names per kind, resolved
    /// references, privileges on leaf goals only, well-formed steps.
    ///
    /// Errors come back in declaration order.
    pub fn check(&self) -> Result<(), Vec<ModelError>> {
        let mut errors = Vec::new();
        let mut names = NameTable::default();

        for (oi, org) in self.organizations.iter().enumerate() {
            names.declare(
                ElementKind::Organization,
                &org.name,
                Site::Organization(oi),
                &mut errors,
            );
            for (ai, agent) in org.agents.iter().enumerate() {
                names.declare(
                    ElementKind::Agent,
                    &agent.name,
                    Site::Agent { org: oi, agent: ai },
                    &mut errors,
                );
            }
        }

        let mut goal_paths = Vec::new();
        for (i, root) in self.goals.iter().enumerate() {
            collect_goal_paths(root, alloc::vec![i], &mut goal_paths);
        }
        for (goal, path) in &goal_paths {
            names.declare(
                ElementKind::Goal,
                &goal.name,
                Site::Goal(path.clone()),
                &mut errors,
            );
            let degenerate = goal.children.as_ref().is_some_and(Vec::is_empty);
            if degenerate && (goal.responsible.is_some() || goal.entry.is_some()) {
                errors.push(ModelError::EmptyCompositeWithProperties {
                    goal: goal.name.clone(),
                    site: Site::Goal(path.clone()),
                });
            }
        }

        for (ei, entity) in self.entities.iter().enumerate() {
            names.declare(
                ElementKind::Entity,
                &entity.name,
                Site::Entity(ei),
                &mut errors,
            );
            let mut attrs: BTreeMap<&str, usize> = BTreeMap::new();
            for (ai, attr) in entity.attributes.iter().enumerate() {
                let site = Site::Attribute {
                    entity: ei,
                    attribute: ai,
                };
                if attr.name.is_empty() {
                    errors.push(ModelError::EmptyName {
                        kind: ElementKind::Attribute,
                        site,
                    });
                } else if let Some(&first) = attrs.get(attr.name.as_str()) {
                    errors.push(ModelError::Duplicate {
                        kind: ElementKind::Attribute,
                        name: attr.name.clone(),
                        first: Site::Attribute {
                            entity: ei,
                            attribute: first,
                        },
                        second: site,
                    });
                } else {
                    attrs.insert(&attr.name, ai);
                }
            }
        }
        for (ri, rel) in self.relationships.iter().enumerate() {
            names.declare(
                ElementKind::Relationship,
                &rel.name,
                Site::Relationship(ri),
                &mut errors,
            );
        }

        for (goal, path) in &goal_paths {
            if let Some(agent) = &goal.responsible {
                names.resolve(
                    ElementKind::Agent,
                    agent,
                    Site::GoalResponsible(path.clone()),
                    &mut errors,
                );
            }
            if let Some(entity) = &goal.entry {
                names.resolve(
                    ElementKind::Entity,
                    entity,
                    Site::GoalEntry(path.clone()),
                    &mut errors,
                );
            }
        }
        for (ri, rel) in self.relationships.iter().enumerate() {
            names.resolve(
                ElementKind::Entity,
                &rel.source,
                Site::RelationshipSource(ri),
                &mut errors,
            );
            names.resolve(
                ElementKind::Entity,
                &rel.target,
                Site::RelationshipTarget(ri),
                &mut errors,
            );
        }

        for (pi, privilege) in self.privileges.iter().enumerate() {
            let goal_site = Site::PrivilegeGoal(pi);
            match goal_paths.iter().find(|(g, _)| g.name == privilege.goal) {
                None => errors.push(ModelError::Unresolved {
                    kind: ElementKind::Goal,
                    name: privilege.goal.clone(),
                    site: goal_site,
                }),
                Some((goal, _)) if !goal.is_leaf() => {
                    errors.push(ModelError::PrivilegeOnComposite {
                        goal: goal.name.clone(),
                        site: goal_site,
                    })
                }
                Some(_) => {}
            }
            for (pos, step) in privilege.walk().enumerate() {
                let pos = StepPos::from_walk_index(pos);
                self.check_step(pi, pos, step, &names, &mut errors);
            }
        }

        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }

    fn check_step(
        &self,
        privilege: usize,
        step_pos: StepPos,
        step: &Step,
        names: &NameTable<'_>,
        errors: &mut Vec<ModelError>,
    ) {
        let at = |field| Site::Step {
            privilege,
            step: step_pos,
            field,
        };
        match (step_pos, &step.via) {
            (StepPos::Entry, Some(_)) => errors.push(ModelError::EntryStepHasVia {
                site: at(StepField::Via),
            }),
            (StepPos::Step(_), None) => errors.push(ModelError::MissingVia {
                site: at(StepField::Via),
            }),
            (_, Some(via)) => {
                names.resolve(ElementKind::Relationship, via, at(StepField::Via), errors);
            }
            (StepPos::Entry, None) => {}
        }
        let entity_known = names.resolve(
            ElementKind::Entity,
            &step.entity,
            at(StepField::Entity),
            errors,
        );
        if step.actions.is_empty() {
            errors.push(ModelError::EmptyActions {
                site: at(StepField::Actions),
            });
        }
        if !step.updated_attributes.is_empty() && !step.actions.contains(Action::Update) {
            errors.push(ModelError::UpdatesWithoutUpdate {
                site: at(StepField::Actions),
            });
        }
        if entity_known {
            let entity = self.entity(&step.entity).expect("resolved above");
            for (k, attr) in step.updated_attributes.iter().enumerate() {
                if !entity.attributes.iter().any(|a| &a.name == attr) {
                    errors.push(ModelError::UnknownAttribute {
                        entity: entity.name.clone(),
                        attribute: attr.clone(),
                        site: at(StepField::UpdatedAttribute(k)),
                    });
                }
            }
        }
    }
}

fn collect_goal_paths<'a>(goal: &'a Goal, path: Vec<usize>, out: &mut Vec<(&'a Goal, Vec<usize>)>) {
    out.push((goal, path.clone()));
    for (i, child) in goal.children().iter().enumerate() {
        let mut p = path.clone();
        p.push(i);
        collect_goal_paths(child, p, out);
    }
}

#[derive(Default)]
struct NameTable<'a> {
    declared: BTreeMap<(ElementKind, &'a str), Site>,
}

impl<'a> NameTable<'a> {
    fn declare(
        &mut self,
        kind: ElementKind,
        name: &'a str,
        site: Site,
        errors: &mut Vec<ModelError>,
    ) {
        if name.is_empty() {
            errors.push(ModelError::EmptyName { kind, site });
            return;
        }
        match self.declared.get(&(kind, name)) {
            Some(first) => errors.push(ModelError::Duplicate {
                kind,
                name: name.into(),
                first: first.clone(),
                second: site,
            }),
            None => {
                self.declared.insert((kind, name), site);
            }
        }
    }

    fn resolve(
        &self,
        kind: ElementKind,
        name: &str,
        site: Site,
        errors: &mut Vec<ModelError>,
    ) -> bool {
        let found = self.declared.contains_key(&(kind, name));
        if !found {
            errors.push(ModelError::Unresolved {
                kind,
                name: name.into(),
                site,
            });
        }
        found
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ElementKind {
    Organization,
    Agent,
    Goal,
    Entity,
    Attribute,
    Relationship,
    Privilege,
}

impl ElementKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ElementKind::Organization => "organization",
            ElementKind::Agent => "agent",
            ElementKind::Goal => "goal",
            ElementKind::Entity => "entity",
            ElementKind::Attribute => "attribute",
            ElementKind::Relationship => "relationship",
            ElementKind::Privilege => "privilege",
        }
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Position of a step inside a privilege walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StepPos {
    Entry,
    /// 0-based index into `Privilege::steps`.
    Step(usize),
}

impl StepPos {
    fn from_walk_index(i: usize) -> Self {
        if i == 0 {
            StepPos::Entry
        } else {
            StepPos::Step(i - 1)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StepField {
    Entity,
    Via,
    Actions,
    UpdatedAttribute(usize),
}

/// Index-based location of a model element or one of its reference fields.
///
/// The parser keeps a table from sites to source spans so that errors raised
/// by [`Model::check`] can be reported at the right place in the text.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Site {
    Organization(usize),
    Agent {
        org: usize,
        agent: usize,
    },
    /// Index path from a root goal down through `children`.
    Goal(Vec<usize>),
    GoalResponsible(Vec<usize>),
    GoalEntry(Vec<usize>),
    Entity(usize),
    Attribute {
        entity: usize,
        attribute: usize,
    },
    Relationship(usize),
    RelationshipSource(usize),
    RelationshipTarget(usize),
    PrivilegeGoal(usize),
    Step {
        privilege: usize,
        step: StepPos,
        field: StepField,
    },
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn path(f: &mut fmt::Formatter<'_>, p: &[usize]) -> fmt::Result {
            f.write_str("goals")?;
            for (i, idx) in p.iter().enumerate() {
                if i > 0 {
                    f.write_str(".children")?;
                }
                write!(f, "[{idx}]")?;
            }
            Ok(())
        }
        match self {
            Site::Organization(i) => write!(f, "organizations[{i}]"),
            Site::Agent { org, agent } => write!(f, "organizations[{org}].agents[{agent}]"),
            Site::Goal(p) => path(f, p),
            Site::GoalResponsible(p) => {
                path(f, p)?;
                f.write_str(".responsible")
            }
            Site::GoalEntry(p) => {
                path(f, p)?;
                f.write_str(".entry")
            }
            Site::Entity(i) => write!(f, "entities[{i}]"),
            Site::Attribute { entity, attribute } => {
                write!(f, "entities[{entity}].attributes[{attribute}]")
            }
            Site::Relationship(i) => write!(f, "relationships[{i}]"),
            Site::RelationshipSource(i) => write!(f, "relationships[{i}].source"),
            Site::RelationshipTarget(i) => write!(f, "relationships[{i}].target"),
            Site::PrivilegeGoal(i) => write!(f, "privileges[{i}].goal"),
            Site::Step {
                privilege,
                step,
                field,
            } => {
                write!(f, "privileges[{privilege}]")?;
                match step {
                    StepPos::Entry => f.write_str(".entry_step")?,
                    StepPos::Step(s) => write!(f, ".steps[{s}]")?,
                }
                match field {
                    StepField::Entity => f.write_str(".entity"),
                    StepField::Via => f.write_str(".via"),
                    StepField::Actions => f.write_str(".actions"),
                    StepField::UpdatedAttribute(k) => write!(f, ".updated_attributes[{k}]"),
                }
            }
        }
    }
}

/// A violated model invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    EmptyName {
        kind: ElementKind,
        site: Site,
    },
    Duplicate {
        kind: ElementKind,
        name: String,
        first: Site,
        second: Site,
    },
    Unresolved {
        kind: ElementKind,
        name: String,
        site: Site,
    },
    PrivilegeOnComposite {
        goal: String,
        site: Site,
    },
    /// `goal X {}` cannot also carry properties.
    EmptyCompositeWithProperties {
        goal: String,
        site: Site,
    },
    UnknownAttribute {
        entity: String,
        attribute: String,
        site: Site,
    },
    EmptyActions {
        site: Site,
    },
    UpdatesWithoutUpdate {
        site: Site,
    },
    EntryStepHasVia {
        site: Site,
    },
    MissingVia {
        site: Site,
    },
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} [{}]",
            self.site(),
            self.message(),
            self.invariant()
        )
    }
}

impl core::error::Error for ModelError {}

impl ModelError {
    /// Where the violation is reported; for duplicates, the second declaration.
    pub fn site(&self) -> &Site {
        match self {
            ModelError::EmptyName { site, .. }
            | ModelError::Unresolved { site, .. }
            | ModelError::PrivilegeOnComposite { site, .. }
            | ModelError::EmptyCompositeWithProperties { site, .. }
            | ModelError::UnknownAttribute { site, .. }
            | ModelError::EmptyActions { site }
            | ModelError::UpdatesWithoutUpdate { site }
            | ModelError::EntryStepHasVia { site }
            | ModelError::MissingVia { site } => site,
            ModelError::Duplicate { second, .. } => second,
        }
    }

    /// Human-readable description, without the location.
    pub fn message(&self) -> String {
        match self {
            ModelError::EmptyName { kind, .. } => format!("{kind} name must not be empty"),
            ModelError::Duplicate { kind, name, .. } => format!("duplicate {kind} `{name}`"),
            ModelError::Unresolved { kind, name, .. } => format!("unknown {kind} `{name}`"),
            ModelError::PrivilegeOnComposite { goal, .. } => {
                format!("privilege attached to composite goal `{goal}`; privileges belong to leaf goals")
            }
            ModelError::EmptyCompositeWithProperties { goal, .. } => {
                format!("goal `{goal}` has an empty decomposition but carries properties")
            }
            ModelError::UnknownAttribute {
                entity, attribute, ..
            } => {
                format!("entity `{entity}` has no attribute `{attribute}`")
            }
            ModelError::EmptyActions { .. } => "a step needs at least one action".into(),
            ModelError::UpdatesWithoutUpdate { .. } => {
                "updated attributes listed without an update action".into()
            }
            ModelError::EntryStepHasVia { .. } => {
                "the entry step cannot name a relationship".into()
            }
            ModelError::MissingVia { .. } => {
                "a traversal step must name the relationship it follows".into()
            }
        }
    }

    /// Short name of the violated invariant.
    pub fn invariant(&self) -> &'static str {
        match self {
            ModelError::EmptyName { .. } => "non-empty-name",
            ModelError::Duplicate { .. } => "unique-name",
            ModelError::Unresolved { .. } => "resolved-reference",
            ModelError::PrivilegeOnComposite { .. } => "privilege-on-leaf",
            ModelError::EmptyCompositeWithProperties { .. } => "empty-composite-without-properties",
            ModelError::UnknownAttribute { .. } => "updated-attribute-declared",
            ModelError::EmptyActions { .. } => "non-empty-actions",
            ModelError::UpdatesWithoutUpdate { .. } => "updates-need-update-action",
            ModelError::EntryStepHasVia { .. } => "entry-step-without-via",
            ModelError::MissingVia { .. } => "step-names-relationship",
        }
    }
}
