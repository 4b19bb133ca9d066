use greq_core::{run_diagnostics, ElementKind, Severity};
use greq_testkit::{conference, mutant, MUTANTS};

#[test]
fn conference_counts() {
    let m = conference();
    assert_eq!(m.agents().count(), 2);
    let goals = m.goals_preorder();
    assert_eq!(goals.len(), 3);
    assert_eq!(goals.iter().filter(|v| !v.goal.is_leaf()).count(), 1);
    assert_eq!(m.leaf_goals().len(), 2);
    assert_eq!(m.entities.len(), 2);
    assert_eq!(
        m.entities.iter().map(|e| e.attributes.len()).sum::<usize>(),
        3
    );
    assert_eq!(m.relationships.len(), 1);
    assert_eq!(m.privileges.len(), 2);
}

#[test]
fn conference_goal_tree() {
    let m = conference();
    assert_eq!(m.goals.len(), 1);
    let root = &m.goals[0];
    assert_eq!(root.name, "Gérer les soumissions");
    let names: Vec<_> = root.children().iter().map(|g| g.name.as_str()).collect();
    assert_eq!(names, ["Déposer une soumission", "Analyser une soumission"]);
}

#[test]
fn conference_is_clean() {
    let r = run_diagnostics(&conference());
    assert!(r.is_clean(), "{}", r.render_text());
}

#[test]
fn each_mutant_trips_its_rule_only() {
    for (rule, _) in MUTANTS {
        let r = run_diagnostics(&mutant(rule));
        assert!(
            r.diagnostics.iter().any(|d| d.rule_id == rule),
            "{rule} not raised:\n{}",
            r.render_text()
        );
        let other_errors: Vec<_> = r.errors().filter(|d| d.rule_id != rule).collect();
        assert!(other_errors.is_empty(), "{rule}: {other_errors:?}");
    }
}

#[test]
fn deleting_the_reviewer_goal_leaves_its_agent_idle() {
    let mut m = conference();
    let root = m.goals[0].children.as_mut().unwrap();
    root.retain(|g| g.name != "Analyser une soumission");
    m.privileges.retain(|p| p.goal != "Analyser une soumission");
    assert_eq!(m.check(), Ok(()));
    let r = run_diagnostics(&m);
    let r001: Vec<_> = r
        .diagnostics
        .iter()
        .filter(|d| d.rule_id == "R001")
        .collect();
    assert_eq!(r001.len(), 1);
    assert_eq!(r001[0].subject.kind, ElementKind::Agent);
    assert_eq!(r001[0].subject.name, "Relecteur");
    assert_eq!(r.errors().count(), 1);
}

#[test]
fn removing_the_reviewer_privilege() {
    let r = run_diagnostics(&mutant("R002"));
    let found: Vec<_> = r
        .diagnostics
        .iter()
        .map(|d| (d.rule_id, d.severity, d.subject.name.as_str()))
        .collect();
    assert_eq!(
        found,
        [
            ("R002", Severity::Error, "Analyser une soumission"),
            ("R006", Severity::Warning, "Rapport"),
        ]
    );
}
