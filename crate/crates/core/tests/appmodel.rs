use greq_core::appmodel::{units_for_actions, AppModelError, LinkVia, UnitKind};
use greq_core::{emit_app_model, run_diagnostics, Model};
use greq_testkit::gen::{cleaned, random_model, rng, GenParams};
use greq_testkit::{conference, mutant};
use proptest::prelude::*;

#[test]
fn author_site_view() {
    let app = emit_app_model(&conference()).unwrap();
    assert_eq!(app.data_model.entities.len(), 2);
    assert_eq!(app.data_model.relationships.len(), 1);
    let view = app.site_views.iter().find(|v| v.agent == "Auteur").unwrap();
    assert_eq!(view.pages.len(), 1);
    let page = &view.pages[0];
    assert_eq!(page.name, "Déposer une soumission");
    let units: Vec<_> = page
        .units
        .iter()
        .map(|u| (u.kind, u.entity.as_str(), u.attributes.clone()))
        .collect();
    assert_eq!(
        units,
        [
            (UnitKind::EntryForm, "Article", vec![]),
            (
                UnitKind::ModifyForm,
                "Article",
                vec!["titre".to_string(), "auteurs".to_string()]
            ),
        ]
    );
}

#[test]
fn reviewer_reaches_the_article_details() {
    let app = emit_app_model(&conference()).unwrap();
    let view = app
        .site_views
        .iter()
        .find(|v| v.agent == "Relecteur")
        .unwrap();
    let page = &view.pages[0];
    let unit = |id: &str| page.units.iter().find(|u| u.id == id).unwrap();
    let crossing: Vec<_> = page
        .links
        .iter()
        .filter(|l| matches!(&l.via, LinkVia::Relationship { relationship } if relationship == "commente"))
        .collect();
    assert!(!crossing.is_empty());
    for link in crossing {
        assert_eq!(unit(&link.source).entity, "Rapport");
        let target = unit(&link.target);
        assert_eq!(
            (target.kind, target.entity.as_str()),
            (UnitKind::Details, "Article")
        );
    }
}

#[test]
fn refuses_models_with_errors() {
    let err = emit_app_model(&mutant("R001")).unwrap_err();
    assert_eq!(
        err,
        AppModelError::Blocked {
            rules: vec!["R001"]
        }
    );
    let mut lone = Model::new("lone.greq");
    lone.organizations.push(greq_core::Organization {
        name: "O".into(),
        agents: vec![greq_core::Agent {
            name: "Seul".into(),
        }],
    });
    assert!(emit_app_model(&lone)
        .unwrap_err()
        .to_string()
        .contains("R001"));
}

#[test]
fn warnings_do_not_block() {
    for rule in ["R006", "R007", "R008"] {
        assert!(emit_app_model(&mutant(rule)).is_ok(), "{rule}");
    }
}

fn clean(seed: u64) -> Model {
    let params = GenParams::default();
    let mut r = rng(seed);
    let m = random_model(&mut r, &params, "a.greq");
    cleaned(&mut r, &params, &m)
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn unit_counts_follow_the_closed_form(seed in any::<u64>()) {
        let m = clean(seed);
        let report = run_diagnostics(&m);
        prop_assert!(!report.has_errors(), "{}", report.render_text());
        let app = emit_app_model(&m).unwrap();
        for view in &app.site_views {
            for page in &view.pages {
                let expected: usize = m
                    .privileges_for(&page.name)
                    .flat_map(|p| p.walk())
                    .map(units_for_actions)
                    .sum();
                prop_assert_eq!(page.units.len(), expected);
                for link in &page.links {
                    prop_assert!(page.units.iter().any(|u| u.id == link.source));
                    prop_assert!(page.units.iter().any(|u| u.id == link.target));
                }
            }
        }
        prop_assert_eq!(app, emit_app_model(&m).unwrap());
    }

    #[test]
    fn only_agents_with_goals_get_a_site_view(seed in any::<u64>()) {
        let m = clean(seed);
        let app = emit_app_model(&m).unwrap();
        let visits = m.goals_preorder();
        for agent in m.agents() {
            let owns = visits.iter().any(|v| v.responsible == Some(agent.name.as_str()));
            prop_assert_eq!(owns, app.site_views.iter().any(|s| s.agent == agent.name));
        }
        let pages: usize = app.site_views.iter().map(|s| s.pages.len()).sum();
        prop_assert_eq!(pages, m.leaf_goals().len());
    }
}
