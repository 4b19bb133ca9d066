//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use greq::{canonical_deserialize, canonical_serialize};
use greq_core::graph::{build_graph, goal_view, walk_is_valid};
use greq_core::model::{Action, ActionSet};
use greq_core::{compute_metrics, parse_source, run_diagnostics, to_source, Model};
use greq_testkit::gen::{add_valid_privilege, random_model, rng, GenParams};
use greq_testkit::{conference, mutant, oracle, CONFERENCE_SOURCE, MUTANTS};

const FIXTURE_BUDGET: Duration = Duration::from_secs(1);
const WALK_MODELS: u64 = 500;
const ROUND_TRIP_MODELS: u64 = 200;
const METRICS_MODELS: u64 = 200;
const MONOTONE_ADDITIONS: usize = 200;
/// Ratios are compared up to this absolute difference.
const RATIO_TOLERANCE: f64 = 1e-12;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn repo(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(rel)
}

fn fixture_fidelity() -> Outcome {
    let start = Instant::now();
    let m = parse_source(CONFERENCE_SOURCE, "conference.greq").map_err(|e| format!("{e:?}"))?;
    let report = run_diagnostics(&m);
    let elapsed = start.elapsed();
    let goals = m.goals_preorder();
    let counts = [
        ("agents", m.agents().count(), 2),
        ("goals", goals.len(), 3),
        (
            "composite goals",
            goals.iter().filter(|v| !v.goal.is_leaf()).count(),
            1,
        ),
        (
            "leaf goals",
            goals.iter().filter(|v| v.goal.is_leaf()).count(),
            2,
        ),
        ("entities", m.entities.len(), 2),
        (
            "attributes",
            m.entities.iter().map(|e| e.attributes.len()).sum(),
            3,
        ),
        ("relationships", m.relationships.len(), 1),
        ("privileges", m.privileges.len(), 2),
    ];
    for (what, got, want) in counts {
        ensure(got == want, || format!("{what}: {got}, expected {want}"))?;
    }
    ensure(report.is_clean(), || report.render_text())?;
    ensure(elapsed < FIXTURE_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("counts match, 0 diagnostics, {elapsed:?}"))
}

fn constraint_catch_rate() -> Outcome {
    let mut caught = 0;
    for (rule, _) in MUTANTS {
        let r = run_diagnostics(&mutant(rule));
        ensure(r.diagnostics.iter().any(|d| d.rule_id == rule), || {
            format!("{rule} missed")
        })?;
        let others: Vec<_> = r
            .errors()
            .filter(|d| d.rule_id != rule)
            .map(|d| d.to_string())
            .collect();
        ensure(others.is_empty(), || {
            format!("{rule} mutant also raised {others:?}")
        })?;
        caught += 1;
    }
    Ok(format!("{caught}/8 mutants caught by exactly their rule"))
}

fn walk_oracle() -> Outcome {
    let params = GenParams::default();
    let (mut privileges, mut invalid) = (0, 0);
    for seed in 0..WALK_MODELS {
        let m = random_model(&mut rng(seed), &params, "w.greq");
        ensure(
            m.entities.len() <= 6 && m.relationships.len() <= 8 && m.privileges.len() <= 6,
            || format!("seed {seed}: model exceeds size bounds"),
        )?;
        let graph = build_graph(&m);
        let report = run_diagnostics(&m);
        let mut expected = 0;
        for p in &m.privileges {
            let brute = oracle::first_invalid_step(&m, p);
            ensure(walk_is_valid(&graph, p).first_invalid == brute, || {
                format!(
                    "seed {seed}: walk_is_valid disagrees on privilege for {}",
                    p.goal
                )
            })?;
            privileges += 1;
            if brute.is_some() {
                invalid += 1;
                expected += 1;
            }
        }
        let flagged = report
            .diagnostics
            .iter()
            .filter(|d| d.rule_id == "R004")
            .count();
        ensure(flagged == expected, || {
            format!("seed {seed}: R004 {flagged}, oracle {expected}")
        })?;
    }
    ensure(invalid > 0 && invalid < privileges, || {
        "generator produced a one-sided sample".into()
    })?;
    Ok(format!(
        "{privileges} privileges over {WALK_MODELS} models agree ({invalid} invalid walks)"
    ))
}

fn round_trip_one(source: &str, name: &str) -> Result<(), String> {
    let parsed = parse_source(source, name).map_err(|e| format!("parse: {e:?}"))?;
    let json = canonical_serialize(&parsed);
    let back = canonical_deserialize(&json).map_err(|e| format!("deserialize: {e}"))?;
    ensure(back == parsed, || "deserialize changed the model".into())?;
    let printed = to_source(&back);
    let reparsed = parse_source(&printed, name).map_err(|e| format!("reparse: {e:?}"))?;
    ensure(reparsed == parsed, || {
        format!("reparse changed the model:\n{printed}")
    })?;
    ensure(canonical_serialize(&reparsed) == json, || {
        "interchange bytes drifted".into()
    })
}

fn round_trip() -> Outcome {
    round_trip_one(CONFERENCE_SOURCE, "conference.greq").map_err(|e| format!("fixture: {e}"))?;
    let params = GenParams::default();
    for seed in 0..ROUND_TRIP_MODELS {
        let m: Model = random_model(&mut rng(1_000_000 + seed), &params, "rt.greq");
        round_trip_one(&to_source(&m), "rt.greq").map_err(|e| format!("seed {seed}: {e}"))?;
    }
    Ok(format!(
        "fixed point on the fixture and {ROUND_TRIP_MODELS} random models"
    ))
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_greq");
    let fixture = repo("fixtures/conference.greq");
    let emitters: [&[&str]; 5] = [
        &["mindmap", "--format", "dot"],
        &["mindmap", "--format", "freemind"],
        &["doc"],
        &["appmodel"],
        &["export"],
    ];
    for args in emitters {
        let run = || {
            Command::new(bin)
                .args(args)
                .arg(&fixture)
                .output()
                .map_err(|e| e.to_string())
        };
        let (a, b) = (run()?, run()?);
        ensure(a.status.success() && b.status.success(), || {
            format!("{args:?} failed")
        })?;
        ensure(!a.stdout.is_empty(), || format!("{args:?} printed nothing"))?;
        ensure(a.stdout == b.stdout, || {
            format!("{args:?} differs between runs")
        })?;
    }
    Ok("dot, freemind, markdown, appmodel, interchange byte-identical over 2 runs".into())
}

fn goal_view_check() -> Outcome {
    let view = goal_view(&conference(), "Analyser une soumission").map_err(|e| e.to_string())?;
    let set = |a: &[Action]| a.iter().copied().collect::<ActionSet>();
    ensure(view.entities == ["Rapport", "Article"], || {
        format!("entities {:?}", view.entities)
    })?;
    let rapport = view.access("Rapport").ok_or("no Rapport")?;
    ensure(
        rapport.actions == set(&[Action::Create, Action::Update]),
        || format!("Rapport {}", rapport.actions),
    )?;
    ensure(rapport.updated_attributes == ["commentaire"], || {
        format!("{:?}", rapport.updated_attributes)
    })?;
    let article = view.access("Article").ok_or("no Article")?;
    ensure(article.actions == set(&[Action::Read]), || {
        format!("Article {}", article.actions)
    })?;
    ensure(article.updated_attributes.is_empty(), || {
        "Article updates".into()
    })?;
    Ok("[Rapport{create, update(commentaire)}, Article{read}]".into())
}

fn metrics_oracle() -> Outcome {
    let params = GenParams::default();
    for seed in 0..METRICS_MODELS {
        let m = random_model(&mut rng(2_000_000 + seed), &params, "m.greq");
        let r = compute_metrics(&m, &run_diagnostics(&m));
        let want = oracle::entity_coverage(&m);
        ensure((r.entity_coverage - want).abs() <= RATIO_TOLERANCE, || {
            format!("seed {seed}: coverage {} vs {want}", r.entity_coverage)
        })?;
        let ratios = oracle::risk_ratios(&m);
        for a in &r.agents {
            let want = ratios[&a.agent];
            ensure((a.risk_ratio - want).abs() <= RATIO_TOLERANCE, || {
                format!("seed {seed}: {} risk {} vs {want}", a.agent, a.risk_ratio)
            })?;
        }
    }
    let (mut additions, mut seed) = (0, 3_000_000);
    while additions < MONOTONE_ADDITIONS {
        let mut g = rng(seed);
        seed += 1;
        let m = random_model(&mut g, &params, "m.greq");
        let Some(bigger) = add_valid_privilege(&mut g, &params, &m) else {
            continue;
        };
        additions += 1;
        let before = compute_metrics(&m, &run_diagnostics(&m));
        let after = compute_metrics(&bigger, &run_diagnostics(&bigger));
        for (a, b) in before.agents.iter().zip(&after.agents) {
            ensure(b.risk_ratio <= a.risk_ratio + RATIO_TOLERANCE, || {
                format!(
                    "seed {}: {} risk {} -> {}",
                    seed - 1,
                    a.agent,
                    a.risk_ratio,
                    b.risk_ratio
                )
            })?;
        }
    }
    Ok(format!(
        "{METRICS_MODELS} models match brute force, {additions} additions never raise risk"
    ))
}

fn cli_contract() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_greq");
    let cases = [
        ("fixtures/conference.greq", 0),
        ("fixtures/mutants/r001.greq", 1),
        ("fixtures/broken.greq", 2),
    ];
    for (file, want) in cases {
        let out = Command::new(bin)
            .args(["--quiet", "check"])
            .arg(repo(file))
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.code() == Some(want), || {
            format!("{file}: {:?}, expected {want}", out.status.code())
        })?;
        if want == 0 {
            ensure(out.stdout.is_empty() && out.stderr.is_empty(), || {
                "quiet check printed".into()
            })?;
        }
        if want == 1 {
            let err = String::from_utf8_lossy(&out.stderr);
            ensure(
                err.lines().filter(|l| l.starts_with("R001 ")).count() == 1,
                || err.to_string(),
            )?;
        }
    }
    Ok("pristine 0, R001 mutant 1, broken syntax 2".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("fixture fidelity", fixture_fidelity),
        ("constraint catch rate", constraint_catch_rate),
        ("walk-validity oracle", walk_oracle),
        ("round trip", round_trip),
        ("determinism", determinism),
        ("goal view", goal_view_check),
        ("metrics oracle", metrics_oracle),
        ("CLI contract", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
