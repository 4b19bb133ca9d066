use greq::{canonical_deserialize, canonical_serialize, InterchangeError};
use greq_core::model::{ElementKind, ModelError};
use greq_core::{parse_source, to_source, Model};
use greq_testkit::conference;
use greq_testkit::gen::{random_model, rng, GenParams};
use proptest::prelude::*;
use serde_json::{json, Value};

#[test]
fn fixture_round_trips_field_for_field() {
    let m = conference();
    let text = canonical_serialize(&m);
    assert_eq!(canonical_deserialize(&text), Ok(m.clone()));
    assert_eq!(text, canonical_serialize(&m));
    let top: Vec<_> = text.lines().filter(|l| l.starts_with("  \"")).collect();
    let keys: Vec<_> = top
        .iter()
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    assert_eq!(
        keys,
        [
            "source_name",
            "organizations",
            "goals",
            "entities",
            "relationships",
            "privileges"
        ]
    );
    assert!(text.ends_with("}\n") && !text.contains('\r') && text.contains("\n  \"goals\""));
}

#[test]
fn duplicate_entity_is_named() {
    let mut v: Value = serde_json::from_str(&canonical_serialize(&conference())).unwrap();
    let article = v["entities"][0].clone();
    v["entities"].as_array_mut().unwrap().push(article);
    let err = canonical_deserialize(&v.to_string()).unwrap_err();
    let InterchangeError::Invariant(errors) = &err else {
        panic!("{err:?}")
    };
    assert!(matches!(
        &errors[..],
        [ModelError::Duplicate { kind: ElementKind::Entity, name, .. }] if name == "Article"
    ));
    assert!(
        err.to_string().contains("duplicate entity `Article`"),
        "{err}"
    );
}

#[test]
fn truncated_document_reports_byte_offset() {
    let text = canonical_serialize(&conference());
    let cut = &text[..text.len() / 2];
    match canonical_deserialize(cut) {
        Err(InterchangeError::Syntax {
            offset,
            line,
            column,
            message,
        }) => {
            assert_eq!(offset, cut.len());
            assert_eq!(line, cut.lines().count());
            assert!(column >= 1);
            assert!(message.contains("EOF"), "{message}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn shape_errors_are_positioned() {
    let doc = "{\"source_name\": \"x\", \"organizations\": [], \"goals\": [], \"entities\": [], \"relationships\": [], \"privileges\": [], \"extra\": 1}";
    let Err(InterchangeError::Syntax { offset, .. }) = canonical_deserialize(doc) else {
        panic!()
    };
    assert!(doc[..=offset].ends_with("\"extra\""), "{offset}");
    let doc = doc.replace(", \"extra\": 1", "").replace(
        "\"goals\": []",
        "\"goals\": [{\"name\": \"G\", \"children\": [], \"entry\": \"E\"}]",
    );
    assert!(matches!(
        canonical_deserialize(&doc),
        Err(InterchangeError::Invariant(e)) if e.iter().any(|e| matches!(e, ModelError::EmptyCompositeWithProperties { .. }))
    ));
}

/// Corrupts a serialized model in one of several ways.
fn corrupt(v: &mut Value, how: u8, at: usize) -> Option<String> {
    let pick = |arr: &Value| {
        arr.as_array()
            .map(|a| a.len())
            .filter(|&n| n > 0)
            .map(|n| at % n)
    };
    match how % 9 {
        0 => {
            let i = pick(&v["entities"])?;
            let e = v["entities"][i].clone();
            v["entities"].as_array_mut()?.push(e);
        }
        1 => {
            let i = pick(&v["privileges"])?;
            v["privileges"][i]["goal"] = json!("__ghost");
        }
        2 => {
            let i = pick(&v["privileges"])?;
            v["privileges"][i]["entry_step"]["actions"] = json!([]);
        }
        3 => {
            let i = pick(&v["privileges"])?;
            v["privileges"][i]["entry_step"]["via"] = json!("__via");
        }
        4 => {
            let i = pick(&v["relationships"])?;
            v["relationships"][i]["target"] = json!("__nowhere");
        }
        5 => {
            let i = pick(&v["goals"])?;
            v["goals"][i]["children"] = json!([]);
            v["goals"][i]["responsible"] = json!("__someone");
        }
        6 => {
            let i = pick(&v["entities"])?;
            v["entities"][i]["name"] = json!("");
        }
        7 => {
            let i = pick(&v["privileges"])?;
            v["privileges"][i]["entry_step"]["updated_attributes"] = json!(["__attr"]);
        }
        _ => {
            let text = v.to_string();
            let mut cut = at % text.len().max(1);
            while !text.is_char_boundary(cut) {
                cut -= 1;
            }
            return Some(text[..cut].to_string());
        }
    }
    Some(v.to_string())
}

fn model(seed: u64) -> Model {
    random_model(&mut rng(seed), &GenParams::default(), "i.greq")
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn random_models_round_trip(seed in any::<u64>()) {
        let m = model(seed);
        let text = canonical_serialize(&m);
        let back = canonical_deserialize(&text).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(parse_source(&to_source(&back), &back.source_name), Ok(m));
    }

    #[test]
    fn accepted_documents_satisfy_the_invariants(seed in any::<u64>(), how in any::<u8>(), at in any::<usize>()) {
        let m = model(seed);
        let mut v: Value = serde_json::from_str(&canonical_serialize(&m)).unwrap();
        let Some(doc) = corrupt(&mut v, how, at) else { return Ok(()) };
        match canonical_deserialize(&doc) {
            Ok(model) => {
                prop_assert_eq!(model.check(), Ok(()));
                prop_assert_eq!(canonical_deserialize(&canonical_serialize(&model)), Ok(model));
            }
            Err(InterchangeError::Syntax { offset, .. }) => prop_assert!(offset <= doc.len()),
            Err(InterchangeError::Invariant(errors)) => prop_assert!(!errors.is_empty()),
        }
        // reference and uniqueness corruptions can never be accepted
        if how % 9 <= 7 && how % 9 != 5 {
            prop_assert!(canonical_deserialize(&doc).is_err(), "accepted corruption {}", how % 9);
        }
    }
}
