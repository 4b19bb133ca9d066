use greq_core::{parse_source, Model};

pub const CONFERENCE_SOURCE: &str = include_str!("../../../fixtures/conference.greq");

/// A file with two syntax errors.
pub const BROKEN_SOURCE: &str = include_str!("../../../fixtures/broken.greq");

/// `(rule id, mutant source)`: each mutant should trip exactly its rule.
pub const MUTANTS: [(&str, &str); 8] = [
    ("R001", include_str!("../../../fixtures/mutants/r001.greq")),
    ("R002", include_str!("../../../fixtures/mutants/r002.greq")),
    ("R003", include_str!("../../../fixtures/mutants/r003.greq")),
    ("R004", include_str!("../../../fixtures/mutants/r004.greq")),
    ("R005", include_str!("../../../fixtures/mutants/r005.greq")),
    ("R006", include_str!("../../../fixtures/mutants/r006.greq")),
    ("R007", include_str!("../../../fixtures/mutants/r007.greq")),
    ("R008", include_str!("../../../fixtures/mutants/r008.greq")),
];

pub fn conference() -> Model {
    parse_source(CONFERENCE_SOURCE, "conference.greq").expect("conference fixture parses")
}

pub fn mutant(rule_id: &str) -> Model {
    let (_, src) = MUTANTS
        .iter()
        .find(|(id, _)| *id == rule_id)
        .unwrap_or_else(|| panic!("no mutant for {rule_id}"));
    let file = format!("{}.greq", rule_id.to_lowercase());
    parse_source(src, &file).unwrap_or_else(|e| panic!("mutant {rule_id} does not parse: {e:?}"))
}
