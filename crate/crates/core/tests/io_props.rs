mod common;

use dfl_core::gen::{random_theory, rng, GenConfig};
use dfl_core::io::{parse_theory, serialize_theory};
use proptest::prelude::*;

#[test]
fn credit_file_parses_to_a_valid_theory() {
    let t = common::credit();
    assert_eq!(t.rule_count(), 5);
    assert_eq!(t.superiority().len(), 4);
}

#[test]
fn generated_theories_round_trip() {
    let mut r = rng(41);
    for _ in 0..300 {
        let config = GenConfig {
            mixed_kinds: true,
            ..GenConfig::default()
        };
        let t = random_theory(&config, &mut r);
        assert_eq!(parse_theory(&serialize_theory(&t)).unwrap(), t);
    }
}

fn source_fragment() -> impl Strategy<Value = String> {
    let token = prop_oneof![
        Just("facts:".to_string()),
        Just(":".to_string()),
        Just(",".to_string()),
        Just(".".to_string()),
        Just("-".to_string()),
        Just(">".to_string()),
        Just("=>".to_string()),
        Just("->".to_string()),
        Just("~>".to_string()),
        Just("\n".to_string()),
        Just("# note\n".to_string()),
        "[a-c][a-c0-9_]{0,2}",
        "[ \t]",
    ];
    prop::collection::vec(token, 0..40).prop_map(|v| v.join(" "))
}

proptest! {
    #[test]
    fn parser_is_total(text in "\\PC{0,200}") {
        if let Err(errors) = parse_theory(&text) {
            prop_assert!(!errors.is_empty());
            for e in errors {
                prop_assert!(e.span.line >= 1 && e.span.column >= 1 && e.span.length >= 1);
            }
        }
    }

    #[test]
    fn token_soup_is_total_and_accepted_text_round_trips(text in source_fragment()) {
        match parse_theory(&text) {
            Ok(t) => prop_assert_eq!(parse_theory(&serialize_theory(&t)).unwrap(), t),
            Err(errors) => prop_assert!(!errors.is_empty()),
        }
    }

    #[test]
    fn seeded_round_trip(seed in any::<u64>(), atoms in 2usize..8, rules in 0usize..14) {
        let config = GenConfig { atoms, rules, mixed_kinds: true, ..GenConfig::default() };
        let t = random_theory(&config, &mut rng(seed));
        prop_assert_eq!(parse_theory(&serialize_theory(&t)).unwrap(), t);
    }
}
