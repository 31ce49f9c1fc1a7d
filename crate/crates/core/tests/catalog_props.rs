mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use translogic::catalog::Catalog;
use translogic::formula::subformula_closure;
use translogic::suite::run_section_named;
use translogic::verify::{verify_encoding_bijection, Bounds, Status};
use translogic::{Formula, FormulaSet};

/// Half-negation bivaluations on `closure`, counted over all assignments
/// from the definition: classical positive connectives, and a negation
/// that is false whenever its operand is true.
fn half_negation_count(closure: &FormulaSet) -> usize {
    let members: Vec<&Formula> = closure.iter().collect();
    (0u32..1 << members.len())
        .filter(|bits| {
            let value: BTreeMap<&Formula, bool> = members.iter().enumerate().map(|(i, f)| (*f, bits >> i & 1 == 1)).collect();
            members.iter().all(|f| match f {
                Formula::Apply(sym, ops) => {
                    let v: Vec<bool> = ops.iter().map(|o| value[o]).collect();
                    match sym.as_str() {
                        "not" => !(v[0] && value[*f]),
                        "and" => value[*f] == (v[0] && v[1]),
                        "or" => value[*f] == (v[0] || v[1]),
                        "->" => value[*f] == (!v[0] || v[1]),
                        other => panic!("no reading of `{other}`"),
                    }
                }
                _ => true,
            })
        })
        .count()
}

fn small_closure() -> impl Strategy<Value = FormulaSet> {
    let sig = Catalog::builtin().logic("WPL").unwrap().signature.clone();
    common::formula(&sig, &["p", "q"], 4)
        .prop_map(|f| subformula_closure(&[f].into_iter().collect()))
        .prop_filter("closures of at most eight formulas", |c| c.len() <= 8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn encoding_axioms_biject_with_bivaluations(closure in small_closure()) {
        let entry = verify_encoding_bijection(&closure, &Bounds::default()).unwrap();
        prop_assert_eq!(&entry.status, &Status::ValidExact, "{:?}", entry.details);
        let n = half_negation_count(&closure);
        prop_assert_eq!(&entry.details[0], &format!("{n} axiom models, {n} bivaluations"));
    }
}

#[test]
fn catalog_expectations_hold() {
    let section = run_section_named(&Catalog::builtin(), "catalog-expectations", &[]).unwrap();
    let failures: Vec<String> =
        section.outcomes.iter().filter(|o| !o.matched).map(|o| format!("{}: expected {}, got {}", o.subject, o.expected, o.actual)).collect();
    assert!(!section.outcomes.is_empty());
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn shipped_entries_cannot_be_replaced() {
    let mut c = Catalog::builtin();
    let err = c.merge_text("logic CPL\n  engine kripke k\nend\n", "user").unwrap_err();
    assert!(err.to_string().contains("shipped"), "{err}");
    c.merge_text("translation Tmine\n  source CPL\n  target L3\n  opaque idx p\nend\n", "user").unwrap();
    c.validate().unwrap();
    assert!(c.translation("Tmine").is_ok());
}

#[test]
fn user_translations_must_cover_the_source() {
    let mut c = Catalog::builtin();
    c.merge_text("translation Tpartial\n  source CPL\n  target L3\n  clause not -> (not #1)\nend\n", "user").unwrap();
    assert!(c.validate().unwrap_err().to_string().contains("no clause"));
}
