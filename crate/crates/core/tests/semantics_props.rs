mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use translogic::catalog::Catalog;
use translogic::semantics::bivaluation::{self, BivaluationConstraint};
use translogic::semantics::kripke::{self, FrameClass};
use translogic::semantics::{apply_model_map, evaluate, fol_evaluate, kripke_to_structure, matrix_value, relatedness, Engine, Model};
use translogic::translation::apply_translation;
use translogic::{Formula, FormulaSet};

fn catalog() -> Catalog {
    Catalog::builtin()
}

fn atoms(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Three-valued Łukasiewicz value in halves (0, 1, 2).
fn lukasiewicz(f: &Formula, value: &BTreeMap<String, i32>) -> i32 {
    match f {
        Formula::Atom(a) => value[a],
        Formula::Const(c) => 2 * (*c == translogic::formula::Constant::Top) as i32,
        Formula::Apply(sym, ops) => {
            let v: Vec<i32> = ops.iter().map(|o| lukasiewicz(o, value)).collect();
            match sym.as_str() {
                "not" => 2 - v[0],
                "->" => (2 - v[0] + v[1]).min(2),
                "and" => v[0].min(v[1]),
                "or" => v[0].max(v[1]),
                other => panic!("no reading of `{other}`"),
            }
        }
        other => panic!("not propositional: {other:?}"),
    }
}

/// Relatedness truth from the definition: an implication also needs some
/// related pair of atoms across its sides.
fn relatedness_truth(f: &Formula, value: &BTreeMap<String, bool>, related: &dyn Fn(&str, &str) -> bool) -> bool {
    match f {
        Formula::Atom(a) => value[a],
        Formula::Apply(sym, ops) => {
            let v: Vec<bool> = ops.iter().map(|o| relatedness_truth(o, value, related)).collect();
            match sym.as_str() {
                "not" => !v[0],
                "and" => v[0] && v[1],
                "->" => {
                    let (l, r) = (ops[0].atoms(), ops[1].atoms());
                    let shared = l.iter().any(|a| r.iter().any(|b| related(&a.render(), &b.render())));
                    (!v[0] || v[1]) && shared
                }
                other => panic!("no reading of `{other}`"),
            }
        }
        other => panic!("unexpected {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn classical_matrix_matches_truth_tables(f in common::formula(&catalog().logic("CPL").unwrap().signature, &["p", "q", "r"], 5)) {
        let c = catalog();
        let cpl = c.logic("CPL").unwrap();
        let Engine::Matrix(m) = &cpl.engine else { unreachable!() };
        for v in m.valuations(&atoms(&["p", "q", "r"])) {
            let expected = common::classical(&f, &|a| v.values[a] == 1);
            prop_assert_eq!(evaluate(cpl, &Model::Valuation(v.clone()), &f).unwrap(), expected);
        }
    }

    #[test]
    fn three_valued_matrix_matches_arithmetic(f in common::formula(&catalog().logic("L3").unwrap().signature, &["p", "q"], 5)) {
        let c = catalog();
        let l3 = c.logic("L3").unwrap();
        let Engine::Matrix(m) = &l3.engine else { unreachable!() };
        for v in m.valuations(&atoms(&["p", "q"])) {
            let halves: BTreeMap<String, i32> = v.values.iter().map(|(k, &i)| (k.clone(), i as i32)).collect();
            let expected = ["0", "1/2", "1"][lukasiewicz(&f, &halves) as usize];
            prop_assert_eq!(matrix_value(l3, &v, &f).unwrap(), expected);
            prop_assert_eq!(evaluate(l3, &Model::Valuation(v.clone()), &f).unwrap(), expected == "1");
        }
    }

    #[test]
    fn intuitionistic_forcing_persists(f in common::formula(&catalog().logic("IPL").unwrap().signature, &["p", "q"], 4)) {
        let mut failure = None;
        kripke::for_each_model(FrameClass::Ipl, &atoms(&["p", "q"]), 3, &mut |m| {
            let forced = m.extension(&f).unwrap();
            for w in 0..m.worlds {
                if forced >> w & 1 == 1 && m.access[w] & !forced != 0 {
                    failure = Some(format!("{m:?} at {w}"));
                    return false;
                }
            }
            true
        });
        prop_assert!(failure.is_none(), "{}", failure.unwrap_or_default());
    }

    #[test]
    fn standard_translation_agrees_with_first_order_evaluation(
        f in common::formula(&catalog().logic("K").unwrap().signature, &["p"], 4)
    ) {
        let c = catalog();
        let image = apply_translation(c.translation("Tx").unwrap(), &f).unwrap();
        let mut failure = None;
        kripke::for_each_model(FrameClass::K, &atoms(&["p"]), 2, &mut |m| {
            let structure = kripke_to_structure(m);
            for w in 0..m.worlds {
                let mut point = m.clone();
                point.point = w;
                let assignment: BTreeMap<String, usize> = [("x".to_string(), w)].into_iter().collect();
                if point.forces(&f).unwrap() != fol_evaluate(&structure, &image, &assignment).unwrap() {
                    failure = Some(format!("{image} at world {w} of {m:?}"));
                    return false;
                }
            }
            true
        });
        prop_assert!(failure.is_none(), "{}", failure.unwrap_or_default());
    }

    #[test]
    fn relatedness_embedding_preserves_truth(f in common::formula(&catalog().logic("R").unwrap().signature, &["p", "q"], 4)) {
        let c = catalog();
        let (r, cpl) = (c.logic("R").unwrap(), c.logic("CPL").unwrap());
        let image = apply_translation(c.translation("TE").unwrap(), &f).unwrap();
        let context: FormulaSet = [image.clone()].into_iter().collect();
        for model in relatedness::enumerate(&atoms(&["p", "q"])) {
            let related = |a: &str, b: &str| model.related.contains(&(a.to_string(), b.to_string()));
            let truth = relatedness_truth(&f, &model.valuation, &related);
            let model = Model::Relatedness(model.clone());
            prop_assert_eq!(evaluate(r, &model, &f).unwrap(), truth);
            let mapped = apply_model_map(c.map("f-E").unwrap(), &model, &context).unwrap();
            prop_assert_eq!(evaluate(cpl, &mapped, &image).unwrap(), truth);
        }
    }

    #[test]
    fn half_negation_encoding_preserves_truth(f in common::formula(&catalog().logic("CPL-std").unwrap().signature, &["p", "q"], 3)) {
        let c = catalog();
        let source = c.logic("CPL-std").unwrap();
        let image = apply_translation(c.translation("Tmoss").unwrap(), &f).unwrap();
        let closure = translogic::formula::subformula_closure(&[image.clone()].into_iter().collect());
        let context: FormulaSet = [f.clone()].into_iter().collect();
        for b in bivaluation::enumerate(BivaluationConstraint::HalfNegation, &closure).unwrap() {
            let value = b.lookup(&image).unwrap();
            let mapped = apply_model_map(c.map("f-wpl").unwrap(), &Model::Bivaluation(b), &context).unwrap();
            prop_assert_eq!(evaluate(source, &mapped, &f).unwrap(), value);
        }
    }
}
