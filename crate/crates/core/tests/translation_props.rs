mod common;

use proptest::prelude::*;
use translogic::catalog::Catalog;
use translogic::translation::{apply_translation, classify_shape, compose_translations, linear_size_constant, size_bound, CompositionMode};
use translogic::Formula;

fn catalog() -> Catalog {
    Catalog::builtin()
}

/// Catalog translations between propositional or modal logics.
fn propositional_translations() -> Vec<String> {
    let c = catalog();
    c.translations
        .values()
        .filter(|t| c.logic(&t.source).unwrap().signature.first_order.is_none())
        .map(|t| t.name.clone())
        .collect()
}

fn source_formula(translation: &str, depth: u32) -> BoxedStrategy<Formula> {
    let c = catalog();
    let t = c.translation(translation).unwrap();
    common::formula(&c.logic(&t.source).unwrap().signature, &["p", "q"], depth)
}

fn translation_and_formula() -> impl Strategy<Value = (String, Formula)> {
    proptest::sample::select(propositional_translations()).prop_flat_map(|name| (Just(name.clone()), source_formula(&name, 4)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn images_stay_within_the_size_bound((name, f) in translation_and_formula()) {
        let c = catalog();
        let t = c.translation(&name).unwrap();
        let image = apply_translation(t, &f).unwrap();
        prop_assert!(image.node_count() <= size_bound(t, &f).unwrap(), "{} {} -> {}", name, f, image);
        if let Some(k) = linear_size_constant(t) {
            prop_assert!(image.node_count() <= k * f.node_count(), "{} {} -> {}", name, f, image);
        }
        prop_assert!(c.logic(&t.target).unwrap().signature.accepts(&image), "{} {} -> {}", name, f, image);
    }

    #[test]
    fn composition_is_sequential_application(
        (first, second, f) in proptest::sample::select(vec![("Tni", "Tl"), ("Tc", "Tg"), ("Tstd", "Tmoss")])
            .prop_flat_map(|(a, b)| (Just(a), Just(b), source_formula(a, 4))),
        surjective in any::<bool>(),
    ) {
        let c = catalog();
        let (a, b) = (c.translation(first).unwrap(), c.translation(second).unwrap());
        let mode = if surjective { CompositionMode::Surjective } else { CompositionMode::Weakened };
        let fused = compose_translations(a, b, mode).unwrap();
        let sequential = apply_translation(b, &apply_translation(a, &f).unwrap()).unwrap();
        prop_assert_eq!(apply_translation(&fused, &f).unwrap(), sequential);
    }
}

#[test]
fn hand_classification() {
    let c = catalog();
    let labels = |name: &str| classify_shape(c.translation(name).unwrap()).labels();
    assert_eq!(
        labels("Tl"),
        ["structural", "compositional", "grammatical shape", "definitional shape", "general-recursive", "GR^C"]
    );
    // The atom clause wraps atoms, so Tg is grammatical but not definitional.
    assert_eq!(labels("Tg")[3], "not definitional");
    assert_eq!(labels("Tg")[2], "grammatical shape");
    // Tni uses the parameter p for the constants.
    assert_eq!(labels("Tni")[2], "not grammatical shape");
    // Indexing plan items break compositionality and the conditional clause.
    assert_eq!(labels("TE")[1], "not compositional");
    assert_eq!(labels("TE")[5], "not GR^C");
    assert_eq!(labels("Tx")[4], "GR (extended)");
    assert_eq!(labels("Tprime")[0], "opaque");
    assert_eq!(labels("Tprime")[4], "not general-recursive");
}

#[test]
fn composing_mismatched_or_opaque_systems_fails() {
    let c = catalog();
    let t = |n: &str| c.translation(n).unwrap();
    assert!(compose_translations(t("Tl"), t("Tc"), CompositionMode::Weakened).is_err());
    assert!(compose_translations(t("Tmoss"), t("Tprime"), CompositionMode::Weakened).is_err());
    assert!(compose_translations(t("Tx"), t("Tx"), CompositionMode::Weakened).is_err());
}
