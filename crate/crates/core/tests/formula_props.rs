mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use translogic::catalog::Catalog;
use translogic::formula::{enumerate_formulas, indexed_atom, is_subformula_closed, parse, split_key, subformula_closure};
use translogic::{Formula, FormulaSet, Signature};

fn cpl() -> Signature {
    Catalog::builtin().logic("CPL").unwrap().signature.clone()
}

/// Number of formula trees with exactly `n` nodes, by dynamic programming
/// over arities.
fn tree_count(leaves: u64, arities: &[usize], n: usize) -> u64 {
    let mut exact = vec![0u64; n + 1];
    for size in 1..=n {
        let mut total = if size == 1 { leaves } else { 0 };
        for &arity in arities {
            // Ways to spread `size - 1` nodes over `arity` operands.
            let mut spread = vec![0u64; size];
            spread[0] = 1;
            for _ in 0..arity {
                let mut next = vec![0u64; size];
                for (used, &ways) in spread.iter().enumerate() {
                    for (k, &count) in exact.iter().enumerate().take(size - used).skip(1) {
                        next[used + k] += ways * count;
                    }
                }
                spread = next;
            }
            total += spread[size - 1];
        }
        exact[size] = total;
    }
    exact.iter().sum()
}

#[test]
fn enumeration_counts_match_tree_counts() {
    let sig = cpl();
    let atoms = [Formula::atom("p"), Formula::atom("q")];
    let arities: Vec<usize> = sig.connectives.iter().map(|(_, a)| *a).collect();
    let leaves = (atoms.len() + sig.constants.len()) as u64;
    for n in 1..=5 {
        let all = enumerate_formulas(&sig, &atoms, n).collect_all();
        assert_eq!(all.len() as u64, tree_count(leaves, &arities, n), "nodes {n}");
        let distinct: BTreeSet<&Formula> = all.iter().collect();
        assert_eq!(distinct.len(), all.len());
        assert!(all.iter().all(|f| f.node_count() <= n && sig.accepts(f)));
    }
}

#[test]
fn enumeration_is_size_then_text_ordered() {
    let sig = cpl();
    let all = enumerate_formulas(&sig, &[Formula::atom("p"), Formula::atom("q")], 4).collect_all();
    let keys: Vec<(usize, String)> = all.iter().map(|f| (f.node_count(), f.render())).collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn parse_inverts_render(f in common::formula(&cpl(), &["p", "q", "r"], 5)) {
        prop_assert_eq!(parse(&f.render(), &cpl()).unwrap(), f);
    }

    #[test]
    fn closure_is_closed_and_idempotent(fs in proptest::collection::vec(common::formula(&cpl(), &["p", "q"], 4), 1..4)) {
        let set: FormulaSet = fs.into_iter().collect();
        let closure = subformula_closure(&set);
        prop_assert!(set.is_subset(&closure));
        prop_assert!(is_subformula_closed(&closure));
        prop_assert_eq!(subformula_closure(&closure), closure);
    }

    #[test]
    fn indexed_atoms_are_injective(
        a in proptest::collection::vec(common::formula(&cpl(), &["p", "q"], 3), 1..3),
        b in proptest::collection::vec(common::formula(&cpl(), &["p", "q"], 3), 1..3),
    ) {
        prop_assert_eq!(indexed_atom("d", &a) == indexed_atom("d", &b), a == b);
        let Formula::Indexed { key, .. } = indexed_atom("d", &a) else { unreachable!() };
        prop_assert_eq!(split_key(&key).unwrap(), a);
    }
}

#[test]
fn indexed_atoms_are_injective_over_small_closures() {
    let sig = cpl();
    let pool = enumerate_formulas(&sig, &[Formula::atom("p"), Formula::atom("q")], 3).collect_all();
    let mut seen = BTreeSet::new();
    for a in pool.iter().take(20) {
        for b in pool.iter().take(20) {
            assert!(seen.insert(indexed_atom("d", &[a.clone(), b.clone()])), "{a} {b}");
        }
    }
}
