//! Shared generators for the integration tests.

#![allow(dead_code)]

use proptest::prelude::*;
use translogic::formula::Constant;
use translogic::{Formula, Signature};

/// Random formulas over `atoms` and the connectives and constants of `sig`,
/// with at most `depth` nested applications.
pub fn formula(sig: &Signature, atoms: &[&str], depth: u32) -> BoxedStrategy<Formula> {
    let mut leaves: Vec<Formula> = atoms.iter().map(|a| Formula::atom(a)).collect();
    leaves.extend(sig.constants.iter().map(|c| Formula::Const(*c)));
    let leaf = proptest::sample::select(leaves).boxed();
    let connectives = sig.connectives.clone();
    if connectives.is_empty() {
        return leaf;
    }
    leaf.prop_recursive(depth, 32, 2, move |inner| {
        proptest::sample::select(connectives.clone())
            .prop_flat_map(move |(sym, arity)| {
                proptest::collection::vec(inner.clone(), arity).prop_map(move |ops| Formula::apply(&sym, ops))
            })
            .boxed()
    })
    .boxed()
}

/// Classical truth value computed directly from the connective meanings.
pub fn classical(f: &Formula, value: &dyn Fn(&str) -> bool) -> bool {
    match f {
        Formula::Atom(a) => value(a),
        Formula::Const(c) => *c == Constant::Top,
        Formula::Apply(sym, ops) => {
            let v: Vec<bool> = ops.iter().map(|o| classical(o, value)).collect();
            match sym.as_str() {
                "not" => !v[0],
                "and" => v[0] && v[1],
                "or" => v[0] || v[1],
                "->" => !v[0] || v[1],
                "<->" => v[0] == v[1],
                other => panic!("no classical reading of `{other}`"),
            }
        }
        other => panic!("not propositional: {other:?}"),
    }
}
