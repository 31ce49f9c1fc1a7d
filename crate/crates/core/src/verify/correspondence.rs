//! Semantic correspondences checked model by model: modal forcing against
//! first-order evaluation of the standard translation, and classical
//! valuations of the encoding axioms against half-negation bivaluations.

use std::collections::BTreeSet;
use std::time::Instant;

use super::preservation::formulas_for;
use super::{first_hit, valid_status, Bounds, CheckEntry, Fact, Status};
use crate::formula::{indexed_atom, Formula, FormulaSet};
use crate::semantics::bivaluation::{self, BivaluationConstraint};
use crate::semantics::fo::{kripke_to_structure, CompiledFormula};
use crate::semantics::kripke::{self, KripkeModel};
use crate::semantics::maps::mossakowski_delta;
use crate::semantics::{atom_keys, classical_matrix, Engine, LogicSpec, Model};
use crate::translation::{apply_translation, ClauseSystem};
use crate::{Error, Result};

/// The variable standing for the current world in translated formulas.
const WORLD_VARIABLE: &str = "x";

struct Mismatch {
    formula: Formula,
    image: Formula,
    model: KripkeModel,
    forced: bool,
}

/// For every modal formula within bounds and every Kripke model of the
/// logic's frame class within the size bound, the worlds forcing the
/// formula are exactly the values of `x` satisfying its translation.
pub fn verify_standard_translation(logic: &LogicSpec, t: &ClauseSystem, bounds: &Bounds) -> Result<CheckEntry> {
    let start = Instant::now();
    let Engine::Kripke { frame } = logic.engine else {
        return Err(Error::Precondition(format!("{} is not a Kripke logic", logic.name)));
    };
    let formulas = formulas_for(logic, bounds, bounds.max_nodes);
    let atoms = atom_keys(&formulas);
    let mismatch = first_hit(&formulas, |f| {
        let image = apply_translation(t, f)?;
        let compiled = CompiledFormula::compile(&image)?;
        let free = image.free_variables();
        if free.iter().any(|v| v != WORLD_VARIABLE) {
            return Err(Error::Precondition(format!("`{image}` has free variables besides `{WORLD_VARIABLE}`")));
        }
        let slot = compiled.variables().iter().position(|v| v == WORLD_VARIABLE);
        let mut found = None;
        let mut failure = None;
        kripke::for_each_model(frame, &atoms, bounds.max_model_size, &mut |m| {
            let outcome = (|| -> Result<Option<(usize, bool)>> {
                let forced = m.extension(f)?;
                let satisfied = compiled.extension(&kripke_to_structure(m))?;
                for w in 0..m.worlds {
                    let mut values = vec![0; compiled.variables().len()];
                    if let Some(i) = slot {
                        values[i] = w;
                    }
                    let fo = satisfied >> compiled.assignment_index(m.worlds, &values) & 1 == 1;
                    let modal = forced >> w & 1 == 1;
                    if fo != modal {
                        return Ok(Some((w, modal)));
                    }
                }
                Ok(None)
            })();
            match outcome {
                Ok(None) => true,
                Ok(Some((w, modal))) => {
                    let mut model = m.clone();
                    model.point = w;
                    found = Some((model, modal));
                    false
                }
                Err(e) => {
                    failure = Some(e);
                    false
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(found.map(|(model, forced)| Mismatch { formula: f.clone(), image, model, forced }))
    })?;
    let mut entry = CheckEntry::new("standard-translation", &format!("{} {}", t.name, logic.name), bounds);
    entry.details.push(format!("{} formulas over {} atoms", formulas.len(), atoms.len()));
    entry.status = match mismatch {
        None => valid_status(&[logic], bounds.max_model_size),
        Some(m) => {
            entry.details.push(format!("forcing and first-order evaluation disagree on {}", m.formula));
            entry.witnesses = vec![
                Fact::formula("formula", &m.formula),
                Fact::formula("image", &m.image),
                Fact::Evaluates { logic: logic.name.clone(), model: Model::Kripke(m.model), formula: m.formula, value: m.forced },
            ];
            Status::Refuted
        }
    };
    Ok(entry.timed(start))
}

/// The classical valuations of the indexed atoms `p{ψ}` (ψ in `closure`)
/// satisfying the encoding axioms correspond one to one with the
/// half-negation bivaluations on `closure`.
pub fn verify_encoding_bijection(closure: &FormulaSet, bounds: &Bounds) -> Result<CheckEntry> {
    let start = Instant::now();
    let axioms = mossakowski_delta(closure)?;
    let members: Vec<&Formula> = closure.iter().collect();
    let keys: Vec<String> = members.iter().map(|f| indexed_atom("p", std::slice::from_ref(*f)).render()).collect();
    let cpl = classical_matrix();
    let mut images = BTreeSet::new();
    let mut encoded = 0usize;
    for v in cpl.valuations(&keys) {
        let mut satisfied = true;
        for axiom in &axioms {
            if !cpl.is_designated(cpl.eval(&v, axiom)?) {
                satisfied = false;
                break;
            }
        }
        if !satisfied {
            continue;
        }
        encoded += 1;
        let image: Vec<bool> = keys.iter().map(|k| v.values[k] == 1).collect();
        images.insert(image);
    }
    let expected: BTreeSet<Vec<bool>> = bivaluation::enumerate(BivaluationConstraint::HalfNegation, closure)?
        .into_iter()
        .map(|b| members.iter().map(|f| b.assignment[*f]).collect())
        .collect();
    let subject = members.iter().map(|f| f.render()).collect::<Vec<_>>().join(" ");
    let mut entry = CheckEntry::new("encoding-bijection", &format!("{{{subject}}}"), bounds);
    entry.details.push(format!("{encoded} axiom models, {} bivaluations", expected.len()));
    let injective = images.len() == encoded;
    entry.status = if injective && images == expected {
        Status::ValidExact
    } else {
        if !injective {
            entry.details.push("two axiom models read as the same bivaluation".into());
        }
        if let Some(missing) = expected.difference(&images).next() {
            entry.details.push(format!("bivaluation not encoded: {}", describe(&members, missing)));
        }
        if let Some(extra) = images.difference(&expected).next() {
            entry.details.push(format!("axiom model outside the bivaluations: {}", describe(&members, extra)));
        }
        Status::Refuted
    };
    Ok(entry.timed(start))
}

fn describe(members: &[&Formula], values: &[bool]) -> String {
    members.iter().zip(values).map(|(f, v)| format!("{f}={}", u8::from(*v))).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;
    use crate::formula::{parse_lenient, subformula_closure};

    #[test]
    fn standard_translation_agrees_on_small_models() {
        let c = Catalog::builtin();
        let b = Bounds { max_nodes: 3, max_atoms: 1, max_model_size: 2, ..Bounds::default() };
        let e = verify_standard_translation(c.logic("K").unwrap(), c.translation("Tx").unwrap(), &b).unwrap();
        assert_eq!(e.status, Status::ValidBounded { size_bound: 2 }, "{:?}", e.details);
    }

    #[test]
    fn encoding_matches_bivaluations() {
        let closure = subformula_closure(&[parse_lenient("(or p (not (and p q)))").unwrap()].into_iter().collect());
        let e = verify_encoding_bijection(&closure, &Bounds::default()).unwrap();
        assert_eq!(e.status, Status::ValidExact, "{:?}", e.details);
    }
}
