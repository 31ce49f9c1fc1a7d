//! Builtin model maps between the model classes of two logics, and the
//! axiom set that encodes half-negation semantics over indexed atoms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::kripke::{FrameClass, KripkeModel};
use super::matrix::Valuation;
use super::{classical_matrix, BivaluationModel, Model};
use crate::formula::{indexed_atom, is_subformula_closed, split_key, subformula_closure, Formula, FormulaSet};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// Source models are sent to target models.
    SourceToTarget,
    /// Target models are sent to source models.
    TargetToSource,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Transform {
    /// Bivaluation to classical valuation: keep the atoms' values.
    KeepValuation,
    /// Classical valuation satisfying the encoding axioms of the closure
    /// to the bivaluation reading `base{φ}` as the value of `φ`.
    IndexedAtomsToAssignment { base: String },
    /// Relatedness model to classical valuation: copy atoms, and set each
    /// `base{φ,ψ}` in the context to the lifted relation on `φ`, `ψ`.
    RelatednessToValuation { base: String },
    /// Kripke model to bare worlds: `base{φ}` true where `φ` is forced.
    WorldsToIndexedAtoms { base: String },
    /// Any model to the single valuation of a one-valued matrix.
    ConstantTrivial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelMap {
    pub name: String,
    pub source: String,
    pub target: String,
    pub direction: Direction,
    pub model_based: bool,
    pub surjective_on_theta: bool,
    pub transform: Transform,
}

/// Apply `map` to `model`. `context` holds the formulas the image will be
/// asked about: the closure for bivaluation images, the translated
/// formulas for indexed-atom images.
pub fn apply_model_map(map: &ModelMap, model: &Model, context: &FormulaSet) -> Result<Model> {
    let wrong = |what: &str| Error::MapInput { map: map.name.clone(), reason: format!("expected a {what}") };
    match (&map.transform, model) {
        (Transform::KeepValuation, Model::Bivaluation(b)) => {
            let values = b
                .assignment
                .iter()
                .filter(|(f, _)| matches!(f, Formula::Atom(_) | Formula::Indexed { .. }))
                .map(|(f, &v)| (f.render(), v as usize))
                .collect();
            Ok(Model::Valuation(Valuation { values }))
        }
        (Transform::KeepValuation, _) => Err(wrong("bivaluation")),
        (Transform::IndexedAtomsToAssignment { base }, Model::Valuation(v)) => {
            let closure = subformula_closure(context);
            let cpl = classical_matrix();
            for axiom in mossakowski_delta(&closure)? {
                if cpl.eval(v, &axiom)? != 1 {
                    return Err(Error::GuardViolated { map: map.name.clone(), formula: axiom.render() });
                }
            }
            let mut assignment = BTreeMap::new();
            for f in closure {
                let key = indexed_atom(base, std::slice::from_ref(&f)).render();
                let value = v.values.get(&key).copied().ok_or(Error::UnassignedAtom(key))?;
                assignment.insert(f, value == 1);
            }
            Ok(Model::Bivaluation(BivaluationModel { assignment }))
        }
        (Transform::IndexedAtomsToAssignment { .. }, _) => Err(wrong("classical valuation")),
        (Transform::RelatednessToValuation { base }, Model::Relatedness(r)) => {
            let mut values: BTreeMap<String, usize> = r.valuation.iter().map(|(a, &v)| (a.clone(), v as usize)).collect();
            let mut atoms = FormulaSet::new();
            for f in context {
                f.collect_atoms(&mut atoms);
            }
            for atom in atoms {
                let Formula::Indexed { base: b, key } = &atom else { continue };
                if b != base {
                    continue;
                }
                let operands = split_key(key)?;
                if operands.len() != 2 {
                    return Err(Error::MapInput { map: map.name.clone(), reason: format!("`{atom}` is not a pair index") });
                }
                values.insert(atom.render(), r.related_formulas(&operands[0], &operands[1]) as usize);
            }
            Ok(Model::Valuation(Valuation { values }))
        }
        (Transform::RelatednessToValuation { .. }, _) => Err(wrong("relatedness model")),
        (Transform::WorldsToIndexedAtoms { base }, Model::Kripke(k)) => {
            let mut valuation = BTreeMap::new();
            for f in subformula_closure(context) {
                let mask = k.extension(&f)?;
                valuation.insert(indexed_atom(base, std::slice::from_ref(&f)).render(), mask);
            }
            Ok(Model::Kripke(KripkeModel {
                frame: FrameClass::Bare,
                worlds: k.worlds,
                access: vec![0; k.worlds],
                valuation,
                point: k.point,
            }))
        }
        (Transform::WorldsToIndexedAtoms { .. }, _) => Err(wrong("Kripke model")),
        (Transform::ConstantTrivial, _) => {
            let mut atoms = FormulaSet::new();
            for f in context {
                f.collect_atoms(&mut atoms);
            }
            Ok(Model::Valuation(Valuation { values: atoms.iter().map(|a| (a.render(), 0)).collect() }))
        }
    }
}

/// Axioms forcing indexed atoms `p{φ}` to behave as a half-negation
/// bivaluation on `closure`: one per compound member.
pub fn mossakowski_delta(closure: &FormulaSet) -> Result<FormulaSet> {
    if !is_subformula_closed(closure) {
        return Err(Error::Precondition("encoding axioms need a subformula-closed set".into()));
    }
    let name = |f: &Formula| indexed_atom("p", std::slice::from_ref(f));
    let mut out = FormulaSet::new();
    for f in closure {
        let Formula::Apply(sym, ops) = f else { continue };
        match (sym.as_str(), ops.as_slice()) {
            ("and" | "or" | "->", [a, b]) => {
                out.insert(Formula::iff(name(f), Formula::apply(sym, vec![name(a), name(b)])));
            }
            ("not", [a]) => {
                out.insert(Formula::implies(name(a), Formula::not(name(f))));
            }
            _ => return Err(Error::Unsupported { engine: "encoding axioms".into(), symbol: sym.clone() }),
        }
    }
    Ok(out)
}
