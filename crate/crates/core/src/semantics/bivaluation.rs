//! Bivaluations over subformula closures: truth assignments that respect
//! classical clauses for the binary connectives and only one half of the
//! classical negation clause.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::formula::{Constant, Formula, FormulaSet};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BivaluationConstraint {
    /// A true formula has a false negation; a false formula's negation is
    /// unconstrained.
    HalfNegation,
}

impl BivaluationConstraint {
    pub fn name(self) -> &'static str {
        "half-negation"
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BivaluationModel {
    /// Domain (a subformula closure) with its truth assignment.
    pub assignment: BTreeMap<Formula, bool>,
}

impl BivaluationModel {
    pub fn lookup(&self, f: &Formula) -> Result<bool> {
        self.assignment.get(f).copied().ok_or_else(|| Error::OutsideDomain(f.render()))
    }

    pub fn domain(&self) -> FormulaSet {
        self.assignment.keys().cloned().collect()
    }

    /// Whether the assignment satisfies the constraint on its domain.
    pub fn admissible(&self, constraint: BivaluationConstraint) -> bool {
        self.assignment.iter().all(|(f, &value)| match forced(constraint, f, &self.assignment) {
            Ok(Forced::Value(v)) => v == value,
            Ok(Forced::Free) => true,
            Ok(Forced::NotTrue) => !value,
            Err(_) => false,
        })
    }
}

enum Forced {
    Value(bool),
    Free,
    NotTrue,
}

/// What the constraint says about `f` given values of its operands.
/// Operands outside `known` leave `f` unconstrained.
fn forced(constraint: BivaluationConstraint, f: &Formula, known: &BTreeMap<Formula, bool>) -> Result<Forced> {
    let BivaluationConstraint::HalfNegation = constraint;
    let get = |op: &Formula| known.get(op).copied();
    Ok(match f {
        Formula::Atom(_) | Formula::Indexed { .. } => Forced::Free,
        Formula::Const(Constant::Top) => Forced::Value(true),
        Formula::Const(Constant::Bot) => Forced::Value(false),
        Formula::Apply(sym, ops) => {
            let vals: Vec<Option<bool>> = ops.iter().map(get).collect();
            if vals.iter().any(Option::is_none) {
                return Ok(Forced::Free);
            }
            let v: Vec<bool> = vals.into_iter().map(Option::unwrap).collect();
            match (sym.as_str(), v.len()) {
                ("and", 2) => Forced::Value(v[0] && v[1]),
                ("or", 2) => Forced::Value(v[0] || v[1]),
                ("->", 2) => Forced::Value(!v[0] || v[1]),
                ("<->", 2) => Forced::Value(v[0] == v[1]),
                ("not", 1) => {
                    if v[0] {
                        Forced::NotTrue
                    } else {
                        Forced::Free
                    }
                }
                _ => return Err(Error::Unsupported { engine: "bivaluation".into(), symbol: sym.clone() }),
            }
        }
        Formula::Pred(sym, _) => return Err(Error::Unsupported { engine: "bivaluation".into(), symbol: sym.clone() }),
        Formula::Quant(q, _, _) => {
            return Err(Error::Unsupported { engine: "bivaluation".into(), symbol: q.symbol().to_string() })
        }
    })
}

/// Every admissible assignment on `closure`, which must be subformula
/// closed. Order: members in canonical order, false before true.
pub fn enumerate(constraint: BivaluationConstraint, closure: &FormulaSet) -> Result<Vec<BivaluationModel>> {
    let members: Vec<&Formula> = closure.iter().collect();
    let mut out = Vec::new();
    let mut current = BTreeMap::new();
    walk(constraint, &members, 0, &mut current, &mut out)?;
    Ok(out)
}

fn walk(
    constraint: BivaluationConstraint,
    members: &[&Formula],
    at: usize,
    current: &mut BTreeMap<Formula, bool>,
    out: &mut Vec<BivaluationModel>,
) -> Result<()> {
    let Some(f) = members.get(at) else {
        out.push(BivaluationModel { assignment: current.clone() });
        return Ok(());
    };
    let options: &[bool] = match forced(constraint, f, current)? {
        Forced::Value(false) | Forced::NotTrue => &[false],
        Forced::Value(true) => &[true],
        Forced::Free => &[false, true],
    };
    for &v in options {
        current.insert((*f).clone(), v);
        walk(constraint, members, at + 1, current, out)?;
    }
    current.remove(*f);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_lenient, subformula_closure};

    #[test]
    fn negated_atom_has_three_assignments() {
        let closure = subformula_closure(&[parse_lenient("(not p)").unwrap()].into_iter().collect());
        let models = enumerate(BivaluationConstraint::HalfNegation, &closure).unwrap();
        let p = Formula::atom("p");
        let np = Formula::not(p.clone());
        let pairs: Vec<(bool, bool)> = models.iter().map(|m| (m.lookup(&p).unwrap(), m.lookup(&np).unwrap())).collect();
        assert_eq!(pairs, vec![(false, false), (false, true), (true, false)]);
        assert!(models.iter().all(|m| m.admissible(BivaluationConstraint::HalfNegation)));
    }

    #[test]
    fn brute_force_agrees() {
        let closure = subformula_closure(&[parse_lenient("(-> (not p) (and p (not (not q))))").unwrap()].into_iter().collect());
        let members: Vec<Formula> = closure.iter().cloned().collect();
        let mut brute = 0;
        for bits in 0u32..(1 << members.len()) {
            let m = BivaluationModel {
                assignment: members.iter().enumerate().map(|(i, f)| (f.clone(), bits >> i & 1 == 1)).collect(),
            };
            if m.admissible(BivaluationConstraint::HalfNegation) {
                brute += 1;
            }
        }
        assert_eq!(enumerate(BivaluationConstraint::HalfNegation, &closure).unwrap().len(), brute);
    }
}
