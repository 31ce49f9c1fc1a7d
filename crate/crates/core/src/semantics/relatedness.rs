//! Relatedness models: a classical valuation plus a reflexive, symmetric
//! subject-matter relation on atoms. An implication is true when it holds
//! materially and its two sides share related atoms.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::formula::{Constant, Formula};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RelatednessModel {
    pub valuation: BTreeMap<String, bool>,
    /// Related pairs, stored in both orders and including the diagonal.
    pub related: BTreeSet<(String, String)>,
}

impl RelatednessModel {
    /// A model whose relation is only the diagonal plus `pairs` (closed
    /// under symmetry).
    pub fn new(valuation: BTreeMap<String, bool>, pairs: &[(&str, &str)]) -> RelatednessModel {
        let mut related: BTreeSet<(String, String)> = valuation.keys().map(|a| (a.clone(), a.clone())).collect();
        for (a, b) in pairs {
            related.insert((a.to_string(), b.to_string()));
            related.insert((b.to_string(), a.to_string()));
        }
        RelatednessModel { valuation, related }
    }

    pub fn well_formed(&self) -> bool {
        self.valuation.keys().all(|a| self.related.contains(&(a.clone(), a.clone())))
            && self.related.iter().all(|(a, b)| self.related.contains(&(b.clone(), a.clone())))
    }

    /// Lifted relation: some atom of `a` is related to some atom of `b`.
    pub fn related_formulas(&self, a: &Formula, b: &Formula) -> bool {
        let left = a.atoms();
        let right = b.atoms();
        left.iter().any(|x| right.iter().any(|y| self.related.contains(&(x.render(), y.render()))))
    }

    pub fn eval(&self, f: &Formula) -> Result<bool> {
        match f {
            Formula::Atom(_) | Formula::Indexed { .. } => {
                let key = f.render();
                self.valuation.get(&key).copied().ok_or(Error::UnassignedAtom(key))
            }
            Formula::Const(c) => Ok(*c == Constant::Top),
            Formula::Apply(sym, ops) => match (sym.as_str(), ops.len()) {
                ("not", 1) => Ok(!self.eval(&ops[0])?),
                ("and", 2) => Ok(self.eval(&ops[0])? && self.eval(&ops[1])?),
                ("or", 2) => Ok(self.eval(&ops[0])? || self.eval(&ops[1])?),
                ("->", 2) => {
                    let material = !(self.eval(&ops[0])? && !self.eval(&ops[1])?);
                    Ok(material && self.related_formulas(&ops[0], &ops[1]))
                }
                _ => Err(Error::Unsupported { engine: "relatedness".into(), symbol: sym.clone() }),
            },
            Formula::Pred(sym, _) => Err(Error::Unsupported { engine: "relatedness".into(), symbol: sym.clone() }),
            Formula::Quant(q, _, _) => Err(Error::Unsupported { engine: "relatedness".into(), symbol: q.symbol().into() }),
        }
    }
}

/// Every (valuation, relation) pair over `atoms`: valuations in odometer
/// order, and for each, every reflexive symmetric relation.
pub fn enumerate(atoms: &[String]) -> Vec<RelatednessModel> {
    let pairs: Vec<(usize, usize)> =
        (0..atoms.len()).flat_map(|i| (i + 1..atoms.len()).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let mut digits = vec![0usize; atoms.len()];
    loop {
        let valuation: BTreeMap<String, bool> = atoms.iter().cloned().zip(digits.iter().map(|&d| d == 1)).collect();
        for rel in 0u64..(1u64 << pairs.len()) {
            let chosen: Vec<(&str, &str)> = pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| rel >> k & 1 == 1)
                .map(|(_, &(i, j))| (atoms[i].as_str(), atoms[j].as_str()))
                .collect();
            out.push(RelatednessModel::new(valuation.clone(), &chosen));
        }
        if !super::matrix::odometer(&mut digits, 2) {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_lenient;

    #[test]
    fn unrelated_implication_is_false() {
        let m = RelatednessModel::new([("p".to_string(), false), ("q".to_string(), false)].into_iter().collect(), &[]);
        assert!(!m.eval(&parse_lenient("(-> p q)").unwrap()).unwrap());
        assert!(m.eval(&parse_lenient("(-> p p)").unwrap()).unwrap());
        let m = RelatednessModel::new(m.valuation.clone(), &[("p", "q")]);
        assert!(m.eval(&parse_lenient("(-> p q)").unwrap()).unwrap());
    }

    #[test]
    fn enumeration_counts() {
        let atoms = ["p".to_string(), "q".to_string()];
        let all = enumerate(&atoms);
        assert_eq!(all.len(), 8);
        assert!(all.iter().all(RelatednessModel::well_formed));
        assert_eq!(enumerate(&["p".into(), "q".into(), "r".into()]).len(), 64);
    }
}
