//! Finite logical matrices.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::formula::{Constant, Formula};
use crate::{Error, Result};

/// Truth table of one connective, row-major over argument tuples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub arity: usize,
    pub entries: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixSemantics {
    pub values: Vec<String>,
    /// Indices into `values`.
    pub designated: Vec<usize>,
    pub tables: BTreeMap<String, Table>,
    pub constants: BTreeMap<Constant, usize>,
}

/// Assignment of truth-value indices to atoms (keyed by canonical text).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Valuation {
    pub values: BTreeMap<String, usize>,
}

impl MatrixSemantics {
    pub fn validate(&self) -> Result<()> {
        let n = self.values.len();
        if n == 0 || self.designated.is_empty() {
            return Err(Error::Config("matrix needs values and a nonempty designated set".into()));
        }
        if self.designated.iter().any(|&d| d >= n) {
            return Err(Error::Config("designated value out of range".into()));
        }
        for (sym, t) in &self.tables {
            if t.entries.len() != n.pow(t.arity as u32) || t.entries.iter().any(|&v| v >= n) {
                return Err(Error::Config(format!("table for `{sym}` is not total over {n} values")));
            }
        }
        if self.constants.values().any(|&v| v >= n) {
            return Err(Error::Config("constant value out of range".into()));
        }
        Ok(())
    }

    pub fn is_designated(&self, value: usize) -> bool {
        self.designated.contains(&value)
    }

    pub fn value_index(&self, name: &str) -> Option<usize> {
        self.values.iter().position(|v| v == name)
    }

    pub fn eval(&self, v: &Valuation, f: &Formula) -> Result<usize> {
        match f {
            Formula::Atom(name) => v.values.get(name.as_str()).copied().ok_or_else(|| Error::UnassignedAtom(name.clone())),
            Formula::Indexed { .. } => {
                let key = f.render();
                v.values.get(&key).copied().ok_or(Error::UnassignedAtom(key))
            }
            Formula::Const(c) => self.constants.get(c).copied().ok_or_else(|| self.unsupported(c.symbol())),
            Formula::Apply(sym, ops) => {
                let table = self.tables.get(sym.as_str()).ok_or_else(|| self.unsupported(sym))?;
                if table.arity != ops.len() {
                    return Err(self.unsupported(sym));
                }
                let n = self.values.len();
                let mut index = 0;
                for op in ops {
                    index = index * n + self.eval(v, op)?;
                }
                Ok(table.entries[index])
            }
            Formula::Pred(sym, _) => Err(self.unsupported(sym)),
            Formula::Quant(q, _, _) => Err(self.unsupported(q.symbol())),
        }
    }

    fn unsupported(&self, symbol: &str) -> Error {
        Error::Unsupported { engine: "matrix".into(), symbol: symbol.to_string() }
    }

    /// All valuations of `atoms` in odometer order (last atom fastest).
    pub fn valuations(&self, atoms: &[String]) -> ValuationIter {
        ValuationIter { atoms: atoms.to_vec(), radix: self.values.len(), digits: vec![0; atoms.len()], done: false }
    }
}

pub struct ValuationIter {
    atoms: Vec<String>,
    radix: usize,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for ValuationIter {
    type Item = Valuation;

    fn next(&mut self) -> Option<Valuation> {
        if self.done {
            return None;
        }
        let out = Valuation { values: self.atoms.iter().cloned().zip(self.digits.iter().copied()).collect() };
        self.done = !odometer(&mut self.digits, self.radix);
        Some(out)
    }
}

/// Advance `digits` as a base-`radix` counter; false once it wraps.
pub(crate) fn odometer(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_valued() -> MatrixSemantics {
        MatrixSemantics {
            values: vec!["0".into(), "1".into()],
            designated: vec![1],
            tables: [
                ("not".to_string(), Table { arity: 1, entries: vec![1, 0] }),
                ("->".to_string(), Table { arity: 2, entries: vec![1, 1, 0, 1] }),
            ]
            .into_iter()
            .collect(),
            constants: BTreeMap::new(),
        }
    }

    #[test]
    fn odometer_order() {
        let m = two_valued();
        let vals: Vec<Vec<usize>> =
            m.valuations(&["p".into(), "q".into()]).map(|v| v.values.values().copied().collect()).collect();
        assert_eq!(vals, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(m.valuations(&[]).count(), 1);
    }

    #[test]
    fn totality_is_checked() {
        let mut m = two_valued();
        assert!(m.validate().is_ok());
        m.tables.get_mut("->").unwrap().entries.pop();
        assert!(m.validate().is_err());
    }
}
