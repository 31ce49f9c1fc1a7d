//! Logics given only by a consequence relation on a fixed finite set of
//! formulas, generated by finitely many rules.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::formula::{Formula, FormulaSet};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    pub premises: FormulaSet,
    pub conclusion: Formula,
}

/// The consequence relation is the least reflexive, monotone and
/// transitive one containing the rules.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplicitConsequence {
    pub formulas: FormulaSet,
    pub rules: Vec<Rule>,
}

impl ExplicitConsequence {
    pub fn validate(&self) -> Result<()> {
        for r in &self.rules {
            if !self.formulas.contains(&r.conclusion) || !r.premises.is_subset(&self.formulas) {
                return Err(Error::Config(format!("rule concluding `{}` leaves the formula set", r.conclusion)));
            }
        }
        Ok(())
    }

    /// Everything derivable from `premises`.
    pub fn closure(&self, premises: &FormulaSet) -> Result<FormulaSet> {
        if let Some(f) = premises.iter().find(|f| !self.formulas.contains(*f)) {
            return Err(Error::OutsideDomain(f.render()));
        }
        let mut current: BTreeSet<Formula> = premises.clone();
        loop {
            let before = current.len();
            for r in &self.rules {
                if r.premises.is_subset(&current) {
                    current.insert(r.conclusion.clone());
                }
            }
            if current.len() == before {
                return Ok(current);
            }
        }
    }

    pub fn entails(&self, premises: &FormulaSet, conclusion: &Formula) -> Result<bool> {
        if !self.formulas.contains(conclusion) {
            return Err(Error::OutsideDomain(conclusion.render()));
        }
        Ok(self.closure(premises)?.contains(conclusion))
    }
}
