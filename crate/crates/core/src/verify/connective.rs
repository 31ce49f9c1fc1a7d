//! Presence of proof-theoretic connectives.
//!
//! Each role is a biconditional on the consequence relation. Strict mode
//! asks for one template working for every instance. Relaxed mode allows
//! a separate witness per instance, but the choice must commute with atom
//! substitutions into the formula universe: `γ(σI) = σ(γ(I))`. Without
//! that constraint every instance could pick an ad hoc witness and the
//! conditional would be present over any atom set.

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::oracle::Oracle;
use super::preservation::formulas_for;
use super::{premise_sets, valid_status, Bounds, CheckEntry, Fact, Status};
use crate::formula::{enumerate_formulas, substitute, Formula, Template};
use crate::semantics::{Engine, LogicSpec};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Falsum,
    Conjunction,
    Disjunction,
    Implication,
    Negation,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::Falsum => "falsum",
            Role::Conjunction => "conjunction",
            Role::Disjunction => "disjunction",
            Role::Implication => "implication",
            Role::Negation => "negation",
        }
    }

    fn arity(self) -> usize {
        match self {
            Role::Falsum | Role::Negation => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConnectiveMode {
    StrictTemplate,
    RelaxedInstancewise,
}

struct Setting<'a> {
    oracle: Oracle<'a>,
    universe: Vec<Formula>,
    sets: Vec<Vec<Formula>>,
}

impl Setting<'_> {
    fn follows(&self, premises: &[Formula], conclusion: &Formula) -> Result<bool> {
        self.oracle.follows(premises, conclusion)
    }

    fn explodes(&self, premises: &[Formula]) -> Result<bool> {
        for chi in &self.universe {
            if !self.follows(premises, chi)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether `gamma` witnesses `role` at the operands `ops`. Witnesses
    /// outside an explicit logic's formula set fail.
    fn witnesses(&self, role: Role, ops: &[Formula], gamma: &Formula) -> Result<bool> {
        match self.witnesses_inner(role, ops, gamma) {
            Err(Error::OutsideDomain(_)) => Ok(false),
            other => other,
        }
    }

    fn witnesses_inner(&self, role: Role, ops: &[Formula], gamma: &Formula) -> Result<bool> {
        let with = |set: &[Formula], extra: &Formula| -> Vec<Formula> {
            let mut s = set.to_vec();
            s.push(extra.clone());
            s
        };
        match role {
            Role::Falsum => self.explodes(std::slice::from_ref(gamma)),
            Role::Conjunction => {
                for set in &self.sets {
                    let both = self.follows(set, &ops[0])? && self.follows(set, &ops[1])?;
                    if both != self.follows(set, gamma)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Role::Disjunction => {
                for set in &self.sets {
                    for chi in &self.universe {
                        let each = self.follows(&with(set, &ops[0]), chi)? && self.follows(&with(set, &ops[1]), chi)?;
                        if each != self.follows(&with(set, gamma), chi)? {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
            Role::Implication => {
                for set in &self.sets {
                    if self.follows(&with(set, &ops[0]), &ops[1])? != self.follows(set, gamma)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Role::Negation => {
                for set in &self.sets {
                    if self.explodes(&with(set, &ops[0]))? != self.follows(set, gamma)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

fn instances(universe: &[Formula], arity: usize) -> Vec<Vec<Formula>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out.into_iter().flat_map(|prefix| universe.iter().map(move |f| [prefix.clone(), vec![f.clone()]].concat())).collect();
    }
    out
}

/// Whether `role` is present in `logic`. For explicit logics the premise
/// sets are all subsets of the formula set; otherwise subsets of `pool`.
pub fn verify_pt_connective(
    logic: &LogicSpec,
    role: Role,
    mode: ConnectiveMode,
    pool: &[Formula],
    bounds: &Bounds,
) -> Result<CheckEntry> {
    let start = Instant::now();
    let universe = formulas_for(logic, bounds, bounds.max_nodes);
    let explicit = matches!(logic.engine, Engine::Explicit(_));
    let sets = if explicit { premise_sets(&universe, universe.len()) } else { premise_sets(pool, bounds.max_premises) };
    let oracle = Oracle::new(logic, universe.iter().chain(pool), bounds.max_model_size);
    let setting = Setting { oracle, universe, sets };
    let subject = format!("{} {}", logic.name, role.name());
    let mut entry = CheckEntry::new(&format!("pt-connective-{}", mode_name(mode)), &subject, bounds);
    let found = match mode {
        ConnectiveMode::StrictTemplate => strict(&setting, logic, role, bounds)?,
        ConnectiveMode::RelaxedInstancewise => relaxed(&setting, role, explicit)?,
    };
    entry.status = match found {
        Some(facts) => {
            entry.witnesses = facts;
            entry.details.push("present".into());
            valid_status(&[logic], bounds.max_model_size)
        }
        None => {
            entry.details.push("absent".into());
            Status::Refuted
        }
    };
    Ok(entry.timed(start))
}

fn mode_name(mode: ConnectiveMode) -> &'static str {
    match mode {
        ConnectiveMode::StrictTemplate => "strict",
        ConnectiveMode::RelaxedInstancewise => "relaxed",
    }
}

fn strict(setting: &Setting, logic: &LogicSpec, role: Role, bounds: &Bounds) -> Result<Option<Vec<Fact>>> {
    let arity = role.arity();
    let placeholders: Vec<Formula> = (1..=arity).map(Formula::placeholder_atom).collect();
    let all = instances(&setting.universe, arity);
    'templates: for body in enumerate_formulas(&logic.signature, &placeholders, bounds.template_bound) {
        let template = Template::new(body, arity)?;
        for ops in &all {
            let gamma = substitute(&template, ops)?;
            if !setting.witnesses(role, ops, &gamma)? {
                continue 'templates;
            }
        }
        return Ok(Some(vec![Fact::Template { role: role.name().into(), template }]));
    }
    Ok(None)
}

/// Backtracking search for a substitution-stable witness per instance.
fn relaxed(setting: &Setting, role: Role, explicit: bool) -> Result<Option<Vec<Fact>>> {
    let universe = &setting.universe;
    let all = instances(universe, role.arity());
    let index: HashMap<&Vec<Formula>, usize> = all.iter().enumerate().map(|(i, ops)| (ops, i)).collect();
    let mut domains = Vec::with_capacity(all.len());
    for ops in &all {
        let mut d = Vec::new();
        for g in universe {
            if setting.witnesses(role, ops, g)? {
                d.push(g.clone());
            }
        }
        if d.is_empty() {
            return Ok(None);
        }
        domains.push(d);
    }
    // Substitutions send atoms into the universe (explicit logics) or onto
    // atoms (enumerated logics, where the universe is only a bound).
    let mut atoms: Vec<Formula> = universe.iter().flat_map(|f| f.atoms()).collect();
    atoms.sort();
    atoms.dedup();
    let images: Vec<Formula> = if explicit { universe.clone() } else { atoms.clone() };
    let mut substitutions: Vec<BTreeMap<Formula, Formula>> = vec![BTreeMap::new()];
    for a in &atoms {
        substitutions = substitutions
            .into_iter()
            .flat_map(|s| images.iter().map(move |img| {
                let mut s = s.clone();
                s.insert(a.clone(), img.clone());
                s
            }))
            .collect();
    }
    let apply = |s: &BTreeMap<Formula, Formula>, f: &Formula| f.replace_atoms(&|a| s.get(a).cloned());
    // links[i] lists (j, σ) with instance j = σ(instance i).
    let mut links: Vec<Vec<(usize, usize)>> = vec![Vec::new(); all.len()];
    for (si, s) in substitutions.iter().enumerate() {
        for (i, ops) in all.iter().enumerate() {
            let moved: Vec<Formula> = ops.iter().map(|f| apply(s, f)).collect();
            if let Some(&j) = index.get(&moved) {
                links[i].push((j, si));
            }
        }
    }
    let mut assignment: Vec<Option<Formula>> = vec![None; all.len()];
    let consistent = |assignment: &[Option<Formula>], i: usize| -> bool {
        for (k, k_links) in links.iter().enumerate() {
            let Some(gk) = &assignment[k] else { continue };
            for &(j, si) in k_links {
                if j != i && k != i {
                    continue;
                }
                if let Some(gj) = &assignment[j] {
                    if apply(&substitutions[si], gk) != *gj {
                        return false;
                    }
                }
            }
        }
        true
    };
    fn search(
        i: usize,
        domains: &[Vec<Formula>],
        assignment: &mut Vec<Option<Formula>>,
        consistent: &dyn Fn(&[Option<Formula>], usize) -> bool,
    ) -> bool {
        if i == domains.len() {
            return true;
        }
        for g in &domains[i] {
            assignment[i] = Some(g.clone());
            if consistent(assignment, i) && search(i + 1, domains, assignment, consistent) {
                return true;
            }
        }
        assignment[i] = None;
        false
    }
    if !search(0, &domains, &mut assignment, &consistent) {
        return Ok(None);
    }
    Ok(Some(
        all.iter()
            .zip(assignment)
            .map(|(ops, g)| {
                let args: Vec<String> = ops.iter().map(Formula::render).collect();
                Fact::Formula { role: format!("{}({})", role.name(), args.join(",")), formula: g.expect("complete assignment") }
            })
            .collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;

    #[test]
    fn classical_strict_conjunction_is_the_connective() {
        let c = Catalog::builtin();
        let cpl = c.logic("CPL").unwrap();
        let b = Bounds { max_nodes: 2, template_bound: 3, ..Bounds::default() };
        let pool = super::super::default_pool(cpl, &b);
        let e = verify_pt_connective(cpl, Role::Conjunction, ConnectiveMode::StrictTemplate, &pool, &b).unwrap();
        assert_eq!(e.status, Status::ValidExact);
        assert!(matches!(&e.witnesses[0], Fact::Template { template, .. } if template.render() == "(and #1 #2)"));
        let e = verify_pt_connective(cpl, Role::Falsum, ConnectiveMode::StrictTemplate, &pool, &b).unwrap();
        assert!(matches!(&e.witnesses[0], Fact::Template { template, .. } if template.render() == "bot"));
    }

    #[test]
    fn toy_conditional_is_volatile() {
        let c = Catalog::builtin();
        let b = Bounds::default();
        let small = c.logic("Toy-p").unwrap();
        let large = c.logic("Toy-pq").unwrap();
        let relaxed = ConnectiveMode::RelaxedInstancewise;
        assert!(verify_pt_connective(small, Role::Implication, relaxed, &[], &b).unwrap().holds());
        assert_eq!(verify_pt_connective(large, Role::Implication, relaxed, &[], &b).unwrap().status, Status::Refuted);
        assert!(!verify_pt_connective(small, Role::Implication, ConnectiveMode::StrictTemplate, &[], &b).unwrap().holds());
        assert!(verify_pt_connective(small, Role::Conjunction, relaxed, &[], &b).unwrap().holds());
        assert!(!verify_pt_connective(large, Role::Conjunction, relaxed, &[], &b).unwrap().holds());
    }
}
