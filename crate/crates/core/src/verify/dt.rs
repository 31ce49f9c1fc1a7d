//! Deduction theorems: the standard form, the template search for a
//! general form, and preservation of the general form along a translation.

use std::time::Instant;

use super::oracle::Oracle;
use super::preservation::formulas_for;
use super::{first_hit, premise_sets, valid_status, Bounds, CheckEntry, Fact, Status};
use crate::formula::{enumerate_formulas, parse_lenient, substitute, Formula, Template};
use crate::semantics::LogicSpec;
use crate::translation::{apply_translation, classify_shape, ClauseSystem};
use crate::{Error, Result};

/// Premise sets for deduction checks hold at most two formulas.
const DT_PREMISES: usize = 2;

/// A premise pool built from a fixed candidate list, keeping the members
/// the signature and atom bound allow.
pub fn default_pool(logic: &LogicSpec, bounds: &Bounds) -> Vec<Formula> {
    const CANDIDATES: [&str; 7] = ["p", "q", "(not p)", "(-> p q)", "(-> p (-> p q))", "(and p q)", "(or p q)"];
    let atoms = bounds.atoms();
    CANDIDATES
        .iter()
        .map(|s| parse_lenient(s).expect("pool candidate parses"))
        .filter(|f| logic.signature.accepts(f) && f.atoms().iter().all(|a| atoms.contains(a)))
        .filter(|f| match &logic.engine {
            crate::semantics::Engine::Explicit(e) => e.formulas.contains(f),
            _ => true,
        })
        .take(bounds.premise_pool_size)
        .collect()
}

struct DtFailure {
    premises: Vec<Formula>,
    antecedent: Formula,
    consequent: Formula,
    /// Whether `Γ, φ ⊢ ψ` held (the other side is its negation).
    extended: bool,
}

/// First `(φ, ψ, Γ)` in that nesting order where `Γ, φ ⊢ ψ` and
/// `Γ ⊢ α(φ, ψ)` disagree.
fn dt_failure(
    oracle: &Oracle,
    formulas: &[Formula],
    sets: &[Vec<Formula>],
    alpha: &(dyn Fn(&Formula, &Formula) -> Result<Formula> + Sync),
) -> Result<Option<DtFailure>> {
    first_hit(formulas, |phi| {
        for psi in formulas {
            let joined = alpha(phi, psi)?;
            for gamma in sets {
                let mut extended_premises = gamma.clone();
                extended_premises.push(phi.clone());
                let extended = oracle.follows(&extended_premises, psi)?;
                let direct = oracle.follows(gamma, &joined)?;
                if extended != direct {
                    return Ok(Some(DtFailure {
                        premises: gamma.clone(),
                        antecedent: phi.clone(),
                        consequent: psi.clone(),
                        extended,
                    }));
                }
            }
        }
        Ok(None)
    })
}

fn failure_facts(logic: &LogicSpec, oracle: &Oracle, f: &DtFailure, joined: &Formula) -> Result<Vec<Fact>> {
    let mut out: Vec<Fact> = f.premises.iter().map(|p| Fact::formula("premise", p)).collect();
    out.push(Fact::formula("antecedent", &f.antecedent));
    out.push(Fact::formula("consequent", &f.consequent));
    let mut extended = f.premises.clone();
    extended.push(f.antecedent.clone());
    let (held, failed) = if f.extended {
        ((extended, f.consequent.clone()), (f.premises.clone(), joined.clone()))
    } else {
        ((f.premises.clone(), joined.clone()), (extended, f.consequent.clone()))
    };
    out.push(Fact::Follows { logic: logic.name.clone(), premises: held.0, conclusion: held.1, bound: oracle.bound() });
    let model = oracle.countermodel(&failed.0, &failed.1)?.expect("the failing side has a countermodel");
    out.push(Fact::Countermodel { logic: logic.name.clone(), premises: failed.0, conclusion: failed.1, model });
    Ok(out)
}

fn implication(logic: &LogicSpec) -> Result<()> {
    match logic.signature.arity("->") {
        Some(2) => Ok(()),
        _ => Err(Error::Precondition(format!("{} has no conditional `->`", logic.name))),
    }
}

/// `Γ, φ ⊢ ψ` iff `Γ ⊢ φ → ψ` for `Γ` from `pool` (at most two members)
/// and `φ`, `ψ` within bounds.
pub fn verify_standard_dt(logic: &LogicSpec, pool: &[Formula], bounds: &Bounds) -> Result<CheckEntry> {
    let start = Instant::now();
    implication(logic)?;
    let formulas = formulas_for(logic, bounds, bounds.max_nodes);
    let sets = premise_sets(pool, DT_PREMISES.min(bounds.max_premises));
    let oracle = Oracle::new(logic, formulas.iter().chain(pool), bounds.max_model_size);
    let alpha = |a: &Formula, b: &Formula| Ok(Formula::implies(a.clone(), b.clone()));
    let mut entry = CheckEntry::new("standard-dt", &logic.name, bounds);
    entry.status = match dt_failure(&oracle, &formulas, &sets, &alpha)? {
        Some(f) => {
            let joined = alpha(&f.antecedent, &f.consequent)?;
            entry.witnesses = failure_facts(logic, &oracle, &f, &joined)?;
            Status::Refuted
        }
        None => valid_status(&[logic], bounds.max_model_size),
    };
    Ok(entry.timed(start))
}

/// The first two-placeholder template (both occurring, at most
/// `template_bound` nodes) for which the general deduction theorem
/// survives every bounded check.
pub fn search_general_dt(logic: &LogicSpec, pool: &[Formula], bounds: &Bounds) -> Result<CheckEntry> {
    let start = Instant::now();
    let formulas = formulas_for(logic, bounds, bounds.max_nodes);
    let sets = premise_sets(pool, DT_PREMISES.min(bounds.max_premises));
    let oracle = Oracle::new(logic, formulas.iter().chain(pool), bounds.max_model_size);
    let placeholders = [Formula::placeholder_atom(1), Formula::placeholder_atom(2)];
    let mut tried = 0;
    let mut entry = CheckEntry::new("general-dt", &logic.name, bounds);
    for body in enumerate_formulas(&logic.signature, &placeholders, bounds.template_bound) {
        let template = Template::new(body, 2)?;
        if template.occurrences().iter().any(|&n| n == 0) {
            continue;
        }
        tried += 1;
        let alpha = |a: &Formula, b: &Formula| substitute(&template, &[a.clone(), b.clone()]);
        if dt_failure(&oracle, &formulas, &sets, &alpha)?.is_none() {
            entry.details.push(format!("template {}", template.render()));
            entry.details.push(format!("{tried} templates tried"));
            entry.witnesses.push(Fact::Template { role: "alpha".into(), template });
            entry.status = valid_status(&[logic], bounds.max_model_size);
            return Ok(entry.timed(start));
        }
    }
    entry.details.push(format!("{tried} templates tried"));
    entry.status = Status::Exhausted;
    Ok(entry.timed(start))
}

/// The general deduction theorem of the image, with the template taken
/// from the translation's conditional clause instantiated at translated
/// operands. Skipped unless the translation is GR^C, the source has the
/// standard deduction theorem and the translation is back-and-forth.
#[allow(clippy::too_many_arguments)]
pub fn verify_dt_preservation(
    source: &LogicSpec,
    target: &LogicSpec,
    t: &ClauseSystem,
    source_dt: &CheckEntry,
    theoremhood: &CheckEntry,
    conservativity: &CheckEntry,
    pool: &[Formula],
    bounds: &Bounds,
) -> Result<CheckEntry> {
    let start = Instant::now();
    let mut entry = CheckEntry::new("dt-preservation", &t.name, bounds);
    let skip = |entry: CheckEntry, reason: &str| Ok(entry.with_status(Status::Skipped { reason: reason.to_string() }).timed(start));
    if !classify_shape(t).gr_conditional_compositional {
        return skip(entry, "not GR^C: the conditional clause is not compositional");
    }
    if !source_dt.holds() {
        return skip(entry, "the source lacks the standard deduction theorem");
    }
    if !theoremhood.holds() || !conservativity.holds() {
        return skip(entry, "the translation is not verified conservative");
    }
    let main = &t.translators[&t.main];
    let clause = main.clauses.iter().find(|c| c.key == ["->"]).expect("GR^C systems have a conditional clause");
    let template = clause.template.clone();
    let formulas = formulas_for(source, bounds, bounds.max_nodes);
    let images: Vec<Formula> = formulas.iter().map(|f| apply_translation(t, f)).collect::<Result<_>>()?;
    let pool_images: Vec<Formula> = pool.iter().map(|f| apply_translation(t, f)).collect::<Result<_>>()?;
    let sets = premise_sets(&pool_images, DT_PREMISES.min(bounds.max_premises));
    let oracle = Oracle::new(target, images.iter().chain(&pool_images), bounds.max_model_size);
    let alpha = |a: &Formula, b: &Formula| substitute(&template, &[a.clone(), b.clone()]);
    entry.details.push(format!("template {}", template.render()));
    entry.witnesses.push(Fact::Template { role: "alpha".into(), template: template.clone() });
    entry.status = match dt_failure(&oracle, &images, &sets, &alpha)? {
        Some(f) => {
            let joined = alpha(&f.antecedent, &f.consequent)?;
            entry.witnesses.extend(failure_facts(target, &oracle, &f, &joined)?);
            Status::Refuted
        }
        None => valid_status(&[source, target], bounds.max_model_size),
    };
    Ok(entry.timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;

    #[test]
    fn pool_respects_signature() {
        let c = Catalog::builtin();
        let b = Bounds::default();
        let pool = default_pool(c.logic("CPL-not-imp").unwrap(), &b);
        let rendered: Vec<String> = pool.iter().map(Formula::render).collect();
        assert_eq!(rendered, ["p", "q", "(not p)", "(-> p q)", "(-> p (-> p q))"]);
        assert_eq!(default_pool(c.logic("atom-only").unwrap(), &b).len(), 2);
    }

    #[test]
    fn atom_only_has_no_conditional() {
        let c = Catalog::builtin();
        let b = Bounds { max_nodes: 2, ..Bounds::default() };
        let logic = c.logic("atom-only").unwrap();
        assert!(matches!(verify_standard_dt(logic, &[], &b), Err(Error::Precondition(_))));
        assert_eq!(search_general_dt(logic, &[], &b).unwrap().status, Status::Exhausted);
    }

    #[test]
    fn classical_search_finds_the_plain_conditional() {
        let c = Catalog::builtin();
        let cpl = c.logic("CPL").unwrap();
        let b = Bounds { max_nodes: 2, ..Bounds::default() };
        let e = search_general_dt(cpl, &default_pool(cpl, &b), &b).unwrap();
        assert_eq!(e.details[0], "template (-> #1 #2)");
    }
}
