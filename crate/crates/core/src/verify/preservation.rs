//! Truth preservation, back-and-forth, sub-logic witnesses, corpus
//! statuses, triviality and bounded expressibility.

use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use rayon::prelude::*;

use super::oracle::Oracle;
use super::{first_hit, premise_sets, valid_status, Bounds, CheckEntry, Fact, GvWitness, Status, Theta};
use crate::catalog::CorpusEntry;
use crate::formula::{enumerate_formulas, subformula_closure, Formula, FormulaSet};
use crate::semantics::kripke::{FrameClass, KripkeModel};
use crate::semantics::{
    apply_model_map, enumerate_models, evaluate, mossakowski_delta, ConsequenceMode, Direction, Engine, LogicSpec, Model,
    ModelMap, Transform, Valuation,
};
use crate::translation::{apply_translation, ClauseSystem};
use crate::{Error, Result};

/// Source formulas within `max_nodes`: the formula set for explicit
/// logics, the canonical enumeration otherwise.
pub(crate) fn formulas_for(logic: &LogicSpec, bounds: &Bounds, max_nodes: usize) -> Vec<Formula> {
    match &logic.engine {
        Engine::Explicit(e) => {
            let mut out: Vec<Formula> = e.formulas.iter().filter(|f| f.node_count() <= max_nodes).cloned().collect();
            out.sort();
            out
        }
        _ => enumerate_formulas(&logic.signature, &bounds.atoms(), max_nodes).collect(),
    }
}

fn translate_all(t: &ClauseSystem, formulas: &[Formula]) -> Result<Vec<Formula>> {
    formulas.par_iter().map(|f| apply_translation(t, f)).collect()
}

fn check_endpoints(t: &ClauseSystem, source: &LogicSpec, target: &LogicSpec) -> Result<()> {
    if t.source != source.name || t.target != target.name {
        return Err(Error::Precondition(format!(
            "`{}` goes from {} to {}, not from {} to {}",
            t.name, t.source, t.target, source.name, target.name
        )));
    }
    Ok(())
}

/// Formulas the image of a model must interpret.
fn map_context(map: &ModelMap, formula: &Formula, image: &Formula) -> FormulaSet {
    match (&map.transform, map.direction) {
        (Transform::RelatednessToValuation { .. }, _) | (Transform::ConstantTrivial, Direction::SourceToTarget) => {
            [image.clone()].into_iter().collect()
        }
        _ => [formula.clone()].into_iter().collect(),
    }
}

/// Side facts for a formula that is valid in one logic and refuted in the
/// other.
fn side_facts(oracle: &Oracle, premises: &[Formula], conclusion: &Formula, refutation: Option<Option<Model>>) -> Fact {
    match refutation {
        Some(model) => Fact::Countermodel {
            logic: oracle.logic().name.clone(),
            premises: premises.to_vec(),
            conclusion: conclusion.clone(),
            model,
        },
        None => Fact::Follows {
            logic: oracle.logic().name.clone(),
            premises: premises.to_vec(),
            conclusion: conclusion.clone(),
            bound: oracle.bound(),
        },
    }
}

/// `m ⊨ φ` iff the map image satisfies the translation of `φ`, over every
/// enumerated model and source formula within bounds.
pub fn verify_truth_preservation(
    source: &LogicSpec,
    target: &LogicSpec,
    t: &ClauseSystem,
    map: Option<&ModelMap>,
    bounds: &Bounds,
) -> Result<CheckEntry> {
    let start = Instant::now();
    let map = map.ok_or_else(|| Error::Precondition(format!("truth preservation of `{}` requires a model map", t.name)))?;
    check_endpoints(t, source, target)?;
    if map.source != source.name || map.target != target.name {
        return Err(Error::Precondition(format!("model map `{}` does not connect {} and {}", map.name, source.name, target.name)));
    }
    let formulas = formulas_for(source, bounds, bounds.max_nodes);
    let size = bounds.max_model_size;
    let hit = first_hit(&formulas, |f| {
        let image = apply_translation(t, f)?;
        let context = map_context(map, f, &image);
        let (from, from_formula, to, to_formula) = match map.direction {
            Direction::SourceToTarget => (source, f, target, &image),
            Direction::TargetToSource => (target, &image, source, f),
        };
        for m in enumerate_models(from, &[from_formula.clone()].into_iter().collect(), size)? {
            let mapped = apply_model_map(map, &m, &context)?;
            let a = evaluate(from, &m, from_formula)?;
            let b = evaluate(to, &mapped, to_formula)?;
            if a != b {
                return Ok(Some(vec![
                    Fact::formula("formula", f),
                    Fact::formula("image", &image),
                    Fact::Evaluates { logic: from.name.clone(), model: m, formula: from_formula.clone(), value: a },
                    Fact::Evaluates { logic: to.name.clone(), model: mapped, formula: to_formula.clone(), value: b },
                ]));
            }
        }
        Ok(None)
    })?;
    let mut entry = CheckEntry::new("truth-preservation", &format!("{} with {}", t.name, map.name), bounds);
    entry.details.push(format!("direction {:?}", map.direction));
    entry.details.push(format!("{} source formulas", formulas.len()));
    entry.status = match hit {
        Some(w) => {
            entry.witnesses = w;
            Status::Refuted
        }
        None => valid_status(&[source, target], size),
    };
    Ok(entry.timed(start))
}

/// `⊢ φ` iff `⊢ T(φ)` for every source formula within bounds.
pub fn verify_theoremhood(source: &LogicSpec, target: &LogicSpec, t: &ClauseSystem, bounds: &Bounds) -> Result<CheckEntry> {
    let formulas = formulas_for(source, bounds, bounds.max_nodes);
    verify_theoremhood_on(source, target, t, &formulas, bounds)
}

/// Theoremhood in both directions over the given formulas.
pub fn verify_theoremhood_on(
    source: &LogicSpec,
    target: &LogicSpec,
    t: &ClauseSystem,
    formulas: &[Formula],
    bounds: &Bounds,
) -> Result<CheckEntry> {
    let start = Instant::now();
    check_endpoints(t, source, target)?;
    let images = translate_all(t, formulas)?;
    let size = bounds.max_model_size;
    let so = Oracle::new(source, formulas, size);
    let to = Oracle::new(target, &images, size);
    let indices: Vec<usize> = (0..formulas.len()).collect();
    let hit = first_hit(&indices, |&i| {
        let s = so.countermodel(&[], &formulas[i])?;
        let g = to.countermodel(&[], &images[i])?;
        if s.is_none() == g.is_none() {
            return Ok(None);
        }
        Ok(Some(vec![
            Fact::formula("formula", &formulas[i]),
            Fact::formula("image", &images[i]),
            side_facts(&so, &[], &formulas[i], s),
            side_facts(&to, &[], &images[i], g),
        ]))
    })?;
    let mut entry = CheckEntry::new("theoremhood", &t.name, bounds);
    entry.details.push(format!("{} formulas", formulas.len()));
    entry.status = match hit {
        Some(w) => {
            entry.witnesses = w;
            Status::Refuted
        }
        None => valid_status(&[source, target], size),
    };
    Ok(entry.timed(start))
}

/// `Γ ⊢ φ` iff `T(Γ) ⊢ T(φ)` for premise sets from `pool` and conclusions
/// within bounds. Skipped when either logic only fixes its theorems.
pub fn verify_conservativity(
    source: &LogicSpec,
    target: &LogicSpec,
    t: &ClauseSystem,
    pool: &[Formula],
    bounds: &Bounds,
) -> Result<CheckEntry> {
    let start = Instant::now();
    check_endpoints(t, source, target)?;
    let mut entry = CheckEntry::new("conservativity", &t.name, bounds);
    if let Some(l) = [source, target].into_iter().find(|l| l.consequence_mode == ConsequenceMode::TheoremhoodOnly) {
        entry.status = Status::Skipped { reason: format!("{} fixes theorems only; consequence is not compared", l.name) };
        return Ok(entry.timed(start));
    }
    let formulas = formulas_for(source, bounds, bounds.max_nodes);
    let sets = premise_sets(pool, bounds.max_premises);
    let images = translate_all(t, &formulas)?;
    let pool_images = translate_all(t, pool)?;
    let image_of = |f: &Formula| pool_images[pool.iter().position(|g| g == f).expect("pool member")].clone();
    let size = bounds.max_model_size;
    let so = Oracle::new(source, formulas.iter().chain(pool), size);
    let to = Oracle::new(target, images.iter().chain(&pool_images), size);
    let indices: Vec<usize> = (0..formulas.len()).collect();
    let hit = first_hit(&indices, |&i| {
        for gamma in &sets {
            let t_gamma: Vec<Formula> = gamma.iter().map(image_of).collect();
            let s = so.countermodel(gamma, &formulas[i])?;
            let g = to.countermodel(&t_gamma, &images[i])?;
            if s.is_none() != g.is_none() {
                let mut w: Vec<Fact> = gamma.iter().map(|p| Fact::formula("premise", p)).collect();
                w.push(Fact::formula("formula", &formulas[i]));
                w.push(side_facts(&so, gamma, &formulas[i], s));
                w.push(side_facts(&to, &t_gamma, &images[i], g));
                return Ok(Some(w));
            }
        }
        Ok(None)
    })?;
    entry.details.push(format!("{} premise sets, {} conclusions", sets.len(), formulas.len()));
    entry.status = match hit {
        Some(w) => {
            entry.witnesses = w;
            Status::Refuted
        }
        None => valid_status(&[source, target], size),
    };
    Ok(entry.timed(start))
}

/// Both sub-logic conditions per source formula `φ`, with the guard taken
/// over `{φ}`: (a) every source model is the image of a guarded target
/// model, (b) guarded target models satisfy `T(φ)` exactly when their
/// images satisfy `φ`.
pub fn verify_gv_sublogic(source: &LogicSpec, target: &LogicSpec, w: &GvWitness, bounds: &Bounds) -> Result<CheckEntry> {
    let start = Instant::now();
    let t = &w.translation;
    let map = &w.model_map;
    check_endpoints(t, source, target)?;
    if map.direction != Direction::TargetToSource {
        return Err(Error::Precondition(format!("model map `{}` must send target models to source models", map.name)));
    }
    let formulas = formulas_for(source, bounds, bounds.max_nodes);
    let size = bounds.max_model_size;
    let hit = first_hit(&formulas, |f| {
        let image = apply_translation(t, f)?;
        let single: FormulaSet = [f.clone()].into_iter().collect();
        let theta = match &w.theta {
            Theta::Fixed { formulas } => formulas.clone(),
            Theta::EncodingAxioms => mossakowski_delta(&subformula_closure(&single))?,
        };
        let mut context = theta.clone();
        context.insert(image.clone());
        let mut reached = BTreeSet::new();
        for m in enumerate_models(target, &context, size)? {
            let mut guarded = true;
            for g in &theta {
                if !evaluate(target, &m, g)? {
                    guarded = false;
                    break;
                }
            }
            if !guarded {
                continue;
            }
            let mapped = apply_model_map(map, &m, &map_context(map, f, &image))?;
            let a = evaluate(target, &m, &image)?;
            let b = evaluate(source, &mapped, f)?;
            if a != b {
                return Ok(Some(vec![
                    Fact::note("condition (b) fails"),
                    Fact::formula("formula", f),
                    Fact::Evaluates { logic: target.name.clone(), model: m, formula: image.clone(), value: a },
                    Fact::Evaluates { logic: source.name.clone(), model: mapped, formula: f.clone(), value: b },
                ]));
            }
            reached.insert(mapped);
        }
        for m in enumerate_models(source, &single, size)? {
            if !reached.contains(&m) {
                let why = if reached.is_empty() { "no target model satisfies the guard" } else { "source model not reached" };
                return Ok(Some(vec![
                    Fact::note(format!("condition (a) fails: {why}")),
                    Fact::formula("formula", f),
                    Fact::note(m.describe(Some(source))),
                ]));
            }
        }
        Ok(None)
    })?;
    let mut entry = CheckEntry::new("gv-sublogic", &format!("{} with {}", t.name, map.name), bounds);
    entry.status = match hit {
        Some(w) => {
            entry.details.push(match &w[0] {
                Fact::Note { text } => text.clone(),
                _ => String::new(),
            });
            entry.witnesses = w;
            Status::Refuted
        }
        None => valid_status(&[source, target], size),
    };
    Ok(entry.timed(start))
}

/// Distinct source formulas within bounds have distinct images.
pub fn verify_injective(source: &LogicSpec, t: &ClauseSystem, bounds: &Bounds) -> Result<CheckEntry> {
    let start = Instant::now();
    let formulas = formulas_for(source, bounds, bounds.max_nodes);
    let images = translate_all(t, &formulas)?;
    let mut seen: HashMap<&Formula, &Formula> = HashMap::new();
    let mut entry = CheckEntry::new("injective", &t.name, bounds);
    for (f, image) in formulas.iter().zip(&images) {
        if let Some(earlier) = seen.insert(image, f) {
            entry.witnesses = vec![Fact::formula("formula", earlier), Fact::formula("formula", f), Fact::formula("image", image)];
            entry.status = Status::Fail;
            return Ok(entry.timed(start));
        }
    }
    entry.details.push(format!("{} distinct images", images.len()));
    Ok(entry.timed(start))
}

/// Known validity statuses of corpus formulas in `logic`; refuted
/// formulas carry their first countermodel.
pub fn verify_corpus(logic: &LogicSpec, entries: &[CorpusEntry], bounds: &Bounds) -> Result<CheckEntry> {
    let start = Instant::now();
    let relevant: Vec<(&Formula, bool)> =
        entries.iter().filter_map(|e| e.valid.get(&logic.name).map(|&v| (&e.formula, v))).collect();
    let formulas: Vec<Formula> = relevant.iter().map(|(f, _)| (*f).clone()).collect();
    let oracle = Oracle::new(logic, &formulas, bounds.max_model_size);
    let mut entry = CheckEntry::new("corpus", &logic.name, bounds);
    let mut mismatches = 0;
    for (f, expected) in relevant {
        let found = oracle.countermodel(&[], f)?;
        let valid = found.is_none();
        if let Some(model) = found {
            entry.witnesses.push(Fact::Countermodel { logic: logic.name.clone(), premises: Vec::new(), conclusion: f.clone(), model });
        }
        let word = |v: bool| if v { "valid" } else { "refuted" };
        if valid != expected {
            mismatches += 1;
            entry.details.push(format!("{f}: expected {}, found {}", word(expected), word(valid)));
        } else {
            entry.details.push(format!("{f}: {}", word(valid)));
        }
    }
    entry.status = if mismatches == 0 { Status::Pass } else { Status::Fail };
    Ok(entry.timed(start))
}

/// Trivial iff `φ ⊢ ψ` for all bounded pairs. A non-trivial logic is
/// reported refuted with its first failing pair; constant-free formulas
/// are tried first.
pub fn verify_triviality(logic: &LogicSpec, bounds: &Bounds) -> Result<CheckEntry> {
    let start = Instant::now();
    let mut formulas = formulas_for(logic, bounds, bounds.max_nodes);
    formulas.sort_by_key(|f| has_constant(f));
    let oracle = Oracle::new(logic, &formulas, bounds.max_model_size);
    let hit = first_hit(&formulas, |f| {
        for g in &formulas {
            if let Some(model) = oracle.countermodel(std::slice::from_ref(f), g)? {
                return Ok(Some(Fact::Countermodel { logic: logic.name.clone(), premises: vec![f.clone()], conclusion: g.clone(), model }));
            }
        }
        Ok(None)
    })?;
    let mut entry = CheckEntry::new("triviality", &logic.name, bounds);
    entry.status = match hit {
        Some(w) => {
            entry.details.push("non-trivial".into());
            entry.witnesses.push(w);
            Status::Refuted
        }
        None => {
            entry.details.push("trivial".into());
            valid_status(&[logic], bounds.max_model_size)
        }
    };
    Ok(entry.timed(start))
}

fn has_constant(f: &Formula) -> bool {
    matches!(f, Formula::Const(_)) || f.children().into_iter().any(has_constant)
}

/// How two logics' formulas are compared by model set.
enum Shared<'a> {
    /// Both read formulas over Boolean valuations of the atoms.
    Boolean,
    /// Same engine; model sets come from one table.
    Same(Oracle<'a>),
}

fn boolean_engine(l: &LogicSpec) -> bool {
    match &l.engine {
        Engine::Matrix(m) => m.values.len() == 2 && m.designated == [1],
        Engine::Kripke { frame: FrameClass::Bare } => true,
        _ => false,
    }
}

fn boolean_signature(l: &LogicSpec, atoms: &[Formula], f: &Formula) -> Result<Vec<u64>> {
    let names: Vec<String> = atoms.iter().map(Formula::render).collect();
    let mut words = vec![0u64; (1usize << names.len()).div_ceil(64)];
    for a in 0..(1usize << names.len()) {
        let bit = |i: usize| a >> i & 1;
        let value = match &l.engine {
            Engine::Matrix(m) => {
                let v = Valuation { values: names.iter().enumerate().map(|(i, n)| (n.clone(), bit(i))).collect() };
                m.is_designated(m.eval(&v, f)?)
            }
            _ => {
                let k = KripkeModel {
                    frame: FrameClass::Bare,
                    worlds: 1,
                    access: vec![0],
                    valuation: names.iter().enumerate().map(|(i, n)| (n.clone(), bit(i) as u64)).collect(),
                    point: 0,
                };
                k.forces(f)?
            }
        };
        if value {
            words[a / 64] |= 1 << (a % 64);
        }
    }
    Ok(words)
}

/// Every `l1` formula within `max_nodes` has an `l2` formula within
/// `target_nodes` with the same bounded model set.
pub fn verify_ec_bounded(l1: &LogicSpec, l2: &LogicSpec, bounds: &Bounds) -> Result<CheckEntry> {
    let start = Instant::now();
    let atoms = bounds.atoms();
    let sources = formulas_for(l1, bounds, bounds.max_nodes);
    let candidates = formulas_for(l2, bounds, bounds.target_nodes);
    let shared = if boolean_engine(l1) && boolean_engine(l2) {
        Shared::Boolean
    } else if l1.engine == l2.engine {
        Shared::Same(Oracle::new(l1, sources.iter().chain(&candidates), bounds.max_model_size))
    } else {
        return Err(Error::Precondition(format!("{} and {} share no model enumeration", l1.name, l2.name)));
    };
    let signature = |l: &LogicSpec, f: &Formula| -> Result<Vec<u64>> {
        match &shared {
            Shared::Boolean => boolean_signature(l, &atoms, f),
            Shared::Same(oracle) => oracle
                .model_set(f)?
                .map(|m| m.to_vec())
                .ok_or_else(|| Error::Precondition(format!("model sets of {} are not tabulated at these bounds", l.name))),
        }
    };
    let target_sigs: Vec<Vec<u64>> = candidates.par_iter().map(|g| signature(l2, g)).collect::<Result<_>>()?;
    let mut index: HashMap<Vec<u64>, &Formula> = HashMap::new();
    for (s, g) in target_sigs.into_iter().zip(&candidates) {
        index.entry(s).or_insert(g);
    }
    let source_sigs: Vec<Vec<u64>> = sources.par_iter().map(|f| signature(l1, f)).collect::<Result<_>>()?;
    let unmatched: Vec<&Formula> = sources.iter().zip(&source_sigs).filter(|(_, s)| !index.contains_key(*s)).map(|(f, _)| f).collect();
    let mut entry = CheckEntry::new("ec-bounded", &format!("{} by {}", l1.name, l2.name), bounds);
    entry.details.push(format!("{} of {} formulas matched", sources.len() - unmatched.len(), sources.len()));
    if let Some(first) = unmatched.first() {
        entry.witnesses.push(Fact::formula("unmatched", first));
        entry.details.extend(unmatched.iter().map(|f| format!("unmatched {f}")));
        entry.status = Status::Refuted;
    } else {
        entry.status = valid_status(&[l1, l2], bounds.max_model_size);
    }
    Ok(entry.timed(start))
}
