//! Semantic property checkers, expressiveness gates and the preorder
//! registry.
//!
//! Every checker returns a [`CheckEntry`]: a status, the bounds used and
//! replayable witnesses. Searches run in canonical order, so the first
//! witness is the same for every worker count.

mod connective;
mod correspondence;
mod dt;
mod gates;
mod oracle;
mod preservation;
mod registry;

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::formula::{Formula, FormulaSet, Template};
use crate::semantics::{evaluate, follows, LogicSpec, Model, ModelMap};
use crate::translation::ClauseSystem;
use crate::{Error, Result};

pub use connective::{verify_pt_connective, ConnectiveMode, Role};
pub use correspondence::{verify_encoding_bijection, verify_standard_translation};
pub use dt::{default_pool, search_general_dt, verify_dt_preservation, verify_standard_dt};
pub use gates::{gate_expressiveness_g, gate_expressiveness_gg, GgInputs};
pub use oracle::Oracle;
pub use preservation::{
    verify_conservativity, verify_corpus, verify_ec_bounded, verify_gv_sublogic, verify_injective, verify_theoremhood,
    verify_theoremhood_on, verify_triviality, verify_truth_preservation,
};
pub use registry::{bounded_surjective, build_preorder, build_registry, DerivedEdge, Edge, Provenance, Registry};

/// Search bounds shared by all checkers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Largest source formula, in nodes.
    pub max_nodes: usize,
    /// Atoms are the first `max_atoms` of p, q, r, s.
    pub max_atoms: usize,
    /// Largest Kripke frame or first-order domain.
    pub max_model_size: usize,
    pub premise_pool_size: usize,
    pub max_premises: usize,
    /// Largest template tried by template searches.
    pub template_bound: usize,
    /// Largest target formula tried by expressibility searches.
    pub target_nodes: usize,
}

impl Default for Bounds {
    fn default() -> Bounds {
        Bounds {
            max_nodes: 4,
            max_atoms: 2,
            max_model_size: 3,
            premise_pool_size: 5,
            max_premises: 3,
            template_bound: 7,
            target_nodes: 7,
        }
    }
}

const ATOM_NAMES: [&str; 4] = ["p", "q", "r", "s"];

impl Bounds {
    pub fn atoms(&self) -> Vec<Formula> {
        ATOM_NAMES.iter().take(self.max_atoms).map(|a| Formula::atom(a)).collect()
    }

    /// Set one bound from `key=value` text.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value, got `{assignment}`")))?;
        let value: usize = value.trim().parse().map_err(|_| Error::Config(format!("`{value}` is not a count")))?;
        let slot = match key.trim() {
            "max_nodes" => &mut self.max_nodes,
            "max_atoms" => &mut self.max_atoms,
            "max_model_size" => &mut self.max_model_size,
            "premise_pool_size" => &mut self.premise_pool_size,
            "max_premises" => &mut self.max_premises,
            "template_bound" => &mut self.template_bound,
            "target_nodes" => &mut self.target_nodes,
            other => return Err(Error::Config(format!("unknown bound `{other}`"))),
        };
        *slot = value;
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("max_nodes", self.max_nodes),
            ("max_atoms", self.max_atoms),
            ("max_model_size", self.max_model_size),
            ("template_bound", self.template_bound),
            ("target_nodes", self.target_nodes),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(Error::Config(format!("bound `{name}` must be positive")));
            }
        }
        if self.max_atoms > ATOM_NAMES.len() {
            return Err(Error::Config(format!("at most {} atoms", ATOM_NAMES.len())));
        }
        if self.max_model_size > crate::semantics::kripke::MAX_WORLDS {
            return Err(Error::Config(format!("model size above {}", crate::semantics::kripke::MAX_WORLDS)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Status {
    ValidExact,
    ValidBounded { size_bound: usize },
    Refuted,
    Skipped { reason: String },
    /// A search ran out of candidates.
    Exhausted,
    Pass,
    Fail,
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::ValidExact => "valid-exact",
            Status::ValidBounded { .. } => "valid-bounded",
            Status::Refuted => "refuted",
            Status::Skipped { .. } => "skipped",
            Status::Exhausted => "exhausted",
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

/// A replayable witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "fact", rename_all = "kebab-case")]
pub enum Fact {
    /// `model` designates every premise but not the conclusion; no model
    /// for explicit logics.
    Countermodel { logic: String, premises: Vec<Formula>, conclusion: Formula, model: Option<Model> },
    /// The conclusion follows at the given model-size bound.
    Follows { logic: String, premises: Vec<Formula>, conclusion: Formula, bound: usize },
    Evaluates { logic: String, model: Model, formula: Formula, value: bool },
    Formula { role: String, formula: Formula },
    Template { role: String, template: Template },
    Note { text: String },
}

impl Fact {
    pub fn formula(role: &str, formula: &Formula) -> Fact {
        Fact::Formula { role: role.to_string(), formula: formula.clone() }
    }

    pub fn note(text: impl Into<String>) -> Fact {
        Fact::Note { text: text.into() }
    }

    /// Re-check a semantic fact; descriptive facts replay trivially.
    /// `bound` overrides the recorded bound for `Follows` facts.
    pub fn replay(&self, lookup: &dyn Fn(&str) -> Result<LogicSpec>, bound: Option<usize>) -> Result<bool> {
        match self {
            Fact::Countermodel { logic, premises, conclusion, model } => {
                let logic = lookup(logic)?;
                match model {
                    Some(m) => {
                        for p in premises {
                            if !evaluate(&logic, m, p)? {
                                return Ok(false);
                            }
                        }
                        Ok(!evaluate(&logic, m, conclusion)?)
                    }
                    None => Ok(!follows(&logic, &premises.iter().cloned().collect(), conclusion, bound.unwrap_or(1))?),
                }
            }
            Fact::Follows { logic, premises, conclusion, bound: recorded } => {
                let logic = lookup(logic)?;
                follows(&logic, &premises.iter().cloned().collect(), conclusion, bound.unwrap_or(*recorded))
            }
            Fact::Evaluates { logic, model, formula, value } => Ok(evaluate(&lookup(logic)?, model, formula)? == *value),
            Fact::Formula { .. } | Fact::Template { .. } | Fact::Note { .. } => Ok(true),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub property: String,
    /// What was checked: a translation, a logic, or a pair.
    pub subject: String,
    #[serde(flatten)]
    pub status: Status,
    pub bounds: Bounds,
    pub witnesses: Vec<Fact>,
    /// Extra result lines (found templates, unmatched formulas, reasons).
    pub details: Vec<String>,
    pub provenance: String,
    pub elapsed_ms: u64,
}

impl CheckEntry {
    pub fn new(property: &str, subject: &str, bounds: &Bounds) -> CheckEntry {
        CheckEntry {
            property: property.to_string(),
            subject: subject.to_string(),
            status: Status::Pass,
            bounds: bounds.clone(),
            witnesses: Vec::new(),
            details: Vec::new(),
            provenance: "computed".into(),
            elapsed_ms: 0,
        }
    }

    /// Valid (exactly or within bounds) or passed.
    pub fn holds(&self) -> bool {
        matches!(self.status, Status::ValidExact | Status::ValidBounded { .. } | Status::Pass)
    }

    pub fn skipped(&self) -> bool {
        matches!(self.status, Status::Skipped { .. })
    }

    pub fn with_status(mut self, status: Status) -> CheckEntry {
        self.status = status;
        self
    }

    pub fn with_details(mut self, details: Vec<String>) -> CheckEntry {
        self.details = details;
        self
    }

    fn timed(mut self, start: Instant) -> CheckEntry {
        self.elapsed_ms = start.elapsed().as_millis() as u64;
        self
    }

    /// Every semantic witness replays.
    pub fn replay(&self, lookup: &dyn Fn(&str) -> Result<LogicSpec>, bound: Option<usize>) -> Result<bool> {
        for w in &self.witnesses {
            if !w.replay(lookup, bound)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Zero out elapsed times so reports can be compared byte for byte.
pub fn strip_elapsed(value: &mut serde_json::Value) {
    match value {
        serde_json::Value::Object(map) => {
            for (k, v) in map.iter_mut() {
                if k == "elapsed_ms" {
                    *v = serde_json::Value::from(0);
                } else {
                    strip_elapsed(v);
                }
            }
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(strip_elapsed),
        _ => {}
    }
}

/// Run `f` on a pool of `workers` threads.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// First `Some` (or error) in item order, computed in parallel.
pub(crate) fn first_hit<T: Sync, W: Send>(items: &[T], check: impl Fn(&T) -> Result<Option<W>> + Sync) -> Result<Option<W>> {
    items
        .par_iter()
        .map(&check)
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        })
        .unwrap_or(Ok(None))
}

/// All premise sets drawn from `pool` with at most `max` members, smallest
/// first, each in pool order.
pub(crate) fn premise_sets(pool: &[Formula], max: usize) -> Vec<Vec<Formula>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<(usize, Vec<Formula>)> = vec![(0, Vec::new())];
    for _ in 0..max.min(pool.len()) {
        let mut next = Vec::new();
        for (start, set) in &frontier {
            for (i, f) in pool.iter().enumerate().skip(*start) {
                let mut s = set.clone();
                s.push(f.clone());
                next.push((i + 1, s));
            }
        }
        out.extend(next.iter().map(|(_, s)| s.clone()));
        frontier = next;
    }
    out
}

/// The status of a check that found no counterexample.
pub(crate) fn valid_status(logics: &[&LogicSpec], size_bound: usize) -> Status {
    if logics.iter().all(|l| l.engine.exhaustive()) {
        Status::ValidExact
    } else {
        Status::ValidBounded { size_bound }
    }
}

/// A sub-logic witness: translation, model map from target models to
/// source models, and the guard on target models.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GvWitness {
    pub translation: ClauseSystem,
    pub model_map: ModelMap,
    pub theta: Theta,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Theta {
    Fixed { formulas: FormulaSet },
    /// The encoding axioms of the closure of the formulas under test.
    EncodingAxioms,
}

/// Count of checks per status, for summaries.
pub fn tally(entries: &[CheckEntry]) -> BTreeMap<&'static str, usize> {
    let mut out = BTreeMap::new();
    for e in entries {
        *out.entry(e.status.name()).or_insert(0) += 1;
    }
    out
}
