//! Executable semantics: logic specifications, model enumeration,
//! evaluation and bounded or exhaustive consequence checking.

pub mod bivaluation;
pub mod descriptor;
pub mod explicit;
pub mod fo;
pub mod kripke;
pub mod maps;
pub mod matrix;
pub mod relatedness;

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::formula::{subformula_closure, Formula, FormulaSet, Signature};
use crate::{Error, Result};
pub use bivaluation::{BivaluationConstraint, BivaluationModel};
pub use explicit::{ExplicitConsequence, Rule};
pub use fo::{fol_evaluate, kripke_to_structure, CompiledFormula, FoStructure, PointedStructure};
pub use kripke::{FrameClass, KripkeModel};
pub use maps::{apply_model_map, mossakowski_delta, Direction, ModelMap, Transform};
pub use matrix::{MatrixSemantics, Table, Valuation};
pub use relatedness::RelatednessModel;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Engine {
    Matrix(MatrixSemantics),
    Kripke { frame: FrameClass },
    Bivaluation { constraint: BivaluationConstraint },
    Relatedness,
    FoFinite,
    Explicit(ExplicitConsequence),
    /// Syntax only; formulas can be translated but not evaluated.
    Uninterpreted,
}

impl Engine {
    pub fn kind(&self) -> &'static str {
        match self {
            Engine::Matrix(_) => "matrix",
            Engine::Kripke { .. } => "kripke",
            Engine::Bivaluation { .. } => "bivaluation",
            Engine::Relatedness => "relatedness",
            Engine::FoFinite => "fo-finite",
            Engine::Explicit(_) => "explicit",
            Engine::Uninterpreted => "uninterpreted",
        }
    }

    /// Whether enumeration covers every relevant model.
    pub fn exhaustive(&self) -> bool {
        matches!(self, Engine::Matrix(_) | Engine::Bivaluation { .. } | Engine::Relatedness | Engine::Explicit(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decidability {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConsequenceMode {
    TheoremhoodOnly,
    Full,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogicSpec {
    pub name: String,
    pub signature: Signature,
    pub engine: Engine,
    pub decidable: Decidability,
    pub consequence_mode: ConsequenceMode,
    /// Free-form metadata lines.
    pub notes: Vec<String>,
}

impl LogicSpec {
    pub fn new(name: &str, signature: Signature, engine: Engine) -> LogicSpec {
        LogicSpec {
            name: name.to_string(),
            signature,
            engine,
            decidable: Decidability::Yes,
            consequence_mode: ConsequenceMode::Full,
            notes: Vec::new(),
        }
    }

    /// Check that the engine can interpret the signature.
    pub fn validate(&self) -> Result<()> {
        self.signature.validate()?;
        let needs = |symbols: &[&str]| -> Result<()> {
            for s in symbols {
                if self.signature.arity(s).is_none() {
                    return Err(Error::Config(format!("logic `{}` needs connective `{s}`", self.name)));
                }
            }
            Ok(())
        };
        let only = |allowed: &[&str]| -> Result<()> {
            for (s, _) in &self.signature.connectives {
                if !allowed.contains(&s.as_str()) {
                    return Err(Error::Config(format!("{} engine of `{}` cannot interpret `{s}`", self.engine.kind(), self.name)));
                }
            }
            Ok(())
        };
        match &self.engine {
            Engine::Matrix(m) => {
                m.validate()?;
                for (s, a) in &self.signature.connectives {
                    match m.tables.get(s) {
                        Some(t) if t.arity == *a => {}
                        _ => return Err(Error::Config(format!("matrix of `{}` lacks a table for `{s}`/{a}", self.name))),
                    }
                }
                for c in &self.signature.constants {
                    if !m.constants.contains_key(c) {
                        return Err(Error::Config(format!("matrix of `{}` lacks constant `{}`", self.name, c.symbol())));
                    }
                }
                Ok(())
            }
            Engine::Kripke { frame: FrameClass::Bare } => only(&[]),
            Engine::Kripke { frame } if frame.intuitionistic() => only(&["not", "and", "or", "->", "<->"]),
            Engine::Kripke { .. } => only(&["not", "and", "or", "->", "<->", "box", "dia"]),
            Engine::Bivaluation { .. } => only(&["not", "and", "or", "->", "<->"]),
            Engine::Relatedness => {
                needs(&["not", "and", "->"])?;
                only(&["not", "and", "or", "->"])
            }
            Engine::FoFinite => {
                if self.signature.first_order.is_none() {
                    return Err(Error::Config(format!("first-order logic `{}` needs predicates", self.name)));
                }
                only(&["not", "and", "or", "->", "<->"])
            }
            Engine::Explicit(e) => e.validate(),
            Engine::Uninterpreted => Ok(()),
        }
    }

    fn exactness(&self, size_bound: usize) -> Outcome {
        if self.engine.exhaustive() {
            Outcome::ValidExact
        } else {
            Outcome::ValidBounded { size_bound }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Model {
    Valuation(Valuation),
    Kripke(KripkeModel),
    Bivaluation(BivaluationModel),
    Relatedness(RelatednessModel),
    Structure(PointedStructure),
}

impl Model {
    /// Short human-readable rendering used in reports.
    pub fn describe(&self, logic: Option<&LogicSpec>) -> String {
        let names: Option<&Vec<String>> = match logic.map(|l| &l.engine) {
            Some(Engine::Matrix(m)) => Some(&m.values),
            _ => None,
        };
        match self {
            Model::Valuation(v) => {
                let parts: Vec<String> = v
                    .values
                    .iter()
                    .map(|(a, &x)| format!("{a}={}", names.and_then(|n| n.get(x)).cloned().unwrap_or_else(|| x.to_string())))
                    .collect();
                format!("valuation {}", parts.join(" "))
            }
            Model::Kripke(m) => {
                let pairs: Vec<String> = (0..m.worlds)
                    .flat_map(|i| (0..m.worlds).filter(move |&j| m.access[i] >> j & 1 == 1).map(move |j| format!("{i}{j}")))
                    .collect();
                let val: Vec<String> = m
                    .valuation
                    .iter()
                    .map(|(a, &mask)| {
                        let ws: Vec<String> = (0..m.worlds).filter(|&w| mask >> w & 1 == 1).map(|w| w.to_string()).collect();
                        format!("{a}:{{{}}}", ws.join(","))
                    })
                    .collect();
                format!(
                    "{} worlds={} access=[{}] {} point={}",
                    m.frame.name(),
                    m.worlds,
                    pairs.join(" "),
                    val.join(" "),
                    m.point
                )
            }
            Model::Bivaluation(b) => {
                let parts: Vec<String> =
                    b.assignment.iter().map(|(f, &v)| format!("{}={}", f, if v { "T" } else { "F" })).collect();
                format!("bivaluation {}", parts.join(" "))
            }
            Model::Relatedness(r) => {
                let vals: Vec<String> = r.valuation.iter().map(|(a, &v)| format!("{a}={}", if v { "T" } else { "F" })).collect();
                let rel: Vec<String> = r.related.iter().filter(|(a, b)| a < b).map(|(a, b)| format!("{a}~{b}")).collect();
                format!("relatedness {} related=[{}]", vals.join(" "), rel.join(" "))
            }
            Model::Structure(p) => {
                let s = &p.structure;
                let assign: Vec<String> = p.assignment.iter().map(|(x, d)| format!("{x}:={d}")).collect();
                format!("structure size={} relation={:?} unary={:?} {}", s.size, s.relation, s.unary, assign.join(" "))
            }
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe(None))
    }
}

/// Result of a semantic check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Outcome {
    ValidExact,
    ValidBounded { size_bound: usize },
    Refuted { model: Option<Model>, formula: Option<Formula> },
}

impl Outcome {
    pub fn is_valid(&self) -> bool {
        !matches!(self, Outcome::Refuted { .. })
    }

    pub fn status(&self) -> &'static str {
        match self {
            Outcome::ValidExact => "valid-exact",
            Outcome::ValidBounded { .. } => "valid-bounded",
            Outcome::Refuted { .. } => "refuted",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    #[serde(with = "millis")]
    pub elapsed: Duration,
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        self.outcome.is_valid()
    }
}

pub(crate) mod millis {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_millis() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_millis(u64::deserialize(d)?))
    }
}

/// Sorted canonical texts of the atoms of `formulas`.
pub fn atom_keys<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> Vec<String> {
    let mut atoms = FormulaSet::new();
    for f in formulas {
        f.collect_atoms(&mut atoms);
    }
    let mut keys: Vec<String> = atoms.iter().map(Formula::render).collect();
    keys.sort();
    keys
}

/// All models relevant to `context`, in canonical order. Kripke and
/// first-order models are pointed: one entry per point or assignment.
pub fn enumerate_models(logic: &LogicSpec, context: &FormulaSet, size_bound: usize) -> Result<Vec<Model>> {
    let mut out = Vec::new();
    for_each_model(logic, context, size_bound, &mut |m| {
        out.push(m.clone());
        true
    })?;
    Ok(out)
}

/// Visit the models of [`enumerate_models`] without collecting them.
pub fn for_each_model(
    logic: &LogicSpec,
    context: &FormulaSet,
    size_bound: usize,
    visit: &mut dyn FnMut(&Model) -> bool,
) -> Result<()> {
    match &logic.engine {
        Engine::Matrix(m) => {
            for v in m.valuations(&atom_keys(context)) {
                if !visit(&Model::Valuation(v)) {
                    break;
                }
            }
        }
        Engine::Kripke { frame } => {
            kripke::for_each_model(*frame, &atom_keys(context), size_bound, &mut |m| {
                let mut pointed = m.clone();
                for w in 0..m.worlds {
                    pointed.point = w;
                    if !visit(&Model::Kripke(pointed.clone())) {
                        return false;
                    }
                }
                true
            });
        }
        Engine::Bivaluation { constraint } => {
            for b in bivaluation::enumerate(*constraint, &subformula_closure(context))? {
                if !visit(&Model::Bivaluation(b)) {
                    break;
                }
            }
        }
        Engine::Relatedness => {
            for r in relatedness::enumerate(&atom_keys(context)) {
                if !visit(&Model::Relatedness(r)) {
                    break;
                }
            }
        }
        Engine::FoFinite => {
            let (unary, relation, free) = fo::vocabulary(context);
            fo::for_each_structure(&unary, relation, &free, size_bound, &mut |p| visit(&Model::Structure(p.clone())));
        }
        Engine::Explicit(_) | Engine::Uninterpreted => return Err(Error::Uninterpreted(logic.name.clone())),
    }
    Ok(())
}

/// Whether `model` designates (forces, satisfies) `f`.
pub fn evaluate(logic: &LogicSpec, model: &Model, f: &Formula) -> Result<bool> {
    match (&logic.engine, model) {
        (Engine::Matrix(m), Model::Valuation(v)) => Ok(m.is_designated(m.eval(v, f)?)),
        (Engine::Kripke { .. }, Model::Kripke(k)) => k.forces(f),
        (Engine::Bivaluation { .. }, Model::Bivaluation(b)) => b.lookup(f),
        (Engine::Relatedness, Model::Relatedness(r)) => r.eval(f),
        (Engine::FoFinite, Model::Structure(p)) => fol_evaluate(&p.structure, f, &p.assignment),
        (Engine::Uninterpreted | Engine::Explicit(_), _) => Err(Error::Uninterpreted(logic.name.clone())),
        (engine, _) => Err(Error::Unsupported { engine: engine.kind().into(), symbol: "model of another engine".into() }),
    }
}

/// Truth-value name of `f` under a matrix valuation.
pub fn matrix_value(logic: &LogicSpec, v: &Valuation, f: &Formula) -> Result<String> {
    match &logic.engine {
        Engine::Matrix(m) => Ok(m.values[m.eval(v, f)?].clone()),
        other => Err(Error::Unsupported { engine: other.kind().into(), symbol: "truth values".into() }),
    }
}

/// First model (canonical order) designating every premise but not the
/// conclusion. `Ok(None)` means none exists within the search space.
/// Explicit logics report a refutation without a model.
pub(crate) fn countermodel(
    logic: &LogicSpec,
    premises: &FormulaSet,
    conclusion: &Formula,
    size_bound: usize,
) -> Result<Option<Option<Model>>> {
    let mut context = premises.clone();
    context.insert(conclusion.clone());
    let mut error = None;
    let mut found = None;
    match &logic.engine {
        Engine::Explicit(e) => {
            return Ok(if e.entails(premises, conclusion)? { None } else { Some(None) });
        }
        Engine::Uninterpreted => return Err(Error::Uninterpreted(logic.name.clone())),
        Engine::Kripke { frame } => {
            kripke::for_each_model(*frame, &atom_keys(&context), size_bound, &mut |m| {
                let step = || -> Result<u64> {
                    let mut mask = m.all() & !m.extension(conclusion)?;
                    for p in premises {
                        if mask == 0 {
                            break;
                        }
                        mask &= m.extension(p)?;
                    }
                    Ok(mask)
                };
                match step() {
                    Ok(0) => true,
                    Ok(mask) => {
                        let mut witness = m.clone();
                        witness.point = mask.trailing_zeros() as usize;
                        found = Some(Model::Kripke(witness));
                        false
                    }
                    Err(e) => {
                        error = Some(e);
                        false
                    }
                }
            });
        }
        Engine::Matrix(m) => {
            for v in m.valuations(&atom_keys(&context)) {
                let check = || -> Result<bool> {
                    if m.is_designated(m.eval(&v, conclusion)?) {
                        return Ok(false);
                    }
                    for p in premises {
                        if !m.is_designated(m.eval(&v, p)?) {
                            return Ok(false);
                        }
                    }
                    Ok(true)
                };
                if check()? {
                    found = Some(Model::Valuation(v));
                    break;
                }
            }
        }
        _ => {
            for_each_model(logic, &context, size_bound, &mut |model| {
                let check = || -> Result<bool> {
                    if evaluate(logic, model, conclusion)? {
                        return Ok(false);
                    }
                    for p in premises {
                        if !evaluate(logic, model, p)? {
                            return Ok(false);
                        }
                    }
                    Ok(true)
                };
                match check() {
                    Ok(false) => true,
                    Ok(true) => {
                        found = Some(model.clone());
                        false
                    }
                    Err(e) => {
                        error = Some(e);
                        false
                    }
                }
            })?;
        }
    }
    if let Some(e) = error {
        return Err(e);
    }
    Ok(found.map(Some))
}

/// Whether the conclusion follows, as a plain boolean (bounded for
/// Kripke and first-order engines).
pub fn follows(logic: &LogicSpec, premises: &FormulaSet, conclusion: &Formula, size_bound: usize) -> Result<bool> {
    Ok(countermodel(logic, premises, conclusion, size_bound)?.is_none())
}

/// Semantic consequence with an exactness-annotated verdict.
pub fn consequence(logic: &LogicSpec, premises: &FormulaSet, conclusion: &Formula, size_bound: usize) -> Result<Verdict> {
    let start = Instant::now();
    let outcome = match countermodel(logic, premises, conclusion, size_bound)? {
        None => logic.exactness(size_bound),
        Some(model) => Outcome::Refuted { model, formula: Some(conclusion.clone()) },
    };
    Ok(Verdict { outcome, elapsed: start.elapsed() })
}

/// Exactness label for a check that found nothing within `size_bound`.
pub fn valid_outcome(logic: &LogicSpec, size_bound: usize) -> Outcome {
    logic.exactness(size_bound)
}

/// Named matrices shared by the catalog and the model maps.
pub fn classical_matrix() -> MatrixSemantics {
    let tables: BTreeMap<String, Table> = [
        ("not", 1, vec![1, 0]),
        ("and", 2, vec![0, 0, 0, 1]),
        ("or", 2, vec![0, 1, 1, 1]),
        ("->", 2, vec![1, 1, 0, 1]),
        ("<->", 2, vec![1, 0, 0, 1]),
    ]
    .into_iter()
    .map(|(s, arity, entries)| (s.to_string(), Table { arity, entries }))
    .collect();
    MatrixSemantics {
        values: vec!["0".into(), "1".into()],
        designated: vec![1],
        tables,
        constants: [(crate::formula::Constant::Top, 1), (crate::formula::Constant::Bot, 0)].into_iter().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_lenient, Constant};

    fn cpl() -> LogicSpec {
        let sig = Signature::new(
            "cpl",
            &[("not", 1), ("and", 2), ("or", 2), ("->", 2), ("<->", 2)],
            &[Constant::Top, Constant::Bot],
        )
        .unwrap();
        LogicSpec::new("CPL", sig, Engine::Matrix(classical_matrix()))
    }

    fn set(items: &[&str]) -> FormulaSet {
        items.iter().map(|s| parse_lenient(s).unwrap()).collect()
    }

    #[test]
    fn classical_consequence() {
        let l = cpl();
        l.validate().unwrap();
        let v = consequence(&l, &FormulaSet::new(), &parse_lenient("(or p (not p))").unwrap(), 1).unwrap();
        assert_eq!(v.outcome, Outcome::ValidExact);
        let v = consequence(&l, &set(&["p"]), &parse_lenient("q").unwrap(), 1).unwrap();
        assert!(matches!(v.outcome, Outcome::Refuted { model: Some(Model::Valuation(_)), .. }));
        assert_eq!(enumerate_models(&l, &set(&["p", "q"]), 1).unwrap().len(), 4);
    }

    #[test]
    fn kripke_witness_is_first_pointed_model() {
        let sig = Signature::new("s4", &[("not", 1), ("or", 2), ("box", 1)], &[]).unwrap();
        let l = LogicSpec::new("S4", sig, Engine::Kripke { frame: FrameClass::S4 });
        let f = parse_lenient("(or (box p) (box (not p)))").unwrap();
        let v = consequence(&l, &FormulaSet::new(), &f, 3).unwrap();
        match v.outcome {
            Outcome::Refuted { model: Some(Model::Kripke(m)), .. } => {
                assert_eq!(m.worlds, 2);
                assert!(m.well_formed());
                assert!(!m.forces(&f).unwrap());
            }
            other => panic!("expected a countermodel, got {other:?}"),
        }
    }

    #[test]
    fn model_serde_round_trip() {
        let l = cpl();
        let models = enumerate_models(&l, &set(&["p"]), 1).unwrap();
        let text = serde_json::to_string(&models).unwrap();
        let back: Vec<Model> = serde_json::from_str(&text).unwrap();
        assert_eq!(models, back);
        let closure = set(&["(not p)"]);
        let b = BivaluationModel { assignment: subformula_closure(&closure).into_iter().map(|f| (f, false)).collect() };
        let text = serde_json::to_string(&Model::Bivaluation(b.clone())).unwrap();
        assert_eq!(serde_json::from_str::<Model>(&text).unwrap(), Model::Bivaluation(b));
    }
}
