//! Translations as systems of mutually recursive translators with
//! per-connective template clauses.

mod compose;
mod shape;
mod text;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::formula::{indexed_atom, substitute, Formula, Quantifier, Template};
use crate::{Error, Result};
pub use compose::{compose_translations, CompositionMode};
pub use shape::{classify_shape, ShapeClass};
pub use text::{parse_translation, render_translation};

/// How atomic formulas (atoms, indexed atoms, predications) translate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AtomClause {
    Identity,
    /// `#1` stands for the atomic formula.
    Template { template: Template },
    /// `a` becomes `base{a}`.
    Indexed { base: String },
    /// Atom `a` becomes the unary predication `P_a` of the current
    /// context variable.
    Predicate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperandRange {
    Any,
    AtomOnly,
}

/// Where a template placeholder's value comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PlanItem {
    /// Translate operand `operand` (1-based) with `translator`; `shift`
    /// moves to the next context token.
    Via { translator: String, operand: usize, shift: bool },
    /// The indexed atom `base{…}` of the listed source operands.
    Index { base: String, operands: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Clause {
    /// Connective chain, outermost first; all but the last are unary.
    pub key: Vec<String>,
    pub template: Template,
    pub plan: Vec<PlanItem>,
    pub ranges: Vec<OperandRange>,
}

impl Clause {
    pub fn key_text(&self) -> String {
        self.key.join("+")
    }

    /// Operands of `f` when the key matches, innermost connective's.
    fn operands<'f>(&self, f: &'f Formula) -> Option<Vec<&'f Formula>> {
        let mut current = f;
        for (i, sym) in self.key.iter().enumerate() {
            let last = i + 1 == self.key.len();
            match current {
                Formula::Apply(s, ops) if s == sym => {
                    if last {
                        let ops: Vec<&Formula> = ops.iter().collect();
                        let in_range = ops.iter().zip(self.ranges.iter().chain(std::iter::repeat(&OperandRange::Any))).all(
                            |(op, r)| *r == OperandRange::Any || op.is_atomic(),
                        );
                        return in_range.then_some(ops);
                    }
                    if ops.len() != 1 {
                        return None;
                    }
                    current = &ops[0];
                }
                Formula::Const(c) if last && c.symbol() == sym => return Some(Vec::new()),
                Formula::Quant(q, _, body) if last && q.symbol() == sym => return Some(vec![body]),
                _ => return None,
            }
        }
        None
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Translator {
    pub atom: AtomClause,
    /// Tried longest key first, then in declaration order.
    pub clauses: Vec<Clause>,
}

/// Whole-formula rules that bypass the clauses.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OpaqueRule {
    DoubleNegation,
    IndexedWhole { base: String },
    Constant { formula: Formula },
    Table { entries: BTreeMap<Formula, Formula> },
}

/// A family of context tokens (first-order variables) threaded through
/// translation; `shift` moves to the next token cyclically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextFamily {
    pub tokens: Vec<String>,
}

impl ContextFamily {
    pub fn next(&self, token: &str) -> String {
        let i = self.tokens.iter().position(|t| t == token).unwrap_or(0);
        self.tokens[(i + 1) % self.tokens.len()].clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionInfo {
    pub first: String,
    pub second: String,
    pub mode: CompositionMode,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClauseSystem {
    pub name: String,
    pub source: String,
    pub target: String,
    pub main: String,
    pub translators: BTreeMap<String, Translator>,
    pub opaque: Option<OpaqueRule>,
    pub context: Option<ContextFamily>,
    /// Declared: the translation is meaningful only through a model map.
    pub model_map_dependency: bool,
    pub composition: Option<CompositionInfo>,
}

impl ClauseSystem {
    /// An empty system with one identity-on-atoms translator `main`.
    pub fn new(name: &str, source: &str, target: &str) -> ClauseSystem {
        ClauseSystem {
            name: name.to_string(),
            source: source.to_string(),
            target: target.to_string(),
            main: "main".into(),
            translators: [("main".to_string(), Translator { atom: AtomClause::Identity, clauses: Vec::new() })]
                .into_iter()
                .collect(),
            opaque: None,
            context: None,
            model_map_dependency: false,
            composition: None,
        }
    }

    /// Identity translation over the listed connectives.
    pub fn identity(name: &str, source: &str, target: &str, connectives: &[(String, usize)]) -> Result<ClauseSystem> {
        let mut cs = ClauseSystem::new(name, source, target);
        for (sym, arity) in connectives {
            let body = Formula::apply(sym, (1..=*arity).map(Formula::placeholder_atom).collect());
            cs.add_clause("main", &[sym.as_str()], Template::new(body, *arity)?, None)?;
        }
        Ok(cs)
    }

    /// Add a clause; `plan` defaults to translating operand `i` with the
    /// same translator for placeholder `#i`.
    pub fn add_clause(&mut self, translator: &str, key: &[&str], template: Template, plan: Option<Vec<PlanItem>>) -> Result<()> {
        let plan = plan.unwrap_or_else(|| {
            (1..=template.arity).map(|i| PlanItem::Via { translator: translator.to_string(), operand: i, shift: false }).collect()
        });
        if plan.len() != template.arity {
            return Err(Error::TemplateArity { expected: template.arity, found: plan.len() });
        }
        let tr = self.translators.get_mut(translator).ok_or_else(|| Error::Unknown { kind: "translator", name: translator.to_string() })?;
        tr.clauses.push(Clause { key: key.iter().map(|s| s.to_string()).collect(), template, plan, ranges: Vec::new() });
        tr.clauses.sort_by_key(|c| std::cmp::Reverse(c.key.len()));
        Ok(())
    }

    /// Clause count over all translators.
    pub fn clause_count(&self) -> usize {
        self.translators.values().map(|t| t.clauses.len() + 1).sum()
    }

    /// Check that plans reference known translators and valid operands.
    pub fn validate(&self) -> Result<()> {
        if self.opaque.is_some() {
            return Ok(());
        }
        if !self.translators.contains_key(&self.main) {
            return Err(Error::Unknown { kind: "translator", name: self.main.clone() });
        }
        for (name, tr) in &self.translators {
            for c in &tr.clauses {
                let arity = clause_operand_arity(&c.key);
                if c.plan.len() != c.template.arity {
                    return Err(Error::Config(format!("{}: clause `{}` of `{name}` binds {} of {} placeholders", self.name, c.key_text(), c.plan.len(), c.template.arity)));
                }
                for item in &c.plan {
                    let (ops, via) = match item {
                        PlanItem::Via { translator, operand, .. } => (vec![*operand], Some(translator)),
                        PlanItem::Index { operands, .. } => (operands.clone(), None),
                    };
                    if let Some(t) = via {
                        if !self.translators.contains_key(t) {
                            return Err(Error::Unknown { kind: "translator", name: t.clone() });
                        }
                    }
                    if let Some(arity) = arity {
                        if ops.iter().any(|&o| o == 0 || o > arity) {
                            return Err(Error::Config(format!("{}: clause `{}` refers to a missing operand", self.name, c.key_text())));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Operand count implied by a key, when known from the symbol alone.
fn clause_operand_arity(key: &[String]) -> Option<usize> {
    match key.last().map(String::as_str) {
        Some("not" | "box" | "dia" | "forall" | "exists") => Some(1),
        Some("and" | "or" | "->" | "<->") => Some(2),
        Some("top" | "bot") => Some(0),
        _ => None,
    }
}

/// Apply a clause system from its main translator.
pub fn apply_translation(cs: &ClauseSystem, f: &Formula) -> Result<Formula> {
    match &cs.opaque {
        Some(OpaqueRule::DoubleNegation) => Ok(Formula::not(Formula::not(f.clone()))),
        Some(OpaqueRule::IndexedWhole { base }) => Ok(indexed_atom(base, std::slice::from_ref(f))),
        Some(OpaqueRule::Constant { formula }) => Ok(formula.clone()),
        Some(OpaqueRule::Table { entries }) => entries
            .get(f)
            .cloned()
            .ok_or_else(|| Error::UncoveredConnective { translation: cs.name.clone(), connective: f.render() }),
        None => {
            let token = cs.context.as_ref().map(|c| c.tokens[0].clone()).unwrap_or_default();
            Engine { cs }.translate(&cs.main, f, &token)
        }
    }
}

struct Engine<'a> {
    cs: &'a ClauseSystem,
}

impl Engine<'_> {
    fn translator(&self, name: &str) -> Result<&Translator> {
        self.cs.translators.get(name).ok_or_else(|| Error::Unknown { kind: "translator", name: name.to_string() })
    }

    fn next_token(&self, token: &str) -> String {
        self.cs.context.as_ref().map(|c| c.next(token)).unwrap_or_default()
    }

    fn translate(&self, name: &str, f: &Formula, token: &str) -> Result<Formula> {
        let tr = self.translator(name)?;
        if matches!(f, Formula::Atom(_) | Formula::Indexed { .. } | Formula::Pred(..)) {
            return self.atom(tr, f, token);
        }
        for clause in &tr.clauses {
            let Some(ops) = clause.operands(f) else { continue };
            let bound = match innermost(f, clause.key.len()) {
                Formula::Quant(_, v, _) => Some(v.as_str()),
                _ => None,
            };
            let mut args = Vec::with_capacity(clause.plan.len());
            for item in &clause.plan {
                args.push(match item {
                    PlanItem::Via { translator, operand, shift } => {
                        let op = ops.get(operand - 1).ok_or_else(|| self.uncovered(f))?;
                        let next = if *shift { self.next_token(token) } else { token.to_string() };
                        self.translate(translator, op, &next)?
                    }
                    PlanItem::Index { base, operands } => {
                        let picked = operands
                            .iter()
                            .map(|&o| ops.get(o - 1).map(|op| (*op).clone()).ok_or_else(|| self.uncovered(f)))
                            .collect::<Result<Vec<_>>>()?;
                        indexed_atom(base, &picked)
                    }
                });
            }
            let out = substitute(&clause.template, &args)?;
            return Ok(self.instantiate(&out, token, bound));
        }
        match f {
            Formula::Const(_) => Ok(f.clone()),
            _ => Err(self.uncovered(f)),
        }
    }

    fn atom(&self, tr: &Translator, f: &Formula, token: &str) -> Result<Formula> {
        match &tr.atom {
            AtomClause::Identity => Ok(f.clone()),
            AtomClause::Template { template } => {
                let out = substitute(template, std::slice::from_ref(f))?;
                Ok(self.instantiate(&out, token, None))
            }
            AtomClause::Indexed { base } => Ok(indexed_atom(base, std::slice::from_ref(f))),
            AtomClause::Predicate => match f {
                Formula::Atom(name) => Ok(Formula::Pred(crate::semantics::fo::predicate_for_atom(name), vec![token.to_string()])),
                _ => Err(self.uncovered(f)),
            },
        }
    }

    fn instantiate(&self, f: &Formula, token: &str, bound: Option<&str>) -> Formula {
        let next = self.next_token(token);
        f.rename_variables(&|v| match v {
            "$cur" => Some(token.to_string()),
            "$next" => Some(next.clone()),
            "$bound" => bound.map(str::to_string),
            _ => None,
        })
    }

    fn uncovered(&self, f: &Formula) -> Error {
        let connective = match f {
            Formula::Apply(s, _) => s.clone(),
            Formula::Quant(q, _, _) => q.symbol().to_string(),
            Formula::Const(c) => c.symbol().to_string(),
            other => other.render(),
        };
        Error::UncoveredConnective { translation: self.cs.name.clone(), connective }
    }
}

/// The node reached by following `depth - 1` unary links from `f`.
fn innermost(f: &Formula, depth: usize) -> &Formula {
    let mut current = f;
    for _ in 1..depth {
        match current {
            Formula::Apply(_, ops) if ops.len() == 1 => current = &ops[0],
            _ => break,
        }
    }
    current
}

/// Upper bound on the size of `apply_translation(cs, f)` computed from
/// clause shapes alone, without building the image.
pub fn size_bound(cs: &ClauseSystem, f: &Formula) -> Result<usize> {
    match &cs.opaque {
        Some(OpaqueRule::DoubleNegation) => return Ok(f.node_count() + 2),
        Some(OpaqueRule::IndexedWhole { .. }) => return Ok(1),
        Some(OpaqueRule::Constant { formula }) => return Ok(formula.node_count()),
        Some(OpaqueRule::Table { entries }) => return Ok(entries.values().map(Formula::node_count).max().unwrap_or(0)),
        None => {}
    }
    bound_with(cs, &cs.main, f)
}

fn bound_with(cs: &ClauseSystem, name: &str, f: &Formula) -> Result<usize> {
    let tr = cs.translators.get(name).ok_or_else(|| Error::Unknown { kind: "translator", name: name.to_string() })?;
    if matches!(f, Formula::Atom(_) | Formula::Indexed { .. } | Formula::Pred(..)) {
        return Ok(match &tr.atom {
            AtomClause::Template { template } => {
                overhead(template) + template.occurrences().iter().sum::<usize>() * f.node_count()
            }
            _ => f.node_count(),
        });
    }
    for clause in &tr.clauses {
        let Some(ops) = clause.operands(f) else { continue };
        let occurrences = clause.template.occurrences();
        let mut total = overhead(&clause.template);
        for (item, count) in clause.plan.iter().zip(occurrences) {
            let each = match item {
                PlanItem::Via { translator, operand, .. } => bound_with(cs, translator, ops[operand - 1])?,
                PlanItem::Index { .. } => 1,
            };
            total += count * each;
        }
        return Ok(total);
    }
    Ok(f.node_count())
}

/// Template nodes that are not placeholders.
fn overhead(t: &Template) -> usize {
    t.body.node_count() - t.occurrences().iter().sum::<usize>()
}

/// Constant `C` with `|T(φ)| <= C·|φ|` for systems whose templates use
/// each placeholder at most once; `None` for duplicating or opaque systems.
pub fn linear_size_constant(cs: &ClauseSystem) -> Option<usize> {
    if cs.opaque.is_some() {
        return None;
    }
    let mut c = 1;
    for tr in cs.translators.values() {
        if let AtomClause::Template { template } = &tr.atom {
            if template.occurrences().iter().any(|&n| n > 1) {
                return None;
            }
            c = c.max(overhead(template) + 1);
        }
        for clause in &tr.clauses {
            if clause.template.occurrences().iter().any(|&n| n > 1) {
                return None;
            }
            let index_items = clause.plan.iter().filter(|p| matches!(p, PlanItem::Index { .. })).count();
            c = c.max(overhead(&clause.template) + index_items);
        }
    }
    Some(c)
}

pub(crate) fn is_quantifier_key(key: &[String]) -> bool {
    key.iter().any(|k| Quantifier::from_symbol(k).is_some())
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_lenient;

    fn lukasiewicz_embedding() -> ClauseSystem {
        let mut cs = ClauseSystem::new("Tl", "CPL-not-imp", "L3");
        cs.add_clause("main", &["not"], Template::parse("(-> #1 (not #1))", None).unwrap(), None).unwrap();
        cs.add_clause("main", &["->"], Template::parse("(-> #1 (-> #1 #2))", None).unwrap(), None).unwrap();
        cs
    }

    #[test]
    fn applies_clauses_recursively() {
        let cs = lukasiewicz_embedding();
        let f = parse_lenient("(not p)").unwrap();
        assert_eq!(apply_translation(&cs, &f).unwrap().render(), "(-> p (not p))");
        let g = parse_lenient("(-> p (not q))").unwrap();
        assert_eq!(apply_translation(&cs, &g).unwrap().render(), "(-> p (-> p (-> q (not q))))");
        let h = parse_lenient("(and p q)").unwrap();
        assert!(matches!(apply_translation(&cs, &h), Err(Error::UncoveredConnective { .. })));
        assert_eq!(apply_translation(&cs, &parse_lenient("top").unwrap()).unwrap().render(), "top");
    }

    #[test]
    fn index_items_use_source_operands() {
        let mut cs = ClauseSystem::new("TE", "R", "CPL");
        let plan = vec![
            PlanItem::Via { translator: "main".into(), operand: 1, shift: false },
            PlanItem::Via { translator: "main".into(), operand: 2, shift: false },
            PlanItem::Index { base: "d".into(), operands: vec![1, 2] },
        ];
        cs.add_clause("main", &["->"], Template::parse("(and (-> #1 #2) #3)", None).unwrap(), Some(plan)).unwrap();
        cs.add_clause("main", &["not"], Template::parse("(not #1)", None).unwrap(), None).unwrap();
        let f = parse_lenient("(-> p (not q))").unwrap();
        assert_eq!(apply_translation(&cs, &f).unwrap().render(), "(and (-> p (not q)) d{p,(not q)})");
    }

    #[test]
    fn bounds_dominate_image_sizes() {
        let cs = lukasiewicz_embedding();
        assert_eq!(linear_size_constant(&cs), None);
        let f = parse_lenient("(-> (not p) (-> q p))").unwrap();
        assert!(apply_translation(&cs, &f).unwrap().node_count() <= size_bound(&cs, &f).unwrap());
    }
}
