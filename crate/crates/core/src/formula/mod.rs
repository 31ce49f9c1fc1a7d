//! Formula syntax trees, signatures, canonical text, substitution and
//! canonical enumeration.
//!
//! Formulas are written as prefix s-expressions: `(-> p (not q))`,
//! `(box p)`, `d{p,q}`, `(forall y (-> (R x y) (P y)))`. The rendered
//! text is canonical and doubles as the interchange format.

mod enumerate;
mod parse;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use enumerate::{enumerate_formulas, FormulaStream};
pub use parse::{parse, parse_lenient, parse_template_body, ParseError, ParseErrorKind};

use crate::{Error, Result};

/// Logical constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Constant {
    Top,
    Bot,
}

impl Constant {
    pub fn symbol(self) -> &'static str {
        match self {
            Constant::Top => "top",
            Constant::Bot => "bot",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Constant> {
        match s {
            "top" => Some(Constant::Top),
            "bot" => Some(Constant::Bot),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn symbol(self) -> &'static str {
        match self {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Quantifier> {
        match s {
            "forall" => Some(Quantifier::Forall),
            "exists" => Some(Quantifier::Exists),
            _ => None,
        }
    }
}

/// Words that can never name an atom or a variable.
pub const RESERVED: &[&str] = &[
    "not", "and", "or", "->", "<->", "box", "dia", "top", "bot", "forall", "exists",
];

/// A formula tree.
///
/// Equality is structural; ordering is the canonical one (node count,
/// then canonical text).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String),
    /// A fresh atom indexed by formulas, rendered `base{key}`.
    Indexed { base: String, key: String },
    Const(Constant),
    Apply(String, Vec<Formula>),
    Pred(String, Vec<String>),
    Quant(Quantifier, String, Box<Formula>),
}

pub type FormulaSet = BTreeSet<Formula>;

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.to_string())
    }

    pub fn apply(symbol: &str, operands: Vec<Formula>) -> Formula {
        Formula::Apply(symbol.to_string(), operands)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::apply("not", vec![f])
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::apply("and", vec![a, b])
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::apply("or", vec![a, b])
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::apply("->", vec![a, b])
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::apply("<->", vec![a, b])
    }

    pub fn node_count(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Indexed { .. } | Formula::Const(_) | Formula::Pred(..) => 1,
            Formula::Apply(_, ops) => 1 + ops.iter().map(Formula::node_count).sum::<usize>(),
            Formula::Quant(_, _, body) => 1 + body.node_count(),
        }
    }

    /// True for plain and indexed atoms.
    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Atom(_) | Formula::Indexed { .. })
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out);
        out
    }

    fn render_into(&self, out: &mut String) {
        match self {
            Formula::Atom(name) => out.push_str(name),
            Formula::Indexed { base, key } => {
                out.push_str(base);
                out.push('{');
                out.push_str(key);
                out.push('}');
            }
            Formula::Const(c) => out.push_str(c.symbol()),
            Formula::Apply(sym, ops) => {
                out.push('(');
                out.push_str(sym);
                for op in ops {
                    out.push(' ');
                    op.render_into(out);
                }
                out.push(')');
            }
            Formula::Pred(sym, vars) => {
                out.push('(');
                out.push_str(sym);
                for v in vars {
                    out.push(' ');
                    out.push_str(v);
                }
                out.push(')');
            }
            Formula::Quant(q, var, body) => {
                out.push('(');
                out.push_str(q.symbol());
                out.push(' ');
                out.push_str(var);
                out.push(' ');
                body.render_into(out);
                out.push(')');
            }
        }
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Apply(_, ops) => ops.iter().collect(),
            Formula::Quant(_, _, body) => vec![body.as_ref()],
            _ => Vec::new(),
        }
    }

    /// Plain and indexed atoms occurring in the formula.
    pub fn atoms(&self) -> FormulaSet {
        let mut out = FormulaSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub fn collect_atoms(&self, out: &mut FormulaSet) {
        match self {
            Formula::Atom(_) | Formula::Indexed { .. } => {
                out.insert(self.clone());
            }
            Formula::Apply(_, ops) => ops.iter().for_each(|op| op.collect_atoms(out)),
            Formula::Quant(_, _, body) => body.collect_atoms(out),
            Formula::Const(_) | Formula::Pred(..) => {}
        }
    }

    /// Whether a connective or quantifier symbol occurs anywhere.
    pub fn mentions(&self, symbol: &str) -> bool {
        match self {
            Formula::Apply(sym, ops) => sym == symbol || ops.iter().any(|op| op.mentions(symbol)),
            Formula::Quant(q, _, body) => q.symbol() == symbol || body.mentions(symbol),
            Formula::Pred(sym, _) => sym == symbol,
            _ => false,
        }
    }

    /// Predicate symbols with the arities they are used at.
    pub fn predicates(&self, out: &mut BTreeSet<(String, usize)>) {
        match self {
            Formula::Pred(sym, vars) => {
                out.insert((sym.clone(), vars.len()));
            }
            Formula::Apply(_, ops) => ops.iter().for_each(|op| op.predicates(out)),
            Formula::Quant(_, _, body) => body.predicates(out),
            _ => {}
        }
    }

    /// Free first-order variables.
    pub fn free_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_vars_into(&mut Vec::new(), &mut out);
        out
    }

    fn free_vars_into(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Pred(_, vars) => {
                for v in vars {
                    if !bound.contains(v) {
                        out.insert(v.clone());
                    }
                }
            }
            Formula::Apply(_, ops) => ops.iter().for_each(|op| op.free_vars_into(bound, out)),
            Formula::Quant(_, var, body) => {
                bound.push(var.clone());
                body.free_vars_into(bound, out);
                bound.pop();
            }
            _ => {}
        }
    }

    /// Placeholder index if this is a template placeholder `#i`.
    pub fn placeholder(&self) -> Option<usize> {
        match self {
            Formula::Atom(name) => name.strip_prefix('#').and_then(|n| n.parse().ok()),
            _ => None,
        }
    }

    pub fn placeholder_atom(index: usize) -> Formula {
        Formula::Atom(format!("#{index}"))
    }

    /// Replace atoms according to `map`; atoms not in the map stay.
    pub fn replace_atoms(&self, map: &dyn Fn(&Formula) -> Option<Formula>) -> Formula {
        match self {
            Formula::Atom(_) | Formula::Indexed { .. } => map(self).unwrap_or_else(|| self.clone()),
            Formula::Apply(sym, ops) => Formula::Apply(sym.clone(), ops.iter().map(|op| op.replace_atoms(map)).collect()),
            Formula::Quant(q, v, body) => Formula::Quant(*q, v.clone(), Box::new(body.replace_atoms(map))),
            Formula::Const(_) | Formula::Pred(..) => self.clone(),
        }
    }

    /// Rename first-order variables (in predicate arguments and binders).
    pub fn rename_variables(&self, map: &dyn Fn(&str) -> Option<String>) -> Formula {
        let rename = |v: &String| map(v).unwrap_or_else(|| v.clone());
        match self {
            Formula::Pred(sym, vars) => Formula::Pred(sym.clone(), vars.iter().map(rename).collect()),
            Formula::Quant(q, v, body) => Formula::Quant(*q, rename(v), Box::new(body.rename_variables(map))),
            Formula::Apply(sym, ops) => Formula::Apply(sym.clone(), ops.iter().map(|op| op.rename_variables(map)).collect()),
            _ => self.clone(),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Ord for Formula {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        self.node_count()
            .cmp(&other.node_count())
            .then_with(|| self.render().cmp(&other.render()))
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_lenient(&text).map_err(serde::de::Error::custom)
    }
}

/// First-order part of a signature.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstOrderPart {
    /// Declared predicate symbols with arities.
    pub predicates: Vec<(String, usize)>,
    /// Accept any capitalised symbol as a predicate of any positive arity.
    pub open_predicates: bool,
    /// The binary accessibility relation symbol.
    pub relation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub name: String,
    pub connectives: Vec<(String, usize)>,
    pub constants: Vec<Constant>,
    /// Required prefix for plain atom names (empty: any identifier).
    pub atom_namespace: String,
    pub first_order: Option<FirstOrderPart>,
}

impl Signature {
    pub fn new(name: &str, connectives: &[(&str, usize)], constants: &[Constant]) -> Result<Signature> {
        let sig = Signature {
            name: name.to_string(),
            connectives: connectives.iter().map(|(s, a)| (s.to_string(), *a)).collect(),
            constants: constants.to_vec(),
            atom_namespace: String::new(),
            first_order: None,
        };
        sig.validate()?;
        Ok(sig)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for (sym, arity) in &self.connectives {
            if *arity == 0 {
                return Err(Error::Config(format!("connective `{sym}` in `{}` has arity 0", self.name)));
            }
            if Constant::from_symbol(sym).is_some() || Quantifier::from_symbol(sym).is_some() {
                return Err(Error::Config(format!("`{sym}` cannot be a connective")));
            }
            if !seen.insert(sym.as_str()) {
                return Err(Error::Config(format!("connective `{sym}` declared twice in `{}`", self.name)));
            }
        }
        if let Some(fo) = &self.first_order {
            for (p, arity) in &fo.predicates {
                if *arity == 0 || !p.starts_with(|c: char| c.is_ascii_uppercase()) {
                    return Err(Error::Config(format!("bad predicate `{p}`/{arity}")));
                }
                if seen.contains(p.as_str()) {
                    return Err(Error::Config(format!("symbol `{p}` declared twice in `{}`", self.name)));
                }
            }
        }
        Ok(())
    }

    pub fn arity(&self, symbol: &str) -> Option<usize> {
        self.connectives.iter().find(|(s, _)| s == symbol).map(|(_, a)| *a)
    }

    pub fn has_constant(&self, c: Constant) -> bool {
        self.constants.contains(&c)
    }

    /// Arity of a predicate symbol if the signature accepts it; `None`
    /// inside means any arity.
    pub fn predicate_arity(&self, symbol: &str) -> Option<Option<usize>> {
        let fo = self.first_order.as_ref()?;
        if symbol == fo.relation {
            return Some(Some(2));
        }
        if let Some((_, a)) = fo.predicates.iter().find(|(p, _)| p == symbol) {
            return Some(Some(*a));
        }
        if fo.open_predicates && symbol.starts_with(|c: char| c.is_ascii_uppercase()) {
            return Some(None);
        }
        None
    }

    /// Whether `f` is well formed over this signature.
    pub fn accepts(&self, f: &Formula) -> bool {
        match f {
            Formula::Atom(name) => f.placeholder().is_none() && name.starts_with(&self.atom_namespace),
            Formula::Indexed { .. } => true,
            Formula::Const(c) => self.has_constant(*c),
            Formula::Apply(sym, ops) => self.arity(sym) == Some(ops.len()) && ops.iter().all(|op| self.accepts(op)),
            Formula::Pred(sym, vars) => match self.predicate_arity(sym) {
                Some(Some(a)) => a == vars.len(),
                Some(None) => !vars.is_empty(),
                None => false,
            },
            Formula::Quant(_, _, body) => self.first_order.is_some() && self.accepts(body),
        }
    }
}

/// A formula over placeholders `#1..#m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TemplateRepr", into = "TemplateRepr")]
pub struct Template {
    pub body: Formula,
    pub arity: usize,
}

#[derive(Serialize, Deserialize)]
struct TemplateRepr {
    body: String,
    arity: usize,
}

impl From<Template> for TemplateRepr {
    fn from(t: Template) -> TemplateRepr {
        TemplateRepr { body: t.body.render(), arity: t.arity }
    }
}

impl TryFrom<TemplateRepr> for Template {
    type Error = Error;

    fn try_from(r: TemplateRepr) -> Result<Template> {
        Template::new(parse_template_body(&r.body, None)?, r.arity)
    }
}

impl Template {
    pub fn new(body: Formula, arity: usize) -> Result<Template> {
        let max = max_placeholder(&body);
        if max > arity {
            return Err(Error::TemplateArity { expected: arity, found: max });
        }
        Ok(Template { body, arity })
    }

    /// Parse a template; the arity is the largest placeholder index.
    pub fn parse(text: &str, sig: Option<&Signature>) -> Result<Template> {
        let body = parse_template_body(text, sig)?;
        let arity = max_placeholder(&body);
        Ok(Template { body, arity })
    }

    /// Number of occurrences of each placeholder, indexed from 0.
    pub fn occurrences(&self) -> Vec<usize> {
        let mut counts = vec![0; self.arity];
        count_placeholders(&self.body, &mut counts);
        counts
    }

    pub fn render(&self) -> String {
        self.body.render()
    }
}

fn count_placeholders(f: &Formula, counts: &mut [usize]) {
    if let Some(i) = f.placeholder() {
        if i >= 1 && i <= counts.len() {
            counts[i - 1] += 1;
        }
        return;
    }
    for c in f.children() {
        count_placeholders(c, counts);
    }
}

pub(crate) fn max_placeholder(f: &Formula) -> usize {
    if let Some(i) = f.placeholder() {
        return i;
    }
    f.children().into_iter().map(max_placeholder).max().unwrap_or(0)
}

/// Replace each placeholder `#i` by `args[i-1]`.
pub fn substitute(t: &Template, args: &[Formula]) -> Result<Formula> {
    if args.len() != t.arity {
        return Err(Error::TemplateArity { expected: t.arity, found: args.len() });
    }
    Ok(fill(&t.body, args))
}

fn fill(f: &Formula, args: &[Formula]) -> Formula {
    if let Some(i) = f.placeholder() {
        return args[i - 1].clone();
    }
    match f {
        Formula::Apply(sym, ops) => Formula::Apply(sym.clone(), ops.iter().map(|op| fill(op, args)).collect()),
        Formula::Quant(q, v, body) => Formula::Quant(*q, v.clone(), Box::new(fill(body, args))),
        _ => f.clone(),
    }
}

/// Least superset of `set` closed under immediate subformulas.
pub fn subformula_closure(set: &FormulaSet) -> FormulaSet {
    let mut out = FormulaSet::new();
    let mut stack: Vec<&Formula> = set.iter().collect();
    while let Some(f) = stack.pop() {
        if out.insert(f.clone()) {
            stack.extend(f.children());
        }
    }
    out
}

pub fn is_subformula_closed(set: &FormulaSet) -> bool {
    set.iter().all(|f| f.children().into_iter().all(|c| set.contains(c)))
}

/// Fresh atom `base{key}` whose key is the comma-joined canonical text of
/// `operands`.
pub fn indexed_atom(base: &str, operands: &[Formula]) -> Formula {
    let key = operands.iter().map(Formula::render).collect::<Vec<_>>().join(",");
    Formula::Indexed { base: base.to_string(), key }
}

/// Split an indexed-atom key back into its operand formulas.
pub fn split_key(key: &str) -> Result<Vec<Formula>> {
    let mut pieces = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in key.char_indices() {
        match ch {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            ',' if depth == 0 => {
                pieces.push(&key[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    pieces.push(&key[start..]);
    pieces.into_iter().map(|p| parse_lenient(p).map_err(Error::from)).collect()
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !RESERVED.contains(&s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn render_examples() {
        assert_eq!(Formula::not(p()).render(), "(not p)");
        assert_eq!(indexed_atom("d", &[p(), q()]).render(), "d{p,q}");
        let st = Formula::Quant(
            Quantifier::Forall,
            "y".into(),
            Box::new(Formula::implies(
                Formula::Pred("R".into(), vec!["x".into(), "y".into()]),
                Formula::Pred("P".into(), vec!["y".into()]),
            )),
        );
        assert_eq!(st.render(), "(forall y (-> (R x y) (P y)))");
    }

    #[test]
    fn substitute_examples() {
        let t = Template::parse("(and #1 #2)", None).unwrap();
        assert_eq!(substitute(&t, &[p(), Formula::not(q())]).unwrap().render(), "(and p (not q))");
        let t = Template::parse("(-> #1 (-> #1 #2))", None).unwrap();
        assert_eq!(substitute(&t, &[p(), q()]).unwrap().render(), "(-> p (-> p q))");
        let t = Template::parse("(box (-> #1 #2))", None).unwrap();
        assert_eq!(substitute(&t, &[p(), q()]).unwrap().render(), "(box (-> p q))");
        assert!(matches!(substitute(&t, &[p()]), Err(Error::TemplateArity { expected: 2, found: 1 })));
    }

    #[test]
    fn closure_examples() {
        let c = subformula_closure(&[Formula::implies(p(), q())].into_iter().collect());
        assert_eq!(c, [Formula::implies(p(), q()), p(), q()].into_iter().collect());
        let nn = Formula::not(Formula::not(p()));
        let c = subformula_closure(&[nn.clone()].into_iter().collect());
        assert_eq!(c, [nn, Formula::not(p()), p()].into_iter().collect());
        assert!(subformula_closure(&FormulaSet::new()).is_empty());
    }

    #[test]
    fn closure_iterates_in_canonical_order() {
        let f = Formula::and(Formula::not(q()), p());
        let order: Vec<String> = subformula_closure(&[f].into_iter().collect()).iter().map(Formula::render).collect();
        assert_eq!(order, vec!["p", "q", "(not q)", "(and (not q) p)"]);
    }

    #[test]
    fn indexed_atoms_are_injective_on_order() {
        assert_eq!(indexed_atom("d", &[p(), q()]), indexed_atom("d", &[p(), q()]));
        assert_ne!(indexed_atom("d", &[p(), q()]), indexed_atom("d", &[q(), p()]));
        assert_eq!(indexed_atom("p", &[Formula::not(Formula::atom("r"))]).render(), "p{(not r)}");
    }

    #[test]
    fn keys_split_back() {
        let inner = indexed_atom("d", &[p(), q()]);
        let outer = indexed_atom("p", &[Formula::and(inner.clone(), p()), q()]);
        let Formula::Indexed { key, .. } = &outer else { unreachable!() };
        assert_eq!(split_key(key).unwrap(), vec![Formula::and(inner, p()), q()]);
    }

    #[test]
    fn template_occurrences() {
        let t = Template::parse("(-> #1 (-> #1 #2))", None).unwrap();
        assert_eq!(t.arity, 2);
        assert_eq!(t.occurrences(), vec![2, 1]);
        assert!(Template::new(p(), 0).is_ok());
        assert!(Template::new(Formula::placeholder_atom(3), 2).is_err());
    }
}
