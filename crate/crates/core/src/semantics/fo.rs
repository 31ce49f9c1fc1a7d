//! Finite first-order structures with unary predicates and one binary
//! relation.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::kripke::{full_mask, KripkeModel};
use crate::formula::{Constant, Formula, Quantifier};
use crate::{Error, Result};

/// Name of the unary predicate standing for atom `atom`.
pub fn predicate_for_atom(atom: &str) -> String {
    format!("P_{atom}")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FoStructure {
    pub size: usize,
    /// Unary predicate name to the mask of elements in its extension.
    pub unary: BTreeMap<String, u64>,
    pub relation_name: String,
    /// `relation[a]` is the mask of `b` with `R a b`.
    pub relation: Vec<u64>,
}

/// A structure together with values for free variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PointedStructure {
    pub structure: FoStructure,
    pub assignment: BTreeMap<String, usize>,
}

/// Tarskian satisfaction of `f` in `s` under `assignment`.
pub fn fol_evaluate(s: &FoStructure, f: &Formula, assignment: &BTreeMap<String, usize>) -> Result<bool> {
    let mut env: Vec<(&str, usize)> = Vec::new();
    eval(s, f, assignment, &mut env)
}

fn lookup(var: &str, base: &BTreeMap<String, usize>, env: &[(&str, usize)]) -> Result<usize> {
    if let Some((_, v)) = env.iter().rev().find(|(name, _)| *name == var) {
        return Ok(*v);
    }
    base.get(var).copied().ok_or_else(|| Error::UnassignedVariable(var.to_string()))
}

fn eval<'f>(s: &FoStructure, f: &'f Formula, base: &BTreeMap<String, usize>, env: &mut Vec<(&'f str, usize)>) -> Result<bool> {
    match f {
        Formula::Const(c) => Ok(*c == Constant::Top),
        Formula::Pred(sym, vars) => {
            if *sym == s.relation_name && vars.len() == 2 {
                let a = lookup(&vars[0], base, env)?;
                let b = lookup(&vars[1], base, env)?;
                return Ok(s.relation[a] >> b & 1 == 1);
            }
            match (s.unary.get(sym.as_str()), vars.len()) {
                (Some(mask), 1) => Ok(mask >> lookup(&vars[0], base, env)? & 1 == 1),
                _ => Err(Error::Unsupported { engine: "first-order".into(), symbol: sym.clone() }),
            }
        }
        Formula::Apply(sym, ops) => match (sym.as_str(), ops.len()) {
            ("not", 1) => Ok(!eval(s, &ops[0], base, env)?),
            ("and", 2) => Ok(eval(s, &ops[0], base, env)? && eval(s, &ops[1], base, env)?),
            ("or", 2) => Ok(eval(s, &ops[0], base, env)? || eval(s, &ops[1], base, env)?),
            ("->", 2) => Ok(!eval(s, &ops[0], base, env)? || eval(s, &ops[1], base, env)?),
            ("<->", 2) => Ok(eval(s, &ops[0], base, env)? == eval(s, &ops[1], base, env)?),
            _ => Err(Error::Unsupported { engine: "first-order".into(), symbol: sym.clone() }),
        },
        Formula::Quant(q, var, body) => {
            for d in 0..s.size {
                env.push((var.as_str(), d));
                let v = eval(s, body, base, env);
                env.pop();
                match (q, v?) {
                    (Quantifier::Forall, false) => return Ok(false),
                    (Quantifier::Exists, true) => return Ok(true),
                    _ => {}
                }
            }
            Ok(*q == Quantifier::Forall)
        }
        Formula::Atom(_) | Formula::Indexed { .. } => {
            Err(Error::Unsupported { engine: "first-order".into(), symbol: f.render() })
        }
    }
}

/// Read a Kripke model as a first-order structure: elements are worlds,
/// `R` is accessibility, `P_a` is the set of worlds where atom `a` holds.
pub fn kripke_to_structure(m: &KripkeModel) -> FoStructure {
    FoStructure {
        size: m.worlds,
        unary: m.valuation.iter().map(|(a, &mask)| (predicate_for_atom(a), mask)).collect(),
        relation_name: "R".into(),
        relation: m.access.clone(),
    }
}

/// Visit every structure with 1..=bound elements interpreting the unary
/// predicates `unary` (and the relation when `with_relation`), paired with
/// every assignment of `variables`. Returning false stops the walk.
pub fn for_each_structure(
    unary: &[String],
    with_relation: bool,
    variables: &[String],
    bound: usize,
    visit: &mut dyn FnMut(&PointedStructure) -> bool,
) {
    for n in 1..=bound.min(super::kripke::MAX_WORLDS) {
        let row = full_mask(n);
        let relations: u64 = if with_relation { 1u64 << (n * n) } else { 1 };
        for r in 0..relations {
            let relation: Vec<u64> = (0..n).map(|i| (r >> (i * n)) & row).collect();
            let mut preds = vec![0usize; unary.len()];
            loop {
                let structure = FoStructure {
                    size: n,
                    unary: unary.iter().cloned().zip(preds.iter().map(|&m| m as u64)).collect(),
                    relation_name: "R".into(),
                    relation: relation.clone(),
                };
                let mut values = vec![0usize; variables.len()];
                loop {
                    let pointed = PointedStructure {
                        structure: structure.clone(),
                        assignment: variables.iter().cloned().zip(values.iter().copied()).collect(),
                    };
                    if !visit(&pointed) {
                        return;
                    }
                    if !super::matrix::odometer(&mut values, n) {
                        break;
                    }
                }
                if !super::matrix::odometer(&mut preds, 1 << n) {
                    break;
                }
            }
        }
    }
}

/// A first-order formula compiled for evaluation under every assignment
/// at once. Variables are numbered in sorted name order; an assignment is
/// the base-`size` number whose digit `i` is the value of variable `i`.
/// Each node evaluates to the mask of assignments satisfying it, so the
/// structure must satisfy `size^variables <= 64`.
#[derive(Clone, Debug)]
pub struct CompiledFormula {
    variables: Vec<String>,
    /// Whether each variable occurs free.
    free: Vec<bool>,
    nodes: Vec<Node>,
}

#[derive(Clone, Debug)]
enum Node {
    Const(bool),
    Unary { predicate: String, var: usize },
    Relation { from: usize, to: usize },
    Not(usize),
    Binary { op: BinaryOp, left: usize, right: usize },
    Quant { universal: bool, var: usize, body: usize },
}

#[derive(Clone, Copy, Debug)]
enum BinaryOp {
    And,
    Or,
    Implies,
    Iff,
}

impl CompiledFormula {
    pub fn compile(f: &Formula) -> Result<CompiledFormula> {
        let mut names = BTreeSet::new();
        collect_variables(f, &mut names);
        let open = f.free_variables();
        let variables: Vec<String> = names.into_iter().collect();
        let free = variables.iter().map(|v| open.contains(v)).collect();
        let mut c = CompiledFormula { variables, free, nodes: Vec::new() };
        c.push(f)?;
        Ok(c)
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    fn var(&self, name: &str) -> usize {
        self.variables.iter().position(|v| v == name).expect("variable collected")
    }

    fn push(&mut self, f: &Formula) -> Result<usize> {
        let unsupported = |s: &str| Error::Unsupported { engine: "first-order".into(), symbol: s.to_string() };
        let node = match f {
            Formula::Const(c) => Node::Const(*c == Constant::Top),
            Formula::Pred(sym, vars) => match vars.as_slice() {
                [a, b] if sym == "R" => Node::Relation { from: self.var(a), to: self.var(b) },
                [a] => Node::Unary { predicate: sym.clone(), var: self.var(a) },
                _ => return Err(unsupported(sym)),
            },
            Formula::Apply(sym, ops) => match (sym.as_str(), ops.as_slice()) {
                ("not", [a]) => Node::Not(self.push(a)?),
                (op, [a, b]) => {
                    let op = match op {
                        "and" => BinaryOp::And,
                        "or" => BinaryOp::Or,
                        "->" => BinaryOp::Implies,
                        "<->" => BinaryOp::Iff,
                        _ => return Err(unsupported(sym)),
                    };
                    let left = self.push(a)?;
                    let right = self.push(b)?;
                    Node::Binary { op, left, right }
                }
                _ => return Err(unsupported(sym)),
            },
            Formula::Quant(q, var, body) => {
                let body = self.push(body)?;
                Node::Quant { universal: *q == Quantifier::Forall, var: self.var(var), body }
            }
            Formula::Atom(_) | Formula::Indexed { .. } => return Err(unsupported(&f.render())),
        };
        self.nodes.push(node);
        Ok(self.nodes.len() - 1)
    }

    /// Number of assignments over a structure of `size` elements, if they
    /// fit in a mask.
    pub fn assignment_count(&self, size: usize) -> Option<usize> {
        let count = size.checked_pow(self.variables.len() as u32)?;
        (count <= 64).then_some(count)
    }

    /// Index of the assignment giving `values[i]` to variable `i`.
    pub fn assignment_index(&self, size: usize, values: &[usize]) -> usize {
        values.iter().rev().fold(0, |acc, &v| acc * size + v)
    }

    /// Mask of the assignments satisfying the formula in `s`.
    pub fn extension(&self, s: &FoStructure) -> Result<u64> {
        let n = s.size;
        let count = self
            .assignment_count(n)
            .ok_or_else(|| Error::Precondition(format!("{} variables over {n} elements exceed a mask", self.variables.len())))?;
        let all = full_mask(count);
        let stride: Vec<usize> = (0..self.variables.len()).map(|i| n.pow(i as u32)).collect();
        let digit = |a: usize, var: usize| a / stride[var] % n;
        let mut values: Vec<u64> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = match node {
                Node::Const(true) => all,
                Node::Const(false) => 0,
                Node::Unary { predicate, var } => {
                    let ext = *s
                        .unary
                        .get(predicate)
                        .ok_or_else(|| Error::Unsupported { engine: "first-order".into(), symbol: predicate.clone() })?;
                    (0..count).filter(|&a| ext >> digit(a, *var) & 1 == 1).fold(0, |m, a| m | 1 << a)
                }
                Node::Relation { from, to } => (0..count)
                    .filter(|&a| s.relation[digit(a, *from)] >> digit(a, *to) & 1 == 1)
                    .fold(0, |m, a| m | 1 << a),
                Node::Not(a) => all & !values[*a],
                Node::Binary { op, left, right } => {
                    let (l, r) = (values[*left], values[*right]);
                    all & match op {
                        BinaryOp::And => l & r,
                        BinaryOp::Or => l | r,
                        BinaryOp::Implies => !l | r,
                        BinaryOp::Iff => !(l ^ r),
                    }
                }
                Node::Quant { universal, var, body } => {
                    let b = values[*body];
                    let mut out = 0u64;
                    for a in 0..count {
                        let base = a - digit(a, *var) * stride[*var];
                        let mut hits = (0..n).map(|d| b >> (base + d * stride[*var]) & 1 == 1);
                        let holds = if *universal { hits.all(|x| x) } else { hits.any(|x| x) };
                        if holds {
                            out |= 1 << a;
                        }
                    }
                    out
                }
            };
            values.push(v);
        }
        Ok(*values.last().expect("at least one node"))
    }

    /// Satisfaction under a named assignment; variables the formula does
    /// not mention free may be left out.
    pub fn holds(&self, s: &FoStructure, assignment: &BTreeMap<String, usize>) -> Result<bool> {
        let mut values = Vec::with_capacity(self.variables.len());
        for (name, free) in self.variables.iter().zip(&self.free) {
            match assignment.get(name) {
                Some(&v) => values.push(v),
                None if *free => return Err(Error::UnassignedVariable(name.clone())),
                None => values.push(0),
            }
        }
        Ok(self.extension(s)? >> self.assignment_index(s.size, &values) & 1 == 1)
    }
}

fn collect_variables(f: &Formula, out: &mut BTreeSet<String>) {
    match f {
        Formula::Pred(_, vars) => out.extend(vars.iter().cloned()),
        Formula::Quant(_, var, body) => {
            out.insert(var.clone());
            collect_variables(body, out);
        }
        _ => f.children().into_iter().for_each(|c| collect_variables(c, out)),
    }
}

/// Unary predicates, relation use and free variables of a formula set.
pub(crate) fn vocabulary<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> (Vec<String>, bool, Vec<String>) {
    let mut preds = BTreeSet::new();
    let mut free = BTreeSet::new();
    for f in formulas {
        f.predicates(&mut preds);
        free.extend(f.free_variables());
    }
    let relation = preds.iter().any(|(p, a)| p == "R" && *a == 2);
    let unary = preds.into_iter().filter(|(p, a)| *a == 1 && p != "R").map(|(p, _)| p).collect();
    (unary, relation, free.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_lenient;
    use proptest::prelude::*;

    fn structure() -> FoStructure {
        FoStructure {
            size: 2,
            unary: [("P".to_string(), 0b10)].into_iter().collect(),
            relation_name: "R".into(),
            relation: vec![0b10, 0b00],
        }
    }

    fn at(x: usize) -> BTreeMap<String, usize> {
        [("x".to_string(), x)].into_iter().collect()
    }

    #[test]
    fn evaluation_examples() {
        let s = structure();
        let all = parse_lenient("(forall y (-> (R x y) (P y)))").unwrap();
        let some = parse_lenient("(exists y (and (R x y) (P y)))").unwrap();
        assert!(fol_evaluate(&s, &all, &at(0)).unwrap());
        assert!(fol_evaluate(&s, &all, &at(1)).unwrap());
        assert!(!fol_evaluate(&s, &some, &at(1)).unwrap());
        assert!(fol_evaluate(&s, &some, &at(0)).unwrap());
        assert!(matches!(fol_evaluate(&s, &all, &BTreeMap::new()), Err(Error::UnassignedVariable(_))));
    }

    #[test]
    fn shadowing_uses_innermost_binder() {
        let s = structure();
        let f = parse_lenient("(exists x (forall x (P x)))").unwrap();
        assert!(!fol_evaluate(&s, &f, &BTreeMap::new()).unwrap());
    }

    #[test]
    fn kripke_reading() {
        let m = KripkeModel {
            frame: super::super::kripke::FrameClass::K,
            worlds: 1,
            access: vec![1],
            valuation: [("p".to_string(), 1)].into_iter().collect(),
            point: 0,
        };
        let s = kripke_to_structure(&m);
        assert_eq!(s.size, 1);
        assert_eq!(s.relation, vec![1]);
        assert_eq!(s.unary.get("P_p"), Some(&1));
    }

    #[test]
    fn structure_walk_counts() {
        let mut count = 0;
        for_each_structure(&["P".into()], true, &["x".into()], 2, &mut |_| {
            count += 1;
            true
        });
        // n=1: 2 relations * 2 extensions * 1 point; n=2: 16 * 4 * 2.
        assert_eq!(count, 4 + 128);
    }

    fn fo_formula() -> impl Strategy<Value = Formula> {
        let var = prop_oneof![Just("x"), Just("y")];
        let leaf = prop_oneof![
            var.clone().prop_map(|v| Formula::Pred("P".into(), vec![v.into()])),
            (var.clone(), var.clone()).prop_map(|(a, b)| Formula::Pred("R".into(), vec![a.into(), b.into()])),
            Just(Formula::Const(Constant::Top)),
        ];
        leaf.prop_recursive(4, 24, 2, move |inner| {
            let var = prop_oneof![Just("x"), Just("y")];
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
                (var.clone(), inner.clone()).prop_map(|(v, b)| Formula::Quant(Quantifier::Forall, v.into(), Box::new(b))),
                (var, inner).prop_map(|(v, b)| Formula::Quant(Quantifier::Exists, v.into(), Box::new(b))),
            ]
        })
    }

    proptest! {
        #[test]
        fn compiled_evaluation_matches_tree_walk(
            f in fo_formula(),
            size in 1usize..=3,
            p in 0u64..8,
            rel in 0u64..512,
            x in 0usize..3,
            y in 0usize..3,
        ) {
            let row = full_mask(size);
            let s = FoStructure {
                size,
                unary: [("P".to_string(), p & row)].into_iter().collect(),
                relation_name: "R".into(),
                relation: (0..size).map(|i| rel >> (i * size) & row).collect(),
            };
            let assignment: BTreeMap<String, usize> =
                [("x".to_string(), x % size), ("y".to_string(), y % size)].into_iter().collect();
            let compiled = CompiledFormula::compile(&f).unwrap();
            prop_assert_eq!(compiled.holds(&s, &assignment).unwrap(), fol_evaluate(&s, &f, &assignment).unwrap());
        }
    }
}
