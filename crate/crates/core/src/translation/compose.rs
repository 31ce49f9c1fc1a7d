//! Composition of clause systems by clause fusion.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{AtomClause, Clause, ClauseSystem, CompositionInfo, OperandRange, PlanItem, Translator};
use crate::formula::{substitute, Formula, Template};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompositionMode {
    /// The back direction is claimed for the whole target language.
    Surjective,
    /// The back direction is claimed only on the range of the composite.
    Weakened,
}

/// A system computing `second ∘ first`. Product translator `a|b` applies
/// `second`'s translator `b` to the output of `first`'s translator `a`.
pub fn compose_translations(first: &ClauseSystem, second: &ClauseSystem, mode: CompositionMode) -> Result<ClauseSystem> {
    let fail = |reason: &str| Error::Composition { first: first.name.clone(), second: second.name.clone(), reason: reason.to_string() };
    if first.target != second.source {
        return Err(fail(&format!("target `{}` is not source `{}`", first.target, second.source)));
    }
    if first.opaque.is_some() || second.opaque.is_some() {
        return Err(fail("opaque systems have no clauses to fuse"));
    }
    if first.context.is_some() || second.context.is_some() {
        return Err(fail("context families are not fused"));
    }
    let fuser = Fuser { second };
    let main = product(&first.main, &second.main);
    let mut translators = BTreeMap::new();
    let mut pending = vec![(first.main.clone(), second.main.clone())];
    let mut seen: BTreeSet<String> = [main.clone()].into_iter().collect();
    while let Some((a, b)) = pending.pop() {
        let ta = first.translators.get(&a).ok_or_else(|| Error::Unknown { kind: "translator", name: a.clone() })?;
        let atom = fuser.atom(ta, &b)?;
        let mut clauses = Vec::new();
        for clause in &ta.clauses {
            match fuser.clause(clause, &b) {
                Ok(fused) => clauses.push(fused),
                Err(Error::UncoveredConnective { .. }) => {}
                Err(Error::Composition { reason, .. }) => return Err(fail(&reason)),
                Err(e) => return Err(e),
            }
        }
        for c in &clauses {
            for item in &c.plan {
                if let PlanItem::Via { translator, .. } = item {
                    if seen.insert(translator.clone()) {
                        let (x, y) = translator.split_once('|').expect("product name");
                        pending.push((x.to_string(), y.to_string()));
                    }
                }
            }
        }
        translators.insert(product(&a, &b), Translator { atom, clauses });
    }
    Ok(ClauseSystem {
        name: format!("{}*{}", second.name, first.name),
        source: first.source.clone(),
        target: second.target.clone(),
        main,
        translators,
        opaque: None,
        context: None,
        model_map_dependency: first.model_map_dependency || second.model_map_dependency,
        composition: Some(CompositionInfo { first: first.name.clone(), second: second.name.clone(), mode }),
    })
}

fn product(a: &str, b: &str) -> String {
    format!("{a}|{b}")
}

fn compose_error(reason: &str) -> Error {
    Error::Composition { first: String::new(), second: String::new(), reason: reason.to_string() }
}

struct Fuser<'a> {
    second: &'a ClauseSystem,
}

/// Placeholders of the fused template, allocated on first use.
#[derive(Default)]
struct Slots {
    items: Vec<PlanItem>,
    index: BTreeMap<String, usize>,
}

impl Slots {
    fn slot(&mut self, item: PlanItem) -> Formula {
        let key = serde_json::to_string(&item).expect("plan items serialize");
        if let Some(&i) = self.index.get(&key) {
            return Formula::placeholder_atom(i);
        }
        self.items.push(item);
        let i = self.items.len();
        self.index.insert(key, i);
        Formula::placeholder_atom(i)
    }
}

impl Fuser<'_> {
    fn translator(&self, name: &str) -> Result<&Translator> {
        self.second.translators.get(name).ok_or_else(|| Error::Unknown { kind: "translator", name: name.to_string() })
    }

    fn atom(&self, ta: &Translator, b: &str) -> Result<AtomClause> {
        match &ta.atom {
            AtomClause::Identity => Ok(self.translator(b)?.atom.clone()),
            AtomClause::Template { template } => {
                let mut slots = Slots::default();
                let mut leaf = |_: usize, tb: &str, _: &mut Slots| -> Result<Formula> {
                    match &self.translator(tb)?.atom {
                        AtomClause::Identity => Ok(Formula::placeholder_atom(1)),
                        AtomClause::Template { template } => Ok(template.body.clone()),
                        _ => Err(compose_error("atom clause of the second system is not a template")),
                    }
                };
                let body = self.walk(&template.body, b, &mut slots, &mut leaf)?;
                Ok(AtomClause::Template { template: Template::new(body, 1)? })
            }
            AtomClause::Indexed { base } => match self.translator(b)?.atom {
                AtomClause::Identity => Ok(AtomClause::Indexed { base: base.clone() }),
                _ => Err(compose_error("indexed atoms cannot be re-translated")),
            },
            AtomClause::Predicate => Err(compose_error("predicate atoms need a context")),
        }
    }

    fn clause(&self, clause: &Clause, b: &str) -> Result<Clause> {
        let mut slots = Slots::default();
        let mut leaf = |i: usize, tb: &str, slots: &mut Slots| -> Result<Formula> {
            match &clause.plan[i - 1] {
                PlanItem::Via { translator, operand, shift: false } => {
                    Ok(slots.slot(PlanItem::Via { translator: product(translator, tb), operand: *operand, shift: false }))
                }
                PlanItem::Via { .. } => Err(compose_error("shifted operands need a context")),
                PlanItem::Index { base, operands } => {
                    let item = slots.slot(PlanItem::Index { base: base.clone(), operands: operands.clone() });
                    match &self.translator(tb)?.atom {
                        AtomClause::Identity => Ok(item),
                        AtomClause::Template { template } => substitute(template, &[item]),
                        _ => Err(compose_error("indexed atoms cannot be re-translated")),
                    }
                }
            }
        };
        let body = self.walk(&clause.template.body, b, &mut slots, &mut leaf)?;
        let template = Template::new(body, slots.items.len())?;
        Ok(Clause { key: clause.key.clone(), template, plan: slots.items, ranges: clause.ranges.clone() })
    }

    /// Translate a template body with the second system's translator `tb`,
    /// handing placeholders to `leaf`.
    fn walk(
        &self,
        f: &Formula,
        tb: &str,
        slots: &mut Slots,
        leaf: &mut dyn FnMut(usize, &str, &mut Slots) -> Result<Formula>,
    ) -> Result<Formula> {
        if let Some(i) = f.placeholder() {
            return leaf(i, tb, slots);
        }
        let tr = self.translator(tb)?;
        if !contains_placeholder(f) {
            return super::Engine { cs: self.second }.translate(tb, f, "");
        }
        for c in &tr.clauses {
            match match_over_placeholders(c, f)? {
                None => continue,
                Some(ops) => {
                    let mut args = Vec::with_capacity(c.plan.len());
                    for item in &c.plan {
                        match item {
                            PlanItem::Via { translator, operand, shift: false } => {
                                args.push(self.walk(ops[operand - 1], translator, slots, leaf)?)
                            }
                            PlanItem::Via { .. } => return Err(compose_error("shifted operands need a context")),
                            PlanItem::Index { .. } => return Err(compose_error("second system indexes operands")),
                        }
                    }
                    return substitute(&c.template, &args);
                }
            }
        }
        Err(super::Engine { cs: self.second }.uncovered(f))
    }
}

fn contains_placeholder(f: &Formula) -> bool {
    f.placeholder().is_some() || f.children().into_iter().any(contains_placeholder)
}

/// Like key matching, but a placeholder met before the key is consumed,
/// or under an atom-only range, makes the match undecidable.
fn match_over_placeholders<'f>(c: &Clause, f: &'f Formula) -> Result<Option<Vec<&'f Formula>>> {
    let mut current = f;
    for (i, sym) in c.key.iter().enumerate() {
        if current.placeholder().is_some() {
            return Err(compose_error("a composite key crosses a placeholder"));
        }
        let last = i + 1 == c.key.len();
        match current {
            Formula::Apply(s, ops) if s == sym => {
                if last {
                    for (op, r) in ops.iter().zip(c.ranges.iter()) {
                        if *r == OperandRange::AtomOnly && op.placeholder().is_some() {
                            return Err(compose_error("an atom-only range meets a placeholder"));
                        }
                    }
                    return Ok(c.operands(f));
                }
                if ops.len() != 1 {
                    return Ok(None);
                }
                current = &ops[0];
            }
            _ => return Ok(None),
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_lenient;
    use crate::translation::apply_translation;

    fn system(name: &str, source: &str, target: &str, atom: Option<&str>, clauses: &[(&str, &str)]) -> ClauseSystem {
        let mut cs = ClauseSystem::new(name, source, target);
        if let Some(a) = atom {
            cs.translators.get_mut("main").unwrap().atom = AtomClause::Template { template: Template::parse(a, None).unwrap() };
        }
        for (k, t) in clauses {
            cs.add_clause("main", &[k], Template::parse(t, None).unwrap(), None).unwrap();
        }
        cs
    }

    #[test]
    fn fused_system_matches_sequential_application() {
        let tc = system("Tc", "CPL", "IPL", Some("(not (not #1))"), &[("not", "(not #1)"), ("or", "(not (and (not #1) (not #2)))"), ("and", "(and #1 #2)")]);
        let tg = system("Tg", "IPL", "S4", Some("(box #1)"), &[("not", "(box (not #1))"), ("and", "(and #1 #2)"), ("or", "(or #1 #2)")]);
        let both = compose_translations(&tc, &tg, CompositionMode::Weakened).unwrap();
        let p = parse_lenient("p").unwrap();
        assert_eq!(apply_translation(&both, &p).unwrap().render(), "(box (not (box (not (box p)))))");
        let f = parse_lenient("(or p (not q))").unwrap();
        let seq = apply_translation(&tg, &apply_translation(&tc, &f).unwrap()).unwrap();
        assert_eq!(apply_translation(&both, &f).unwrap(), seq);
    }

    #[test]
    fn mismatched_systems_are_rejected() {
        let a = system("a", "X", "Y", None, &[]);
        let b = system("b", "Z", "W", None, &[]);
        assert!(matches!(compose_translations(&a, &b, CompositionMode::Surjective), Err(Error::Composition { .. })));
    }
}
