//! Syntactic shape classification of clause systems.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{is_quantifier_key, AtomClause, Clause, ClauseSystem, PlanItem};
use crate::formula::Formula;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeClass {
    /// Keys translated literally by the main translator (`atom` for the
    /// identity atom clause).
    pub literal_per_connective: BTreeSet<String>,
    pub single_translator: bool,
    /// No indexing plan items and no indexed atom clauses.
    pub fixed_templates_only: bool,
    /// Templates mention no atoms besides placeholders.
    pub parameter_free: bool,
    pub atom_identity: bool,
    pub composite_keys: bool,
    pub context_family: bool,
    pub general_recursive: bool,
    pub gr_conditional_compositional: bool,
    pub opaque: bool,
    pub clause_count: usize,
}

impl ShapeClass {
    /// One translator, fixed templates, no composite keys, no context.
    pub fn compositional(&self) -> bool {
        !self.opaque && self.single_translator && self.fixed_templates_only && !self.composite_keys && !self.context_family
    }

    /// Compositional and parameter free; back-and-forth is a separate,
    /// semantic requirement.
    pub fn grammatical_shape(&self) -> bool {
        self.compositional() && self.parameter_free
    }

    pub fn definitional_shape(&self) -> bool {
        self.grammatical_shape() && self.atom_identity
    }

    /// Finitely many clauses, none opaque.
    pub fn finitely_generated(&self) -> bool {
        !self.opaque && self.clause_count > 0
    }

    /// Named classes, for reports.
    pub fn labels(&self) -> Vec<String> {
        let pick = |cond: bool, yes: &str, no: &str| if cond { yes } else { no }.to_string();
        let gr = match (self.general_recursive, self.context_family) {
            (true, true) => "GR (extended)",
            (true, false) => "general-recursive",
            _ => "not general-recursive",
        };
        vec![
            pick(self.opaque, "opaque", "structural"),
            pick(self.compositional(), "compositional", "not compositional"),
            pick(self.grammatical_shape(), "grammatical shape", "not grammatical shape"),
            pick(self.definitional_shape(), "definitional shape", "not definitional"),
            gr.to_string(),
            pick(self.gr_conditional_compositional, "GR^C", "not GR^C"),
        ]
    }
}

/// Derive the shape flags of `cs`. First-order (quantifier) clauses are
/// ignored.
pub fn classify_shape(cs: &ClauseSystem) -> ShapeClass {
    if cs.opaque.is_some() {
        return ShapeClass {
            literal_per_connective: BTreeSet::new(),
            single_translator: false,
            fixed_templates_only: false,
            parameter_free: false,
            atom_identity: false,
            composite_keys: false,
            context_family: false,
            general_recursive: false,
            gr_conditional_compositional: false,
            opaque: true,
            clause_count: 0,
        };
    }
    let clauses: Vec<(&String, &Clause)> = cs
        .translators
        .iter()
        .flat_map(|(name, tr)| tr.clauses.iter().map(move |c| (name, c)))
        .filter(|(_, c)| !is_quantifier_key(&c.key))
        .collect();
    let main = cs.translators.get(&cs.main);
    let via_main = |c: &Clause| {
        c.plan.iter().enumerate().all(|(i, p)| {
            matches!(p, PlanItem::Via { translator, operand, shift: false } if *translator == cs.main && *operand == i + 1)
        })
    };
    let literal = |c: &Clause| {
        c.key.len() == 1
            && via_main(c)
            && matches!(&c.template.body, Formula::Apply(s, ops)
                if *s == c.key[0] && ops.iter().enumerate().all(|(i, op)| op.placeholder() == Some(i + 1)))
    };
    let mut literal_per_connective: BTreeSet<String> = main
        .map(|tr| tr.clauses.iter().filter(|c| literal(c)).map(|c| c.key_text()).collect())
        .unwrap_or_default();
    let atom_identity = main.map(|tr| tr.atom == AtomClause::Identity).unwrap_or(false);
    if atom_identity {
        literal_per_connective.insert("atom".into());
    }
    let fixed_templates_only = cs.translators.values().all(|tr| !matches!(tr.atom, AtomClause::Indexed { .. }))
        && clauses.iter().all(|(_, c)| c.plan.iter().all(|p| matches!(p, PlanItem::Via { .. })));
    let parameter_free = clauses.iter().all(|(_, c)| parameter_free(&c.template.body))
        && cs.translators.values().all(|tr| match &tr.atom {
            AtomClause::Template { template } => parameter_free(&template.body),
            _ => true,
        });
    let gr_conditional_compositional = main
        .and_then(|tr| tr.clauses.iter().find(|c| c.key == ["->"]))
        .map(|c| via_main(c))
        .unwrap_or(false);
    ShapeClass {
        literal_per_connective,
        single_translator: cs.translators.len() == 1,
        fixed_templates_only,
        parameter_free,
        atom_identity,
        composite_keys: clauses.iter().any(|(_, c)| c.key.len() > 1),
        context_family: cs.context.is_some(),
        general_recursive: true,
        gr_conditional_compositional,
        opaque: false,
        clause_count: cs.clause_count(),
    }
}

fn parameter_free(f: &Formula) -> bool {
    match f {
        Formula::Atom(_) => f.placeholder().is_some(),
        Formula::Indexed { .. } => false,
        _ => f.children().into_iter().all(parameter_free),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Template;
    use crate::translation::OpaqueRule;

    #[test]
    fn literal_and_compositional() {
        let mut cs = ClauseSystem::new("t", "a", "b");
        cs.add_clause("main", &["and"], Template::parse("(and #1 #2)", None).unwrap(), None).unwrap();
        cs.add_clause("main", &["->"], Template::parse("(box (-> #1 #2))", None).unwrap(), None).unwrap();
        let s = classify_shape(&cs);
        assert!(s.compositional() && s.definitional_shape() && s.gr_conditional_compositional);
        assert_eq!(s.literal_per_connective, ["and", "atom"].iter().map(|s| s.to_string()).collect());
        cs.opaque = Some(OpaqueRule::DoubleNegation);
        let s = classify_shape(&cs);
        assert!(s.opaque && !s.general_recursive && !s.compositional());
    }

    #[test]
    fn parameters_break_grammaticality() {
        let mut cs = ClauseSystem::new("t", "a", "b");
        cs.add_clause("main", &["not"], Template::parse("(and #1 r)", None).unwrap(), None).unwrap();
        let s = classify_shape(&cs);
        assert!(s.compositional() && !s.parameter_free && !s.grammatical_shape());
        assert!(!s.gr_conditional_compositional);
    }
}
