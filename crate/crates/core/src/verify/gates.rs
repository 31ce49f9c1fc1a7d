//! Expressiveness criteria as gates over already computed reports.

use super::{Bounds, CheckEntry, Status};
use crate::semantics::{Decidability, LogicSpec, ModelMap};
use crate::translation::{classify_shape, ClauseSystem};

fn verdict(mut entry: CheckEntry, reasons: Vec<String>) -> CheckEntry {
    entry.status = if reasons.is_empty() { Status::Pass } else { Status::Fail };
    entry.details = reasons;
    entry
}

/// Model based, finitely generated and truth preserving.
pub fn gate_expressiveness_g(t: &ClauseSystem, map: Option<&ModelMap>, truth: Option<&CheckEntry>, bounds: &Bounds) -> CheckEntry {
    let entry = CheckEntry::new("gate-g", &t.name, bounds);
    let shape = classify_shape(t);
    let mut reasons = Vec::new();
    match map {
        None => reasons.push("no model map".to_string()),
        Some(m) if !m.model_based => reasons.push(format!("model map `{}` is not model based", m.name)),
        Some(_) => {}
    }
    if !shape.finitely_generated() {
        reasons.push(if shape.opaque { "opaque, hence not finitely generated".into() } else { "not finitely generated".into() });
    }
    match truth {
        None if map.is_some() => reasons.push("no truth-preservation report".into()),
        Some(r) if !r.holds() => reasons.push(format!("truth preservation {}", r.status.name())),
        _ => {}
    }
    verdict(entry, reasons)
}

/// Reports an expressiveness_gg verdict draws on.
pub struct GgInputs<'a> {
    pub source: &'a LogicSpec,
    pub target: &'a LogicSpec,
    pub t: &'a ClauseSystem,
    pub theoremhood: &'a CheckEntry,
    /// Absent or skipped when the source only fixes its theorems.
    pub conservativity: Option<&'a CheckEntry>,
    /// The source's standard deduction theorem, when it has a conditional.
    pub source_dt: Option<&'a CheckEntry>,
}

/// Back-and-forth, general recursive, free of model-map dependency and
/// GR^C whenever the source has the standard deduction theorem. A
/// translation from an undecidable into a decidable logic never passes.
pub fn gate_expressiveness_gg(inputs: &GgInputs, bounds: &Bounds) -> CheckEntry {
    let t = inputs.t;
    let entry = CheckEntry::new("gate-gg", &t.name, bounds);
    let shape = classify_shape(t);
    let mut reasons = Vec::new();
    if !inputs.theoremhood.holds() {
        reasons.push(format!("theoremhood {}", inputs.theoremhood.status.name()));
    }
    if let Some(c) = inputs.conservativity {
        if !c.holds() && !c.skipped() {
            reasons.push(format!("conservativity {}", c.status.name()));
        }
    }
    if shape.opaque {
        reasons.push("opaque".into());
    } else if !shape.general_recursive {
        reasons.push("not general recursive".into());
    }
    if t.model_map_dependency {
        reasons.push("declares a model-map dependency".into());
    }
    if inputs.source_dt.is_some_and(CheckEntry::holds) && !shape.gr_conditional_compositional {
        reasons.push("the source has the standard deduction theorem but the conditional clause is not compositional".into());
    }
    if inputs.source.decidable == Decidability::No && inputs.target.decidable == Decidability::Yes {
        reasons.push("undecidable source, decidable target".into());
    }
    verdict(entry, reasons)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;

    fn entry(status: Status) -> CheckEntry {
        CheckEntry::new("x", "x", &Bounds::default()).with_status(status)
    }

    #[test]
    fn gate_g_needs_a_model_map() {
        let c = Catalog::builtin();
        let g = gate_expressiveness_g(c.translation("Tg").unwrap(), None, None, &Bounds::default());
        assert_eq!(g.status, Status::Fail);
        assert_eq!(g.details[0], "no model map");
    }

    #[test]
    fn decidability_flag_rejects() {
        let c = Catalog::builtin();
        let mut source = c.logic("CPL").unwrap().clone();
        source.decidable = Decidability::No;
        let ok = entry(Status::ValidExact);
        let inputs = GgInputs {
            source: &source,
            target: c.logic("L3").unwrap(),
            t: c.translation("Tl").unwrap(),
            theoremhood: &ok,
            conservativity: Some(&ok),
            source_dt: Some(&ok),
        };
        let g = gate_expressiveness_gg(&inputs, &Bounds::default());
        assert_eq!(g.details, ["undecidable source, decidable target"]);
        let decidable = c.logic("CPL").unwrap();
        let inputs = GgInputs { source: decidable, ..inputs };
        assert_eq!(gate_expressiveness_gg(&inputs, &Bounds::default()).status, Status::Pass);
    }
}
