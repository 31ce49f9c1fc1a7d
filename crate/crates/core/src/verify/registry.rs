//! Verified edges between catalog logics and the preorder they generate.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::dt::{default_pool, verify_standard_dt};
use super::gates::{gate_expressiveness_gg, GgInputs};
use super::preservation::{formulas_for, verify_conservativity, verify_theoremhood};
use super::{Bounds, CheckEntry, Status};
use crate::catalog::Catalog;
use crate::formula::{enumerate_formulas, Formula};
use crate::semantics::LogicSpec;
use crate::translation::{apply_translation, compose_translations, ClauseSystem, CompositionMode};
use crate::{Error, Result};

/// Target formulas up to this size must all be images for a translation
/// to count as surjective at bounds.
const SURJECTIVITY_NODES: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Reflexive,
    Direct,
    ComposedSurjective,
    ComposedWeakened,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub translation: String,
    pub source: String,
    pub target: String,
    /// Theoremhood, conservativity and (when applicable) the source's
    /// standard deduction theorem.
    pub reports: Vec<CheckEntry>,
    pub gate_gg: CheckEntry,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivedEdge {
    pub provenance: Provenance,
    /// Catalog translations composed, first applied first.
    pub via: Vec<String>,
    /// Name of the system realising the edge (empty for reflexive edges).
    pub system: String,
    /// Re-verification of a composed edge.
    pub check: Option<CheckEntry>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Registry {
    pub logics: Vec<String>,
    pub edges: Vec<Edge>,
    /// Keyed by `SOURCE->TARGET`.
    pub derived: BTreeMap<String, DerivedEdge>,
    /// Compositions whose re-verification failed, keyed like `derived`.
    pub rejected: BTreeMap<String, CheckEntry>,
    pub bounds: Bounds,
    #[serde(skip)]
    specs: BTreeMap<String, LogicSpec>,
    #[serde(skip)]
    systems: BTreeMap<String, ClauseSystem>,
}

impl PartialEq for Registry {
    fn eq(&self, other: &Registry) -> bool {
        self.logics == other.logics
            && self.edges == other.edges
            && self.derived == other.derived
            && self.rejected == other.rejected
            && self.bounds == other.bounds
    }
}

fn key(source: &str, target: &str) -> String {
    format!("{source}->{target}")
}

impl Registry {
    pub fn has(&self, source: &str, target: &str) -> bool {
        self.derived.contains_key(&key(source, target))
    }

    pub fn derived_edge(&self, source: &str, target: &str) -> Option<&DerivedEdge> {
        self.derived.get(&key(source, target))
    }

    fn spec(&self, name: &str) -> Result<&LogicSpec> {
        self.specs.get(name).ok_or_else(|| Error::Unknown { kind: "logic", name: name.to_string() })
    }

    fn endpoints(k: &str) -> (&str, &str) {
        k.split_once("->").expect("derived keys join two names")
    }
}

/// Whether every target formula of at most three nodes is the image of a
/// source formula within bounds.
pub fn bounded_surjective(t: &ClauseSystem, source: &LogicSpec, target: &LogicSpec, bounds: &Bounds) -> Result<bool> {
    let images: BTreeSet<Formula> = formulas_for(source, bounds, bounds.max_nodes)
        .iter()
        .map(|f| apply_translation(t, f))
        .collect::<Result<_>>()?;
    Ok(enumerate_formulas(&target.signature, &bounds.atoms(), SURJECTIVITY_NODES).all(|f| images.contains(&f)))
}

/// Verify each catalog translation in `edges` between logics in `logics`
/// and gate it by expressiveness_gg.
pub fn build_registry(catalog: &Catalog, logics: &[&str], edges: &[&str], bounds: &Bounds) -> Result<Registry> {
    let mut reg = Registry { bounds: bounds.clone(), ..Registry::default() };
    for &name in logics {
        reg.logics.push(name.to_string());
        reg.specs.insert(name.to_string(), catalog.logic(name)?.clone());
    }
    for &name in edges {
        let t = catalog.translation(name)?;
        let source = reg.spec(&t.source)?;
        let target = reg.spec(&t.target)?;
        let pool = default_pool(source, bounds);
        let theoremhood = verify_theoremhood(source, target, t, bounds)?;
        let conservativity = verify_conservativity(source, target, t, &pool, bounds)?;
        let source_dt = match source.signature.arity("->") {
            Some(2) => Some(verify_standard_dt(source, &pool, bounds)?),
            _ => None,
        };
        let gate_gg = gate_expressiveness_gg(
            &GgInputs {
                source,
                target,
                t,
                theoremhood: &theoremhood,
                conservativity: Some(&conservativity),
                source_dt: source_dt.as_ref(),
            },
            bounds,
        );
        let mut reports = vec![theoremhood, conservativity];
        reports.extend(source_dt);
        reg.edges.push(Edge { translation: name.to_string(), source: t.source.clone(), target: t.target.clone(), reports, gate_gg });
        reg.systems.insert(name.to_string(), t.clone());
    }
    Ok(reg)
}

/// Reflexive edges, gg-passing direct edges, and the closure under
/// composition, each composite re-verified for theoremhood before it is
/// added. Existing derived edges are kept, so a second run adds nothing.
pub fn build_preorder(mut reg: Registry) -> Result<Registry> {
    for l in reg.logics.clone() {
        reg.derived.entry(key(&l, &l)).or_insert(DerivedEdge {
            provenance: Provenance::Reflexive,
            via: Vec::new(),
            system: String::new(),
            check: None,
        });
    }
    for e in &reg.edges {
        if e.gate_gg.status != Status::Pass || e.source == e.target {
            continue;
        }
        reg.derived.entry(key(&e.source, &e.target)).or_insert(DerivedEdge {
            provenance: Provenance::Direct,
            via: vec![e.translation.clone()],
            system: e.translation.clone(),
            check: None,
        });
    }
    let bounds = reg.bounds.clone();
    loop {
        let mut candidates = Vec::new();
        for (k1, d1) in &reg.derived {
            let (a, b) = Registry::endpoints(k1);
            if d1.provenance == Provenance::Reflexive {
                continue;
            }
            for (k2, d2) in reg.derived.range(key(b, "")..) {
                let (b2, c) = Registry::endpoints(k2);
                if b2 != b {
                    break;
                }
                let k = key(a, c);
                if d2.provenance == Provenance::Reflexive || a == c || reg.derived.contains_key(&k) || reg.rejected.contains_key(&k) {
                    continue;
                }
                candidates.push((k, k1.clone(), k2.clone()));
            }
        }
        candidates.sort();
        candidates.dedup_by(|x, y| x.0 == y.0);
        if candidates.is_empty() {
            break;
        }
        for (k, k1, k2) in candidates {
            let (d1, d2) = (&reg.derived[&k1], &reg.derived[&k2]);
            let first = reg.systems[&d1.system].clone();
            let second = reg.systems[&d2.system].clone();
            let mut via = d1.via.clone();
            via.extend(d2.via.iter().cloned());
            let (a, c) = Registry::endpoints(&k);
            let (source, middle, target) = (reg.spec(a)?, reg.spec(&first.target)?, reg.spec(c)?);
            let mode = if bounded_surjective(&first, source, middle, &bounds)? {
                CompositionMode::Surjective
            } else {
                CompositionMode::Weakened
            };
            let composite = match compose_translations(&first, &second, mode) {
                Ok(cs) => cs,
                Err(e) => {
                    let entry = CheckEntry::new("composition", &k, &bounds).with_status(Status::Fail).with_details(vec![e.to_string()]);
                    reg.rejected.insert(k, entry);
                    continue;
                }
            };
            let check = verify_theoremhood(source, target, &composite, &bounds)?;
            if !check.holds() {
                reg.rejected.insert(k, check);
                continue;
            }
            let provenance = match mode {
                CompositionMode::Surjective => Provenance::ComposedSurjective,
                CompositionMode::Weakened => Provenance::ComposedWeakened,
            };
            let system = composite.name.clone();
            reg.systems.insert(system.clone(), composite);
            reg.derived.insert(k, DerivedEdge { provenance, via, system, check: Some(check) });
        }
    }
    Ok(reg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preorder_composes_fragment_embeddings() {
        let c = Catalog::builtin();
        let b = Bounds { max_nodes: 3, ..Bounds::default() };
        let reg = build_registry(&c, &["CPL", "CPL-not-imp", "L3"], &["Tni", "Tl"], &b).unwrap();
        let reg = build_preorder(reg).unwrap();
        let d = reg.derived_edge("CPL", "L3").expect("composed edge");
        assert_eq!(d.via, ["Tni", "Tl"]);
        // Tni is the identity on the shared fragment, so it covers small targets.
        assert_eq!(d.provenance, Provenance::ComposedSurjective);
        assert!(reg.has("L3", "L3"));
        assert!(!reg.has("L3", "CPL"));
    }
}
