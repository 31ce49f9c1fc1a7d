//! Builtin logics, translations, model maps, the Kripke corpus and the
//! constructed counterexamples.
//!
//! Catalog files hold `logic`, `translation`, `map` and `corpus` blocks,
//! each closed by `end`. Lines starting with `--` are comments.
//! Translation blocks may carry `expect <key> <value>` lines and a
//! `model-map <name>` line; both are catalog metadata, not part of the
//! clause system.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::formula::{enumerate_formulas, parse_lenient, Formula};
use crate::semantics::descriptor::parse_logic;
use crate::semantics::{follows, Direction, LogicSpec, ModelMap, Transform};
use crate::translation::{parse_translation, ClauseSystem, OpaqueRule};
use crate::verify::{Bounds, GvWitness, Theta};
use crate::{Error, Result};

pub use crate::semantics::mossakowski_delta;

const SHIPPED: &[(&str, &str)] = &[
    ("logics.cat", include_str!("../../catalog/logics.cat")),
    ("translations.cat", include_str!("../../catalog/translations.cat")),
    ("maps.cat", include_str!("../../catalog/maps.cat")),
    ("corpus.cat", include_str!("../../catalog/corpus.cat")),
];

/// A declared outcome for a catalog translation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectation {
    pub subject: String,
    pub key: String,
    pub value: String,
}

/// A corpus formula with its known validity per logic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub formula: Formula,
    pub valid: BTreeMap<String, bool>,
}

#[derive(Clone, Debug, Default)]
pub struct Catalog {
    pub logics: BTreeMap<String, LogicSpec>,
    pub translations: BTreeMap<String, ClauseSystem>,
    pub maps: BTreeMap<String, ModelMap>,
    /// Translation name to the model map paired with it.
    pub translation_maps: BTreeMap<String, String>,
    pub expectations: Vec<Expectation>,
    pub corpora: BTreeMap<String, Vec<CorpusEntry>>,
    shipped: BTreeSet<(&'static str, String)>,
}

impl Catalog {
    /// The shipped catalog.
    pub fn builtin() -> Catalog {
        let mut c = Catalog::default();
        for (origin, text) in SHIPPED {
            c.merge_text(text, origin).unwrap_or_else(|e| panic!("shipped catalog {origin}: {e}"));
        }
        c.shipped = c.names();
        c.validate().unwrap_or_else(|e| panic!("shipped catalog: {e}"));
        c
    }

    fn names(&self) -> BTreeSet<(&'static str, String)> {
        let mut out = BTreeSet::new();
        out.extend(self.logics.keys().map(|k| ("logic", k.clone())));
        out.extend(self.translations.keys().map(|k| ("translation", k.clone())));
        out.extend(self.maps.keys().map(|k| ("map", k.clone())));
        out.extend(self.corpora.keys().map(|k| ("corpus", k.clone())));
        out
    }

    /// Merge user entries from a file; shipped entries cannot be replaced.
    pub fn merge_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        self.merge_text(&text, &path.display().to_string())?;
        self.validate()
    }

    /// Merge the blocks of `text`. Entries with a new name are added,
    /// user entries replace earlier user entries, shipped names are
    /// rejected.
    pub fn merge_text(&mut self, text: &str, origin: &str) -> Result<()> {
        let err = |line: usize, msg: String| Error::Config(format!("{origin}:{line}: {msg}"));
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with("--"));
        while let Some((n, header)) = lines.next() {
            let (kind, name) = header.split_once(char::is_whitespace).ok_or_else(|| err(n, format!("expected a block header, got `{header}`")))?;
            let name = name.trim().to_string();
            let mut body = Vec::new();
            loop {
                match lines.next() {
                    Some((_, "end")) => break,
                    Some(line) => body.push(line),
                    None => return Err(err(n, format!("block `{name}` has no `end`"))),
                }
            }
            let kind: &'static str = match kind {
                "logic" => "logic",
                "translation" => "translation",
                "map" => "map",
                "corpus" => "corpus",
                other => return Err(err(n, format!("unknown block kind `{other}`"))),
            };
            if self.shipped.contains(&(kind, name.clone())) {
                return Err(err(n, format!("{kind} `{name}` is shipped and cannot be replaced")));
            }
            let located = |e: Error| err(n, format!("{kind} `{name}`: {e}"));
            match kind {
                "logic" => {
                    let logic = parse_logic(&name, &body).map_err(located)?;
                    self.logics.insert(name, logic);
                }
                "translation" => {
                    let mut clause_lines = Vec::new();
                    self.expectations.retain(|e| e.subject != name);
                    self.translation_maps.remove(&name);
                    for &(ln, line) in &body {
                        let words: Vec<&str> = line.split_whitespace().collect();
                        match words.as_slice() {
                            ["expect", key, value] => self.expectations.push(Expectation {
                                subject: name.clone(),
                                key: key.to_string(),
                                value: value.to_string(),
                            }),
                            ["expect", ..] => return Err(err(ln, "expected `expect <key> <value>`".into())),
                            ["model-map", map] => {
                                self.translation_maps.insert(name.clone(), map.to_string());
                            }
                            _ => clause_lines.push((ln, line)),
                        }
                    }
                    let cs = parse_translation(&name, &clause_lines).map_err(located)?;
                    self.translations.insert(name, cs);
                }
                "map" => {
                    let map = parse_map(&name, &body).map_err(located)?;
                    self.maps.insert(name, map);
                }
                _ => {
                    let mut entries = Vec::new();
                    for &(ln, line) in &body {
                        entries.push(parse_corpus_line(line).map_err(|e| err(ln, e.to_string()))?);
                    }
                    self.corpora.insert(name, entries);
                }
            }
        }
        Ok(())
    }

    /// Cross-reference check: translations and maps name known logics,
    /// clause systems cover their source signature, paired maps exist.
    pub fn validate(&self) -> Result<()> {
        for cs in self.translations.values() {
            let source = self.logic(&cs.source)?;
            self.logic(&cs.target)?;
            if cs.opaque.is_none() {
                for (name, tr) in &cs.translators {
                    for (sym, _) in &source.signature.connectives {
                        if !tr.clauses.iter().any(|c| c.key.len() == 1 && c.key[0] == *sym) {
                            return Err(Error::Config(format!(
                                "translation `{}`: translator `{name}` has no clause for `{sym}`",
                                cs.name
                            )));
                        }
                    }
                }
            }
        }
        for map in self.maps.values() {
            self.logic(&map.source)?;
            self.logic(&map.target)?;
        }
        for (t, m) in &self.translation_maps {
            let map = self.map(m)?;
            let cs = self.translation(t)?;
            if (map.source.as_str(), map.target.as_str()) != (cs.source.as_str(), cs.target.as_str()) {
                return Err(Error::Config(format!("model map `{m}` does not connect the logics of `{t}`")));
            }
        }
        for entries in self.corpora.values() {
            for e in entries {
                for logic in e.valid.keys() {
                    self.logic(logic)?;
                }
            }
        }
        Ok(())
    }

    pub fn logic(&self, name: &str) -> Result<&LogicSpec> {
        self.logics.get(name).ok_or_else(|| Error::Unknown { kind: "logic", name: name.to_string() })
    }

    pub fn translation(&self, name: &str) -> Result<&ClauseSystem> {
        self.translations.get(name).ok_or_else(|| Error::Unknown { kind: "translation", name: name.to_string() })
    }

    pub fn map(&self, name: &str) -> Result<&ModelMap> {
        self.maps.get(name).ok_or_else(|| Error::Unknown { kind: "model map", name: name.to_string() })
    }

    /// The model map paired with a translation, if any.
    pub fn map_for(&self, translation: &str) -> Option<&ModelMap> {
        self.translation_maps.get(translation).and_then(|m| self.maps.get(m))
    }

    pub fn corpus(&self, name: &str) -> Result<&[CorpusEntry]> {
        self.corpora.get(name).map(Vec::as_slice).ok_or_else(|| Error::Unknown { kind: "corpus", name: name.to_string() })
    }

    /// Declared expectations of one translation, keyed by property.
    pub fn expectations_for(&self, translation: &str) -> BTreeMap<String, String> {
        self.expectations.iter().filter(|e| e.subject == translation).map(|e| (e.key.clone(), e.value.clone())).collect()
    }
}

fn parse_map(name: &str, lines: &[(usize, &str)]) -> Result<ModelMap> {
    let mut source = None;
    let mut target = None;
    let mut direction = None;
    let mut model_based = false;
    let mut surjective_on_theta = false;
    let mut transform = None;
    let yes_no = |n: usize, v: &str| match v {
        "yes" => Ok(true),
        "no" => Ok(false),
        other => Err(Error::Config(format!("line {n}: expected yes or no, got `{other}`"))),
    };
    for &(n, line) in lines {
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            ["source", s] => source = Some(s.to_string()),
            ["target", t] => target = Some(t.to_string()),
            ["direction", "source-to-target"] => direction = Some(Direction::SourceToTarget),
            ["direction", "target-to-source"] => direction = Some(Direction::TargetToSource),
            ["model-based", v] => model_based = yes_no(n, v)?,
            ["surjective-on-theta", v] => surjective_on_theta = yes_no(n, v)?,
            ["transform", "keep-valuation"] => transform = Some(Transform::KeepValuation),
            ["transform", "constant-trivial"] => transform = Some(Transform::ConstantTrivial),
            ["transform", "indexed-atoms-to-assignment", base] => {
                transform = Some(Transform::IndexedAtomsToAssignment { base: base.to_string() })
            }
            ["transform", "relatedness-to-valuation", base] => {
                transform = Some(Transform::RelatednessToValuation { base: base.to_string() })
            }
            ["transform", "worlds-to-indexed-atoms", base] => {
                transform = Some(Transform::WorldsToIndexedAtoms { base: base.to_string() })
            }
            _ => return Err(Error::Config(format!("line {n}: unknown map field `{line}`"))),
        }
    }
    let missing = |field: &str| Error::Config(format!("map `{name}` needs `{field}`"));
    Ok(ModelMap {
        name: name.to_string(),
        source: source.ok_or_else(|| missing("source"))?,
        target: target.ok_or_else(|| missing("target"))?,
        direction: direction.ok_or_else(|| missing("direction"))?,
        model_based,
        surjective_on_theta,
        transform: transform.ok_or_else(|| missing("transform"))?,
    })
}

fn parse_corpus_line(line: &str) -> Result<CorpusEntry> {
    let rest = line.strip_prefix("formula").ok_or_else(|| Error::Config(format!("expected `formula …`, got `{line}`")))?;
    let mut parts = rest.split(';');
    let formula = parse_lenient(parts.next().unwrap_or("").trim())?;
    let mut valid = BTreeMap::new();
    for part in parts {
        let words: Vec<&str> = part.split_whitespace().collect();
        let status = match words.as_slice() {
            [_, "valid"] => true,
            [_, "refuted"] => false,
            _ => return Err(Error::Config(format!("expected `<logic> valid|refuted`, got `{}`", part.trim()))),
        };
        valid.insert(words[0].to_string(), status);
    }
    Ok(CorpusEntry { formula, valid })
}

/// The shipped logics.
pub fn builtin_logics() -> Vec<LogicSpec> {
    Catalog::builtin().logics.into_values().collect()
}

/// The shipped clause systems.
pub fn builtin_translations() -> Vec<ClauseSystem> {
    Catalog::builtin().translations.into_values().collect()
}

/// Table translation from the trivial logic into CPL sending the `i`-th
/// source formula within the bounds to the `i`-th CPL validity, both in
/// canonical order.
pub fn injective_trivial_translation(catalog: &Catalog, bounds: &Bounds) -> Result<ClauseSystem> {
    let trivial = catalog.logic("Trivial")?;
    let cpl = catalog.logic("CPL")?;
    let atoms = bounds.atoms();
    let sources: Vec<Formula> = enumerate_formulas(&trivial.signature, &atoms, bounds.max_nodes).collect();
    let mut entries = BTreeMap::new();
    let mut validities = enumerate_formulas(&cpl.signature, &atoms, usize::MAX);
    for source in sources {
        let delta = loop {
            let candidate = validities.next().ok_or_else(|| Error::Precondition("ran out of validities".into()))?;
            if follows(cpl, &Default::default(), &candidate, bounds.max_model_size)? {
                break candidate;
            }
        };
        entries.insert(source, delta);
    }
    let mut cs = ClauseSystem::new("Tinj", "Trivial", "CPL");
    cs.opaque = Some(OpaqueRule::Table { entries });
    Ok(cs)
}

/// What a counterexample claims.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CounterexampleWitness {
    /// A sub-logic witness (translation, map, guard).
    Sublogic(GvWitness),
    /// A truth-preserving pair in the model-based orientation.
    TruthPreserving { translation: ClauseSystem, map: ModelMap },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub name: String,
    pub description: String,
    pub witness: CounterexampleWitness,
    /// Property name to whether it is expected to hold.
    pub expected: BTreeMap<String, bool>,
}

/// The over-generation witnesses with their expected outcomes. The
/// injective variant's table covers the formulas within `bounds`.
pub fn build_counterexamples(catalog: &Catalog, bounds: &Bounds) -> Result<Vec<Counterexample>> {
    let expected = |pairs: &[(&str, bool)]| pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    let validity = parse_lenient("(or p (not p))")?;
    let trivial_map = catalog.map("f-trivial")?.clone();
    Ok(vec![
        Counterexample {
            name: "trivial-sublogic".into(),
            description: "every formula of the trivial logic goes to one CPL validity, which is also the guard".into(),
            witness: CounterexampleWitness::Sublogic(GvWitness {
                translation: catalog.translation("Ttriv")?.clone(),
                model_map: trivial_map.clone(),
                theta: Theta::Fixed { formulas: [validity.clone()].into_iter().collect() },
            }),
            expected: expected(&[("gv-sublogic", true), ("gate-gg", false)]),
        },
        Counterexample {
            name: "injective-sublogic".into(),
            description: "the i-th formula of the trivial logic goes to the i-th CPL validity".into(),
            witness: CounterexampleWitness::Sublogic(GvWitness {
                translation: injective_trivial_translation(catalog, bounds)?,
                model_map: trivial_map,
                theta: Theta::Fixed { formulas: [validity].into_iter().collect() },
            }),
            expected: expected(&[("gv-sublogic", true), ("injective", true), ("gate-gg", false)]),
        },
        Counterexample {
            name: "encoding-sublogic".into(),
            description: "WPL formulas become indexed atoms; the encoding axioms of the closure guard CPL models".into(),
            witness: CounterexampleWitness::Sublogic(GvWitness {
                translation: catalog.translation("Tprime")?.clone(),
                model_map: catalog.map("f-prime")?.clone(),
                theta: Theta::EncodingAxioms,
            }),
            expected: expected(&[("gv-sublogic", true), ("gate-gg", false)]),
        },
        Counterexample {
            name: "trivial-truth-preservation".into(),
            description: "each modal formula becomes an atom true exactly where the formula is forced".into(),
            witness: CounterexampleWitness::TruthPreserving {
                translation: catalog.translation("Tt")?.clone(),
                map: catalog.map("f-t")?.clone(),
            },
            expected: expected(&[("truth-preservation", true), ("gate-g", false), ("gate-gg", false)]),
        },
        Counterexample {
            name: "relatedness-embedding".into(),
            description: "relatedness logic into CPL with indexed atoms recording the relation".into(),
            witness: CounterexampleWitness::TruthPreserving {
                translation: catalog.translation("TE")?.clone(),
                map: catalog.map("f-E")?.clone(),
            },
            expected: expected(&[("truth-preservation", true), ("gate-g", true), ("gate-gg", false)]),
        },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{BivaluationConstraint, Engine};
    use crate::translation::apply_translation;

    #[test]
    fn shipped_catalog_loads() {
        let c = Catalog::builtin();
        assert!(matches!(c.logic("WPL").unwrap().engine, Engine::Bivaluation { constraint: BivaluationConstraint::HalfNegation }));
        assert!(matches!(c.logic("R").unwrap().engine, Engine::Relatedness));
        assert!(c.logic("atom-only").unwrap().signature.connectives.is_empty());
        assert!(c.logic("CPL").unwrap().notes.iter().any(|n| n.contains("most general translation")));
        assert!(c.corpus("kripke").unwrap().len() >= 10);
    }

    #[test]
    fn catalog_translation_examples() {
        let c = Catalog::builtin();
        let run = |t: &str, f: &str| apply_translation(c.translation(t).unwrap(), &parse_lenient(f).unwrap()).unwrap().render();
        assert_eq!(run("Tm1", "(and p q)"), "(or (and (or p bot) (or q bot)) bot)");
        assert_eq!(run("DemriGore", "(box p)"), "(box (-> (box (-> p (box p))) p))");
        assert_eq!(run("Tbh", "(not (box p))"), "(not (box p))");
        assert_eq!(run("Tg", "(or p (not p))"), "(or (box p) (box (not (box p))))");
        assert_eq!(run("TE", "(-> p q)"), "(and (-> p q) d{p,q})");
        assert_eq!(run("Tprime", "(not r)"), "p{(not r)}");
        assert_eq!(run("Tx", "(box p)"), "(forall y (-> (R x y) (P_p y)))");
    }

    #[test]
    fn shipped_names_are_immutable() {
        let mut c = Catalog::builtin();
        let err = c.merge_text("logic CPL\n  engine relatedness\n  connectives not/1 and/2 ->/2\nend\n", "user").unwrap_err();
        assert!(err.to_string().contains("shipped"));
        c.merge_text("logic Mine\n  connectives not/1 and/2 ->/2\n  engine relatedness\nend\n", "user").unwrap();
        assert!(c.logic("Mine").is_ok());
    }

    #[test]
    fn delta_examples() {
        let closure = crate::formula::subformula_closure(&[parse_lenient("(not r)").unwrap()].into_iter().collect());
        let delta = mossakowski_delta(&closure).unwrap();
        let rendered: Vec<String> = delta.iter().map(Formula::render).collect();
        assert_eq!(rendered, ["(-> p{r} (not p{(not r)}))"]);
        assert!(mossakowski_delta(&Default::default()).unwrap().is_empty());
    }
}
