//! Consequence checks backed by a table of model-set bitsets.
//!
//! For matrix and Kripke logics over few atoms the oracle enumerates the
//! models once and stores, per formula, the set of (pointed) models that
//! designate it. Consequence is then mask inclusion. Formulas over other
//! atoms, and other engines, fall back to direct search.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use crate::formula::Formula;
use crate::semantics::kripke::{self, KripkeModel, MAX_WORLDS};
use crate::semantics::{atom_keys, countermodel, Engine, LogicSpec, MatrixSemantics, Model, Valuation};
use crate::Result;

const MAX_VALUATIONS: usize = 1 << 12;
const MAX_POINTED: usize = 1 << 20;
const MAX_CACHED: usize = 1 << 17;

enum Space {
    Valuations { matrix: MatrixSemantics, valuations: Vec<Valuation> },
    /// Unpointed models with the bit offset of their world 0.
    Kripke { models: Vec<KripkeModel>, offsets: Vec<usize> },
}

struct Table {
    atoms: BTreeSet<String>,
    space: Space,
    bits: usize,
}

pub struct Oracle<'a> {
    logic: &'a LogicSpec,
    bound: usize,
    table: Option<Table>,
    cache: Mutex<HashMap<Formula, Arc<Vec<u64>>>>,
}

impl<'a> Oracle<'a> {
    /// An oracle for questions about `formulas` (and formulas over the
    /// same atoms).
    pub fn new<'f>(logic: &'a LogicSpec, formulas: impl IntoIterator<Item = &'f Formula>, bound: usize) -> Oracle<'a> {
        let atoms = atom_keys(formulas);
        Oracle { logic, bound, table: build_table(logic, &atoms, bound), cache: Mutex::new(HashMap::new()) }
    }

    pub fn logic(&self) -> &LogicSpec {
        self.logic
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    fn covers(&self, f: &Formula) -> Option<&Table> {
        let table = self.table.as_ref()?;
        atom_keys([f]).iter().all(|a| table.atoms.contains(a)).then_some(table)
    }

    fn mask(&self, table: &Table, f: &Formula) -> Result<Arc<Vec<u64>>> {
        if let Some(m) = self.cache.lock().expect("oracle cache").get(f) {
            return Ok(m.clone());
        }
        let mut words = vec![0u64; table.bits.div_ceil(64)];
        let mut set = |bit: usize| words[bit / 64] |= 1 << (bit % 64);
        match &table.space {
            Space::Valuations { matrix, valuations } => {
                for (i, v) in valuations.iter().enumerate() {
                    if matrix.is_designated(matrix.eval(v, f)?) {
                        set(i);
                    }
                }
            }
            Space::Kripke { models, offsets } => {
                for (m, &offset) in models.iter().zip(offsets) {
                    let ext = m.extension(f)?;
                    for w in 0..m.worlds {
                        if ext >> w & 1 == 1 {
                            set(offset + w);
                        }
                    }
                }
            }
        }
        let words = Arc::new(words);
        let mut cache = self.cache.lock().expect("oracle cache");
        if cache.len() < MAX_CACHED {
            cache.insert(f.clone(), words.clone());
        }
        Ok(words)
    }

    /// First model (canonical order) designating the premises but not the
    /// conclusion; `Some(None)` for explicit logics.
    pub fn countermodel(&self, premises: &[Formula], conclusion: &Formula) -> Result<Option<Option<Model>>> {
        let table = match self.covers(conclusion) {
            Some(t) if premises.iter().all(|p| self.covers(p).is_some()) => t,
            _ => return countermodel(self.logic, &premises.iter().cloned().collect(), conclusion, self.bound),
        };
        let mut acc: Vec<u64> = self.mask(table, conclusion)?.iter().map(|w| !w).collect();
        for p in premises {
            let m = self.mask(table, p)?;
            acc.iter_mut().zip(m.iter()).for_each(|(a, b)| *a &= b);
        }
        let Some(bit) = first_bit(&acc, table.bits) else { return Ok(None) };
        Ok(Some(Some(match &table.space {
            Space::Valuations { valuations, .. } => Model::Valuation(valuations[bit].clone()),
            Space::Kripke { models, offsets } => {
                let i = offsets.partition_point(|&o| o <= bit) - 1;
                let mut m = models[i].clone();
                m.point = bit - offsets[i];
                Model::Kripke(m)
            }
        })))
    }

    pub fn follows(&self, premises: &[Formula], conclusion: &Formula) -> Result<bool> {
        Ok(self.countermodel(premises, conclusion)?.is_none())
    }

    pub fn valid(&self, f: &Formula) -> Result<bool> {
        self.follows(&[], f)
    }

    /// The designation mask of `f` over the tabled models, when tabled.
    pub fn model_set(&self, f: &Formula) -> Result<Option<Arc<Vec<u64>>>> {
        match self.covers(f) {
            Some(t) => Ok(Some(self.mask(t, f)?)),
            None => Ok(None),
        }
    }
}

fn first_bit(words: &[u64], bits: usize) -> Option<usize> {
    for (i, &w) in words.iter().enumerate() {
        if w != 0 {
            let bit = i * 64 + w.trailing_zeros() as usize;
            return (bit < bits).then_some(bit);
        }
    }
    None
}

fn build_table(logic: &LogicSpec, atoms: &[String], bound: usize) -> Option<Table> {
    let atom_set: BTreeSet<String> = atoms.iter().cloned().collect();
    match &logic.engine {
        Engine::Matrix(m) => {
            let count = m.values.len().checked_pow(atoms.len() as u32)?;
            if count > MAX_VALUATIONS {
                return None;
            }
            let valuations: Vec<Valuation> = m.valuations(atoms).collect();
            Some(Table { atoms: atom_set, bits: valuations.len(), space: Space::Valuations { matrix: m.clone(), valuations } })
        }
        Engine::Kripke { frame } => {
            let keys = atoms.len() + usize::from(*frame == kripke::FrameClass::Minimal);
            let mut estimate = 0usize;
            for n in 1..=bound.min(MAX_WORLDS) {
                let per_frame = 1usize.checked_shl((n * keys) as u32)?;
                estimate = estimate.checked_add(kripke::frames(*frame, n).len().checked_mul(per_frame)?.checked_mul(n)?)?;
            }
            if estimate > MAX_POINTED {
                return None;
            }
            let mut models = Vec::new();
            let mut offsets = Vec::new();
            let mut bits = 0;
            kripke::for_each_model(*frame, atoms, bound, &mut |m| {
                offsets.push(bits);
                bits += m.worlds;
                models.push(m.clone());
                true
            });
            Some(Table { atoms: atom_set, bits, space: Space::Kripke { models, offsets } })
        }
        _ => None,
    }
}
