//! Finite Kripke models. Worlds are `0..worlds`; sets of worlds and
//! successor sets are bit masks.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::formula::{Constant, Formula};
use crate::{Error, Result};

/// Largest frame size the enumerator accepts.
pub const MAX_WORLDS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrameClass {
    /// Any relation.
    K,
    /// Reflexive and transitive.
    S4,
    /// Finite partial orders read modally.
    GrzDesk,
    /// Finite partial orders with persistent valuations, intuitionistic
    /// clauses.
    Ipl,
    /// As `Ipl`, with falsum an arbitrary persistent proposition.
    Minimal,
    /// Worlds with a valuation and no accessibility; atoms only.
    Bare,
}

impl FrameClass {
    pub fn name(self) -> &'static str {
        match self {
            FrameClass::K => "k",
            FrameClass::S4 => "s4",
            FrameClass::GrzDesk => "grz-desk",
            FrameClass::Ipl => "ipl",
            FrameClass::Minimal => "minimal",
            FrameClass::Bare => "bare",
        }
    }

    pub fn from_name(s: &str) -> Option<FrameClass> {
        [FrameClass::K, FrameClass::S4, FrameClass::GrzDesk, FrameClass::Ipl, FrameClass::Minimal, FrameClass::Bare]
            .into_iter()
            .find(|c| c.name() == s)
    }

    pub fn intuitionistic(self) -> bool {
        matches!(self, FrameClass::Ipl | FrameClass::Minimal)
    }

    fn admits(self, succ: &[u64]) -> bool {
        let n = succ.len();
        let reflexive = || (0..n).all(|i| succ[i] >> i & 1 == 1);
        let transitive = || (0..n).all(|i| (0..n).filter(|&j| succ[i] >> j & 1 == 1).all(|j| succ[j] & !succ[i] == 0));
        let antisymmetric = || (0..n).all(|i| (0..n).all(|j| i == j || !(succ[i] >> j & 1 == 1 && succ[j] >> i & 1 == 1)));
        match self {
            FrameClass::K => true,
            FrameClass::S4 => reflexive() && transitive(),
            FrameClass::GrzDesk | FrameClass::Ipl | FrameClass::Minimal => reflexive() && transitive() && antisymmetric(),
            FrameClass::Bare => succ.iter().all(|&s| s == 0),
        }
    }
}

/// Valuation key under which minimal-logic models store the extension of
/// falsum. `bot` is reserved, so it never clashes with an atom.
pub const FALSUM_KEY: &str = "bot";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "KripkeRepr", try_from = "KripkeRepr")]
pub struct KripkeModel {
    pub frame: FrameClass,
    pub worlds: usize,
    /// `access[w]` is the successor mask of `w`.
    pub access: Vec<u64>,
    /// Atom (canonical text) to the mask of worlds where it is true.
    pub valuation: BTreeMap<String, u64>,
    pub point: usize,
}

#[derive(Serialize, Deserialize)]
struct KripkeRepr {
    frame: FrameClass,
    worlds: usize,
    access: Vec<(usize, usize)>,
    valuation: BTreeMap<String, Vec<usize>>,
    point: usize,
}

impl From<KripkeModel> for KripkeRepr {
    fn from(m: KripkeModel) -> KripkeRepr {
        let bits = |mask: u64| (0..m.worlds).filter(|&w| mask >> w & 1 == 1).collect::<Vec<_>>();
        KripkeRepr {
            frame: m.frame,
            worlds: m.worlds,
            access: (0..m.worlds).flat_map(|i| bits(m.access[i]).into_iter().map(move |j| (i, j))).collect(),
            valuation: m.valuation.iter().map(|(k, &v)| (k.clone(), bits(v))).collect(),
            point: m.point,
        }
    }
}

impl TryFrom<KripkeRepr> for KripkeModel {
    type Error = String;

    fn try_from(r: KripkeRepr) -> std::result::Result<KripkeModel, String> {
        if r.worlds == 0 || r.worlds > 64 || r.point >= r.worlds {
            return Err("bad world count or point".into());
        }
        let mut access = vec![0u64; r.worlds];
        for (i, j) in r.access {
            if i >= r.worlds || j >= r.worlds {
                return Err("access pair out of range".into());
            }
            access[i] |= 1 << j;
        }
        let mut valuation = BTreeMap::new();
        for (atom, ws) in r.valuation {
            let mut mask = 0u64;
            for w in ws {
                if w >= r.worlds {
                    return Err("valuation world out of range".into());
                }
                mask |= 1 << w;
            }
            valuation.insert(atom, mask);
        }
        Ok(KripkeModel { frame: r.frame, worlds: r.worlds, access, valuation, point: r.point })
    }
}

impl KripkeModel {
    pub fn all(&self) -> u64 {
        full_mask(self.worlds)
    }

    /// Whether the frame and valuation meet the frame-class conditions.
    pub fn well_formed(&self) -> bool {
        if self.access.len() != self.worlds || self.point >= self.worlds || !self.frame.admits(&self.access) {
            return false;
        }
        !self.frame.intuitionistic() || self.valuation.values().all(|&m| is_upset(&self.access, m))
    }

    /// Worlds where `f` is forced.
    pub fn extension(&self, f: &Formula) -> Result<u64> {
        let all = self.all();
        match f {
            Formula::Atom(name) => self.valuation.get(name.as_str()).copied().ok_or_else(|| Error::UnassignedAtom(name.clone())),
            Formula::Indexed { .. } => {
                let key = f.render();
                self.valuation.get(&key).copied().ok_or(Error::UnassignedAtom(key))
            }
            Formula::Const(Constant::Top) => Ok(all),
            Formula::Const(Constant::Bot) => {
                if self.frame == FrameClass::Minimal {
                    Ok(self.valuation.get(FALSUM_KEY).copied().unwrap_or(0))
                } else {
                    Ok(0)
                }
            }
            Formula::Apply(sym, ops) => {
                if self.frame == FrameClass::Bare {
                    return Err(self.unsupported(sym));
                }
                let exts = ops.iter().map(|op| self.extension(op)).collect::<Result<Vec<u64>>>()?;
                let unary = || exts[0];
                match (sym.as_str(), exts.len()) {
                    ("and", 2) => Ok(exts[0] & exts[1]),
                    ("or", 2) => Ok(exts[0] | exts[1]),
                    _ if self.frame.intuitionistic() => self.intuitionistic(sym, &exts),
                    ("not", 1) => Ok(all & !unary()),
                    ("->", 2) => Ok(all & (!exts[0] | exts[1])),
                    ("<->", 2) => Ok(all & !(exts[0] ^ exts[1])),
                    ("box", 1) => Ok(self.worlds_where(|succ| succ & !unary() == 0)),
                    ("dia", 1) => Ok(self.worlds_where(|succ| succ & unary() != 0)),
                    _ => Err(self.unsupported(sym)),
                }
            }
            Formula::Pred(sym, _) => Err(self.unsupported(sym)),
            Formula::Quant(q, _, _) => Err(self.unsupported(q.symbol())),
        }
    }

    fn intuitionistic(&self, sym: &str, exts: &[u64]) -> Result<u64> {
        let falsum = if self.frame == FrameClass::Minimal { self.valuation.get(FALSUM_KEY).copied().unwrap_or(0) } else { 0 };
        let imp = |a: u64, b: u64| self.worlds_where(|succ| succ & a & !b == 0);
        match (sym, exts.len()) {
            ("->", 2) => Ok(imp(exts[0], exts[1])),
            ("<->", 2) => Ok(imp(exts[0], exts[1]) & imp(exts[1], exts[0])),
            ("not", 1) => Ok(imp(exts[0], falsum)),
            _ => Err(self.unsupported(sym)),
        }
    }

    fn worlds_where(&self, test: impl Fn(u64) -> bool) -> u64 {
        let mut out = 0;
        for (w, &succ) in self.access.iter().enumerate() {
            if test(succ) {
                out |= 1 << w;
            }
        }
        out
    }

    fn unsupported(&self, symbol: &str) -> Error {
        Error::Unsupported { engine: format!("kripke ({})", self.frame.name()), symbol: symbol.to_string() }
    }

    pub fn forces(&self, f: &Formula) -> Result<bool> {
        Ok(self.extension(f)? >> self.point & 1 == 1)
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn is_upset(access: &[u64], mask: u64) -> bool {
    access.iter().enumerate().all(|(w, &succ)| mask >> w & 1 == 0 || succ & !mask == 0)
}

type FrameCache = Mutex<HashMap<(FrameClass, usize), Arc<Vec<Vec<u64>>>>>;

/// All frames of the class on exactly `n` worlds, ordered by the relation
/// read as an integer (bit `i*n + j` set iff `i` sees `j`).
pub fn frames(class: FrameClass, n: usize) -> Arc<Vec<Vec<u64>>> {
    static CACHE: OnceLock<FrameCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(found) = cache.lock().expect("frame cache").get(&(class, n)) {
        return found.clone();
    }
    assert!(n >= 1 && n <= MAX_WORLDS, "frame size {n} outside 1..={MAX_WORLDS}");
    let row = full_mask(n);
    let mut out = Vec::new();
    if class == FrameClass::Bare {
        out.push(vec![0; n]);
    } else {
        for r in 0u64..(1u64 << (n * n)) {
            let succ: Vec<u64> = (0..n).map(|i| (r >> (i * n)) & row).collect();
            if class.admits(&succ) {
                out.push(succ);
            }
        }
    }
    let out = Arc::new(out);
    cache.lock().expect("frame cache").insert((class, n), out.clone());
    out
}

/// Visit every model of the class with 1..=bound worlds over `atoms`, in
/// canonical order (size, frame, valuation). The visitor sees one reused
/// model whose `point` is 0; returning false stops the walk.
pub fn for_each_model(class: FrameClass, atoms: &[String], bound: usize, visit: &mut dyn FnMut(&KripkeModel) -> bool) {
    let mut keys: Vec<String> = atoms.to_vec();
    if class == FrameClass::Minimal && !keys.iter().any(|k| k == FALSUM_KEY) {
        keys.push(FALSUM_KEY.to_string());
    }
    if class == FrameClass::Bare {
        keys.retain(|k| k != FALSUM_KEY);
    }
    for n in 1..=bound.min(MAX_WORLDS) {
        for frame in frames(class, n).iter() {
            let choices: Vec<u64> = if class.intuitionistic() {
                (0..=full_mask(n)).filter(|&m| is_upset(frame, m)).collect()
            } else {
                (0..=full_mask(n)).collect()
            };
            let mut model = KripkeModel {
                frame: class,
                worlds: n,
                access: frame.clone(),
                valuation: keys.iter().map(|k| (k.clone(), choices[0])).collect(),
                point: 0,
            };
            let mut digits = vec![0usize; keys.len()];
            loop {
                if !visit(&model) {
                    return;
                }
                if !super::matrix::odometer(&mut digits, choices.len()) {
                    break;
                }
                for (k, &d) in keys.iter().zip(&digits) {
                    *model.valuation.get_mut(k).expect("key present") = choices[d];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_lenient;

    fn f(s: &str) -> Formula {
        parse_lenient(s).unwrap()
    }

    #[test]
    fn frame_counts_match_known_sequences() {
        // Labelled preorders: 1, 4, 29, 355; labelled posets: 1, 3, 19, 219.
        let preorders: Vec<usize> = (1..=4).map(|n| frames(FrameClass::S4, n).len()).collect();
        assert_eq!(preorders, vec![1, 4, 29, 355]);
        let posets: Vec<usize> = (1..=4).map(|n| frames(FrameClass::Ipl, n).len()).collect();
        assert_eq!(posets, vec![1, 3, 19, 219]);
        assert_eq!(frames(FrameClass::K, 3).len(), 512);
    }

    #[test]
    fn ipl_chain_excluded_middle() {
        // w0 < w1, p only at w1.
        let m = KripkeModel {
            frame: FrameClass::Ipl,
            worlds: 2,
            access: vec![0b11, 0b10],
            valuation: [("p".to_string(), 0b10)].into_iter().collect(),
            point: 0,
        };
        assert!(m.well_formed());
        assert!(!m.forces(&f("(or p (not p))")).unwrap());
        assert!(m.forces(&f("(not (not (or p (not p))))")).unwrap());
    }

    #[test]
    fn persistence_required_for_ipl() {
        let m = KripkeModel {
            frame: FrameClass::Ipl,
            worlds: 2,
            access: vec![0b11, 0b10],
            valuation: [("p".to_string(), 0b01)].into_iter().collect(),
            point: 0,
        };
        assert!(!m.well_formed());
    }

    #[test]
    fn enumeration_respects_persistence() {
        let mut count = 0;
        for_each_model(FrameClass::Ipl, &["p".to_string()], 2, &mut |m| {
            assert!(m.well_formed());
            count += 1;
            true
        });
        // 1 world: 2 valuations; 2 worlds: discrete (4) + two chains (3 each).
        assert_eq!(count, 2 + 4 + 3 + 3);
    }

    #[test]
    fn bare_models_reject_connectives() {
        let m = KripkeModel {
            frame: FrameClass::Bare,
            worlds: 1,
            access: vec![0],
            valuation: [("p".to_string(), 1)].into_iter().collect(),
            point: 0,
        };
        assert!(m.forces(&f("p")).unwrap());
        assert!(m.forces(&f("(not p)")).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let m = KripkeModel {
            frame: FrameClass::S4,
            worlds: 2,
            access: vec![0b11, 0b10],
            valuation: [("p".to_string(), 0b10)].into_iter().collect(),
            point: 1,
        };
        let text = serde_json::to_string(&m).unwrap();
        assert!(text.contains("\"access\":[[0,0],[0,1],[1,1]]"));
        let back: KripkeModel = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }
}
