use super::{Formula, Signature};

/// Canonically ordered stream of every formula over `atoms` (plus the
/// signature's constants) with at most `max_nodes` nodes.
///
/// Formulas of each size are built from the smaller levels and sorted by
/// canonical text, so the stream is ordered by size, then text.
pub fn enumerate_formulas(sig: &Signature, atoms: &[Formula], max_nodes: usize) -> FormulaStream {
    let mut leaves: Vec<Formula> = atoms.to_vec();
    leaves.extend(sig.constants.iter().map(|c| Formula::Const(*c)));
    leaves.sort_by_key(Formula::render);
    leaves.dedup();
    FormulaStream {
        connectives: sig.connectives.clone(),
        levels: vec![Vec::new(), leaves],
        max_nodes,
        level: 1,
        index: 0,
    }
}

pub struct FormulaStream {
    connectives: Vec<(String, usize)>,
    /// `levels[n]` holds the formulas with exactly `n` nodes.
    levels: Vec<Vec<Formula>>,
    max_nodes: usize,
    level: usize,
    index: usize,
}

impl FormulaStream {
    fn build_level(&mut self, n: usize) {
        let mut out = Vec::new();
        for (sym, arity) in &self.connectives {
            if n < 1 + arity {
                continue;
            }
            let mut sizes = vec![0; *arity];
            distribute(n - 1, *arity, &mut sizes, 0, &mut |sizes| {
                let mut picks: Vec<Formula> = Vec::with_capacity(sizes.len());
                product(&self.levels, sizes, 0, &mut picks, &mut |ops| {
                    out.push(Formula::Apply(sym.clone(), ops.to_vec()));
                });
            });
        }
        let mut keyed: Vec<(String, Formula)> = out.into_iter().map(|f| (f.render(), f)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        self.levels.push(keyed.into_iter().map(|(_, f)| f).collect());
    }

    /// Drain the remaining stream into a vector.
    pub fn collect_all(self) -> Vec<Formula> {
        self.collect()
    }
}

/// Every way to split `total` nodes among `slots` operands, each ≥ 1.
fn distribute(total: usize, slots: usize, sizes: &mut Vec<usize>, at: usize, emit: &mut dyn FnMut(&[usize])) {
    if at + 1 == slots {
        if total >= 1 {
            sizes[at] = total;
            emit(sizes);
        }
        return;
    }
    let rest = slots - at - 1;
    if total < rest + 1 {
        return;
    }
    for k in 1..=total - rest {
        sizes[at] = k;
        distribute(total - k, slots, sizes, at + 1, emit);
    }
}

fn product(levels: &[Vec<Formula>], sizes: &[usize], at: usize, picks: &mut Vec<Formula>, emit: &mut dyn FnMut(&[Formula])) {
    if at == sizes.len() {
        emit(picks);
        return;
    }
    for f in &levels[sizes[at]] {
        picks.push(f.clone());
        product(levels, sizes, at + 1, picks, emit);
        picks.pop();
    }
}

impl Iterator for FormulaStream {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        loop {
            if self.level > self.max_nodes {
                return None;
            }
            if self.level >= self.levels.len() {
                self.build_level(self.level);
            }
            if let Some(f) = self.levels[self.level].get(self.index) {
                self.index += 1;
                return Some(f.clone());
            }
            self.level += 1;
            self.index = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::FormulaSet;

    fn atoms(names: &[&str]) -> Vec<Formula> {
        names.iter().map(|n| Formula::atom(n)).collect()
    }

    #[test]
    fn stream_begins_with_atoms() {
        let sig = Signature::new("CPL-not-and", &[("not", 1), ("and", 2)], &[]).unwrap();
        let got: Vec<String> = enumerate_formulas(&sig, &atoms(&["p"]), 2).map(|f| f.render()).collect();
        assert_eq!(got, vec!["p", "(not p)"]);
    }

    #[test]
    fn unary_tower_count() {
        let sig = Signature::new("neg", &[("not", 1)], &[]).unwrap();
        assert_eq!(enumerate_formulas(&sig, &atoms(&["p"]), 3).count(), 3);
    }

    #[test]
    fn two_atom_negation_conjunction_count() {
        let sig = Signature::new("CPL-not-and", &[("not", 1), ("and", 2)], &[]).unwrap();
        let got: Vec<String> = enumerate_formulas(&sig, &atoms(&["p", "q"]), 3).map(|f| f.render()).collect();
        assert_eq!(got.len(), 10);
        assert_eq!(&got[4..], &["(and p p)", "(and p q)", "(and q p)", "(and q q)", "(not (not p))", "(not (not q))"]);
    }

    #[test]
    fn stream_is_sorted_and_duplicate_free() {
        let sig = Signature::new("m", &[("not", 1), ("->", 2), ("box", 1)], &[crate::formula::Constant::Bot]).unwrap();
        let all: Vec<Formula> = enumerate_formulas(&sig, &atoms(&["p", "q"]), 5).collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        let set: FormulaSet = all.iter().cloned().collect();
        assert_eq!(set.len(), all.len());
    }
}
