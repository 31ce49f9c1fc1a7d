//! Text descriptors for logics.
//!
//! ```text
//! logic L3
//!   connectives not/1 ->/2
//!   constants top bot
//!   engine matrix
//!   values 0 1/2 1
//!   designated 1
//!   table not 1 1/2 0
//!   table -> 1 1 1 1/2 1 1 0 1/2 1
//!   constant top 1
//!   constant bot 0
//! end
//! ```
//!
//! Other engines: `engine kripke <frame>`, `engine bivaluation
//! half-negation`, `engine relatedness`, `engine fo-finite` (with
//! `predicates`, `open-predicates`, `relation`), `engine explicit` (with
//! `formulas` and `rule <premises> => <conclusion>` lines) and
//! `engine uninterpreted`. Optional lines: `atoms <prefix>`,
//! `decidable yes|no|unknown`, `consequence full|theoremhood-only`,
//! `note <text>`.

use std::collections::BTreeMap;

use super::{
    BivaluationConstraint, ConsequenceMode, Decidability, Engine, ExplicitConsequence, FrameClass, LogicSpec,
    MatrixSemantics, Rule, Table,
};
use crate::formula::{parse_lenient, Constant, FirstOrderPart, Formula, Signature};
use crate::{Error, Result};

/// Split whitespace-separated formulas at top level.
pub fn split_formulas(text: &str) -> Result<Vec<Formula>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = None;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' | '{' => {
                start.get_or_insert(i);
                depth += 1;
            }
            ')' | '}' => depth -= 1,
            c if c.is_whitespace() && depth == 0 => {
                if let Some(s) = start.take() {
                    out.push(parse_lenient(&text[s..i])?);
                }
            }
            _ => {
                start.get_or_insert(i);
            }
        }
    }
    if let Some(s) = start {
        out.push(parse_lenient(&text[s..])?);
    }
    Ok(out)
}

fn at(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("line {line}: {msg}"))
}

/// Parse the body of a `logic <name> … end` block. Lines are numbered
/// for error messages.
pub fn parse_logic(name: &str, lines: &[(usize, &str)]) -> Result<LogicSpec> {
    let mut connectives: Vec<(String, usize)> = Vec::new();
    let mut constants = Vec::new();
    let mut atom_namespace = String::new();
    let mut engine_line: Option<(usize, Vec<String>)> = None;
    let mut values: Vec<String> = Vec::new();
    let mut designated: Vec<String> = Vec::new();
    let mut tables: Vec<(usize, String, Vec<String>)> = Vec::new();
    let mut constant_values: Vec<(usize, Constant, String)> = Vec::new();
    let mut fo: Option<FirstOrderPart> = None;
    let mut formulas = Vec::new();
    let mut rules = Vec::new();
    let mut decidable = Decidability::Yes;
    let mut consequence_mode = ConsequenceMode::Full;
    let mut notes = Vec::new();
    let fo_part = |fo: &mut Option<FirstOrderPart>| -> FirstOrderPart {
        fo.take().unwrap_or(FirstOrderPart { predicates: Vec::new(), open_predicates: false, relation: "R".into() })
    };

    for &(n, line) in lines {
        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let words: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
        match head {
            "connectives" => {
                for w in &words {
                    let (sym, arity) = w.rsplit_once('/').ok_or_else(|| at(n, format!("expected symbol/arity, got `{w}`")))?;
                    let arity = arity.parse().map_err(|_| at(n, format!("bad arity in `{w}`")))?;
                    connectives.push((sym.to_string(), arity));
                }
            }
            "constants" => {
                for w in &words {
                    constants.push(Constant::from_symbol(w).ok_or_else(|| at(n, format!("unknown constant `{w}`")))?);
                }
            }
            "atoms" => atom_namespace = rest.to_string(),
            "engine" => engine_line = Some((n, words)),
            "values" => values = words,
            "designated" => designated = words,
            "table" => {
                let (sym, entries) = words.split_first().ok_or_else(|| at(n, "table needs a symbol"))?;
                tables.push((n, sym.clone(), entries.to_vec()));
            }
            "constant" => {
                let [c, v] = words.as_slice() else { return Err(at(n, "expected `constant <top|bot> <value>`")) };
                let c = Constant::from_symbol(c).ok_or_else(|| at(n, format!("unknown constant `{c}`")))?;
                constant_values.push((n, c, v.clone()));
            }
            "predicates" => {
                let mut part = fo_part(&mut fo);
                for w in &words {
                    let (p, a) = w.rsplit_once('/').ok_or_else(|| at(n, format!("expected P/arity, got `{w}`")))?;
                    part.predicates.push((p.to_string(), a.parse().map_err(|_| at(n, format!("bad arity in `{w}`")))?));
                }
                fo = Some(part);
            }
            "open-predicates" => {
                let mut part = fo_part(&mut fo);
                part.open_predicates = true;
                fo = Some(part);
            }
            "relation" => {
                let mut part = fo_part(&mut fo);
                part.relation = rest.to_string();
                fo = Some(part);
            }
            "formulas" => formulas = split_formulas(rest).map_err(|e| at(n, e))?,
            "rule" => {
                let (lhs, rhs) = rest.split_once("=>").ok_or_else(|| at(n, "rule needs `=>`"))?;
                let premises = split_formulas(lhs).map_err(|e| at(n, e))?.into_iter().collect();
                let conclusion = parse_lenient(rhs.trim()).map_err(|e| at(n, e))?;
                rules.push(Rule { premises, conclusion });
            }
            "decidable" => {
                decidable = match rest {
                    "yes" => Decidability::Yes,
                    "no" => Decidability::No,
                    "unknown" => Decidability::Unknown,
                    other => return Err(at(n, format!("unknown decidability `{other}`"))),
                }
            }
            "consequence" => {
                consequence_mode = match rest {
                    "full" => ConsequenceMode::Full,
                    "theoremhood-only" => ConsequenceMode::TheoremhoodOnly,
                    other => return Err(at(n, format!("unknown consequence mode `{other}`"))),
                }
            }
            "note" => notes.push(rest.to_string()),
            other => return Err(at(n, format!("unknown logic field `{other}`"))),
        }
    }

    let (engine_at, engine_words) = engine_line.ok_or_else(|| Error::Config(format!("logic `{name}` has no engine line")))?;
    let engine = match engine_words.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["matrix"] => {
            let index = |v: &str, n: usize| values.iter().position(|x| x == v).ok_or_else(|| at(n, format!("unknown value `{v}`")));
            let mut table_map = BTreeMap::new();
            for (n, sym, entries) in &tables {
                let arity = connectives
                    .iter()
                    .find(|(s, _)| s == sym)
                    .map(|(_, a)| *a)
                    .ok_or_else(|| at(*n, format!("table for undeclared connective `{sym}`")))?;
                let entries = entries.iter().map(|e| index(e, *n)).collect::<Result<Vec<_>>>()?;
                table_map.insert(sym.clone(), Table { arity, entries });
            }
            let designated = designated.iter().map(|d| index(d, engine_at)).collect::<Result<Vec<_>>>()?;
            let mut constants = BTreeMap::new();
            for (n, c, v) in &constant_values {
                constants.insert(*c, index(v, *n)?);
            }
            Engine::Matrix(MatrixSemantics { values: values.clone(), designated, tables: table_map, constants })
        }
        ["kripke", frame] => Engine::Kripke {
            frame: FrameClass::from_name(frame).ok_or_else(|| at(engine_at, format!("unknown frame class `{frame}`")))?,
        },
        ["bivaluation", "half-negation"] => Engine::Bivaluation { constraint: BivaluationConstraint::HalfNegation },
        ["relatedness"] => Engine::Relatedness,
        ["fo-finite"] => Engine::FoFinite,
        ["explicit"] => Engine::Explicit(ExplicitConsequence { formulas: formulas.iter().cloned().collect(), rules }),
        ["uninterpreted"] => Engine::Uninterpreted,
        other => return Err(at(engine_at, format!("unknown engine `{}`", other.join(" ")))),
    };
    let signature = Signature { name: name.to_string(), connectives, constants, atom_namespace, first_order: fo };
    let logic = LogicSpec { name: name.to_string(), signature, engine, decidable, consequence_mode, notes };
    logic.validate()?;
    Ok(logic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_lenient;
    use crate::semantics::{consequence, Outcome};

    fn lines(text: &str) -> Vec<(usize, &str)> {
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty()).collect()
    }

    #[test]
    fn three_valued_matrix() {
        let text = "connectives not/1 ->/2
            engine matrix
            values 0 1/2 1
            designated 1
            table not 1 1/2 0
            table -> 1 1 1 1/2 1 1 0 1/2 1";
        let l = parse_logic("L3", &lines(text)).unwrap();
        let f = parse_lenient("(-> p (not p))").unwrap();
        let v = consequence(&l, &Default::default(), &f, 1).unwrap();
        assert!(matches!(v.outcome, Outcome::Refuted { .. }));
    }

    #[test]
    fn explicit_and_errors() {
        let text = "constants top\nengine explicit\nformulas p top\nrule => top";
        let l = parse_logic("toy", &lines(text)).unwrap();
        let Engine::Explicit(e) = &l.engine else { panic!() };
        assert_eq!(e.formulas.len(), 2);
        assert_eq!(e.rules.len(), 1);
        assert!(parse_logic("bad", &lines("engine matrix\nvalues 0\ndesignated 2")).is_err());
        assert!(parse_logic("bad", &lines("engine kripke nope")).is_err());
        assert!(parse_logic("bad", &lines("connectives box/1\nengine relatedness")).is_err());
    }

    #[test]
    fn formula_lists() {
        let fs = split_formulas("p (and p q)  d{p,q} top").unwrap();
        assert_eq!(fs.len(), 4);
        assert_eq!(fs[1].render(), "(and p q)");
    }
}
