//! Text format for clause systems.
//!
//! ```text
//! translation Tg
//!   source IPL
//!   target S4
//!   translator g
//!     atom (box #1)
//!     clause not -> (box (not #1))
//!     clause -> -> (box (-> #1 #2))
//! end
//! ```
//!
//! Clause annotations follow `;`: `#i via <translator> <operand> [shift]`,
//! `#i idx <base> <operand>…` and `range <operand> atom`. Without
//! annotations placeholder `#i` translates operand `i` with the enclosing
//! translator. Composite keys join symbols with `+` (`not+box`). Atom
//! clauses: `atom identity`, `atom idx <base>`, `atom pred` or a template
//! over `#1`. System lines: `source`, `target`, `main`, `context <tokens>`,
//! `model-map-dependency`, `opaque double-negation|idx <base>|const <f>|table`
//! and `map <f> => <g>` table rows.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::{AtomClause, ClauseSystem, ContextFamily, OpaqueRule, OperandRange, PlanItem, Translator};
use crate::formula::{parse_lenient, Template};
use crate::{Error, Result};

fn at(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("line {line}: {msg}"))
}

/// Parse the body of a `translation <name> … end` block.
pub fn parse_translation(name: &str, lines: &[(usize, &str)]) -> Result<ClauseSystem> {
    let mut cs = ClauseSystem::new(name, "", "");
    cs.translators.clear();
    let mut main: Option<String> = None;
    let mut current: Option<String> = None;
    let mut table = BTreeMap::new();
    for &(n, line) in lines {
        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match head {
            "source" => cs.source = rest.to_string(),
            "target" => cs.target = rest.to_string(),
            "main" => main = Some(rest.to_string()),
            "context" => cs.context = Some(ContextFamily { tokens: rest.split_whitespace().map(str::to_string).collect() }),
            "model-map-dependency" => cs.model_map_dependency = true,
            "opaque" => {
                let (kind, arg) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                cs.opaque = Some(match kind {
                    "double-negation" => OpaqueRule::DoubleNegation,
                    "idx" => OpaqueRule::IndexedWhole { base: arg.trim().to_string() },
                    "const" => OpaqueRule::Constant { formula: parse_lenient(arg.trim()).map_err(|e| at(n, e))? },
                    "table" => OpaqueRule::Table { entries: BTreeMap::new() },
                    other => return Err(at(n, format!("unknown opaque rule `{other}`"))),
                });
            }
            "map" => {
                let (lhs, rhs) = rest.split_once("=>").ok_or_else(|| at(n, "map needs `=>`"))?;
                let lhs = parse_lenient(lhs.trim()).map_err(|e| at(n, e))?;
                let rhs = parse_lenient(rhs.trim()).map_err(|e| at(n, e))?;
                table.insert(lhs, rhs);
            }
            "translator" => {
                cs.translators.insert(rest.to_string(), Translator { atom: AtomClause::Identity, clauses: Vec::new() });
                main.get_or_insert_with(|| rest.to_string());
                current = Some(rest.to_string());
            }
            "atom" | "clause" => {
                let tr_name = match &current {
                    Some(t) => t.clone(),
                    None => {
                        cs.translators.insert("main".into(), Translator { atom: AtomClause::Identity, clauses: Vec::new() });
                        main.get_or_insert_with(|| "main".to_string());
                        current = Some("main".into());
                        "main".to_string()
                    }
                };
                if head == "atom" {
                    let atom = parse_atom(rest).map_err(|e| at(n, e))?;
                    cs.translators.get_mut(&tr_name).expect("translator exists").atom = atom;
                } else {
                    parse_clause(&mut cs, &tr_name, rest).map_err(|e| at(n, e))?;
                }
            }
            other => return Err(at(n, format!("unknown translation field `{other}`"))),
        }
    }
    if let Some(OpaqueRule::Table { entries }) = &mut cs.opaque {
        *entries = table;
    } else if !table.is_empty() {
        return Err(Error::Config(format!("translation `{name}` has map rows without `opaque table`")));
    }
    if cs.source.is_empty() || cs.target.is_empty() {
        return Err(Error::Config(format!("translation `{name}` needs source and target")));
    }
    if cs.opaque.is_none() {
        cs.main = main.ok_or_else(|| Error::Config(format!("translation `{name}` has no clauses")))?;
    } else {
        cs.main = main.unwrap_or_else(|| "main".into());
    }
    cs.validate()?;
    Ok(cs)
}

fn parse_atom(rest: &str) -> Result<AtomClause> {
    let words: Vec<&str> = rest.split_whitespace().collect();
    Ok(match words.as_slice() {
        ["identity"] => AtomClause::Identity,
        ["pred"] => AtomClause::Predicate,
        ["idx", base] => AtomClause::Indexed { base: base.to_string() },
        _ => AtomClause::Template { template: Template::new(Template::parse(rest, None)?.body, 1)? },
    })
}

fn parse_clause(cs: &mut ClauseSystem, translator: &str, rest: &str) -> Result<()> {
    let mut parts = rest.split(';');
    let head = parts.next().unwrap_or("").trim();
    let (key, tail) = head.split_once(char::is_whitespace).ok_or_else(|| Error::Config("clause needs a key".into()))?;
    let template_text =
        tail.trim().strip_prefix("->").ok_or_else(|| Error::Config(format!("expected `->` after key `{key}`")))?.trim();
    let template = Template::parse(template_text, None)?;
    let key: Vec<&str> = key.split('+').collect();
    let mut plan: Vec<Option<PlanItem>> = vec![None; template.arity];
    let mut ranges = Vec::new();
    for part in parts {
        let words: Vec<&str> = part.split_whitespace().collect();
        match words.as_slice() {
            ["range", k, "atom"] => {
                let k: usize = k.parse().map_err(|_| Error::Config(format!("bad operand `{k}`")))?;
                if ranges.len() < k {
                    ranges.resize(k, OperandRange::Any);
                }
                ranges[k - 1] = OperandRange::AtomOnly;
            }
            [slot, kind, args @ ..] => {
                let i: usize = slot
                    .strip_prefix('#')
                    .and_then(|s| s.parse().ok())
                    .filter(|&i| i >= 1 && i <= template.arity)
                    .ok_or_else(|| Error::Config(format!("bad placeholder `{slot}`")))?;
                let num = |s: &str| s.parse::<usize>().map_err(|_| Error::Config(format!("bad operand `{s}`")));
                plan[i - 1] = Some(match (*kind, args) {
                    ("via", [t, k]) => PlanItem::Via { translator: t.to_string(), operand: num(k)?, shift: false },
                    ("via", [t, k, "shift"]) => PlanItem::Via { translator: t.to_string(), operand: num(k)?, shift: true },
                    ("idx", [base, ops @ ..]) if !ops.is_empty() => PlanItem::Index {
                        base: base.to_string(),
                        operands: ops.iter().map(|o| num(o)).collect::<Result<Vec<_>>>()?,
                    },
                    _ => return Err(Error::Config(format!("bad annotation `{}`", part.trim()))),
                });
            }
            [] => {}
            _ => return Err(Error::Config(format!("bad annotation `{}`", part.trim()))),
        }
    }
    let plan = plan
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.unwrap_or(PlanItem::Via { translator: translator.to_string(), operand: i + 1, shift: false }))
        .collect();
    cs.add_clause(translator, &key, template, Some(plan))?;
    let tr = cs.translators.get_mut(translator).expect("translator exists");
    let added = tr.clauses.iter_mut().rev().find(|c| c.key == key).expect("clause just added");
    added.ranges = ranges;
    Ok(())
}

/// Render a clause system in the text format (round-trips through
/// [`parse_translation`]).
pub fn render_translation(cs: &ClauseSystem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "translation {}", cs.name);
    let _ = writeln!(out, "  source {}", cs.source);
    let _ = writeln!(out, "  target {}", cs.target);
    if let Some(ctx) = &cs.context {
        let _ = writeln!(out, "  context {}", ctx.tokens.join(" "));
    }
    if cs.model_map_dependency {
        let _ = writeln!(out, "  model-map-dependency");
    }
    match &cs.opaque {
        Some(OpaqueRule::DoubleNegation) => {
            let _ = writeln!(out, "  opaque double-negation");
        }
        Some(OpaqueRule::IndexedWhole { base }) => {
            let _ = writeln!(out, "  opaque idx {base}");
        }
        Some(OpaqueRule::Constant { formula }) => {
            let _ = writeln!(out, "  opaque const {formula}");
        }
        Some(OpaqueRule::Table { entries }) => {
            let _ = writeln!(out, "  opaque table");
            for (k, v) in entries {
                let _ = writeln!(out, "  map {k} => {v}");
            }
        }
        None => {}
    }
    if cs.opaque.is_none() {
        let _ = writeln!(out, "  main {}", cs.main);
        for (name, tr) in &cs.translators {
            let _ = writeln!(out, "  translator {name}");
            let atom = match &tr.atom {
                AtomClause::Identity => "identity".to_string(),
                AtomClause::Predicate => "pred".to_string(),
                AtomClause::Indexed { base } => format!("idx {base}"),
                AtomClause::Template { template } => template.render(),
            };
            let _ = writeln!(out, "    atom {atom}");
            for c in &tr.clauses {
                let mut line = format!("    clause {} -> {}", c.key_text(), c.template.render());
                for (i, item) in c.plan.iter().enumerate() {
                    match item {
                        PlanItem::Via { translator, operand, shift } => {
                            let _ = write!(line, " ; #{} via {translator} {operand}{}", i + 1, if *shift { " shift" } else { "" });
                        }
                        PlanItem::Index { base, operands } => {
                            let ops: Vec<String> = operands.iter().map(|o| o.to_string()).collect();
                            let _ = write!(line, " ; #{} idx {base} {}", i + 1, ops.join(" "));
                        }
                    }
                }
                for (k, r) in c.ranges.iter().enumerate() {
                    if *r == OperandRange::AtomOnly {
                        let _ = write!(line, " ; range {} atom", k + 1);
                    }
                }
                let _ = writeln!(out, "{line}");
            }
        }
    }
    out.push_str("end\n");
    out
}
