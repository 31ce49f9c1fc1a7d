//! Acceptance criteria, one line per criterion. Every criterion runs even
//! when an earlier one fails; the test fails at the end if any did. Runs
//! without the libtest harness so the lines are never captured.

use std::time::{Duration, Instant};

use translogic::catalog::Catalog;
use translogic::suite::{report_of, run_section_named, run_suite, Section, SECTIONS};
use translogic::verify::with_workers;

struct Criterion {
    number: usize,
    title: &'static str,
    section: &'static str,
    limit: Duration,
}

const fn criterion(number: usize, title: &'static str, section: &'static str, seconds: u64) -> Criterion {
    Criterion { number, title, section, limit: Duration::from_secs(seconds) }
}

const CRITERIA: [Criterion; 10] = [
    criterion(1, "fragment embedding into L3 preserves theoremhood", "fragment-embedding", 10),
    criterion(2, "relatedness embedding preserves truth", "relatedness", 30),
    criterion(3, "WPL encodings in both directions", "half-negation", 60),
    criterion(4, "over-generation counterexamples", "overgeneration", 120),
    criterion(5, "deduction theorems", "deduction", 60),
    criterion(6, "deduction theorem preservation", "dt-preservation", 30),
    criterion(7, "volatile conditional in toy logics", "connectives", 5),
    criterion(8, "Kripke corpus and image consistency", "kripke-corpus", 120),
    criterion(9, "standard translation correspondence", "standard-translation", 60),
    criterion(10, "verified preorder", "preorder", 120),
];

fn describe_failures(section: &Section) -> String {
    section
        .outcomes
        .iter()
        .filter(|o| !o.matched)
        .map(|o| format!("{}: expected {}, got {}", o.subject, o.expected, o.actual))
        .collect::<Vec<_>>()
        .join("; ")
}

fn main() {
    let catalog = Catalog::builtin();
    let mut failed = Vec::new();
    let mut sections = Vec::new();
    for c in &CRITERIA {
        let start = Instant::now();
        let result = with_workers(1, || run_section_named(&catalog, c.section, &[])).expect("worker pool");
        let elapsed = start.elapsed();
        let (ok, note) = match &result {
            Ok(s) if s.outcomes.is_empty() => (false, "no outcomes".to_string()),
            Ok(s) if !s.passed() => (false, describe_failures(s)),
            Ok(_) if elapsed > c.limit => (false, format!("over the {}s limit", c.limit.as_secs())),
            Ok(s) => (true, format!("{} outcomes", s.outcomes.len())),
            Err(e) => (false, e.to_string()),
        };
        println!(
            "criterion {:>2} {}: {} ({:.1}s) {}",
            c.number,
            if ok { "PASS" } else { "FAIL" },
            c.title,
            elapsed.as_secs_f64(),
            note
        );
        if !ok {
            failed.push(c.number);
        }
        if let Ok(s) = result {
            sections.push(s);
        }
    }

    // Determinism: the sections above (one worker) plus the remaining
    // ones, against a full run on two workers.
    let start = Instant::now();
    let deterministic = (|| -> Result<bool, String> {
        for name in SECTIONS.iter().skip(CRITERIA.len()) {
            sections.push(with_workers(1, || run_section_named(&catalog, name, &[])).map_err(|e| e.to_string())?.map_err(|e| e.to_string())?);
        }
        let first = report_of("full", &[], sections).to_json(false);
        let second = with_workers(2, || run_suite(&catalog, "full", &[])).map_err(|e| e.to_string())?.map_err(|e| e.to_string())?;
        Ok(first == second.to_json(false))
    })();
    let (ok, note) = match deterministic {
        Ok(true) => (true, "byte-identical reports".to_string()),
        Ok(false) => (false, "reports differ".to_string()),
        Err(e) => (false, e),
    };
    println!(
        "criterion 11 {}: reports independent of worker count ({:.1}s) {}",
        if ok { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64(),
        note
    );
    if !ok {
        failed.push(11);
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
