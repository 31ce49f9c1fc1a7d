use proptest::prelude::*;
use translogic::catalog::Catalog;
use translogic::suite::{PREORDER_EDGES, PREORDER_LOGICS};
use translogic::verify::{
    build_preorder, build_registry, default_pool, gate_expressiveness_gg, verify_conservativity, verify_theoremhood,
    verify_triviality, Bounds, GgInputs, Provenance, Registry, Status,
};

const EXTRA: &str = "
logic CPL-undecidable
  connectives not/1 and/2 or/2 ->/2
  engine matrix
  values 0 1
  designated 1
  table not 1 0
  table and 0 0 0 1
  table or 0 1 1 1
  table -> 1 1 0 1
  decidable no
end

translation Tid-trivial
  source Trivial
  target Trivial
  clause not -> (not #1)
  clause and -> (and #1 #2)
  clause or -> (or #1 #2)
  clause -> -> (-> #1 #2)
  clause <-> -> (<-> #1 #2)
end

translation Tplain
  source CPL
  target IPL
  clause not -> (not #1)
  clause and -> (and #1 #2)
  clause or -> (or #1 #2)
  clause -> -> (-> #1 #2)
  clause <-> -> (<-> #1 #2)
end

translation Tundecidable
  source CPL-undecidable
  target CPL-std
  clause not -> (not #1)
  clause and -> (and #1 #2)
  clause or -> (or #1 #2)
  clause -> -> (-> #1 #2)
end
";

fn catalog() -> Catalog {
    let mut c = Catalog::builtin();
    c.merge_text(EXTRA, "test").unwrap();
    c.validate().unwrap();
    c
}

fn small() -> Bounds {
    Bounds { max_nodes: 3, ..Bounds::default() }
}

fn preorder(edges: &[&str]) -> Registry {
    build_preorder(build_registry(&catalog(), &PREORDER_LOGICS, edges, &small()).unwrap()).unwrap()
}

/// Every composable pair of derived edges is closed or its composite was
/// rejected.
fn transitively_closed(reg: &Registry) -> Result<(), String> {
    for a in &reg.logics {
        for b in &reg.logics {
            for c in &reg.logics {
                if a == c || !reg.has(a, b) || !reg.has(b, c) {
                    continue;
                }
                let key = format!("{a}->{c}");
                if !reg.has(a, c) && !reg.rejected.contains_key(&key) {
                    return Err(format!("{a}->{b}->{c} neither derived nor rejected"));
                }
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn preorder_is_idempotent_and_closed(mask in 0u32..(1 << PREORDER_EDGES.len())) {
        let edges: Vec<&str> = PREORDER_EDGES.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| *e).collect();
        let once = preorder(&edges);
        let twice = build_preorder(once.clone()).unwrap();
        prop_assert!(once == twice);
        if let Err(e) = transitively_closed(&once) {
            prop_assert!(false, "{}", e);
        }
        for l in &once.logics {
            prop_assert_eq!(once.derived_edge(l, l).map(|d| d.provenance), Some(Provenance::Reflexive));
        }
    }
}

#[test]
fn full_preorder_is_transitively_closed() {
    transitively_closed(&preorder(&PREORDER_EDGES)).unwrap();
}

#[test]
fn triviality_is_reflected() {
    let c = catalog();
    let b = small();
    let trivial = c.logic("Trivial").unwrap();
    assert!(verify_triviality(trivial, &b).unwrap().holds());
    assert_eq!(verify_triviality(c.logic("CPL").unwrap(), &b).unwrap().status, Status::Refuted);
    // Trivial into itself is back and forth.
    let id = c.translation("Tid-trivial").unwrap();
    assert!(verify_theoremhood(trivial, trivial, id, &b).unwrap().holds());
    // CPL into the trivial logic is not: `p` becomes a theorem.
    let collapse = verify_theoremhood(c.logic("CPL").unwrap(), trivial, c.translation("Tcollapse").unwrap(), &b).unwrap();
    assert_eq!(collapse.status, Status::Refuted);
    let reg = preorder(&PREORDER_EDGES);
    for l in &reg.logics {
        let source_trivial = verify_triviality(c.logic(l).unwrap(), &b).unwrap().holds();
        assert!(source_trivial || !reg.has(l, "Trivial"), "{l}->Trivial");
    }
}

#[test]
fn refutations_survive_larger_bounds() {
    let c = catalog();
    let (cpl, ipl) = (c.logic("CPL").unwrap(), c.logic("IPL").unwrap());
    let t = c.translation("Tplain").unwrap();
    let lookup = |name: &str| c.logic(name).cloned();
    let mut previous = None;
    for size in 1..=4 {
        let b = Bounds { max_nodes: 4, max_model_size: size, ..Bounds::default() };
        let entry = verify_theoremhood(cpl, ipl, t, &b).unwrap();
        if previous == Some(Status::Refuted) {
            assert_eq!(entry.status, Status::Refuted, "size {size}");
        }
        if entry.status == Status::Refuted {
            assert!(entry.replay(&lookup, Some(4)).unwrap());
        }
        previous = Some(entry.status);
    }
    assert_eq!(previous, Some(Status::Refuted));
}

#[test]
fn gate_rejects_what_the_reports_reject() {
    let c = catalog();
    // Excluded middle needs four nodes.
    let b = Bounds { max_nodes: 4, ..Bounds::default() };
    let gg = |source: &str, target: &str, name: &str| {
        let (s, t) = (c.logic(source).unwrap(), c.logic(target).unwrap());
        let cs = c.translation(name).unwrap();
        let theoremhood = verify_theoremhood(s, t, cs, &b).unwrap();
        let conservativity = verify_conservativity(s, t, cs, &default_pool(s, &b), &b).unwrap();
        gate_expressiveness_gg(
            &GgInputs { source: s, target: t, t: cs, theoremhood: &theoremhood, conservativity: Some(&conservativity), source_dt: None },
            &b,
        )
    };
    let plain = gg("CPL", "IPL", "Tplain");
    assert_eq!(plain.status, Status::Fail);
    assert!(plain.details.iter().any(|d| d.starts_with("theoremhood")));
    let undecidable = gg("CPL-undecidable", "CPL-std", "Tundecidable");
    assert_eq!(undecidable.details, ["undecidable source, decidable target"]);
    assert_eq!(gg("CPL", "IPL", "Tc").status, Status::Pass);
}
