//! Each check must be able to fail: feed it damaged data and expect violations.

use owc_core::collection::{Bounds, Collection};
use owc_core::contraction::{check_contraction, Contraction};
use owc_core::interleave::{check_morphism, induced_morphism, initial_owc, OwcState};
use owc_core::operad::{free_operad_dim0, free_operad_step, TerminalOperad};
use owc_core::oracle::{oracle_triples, OCell, OShape};
use owc_core::pasting::PastingDiagram;
use owc_core::verify::{operad_triangles, run_suite_with};

fn fixture(name: &str) -> serde_json::Value {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn corrupted_globset_has_one_witness() {
    let r = run_suite_with("globularity", &Bounds::default(), Some(&fixture("corrupted_globset.json"))).unwrap();
    assert!(!r.pass);
    assert_eq!(r.violations.len(), 1);
    assert_eq!(r.violations[0].kind, "ss!=st");
    let ok = run_suite_with("globularity", &Bounds::default(), Some(&fixture("globe.json"))).unwrap();
    assert!(ok.pass);
}

#[test]
fn collection_with_wrong_arity_is_refused() {
    let c = Collection::from_json(&fixture("bad_arity.json")).unwrap();
    assert!(!c.check().pass);
    assert!(run_suite_with("operad-laws", &Bounds::default(), Some(&fixture("bad_arity.json"))).is_err());
}

#[test]
fn missing_contraction_cell() {
    let t = TerminalOperad::new(2, 5);
    let mut table = Contraction::from_structure(&t, &t, 5);
    let victim = table.gamma[1].keys().min().cloned().unwrap();
    table.gamma[1].remove(&victim);
    let r = check_contraction(&t, &table, 5);
    assert_eq!(r.violations.len(), 1);
    assert_eq!(r.violations[0].kind, "totality");
}

#[test]
fn triangles_against_the_wrong_step() {
    let b = Bounds::new(1, 5, 2);
    let mut c = Collection::empty(1);
    c.push(0, 0, 0, PastingDiagram::dot());
    c.push(1, 0, 0, PastingDiagram::chain(1));
    c.push(1, 0, 0, PastingDiagram::chain(2));
    let x = free_operad_dim0(&OwcState::from_collection(&c, b).unwrap()).unwrap();
    let mx = free_operad_step(&x, 1).unwrap();
    assert!(operad_triangles(&x, &mx, 1).pass);
    // the same generators listed in the other order no longer line up with mx
    let mut swapped = Collection::empty(1);
    swapped.push(0, 0, 0, PastingDiagram::dot());
    swapped.push(1, 0, 0, PastingDiagram::chain(2));
    swapped.push(1, 0, 0, PastingDiagram::chain(1));
    let y = free_operad_dim0(&OwcState::from_collection(&swapped, b).unwrap()).unwrap();
    assert!(!operad_triangles(&y, &mx, 1).pass);
}

#[test]
fn scrambled_morphism() {
    let b = Bounds::new(2, 5, 1);
    let s = initial_owc(b).unwrap();
    let t = TerminalOperad::new(2, 5);
    let mut f = induced_morphism(&s, &t, &|_, _| None).unwrap();
    assert!(check_morphism(&s, &t, &f).pass);
    let row = &mut f.maps[1];
    let last = row.len() - 1;
    row.swap(1, last);
    assert!(!check_morphism(&s, &t, &f).pass);
}

#[test]
fn triple_filter_rejects_mismatched_pairs() {
    let cells = vec![
        OCell { src: 0, tgt: 0, arity: OShape::Chain(1) },
        OCell { src: 0, tgt: 0, arity: OShape::Chain(2) },
        OCell { src: 0, tgt: 1, arity: OShape::Chain(1) },
    ];
    let t = oracle_triples(&cells, 2, 7);
    // 0 and 1 differ in arity, 0 and 2 are not parallel
    assert!(t.iter().all(|(a, b, _)| a == b));
    assert_eq!(t.len(), 9);
}
