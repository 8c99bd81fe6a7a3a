use std::path::PathBuf;

use maymust::check::{check_instance, Verdict};
use maymust::io::parse_mmaf;
use maymust::semantics::{maximally_proper_semantics, Engine, Search};
use maymust::{solve, Framework, Label, Labelling, SemanticsName};

fn fixture(name: &str) -> Framework {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    parse_mmaf(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn example1_passes_every_check() {
    let r = check_instance(&fixture("example1.mmaf")).unwrap();
    assert!(r.passed(), "{r}");
    assert!(r.reproducer.is_none());
    assert_eq!(r.instance.arguments, 5);
    assert_eq!(r.instance.attacks, 4);
}

#[test]
fn example6_passes_and_records_disjointness() {
    let r = check_instance(&fixture("example6.mmaf")).unwrap();
    assert!(r.passed(), "{r}");
    assert!(r.notes.iter().any(|n| n == "exact ∩ adf.complete = ∅"), "{r}");
}

#[test]
fn example2_passes_with_empty_exact() {
    let f = fixture("example2.mmaf");
    let r = check_instance(&f).unwrap();
    assert!(r.passed(), "{r}");
    assert!(r.notes.iter().any(|n| n == "exact = ∅"));
    assert_eq!(r.verdict("conservation.exact-equals-maxi"), Some(Verdict::Skipped));
    assert_eq!(
        maximally_proper_semantics(&f).unwrap().labellings,
        vec![Labelling::total([Label::Undec])]
    );
}

#[test]
fn dung_directive_fixture() {
    let f = fixture("dung_pair.mmaf");
    let r = check_instance(&f).unwrap();
    assert!(r.instance.dung);
    assert_eq!(r.verdict("dung.complete"), Some(Verdict::Pass));
    let s = solve(&f, SemanticsName::MaxiStable, Engine::Scc, Search::Pruned).unwrap();
    assert_eq!(s.len(), 2);
}

#[test]
fn example5_matches_example1() {
    assert_eq!(fixture("example5.mmaf"), fixture("example1.mmaf"));
}

#[test]
fn solve_examples() {
    let f = fixture("example1.mmaf");
    for engine in [Engine::Brute, Engine::Scc] {
        assert_eq!(solve(&f, SemanticsName::Exact, engine, Search::Pruned).unwrap().len(), 3);
    }
    let g = fixture("example2.mmaf");
    assert!(solve(&g, SemanticsName::Exact, Engine::Brute, Search::Exhaustive)
        .unwrap()
        .is_empty());
    let m = solve(&g, SemanticsName::MaxiComplete, Engine::Brute, Search::Exhaustive).unwrap();
    assert_eq!(m.labellings, vec![Labelling::total([Label::Undec])]);
}
