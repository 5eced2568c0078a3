use std::sync::Arc;
use std::time::Instant;

use proptest::prelude::*;
use qhw_invariants::*;
use qhw_linalg::Field;
use qhw_quiver::{parse_quiver, Quiver};

fn corpus(name: &str) -> Quiver {
    let text = match name {
        "loop" => include_str!("../../../corpus/loop.quiver"),
        "rose2" => include_str!("../../../corpus/rose2.quiver"),
        "c2" => include_str!("../../../corpus/c2.quiver"),
        "c2_relabeled" => include_str!("../../../corpus/c2_relabeled.quiver"),
        "c3" => include_str!("../../../corpus/c3.quiver"),
        "c4" => include_str!("../../../corpus/c4.quiver"),
        "full2" => include_str!("../../../corpus/full2.quiver"),
        _ => unreachable!(),
    };
    parse_quiver(text).unwrap()
}

const SINK_FREE: [&str; 6] = ["loop", "rose2", "c2", "c3", "c4", "full2"];

#[test]
fn transitions_are_transposed_adjacency() {
    let r2 = k0gr_stages(&corpus("rose2"), 3).unwrap();
    assert_eq!(r2[0].transition, qhw_linalg::IntMatrix::from_i64(&[vec![2]]));
    assert_eq!(r2[2].unit_class, vec![Int(8.into())]);
    let c2 = k0gr_stages(&corpus("c2"), 1).unwrap();
    let swap = qhw_linalg::IntMatrix::from_i64(&[vec![0, 1], vec![1, 0]]);
    assert_eq!((c2[0].transition.clone(), c2[0].shift.clone()), (swap.clone(), swap));
    for name in SINK_FREE {
        for s in k0gr_stages(&corpus(name), 6).unwrap() {
            assert!(s.shift_commutes() && s.transition.is_nonnegative(), "{name}");
        }
    }
}

#[test]
fn loop_and_rose_differ_at_stage_one() {
    let c = compare_quivers(&corpus("loop"), &corpus("rose2"), 6).unwrap();
    assert_eq!(c.verdict, Verdict::Distinguished { stage: 1 });
    let [a, b] = &c.stages[0].data;
    assert!(a.smith.is_empty());
    assert_eq!(b.smith, vec![Int(2.into())]);
}

#[test]
fn cycles_differ_by_rank() {
    let c = compare_quivers(&corpus("c2"), &corpus("c3"), 6).unwrap();
    assert_eq!(c.verdict, Verdict::Distinguished { stage: 1 });
    assert!(c.stages[0].differences.iter().any(|d| d == "rank 2 vs 3"));
}

#[test]
fn cycle_shift_orders() {
    for (n, name) in [(1, "loop"), (2, "c2"), (3, "c3"), (4, "c4")] {
        for s in k0gr_stages(&corpus(name), 6).unwrap() {
            assert_eq!(s.shift_order(), Some(n), "{name} stage {}", s.stage);
            assert_eq!(s.shift.pow(n as u32), qhw_linalg::IntMatrix::identity(n as usize));
        }
    }
}

#[test]
fn relabeled_copies_are_not_distinguished() {
    let c = compare_quivers(&corpus("c2"), &corpus("c2_relabeled"), 6).unwrap();
    assert_eq!(c.verdict, Verdict::NotDistinguished { up_to: 6 });
    let c = compare_quivers(&corpus("c3"), &corpus("c3"), 6).unwrap();
    assert!(c.stages.iter().all(|s| s.matched));
}

#[test]
fn out_split_rose_is_not_distinguished() {
    let c = compare_quivers(&corpus("rose2"), &corpus("full2"), 6).unwrap();
    assert!(!c.verdict.is_distinguished());
    assert_ne!(c.stages[0].data[0].smith, c.stages[0].data[1].smith);
}

#[test]
fn verdicts_are_monotone_in_depth() {
    for a in SINK_FREE {
        for b in SINK_FREE {
            let deep = compare_quivers(&corpus(a), &corpus(b), 6).unwrap();
            for m in 1..6 {
                let shallow = compare_quivers(&corpus(a), &corpus(b), m).unwrap();
                if shallow.verdict.is_distinguished() {
                    assert_eq!(shallow.verdict, deep.verdict, "{a} {b}");
                }
                assert_eq!(&deep.stages[..m], &shallow.stages[..], "{a} {b}");
            }
            let later = deep.stages.iter().skip_while(|s| s.matched);
            assert!(later.clone().all(|s| !s.matched));
        }
    }
}

#[test]
fn comparisons_are_symmetric_in_verdict() {
    for a in SINK_FREE {
        for b in SINK_FREE {
            let x = compare_quivers(&corpus(a), &corpus(b), 6).unwrap().verdict;
            let y = compare_quivers(&corpus(b), &corpus(a), 6).unwrap().verdict;
            assert_eq!(x, y, "{a} {b}");
            if a == b {
                assert!(!x.is_distinguished());
            }
        }
    }
}

#[test]
fn lattices_match_stage_algebras_and_shift_model() {
    for name in SINK_FREE {
        let depth = if name == "rose2" || name == "full2" { 2 } else { 3 };
        let cv = cross_validate(&Arc::new(corpus(name)), depth, Field::Rational).unwrap();
        assert!(cv.pass(), "{name}: {cv:?}");
        let cycle = matches!(name, "loop" | "c2" | "c3" | "c4");
        assert_eq!(cv.shift.is_some(), cycle, "{name}");
    }
}

#[test]
fn report_contents() {
    let r = equivalence_report(["loop", "rose2"], &corpus("loop"), &corpus("rose2"), 6).unwrap();
    assert!(r.conditions_ruled_out && r.conditions.len() == 6);
    assert!(r.reasons.iter().any(|s| s.starts_with("stage 1:")));
    let text = r.to_text();
    assert!(text.contains("verdict: distinguished") && text.contains("Z/2"));
    let same = equivalence_report(["c3", "c3"], &corpus("c3"), &corpus("c3"), 4).unwrap();
    assert_eq!(same.verdict.to_string(), "not-distinguished-up-to-stage-4");
    assert!(same.caveat.contains("inconclusive"));
    let json = serde_json::to_value(&r).unwrap();
    for key in ["quivers", "depth", "stages", "verdict"] {
        assert!(json.get(key).is_some(), "{key}");
    }
    assert_eq!(json["stages"][0]["data"][1]["smith"], serde_json::json!([2]));
}

#[test]
fn corpus_comparisons_are_fast() {
    let start = Instant::now();
    for a in SINK_FREE {
        for b in SINK_FREE {
            equivalence_report([a, b], &corpus(a), &corpus(b), 6).unwrap();
        }
    }
    assert!(start.elapsed().as_secs_f64() < 5.0);
}

#[test]
fn sinks_are_rejected() {
    let line = corpus_line();
    assert!(matches!(compare_quivers(&line, &corpus("c2"), 2), Err(InvariantsError::HasSink(_))));
}

fn corpus_line() -> Quiver {
    parse_quiver(include_str!("../../../corpus/path12.quiver")).unwrap()
}

fn arbitrary_quiver() -> impl Strategy<Value = (Quiver, Vec<usize>)> {
    (2usize..5)
        .prop_flat_map(|n| {
            let arrows = proptest::collection::vec((0..n, 0..n), 0..6);
            let sigma = Just((0..n).collect::<Vec<_>>()).prop_shuffle();
            (Just(n), arrows, sigma)
        })
        .prop_map(|(n, extra, sigma)| {
            // a cycle through every vertex keeps the quiver sink-free
            let mut arrows: Vec<(usize, usize)> = (0..n).map(|v| (v, (v + 1) % n)).collect();
            arrows.extend(extra);
            let names: Vec<String> = (0..n).map(|v| format!("v{v}")).collect();
            let arrows = arrows
                .iter()
                .enumerate()
                .map(|(k, (s, t))| (format!("a{k}"), names[*s].clone(), names[*t].clone()))
                .collect();
            (Quiver::new(names, arrows).unwrap(), sigma)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relabeling_conjugates_the_stages((q, sigma) in arbitrary_quiver()) {
        let p = q.permute_vertices(&sigma);
        let (a, b) = (k0gr_stages(&q, 4).unwrap(), k0gr_stages(&p, 4).unwrap());
        for (x, y) in a.iter().zip(&b) {
            prop_assert_eq!(x.transition.permute(&sigma), y.transition.clone());
            prop_assert_eq!(x.shift.permute(&sigma), y.shift.clone());
            prop_assert_eq!(x.smith(), y.smith());
        }
        prop_assert!(!compare_quivers(&q, &p, 4).unwrap().verdict.is_distinguished());
    }

    #[test]
    fn shift_commutes_with_transitions((q, _) in arbitrary_quiver()) {
        for s in k0gr_stages(&q, 3).unwrap() {
            prop_assert!(s.shift_commutes());
        }
    }
}
