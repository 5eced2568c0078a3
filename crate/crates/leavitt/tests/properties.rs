use std::sync::Arc;

use proptest::prelude::*;
use qhw_leavitt::{
    check_local_confluence, graded_basis, stage_algebra, verify_inverting, verify_iota_injective,
    verify_strongly_graded, DecompositionMethod, LeavittElement, LeavittMonomial, MonomialIndex, RewriteSystem,
    Word,
};
use qhw_linalg::{Echelon, Field};
use qhw_pathalg::PathElement;
use qhw_quiver::{parse_quiver, Quiver};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CORPUS: [(&str, &str); 7] = [
    ("loop", include_str!("../../../corpus/loop.quiver")),
    ("rose2", include_str!("../../../corpus/rose2.quiver")),
    ("c2", include_str!("../../../corpus/c2.quiver")),
    ("c3", include_str!("../../../corpus/c3.quiver")),
    ("c4", include_str!("../../../corpus/c4.quiver")),
    ("full2", include_str!("../../../corpus/full2.quiver")),
    ("path12", include_str!("../../../corpus/path12.quiver")),
];

fn corpus() -> Vec<(&'static str, Arc<Quiver>)> {
    CORPUS.iter().map(|(n, t)| (*n, Arc::new(parse_quiver(t).unwrap()))).collect()
}

fn quiver(name: &str) -> Arc<Quiver> {
    corpus().into_iter().find(|(n, _)| *n == name).unwrap().1
}

#[test]
fn critical_pairs_resolve_up_to_length_six() {
    for (name, q) in corpus() {
        let rs = RewriteSystem::new(&q);
        let r = check_local_confluence(&rs, 6, Field::Rational);
        assert!(r.all_resolved, "{name}: {:?}", r.unresolved_words);
        assert_eq!(r.resolved_pairs(), r.critical_pairs.len());
    }
}

/// Random rewriting orders, leftmost rewriting and the monomial product all agree.
#[test]
fn normal_forms_are_order_independent() {
    let f = Field::Rational;
    for (name, q) in corpus() {
        let rs = RewriteSystem::new(&q);
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for k in 0..1000 {
            let w = rs.random_word(1 + k % 9, &mut rng);
            let leftmost = rs.normalize(&w, f);
            let random = rs.normalize_random(&w, f, &mut rng);
            assert_eq!(leftmost, random, "{name}: {}", rs.format_word(&w));
            let direct = LeavittElement::from_word(q.clone(), f, w.vertex, &w.letters);
            assert_eq!(leftmost, direct, "{name}: {}", rs.format_word(&w));
        }
    }
}

#[test]
fn non_composable_words_normalize_to_zero() {
    let q = quiver("c2");
    let rs = RewriteSystem::new(&q);
    let a = qhw_quiver::Letter::Real(0);
    let w = Word {
        letters: vec![a, a],
        vertex: 0,
    };
    assert!(rs.normalize(&w, Field::Rational).is_zero());
}

/// Normal monomials are linearly independent images of their own words,
/// checked against the word-level rewriting.
#[test]
fn graded_bases_are_normal_words() {
    let f = Field::Rational;
    for (name, q) in corpus() {
        let rs = RewriteSystem::new(&q);
        for n in -2..=2 {
            let basis = graded_basis(&q, n, 4);
            let mut sorted = basis.clone();
            sorted.sort();
            assert_eq!(sorted, basis);
            for m in &basis {
                let w = rs.word(m.word(), m.source());
                let nf = rs.normalize(&w, f);
                assert_eq!(nf.terms().len(), 1, "{name}");
                assert_eq!(nf.coefficient(m), f.one());
                assert_eq!(m.degree(), n);
            }
        }
    }
}

#[test]
fn graded_basis_counts() {
    assert_eq!(graded_basis(&quiver("loop"), 0, 4).len(), 1);
    assert_eq!(graded_basis(&quiver("rose2"), 0, 2).len(), 4);
    assert_eq!(graded_basis(&quiver("c2"), 1, 3).len(), 2);
}

#[test]
fn stage_dimensions_and_blocks() {
    let f = Field::Rational;
    for m in 0..=3usize {
        let s = stage_algebra(&quiver("loop"), m, f).unwrap();
        assert_eq!((s.dim(), s.block_sizes()), (1, vec![1]));
        let s = stage_algebra(&quiver("rose2"), m, f).unwrap();
        assert_eq!(s.dim(), 4usize.pow(m as u32));
        assert_eq!(s.block_sizes(), vec![2usize.pow(m as u32)]);
        assert_eq!(s.method(), DecompositionMethod::MatrixUnits);
        for (name, n) in [("c2", 2), ("c3", 3), ("c4", 4)] {
            let s = stage_algebra(&quiver(name), m, f).unwrap();
            assert_eq!(s.dim(), n);
            assert_eq!(s.block_sizes(), vec![1; n]);
            assert_eq!(s.method(), DecompositionMethod::MatrixUnits);
        }
    }
}

/// Associative, unital, and included unitally into the next stage.
#[test]
fn stages_form_a_direct_system() {
    let f = Field::Rational;
    for (name, q) in corpus() {
        let stages: Vec<_> = (0..=2).map(|m| stage_algebra(&q, m, f).unwrap()).collect();
        for w in stages.windows(2) {
            w[0].algebra().validate().unwrap();
            assert!(w[0].embedding_is_algebra_map(&w[1]), "{name}");
        }
    }
}

#[test]
fn strong_grading_at_small_stages() {
    let f = Field::Rational;
    for (name, q) in corpus() {
        if q.has_sinks() {
            assert!(verify_strongly_graded(&q, 1, f).is_err());
            continue;
        }
        for m in 0..=3 {
            let r = verify_strongly_graded(&q, m, f).unwrap();
            assert!(r.pass, "{name} at stage {m}: {r:?}");
        }
    }
}

#[test]
fn inverses_at_every_vertex() {
    for (name, q) in corpus() {
        let r = verify_inverting(&q, Field::Rational);
        assert!(r.pass, "{name}");
        let sinks = (0..q.vertex_count()).filter(|&v| q.is_sink(v)).count();
        let sources = (0..q.vertex_count()).filter(|&v| q.is_source(v)).count();
        assert_eq!(r.iota.len(), q.vertex_count() - sinks);
        assert_eq!(r.kappa.len(), q.vertex_count() - sources);
    }
}

#[test]
fn iota_is_injective() {
    let f = Field::Rational;
    for (name, q) in corpus() {
        let r = verify_iota_injective(&q, 4, f);
        let count: usize = (0..=4).map(|l| q.path_count(l)).sum();
        assert!(r.pass, "{name}");
        assert_eq!(r.rank, count);
    }
}

fn corpus_index() -> impl Strategy<Value = usize> {
    0..CORPUS.len()
}

/// A random element of total length at most 4 over the given quiver.
fn element(q: &Arc<Quiver>, coeffs: &[i64]) -> LeavittElement {
    let f = Field::Rational;
    let basis: Vec<LeavittMonomial> = (-2..=2).flat_map(|n| graded_basis(q, n, 4)).collect();
    let mut x = LeavittElement::zero(q.clone(), f);
    for (k, c) in coeffs.iter().enumerate() {
        if *c != 0 {
            x.add_term(basis[(k * 7) % basis.len()].clone(), &f.from_i64(*c));
        }
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalize_is_idempotent(i in corpus_index(), seed in any::<u64>(), len in 0usize..9) {
        let q = corpus()[i].1.clone();
        let rs = RewriteSystem::new(&q);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = rs.random_word(len, &mut rng);
        let nf = rs.normalize(&w, Field::Rational);
        let mut again = LeavittElement::zero(q.clone(), Field::Rational);
        for (m, c) in nf.terms() {
            let x = rs.normalize(&rs.word(m.word(), m.source()), Field::Rational);
            again = again.add(&x.scale(c)).unwrap();
        }
        prop_assert_eq!(again, nf);
    }

    #[test]
    fn normalize_preserves_degree(i in corpus_index(), seed in any::<u64>(), len in 0usize..9) {
        let q = corpus()[i].1.clone();
        let rs = RewriteSystem::new(&q);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = rs.random_word(len, &mut rng);
        let d: i64 = w.letters.iter().map(|l| l.degree()).sum();
        let nf = rs.normalize(&w, Field::Rational);
        prop_assert!(nf.degrees().iter().all(|&e| e == d));
    }

    #[test]
    fn products_are_graded(i in corpus_index(), a in prop::collection::vec(-3i64..4, 1..6), b in prop::collection::vec(-3i64..4, 1..6)) {
        let q = corpus()[i].1.clone();
        let (x, y) = (element(&q, &a), element(&q, &b));
        let xy = x.multiply(&y).unwrap();
        for n in xy.degrees() {
            let mut expected = LeavittElement::zero(q.clone(), Field::Rational);
            for d in x.degrees() {
                expected = expected.add(&x.component(d).multiply(&y.component(n - d)).unwrap()).unwrap();
            }
            prop_assert_eq!(xy.component(n), expected);
        }
    }

    #[test]
    fn involution_is_an_anti_automorphism(i in corpus_index(), a in prop::collection::vec(-3i64..4, 1..6), b in prop::collection::vec(-3i64..4, 1..6)) {
        let q = corpus()[i].1.clone();
        let (x, y) = (element(&q, &a), element(&q, &b));
        prop_assert_eq!(x.involution().involution(), x.clone());
        let lhs = x.multiply(&y).unwrap().involution();
        let rhs = y.involution().multiply(&x.involution()).unwrap();
        prop_assert_eq!(lhs, rhs);
        for d in x.degrees() {
            prop_assert_eq!(x.component(d).involution(), x.involution().component(-d));
        }
    }

    #[test]
    fn multiplication_is_associative(i in corpus_index(), a in prop::collection::vec(-3i64..4, 1..5), b in prop::collection::vec(-3i64..4, 1..5), c in prop::collection::vec(-3i64..4, 1..5)) {
        let q = corpus()[i].1.clone();
        let (x, y, z) = (element(&q, &a), element(&q, &b), element(&q, &c));
        let lhs = x.multiply(&y).unwrap().multiply(&z).unwrap();
        let rhs = x.multiply(&y.multiply(&z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn iota_respects_grading_and_products(i in corpus_index(), l1 in 0usize..4, l2 in 0usize..4, k1 in any::<usize>(), k2 in any::<usize>()) {
        let q = corpus()[i].1.clone();
        let f = Field::Rational;
        let (p1s, p2s) = (q.enumerate_paths(l1), q.enumerate_paths(l2));
        prop_assume!(!p1s.is_empty() && !p2s.is_empty());
        let x = PathElement::from_path(q.clone(), f, p1s[k1 % p1s.len()].clone());
        let y = PathElement::from_path(q.clone(), f, p2s[k2 % p2s.len()].clone());
        let lhs = LeavittElement::iota(&x.multiply(&y).unwrap());
        let rhs = LeavittElement::iota(&x).multiply(&LeavittElement::iota(&y)).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert!(lhs.degrees().iter().all(|&d| d == (l1 + l2) as i64));
    }
}

/// Stage bases are linearly independent inside the next stage.
#[test]
fn stage_bases_embed() {
    let f = Field::Rational;
    let q = quiver("full2");
    let s1 = stage_algebra(&q, 1, f).unwrap();
    let s2 = stage_algebra(&q, 2, f).unwrap();
    let idx = MonomialIndex::new(s2.basis().to_vec());
    let mut e = Echelon::new(f, idx.len());
    for b in s1.basis() {
        let x = LeavittElement::from_monomial(q.clone(), f, b.clone());
        assert!(e.insert(idx.coordinates(&x).unwrap()));
    }
}
