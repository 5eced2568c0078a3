use std::sync::Arc;

use proptest::prelude::*;
use qhw_linalg::Field;
use qhw_pathalg::{build_rs0, eta_map, graded_hom_ext, verify_exact_window, xi_map, GradedRep, PathElement};
use qhw_quiver::{Path, Quiver};

fn small_quiver() -> impl Strategy<Value = Quiver> {
    (1usize..=3).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..=4).prop_map(move |arrows| {
            let vertices = (1..=n).map(|i| i.to_string()).collect();
            let arrows = arrows
                .into_iter()
                .enumerate()
                .map(|(k, (s, t))| (format!("x{k}"), (s + 1).to_string(), (t + 1).to_string()))
                .collect();
            Quiver::new(vertices, arrows).unwrap()
        })
    })
}

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(Field::prime(3).unwrap())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eta_cokernel_matches_path_count(q in small_quiver(), f in field()) {
        let q = Arc::new(q);
        for i in 0..q.vertex_count() {
            let Ok(eta) = eta_map(&q, i, f) else {
                prop_assert!(q.is_sink(i));
                continue;
            };
            let rep = verify_exact_window(&[eta], 0, 4).unwrap();
            prop_assert!(rep.all_exact());
            for (n, d) in rep.cokernel_dims().into_iter().enumerate() {
                let here = q.paths_ending_at(n);
                let mut expected: usize = q.arrows_from(i).iter().map(|&a| here[q.arrow(a).target]).sum();
                if n > 0 {
                    expected -= q.paths_ending_at(n - 1)[i];
                }
                prop_assert_eq!(d, expected);
            }
        }
    }

    #[test]
    fn xi_cokernel_is_simple(q in small_quiver(), f in field()) {
        let q = Arc::new(q);
        for i in 0..q.vertex_count() {
            let rep = verify_exact_window(&[xi_map(&q, i, f)], 0, 4).unwrap();
            prop_assert!(rep.all_exact());
            prop_assert_eq!(rep.cokernel_dims(), vec![1, 0, 0, 0, 0]);
        }
    }

    #[test]
    fn ext_between_simples_counts_arrows(q in small_quiver()) {
        let q = Arc::new(q);
        let adj = q.adjacency_matrix();
        for i in 0..q.vertex_count() {
            let xi = xi_map(&q, i, Field::Rational);
            for j in 0..q.vertex_count() {
                let g = GradedRep::simple(q.clone(), Field::Rational, j, -2, 2);
                let he = graded_hom_ext(&xi, &g, -1).unwrap();
                prop_assert_eq!(he.hom, 0);
                prop_assert_eq!(he.ext1 as i64, adj.get(i, j).try_into().unwrap());
                let he = graded_hom_ext(&xi, &g, 0).unwrap();
                prop_assert_eq!((he.hom, he.ext1), (usize::from(i == j), 0));
            }
        }
    }

    #[test]
    fn duality_cross_check(q in small_quiver()) {
        let q = Arc::new(q);
        let op = Arc::new(q.opposite());
        for i in 0..q.vertex_count() {
            if let Ok(eta) = eta_map(&q, i, Field::Rational) {
                prop_assert_eq!(xi_map(&op, i, Field::Rational).transpose_dual(), eta.shift(1));
            }
        }
    }

    #[test]
    fn rs0_structure(q in small_quiver()) {
        let a = build_rs0(&q, Field::Rational);
        prop_assert_eq!(a.algebra.dim(), q.vertex_count() + q.arrow_count());
        prop_assert!(a.algebra.validate().is_ok());
        prop_assert!(a.radical_square_is_zero());
        for i in 0..q.vertex_count() {
            prop_assert_eq!(a.projectives[i].dim(), 1 + q.arrows_from(i).len());
            prop_assert!(a.projectives[i].validate(&a.algebra).is_ok());
            prop_assert!(a.injectives[i].validate(&a.algebra).is_ok());
        }
    }

    #[test]
    fn degree_is_additive(q in small_quiver(), i in 0usize..3, j in 0usize..3) {
        let q = Arc::new(q);
        let f = Field::Rational;
        let p1: Vec<Path> = q.enumerate_paths(i);
        let p2: Vec<Path> = q.enumerate_paths(j);
        for x in p1.iter().take(4) {
            for y in p2.iter().take(4) {
                let a = PathElement::from_path(q.clone(), f, x.clone());
                let b = PathElement::from_path(q.clone(), f, y.clone());
                let c = a.multiply(&b).unwrap();
                prop_assert!(c.is_zero() || c.degree() == Some(i + j));
                prop_assert_eq!(c.is_zero(), x.source() != y.target());
            }
        }
    }
}

#[test]
fn multiplication_examples() {
    let r2 = Arc::new(qhw_quiver::parse_quiver("vertices: v\narrows: a: v -> v, b: v -> v").unwrap());
    let f = Field::Rational;
    let a = PathElement::parse(r2.clone(), f, "a").unwrap();
    let e = PathElement::parse(r2.clone(), f, "e").unwrap();
    assert_eq!(e.multiply(&a).unwrap(), a);
    assert_eq!(a.multiply(&a).unwrap().to_string(), "a.a");
    let x = PathElement::parse(r2.clone(), f, "2*a.b - 3/2*b + a").unwrap();
    assert_eq!(x.to_string(), "a - 3/2*b + 2*a.b");
    assert_eq!(PathElement::parse(r2.clone(), f, &x.to_string()).unwrap(), x);

    let a2 = Arc::new(qhw_quiver::parse_quiver("vertices: 1 2\narrows: a: 1 -> 2").unwrap());
    let a = PathElement::parse(a2.clone(), f, "a").unwrap();
    assert!(a.multiply(&a).unwrap().is_zero());
    assert!(a.multiply(&PathElement::parse(r2, f, "a").unwrap()).is_err());
}
