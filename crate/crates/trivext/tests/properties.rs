use std::sync::Arc;

use proptest::prelude::*;
use qhw_linalg::{Field, Matrix};
use qhw_pathalg::build_rs0;
use qhw_quiver::{parse_quiver, Quiver};
use qhw_trivext::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CYCLES: [&str; 4] = [
    include_str!("../../../corpus/loop.quiver"),
    include_str!("../../../corpus/c2.quiver"),
    include_str!("../../../corpus/c3.quiver"),
    include_str!("../../../corpus/c4.quiver"),
];

fn quiver(text: &str) -> Arc<Quiver> {
    Arc::new(parse_quiver(text).unwrap())
}

fn cycle_ext(n: usize, side: Side, width: i64) -> TrivialExtension {
    let s = stage_from_leavitt(&quiver(CYCLES[n - 1]), 1, side, width, Field::Rational).unwrap();
    build_trivext(&Arc::new(s)).unwrap()
}

/// Dual numbers, then the `C₂` and `C₃` stage extensions.
fn inputs(width: i64) -> Vec<(&'static str, TrivialExtension)> {
    vec![
        ("dual", build_trivext(&Arc::new(GradedStageInput::laurent(Field::Rational, width))).unwrap()),
        ("c2", cycle_ext(2, Side::Minus, width)),
        ("c3", cycle_ext(3, Side::Minus, width)),
    ]
}

/// Sends each basis label to the basis element of `target` with the same name.
fn label_map(ext: &TrivialExtension, target: &qhw_linalg::FinDimAlgebra, rename: impl Fn(&str) -> String) -> Matrix {
    let field = Field::Rational;
    let labels = ext.algebra().labels();
    let cols: Vec<Vec<_>> = labels
        .iter()
        .map(|l| {
            let k = target.index_of(&rename(l)).unwrap_or_else(|| panic!("no basis element {l}"));
            (0..target.dim()).map(|r| if r == k { field.one() } else { field.zero() }).collect()
        })
        .collect();
    Matrix::from_columns(field, target.dim(), &cols)
}

#[test]
fn cycle_extensions_are_radical_square_zero() {
    for n in 1..=4 {
        let q = quiver(CYCLES[n - 1]);
        let plus = cycle_ext(n, Side::Plus, 1);
        let rs0 = build_rs0(&q, Field::Rational);
        assert!(plus.ideal_is_square_zero() && plus.quotient_is_degree_zero());
        let f = label_map(&plus, &rs0.algebra, str::to_string);
        assert!(plus.algebra().is_isomorphism(&rs0.algebra, &f), "C{n} plus side");

        let minus = cycle_ext(n, Side::Minus, 1);
        let rs0_op = build_rs0(&q.opposite(), Field::Rational);
        let f = label_map(&minus, &rs0_op.algebra, |l| l.trim_end_matches('*').to_string());
        assert!(minus.algebra().is_isomorphism(&rs0_op.algebra, &f), "C{n} minus side");

        let id = Matrix::identity(Field::Rational, plus.dim());
        assert!(plus.algebra().is_isomorphism(&minus.algebra().opposite(), &id));
    }
}

#[test]
fn canonical_basis_map_is_needed() {
    let q = quiver(CYCLES[2]);
    let plus = cycle_ext(3, Side::Plus, 1);
    let rs0 = build_rs0(&q, Field::Rational);
    let f = label_map(&plus, &rs0.algebra, |l| match l {
        "a" => "b".into(),
        "b" => "a".into(),
        _ => l.to_string(),
    });
    assert!(!plus.algebra().is_isomorphism(&rs0.algebra, &f));
}

#[test]
fn stable_hom_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (name, ext) in inputs(1) {
        let mut modules = ext.canonical_modules().unwrap();
        for k in 0..50 {
            modules.push((format!("random{k}"), random_module(&ext, 6, &mut rng).unwrap().module().clone()));
        }
        for (label, m) in modules {
            let m = LambdaModule::new(&ext, m).unwrap();
            let r = stable_hom(&ext, &m);
            assert!(r.pass && r.formula_dim == r.oracle_dim, "{name} {label}: {r:?}");
            assert!(m.kernel_sequence_is_exact(&ext), "{name} {label}");
        }
    }
}

#[test]
fn stable_hom_of_standard_modules() {
    for (name, ext) in inputs(1) {
        let a0 = LambdaModule::new(&ext, ext.a0_module()).unwrap();
        assert_eq!(stable_hom(&ext, &a0).formula_dim, ext.zero_dim(), "{name}");
        let lambda = LambdaModule::new(&ext, ext.regular()).unwrap();
        assert_eq!(stable_hom(&ext, &lambda).formula_dim, 0, "{name}");
    }
}

#[test]
fn stable_endomorphisms_of_a0() {
    for (name, ext) in inputs(1) {
        let r = stable_endo_ring(&ext).unwrap();
        assert!(r.isomorphism, "{name}");
        assert_eq!(r.dim, ext.zero_dim(), "{name}");
    }
}

#[test]
fn complete_resolutions_are_totally_acyclic() {
    for (name, ext) in inputs(5) {
        let p = complete_resolution(&ext, -4, 4).unwrap();
        assert!(p.is_complex_of_modules(), "{name}");
        let r = verify_totally_acyclic(&p);
        assert!(r.pass, "{name}: {:?}", r.failures);
        assert!(r.dual_formula.iter().all(|(_, ok)| *ok), "{name}");
        for n in -4..4 {
            let bad = verify_totally_acyclic(&p.corrupted(n));
            assert!(!bad.pass, "{name}: corrupting d^{n} went unnoticed");
        }
    }
}

#[test]
fn end_complex_matches_formula() {
    for (name, ext) in inputs(5) {
        let r = verify_phi_quasi_iso(&ext, -3, 2).unwrap();
        assert!(r.pass && r.identification && r.formula_matches, "{name}: {:?}", r.failures);
        for d in r.degrees.iter().filter(|d| d.reliable) {
            assert_eq!(d.cohomology_dim, ext.stage().dim(d.degree), "{name} H^{}", d.degree);
        }
        let bad = verify_phi_quasi_iso_variant(&ext, -3, 2, PhiVariant::Unsigned).unwrap();
        assert!(!bad.pass, "{name}");
    }
}

#[test]
fn end_complex_needs_the_stage_window() {
    let ext = inputs(2).remove(0).1;
    assert!(matches!(verify_phi_quasi_iso(&ext, -3, 2), Err(TrivextError::WindowNotGenerated(_))));
}

#[test]
fn translation_is_a_single_cycle() {
    for n in 1..=4 {
        for side in [Side::Minus, Side::Plus] {
            let s = stage_from_leavitt(&quiver(CYCLES[n - 1]), 1, side, 1, Field::Rational).unwrap();
            let m = singularity_model(&s).unwrap();
            assert!(m.invertible);
            assert_eq!(m.orbit_lengths(), Some(vec![n]), "C{n} {side:?}");
            let t = m.translation_matrix();
            assert!(t.pow(n as u32) == qhw_linalg::IntMatrix::identity(n));
        }
    }
}

#[test]
fn translation_is_stage_independent_on_cycles() {
    let q = quiver(CYCLES[2]);
    let models: Vec<_> = (1..=3)
        .map(|m| singularity_model(&stage_from_leavitt(&q, m, Side::Minus, 1, Field::Rational).unwrap()).unwrap())
        .collect();
    assert!(models.windows(2).all(|w| w[0].translation == w[1].translation));
}

#[test]
fn prime_field_pipeline() {
    let q = quiver(CYCLES[1]);
    let s = stage_from_leavitt(&q, 1, Side::Minus, 5, Field::prime(5).unwrap()).unwrap();
    let ext = build_trivext(&Arc::new(s)).unwrap();
    assert!(verify_totally_acyclic(&complete_resolution(&ext, -4, 4).unwrap()).pass);
    assert!(verify_phi_quasi_iso(&ext, -3, 2).unwrap().pass);
    assert!(!verify_phi_quasi_iso_variant(&ext, -3, 2, PhiVariant::Unsigned).unwrap().pass);
}

#[test]
fn rose_and_line_are_rejected() {
    let rose = quiver(include_str!("../../../corpus/rose2.quiver"));
    assert!(matches!(
        stage_from_leavitt(&rose, 1, Side::Minus, 1, Field::Rational),
        Err(TrivextError::StageNotStronglyGraded(_))
    ));
    let line = quiver(include_str!("../../../corpus/path12.quiver"));
    assert!(matches!(stage_from_leavitt(&line, 1, Side::Minus, 1, Field::Rational), Err(TrivextError::HasSink(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_modules_decompose(seed in any::<u64>(), which in 0usize..3) {
        let ext = inputs(1).remove(which).1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_module(&ext, 6, &mut rng).unwrap();
        let d = gproj_decompose(&ext, &m).unwrap();
        let r = stable_hom(&ext, &m);
        prop_assert!(r.pass);
        prop_assert_eq!(d.projective_part.dim() + d.trivial_dim(), m.dim());
        prop_assert!(m.kernel_sequence_is_exact(&ext));
    }

    #[test]
    fn stable_hom_is_additive(s1 in any::<u64>(), s2 in any::<u64>()) {
        let ext = inputs(1).remove(1).1;
        let a = random_module(&ext, 4, &mut ChaCha8Rng::seed_from_u64(s1)).unwrap();
        let b = random_module(&ext, 4, &mut ChaCha8Rng::seed_from_u64(s2)).unwrap();
        let sum = LambdaModule::new(&ext, a.module().direct_sum(b.module())).unwrap();
        prop_assert_eq!(
            stable_hom(&ext, &sum).formula_dim,
            stable_hom(&ext, &a).formula_dim + stable_hom(&ext, &b).formula_dim
        );
    }
}
