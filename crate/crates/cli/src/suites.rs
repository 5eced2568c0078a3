use std::sync::Arc;
use std::time::Instant;

use qhw_koszul::{build_koszul, end_cohomology_dims};
use qhw_leavitt::{
    check_local_confluence, stage_algebra, verify_inverting, verify_iota_injective, verify_strongly_graded,
    DecompositionMethod, LeavittElement, RewriteSystem,
};
use qhw_linalg::Matrix;
use qhw_pathalg::{build_rs0, eta_map, verify_exact_window, xi_map};
use qhw_quiver::Quiver;
use qhw_trivext::{
    build_trivext, complete_resolution, random_module, singularity_model, stable_endo_ring, stable_hom,
    stage_from_leavitt, verify_phi_quasi_iso, verify_phi_quasi_iso_variant, verify_totally_acyclic, LambdaModule,
    PhiVariant, Side, TrivextError, TrivialExtension,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{RunConfig, SideArg};
use crate::report::{Origin, SuiteReport};

pub const SUITES: [&str; 4] = ["koszul", "sequences", "leavitt", "trivext"];

pub const KOSZUL_WINDOW: usize = 6;
pub const SEQUENCE_WINDOW: usize = 5;
pub const LEAVITT_STAGE: usize = 3;
pub const TRIVEXT_WINDOW: usize = 4;

fn list<T: ToString>(xs: &[T]) -> String {
    format!("[{}]", xs.iter().map(T::to_string).collect::<Vec<_>>().join(", "))
}

fn sink(q: &Quiver) -> Option<String> {
    q.classify_vertices().0.first().map(|&v| q.vertex_name(v).to_string())
}

pub fn run_suite(suite: &str, name: &str, q: &Arc<Quiver>, c: &RunConfig) -> SuiteReport {
    let start = Instant::now();
    let mut r = match suite {
        "koszul" => koszul(name, q, c),
        "sequences" => sequences(name, q, c),
        "leavitt" => leavitt(name, q, c),
        "trivext" => trivext(name, q, c),
        _ => unreachable!("suite names are validated by the parser"),
    };
    if c.timing {
        r.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    r
}

pub fn koszul(name: &str, q: &Arc<Quiver>, c: &RunConfig) -> SuiteReport {
    let n = c.window.unwrap_or(KOSZUL_WINDOW);
    let mut r = SuiteReport::new("koszul", name);
    let kw = build_koszul(q, n, c.field.0);
    let res = kw.verify_resolution();
    r.check("dim H^0(K)", q.vertex_count(), res.h0_dim, Origin::Formula);
    r.check("radical acts by zero on H^0(K)", true, res.radical_acts_trivially, Origin::Formula);
    let interior = res.betti[1..n].to_vec();
    r.check(format!("dim H^-n(K), 1 <= n < {n}"), list(&vec![0; n - 1]), list(&interior), Origin::Formula);
    r.check("right action commutes with d", true, kw.action_commutes_with_differential(), Origin::Elementary);
    for d in end_cohomology_dims(&kw) {
        r.push(format!("dim H^{}(End K)", d.degree), d.expected, d.dim, d.pass, Origin::Formula);
    }
    r
}

pub fn sequences(name: &str, q: &Arc<Quiver>, c: &RunConfig) -> SuiteReport {
    let hi = c.window.unwrap_or(SEQUENCE_WINDOW) as i64;
    let mut r = SuiteReport::new("sequences", name);
    let field = c.field.0;
    for i in 0..q.vertex_count() {
        let v = q.vertex_name(i);
        match eta_map(q, i, field) {
            Ok(eta) => match verify_exact_window(std::slice::from_ref(&eta), 0, hi) {
                Ok(rep) => {
                    r.check(format!("T_{v} sequence exact in degrees 0..={hi}"), true, rep.all_exact(), Origin::Elementary);
                    // dim T^n = Σ_{s(α)=i} |paths of length n ending at t(α)| - |paths of length n-1 ending at i|
                    let expected: Vec<usize> = (0..=hi as usize)
                        .map(|n| {
                            let here = q.paths_ending_at(n);
                            let total: usize = q.arrows_from(i).iter().map(|&a| here[q.arrow(a).target]).sum();
                            total - if n > 0 { q.paths_ending_at(n - 1)[i] } else { 0 }
                        })
                        .collect();
                    r.check(format!("dim T_{v}^n"), list(&expected), list(&rep.cokernel_dims()), Origin::Computed);
                }
                Err(e) => r.push(format!("T_{v} sequence"), "exact", e, false, Origin::Elementary),
            },
            Err(_) => r.skip(format!("T_{v} sequence"), format!("vertex {v} is a sink")),
        }
        match verify_exact_window(&[xi_map(q, i, field)], 0, hi) {
            Ok(rep) => {
                r.check(format!("G_{v} sequence exact in degrees 0..={hi}"), true, rep.all_exact(), Origin::Elementary);
                let mut expected = vec![0usize; hi as usize + 1];
                expected[0] = 1;
                r.check(format!("dim G_{v}^n"), list(&expected), list(&rep.cokernel_dims()), Origin::Computed);
            }
            Err(e) => r.push(format!("G_{v} sequence"), "exact", e, false, Origin::Elementary),
        }
    }
    r
}

/// `Σ_w |paths of length m ending at w|²`, plus shorter paths into sinks.
pub fn expected_stage_dim(q: &Quiver, m: usize) -> usize {
    let mut total: usize = q.paths_ending_at(m).iter().map(|k| k * k).sum();
    for k in 0..m {
        let counts = q.paths_ending_at(k);
        total += (0..q.vertex_count()).filter(|&w| q.is_sink(w)).map(|w| counts[w] * counts[w]).sum::<usize>();
    }
    total
}

pub fn leavitt(name: &str, q: &Arc<Quiver>, c: &RunConfig) -> SuiteReport {
    let field = c.field.0;
    let stages = c.stage.unwrap_or(LEAVITT_STAGE);
    let mut r = SuiteReport::new("leavitt", name);
    let rs = RewriteSystem::new(q);
    let conf = check_local_confluence(&rs, 6, field);
    r.check("critical pairs resolved (overlap length <= 6)", conf.critical_pairs.len(), conf.resolved_pairs(), Origin::Computed);
    r.check("ambiguous words resolved (length <= 6)", 0, conf.unresolved_words.len(), Origin::Computed);

    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut agree = 0;
    for k in 0..c.words {
        let w = rs.random_word(1 + k % 9, &mut rng);
        let leftmost = rs.normalize(&w, field);
        let random = rs.normalize_random(&w, field, &mut rng);
        let direct = LeavittElement::from_word(q.clone(), field, w.vertex, &w.letters);
        if leftmost == random && leftmost == direct {
            agree += 1;
        }
    }
    r.check("normal form independent of rewriting order", c.words, agree, Origin::Computed);

    for m in 1..=stages {
        match stage_algebra(q, m, field) {
            Ok(s) => {
                r.check(format!("dim stage {m}"), expected_stage_dim(q, m), s.dim(), Origin::Computed);
                let squares: usize = s.block_sizes().iter().map(|b| b * b).sum();
                let got = match s.method() {
                    DecompositionMethod::MatrixUnits if squares == s.dim() => "matrix units",
                    DecompositionMethod::MatrixUnits => "matrix units of the wrong size",
                    DecompositionMethod::Idempotents => "idempotents only",
                };
                r.check(format!("stage {m} is {}", s.describe()), "matrix units", got, Origin::Computed);
            }
            Err(e) => r.push(format!("stage {m}"), "algebra", e, false, Origin::Computed),
        }
    }
    match sink(q) {
        Some(v) => r.skip("strongly graded stages", format!("has sink {v}")),
        None => {
            for m in 1..=stages {
                match verify_strongly_graded(q, m, field) {
                    Ok(s) => r.check(
                        format!("L1 L-1 and L-1 L1 cover stage {m}"),
                        "true, true",
                        format!("{}, {}", s.plus_minus, s.minus_plus),
                        Origin::Formula,
                    ),
                    Err(e) => r.push(format!("strongly graded stage {m}"), "pass", e, false, Origin::Formula),
                }
            }
        }
    }
    let inv = verify_inverting(q, field);
    for (map, list) in [("iota", &inv.iota), ("kappa", &inv.kappa)] {
        for v in list {
            r.push(format!("{map} inverse at {}", v.vertex), "identity", v.row_times_column.clone(), v.pass, Origin::Formula);
        }
    }
    let inj = verify_iota_injective(q, 4, field);
    r.push("iota injective on paths of length <= 4", inj.paths, inj.rank, inj.pass, Origin::Formula);
    r
}

fn label_map(ext: &TrivialExtension, target: &qhw_linalg::FinDimAlgebra, rename: impl Fn(&str) -> String) -> Option<Matrix> {
    let field = target.field();
    let cols = ext
        .algebra()
        .labels()
        .iter()
        .map(|l| {
            let k = target.index_of(&rename(l))?;
            Some((0..target.dim()).map(|r| if r == k { field.one() } else { field.zero() }).collect())
        })
        .collect::<Option<Vec<Vec<_>>>>()?;
    Some(Matrix::from_columns(field, target.dim(), &cols))
}

pub fn trivext(name: &str, q: &Arc<Quiver>, c: &RunConfig) -> SuiteReport {
    let mut r = SuiteReport::new("trivext", name);
    let field = c.field.0;
    let w = c.window.unwrap_or(TRIVEXT_WINDOW) as i64;
    let m = c.stage.unwrap_or(1);
    let side = match c.side {
        SideArg::Plus => Side::Plus,
        SideArg::Minus => Side::Minus,
    };
    let stage = match stage_from_leavitt(q, m, side, w + 3, field) {
        Ok(s) => Arc::new(s),
        Err(TrivextError::HasSink(v)) => {
            r.skip("trivial extension", format!("has sink {v}"));
            return r;
        }
        Err(TrivextError::StageNotStronglyGraded(why)) => {
            r.skip("trivial extension", format!("stage {m} is not strongly graded: {why}"));
            return r;
        }
        Err(e) => {
            r.push("trivial extension", "stage", e, false, Origin::Elementary);
            return r;
        }
    };
    r.check("stage strongly graded on the window", true, stage.check_strongly_graded().pass, Origin::Formula);
    let ext = match build_trivext(&stage) {
        Ok(e) => e,
        Err(e) => {
            r.push("trivial extension", "algebra", e, false, Origin::Elementary);
            return r;
        }
    };

    let (rs0, rename): (_, fn(&str) -> String) = match side {
        Side::Plus => (build_rs0(q, field), |l| l.to_string()),
        Side::Minus => (build_rs0(&q.opposite(), field), |l| l.trim_end_matches('*').to_string()),
    };
    let iso = label_map(&ext, &rs0.algebra, rename).is_some_and(|f| ext.algebra().is_isomorphism(&rs0.algebra, &f));
    let target = if side == Side::Plus { "kQ/J^2" } else { "kQ^op/J^2" };
    r.check(format!("trivial extension is {target}"), true, iso, Origin::Formula);

    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut modules = match ext.canonical_modules() {
        Ok(ms) => ms,
        Err(e) => {
            r.push("canonical modules", "semisimple A0", e, false, Origin::Elementary);
            Vec::new()
        }
    };
    for k in 0..c.modules {
        match random_module(&ext, 6, &mut rng) {
            Ok(m) => modules.push((format!("random{k}"), m.module().clone())),
            Err(e) => r.push(format!("random{k}"), "module", e, false, Origin::Elementary),
        }
    }
    let mut matched = 0;
    let mut failures = Vec::new();
    for (label, m) in &modules {
        match LambdaModule::new(&ext, m.clone()) {
            Ok(lm) => {
                let s = stable_hom(&ext, &lm);
                if s.pass && s.formula_dim == s.oracle_dim {
                    matched += 1;
                } else {
                    failures.push(format!("{label}: {} vs {}", s.formula_dim, s.oracle_dim));
                }
            }
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    }
    r.push(
        "stable Hom(A0, M): formula vs factorization oracle",
        format!("{} modules", modules.len()),
        if failures.is_empty() { format!("{matched} modules") } else { failures.join("; ") },
        failures.is_empty(),
        Origin::Computed,
    );
    match stable_endo_ring(&ext) {
        Ok(s) => r.check("stable End(A0) is (A0)^op via right multiplication", true, s.isomorphism, Origin::Formula),
        Err(e) => r.push("stable End(A0)", "(A0)^op", e, false, Origin::Formula),
    }

    match complete_resolution(&ext, -w, w) {
        Ok(p) => {
            let a = verify_totally_acyclic(&p);
            r.push(
                format!("complete resolution totally acyclic on [-{w}, {w}]"),
                "no interior cohomology",
                if a.failures.is_empty() { "none".to_string() } else { a.failures.join("; ") },
                a.pass,
                Origin::Formula,
            );
            let detected = (-w..w).filter(|&n| !verify_totally_acyclic(&p.corrupted(n)).pass).count();
            r.check("corrupted differentials detected", 2 * w, detected, Origin::Elementary);
        }
        Err(e) => r.push("complete resolution", "window", e, false, Origin::Formula),
    }

    match verify_phi_quasi_iso(&ext, -w + 1, w - 1) {
        Ok(p) => {
            r.check("End(P) differential matches the formula", true, p.identification && p.formula_matches, Origin::Formula);
            for d in p.degrees.iter().filter(|d| d.reliable) {
                r.push(format!("H^{}(End P) = A^{}", d.degree, d.degree), d.component_dim, d.cohomology_dim, d.cocycles && d.induces_iso, Origin::Formula);
            }
            if field.characteristic() == 2 {
                r.skip("unsigned control", "signs are invisible in characteristic 2");
            } else {
                match verify_phi_quasi_iso_variant(&ext, -w + 1, w - 1, PhiVariant::Unsigned) {
                    Ok(bad) => r.check("unsigned control rejected", true, !bad.pass, Origin::Elementary),
                    Err(e) => r.push("unsigned control", "report", e, false, Origin::Elementary),
                }
            }
        }
        Err(e) => r.push("End(P)", "window", e, false, Origin::Formula),
    }

    match singularity_model(&stage) {
        Ok(s) => {
            let t = q.adjacency_matrix();
            let expected = if side == Side::Minus { t } else { t.transpose() };
            r.check("translation matrix against the adjacency matrix", true, s.translation_matrix() == expected, Origin::Computed);
            r.check("translation invertible", true, s.invertible, Origin::Elementary);
            let orbits = s.orbit_lengths().map_or("none".to_string(), |o| list(&o));
            let expected = shift_orbits(q).map_or("none".to_string(), |o| list(&o));
            r.check("translation orbits", expected, orbits, Origin::Computed);
        }
        Err(e) => r.push("singularity model", "semisimple A0", e, false, Origin::Computed),
    }
    r
}

fn shift_orbits(q: &Quiver) -> Option<Vec<usize>> {
    let mut o = qhw_invariants::shift_invariants(q).ok()?.shift_orbits?;
    o.sort_unstable();
    Some(o)
}
