//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::Instant;

use qhw_invariants::{compare_quivers, k0gr_stages, Int, Verdict};
use qhw_koszul::{build_koszul, end_cohomology_dims};
use qhw_leavitt::{
    check_local_confluence, stage_algebra, verify_inverting, verify_strongly_graded, DecompositionMethod,
    LeavittElement, RewriteSystem,
};
use qhw_linalg::{Field, FinDimAlgebra, IntMatrix, Matrix};
use qhw_pathalg::{build_rs0, eta_map, verify_exact_window, xi_map, GradedFreeMap};
use qhw_quiver::{parse_quiver, Quiver};
use qhw_trivext::{
    build_trivext, complete_resolution, random_module, singularity_model, stable_endo_ring, stable_hom,
    stage_from_leavitt, verify_phi_quasi_iso, verify_phi_quasi_iso_variant, verify_totally_acyclic, GradedStageInput,
    LambdaModule, PhiVariant, Side, TrivialExtension,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const Q: Field = Field::Rational;
const SINK_FREE: [&str; 6] = ["loop", "rose2", "c2", "c3", "c4", "full2"];
const ALL: [&str; 7] = ["loop", "rose2", "c2", "c3", "c4", "full2", "path12"];

fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../corpus/{name}.quiver"))
}

fn quiver(name: &str) -> Arc<Quiver> {
    let text = std::fs::read_to_string(corpus_path(name)).expect("corpus file");
    Arc::new(parse_quiver(&text).expect("corpus quiver parses"))
}

fn cycle(n: usize) -> &'static str {
    ["loop", "c2", "c3", "c4"][n - 1]
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for name in SINK_FREE {
        let q = quiver(name);
        let kw = build_koszul(&q, 6, Q);
        let got: Vec<usize> = end_cohomology_dims(&kw).iter().map(|d| d.dim).collect();
        let expected: Vec<usize> = (0..=4).map(|n| q.path_count(n)).collect();
        ensure(got == expected, || format!("{name}: dims {got:?}, path counts {expected:?}"))?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 30.0, || format!("took {secs:.1} s"))?;
    Ok(format!("dim H^n(End K) = |Q_n| for n <= 4 on 6 quivers in {secs:.2} s"))
}

fn criterion_2() -> Outcome {
    for name in ALL {
        let q = quiver(name);
        let r = build_koszul(&q, 6, Q).verify_resolution();
        ensure(r.h0_dim == q.vertex_count() && r.radical_acts_trivially, || format!("{name}: H^0 {r:?}"))?;
        ensure(r.betti[1..6].iter().all(|&b| b == 0), || format!("{name}: betti {:?}", r.betti))?;
    }
    Ok("H^0(K) = kQ_0 and H^-n(K) = 0 for 1 <= n <= 5 on 7 quivers".into())
}

/// `dim` of the target minus the rank of the map, degree by degree.
fn rank_cokernels(f: &GradedFreeMap, hi: i64) -> Vec<usize> {
    (0..=hi)
        .map(|n| {
            let m = f.degree_matrix(n);
            m.rows() - m.rank()
        })
        .collect()
}

fn criterion_3() -> Outcome {
    let mut sequences = 0;
    for name in ALL {
        let q = quiver(name);
        for i in 0..q.vertex_count() {
            let mut maps = vec![("G", xi_map(&q, i, Q))];
            if let Ok(eta) = eta_map(&q, i, Q) {
                maps.push(("T", eta));
            }
            for (label, f) in maps {
                let r = verify_exact_window(std::slice::from_ref(&f), 0, 5).map_err(|e| e.to_string())?;
                ensure(r.all_exact(), || format!("{name} {label}_{i} not exact"))?;
                let independent = rank_cokernels(&f, 5);
                ensure(r.cokernel_dims() == independent, || {
                    format!("{name} {label}_{i}: {:?} vs {independent:?}", r.cokernel_dims())
                })?;
                sequences += 1;
            }
        }
    }
    Ok(format!("{sequences} sequences exact in degrees 0..=5 with matching cokernel ranks"))
}

fn criterion_4() -> Outcome {
    let mut pairs = 0;
    for name in ALL {
        let q = quiver(name);
        let rs = RewriteSystem::new(&q);
        let c = check_local_confluence(&rs, 6, Q);
        ensure(c.all_resolved && c.resolved_pairs() == c.critical_pairs.len(), || format!("{name}: {:?}", c.unresolved_words))?;
        pairs += c.critical_pairs.len();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for k in 0..1000 {
            let w = rs.random_word(1 + k % 9, &mut rng);
            let a = rs.normalize(&w, Q);
            let b = rs.normalize_random(&w, Q, &mut rng);
            let c = LeavittElement::from_word(q.clone(), Q, w.vertex, &w.letters);
            ensure(a == b && a == c, || format!("{name}: {} normalizes differently", rs.format_word(&w)))?;
        }
    }
    Ok(format!("{pairs} critical pairs resolved; 1000 words per quiver agree"))
}

fn criterion_5() -> Outcome {
    for name in SINK_FREE {
        for m in 1..=3 {
            let r = verify_strongly_graded(&quiver(name), m, Q).map_err(|e| e.to_string())?;
            ensure(r.plus_minus && r.minus_plus, || format!("{name} stage {m}: {r:?}"))?;
        }
    }
    Ok("both pairings onto L^0 at stages 1..=3 on 6 quivers".into())
}

fn criterion_6() -> Outcome {
    let mut cases: Vec<(&str, usize, usize)> = Vec::new();
    for m in 1..=3 {
        cases.push(("loop", m, 1));
        cases.push(("rose2", m, 4usize.pow(m as u32)));
        for n in 2..=4 {
            cases.push((cycle(n), m, n));
        }
    }
    for (name, m, dim) in &cases {
        let s = stage_algebra(&quiver(name), *m, Q).map_err(|e| e.to_string())?;
        ensure(s.dim() == *dim, || format!("{name} stage {m}: dim {} vs {dim}", s.dim()))?;
        let squares: usize = s.block_sizes().iter().map(|b| b * b).sum();
        ensure(s.method() == DecompositionMethod::MatrixUnits && squares == *dim, || {
            format!("{name} stage {m}: {} not certified", s.describe())
        })?;
    }
    Ok(format!("{} stage dimensions certified by matrix units", cases.len()))
}

fn criterion_7() -> Outcome {
    let mut checked = 0;
    for name in ALL {
        let r = verify_inverting(&quiver(name), Q);
        ensure(r.pass, || format!("{name}: {r:?}"))?;
        for v in r.iota.iter().chain(&r.kappa) {
            ensure(v.pass, || format!("{name} at {}: {}", v.vertex, v.row_times_column))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} vertex inverses for iota and kappa"))
}

fn label_map(ext: &TrivialExtension, target: &FinDimAlgebra) -> Result<Matrix, String> {
    let cols = ext
        .algebra()
        .labels()
        .iter()
        .map(|l| {
            let k = target.index_of(l).ok_or_else(|| format!("no basis element {l}"))?;
            Ok((0..target.dim()).map(|r| if r == k { Q.one() } else { Q.zero() }).collect())
        })
        .collect::<Result<Vec<Vec<_>>, String>>()?;
    Ok(Matrix::from_columns(Q, target.dim(), &cols))
}

fn cycle_ext(n: usize, side: Side, width: i64) -> TrivialExtension {
    let s = stage_from_leavitt(&quiver(cycle(n)), 1, side, width, Q).expect("cycle stage");
    build_trivext(&Arc::new(s)).expect("trivial extension")
}

fn criterion_8() -> Outcome {
    for n in 1..=4 {
        let ext = cycle_ext(n, Side::Plus, 1);
        let rs0 = build_rs0(&quiver(cycle(n)), Q);
        let f = label_map(&ext, &rs0.algebra)?;
        ensure(ext.algebra().is_isomorphism(&rs0.algebra, &f), || format!("C{n}: not an isomorphism"))?;
    }
    Ok("kC_n/J^2 reproduced for n = 1..4".into())
}

fn inputs(width: i64) -> Vec<(&'static str, TrivialExtension)> {
    vec![
        ("dual", build_trivext(&Arc::new(GradedStageInput::laurent(Q, width))).expect("dual numbers")),
        ("c2", cycle_ext(2, Side::Minus, width)),
        ("c3", cycle_ext(3, Side::Minus, width)),
    ]
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut total = 0;
    for (name, ext) in inputs(1) {
        let mut modules = ext.canonical_modules().map_err(|e| e.to_string())?;
        for k in 0..50 {
            let m = random_module(&ext, 6, &mut rng).map_err(|e| e.to_string())?;
            modules.push((format!("random{k}"), m.module().clone()));
        }
        for (label, m) in modules {
            let m = LambdaModule::new(&ext, m).map_err(|e| format!("{name} {label}: {e}"))?;
            let r = stable_hom(&ext, &m);
            ensure(r.pass && r.formula_dim == r.oracle_dim, || {
                format!("{name} {label}: formula {} vs oracle {}", r.formula_dim, r.oracle_dim)
            })?;
            total += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1} s"))?;
    Ok(format!("{total} modules over 3 extensions in {secs:.2} s"))
}

fn criterion_10() -> Outcome {
    for (name, ext) in inputs(1) {
        let r = stable_endo_ring(&ext).map_err(|e| e.to_string())?;
        ensure(r.isomorphism && r.dim == ext.zero_dim(), || format!("{name}: {r:?}"))?;
    }
    Ok("stable End(A0) = (A0)^op on 3 extensions".into())
}

fn criterion_11() -> Outcome {
    for (name, ext) in inputs(5) {
        let p = complete_resolution(&ext, -4, 4).map_err(|e| e.to_string())?;
        let r = verify_totally_acyclic(&p);
        ensure(r.pass, || format!("{name}: {:?}", r.failures))?;
        for n in -4..4 {
            ensure(!verify_totally_acyclic(&p.corrupted(n)).pass, || format!("{name}: corrupted d^{n} accepted"))?;
        }
    }
    Ok("window [-4, 4] acyclic on 3 extensions; 8 corruptions each rejected".into())
}

fn criterion_12() -> Outcome {
    for (name, ext) in inputs(5) {
        let r = verify_phi_quasi_iso(&ext, -3, 2).map_err(|e| e.to_string())?;
        ensure(r.pass && r.identification && r.formula_matches, || format!("{name}: {:?}", r.failures))?;
        for d in r.degrees.iter().filter(|d| d.reliable) {
            ensure(d.cohomology_dim == ext.stage().dim(d.degree), || format!("{name} H^{}", d.degree))?;
        }
        let bad = verify_phi_quasi_iso_variant(&ext, -3, 2, PhiVariant::Unsigned).map_err(|e| e.to_string())?;
        ensure(!bad.pass, || format!("{name}: unsigned control accepted"))?;
    }
    Ok("End(P) formula and H^n = A^n on 3 extensions; unsigned control rejected".into())
}

fn criterion_13() -> Outcome {
    for n in 1..=4 {
        let s = stage_from_leavitt(&quiver(cycle(n)), 1, Side::Minus, 1, Q).map_err(|e| e.to_string())?;
        let m = singularity_model(&s).map_err(|e| e.to_string())?;
        ensure(m.orbit_lengths() == Some(vec![n]), || format!("C{n}: orbits {:?}", m.orbits))?;
        ensure(m.translation_matrix().pow(n as u32) == IntMatrix::identity(n), || format!("C{n}: T^{n} != 1"))?;
    }
    Ok("one translation orbit of length n on C_n, n = 1..4".into())
}

fn criterion_14() -> Outcome {
    let start = Instant::now();
    let c = compare_quivers(&quiver("loop"), &quiver("rose2"), 6).map_err(|e| e.to_string())?;
    ensure(c.verdict == Verdict::Distinguished { stage: 1 }, || format!("loop vs rose2: {}", c.verdict))?;
    let [a, b] = &c.stages[0].data;
    ensure(a.smith.is_empty() && b.smith == vec![Int(2.into())], || "stage 1 cokernels".into())?;

    let c = compare_quivers(&quiver("c2"), &quiver("c3"), 6).map_err(|e| e.to_string())?;
    ensure(c.verdict == Verdict::Distinguished { stage: 1 }, || format!("c2 vs c3: {}", c.verdict))?;
    ensure(c.stages[0].data[0].rank == 2 && c.stages[0].data[1].rank == 3, || "c2 vs c3 ranks".into())?;

    for n in 1..=4 {
        for s in k0gr_stages(&quiver(cycle(n)), 6).map_err(|e| e.to_string())? {
            ensure(s.shift_order() == Some(n as u64), || format!("C{n} stage {}: {:?}", s.stage, s.shift_order()))?;
        }
    }

    let c = compare_quivers(&quiver("c2"), &quiver("c2_relabeled"), 6).map_err(|e| e.to_string())?;
    ensure(c.verdict == Verdict::NotDistinguished { up_to: 6 }, || format!("relabeled: {}", c.verdict))?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 5.0, || format!("took {secs:.1} s"))?;
    Ok(format!("all K0 comparisons as expected in {secs:.2} s"))
}

fn criterion_15() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_qhw"))
            .args(["verify", "all"])
            .arg(corpus_path("c2"))
            .args(["--format", "json", "--seed", "17", "--modules", "10", "--words", "200"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.success() && b.status.success(), || format!("exit {:?} {:?}", a.status.code(), b.status.code()))?;
    ensure(a.stdout == b.stdout, || "reports differ".into())?;
    Ok(format!("two runs gave the same {} bytes", a.stdout.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 15] = [
        ("End(K) cohomology", criterion_1),
        ("Koszul resolution", criterion_2),
        ("T and G sequences", criterion_3),
        ("rewriting confluence", criterion_4),
        ("strong grading", criterion_5),
        ("stage structure", criterion_6),
        ("inverting maps", criterion_7),
        ("trivial extension of cycles", criterion_8),
        ("stable Hom oracle", criterion_9),
        ("stable End(A0)", criterion_10),
        ("total acyclicity", criterion_11),
        ("End(P) formula", criterion_12),
        ("singularity orbits", criterion_13),
        ("K0 invariants", criterion_14),
        ("determinism", criterion_15),
    ];
    let mut failed = 0;
    for (k, (title, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {title}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {title}: {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
