//! Graded `K₀` of Leavitt path algebras, stage by stage.
//!
//! Stage `m` is the lattice `ℤ^{Q₀}` (the `K₀` of the stage-`m` piece of
//! `L(Q)⁰`); the transition to stage `m+1` and the degree shift both act by the
//! transposed adjacency matrix `T`. Two quivers are compared through invariants
//! of `T` up to shift equivalence, which a graded Morita equivalence preserves.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use qhw_leavitt::stage_algebra;
use qhw_linalg::{smith_normal_form, Field, IntMatrix};
use qhw_quiver::Quiver;
use qhw_trivext::{singularity_model, stage_from_leavitt, Side};
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantsError {
    #[error("vertex `{0}` is a sink")]
    HasSink(String),
}

/// An integer that serializes as a JSON number when it fits in `i64`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn ints(v: Vec<BigInt>) -> Vec<Int> {
    v.into_iter().map(Int).collect()
}

/// `ℤ/d` for each entry, `ℤ` for zero; the empty list is the trivial group.
pub fn format_group(factors: &[Int]) -> String {
    if factors.is_empty() {
        return "0".into();
    }
    factors
        .iter()
        .map(|d| if d.0.is_zero() { "Z".to_string() } else { format!("Z/{}", d.0) })
        .collect::<Vec<_>>()
        .join(" + ")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedK0Stage {
    pub stage: usize,
    pub rank: usize,
    /// Stage `m` to stage `m+1`.
    pub transition: IntMatrix,
    /// The degree shift on stage `m`.
    pub shift: IntMatrix,
    /// `T^m`, the map from stage 0.
    pub power: IntMatrix,
    /// Class of the unit: entry `v` counts the paths of length `m` ending at `v`.
    pub unit_class: Vec<Int>,
}

impl GradedK0Stage {
    pub fn shift_commutes(&self) -> bool {
        self.shift.mul(&self.transition) == self.transition.mul(&self.shift)
    }

    /// Invariant factors of `coker T^m`, units omitted.
    pub fn smith(&self) -> Vec<Int> {
        ints(smith_normal_form(&self.power).cokernel())
    }

    pub fn trace(&self) -> Int {
        Int(self.power.trace())
    }

    pub fn shift_order(&self) -> Option<u64> {
        permutation_cycles(&self.shift).map(|c| c.iter().fold(1u64, |a, &l| lcm(a, l as u64)))
    }

    /// Orbit lengths of the shift on the vertex classes, when it permutes them.
    pub fn shift_orbits(&self) -> Option<Vec<usize>> {
        permutation_cycles(&self.shift)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Sorted cycle lengths if `m` is a permutation matrix. A nonnegative integer
/// matrix of finite order is always one.
fn permutation_cycles(m: &IntMatrix) -> Option<Vec<usize>> {
    let n = m.rows();
    let mut image = vec![usize::MAX; n];
    for j in 0..n {
        let mut hit = None;
        for i in 0..n {
            let x = m.get(i, j);
            if x.is_one() && hit.is_none() {
                hit = Some(i);
            } else if !x.is_zero() {
                return None;
            }
        }
        image[j] = hit?;
    }
    let mut seen = vec![false; n];
    let mut lengths = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let (mut v, mut len) = (start, 0);
        while !seen[v] {
            if image[v] == usize::MAX {
                return None;
            }
            seen[v] = true;
            v = image[v];
            len += 1;
        }
        if v != start {
            return None;
        }
        lengths.push(len);
    }
    lengths.sort_unstable();
    Some(lengths)
}

fn require_sink_free(q: &Quiver) -> Result<(), InvariantsError> {
    match q.classify_vertices().0.first() {
        Some(&v) => Err(InvariantsError::HasSink(q.vertex_name(v).to_string())),
        None => Ok(()),
    }
}

pub fn k0gr_stages(q: &Quiver, depth: usize) -> Result<Vec<GradedK0Stage>, InvariantsError> {
    require_sink_free(q)?;
    let t = q.adjacency_matrix();
    let n = q.vertex_count();
    let mut power = IntMatrix::identity(n);
    let mut out = Vec::with_capacity(depth);
    for stage in 1..=depth {
        power = t.mul(&power);
        let unit_class = (0..n).map(|i| Int((0..n).map(|j| power.get(i, j).clone()).sum())).collect();
        out.push(GradedK0Stage {
            stage,
            rank: n,
            transition: t.clone(),
            shift: t.clone(),
            power: power.clone(),
            unit_class,
        });
    }
    Ok(out)
}

/// Invariants of `T` up to shift equivalence that do not depend on the stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftInvariants {
    /// Rank of the dimension group: the rank of `T^n`, `n = |Q₀|`.
    pub eventual_rank: usize,
    /// `coker(1 − T)`.
    pub bowen_franks: Vec<Int>,
    pub shift_order: Option<u64>,
    pub shift_orbits: Option<Vec<usize>>,
}

pub fn shift_invariants(q: &Quiver) -> Result<ShiftInvariants, InvariantsError> {
    require_sink_free(q)?;
    let t = q.adjacency_matrix();
    let n = q.vertex_count();
    let mut bf = ints(smith_normal_form(&IntMatrix::identity(n).sub(&t)).cokernel());
    bf.sort();
    Ok(ShiftInvariants {
        eventual_rank: t.pow(n as u32).rank(),
        bowen_franks: bf,
        shift_order: permutation_cycles(&t).map(|c| c.iter().fold(1u64, |a, &l| lcm(a, l as u64))),
        shift_orbits: permutation_cycles(&t),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageData {
    pub rank: usize,
    pub smith: Vec<Int>,
    pub trace: Int,
    pub shift_order: Option<u64>,
    pub unit_class: Vec<Int>,
}

impl From<&GradedK0Stage> for StageData {
    fn from(s: &GradedK0Stage) -> Self {
        StageData {
            rank: s.rank,
            smith: s.smith(),
            trace: s.trace(),
            shift_order: s.shift_order(),
            unit_class: s.unit_class.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageComparison {
    pub stage: usize,
    pub data: [StageData; 2],
    /// Invariant mismatches first seen at this stage.
    pub differences: Vec<String>,
    /// No mismatch at this stage or before.
    pub matched: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Distinguished { stage: usize },
    NotDistinguished { up_to: usize },
}

impl Verdict {
    pub fn is_distinguished(&self) -> bool {
        matches!(self, Verdict::Distinguished { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Distinguished { .. } => write!(f, "distinguished"),
            Verdict::NotDistinguished { up_to } => write!(f, "not-distinguished-up-to-stage-{up_to}"),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonVerdict {
    pub depth: usize,
    pub shift_invariants: [ShiftInvariants; 2],
    pub stages: Vec<StageComparison>,
    pub verdict: Verdict,
}

fn differences(a: &ShiftInvariants, b: &ShiftInvariants) -> Vec<String> {
    let mut out = Vec::new();
    if a.eventual_rank != b.eventual_rank {
        out.push(format!("rank {} vs {}", a.eventual_rank, b.eventual_rank));
    }
    if a.bowen_franks != b.bowen_franks {
        out.push(format!(
            "coker(1 - T) {} vs {}",
            format_group(&a.bowen_franks),
            format_group(&b.bowen_franks)
        ));
    }
    if a.shift_order != b.shift_order {
        let show = |o: Option<u64>| o.map_or("infinite".to_string(), |k| k.to_string());
        out.push(format!("shift order {} vs {}", show(a.shift_order), show(b.shift_order)));
    } else if a.shift_orbits != b.shift_orbits {
        out.push(format!("shift orbits {:?} vs {:?}", a.shift_orbits, b.shift_orbits));
    }
    out
}

/// Stage-independent invariants are compared at stage 1, `tr T^m` at stage `m`.
/// A mismatch at some stage stays a mismatch at every deeper stage.
pub fn compare_quivers(q1: &Quiver, q2: &Quiver, depth: usize) -> Result<ComparisonVerdict, InvariantsError> {
    let (s1, s2) = (k0gr_stages(q1, depth)?, k0gr_stages(q2, depth)?);
    let inv = [shift_invariants(q1)?, shift_invariants(q2)?];
    let mut stages = Vec::with_capacity(depth);
    let mut first = None;
    for (a, b) in s1.iter().zip(&s2) {
        let mut diff = if a.stage == 1 { differences(&inv[0], &inv[1]) } else { Vec::new() };
        if a.trace() != b.trace() {
            diff.push(format!("tr T^{} {} vs {}", a.stage, a.trace(), b.trace()));
        }
        if first.is_none() && !diff.is_empty() {
            first = Some(a.stage);
        }
        stages.push(StageComparison {
            stage: a.stage,
            data: [a.into(), b.into()],
            differences: diff,
            matched: first.is_none(),
        });
    }
    let verdict = match first {
        Some(stage) => Verdict::Distinguished { stage },
        None => Verdict::NotDistinguished { up_to: depth },
    };
    Ok(ComparisonVerdict {
        depth,
        shift_invariants: inv,
        stages,
        verdict,
    })
}

pub const CAVEAT: &str = "A \"distinguished\" verdict is definitive: the invariants compared are preserved by \
graded Morita equivalence. \"Not distinguished\" is inconclusive and does not prove an equivalence. The invariants \
are a computable coarsening of the graded K0 group with its shift automorphism; the order structure is recorded \
but not compared.";

/// The equivalent conditions the evidence bears on, for quivers `Q` and `Q'` without sinks.
pub const CONDITIONS: [&str; 6] = [
    "kQ/J^2 and kQ'/J^2 are singularly equivalent",
    "L(Q) and L(Q') are graded Morita equivalent",
    "L(Q) and L(Q') are derived equivalent",
    "L(Q)^op and L(Q')^op are derived equivalent",
    "K_ac(kQ/J^2-Inj) and K_ac(kQ'/J^2-Inj) are triangle equivalent",
    "K_ac(kQ^op/J^2-Proj) and K_ac(kQ'^op/J^2-Proj) are triangle equivalent",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub quivers: [String; 2],
    pub depth: usize,
    pub stages: Vec<StageComparison>,
    pub shift_invariants: [ShiftInvariants; 2],
    pub verdict: Verdict,
    pub reasons: Vec<String>,
    /// Each condition is ruled out by a "distinguished" verdict, and left open otherwise.
    pub conditions: Vec<String>,
    pub conditions_ruled_out: bool,
    pub caveat: String,
}

pub fn equivalence_report(
    names: [&str; 2],
    q1: &Quiver,
    q2: &Quiver,
    depth: usize,
) -> Result<EquivalenceReport, InvariantsError> {
    let c = compare_quivers(q1, q2, depth)?;
    let reasons = c
        .stages
        .iter()
        .flat_map(|s| s.differences.iter().map(move |d| format!("stage {}: {d}", s.stage)))
        .collect();
    Ok(EquivalenceReport {
        quivers: names.map(str::to_string),
        depth,
        stages: c.stages,
        shift_invariants: c.shift_invariants,
        conditions_ruled_out: c.verdict.is_distinguished(),
        verdict: c.verdict,
        reasons,
        conditions: CONDITIONS.iter().map(|s| s.to_string()).collect(),
        caveat: CAVEAT.into(),
    })
}

impl EquivalenceReport {
    pub fn to_text(&self) -> String {
        let mut out = format!("{} vs {}, depth {}\n", self.quivers[0], self.quivers[1], self.depth);
        for s in &self.stages {
            let [a, b] = &s.data;
            out.push_str(&format!(
                "stage {}: rank {}/{}  coker T^m {} / {}  trace {}/{}{}\n",
                s.stage,
                a.rank,
                b.rank,
                format_group(&a.smith),
                format_group(&b.smith),
                a.trace,
                b.trace,
                if s.differences.is_empty() { String::new() } else { format!("  [{}]", s.differences.join("; ")) }
            ));
        }
        out.push_str(&format!("verdict: {}\n", self.verdict));
        for r in &self.reasons {
            out.push_str(&format!("  {r}\n"));
        }
        if self.conditions_ruled_out {
            out.push_str("none of the following hold:\n");
        } else {
            out.push_str("open:\n");
        }
        for c in &self.conditions {
            out.push_str(&format!("  - {c}\n"));
        }
        out.push_str(&self.caveat);
        out.push('\n');
        out
    }
}

/// Agreement of the lattice data with the stage algebras and the singularity model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossValidation {
    /// `(stage, block sizes of the stage algebra match the unit class)`.
    pub blocks: Vec<(usize, bool)>,
    /// `None` when the stage is not strongly graded, so no model exists.
    pub shift: Option<bool>,
}

impl CrossValidation {
    pub fn pass(&self) -> bool {
        self.blocks.iter().all(|(_, ok)| *ok) && self.shift != Some(false)
    }
}

pub fn cross_validate(q: &Arc<Quiver>, max_stage: usize, field: Field) -> Result<CrossValidation, InvariantsError> {
    let stages = k0gr_stages(q, max_stage)?;
    let mut blocks = Vec::new();
    for s in &stages {
        let ok = match stage_algebra(q, s.stage, field) {
            Ok(alg) => {
                let mut sizes: Vec<BigInt> = alg.block_sizes().into_iter().map(BigInt::from).collect();
                let mut expected: Vec<BigInt> = s.unit_class.iter().map(|c| c.0.clone()).collect();
                sizes.sort();
                expected.sort();
                sizes == expected
            }
            Err(_) => false,
        };
        blocks.push((s.stage, ok));
    }
    let shift = stage_from_leavitt(q, 1, Side::Minus, 1, field)
        .ok()
        .and_then(|stage| singularity_model(&stage).ok())
        .map(|m| stages.first().is_some_and(|s| m.translation_matrix() == s.shift));
    Ok(CrossValidation { blocks, shift })
}
