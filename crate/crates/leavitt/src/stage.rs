use std::collections::HashMap;
use std::sync::Arc;

use qhw_linalg::{
    balanced_tensor, Echelon, Field, FinDimAlgebra, Matrix, SparseVec, Wedderburn,
};
use qhw_quiver::{Path, Quiver};
use serde::Serialize;

use crate::monomial::{LeavittElement, LeavittMonomial};
use crate::LeavittError;

/// Normal monomials of degree `n` and total length at most `len`, in monomial order.
pub fn graded_basis(q: &Quiver, n: i64, len: usize) -> Vec<LeavittMonomial> {
    let mut out = Vec::new();
    for g in 0..=len {
        let r = g as i64 + n;
        if r < 0 || g + r as usize > len {
            continue;
        }
        let reals = q.enumerate_paths(r as usize);
        for ghost in q.enumerate_paths(g) {
            for real in &reals {
                if let Some(m) = LeavittMonomial::new(ghost.clone(), real.clone()) {
                    if m.is_normal(q) {
                        out.push(m);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// The stage-`m` slice of `L(Q)^d`: normal monomials `q* p` of degree `d`
/// with the shorter of `p`, `q` of length at most `m`.
pub fn slice_basis(q: &Quiver, d: i64, m: usize) -> Vec<LeavittMonomial> {
    graded_basis(q, d, 2 * m + d.unsigned_abs() as usize)
}

/// Coordinates with respect to a list of normal monomials.
#[derive(Clone, Debug)]
pub struct MonomialIndex {
    basis: Vec<LeavittMonomial>,
    index: HashMap<LeavittMonomial, usize>,
}

impl MonomialIndex {
    pub fn new(basis: Vec<LeavittMonomial>) -> MonomialIndex {
        let index = basis.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
        MonomialIndex { basis, index }
    }

    pub fn basis(&self) -> &[LeavittMonomial] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn position(&self, m: &LeavittMonomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// `None` when `x` leaves the span.
    pub fn coordinates(&self, x: &LeavittElement) -> Option<SparseVec> {
        let mut v: SparseVec = x
            .terms()
            .iter()
            .map(|(m, c)| self.position(m).map(|k| (k, c.clone())))
            .collect::<Option<_>>()?;
        v.sort_by_key(|(k, _)| *k);
        Some(v)
    }

    pub fn element(&self, q: &Arc<Quiver>, field: Field, v: &SparseVec) -> LeavittElement {
        let mut out = LeavittElement::zero(q.clone(), field);
        for (k, c) in v {
            out.add_term(self.basis[*k].clone(), c);
        }
        out
    }

    pub fn monomial(&self, q: &Arc<Quiver>, field: Field, k: usize) -> LeavittElement {
        LeavittElement::from_monomial(q.clone(), field, self.basis[k].clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DecompositionMethod {
    MatrixUnits,
    Idempotents,
}

/// The stage-`m` piece of `L(Q)^0`: the span of degree-zero normal monomials
/// of total length at most `2m`.
#[derive(Clone, Debug)]
pub struct StageAlgebra {
    quiver: Arc<Quiver>,
    stage: usize,
    index: MonomialIndex,
    algebra: FinDimAlgebra,
    wedderburn: Wedderburn,
    method: DecompositionMethod,
}

pub fn stage_algebra(q: &Arc<Quiver>, m: usize, field: Field) -> Result<StageAlgebra, LeavittError> {
    let index = MonomialIndex::new(slice_basis(q, 0, m));
    let n = index.len();
    let elems: Vec<LeavittElement> = (0..n).map(|k| index.monomial(q, field, k)).collect();
    let mut table = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let p = elems[i].multiply(&elems[j])?;
            table[i][j] = index
                .coordinates(&p)
                .ok_or_else(|| LeavittError::NotClosed(format!("stage {m} product")))?;
        }
    }
    let unit = index
        .coordinates(&LeavittElement::one(q.clone(), field))
        .expect("vertices lie in every stage");
    let labels = index.basis().iter().map(|b| b.format(q)).collect();
    let algebra = FinDimAlgebra::new(field, labels, table, unit)?;
    algebra.validate()?;
    let families = matrix_unit_families(q, m, field, &index);
    let (wedderburn, method) = match Wedderburn::from_matrix_units(&algebra, families) {
        Ok(w) => (w, DecompositionMethod::MatrixUnits),
        Err(_) => (Wedderburn::decompose(&algebra, 0)?, DecompositionMethod::Idempotents),
    };
    Ok(StageAlgebra {
        quiver: q.clone(),
        stage: m,
        index,
        algebra,
        wedderburn,
        method,
    })
}

/// `E_{q,p} = q* p` for paths `p, q` of a common length `k` and target `w`,
/// with `k = m`, or `k < m` when `w` is a sink.
fn matrix_unit_families(q: &Arc<Quiver>, m: usize, field: Field, index: &MonomialIndex) -> Vec<Vec<Vec<SparseVec>>> {
    let mut families = Vec::new();
    for k in 0..=m {
        let paths = q.enumerate_paths(k);
        for w in 0..q.vertex_count() {
            if k < m && !q.is_sink(w) {
                continue;
            }
            let ps: Vec<&Path> = paths.iter().filter(|p| p.target() == w).collect();
            if ps.is_empty() {
                continue;
            }
            let fam = ps
                .iter()
                .map(|a| {
                    ps.iter()
                        .map(|b| {
                            let x = LeavittMonomial::new((*a).clone(), (*b).clone()).expect("common target");
                            let e = LeavittElement::from_monomial(q.clone(), field, x);
                            index.coordinates(&e).unwrap_or_default()
                        })
                        .collect()
                })
                .collect();
            families.push(fam);
        }
    }
    families
}

impl StageAlgebra {
    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn dim(&self) -> usize {
        self.index.len()
    }

    pub fn basis(&self) -> &[LeavittMonomial] {
        self.index.basis()
    }

    pub fn index(&self) -> &MonomialIndex {
        &self.index
    }

    pub fn algebra(&self) -> &FinDimAlgebra {
        &self.algebra
    }

    pub fn wedderburn(&self) -> &Wedderburn {
        &self.wedderburn
    }

    pub fn method(&self) -> DecompositionMethod {
        self.method
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut b = self.wedderburn.block_sizes();
        b.sort_unstable();
        b
    }

    /// `k × M2(k)` style description of the block structure.
    pub fn describe(&self) -> String {
        self.block_sizes()
            .iter()
            .map(|&s| if s == 1 { "k".to_string() } else { format!("M{s}(k)") })
            .collect::<Vec<_>>()
            .join(" × ")
    }

    /// The inclusion into the next stage, as a `dim(next) × dim` matrix.
    pub fn embedding(&self, next: &StageAlgebra) -> Option<Matrix> {
        let field = self.algebra.field();
        let mut e = Matrix::zeros(field, next.dim(), self.dim());
        for (k, b) in self.basis().iter().enumerate() {
            e.set(next.index.position(b)?, k, field.one());
        }
        Some(e)
    }

    /// The inclusion is unital and multiplicative on basis pairs.
    pub fn embedding_is_algebra_map(&self, next: &StageAlgebra) -> bool {
        let Some(e) = self.embedding(next) else {
            return false;
        };
        let field = self.algebra.field();
        let image = |v: &SparseVec| -> SparseVec {
            let dense = e.apply(&qhw_linalg::sparse::to_dense(field, v, self.dim()));
            qhw_linalg::sparse::from_dense(&dense)
        };
        if image(self.algebra.unit()) != *next.algebra.unit() {
            return false;
        }
        (0..self.dim()).all(|i| {
            (0..self.dim()).all(|j| {
                let lhs = image(self.algebra.product(i, j));
                let rhs = next.algebra.mul(&image(&self.algebra.basis_vector(i)), &image(&self.algebra.basis_vector(j)));
                lhs == rhs
            })
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingReport {
    /// `dim X ⊗_{L⁰} Y` over the stage algebra.
    pub tensor_dim: usize,
    pub stage_dim: usize,
    pub image_rank: usize,
    pub lands_in_stage: bool,
    pub surjective: bool,
    pub bijective: bool,
}

/// Stage-`m` slices of `L^d` and `L^{-d}` as bimodules over the stage
/// algebra, with both multiplication pairings.
#[derive(Clone, Debug)]
pub struct BimoduleStage {
    pub degree: i64,
    pub stage: usize,
    pub basis: Vec<LeavittMonomial>,
    pub dual_basis: Vec<LeavittMonomial>,
    /// Left and right actions of the stage basis on `L^d`, then on `L^{-d}`.
    pub left: Vec<Matrix>,
    pub right: Vec<Matrix>,
    pub dual_left: Vec<Matrix>,
    pub dual_right: Vec<Matrix>,
    /// `L^d ⊗ L^{-d} → L^0`.
    pub forward: PairingReport,
    /// `L^{-d} ⊗ L^d → L^0`.
    pub backward: PairingReport,
    /// Structure constants of the pairings in the stage basis, when they land there.
    pub forward_table: Option<Vec<Vec<SparseVec>>>,
    pub backward_table: Option<Vec<Vec<SparseVec>>>,
}

fn require_sink_free(q: &Quiver) -> Result<(), LeavittError> {
    match q.classify_vertices().0.first() {
        Some(&v) => Err(LeavittError::HasSink(q.vertex_name(v).to_string())),
        None => Ok(()),
    }
}

fn action_matrices(
    stage: &StageAlgebra,
    slice: &MonomialIndex,
    left: bool,
) -> Result<Vec<Matrix>, LeavittError> {
    let q = stage.quiver();
    let field = stage.algebra.field();
    let xs: Vec<LeavittElement> = (0..slice.len()).map(|k| slice.monomial(q, field, k)).collect();
    (0..stage.dim())
        .map(|b| {
            let be = stage.index.monomial(q, field, b);
            let mut mat = Matrix::zeros(field, slice.len(), slice.len());
            for (k, x) in xs.iter().enumerate() {
                let p = if left { be.multiply(x)? } else { x.multiply(&be)? };
                let v = slice
                    .coordinates(&p)
                    .ok_or_else(|| LeavittError::NotClosed("stage action on a slice".into()))?;
                for (r, c) in v {
                    mat.set(r, k, c);
                }
            }
            Ok(mat)
        })
        .collect()
}

struct Span {
    image_rank: usize,
    surjective: bool,
    table: Option<Vec<Vec<SparseVec>>>,
}

/// Products `x_i y_j`: their rank, whether they span the stage, and their
/// stage coordinates when all of them lie in the stage.
fn product_span(stage: &StageAlgebra, x: &MonomialIndex, y: &MonomialIndex) -> Result<Span, LeavittError> {
    let q = stage.quiver();
    let field = stage.algebra.field();
    let ys: Vec<LeavittElement> = (0..y.len()).map(|j| y.monomial(q, field, j)).collect();
    let mut products = Vec::new();
    for i in 0..x.len() {
        let xi = x.monomial(q, field, i);
        let row: Vec<LeavittElement> = ys.iter().map(|yj| xi.multiply(yj)).collect::<Result<_, _>>()?;
        products.push(row);
    }
    // ambient coordinates: the stage basis, then whatever else appears
    let mut ambient: Vec<LeavittMonomial> = stage.basis().to_vec();
    for p in products.iter().flatten() {
        for m in p.terms().keys() {
            if stage.index.position(m).is_none() {
                ambient.push(m.clone());
            }
        }
    }
    ambient.sort();
    ambient.dedup();
    let ambient = MonomialIndex::new(ambient);
    let mut span = Echelon::new(field, ambient.len());
    for p in products.iter().flatten() {
        span.insert(ambient.coordinates(p).expect("ambient covers products"));
    }
    let surjective = stage.basis().iter().all(|b| {
        let v = vec![(ambient.position(b).expect("stage basis is ambient"), field.one())];
        span.contains(&v)
    });
    let table = products
        .iter()
        .map(|row| row.iter().map(|p| stage.index.coordinates(p)).collect())
        .collect();
    Ok(Span {
        image_rank: span.rank(),
        surjective,
        table,
    })
}

fn pairing_report(span: &Span, stage_dim: usize, tensor_dim: usize) -> PairingReport {
    let lands_in_stage = span.table.is_some();
    PairingReport {
        tensor_dim,
        stage_dim,
        image_rank: span.image_rank,
        lands_in_stage,
        surjective: span.surjective,
        bijective: lands_in_stage && span.surjective && span.image_rank == tensor_dim,
    }
}

pub fn bimodule_stage(q: &Arc<Quiver>, d: i64, m: usize, field: Field) -> Result<BimoduleStage, LeavittError> {
    require_sink_free(q)?;
    let stage = stage_algebra(q, m, field)?;
    bimodule_over(&stage, d)
}

/// As [`bimodule_stage`], reusing a computed stage algebra.
pub fn bimodule_over(stage: &StageAlgebra, d: i64) -> Result<BimoduleStage, LeavittError> {
    require_sink_free(stage.quiver())?;
    let m = stage.stage();
    let x = MonomialIndex::new(slice_basis(stage.quiver(), d, m));
    let y = MonomialIndex::new(slice_basis(stage.quiver(), -d, m));
    let left = action_matrices(stage, &x, true)?;
    let right = action_matrices(stage, &x, false)?;
    let dual_left = action_matrices(stage, &y, true)?;
    let dual_right = action_matrices(stage, &y, false)?;
    let field = stage.algebra.field();
    let forward = product_span(stage, &x, &y)?;
    let backward = product_span(stage, &y, &x)?;
    let forward_report = pairing_report(&forward, stage.dim(), balanced_tensor(field, &right, &dual_left).dim());
    let backward_report = pairing_report(&backward, stage.dim(), balanced_tensor(field, &dual_right, &left).dim());
    Ok(BimoduleStage {
        degree: d,
        stage: m,
        basis: x.basis().to_vec(),
        dual_basis: y.basis().to_vec(),
        left,
        right,
        dual_left,
        dual_right,
        forward: forward_report,
        backward: backward_report,
        forward_table: forward.table,
        backward_table: backward.table,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrongGradingReport {
    pub stage: usize,
    pub stage_dim: usize,
    /// `L¹ L⁻¹ ⊇ L⁰` at this stage.
    pub plus_minus: bool,
    /// `L⁻¹ L¹ ⊇ L⁰` at this stage.
    pub minus_plus: bool,
    pub pass: bool,
}

pub fn verify_strongly_graded(q: &Arc<Quiver>, m: usize, field: Field) -> Result<StrongGradingReport, LeavittError> {
    require_sink_free(q)?;
    let stage = stage_algebra(q, m, field)?;
    let x = MonomialIndex::new(slice_basis(q, 1, m));
    let y = MonomialIndex::new(slice_basis(q, -1, m));
    let plus_minus = product_span(&stage, &x, &y)?.surjective;
    let minus_plus = product_span(&stage, &y, &x)?.surjective;
    Ok(StrongGradingReport {
        stage: m,
        stage_dim: stage.dim(),
        plus_minus,
        minus_plus,
        pass: plus_minus && minus_plus,
    })
}
