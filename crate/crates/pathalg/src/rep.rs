use std::collections::HashMap;
use std::sync::Arc;

use qhw_linalg::{Echelon, Field, Matrix, QuotientSpace, SparseMatrix};
use qhw_linalg::sparse::from_dense;
use qhw_quiver::{Path, Quiver};
use serde::Serialize;

use crate::graded::summand_basis;
use crate::{GradedFreeMap, PathAlgError, Side};

/// A graded right `kQ`-module stored degreewise on `[lo, hi]`.
///
/// `action(n, α)` maps `N^n e_{t(α)}` to `N^{n+1} e_{s(α)}` by `y ↦ yα`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedRep {
    quiver: Arc<Quiver>,
    field: Field,
    lo: i64,
    hi: i64,
    dims: Vec<Vec<usize>>,
    action: Vec<Vec<Matrix>>,
    /// The module may be nonzero above `hi`.
    truncated_above: bool,
}

impl GradedRep {
    pub fn new(
        quiver: Arc<Quiver>,
        field: Field,
        lo: i64,
        dims: Vec<Vec<usize>>,
        action: Vec<Vec<Matrix>>,
        truncated_above: bool,
    ) -> Result<GradedRep, PathAlgError> {
        let len = dims.len() as i64;
        if len == 0 || action.len() as i64 != len - 1 {
            return Err(PathAlgError::InvalidMap(
                "need one action layer between consecutive degrees".into(),
            ));
        }
        for (k, layer) in action.iter().enumerate() {
            if layer.len() != quiver.arrow_count() {
                return Err(PathAlgError::InvalidMap("one matrix per arrow".into()));
            }
            for (a, m) in layer.iter().enumerate() {
                let arrow = quiver.arrow(a);
                if m.rows() != dims[k + 1][arrow.source] || m.cols() != dims[k][arrow.target] {
                    return Err(PathAlgError::InvalidMap(format!(
                        "action of `{}` in degree {} has the wrong shape",
                        arrow.name,
                        lo + k as i64
                    )));
                }
            }
        }
        Ok(GradedRep {
            quiver,
            field,
            lo,
            hi: lo + len - 1,
            dims,
            action,
            truncated_above,
        })
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn is_truncated_above(&self) -> bool {
        self.truncated_above
    }

    /// `dim N^n e_v`, zero outside the window.
    pub fn dim(&self, n: i64, v: usize) -> usize {
        if n < self.lo || n > self.hi {
            0
        } else {
            self.dims[(n - self.lo) as usize][v]
        }
    }

    pub fn degree_dim(&self, n: i64) -> usize {
        (0..self.quiver.vertex_count()).map(|v| self.dim(n, v)).sum()
    }

    /// The action of arrow `a` out of degree `n`; `None` when `n + 1` leaves the window.
    pub fn action(&self, n: i64, a: usize) -> Option<&Matrix> {
        if n < self.lo || n >= self.hi {
            None
        } else {
            Some(&self.action[(n - self.lo) as usize][a])
        }
    }

    /// Right action of a path, arrows applied in written order.
    pub fn act_path(&self, n: i64, p: &Path) -> Option<Matrix> {
        let mut m = Matrix::identity(self.field, self.dim(n, p.target()));
        let mut deg = n;
        for &a in p.arrows() {
            m = self.action(deg, a)?.mul(&m);
            deg += 1;
        }
        Some(m)
    }

    /// `N(t)`, whose degree `n` is `N^{n+t}`.
    pub fn twist(&self, t: i64) -> GradedRep {
        GradedRep {
            lo: self.lo - t,
            hi: self.hi - t,
            ..self.clone()
        }
    }

    /// The cokernel of a right-sided graded free map, computed on `[lo, hi]`.
    pub fn cokernel(map: &GradedFreeMap, lo: i64, hi: i64) -> Result<GradedRep, PathAlgError> {
        if map.side() != Side::Right {
            return Err(PathAlgError::InvalidMap("cokernels are built for right modules".into()));
        }
        if hi < lo {
            return Err(PathAlgError::InvalidMap("empty window".into()));
        }
        let q = map.quiver().clone();
        let field = map.field();
        let nv = q.vertex_count();
        let mut layers: Vec<Layer> = Vec::new();
        for n in lo..=hi {
            let src = summand_basis(&q, Side::Right, map.source(), n);
            let tgt = summand_basis(&q, Side::Right, map.target(), n);
            let m = map.matrix_between(&src, &tgt);
            layers.push(Layer::new(field, &tgt.blocks, &m, nv));
        }
        let dims = layers.iter().map(|l| l.quotients.iter().map(|s| s.dim).collect()).collect();
        let mut action = Vec::new();
        for k in 0..layers.len().saturating_sub(1) {
            let (here, next) = (&layers[k], &layers[k + 1]);
            let mut per_arrow = Vec::with_capacity(q.arrow_count());
            for (a, arrow) in q.arrows().iter().enumerate() {
                let (from, to) = (arrow.target, arrow.source);
                let qa = &here.quotients[from];
                let qb = &next.quotients[to];
                let step = Path::arrow(&q, a);
                let mut lifted = Matrix::zeros(field, next.members[to].len(), here.members[from].len());
                for (col, &(r, ref p)) in here.members[from].iter().enumerate() {
                    let image = p.compose(&step).expect("s(p) = t(α)");
                    let row = next.local[to][&(r, image)];
                    lifted.set(row, col, field.one());
                }
                per_arrow.push(qb.projection.mul(&lifted).mul(&qa.section));
            }
            action.push(per_arrow);
        }
        GradedRep::new(q, field, lo, dims, action, !map.target().is_empty())
    }

    /// `⊕ e_i kQ(d)` on `[lo, hi]`.
    pub fn free(
        q: Arc<Quiver>,
        field: Field,
        summands: Vec<(usize, i64)>,
        lo: i64,
        hi: i64,
    ) -> Result<GradedRep, PathAlgError> {
        let entries = vec![Vec::new(); summands.len()];
        let zero = GradedFreeMap::new(q, field, Side::Right, Vec::new(), summands, entries)?;
        GradedRep::cokernel(&zero, lo, hi)
    }

    /// The simple module at vertex `i`, concentrated in degree zero.
    pub fn simple(q: Arc<Quiver>, field: Field, i: usize, lo: i64, hi: i64) -> GradedRep {
        let nv = q.vertex_count();
        let dims: Vec<Vec<usize>> = (lo..=hi)
            .map(|n| (0..nv).map(|v| usize::from(n == 0 && v == i)).collect())
            .collect();
        let action = (lo..hi)
            .map(|k| {
                q.arrows()
                    .iter()
                    .map(|arrow| {
                        let r = dims[(k + 1 - lo) as usize][arrow.source];
                        let c = dims[(k - lo) as usize][arrow.target];
                        Matrix::zeros(field, r, c)
                    })
                    .collect()
            })
            .collect();
        GradedRep::new(q, field, lo, dims, action, false).expect("shapes match by construction")
    }
}

/// One degree of a cokernel, split by the source vertex of the basis paths.
struct Layer {
    /// `(summand, path)` spanning the ambient part at each vertex.
    members: Vec<Vec<(usize, Path)>>,
    local: Vec<HashMap<(usize, Path), usize>>,
    quotients: Vec<QuotientSpace>,
}

impl Layer {
    fn new(field: Field, blocks: &[Vec<Path>], m: &SparseMatrix, nv: usize) -> Layer {
        let mut members = vec![Vec::new(); nv];
        let mut local = vec![HashMap::new(); nv];
        let mut global = Vec::new();
        for (r, block) in blocks.iter().enumerate() {
            for p in block {
                let v = p.source();
                local[v].insert((r, p.clone()), members[v].len());
                global.push((v, members[v].len()));
                members[v].push((r, p.clone()));
            }
        }
        let mut echelons: Vec<Echelon> =
            (0..nv).map(|v| Echelon::new(field, members[v].len())).collect();
        for col in m.columns() {
            let Some(&(first, _)) = col.first() else {
                continue;
            };
            let v = global[first].0;
            let dense = {
                let mut d = vec![field.zero(); members[v].len()];
                for (i, c) in col {
                    debug_assert_eq!(global[*i].0, v, "maps preserve the source vertex");
                    d[global[*i].1] = c.clone();
                }
                d
            };
            echelons[v].insert(from_dense(&dense));
        }
        Layer {
            members,
            local,
            quotients: echelons.iter().map(QuotientSpace::from_echelon).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HomExt {
    pub hom: usize,
    pub ext1: usize,
    /// A degree used lies on the upper edge of a truncated window.
    pub truncated: bool,
}

/// `dim Hom_Gr(M, N(t))` and `dim Ext¹_Gr(M, N(t))` for `M = coker(F_1 → F_0)`.
///
/// The presentation must be injective (a projective resolution over the
/// hereditary `kQ`); then `Hom(F_0, N(t)) → Hom(F_1, N(t))` has kernel `Hom`
/// and cokernel `Ext¹`.
pub fn graded_hom_ext(
    presentation: &GradedFreeMap,
    n: &GradedRep,
    t: i64,
) -> Result<HomExt, PathAlgError> {
    if presentation.side() != Side::Right {
        return Err(PathAlgError::InvalidMap("presentations are of right modules".into()));
    }
    if presentation.quiver().as_ref() != n.quiver().as_ref() {
        return Err(PathAlgError::QuiverMismatch);
    }
    let (lo, hi) = n.window();
    // Hom(e_i kQ(d), N(t)) = N^{t-d} e_i
    let needed = |(_, d): &(usize, i64)| t - d;
    let mut truncated = false;
    for s in presentation.source().iter().chain(presentation.target()) {
        let m = needed(s);
        if m < lo || m > hi {
            return Err(PathAlgError::WindowTooSmall { needed: m, lo, hi });
        }
        truncated |= m == hi && n.is_truncated_above();
    }
    let offsets = |summands: &[(usize, i64)]| {
        let mut out = vec![0usize];
        for s in summands {
            out.push(out.last().unwrap() + n.dim(needed(s), s.0));
        }
        out
    };
    let col_off = offsets(presentation.target());
    let row_off = offsets(presentation.source());
    let mut m = Matrix::zeros(n.field(), *row_off.last().unwrap(), *col_off.last().unwrap());
    for (r, tgt) in presentation.target().iter().enumerate() {
        for (c, _) in presentation.source().iter().enumerate() {
            for (x, coeff) in presentation.entry(r, c).terms() {
                let act = n
                    .act_path(needed(tgt), x)
                    .expect("degrees between two window degrees");
                for i in 0..act.rows() {
                    for j in 0..act.cols() {
                        let v = act.get(i, j);
                        if !v.is_zero() {
                            m.add_at(row_off[c] + i, col_off[r] + j, &(v * coeff));
                        }
                    }
                }
            }
        }
    }
    let rank = m.rank();
    Ok(HomExt {
        hom: m.cols() - rank,
        ext1: m.rows() - rank,
        truncated,
    })
}


#[cfg(test)]
impl GradedRep {
    fn with_truncation(mut self, t: bool) -> GradedRep {
        self.truncated_above = t;
        self
    }
}
