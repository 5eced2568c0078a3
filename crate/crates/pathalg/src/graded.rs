use std::collections::HashMap;
use std::sync::Arc;

use qhw_linalg::{Field, SparseMatrix};
use qhw_linalg::sparse::normalize;
use qhw_quiver::{Path, Quiver};
use serde::{Deserialize, Serialize};

use crate::{PathAlgError, PathElement};

/// Which side `kQ` acts on the free modules.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Summands `e_i kQ(d)`, spanned by paths ending at `i`; maps act by `p ↦ x p`.
    #[default]
    Right,
    /// Summands `kQ e_i(d)`, spanned by paths starting at `i`; maps act by `p ↦ p x`.
    Left,
}

/// A homogeneous map `⊕_c F(src_c, d_c) → ⊕_r F(tgt_r, d_r)` of graded free modules.
///
/// Entry `(r, c)` is homogeneous of length `d_r - d_c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedFreeMap {
    quiver: Arc<Quiver>,
    field: Field,
    side: Side,
    source: Vec<(usize, i64)>,
    target: Vec<(usize, i64)>,
    entries: Vec<Vec<PathElement>>,
}

/// Basis of one degree of a graded free module, one block per summand.
pub(crate) struct DegreeBasis {
    pub blocks: Vec<Vec<Path>>,
    pub offsets: Vec<usize>,
    pub index: Vec<HashMap<Path, usize>>,
}

impl DegreeBasis {
    pub fn dim(&self) -> usize {
        self.offsets.last().copied().unwrap_or(0)
    }
}

impl GradedFreeMap {
    pub fn new(
        quiver: Arc<Quiver>,
        field: Field,
        side: Side,
        source: Vec<(usize, i64)>,
        target: Vec<(usize, i64)>,
        entries: Vec<Vec<PathElement>>,
    ) -> Result<GradedFreeMap, PathAlgError> {
        let nv = quiver.vertex_count();
        if source.iter().chain(&target).any(|&(v, _)| v >= nv) {
            return Err(PathAlgError::InvalidMap("vertex out of range".into()));
        }
        if entries.len() != target.len() || entries.iter().any(|r| r.len() != source.len()) {
            return Err(PathAlgError::InvalidMap(format!(
                "entry matrix must be {}x{}",
                target.len(),
                source.len()
            )));
        }
        for (r, row) in entries.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                if x.quiver().as_ref() != quiver.as_ref() {
                    return Err(PathAlgError::QuiverMismatch);
                }
                let len = target[r].1 - source[c].1;
                let (t, s) = match side {
                    Side::Right => (target[r].0, source[c].0),
                    Side::Left => (source[c].0, target[r].0),
                };
                for (p, _) in x.terms() {
                    if p.len() as i64 != len || p.target() != t || p.source() != s {
                        return Err(PathAlgError::InvalidMap(format!(
                            "entry ({r}, {c}) = {x} is not in degree {len} from {} to {}",
                            quiver.vertex_name(s),
                            quiver.vertex_name(t)
                        )));
                    }
                }
            }
        }
        Ok(GradedFreeMap {
            quiver,
            field,
            side,
            source,
            target,
            entries,
        })
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn source(&self) -> &[(usize, i64)] {
        &self.source
    }

    pub fn target(&self) -> &[(usize, i64)] {
        &self.target
    }

    pub fn entry(&self, r: usize, c: usize) -> &PathElement {
        &self.entries[r][c]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(PathElement::is_zero)
    }

    /// Adds `k` to every shift.
    pub fn shift(&self, k: i64) -> GradedFreeMap {
        let bump = |v: &[(usize, i64)]| v.iter().map(|&(i, d)| (i, d + k)).collect();
        GradedFreeMap {
            source: bump(&self.source),
            target: bump(&self.target),
            ..self.clone()
        }
    }

    pub(crate) fn degree_basis(&self, summands: &[(usize, i64)], n: i64) -> DegreeBasis {
        summand_basis(&self.quiver, self.side, summands, n)
    }

    /// The linear map in degree `n`, columns indexed by the source basis.
    pub fn degree_matrix(&self, n: i64) -> SparseMatrix {
        let src = self.degree_basis(&self.source, n);
        let tgt = self.degree_basis(&self.target, n);
        self.matrix_between(&src, &tgt)
    }

    pub(crate) fn matrix_between(&self, src: &DegreeBasis, tgt: &DegreeBasis) -> SparseMatrix {
        let mut columns = Vec::with_capacity(src.dim());
        for (c, block) in src.blocks.iter().enumerate() {
            for p in block {
                let mut col = Vec::new();
                for (r, row) in self.entries.iter().enumerate() {
                    for (x, a) in row[c].terms() {
                        let image = match self.side {
                            Side::Right => x.compose(p),
                            Side::Left => p.compose(x),
                        }
                        .expect("endpoints checked at construction");
                        let k = tgt.index[r][&image];
                        col.push((tgt.offsets[r] + k, a.clone()));
                    }
                }
                columns.push(normalize(col));
            }
        }
        SparseMatrix::new(self.field, tgt.dim(), columns)
    }

    /// `self ∘ other`, defined when `other`'s target is `self`'s source.
    pub fn compose(&self, other: &GradedFreeMap) -> Result<GradedFreeMap, PathAlgError> {
        if self.side != other.side
            || self.quiver != other.quiver
            || self.source != other.target
        {
            return Err(PathAlgError::NotComposable(
                "source of the outer map differs from the target of the inner map".into(),
            ));
        }
        let mut entries = Vec::with_capacity(self.target.len());
        for row in &self.entries {
            let mut out = Vec::with_capacity(other.source.len());
            for c in 0..other.source.len() {
                let mut acc = PathElement::zero(self.quiver.clone(), self.field);
                for (k, x) in row.iter().enumerate() {
                    let y = &other.entries[k][c];
                    let prod = match self.side {
                        Side::Right => x.multiply(y)?,
                        Side::Left => y.multiply(x)?,
                    };
                    acc = acc.add(&prod)?;
                }
                out.push(acc);
            }
            entries.push(out);
        }
        GradedFreeMap::new(
            self.quiver.clone(),
            self.field,
            self.side,
            other.source.clone(),
            self.target.clone(),
            entries,
        )
    }

    /// The dual map over the opposite quiver: source and target swap, shifts
    /// negate, the matrix transposes and every path is read backwards.
    pub fn transpose_dual(&self) -> GradedFreeMap {
        let op = Arc::new(self.quiver.opposite());
        let negate = |v: &[(usize, i64)]| v.iter().map(|&(i, d)| (i, -d)).collect();
        let entries = (0..self.source.len())
            .map(|c| {
                (0..self.target.len())
                    .map(|r| {
                        let mut e = PathElement::zero(op.clone(), self.field);
                        for (p, a) in self.entries[r][c].terms() {
                            e.add_term(p.reversed(), a);
                        }
                        e
                    })
                    .collect()
            })
            .collect();
        GradedFreeMap {
            quiver: op,
            field: self.field,
            side: self.side,
            source: negate(&self.target),
            target: negate(&self.source),
            entries,
        }
    }

    pub fn to_json(&self) -> GradedMapJson {
        let named = |v: &[(usize, i64)]| {
            v.iter()
                .map(|&(i, d)| (self.quiver.vertex_name(i).to_string(), d))
                .collect()
        };
        GradedMapJson {
            side: self.side,
            source: named(&self.source),
            target: named(&self.target),
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|x| x.to_string()).collect())
                .collect(),
        }
    }

    pub fn from_json(
        quiver: Arc<Quiver>,
        field: Field,
        json: &GradedMapJson,
    ) -> Result<GradedFreeMap, PathAlgError> {
        let resolve = |v: &[(String, i64)]| -> Result<Vec<(usize, i64)>, PathAlgError> {
            v.iter()
                .map(|(name, d)| {
                    quiver
                        .vertex_index(name)
                        .map(|i| (i, *d))
                        .ok_or_else(|| PathAlgError::Parse(format!("unknown vertex `{name}`")))
                })
                .collect()
        };
        let source = resolve(&json.source)?;
        let target = resolve(&json.target)?;
        let entries = json
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| PathElement::parse(quiver.clone(), field, s))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        GradedFreeMap::new(quiver, field, json.side, source, target, entries)
    }
}

/// Serialized form of a [`GradedFreeMap`]; entries are path expressions such as `2*a.b - c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedMapJson {
    #[serde(default)]
    pub side: Side,
    pub source: Vec<(String, i64)>,
    pub target: Vec<(String, i64)>,
    pub entries: Vec<Vec<String>>,
}

/// Paths of the given length grouped by their endpoint.
fn paths_by_endpoint(q: &Quiver, side: Side, len: usize) -> Vec<Vec<Path>> {
    let mut out = vec![Vec::new(); q.vertex_count()];
    for p in q.enumerate_paths(len) {
        let v = match side {
            Side::Right => p.target(),
            Side::Left => p.source(),
        };
        out[v].push(p);
    }
    out
}

pub(crate) fn summand_basis(
    q: &Quiver,
    side: Side,
    summands: &[(usize, i64)],
    n: i64,
) -> DegreeBasis {
    let mut cache: HashMap<i64, Vec<Vec<Path>>> = HashMap::new();
    let mut blocks = Vec::with_capacity(summands.len());
    let mut offsets = vec![0];
    let mut index = Vec::with_capacity(summands.len());
    for &(v, d) in summands {
        let len = n + d;
        let block = if len < 0 {
            Vec::new()
        } else {
            cache
                .entry(len)
                .or_insert_with(|| paths_by_endpoint(q, side, len as usize))[v]
                .clone()
        };
        offsets.push(offsets.last().unwrap() + block.len());
        index.push(block.iter().cloned().enumerate().map(|(k, p)| (p, k)).collect());
        blocks.push(block);
    }
    DegreeBasis {
        blocks,
        offsets,
        index,
    }
}

fn arrow_element(q: &Arc<Quiver>, field: Field, a: usize) -> PathElement {
    PathElement::from_path(q.clone(), field, Path::arrow(q, a))
}

/// `η_i : e_i kQ(-1) → ⊕_{s(α)=i} e_{t(α)} kQ`, `p ↦ Σ α p`.
pub fn eta_map(q: &Arc<Quiver>, i: usize, field: Field) -> Result<GradedFreeMap, PathAlgError> {
    let out = q.arrows_from(i);
    if out.is_empty() {
        return Err(PathAlgError::VertexIsSink(q.vertex_name(i).to_string()));
    }
    let target = out.iter().map(|&a| (q.arrow(a).target, 0)).collect();
    let entries = out.iter().map(|&a| vec![arrow_element(q, field, a)]).collect();
    GradedFreeMap::new(q.clone(), field, Side::Right, vec![(i, -1)], target, entries)
}

/// `ξ_i : ⊕_{t(α)=i} e_{s(α)} kQ(-1) → e_i kQ`, `p ↦ α p`; the empty map at a source.
pub fn xi_map(q: &Arc<Quiver>, i: usize, field: Field) -> GradedFreeMap {
    let inc = q.arrows_to(i);
    let source = inc.iter().map(|&a| (q.arrow(a).source, -1)).collect();
    let row = inc.iter().map(|&a| arrow_element(q, field, a)).collect();
    GradedFreeMap::new(q.clone(), field, Side::Right, source, vec![(i, 0)], vec![row])
        .expect("arrow entries have the right endpoints")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeExactness {
    pub degree: i64,
    /// The first map is injective in this degree.
    pub injective: bool,
    /// Every middle term is exact.
    pub exact: bool,
    /// Dimension of the cokernel of the last map.
    pub cokernel_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub degrees: Vec<DegreeExactness>,
}

impl ExactnessReport {
    pub fn all_exact(&self) -> bool {
        self.degrees.iter().all(|d| d.injective && d.exact)
    }

    pub fn cokernel_dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.cokernel_dim).collect()
    }
}

/// Checks `0 → F_k → … → F_0` degreewise on `[lo, hi]`: injectivity of the
/// first map, exactness in the middle, and the cokernel dimension at the end.
pub fn verify_exact_window(
    maps: &[GradedFreeMap],
    lo: i64,
    hi: i64,
) -> Result<ExactnessReport, PathAlgError> {
    if maps.is_empty() {
        return Err(PathAlgError::NotComposable("empty sequence".into()));
    }
    for w in maps.windows(2) {
        if w[0].target != w[1].source || w[0].side != w[1].side || w[0].quiver != w[1].quiver {
            return Err(PathAlgError::NotComposable(
                "target of one map differs from the source of the next".into(),
            ));
        }
    }
    let mut degrees = Vec::new();
    for n in lo..=hi {
        let mats: Vec<SparseMatrix> = maps.iter().map(|f| f.degree_matrix(n)).collect();
        let ranks: Vec<usize> = mats.iter().map(SparseMatrix::rank).collect();
        let injective = ranks[0] == mats[0].cols();
        let mut exact = true;
        for k in 1..mats.len() {
            if !mats[k].compose(&mats[k - 1]).is_zero() {
                exact = false;
            }
            // ker f_k = im f_{k-1}
            if mats[k].cols() - ranks[k] != ranks[k - 1] {
                exact = false;
            }
        }
        let last = mats.last().unwrap();
        degrees.push(DegreeExactness {
            degree: n,
            injective,
            exact,
            cokernel_dim: last.rows() - ranks[ranks.len() - 1],
        });
    }
    Ok(ExactnessReport { degrees })
}
