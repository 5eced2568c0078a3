use std::collections::HashMap;

use qhw_linalg::sparse::normalize;
use qhw_linalg::{Echelon, Field, Scalar, SparseMatrix, SparseVec};
use qhw_pathalg::PathElement;
use qhw_quiver::Path;
use rayon::prelude::*;
use serde::Serialize;

use crate::window::{KBasis, KoszulWindow};

/// A right `A`-linear map `K^{-n} → K^{-n'}` determined by one generator.
///
/// Both send the generator `(source, 0)` of `K^{-n}` somewhere and every
/// other generator to zero; `source` and `target` share their starting vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EndBasis {
    /// `(source, 0) ↦ (target, 0)`.
    Head { source: Path, target: Path },
    /// `(source, 0) ↦ (0, target)`.
    Tail { source: Path, target: Path },
}

impl EndBasis {
    pub fn source_len(&self) -> usize {
        match self {
            EndBasis::Head { source, .. } | EndBasis::Tail { source, .. } => source.len(),
        }
    }

    /// `n'` with the map landing in `K^{-n'}`.
    pub fn target_degree(&self) -> usize {
        match self {
            EndBasis::Head { target, .. } => target.len(),
            EndBasis::Tail { target, .. } => target.len() - 1,
        }
    }
}

/// Homogeneous right `A`-linear maps from the window `K^0, …, K^{-N}` into `K`,
/// in degrees `-1..=N`, with `d(f) = d_K f - (-1)^{|f|} f d_K`.
///
/// The target runs one step past the window so that degree `-1` is complete;
/// this makes the degree-zero cohomology exact.
#[derive(Clone, Debug)]
pub struct EndComplexWindow {
    field: Field,
    depth: usize,
    basis: Vec<Vec<EndBasis>>,
    index: Vec<HashMap<EndBasis, usize>>,
    /// `d^m` for `m = -1..N`.
    differentials: Vec<SparseMatrix>,
}

const LO: i64 = -1;

impl EndComplexWindow {
    pub fn build(kw: &KoszulWindow) -> EndComplexWindow {
        Self::build_with_target(kw, kw.depth() + 1)
    }

    /// The endomorphism complex of the brutally truncated window itself
    /// (targets limited to `K^{-N}`). Its degree-zero cohomology picks up
    /// classes supported at the edge.
    pub fn build_truncated(kw: &KoszulWindow) -> EndComplexWindow {
        Self::build_with_target(kw, kw.depth())
    }

    fn build_with_target(kw: &KoszulWindow, target_depth: usize) -> EndComplexWindow {
        let q = kw.quiver();
        let nv = q.vertex_count();
        let depth = kw.depth();
        let by_source: Vec<Vec<Vec<Path>>> = (0..=depth + 2)
            .map(|l| {
                let mut out = vec![Vec::new(); nv];
                for p in kw.paths(l) {
                    out[p.source()].push(p.clone());
                }
                out
            })
            .collect();
        let hi = depth as i64;
        let basis: Vec<Vec<EndBasis>> = (LO..=hi)
            .into_par_iter()
            .map(|m| {
                let mut heads = Vec::new();
                let mut tails = Vec::new();
                for n in m.max(0) as usize..=depth {
                    let n2 = n as i64 - m;
                    if n2 < 0 || n2 as usize > target_depth {
                        continue;
                    }
                    let n2 = n2 as usize;
                    for a in kw.paths(n) {
                        for t in &by_source[n2][a.source()] {
                            heads.push(EndBasis::Head {
                                source: a.clone(),
                                target: t.clone(),
                            });
                        }
                        for t in &by_source[n2 + 1][a.source()] {
                            tails.push(EndBasis::Tail {
                                source: a.clone(),
                                target: t.clone(),
                            });
                        }
                    }
                }
                heads.extend(tails);
                heads
            })
            .collect();
        let index: Vec<HashMap<EndBasis, usize>> = basis
            .par_iter()
            .map(|b| b.iter().cloned().enumerate().map(|(k, e)| (e, k)).collect())
            .collect();
        let field = kw.field();
        let differentials = (LO..hi)
            .into_par_iter()
            .map(|m| {
                let k = (m - LO) as usize;
                let next = &index[k + 1];
                let sign = field.one().negate_if(m.rem_euclid(2) == 0);
                let columns: Vec<SparseVec> = basis[k]
                    .par_iter()
                    .map(|e| {
                        let EndBasis::Head { source: a, target: t } = e else {
                            return Vec::new();
                        };
                        let mut col = Vec::new();
                        // d_K ∘ f sends (a, 0) to (0, t)
                        if t.len() >= 1 {
                            let key = EndBasis::Tail {
                                source: a.clone(),
                                target: t.clone(),
                            };
                            col.push((next[&key], field.one()));
                        }
                        // f ∘ d_K sends (a y, 0) to f((0, a y)) = (0, t y)
                        if a.len() < depth {
                            for y in q.arrows_to(a.source()) {
                                let y = Path::arrow(q, y);
                                let key = EndBasis::Tail {
                                    source: a.compose(&y).unwrap(),
                                    target: t.compose(&y).unwrap(),
                                };
                                if let Some(&i) = next.get(&key) {
                                    col.push((i, sign.clone()));
                                }
                            }
                        }
                        normalize(col)
                    })
                    .collect();
                SparseMatrix::new(field, basis[k + 1].len(), columns)
            })
            .collect();
        EndComplexWindow {
            field,
            depth,
            basis,
            index,
            differentials,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        LO..=self.depth as i64
    }

    pub fn dim(&self, m: i64) -> usize {
        self.basis[(m - LO) as usize].len()
    }

    pub fn basis(&self, m: i64) -> &[EndBasis] {
        &self.basis[(m - LO) as usize]
    }

    pub fn basis_index(&self, m: i64, e: &EndBasis) -> Option<usize> {
        self.index[(m - LO) as usize].get(e).copied()
    }

    /// `d^m: End^m → End^{m+1}` for `-1 ≤ m < N`.
    pub fn differential(&self, m: i64) -> &SparseMatrix {
        &self.differentials[(m - LO) as usize]
    }

    /// `d^{m+1} d^m = 0` for every consecutive pair.
    pub fn squares_to_zero(&self) -> bool {
        self.differentials
            .windows(2)
            .all(|w| w[1].compose(&w[0]).is_zero())
    }

    /// `dim H^m` for `0 ≤ m ≤ N - 1`.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.differentials.par_iter().map(SparseMatrix::rank).collect();
        (0..self.depth as i64)
            .map(|m| {
                let k = (m - LO) as usize;
                self.dim(m) - ranks[k] - ranks[k - 1]
            })
            .collect()
    }

    /// The component `K^{-n} → K^{-n+m}` of the degree-`m` element `f`, on a
    /// Koszul window deep enough to hold the target.
    pub fn component(&self, kw: &KoszulWindow, m: i64, f: &SparseVec, n: usize) -> SparseMatrix {
        let n2 = (n as i64 - m) as usize;
        let rows = kw.dim(n2);
        let mut columns: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); kw.dim(n)];
        for (i, c) in f {
            let (a, image) = match &self.basis(m)[*i] {
                EndBasis::Head { source, target } if source.len() == n => {
                    (source, KBasis::Head(target.clone()))
                }
                EndBasis::Tail { source, target } if source.len() == n => {
                    (source, KBasis::Tail(target.clone()))
                }
                _ => continue,
            };
            columns[kw.basis_index(n, &KBasis::Head(a.clone()))]
                .push((kw.basis_index(n2, &image), c.clone()));
            // (a y, 0)-tails: (0, a y) = (a, 0).(0, y)
            if let KBasis::Head(t) = &image {
                for y in kw.quiver().arrows_to(a.source()) {
                    let y = Path::arrow(kw.quiver(), y);
                    let from = KBasis::Tail(a.compose(&y).unwrap());
                    let to = KBasis::Tail(t.compose(&y).unwrap());
                    columns[kw.basis_index(n, &from)].push((kw.basis_index(n2, &to), c.clone()));
                }
            }
        }
        SparseMatrix::new(self.field, rows, columns.into_iter().map(normalize).collect())
    }

    /// `ρ(x)`, the left action of a homogeneous `x ∈ B` of length `l`, as an element of `End^l`.
    pub fn rho(&self, kw: &KoszulWindow, x: &PathElement) -> SparseVec {
        let mut out = Vec::new();
        for (p, lambda) in x.terms() {
            let l = p.len();
            for n in l..=self.depth {
                let sign = lambda.negate_if((l * n) % 2 == 1);
                for a in kw.paths(n) {
                    if let Some(rest) = a.strip_prefix(kw.quiver(), p) {
                        let e = EndBasis::Head {
                            source: a.clone(),
                            target: rest,
                        };
                        let i = self.basis_index(l as i64, &e).expect("ρ lands in the window");
                        out.push((i, sign.clone()));
                    }
                }
            }
        }
        normalize(out)
    }

    /// Checks that `ρ(Q_m)` consists of cocycles independent modulo coboundaries,
    /// and the witness value `ρ(p)((p, 0)) = (-1)^m (e_{s(p)}, 0)`.
    pub fn check_rho(&self, kw: &KoszulWindow, m: usize) -> RhoCheck {
        let md = m as i64;
        let field = self.field;
        let images: Vec<SparseVec> = kw
            .paths(m)
            .iter()
            .map(|p| self.rho(kw, &PathElement::from_path(kw.quiver().clone(), field, p.clone())))
            .collect();
        let cocycles = md >= self.depth as i64
            || images.iter().all(|v| self.differential(md).apply(v).is_empty());
        let mut span = Echelon::new(field, self.dim(md));
        for c in self.differential(md - 1).columns() {
            span.insert(c.clone());
        }
        let boundary_rank = span.rank();
        for v in &images {
            span.insert(v.clone());
        }
        let independent = span.rank() - boundary_rank == images.len();
        let witness = kw.paths(m).iter().zip(&images).all(|(p, v)| {
            let e = EndBasis::Head {
                source: p.clone(),
                target: Path::trivial(p.source()),
            };
            let i = self.basis_index(md, &e).unwrap();
            let expected = field.one().negate_if(m % 2 == 1);
            v.iter().any(|(j, c)| *j == i && *c == expected)
        });
        RhoCheck {
            degree: md,
            cocycles,
            independent,
            witness,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RhoCheck {
    pub degree: i64,
    pub cocycles: bool,
    pub independent: bool,
    pub witness: bool,
}

impl RhoCheck {
    pub fn pass(&self) -> bool {
        self.cocycles && self.independent && self.witness
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndDegree {
    pub degree: i64,
    pub dim: usize,
    pub expected: usize,
    pub pass: bool,
}

/// `dim H^n(End(K))` against `|Q_n|` on the reliable range `0 ≤ n ≤ N - 2`,
/// with `ρ` checked in each degree.
pub fn end_cohomology_dims(kw: &KoszulWindow) -> Vec<EndDegree> {
    let end = EndComplexWindow::build(kw);
    let dims = end.cohomology_dims();
    (0..kw.depth().saturating_sub(1))
        .into_par_iter()
        .map(|n| {
            let expected = kw.paths(n).len();
            let rho = end.check_rho(kw, n);
            EndDegree {
                degree: n as i64,
                dim: dims[n],
                expected,
                pass: dims[n] == expected && rho.pass(),
            }
        })
        .collect()
}
