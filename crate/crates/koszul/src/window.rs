use std::collections::HashMap;
use std::sync::Arc;

use qhw_linalg::{BoundedComplex, Echelon, Field, Scalar, SparseMatrix};
use qhw_quiver::{Path, Quiver};
use serde::Serialize;

use crate::end::{end_cohomology_dims, EndDegree};

/// A basis vector of `K^{-n}`: `(a, 0)` with `a ∈ Q_n` or `(0, b)` with `b ∈ Q_{n+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum KBasis {
    Head(Path),
    Tail(Path),
}

/// The terms `K^0, …, K^{-N}` of the Koszul complex.
#[derive(Clone, Debug)]
pub struct KoszulWindow {
    quiver: Arc<Quiver>,
    field: Field,
    depth: usize,
    /// `paths[l]` lists `Q_l` for `l ≤ N + 2`.
    paths: Vec<Vec<Path>>,
    index: Vec<HashMap<Path, usize>>,
}

pub fn build_koszul(q: &Arc<Quiver>, depth: usize, field: Field) -> KoszulWindow {
    assert!(depth >= 1, "the window depth must be at least 1");
    let paths: Vec<Vec<Path>> = (0..=depth + 2).map(|l| q.enumerate_paths(l)).collect();
    let index = paths
        .iter()
        .map(|ps| ps.iter().cloned().enumerate().map(|(k, p)| (p, k)).collect())
        .collect();
    KoszulWindow {
        quiver: q.clone(),
        field,
        depth,
        paths,
        index,
    }
}

impl KoszulWindow {
    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `Q_l`, available for `l ≤ N + 2`.
    pub fn paths(&self, l: usize) -> &[Path] {
        &self.paths[l]
    }

    pub fn path_index(&self, p: &Path) -> usize {
        self.index[p.len()][p]
    }

    /// `dim K^{-n} = |Q_n| + |Q_{n+1}|`.
    pub fn dim(&self, n: usize) -> usize {
        self.paths[n].len() + self.paths[n + 1].len()
    }

    /// Dimensions of `K^0, K^{-1}, …, K^{-N}`.
    pub fn dims(&self) -> Vec<usize> {
        (0..=self.depth).map(|n| self.dim(n)).collect()
    }

    pub fn basis(&self, n: usize) -> Vec<KBasis> {
        self.paths[n]
            .iter()
            .cloned()
            .map(KBasis::Head)
            .chain(self.paths[n + 1].iter().cloned().map(KBasis::Tail))
            .collect()
    }

    pub fn basis_index(&self, n: usize, k: &KBasis) -> usize {
        match k {
            KBasis::Head(a) => self.index[n][a],
            KBasis::Tail(b) => self.paths[n].len() + self.index[n + 1][b],
        }
    }

    pub fn basis_element(&self, n: usize, i: usize) -> KBasis {
        let heads = self.paths[n].len();
        if i < heads {
            KBasis::Head(self.paths[n][i].clone())
        } else {
            KBasis::Tail(self.paths[n + 1][i - heads].clone())
        }
    }

    /// `d^{-n}: K^{-n} → K^{-n+1}` for `1 ≤ n ≤ N`.
    pub fn differential(&self, n: usize) -> SparseMatrix {
        assert!(n >= 1 && n <= self.depth);
        let one = self.field.one();
        let columns = self
            .basis(n)
            .into_iter()
            .map(|k| match k {
                KBasis::Head(a) => vec![(self.basis_index(n - 1, &KBasis::Tail(a)), one.clone())],
                KBasis::Tail(_) => Vec::new(),
            })
            .collect();
        SparseMatrix::new(self.field, self.dim(n - 1), columns)
    }

    /// The window as a cochain complex on `[-N, 0]`.
    pub fn complex(&self) -> BoundedComplex {
        let dims = (0..=self.depth).rev().map(|n| self.dim(n)).collect();
        let differentials = (1..=self.depth).rev().map(|n| self.differential(n)).collect();
        BoundedComplex::new(self.field, -(self.depth as i64), dims, differentials)
            .expect("d² = 0 holds on the Koszul complex")
    }

    /// Number of basis elements of `A = kQ/J²` (vertices, then arrows).
    pub fn algebra_dim(&self) -> usize {
        self.quiver.vertex_count() + self.quiver.arrow_count()
    }

    /// Right action of the `x`-th basis element of `A` on `K^{-n}`:
    /// `(a, b).(x, y) = (ax, bx + ay)`.
    pub fn right_action(&self, n: usize, x: usize) -> SparseMatrix {
        let nv = self.quiver.vertex_count();
        let one = self.field.one();
        let columns = self
            .basis(n)
            .into_iter()
            .map(|k| {
                let image = if x < nv {
                    let fixed = match &k {
                        KBasis::Head(a) => a.source() == x,
                        KBasis::Tail(b) => b.source() == x,
                    };
                    fixed.then_some(k)
                } else {
                    let y = Path::arrow(&self.quiver, x - nv);
                    match &k {
                        KBasis::Head(a) => a.compose(&y).map(KBasis::Tail),
                        KBasis::Tail(_) => None,
                    }
                };
                image
                    .map(|i| vec![(self.basis_index(n, &i), one.clone())])
                    .unwrap_or_default()
            })
            .collect();
        SparseMatrix::new(self.field, self.dim(n), columns)
    }

    /// `p.(a, b) = (-1)^{ln} (δ_p(a), δ_p(b))` for a path `p` of length `l ≤ n`;
    /// returns the sign and the basis index in `K^{-(n-l)}`, or `None` for zero.
    pub fn b_action(&self, p: &Path, n: usize, i: usize) -> Option<(Scalar, usize)> {
        let l = p.len();
        if l > n {
            return None;
        }
        let image = match self.basis_element(n, i) {
            KBasis::Head(a) => KBasis::Head(a.strip_prefix(&self.quiver, p)?),
            KBasis::Tail(b) => KBasis::Tail(b.strip_prefix(&self.quiver, p)?),
        };
        let sign = self.field.one().negate_if((l * n) % 2 == 1);
        Some((sign, self.basis_index(n - l, &image)))
    }

    /// The matrix of `p.(-)` from `K^{-n}` to `K^{-(n-l)}`.
    pub fn b_action_matrix(&self, p: &Path, n: usize) -> Option<SparseMatrix> {
        let l = p.len();
        if l > n {
            return None;
        }
        let columns = (0..self.dim(n))
            .map(|i| {
                self.b_action(p, n, i)
                    .map(|(s, j)| vec![(j, s)])
                    .unwrap_or_default()
            })
            .collect();
        Some(SparseMatrix::new(self.field, self.dim(n - l), columns))
    }

    /// Cohomology of the window: `H^0 = kQ_0` with the radical acting by zero,
    /// `H^{-n} = 0` for `1 ≤ n < N`, and the edge degree `-N` flagged.
    pub fn verify_resolution(&self) -> ResolutionReport {
        let c = self.complex();
        let betti: Vec<usize> = (0..=self.depth)
            .map(|n| c.betti(-(n as i64)).expect("degree in window"))
            .collect();
        let h0 = c.cohomology(0).expect("degree in window");
        let mut boundaries = Echelon::new(self.field, self.dim(0));
        for col in self.differential(1).columns() {
            boundaries.insert(col.clone());
        }
        let nv = self.quiver.vertex_count();
        let radical_acts_trivially = (nv..self.algebra_dim()).all(|x| {
            let act = self.right_action(0, x);
            h0.representatives
                .iter()
                .all(|r| boundaries.contains(&act.apply(r)))
        });
        let interior_acyclic = betti[1..self.depth].iter().all(|&b| b == 0);
        ResolutionReport {
            betti: betti.clone(),
            h0_dim: betti[0],
            expected_h0: nv,
            radical_acts_trivially,
            interior_acyclic,
            truncated_degree: -(self.depth as i64),
            pass: betti[0] == nv && radical_acts_trivially && interior_acyclic,
        }
    }

    /// `d(k.x) = d(k).x` on every basis vector and every basis element of `A`.
    pub fn action_commutes_with_differential(&self) -> bool {
        (1..=self.depth).all(|n| {
            let d = self.differential(n);
            (0..self.algebra_dim())
                .all(|x| d.compose(&self.right_action(n, x)) == self.right_action(n - 1, x).compose(&d))
        })
    }

    pub fn report(&self, name: &str) -> KoszulReport {
        let resolution = self.verify_resolution();
        KoszulReport {
            quiver: name.to_string(),
            window: self.depth,
            koszul_dims: self.dims(),
            resolution_betti: resolution.betti,
            end_cohomology: end_cohomology_dims(self),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionReport {
    /// `dim H^{-n}` for `n = 0..=N`.
    pub betti: Vec<usize>,
    pub h0_dim: usize,
    pub expected_h0: usize,
    pub radical_acts_trivially: bool,
    pub interior_acyclic: bool,
    pub truncated_degree: i64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulReport {
    pub quiver: String,
    pub window: usize,
    pub koszul_dims: Vec<usize>,
    pub resolution_betti: Vec<usize>,
    pub end_cohomology: Vec<EndDegree>,
}
