use qhw_linalg::{BoundedComplex, Field, SparseMatrix};
use serde::Serialize;

use crate::KoszulWindow;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ModuleSide {
    Left,
    Right,
}

/// A bounded complex of modules over `A`, with one action matrix per basis
/// element of `A` in every degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleComplex {
    pub field: Field,
    pub side: ModuleSide,
    pub lo: i64,
    pub dims: Vec<usize>,
    /// `differentials[k]` is `d^{lo+k}`.
    pub differentials: Vec<SparseMatrix>,
    /// `actions[k][x]` acts on degree `lo + k`.
    pub actions: Vec<Vec<SparseMatrix>>,
}

impl ModuleComplex {
    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn complex(&self) -> BoundedComplex {
        BoundedComplex::new(self.field, self.lo, self.dims.clone(), self.differentials.clone())
            .expect("module complexes square to zero")
    }

    /// The differential commutes with every action matrix.
    pub fn differential_is_linear(&self) -> bool {
        self.differentials.iter().enumerate().all(|(k, d)| {
            self.actions[k]
                .iter()
                .zip(&self.actions[k + 1])
                .all(|(a, b)| d.compose(a) == b.compose(d))
        })
    }

    /// `(DC)^n = Hom_k(C^{-n}, k)` with `d(θ) = (-1)^{n+1} θ ∘ d_C`; actions transpose
    /// and the side flips.
    pub fn dual(&self) -> ModuleComplex {
        let hi = self.hi();
        let len = self.dims.len();
        let dims = self.dims.iter().rev().copied().collect();
        let differentials = (0..len - 1)
            .map(|k| {
                let n = -hi + k as i64;
                // d_C^{-n-1} sits at index (-n-1) - lo
                let src = &self.differentials[(-n - 1 - self.lo) as usize];
                src.transpose()
                    .scale(&self.field.one().negate_if((n + 1).rem_euclid(2) == 1))
            })
            .collect();
        let actions = self
            .actions
            .iter()
            .rev()
            .map(|layer| layer.iter().map(SparseMatrix::transpose).collect())
            .collect();
        ModuleComplex {
            field: self.field,
            side: match self.side {
                ModuleSide::Left => ModuleSide::Right,
                ModuleSide::Right => ModuleSide::Left,
            },
            lo: -hi,
            dims,
            differentials,
            actions,
        }
    }
}

impl KoszulWindow {
    /// The window `[-N, 0]` as a complex of right `A`-modules.
    pub fn module_complex(&self) -> ModuleComplex {
        let depth = self.depth();
        ModuleComplex {
            field: self.field(),
            side: ModuleSide::Right,
            lo: -(depth as i64),
            dims: (0..=depth).rev().map(|n| self.dim(n)).collect(),
            differentials: (1..=depth).rev().map(|n| self.differential(n)).collect(),
            actions: (0..=depth)
                .rev()
                .map(|n| (0..self.algebra_dim()).map(|x| self.right_action(n, x)).collect())
                .collect(),
        }
    }
}

/// `M = DK`, a window `[0, N]` of left `A`-modules.
pub fn dualize(kw: &KoszulWindow) -> ModuleComplex {
    kw.module_complex().dual()
}
