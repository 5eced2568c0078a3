use qhw_linalg::{balanced_tensor, FinDimModule, IntMatrix, Matrix, Wedderburn};
use serde::Serialize;

use crate::stage::GradedStageInput;
use crate::TrivextError;

/// `(A⁰-proj, A¹ ⊗_{A⁰} −)`: one object per simple `A⁰`-module, and the
/// translation as a matrix of multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularityModel {
    /// Dimension of each simple module, i.e. the size of its matrix block.
    pub objects: Vec<usize>,
    /// Column `j` lists the multiplicities of the simples in `A¹ ⊗ S_j`.
    pub translation: Vec<Vec<i64>>,
    /// The same for `A^{-1} ⊗ −`, the syzygy.
    pub syzygy: Vec<Vec<i64>>,
    /// `translation · syzygy = 1` and the translation is unimodular.
    pub invertible: bool,
    /// `j ↦ i` when the translation is a permutation matrix.
    pub permutation: Option<Vec<usize>>,
    pub orbits: Option<Vec<Vec<usize>>>,
}

impl SingularityModel {
    pub fn orbit_lengths(&self) -> Option<Vec<usize>> {
        self.orbits.as_ref().map(|o| o.iter().map(Vec::len).collect())
    }

    pub fn translation_matrix(&self) -> IntMatrix {
        IntMatrix::from_i64(&self.translation)
    }
}

fn tensor_multiplicities(s: &GradedStageInput, w: &Wedderburn, simples: &[FinDimModule], n: i64) -> Vec<Vec<i64>> {
    let field = s.field();
    let r = simples.len();
    let mut out = vec![vec![0i64; r]; r];
    for (j, sj) in simples.iter().enumerate() {
        let t = balanced_tensor(field, &s.right_action(n), sj.action());
        let id = Matrix::identity(field, sj.dim());
        let action = s.left_action(n).iter().map(|l| t.induced(l, &id)).collect();
        let module = FinDimModule::new(field, t.dim(), action);
        for (i, m) in w.multiplicities(&module).into_iter().enumerate() {
            out[i][j] = m as i64;
        }
    }
    out
}

fn cycles(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            orbit.push(v);
            v = perm[v];
        }
        out.push(orbit);
    }
    out
}

pub fn singularity_model(s: &GradedStageInput) -> Result<SingularityModel, TrivextError> {
    let alg = s.algebra();
    let w = Wedderburn::decompose(alg, 0)?;
    let simples = w.simple_modules(alg);
    let translation = tensor_multiplicities(s, &w, &simples, 1);
    let syzygy = tensor_multiplicities(s, &w, &simples, -1);
    let (t, z) = (IntMatrix::from_i64(&translation), IntMatrix::from_i64(&syzygy));
    let r = simples.len();
    let invertible = t.mul(&z) == IntMatrix::identity(r) && t.is_unimodular();
    let permutation: Option<Vec<usize>> = (0..r)
        .map(|j| {
            let col: Vec<i64> = (0..r).map(|i| translation[i][j]).collect();
            match (col.iter().filter(|&&c| c == 1).count(), col.iter().all(|&c| c == 0 || c == 1)) {
                (1, true) => col.iter().position(|&c| c == 1),
                _ => None,
            }
        })
        .collect();
    let permutation = permutation.filter(|p| {
        let mut sorted = p.clone();
        sorted.sort_unstable();
        sorted == (0..r).collect::<Vec<_>>()
    });
    let orbits = permutation.as_deref().map(cycles);
    Ok(SingularityModel {
        objects: simples.iter().map(FinDimModule::dim).collect(),
        translation,
        syzygy,
        invertible,
        permutation,
        orbits,
    })
}
