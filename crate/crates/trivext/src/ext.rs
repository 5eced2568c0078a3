use std::sync::Arc;

use qhw_linalg::sparse::from_dense;
use qhw_linalg::{balanced_tensor, BalancedTensor, FinDimAlgebra, FinDimModule, Matrix, SparseVec, Wedderburn};
use rand::Rng;

use crate::stage::GradedStageInput;
use crate::util::{column_space, contains_columns, kernel, span, stack_cols, stack_rows};
use crate::TrivextError;

/// `Λ = A⁰ ⋉ A^{-1}` on the basis of `A⁰` followed by the basis of `A^{-1}`.
#[derive(Clone, Debug)]
pub struct TrivialExtension {
    stage: Arc<GradedStageInput>,
    algebra: FinDimAlgebra,
}

/// `(a, b)(a', b') = (aa', ab' + ba')`.
pub fn build_trivext(s: &Arc<GradedStageInput>) -> Result<TrivialExtension, TrivextError> {
    let (d0, d1) = (s.dim(0), s.dim(-1));
    let n = d0 + d1;
    let shift = |v: &SparseVec| v.iter().map(|(k, c)| (k + d0, c.clone())).collect::<SparseVec>();
    let mut table = vec![vec![Vec::new(); n]; n];
    for i in 0..d0 {
        for j in 0..d0 {
            table[i][j] = s.product(0, 0, i, j).clone();
        }
        for j in 0..d1 {
            table[i][d0 + j] = shift(s.product(0, -1, i, j));
            table[d0 + j][i] = shift(s.product(-1, 0, j, i));
        }
    }
    let mut labels = s.labels(0).to_vec();
    labels.extend(s.labels(-1).iter().cloned());
    let algebra = FinDimAlgebra::new(s.field(), labels, table, s.algebra().unit().clone())
        .map_err(|e| TrivextError::InvalidStage(e.to_string()))?;
    algebra.validate().map_err(|e| TrivextError::InvalidStage(e.to_string()))?;
    Ok(TrivialExtension {
        stage: s.clone(),
        algebra,
    })
}

impl TrivialExtension {
    pub fn stage(&self) -> &Arc<GradedStageInput> {
        &self.stage
    }

    pub fn algebra(&self) -> &FinDimAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn zero_dim(&self) -> usize {
        self.stage.dim(0)
    }

    /// Indices of the `A^{-1}` basis inside `Λ`.
    pub fn ideal(&self) -> std::ops::Range<usize> {
        self.zero_dim()..self.dim()
    }

    /// `A^{-1}` is a two-sided ideal with zero square.
    pub fn ideal_is_square_zero(&self) -> bool {
        let inside = |v: &SparseVec| v.iter().all(|(k, _)| self.ideal().contains(k));
        self.ideal().all(|i| {
            self.ideal().all(|j| self.algebra.product(i, j).is_empty())
                && (0..self.dim()).all(|j| inside(self.algebra.product(i, j)) && inside(self.algebra.product(j, i)))
        })
    }

    /// The products of `A⁰`-basis elements in `Λ` have no `A^{-1}` part, so
    /// `Λ / A^{-1}` carries exactly the structure constants of `A⁰`.
    pub fn quotient_is_degree_zero(&self) -> bool {
        let a0 = self.stage.algebra();
        (0..self.zero_dim()).all(|i| (0..self.zero_dim()).all(|j| self.algebra.product(i, j) == a0.product(i, j)))
    }

    /// Extends an `A⁰`-module by letting `A^{-1}` act as zero.
    pub fn trivial_action(&self, x: &FinDimModule) -> FinDimModule {
        let mut action = x.action().to_vec();
        action.extend(self.ideal().map(|_| Matrix::zeros(x.field(), x.dim(), x.dim())));
        FinDimModule::new(x.field(), x.dim(), action)
    }

    /// Restricts a `Λ`-module to `A⁰`.
    pub fn restrict(&self, m: &FinDimModule) -> FinDimModule {
        FinDimModule::new(m.field(), m.dim(), m.action()[..self.zero_dim()].to_vec())
    }

    /// `A⁰ = Λ / A^{-1}`.
    pub fn a0_module(&self) -> FinDimModule {
        self.trivial_action(&self.stage.algebra().regular_module())
    }

    pub fn regular(&self) -> FinDimModule {
        self.algebra.regular_module()
    }

    /// `Λ ⊗_{A⁰} X` with its left `Λ`-action, for an `A⁰`-module `X`.
    pub fn induce(&self, x: &FinDimModule) -> (FinDimModule, BalancedTensor) {
        let field = self.algebra.field();
        let right: Vec<Matrix> = (0..self.zero_dim())
            .map(|k| self.algebra.right_mul_matrix(&self.algebra.basis_vector(k)))
            .collect();
        let t = balanced_tensor(field, &right, x.action());
        let id = Matrix::identity(field, x.dim());
        let action = (0..self.dim())
            .map(|i| t.induced(&self.algebra.left_mul_matrix(&self.algebra.basis_vector(i)), &id))
            .collect();
        (FinDimModule::new(field, t.dim(), action), t)
    }

    /// The simple `Λ`-modules, when `A⁰` is split semisimple.
    pub fn simples(&self) -> Result<Vec<FinDimModule>, TrivextError> {
        let a0 = self.stage.algebra();
        let w = Wedderburn::decompose(a0, 0)?;
        Ok(w.simple_modules(a0).iter().map(|s| self.trivial_action(s)).collect())
    }

    /// `Λ ⊗_{A⁰} S` for each simple `S`: the indecomposable projectives.
    pub fn projectives(&self) -> Result<Vec<FinDimModule>, TrivextError> {
        let a0 = self.stage.algebra();
        let w = Wedderburn::decompose(a0, 0)?;
        Ok(w.simple_modules(a0).iter().map(|s| self.induce(s).0).collect())
    }

    /// Named canonical modules: `A⁰`, `Λ`, the simples and the indecomposable projectives.
    pub fn canonical_modules(&self) -> Result<Vec<(String, FinDimModule)>, TrivextError> {
        let mut out = vec![("A0".to_string(), self.a0_module()), ("Lambda".to_string(), self.regular())];
        for (k, s) in self.simples()?.into_iter().enumerate() {
            out.push((format!("S{}", k + 1), s));
        }
        for (k, p) in self.projectives()?.into_iter().enumerate() {
            out.push((format!("P{}", k + 1), p));
        }
        Ok(out)
    }
}

/// A verified `Λ`-module with `K_M = {m | A^{-1} m = 0}` and `Im φ_M = A^{-1} M`.
#[derive(Clone, Debug)]
pub struct LambdaModule {
    module: FinDimModule,
    kernel: Matrix,
    image: Matrix,
}

impl LambdaModule {
    pub fn new(ext: &TrivialExtension, module: FinDimModule) -> Result<LambdaModule, TrivextError> {
        module.validate(ext.algebra())?;
        let field = module.field();
        let acts: Vec<Matrix> = ext.ideal().map(|i| module.act_basis(i).clone()).collect();
        for a in &acts {
            for b in &acts {
                if !a.mul(b).is_zero() {
                    return Err(TrivextError::NotAModule("φ_M ∘ (1 ⊗ φ_M) is nonzero".into()));
                }
            }
        }
        let kernel = kernel(&stack_rows(field, module.dim(), &acts));
        let image = column_space(&stack_cols(field, module.dim(), &acts));
        if !contains_columns(&kernel, &image) {
            return Err(TrivextError::NotAModule("Im φ_M is not inside K_M".into()));
        }
        Ok(LambdaModule { module, kernel, image })
    }

    pub fn module(&self) -> &FinDimModule {
        &self.module
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    /// Columns form a basis of `K_M`.
    pub fn kernel(&self) -> &Matrix {
        &self.kernel
    }

    /// Columns form a basis of `Im φ_M`.
    pub fn image(&self) -> &Matrix {
        &self.image
    }

    /// `A^{-1} ⊗_{A⁰} M` and the matrix of `φ_M` on it.
    pub fn phi(&self, ext: &TrivialExtension) -> (BalancedTensor, Matrix) {
        let s = ext.stage();
        let field = self.module.field();
        let t = balanced_tensor(field, &s.right_action(-1), ext.restrict(&self.module).action());
        let dm = self.dim();
        let cols: Vec<Vec<_>> = (0..s.dim(-1))
            .flat_map(|i| (0..dm).map(move |j| (i, j)))
            .map(|(i, j)| self.module.act_basis(ext.zero_dim() + i).column(j))
            .collect();
        let unreduced = Matrix::from_columns(field, dm, &cols);
        let phi = unreduced.mul(&t.quotient.section);
        debug_assert_eq!(phi.mul(&t.quotient.projection), unreduced);
        (t, phi)
    }

    /// The exact sequence `0 → A^{-1} ⊗ K_M → A^{-1} ⊗ M → M`: the kernel of
    /// `φ_M` has the dimension of `A^{-1} ⊗_{A⁰} K_M`.
    pub fn kernel_sequence_is_exact(&self, ext: &TrivialExtension) -> bool {
        let (t, phi) = self.phi(ext);
        let Some(k) = ext.restrict(&self.module).submodule(&self.kernel) else {
            return false;
        };
        let tk = balanced_tensor(self.module.field(), &ext.stage().right_action(-1), k.action());
        t.dim() - phi.rank() == tk.dim()
    }
}

/// A random submodule of a direct sum of canonical modules, in a random basis,
/// of dimension between 1 and `max_dim`.
pub fn random_module(ext: &TrivialExtension, max_dim: usize, rng: &mut impl Rng) -> Result<LambdaModule, TrivextError> {
    let canon = ext.canonical_modules()?;
    let field = ext.algebra().field();
    loop {
        let parts = rng.gen_range(1..=3);
        let mut ambient = FinDimModule::zero(ext.algebra());
        for _ in 0..parts {
            ambient = ambient.direct_sum(&canon[rng.gen_range(0..canon.len())].1);
        }
        if ambient.dim() == 0 {
            continue;
        }
        let gens: Vec<Vec<_>> = (0..rng.gen_range(1..=2))
            .map(|_| (0..ambient.dim()).map(|_| field.from_i64(rng.gen_range(-2..=2))).collect())
            .collect();
        let sub = generated(&ambient, &gens);
        if sub.cols() == 0 || sub.cols() > max_dim {
            continue;
        }
        let module = ambient.submodule(&sub).expect("generated subspaces are submodules");
        let p = loop {
            let p = Matrix::from_fn(field, module.dim(), module.dim(), |_, _| field.from_i64(rng.gen_range(-2..=2)));
            if p.rank() == module.dim() {
                break p;
            }
        };
        return LambdaModule::new(ext, module.change_basis(&p));
    }
}

/// Columns spanning the submodule generated by the given vectors.
fn generated(m: &FinDimModule, gens: &[Vec<qhw_linalg::Scalar>]) -> Matrix {
    let field = m.field();
    let mut e = span(field, m.dim(), std::iter::empty());
    let mut basis = Vec::new();
    let mut queue: Vec<Vec<_>> = gens.to_vec();
    while let Some(v) = queue.pop() {
        if e.insert(from_dense(&v)) {
            for a in m.action() {
                queue.push(a.apply(&v));
            }
            basis.push(v);
        }
    }
    Matrix::from_columns(field, m.dim(), &basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qhw_linalg::Field;

    fn dual_numbers() -> TrivialExtension {
        build_trivext(&Arc::new(GradedStageInput::laurent(Field::Rational, 2))).unwrap()
    }

    #[test]
    fn dual_numbers_structure() {
        let ext = dual_numbers();
        assert_eq!(ext.dim(), 2);
        assert!(ext.ideal_is_square_zero());
        assert!(ext.quotient_is_degree_zero());
        assert_eq!(ext.algebra().labels(), ["x^0", "x^-1"]);
        let canon = ext.canonical_modules().unwrap();
        let dims: Vec<usize> = canon.iter().map(|(_, m)| m.dim()).collect();
        assert_eq!(dims, vec![1, 2, 1, 2]);
    }

    #[test]
    fn degenerate_extension_is_degree_zero() {
        let a = GradedStageInput::laurent(Field::Rational, 1).algebra().clone();
        let ext = build_trivext(&Arc::new(GradedStageInput::concentrated(&a, 1))).unwrap();
        assert_eq!(ext.dim(), 1);
        assert_eq!(ext.algebra(), &a);
    }

    #[test]
    fn kernel_and_image() {
        let ext = dual_numbers();
        let m = LambdaModule::new(&ext, ext.regular()).unwrap();
        assert_eq!((m.kernel().cols(), m.image().cols()), (1, 1));
        assert!(m.kernel_sequence_is_exact(&ext));
        let a0 = LambdaModule::new(&ext, ext.a0_module()).unwrap();
        assert_eq!((a0.kernel().cols(), a0.image().cols()), (1, 0));
    }

    #[test]
    fn rejects_non_modules() {
        let ext = dual_numbers();
        let f = Field::Rational;
        let bad = FinDimModule::new(f, 1, vec![Matrix::identity(f, 1), Matrix::identity(f, 1)]);
        assert!(matches!(LambdaModule::new(&ext, bad), Err(TrivextError::NotAModule(_))));
    }

    #[test]
    fn random_modules_are_valid() {
        use rand::SeedableRng;
        let ext = dual_numbers();
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let m = random_module(&ext, 6, &mut rng).unwrap();
            assert!((1..=6).contains(&m.dim()));
        }
    }
}
