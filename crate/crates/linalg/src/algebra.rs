use std::collections::HashMap;

use crate::error::LinalgError;
use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar};
use crate::sparse::{axpy, from_dense, normalize, to_dense, Echelon, SparseVec};

/// A finite-dimensional algebra given by structure constants on a labelled basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinDimAlgebra {
    field: Field,
    labels: Vec<String>,
    /// `table[i][j]` is `b_i b_j`.
    table: Vec<Vec<SparseVec>>,
    unit: SparseVec,
}

impl FinDimAlgebra {
    pub fn new(
        field: Field,
        labels: Vec<String>,
        table: Vec<Vec<SparseVec>>,
        unit: SparseVec,
    ) -> Result<FinDimAlgebra, LinalgError> {
        let n = labels.len();
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(LinalgError::DimensionMismatch(format!(
                "structure table must be {n}x{n}"
            )));
        }
        let in_range = |v: &SparseVec| v.iter().all(|(i, _)| *i < n);
        if !table.iter().flatten().all(in_range) || !in_range(&unit) {
            return Err(LinalgError::DimensionMismatch("basis index out of range".into()));
        }
        Ok(FinDimAlgebra {
            field,
            labels,
            table,
            unit,
        })
    }

    /// Associativity on basis triples and two-sided unit.
    pub fn validate(&self) -> Result<(), LinalgError> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let left = self.mul(&self.table[i][j], &self.basis_vector(k));
                    let right = self.mul(&self.basis_vector(i), &self.table[j][k]);
                    if left != right {
                        return Err(LinalgError::InvalidAlgebra(format!(
                            "({} {}) {} != {} ({} {})",
                            self.labels[i], self.labels[j], self.labels[k], self.labels[i],
                            self.labels[j], self.labels[k]
                        )));
                    }
                }
            }
        }
        for i in 0..n {
            let b = self.basis_vector(i);
            if self.mul(&self.unit, &b) != b || self.mul(&b, &self.unit) != b {
                return Err(LinalgError::InvalidAlgebra(format!(
                    "unit fails on {}",
                    self.labels[i]
                )));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn product(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i][j]
    }

    pub fn unit(&self) -> &SparseVec {
        &self.unit
    }

    pub fn basis_vector(&self, i: usize) -> SparseVec {
        vec![(i, self.field.one())]
    }

    pub fn mul(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = Vec::new();
        for (i, a) in x {
            for (j, b) in y {
                out = axpy(&out, &(a * b), &self.table[*i][*j]);
            }
        }
        out
    }

    pub fn mul_dense(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        to_dense(self.field, &self.mul(&from_dense(x), &from_dense(y)), self.dim())
    }

    /// Matrix of `y ↦ x y`.
    pub fn left_mul_matrix(&self, x: &SparseVec) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim())
            .map(|j| to_dense(self.field, &self.mul(x, &self.basis_vector(j)), self.dim()))
            .collect();
        Matrix::from_columns(self.field, self.dim(), &cols)
    }

    /// Matrix of `y ↦ y x`.
    pub fn right_mul_matrix(&self, x: &SparseVec) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim())
            .map(|j| to_dense(self.field, &self.mul(&self.basis_vector(j), x), self.dim()))
            .collect();
        Matrix::from_columns(self.field, self.dim(), &cols)
    }

    pub fn opposite(&self) -> FinDimAlgebra {
        let n = self.dim();
        let table = (0..n)
            .map(|i| (0..n).map(|j| self.table[j][i].clone()).collect())
            .collect();
        FinDimAlgebra {
            field: self.field,
            labels: self.labels.clone(),
            table,
            unit: self.unit.clone(),
        }
    }

    /// Whether the linear map with columns `f(b_i)` is a unital algebra isomorphism.
    pub fn is_isomorphism(&self, other: &FinDimAlgebra, f: &Matrix) -> bool {
        if f.rows() != other.dim() || f.cols() != self.dim() || f.rank() != self.dim() {
            return false;
        }
        if self.dim() != other.dim() {
            return false;
        }
        let image = |v: &SparseVec| from_dense(&f.apply(&to_dense(self.field, v, self.dim())));
        if image(&self.unit) != other.unit {
            return false;
        }
        let cols: Vec<SparseVec> = (0..self.dim()).map(|i| from_dense(&f.column(i))).collect();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if image(&self.table[i][j]) != other.mul(&cols[i], &cols[j]) {
                    return false;
                }
            }
        }
        true
    }

    /// Left regular module.
    pub fn regular_module(&self) -> FinDimModule {
        let action = (0..self.dim())
            .map(|i| self.left_mul_matrix(&self.basis_vector(i)))
            .collect();
        FinDimModule::new(self.field, self.dim(), action)
    }

    /// Right regular representation turned into a left module over the opposite algebra.
    pub fn right_regular_module(&self) -> FinDimModule {
        let action = (0..self.dim())
            .map(|i| self.right_mul_matrix(&self.basis_vector(i)))
            .collect();
        FinDimModule::new(self.field, self.dim(), action)
    }

    pub fn center_basis(&self) -> Vec<SparseVec> {
        let n = self.dim();
        let mut rows = Vec::new();
        for j in 0..n {
            // coefficient of b_k in x b_j - b_j x, as a linear form in x
            let mut forms: HashMap<usize, Vec<(usize, Scalar)>> = HashMap::new();
            for i in 0..n {
                for (k, v) in axpy(&self.table[i][j], &-self.field.one(), &self.table[j][i]) {
                    forms.entry(k).or_default().push((i, v));
                }
            }
            let mut keys: Vec<usize> = forms.keys().copied().collect();
            keys.sort_unstable();
            for k in keys {
                rows.push(normalize(forms.remove(&k).unwrap()));
            }
        }
        let mut e = Echelon::new(self.field, n);
        for r in rows {
            e.insert(r);
        }
        e.null_space()
    }

    pub fn direct_product(&self, other: &FinDimAlgebra) -> FinDimAlgebra {
        let n = self.dim();
        let m = other.dim();
        let shift = |v: &SparseVec| v.iter().map(|(i, s)| (i + n, s.clone())).collect::<Vec<_>>();
        let mut table = vec![vec![Vec::new(); n + m]; n + m];
        for i in 0..n {
            for j in 0..n {
                table[i][j] = self.table[i][j].clone();
            }
        }
        for i in 0..m {
            for j in 0..m {
                table[n + i][n + j] = shift(&other.table[i][j]);
            }
        }
        let mut unit = self.unit.clone();
        unit.extend(shift(&other.unit));
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        FinDimAlgebra {
            field: self.field,
            labels,
            table,
            unit,
        }
    }
}

/// A left module given by one action matrix per algebra basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinDimModule {
    field: Field,
    dim: usize,
    action: Vec<Matrix>,
}

impl FinDimModule {
    pub fn new(field: Field, dim: usize, action: Vec<Matrix>) -> FinDimModule {
        assert!(
            action.iter().all(|m| m.rows() == dim && m.cols() == dim),
            "action matrices must be square of the module dimension"
        );
        FinDimModule { field, dim, action }
    }

    pub fn zero(alg: &FinDimAlgebra) -> FinDimModule {
        FinDimModule::new(alg.field, 0, vec![Matrix::zeros(alg.field, 0, 0); alg.dim()])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    pub fn act_basis(&self, i: usize) -> &Matrix {
        &self.action[i]
    }

    /// Matrix of the algebra element `x`.
    pub fn act(&self, x: &SparseVec) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.dim, self.dim);
        for (i, c) in x {
            m = m.add(&self.action[*i].scale(c));
        }
        m
    }

    /// Checks that the matrices represent the algebra: `ρ(b_i) ρ(b_j) = ρ(b_i b_j)` and `ρ(1) = 1`.
    pub fn validate(&self, alg: &FinDimAlgebra) -> Result<(), LinalgError> {
        if self.action.len() != alg.dim() {
            return Err(LinalgError::NotAModule(format!(
                "{} action matrices for an algebra of dimension {}",
                self.action.len(),
                alg.dim()
            )));
        }
        if !self.act(alg.unit()).is_identity() {
            return Err(LinalgError::NotAModule("unit does not act as identity".into()));
        }
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                if self.action[i].mul(&self.action[j]) != self.act(alg.product(i, j)) {
                    return Err(LinalgError::NotAModule(format!(
                        "relation {}·{} violated",
                        alg.labels()[i],
                        alg.labels()[j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &FinDimModule) -> FinDimModule {
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| a.block_diag(b))
            .collect();
        FinDimModule::new(self.field, self.dim + other.dim, action)
    }

    pub fn is_homomorphism(&self, other: &FinDimModule, f: &Matrix) -> bool {
        f.rows() == other.dim
            && f.cols() == self.dim
            && self
                .action
                .iter()
                .zip(&other.action)
                .all(|(a, b)| f.mul(a) == b.mul(f))
    }

    /// Basis of `Hom(self, other)`, each map an `other.dim × self.dim` matrix.
    pub fn hom_space(&self, other: &FinDimModule) -> Vec<Matrix> {
        let (m, n) = (self.dim, other.dim);
        let var = |r: usize, c: usize| r * m + c;
        let mut e = Echelon::new(self.field, n * m);
        for (a, b) in self.action.iter().zip(&other.action) {
            // (X a - b X)_{rc} = Σ_k X_{rk} a_{kc} - Σ_k b_{rk} X_{kc}
            for r in 0..n {
                for c in 0..m {
                    let mut entries = Vec::new();
                    for k in 0..m {
                        let v = a.get(k, c);
                        if !v.is_zero() {
                            entries.push((var(r, k), v.clone()));
                        }
                    }
                    for k in 0..n {
                        let v = b.get(r, k);
                        if !v.is_zero() {
                            entries.push((var(k, c), -v.clone()));
                        }
                    }
                    let row = normalize(entries);
                    if !row.is_empty() {
                        e.insert(row);
                    }
                }
            }
        }
        e.null_space()
            .into_iter()
            .map(|v| {
                let d = to_dense(self.field, &v, n * m);
                Matrix::from_fn(self.field, n, m, |r, c| d[var(r, c)].clone())
            })
            .collect()
    }

    /// The submodule spanned by the columns of `basis`, if it is invariant.
    pub fn submodule(&self, basis: &Matrix) -> Option<FinDimModule> {
        let action: Option<Vec<Matrix>> = self
            .action
            .iter()
            .map(|a| basis.solve_matrix(&a.mul(basis)))
            .collect();
        Some(FinDimModule::new(self.field, basis.cols(), action?))
    }

    /// The quotient by the submodule spanned by the columns of `sub`, with the projection.
    pub fn quotient(&self, sub: &Matrix) -> Option<(FinDimModule, Matrix)> {
        let mut e = Echelon::new(self.field, self.dim);
        for c in sub.columns() {
            e.insert(from_dense(&c));
        }
        let t = QuotientSpace::from_echelon(&e);
        let action = self.action.iter().map(|a| t.induced(a)).collect::<Vec<_>>();
        let q = FinDimModule::new(self.field, t.dim, action);
        // invariance: the image of the submodule under every action lies in it
        for a in &self.action {
            for c in sub.columns() {
                if !e.contains(&from_dense(&a.apply(&c))) {
                    return None;
                }
            }
        }
        Some((q, t.projection))
    }

    /// The module with action `p^{-1} ρ(b) p`; `p` must be invertible.
    pub fn change_basis(&self, p: &Matrix) -> FinDimModule {
        let pi = p.inverse().expect("change of basis must be invertible");
        let action = self.action.iter().map(|a| pi.mul(a).mul(p)).collect();
        FinDimModule::new(self.field, self.dim, action)
    }

    /// The vector-space dual, a module over the opposite algebra.
    pub fn dual(&self) -> FinDimModule {
        let action = self.action.iter().map(Matrix::transpose).collect();
        FinDimModule::new(self.field, self.dim, action)
    }
}

/// A quotient `V / W` presented by a projection and a section.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    pub dim: usize,
    /// `dim × ambient`, kernel exactly `W`.
    pub projection: Matrix,
    /// `ambient × dim`, with `projection · section = 1`.
    pub section: Matrix,
}

impl QuotientSpace {
    pub fn from_echelon(e: &Echelon) -> QuotientSpace {
        let field = e.field();
        let n = e.ambient_dim();
        let free = e.complement_indices();
        let pos: HashMap<usize, usize> = free.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let mut projection = Matrix::zeros(field, free.len(), n);
        for (&c, &k) in &pos {
            projection.set(k, c, field.one());
        }
        for (p, row) in e.rref_rows() {
            for (c, v) in row.iter().skip(1) {
                projection.set(pos[c], p, -v.clone());
            }
        }
        let mut section = Matrix::zeros(field, n, free.len());
        for (&c, &k) in &pos {
            section.set(c, k, field.one());
        }
        QuotientSpace {
            dim: free.len(),
            projection,
            section,
        }
    }

    /// The map induced on the quotient by an endomorphism preserving `W`.
    pub fn induced(&self, f: &Matrix) -> Matrix {
        self.projection.mul(f).mul(&self.section)
    }
}

/// `X ⊗_B M` for a right `B`-action on `X` and a left `B`-action on `M`,
/// both given on a spanning set of `B`.
#[derive(Clone, Debug)]
pub struct BalancedTensor {
    pub left_dim: usize,
    pub right_dim: usize,
    pub quotient: QuotientSpace,
}

impl BalancedTensor {
    pub fn dim(&self) -> usize {
        self.quotient.dim
    }

    /// Index of `x_i ⊗ m_j` in the unreduced tensor product.
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.right_dim + j
    }

    /// Class of `x ⊗ m` in the balanced tensor product.
    pub fn class_of(&self, i: usize, j: usize) -> Vec<Scalar> {
        self.quotient.projection.column(self.index(i, j))
    }

    /// Induced map of `f ⊗ g` where both are compatible with the balancing.
    pub fn induced(&self, f: &Matrix, g: &Matrix) -> Matrix {
        self.quotient.induced(&f.kron(g))
    }
}

pub fn balanced_tensor(field: Field, x_right: &[Matrix], m_left: &[Matrix]) -> BalancedTensor {
    assert_eq!(x_right.len(), m_left.len(), "actions must use the same spanning set");
    let dx = x_right.first().map_or(0, Matrix::rows);
    let dm = m_left.first().map_or(0, Matrix::rows);
    let mut e = Echelon::new(field, dx * dm);
    for (r, l) in x_right.iter().zip(m_left) {
        for i in 0..dx {
            for j in 0..dm {
                let mut entries = Vec::new();
                for k in 0..dx {
                    let v = r.get(k, i);
                    if !v.is_zero() {
                        entries.push((k * dm + j, v.clone()));
                    }
                }
                for k in 0..dm {
                    let v = l.get(k, j);
                    if !v.is_zero() {
                        entries.push((i * dm + k, -v.clone()));
                    }
                }
                let row = normalize(entries);
                if !row.is_empty() {
                    e.insert(row);
                }
            }
        }
    }
    BalancedTensor {
        left_dim: dx,
        right_dim: dm,
        quotient: QuotientSpace::from_echelon(&e),
    }
}
