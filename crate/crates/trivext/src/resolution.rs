use qhw_linalg::sparse::from_dense;
use qhw_linalg::{BoundedComplex, FinDimModule, Matrix, SparseMatrix};
use serde::Serialize;

use crate::ext::TrivialExtension;
use crate::util::{flat, kernel, same_column_space, sign};
use crate::TrivextError;

/// The complex `Pⁿ = Aⁿ ⊕ A^{n-1}`, `dⁿ(x, y) = (0, x)`, for `lo ≤ n ≤ hi`.
#[derive(Clone, Debug)]
pub struct CompleteResolutionWindow {
    ext: TrivialExtension,
    lo: i64,
    hi: i64,
    modules: Vec<FinDimModule>,
    differentials: Vec<Matrix>,
    /// `Pⁿ ≅ Λ ⊗_{A⁰} Aⁿ` through `(a, b) ⊗ x ↦ (ax, bx)`, per degree.
    pub projective: Vec<bool>,
    /// `a ↦ (0, a)` is a `Λ`-isomorphism from `A⁰` onto `Z¹(P)`, when `d¹` is in the window.
    pub z1_is_a0: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AcyclicityReport {
    pub window: (i64, i64),
    pub is_complex: bool,
    /// `dim Hⁿ(P)` for interior `n`.
    pub cohomology: Vec<(i64, usize)>,
    /// `dim H^{-n}(Hom_Λ(P, Λ))` for interior `n`, indexed by `n`.
    pub dual_cohomology: Vec<(i64, usize)>,
    /// Whether the dual differential out of `(Pⁿ⁺¹)^tr` is `(u, v) ↦ (-1)ⁿ (0, u)`,
    /// for each `n` whose components are available.
    pub dual_formula: Vec<(i64, bool)>,
    pub failures: Vec<String>,
    pub pass: bool,
}

pub(crate) fn p_module(ext: &TrivialExtension, n: i64) -> FinDimModule {
    let s = ext.stage();
    let field = s.field();
    let (dn, dm) = (s.dim(n), s.dim(n - 1));
    let mut action = Vec::with_capacity(ext.dim());
    for i in 0..ext.zero_dim() {
        action.push(s.left_mul(0, i, n).block_diag(&s.left_mul(0, i, n - 1)));
    }
    for j in 0..s.dim(-1) {
        let top = Matrix::zeros(field, dn, dn + dm);
        let bottom = s.left_mul(-1, j, n).hstack(&Matrix::zeros(field, dm, dm));
        action.push(top.vstack(&bottom));
    }
    FinDimModule::new(field, dn + dm, action)
}

pub(crate) fn differential(ext: &TrivialExtension, n: i64) -> Matrix {
    let s = ext.stage();
    let field = s.field();
    let mut d = Matrix::zeros(field, s.dim(n + 1) + s.dim(n), s.dim(n) + s.dim(n - 1));
    for k in 0..s.dim(n) {
        d.set(s.dim(n + 1) + k, k, field.one());
    }
    d
}

/// Checks that `(a, b) ⊗ x ↦ (ax, bx)` is an isomorphism `Λ ⊗_{A⁰} Aⁿ → Pⁿ`.
fn is_induced(ext: &TrivialExtension, p: &FinDimModule, n: i64) -> bool {
    let s = ext.stage();
    let an = FinDimModule::new(s.field(), s.dim(n), s.left_action(n));
    let (t_mod, t) = ext.induce(&an);
    let cols: Vec<Vec<_>> = (0..ext.dim())
        .flat_map(|i| (0..s.dim(n)).map(move |j| (i, j)))
        .map(|(i, j)| p.act_basis(i).column(j))
        .collect();
    let unreduced = Matrix::from_columns(s.field(), p.dim(), &cols);
    let psi = unreduced.mul(&t.quotient.section);
    psi.mul(&t.quotient.projection) == unreduced
        && psi.rows() == psi.cols()
        && psi.rank() == psi.rows()
        && t_mod.is_homomorphism(p, &psi)
}

/// The window `[lo, hi]` of the complete resolution of `A⁰`.
pub fn complete_resolution(ext: &TrivialExtension, lo: i64, hi: i64) -> Result<CompleteResolutionWindow, TrivextError> {
    let s = ext.stage();
    s.require(lo - 1, hi)?;
    s.require_strongly_graded()?;
    let modules: Vec<FinDimModule> = (lo..=hi).map(|n| p_module(ext, n)).collect();
    for m in &modules {
        m.validate(ext.algebra())?;
    }
    let differentials: Vec<Matrix> = (lo..hi).map(|n| differential(ext, n)).collect();
    let projective = (lo..=hi)
        .zip(&modules)
        .map(|(n, p)| is_induced(ext, p, n))
        .collect();
    let z1_is_a0 = (lo <= 1 && 1 < hi).then(|| {
        let k = (1 - lo) as usize;
        let field = s.field();
        let (d1, d0) = (s.dim(1), s.dim(0));
        let z = Matrix::from_fn(field, d1 + d0, d0, |r, c| if r == d1 + c { field.one() } else { field.zero() });
        ext.a0_module().is_homomorphism(&modules[k], &z) && same_column_space(&z, &kernel(&differentials[k]))
    });
    Ok(CompleteResolutionWindow {
        ext: ext.clone(),
        lo,
        hi,
        modules,
        differentials,
        projective,
        z1_is_a0,
    })
}

impl CompleteResolutionWindow {
    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn module(&self, n: i64) -> &FinDimModule {
        &self.modules[(n - self.lo) as usize]
    }

    pub fn differential(&self, n: i64) -> &Matrix {
        &self.differentials[(n - self.lo) as usize]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.modules.iter().map(FinDimModule::dim).collect()
    }

    /// Every differential squares to zero and is `Λ`-linear.
    pub fn is_complex_of_modules(&self) -> bool {
        let linear = (self.lo..self.hi).all(|n| self.module(n).is_homomorphism(self.module(n + 1), self.differential(n)));
        let square = (self.lo..self.hi - 1).all(|n| self.differential(n + 1).mul(self.differential(n)).is_zero());
        linear && square
    }

    /// A copy with `dⁿ` replaced by zero.
    pub fn corrupted(&self, n: i64) -> CompleteResolutionWindow {
        let mut c = self.clone();
        let k = (n - self.lo) as usize;
        let d = &c.differentials[k];
        c.differentials[k] = Matrix::zeros(d.field(), d.rows(), d.cols());
        c
    }
}

/// `(u, v) ∈ A^{-n} ⊕ A^{-n-1}` as the map `(x, y) ↦ (xu, xv + yu)` in `Hom_Λ(Pⁿ, Λ)`.
fn dual_element(ext: &TrivialExtension, n: i64, u: &[qhw_linalg::Scalar], v: &[qhw_linalg::Scalar]) -> Matrix {
    let s = ext.stage();
    let field = s.field();
    let (u, v) = (from_dense(u), from_dense(v));
    let d0 = ext.zero_dim();
    let mut f = Matrix::zeros(field, ext.dim(), s.dim(n) + s.dim(n - 1));
    for k in 0..s.dim(n) {
        let x = vec![(k, field.one())];
        for (r, c) in s.mul(n, -n, &x, &u) {
            f.add_at(r, k, &c);
        }
        for (r, c) in s.mul(n, -n - 1, &x, &v) {
            f.add_at(d0 + r, k, &c);
        }
    }
    for k in 0..s.dim(n - 1) {
        let y = vec![(k, field.one())];
        for (r, c) in s.mul(n - 1, -n, &y, &u) {
            f.add_at(d0 + r, s.dim(n) + k, &c);
        }
    }
    f
}

fn unit_vectors(field: qhw_linalg::Field, len: usize) -> Vec<Vec<qhw_linalg::Scalar>> {
    Matrix::identity(field, len).columns()
}

/// The identification `A^{-n} ⊕ A^{-n-1} ≅ Hom_Λ(Pⁿ, Λ)` and the dual differential formula.
fn dual_formula_holds(p: &CompleteResolutionWindow, n: i64, hom_dim: usize, delta: impl Fn(&Matrix) -> Matrix) -> bool {
    let ext = &p.ext;
    let s = ext.stage();
    let field = s.field();
    let zeros = |k: i64| vec![field.zero(); s.dim(k)];
    let lambda = ext.regular();
    let mut images = Vec::new();
    for u in unit_vectors(field, s.dim(-n)) {
        images.push(dual_element(ext, n, &u, &zeros(-n - 1)));
    }
    for v in unit_vectors(field, s.dim(-n - 1)) {
        images.push(dual_element(ext, n, &zeros(-n), &v));
    }
    let linear = images.iter().all(|f| p.module(n).is_homomorphism(&lambda, f));
    let rank = crate::util::span(field, ext.dim() * p.module(n).dim(), images.iter().map(flat)).rank();
    // δ(u, v) for (u, v) ∈ (P^{n+1})^tr
    let formula = unit_vectors(field, s.dim(-n - 1)).into_iter().all(|u| {
        let f = dual_element(ext, n + 1, &u, &zeros(-n - 2));
        let su: Vec<_> = u.iter().map(|c| c * &sign(field, crate::util::odd(n))).collect();
        delta(&f) == dual_element(ext, n, &zeros(-n), &su)
    }) && unit_vectors(field, s.dim(-n - 2)).into_iter().all(|v| {
        let f = dual_element(ext, n + 1, &zeros(-n - 1), &v);
        delta(&f).is_zero()
    });
    linear && rank == hom_dim && rank == images.len() && formula
}

/// Interior cohomology of `P` and of `Hom_Λ(P, Λ)`, with the dual differential
/// `h ↦ (-1)ⁿ h ∘ dⁿ` from `(Pⁿ⁺¹)^tr` to `(Pⁿ)^tr`.
pub fn verify_totally_acyclic(p: &CompleteResolutionWindow) -> AcyclicityReport {
    let ext = &p.ext;
    let s = ext.stage();
    let field = s.field();
    let (lo, hi) = (p.lo, p.hi);
    let mut failures = Vec::new();
    let sparse: Vec<SparseMatrix> = p.differentials.iter().map(SparseMatrix::from_dense).collect();
    let complex = BoundedComplex::new(field, lo, p.dims(), sparse);
    let is_complex = complex.is_ok() && p.is_complex_of_modules();
    if !is_complex {
        failures.push("P is not a complex of Λ-modules".to_string());
    }
    let mut cohomology = Vec::new();
    if let Ok(c) = &complex {
        for n in lo + 1..hi {
            let b = c.betti(n).expect("degree inside the window");
            if b != 0 {
                failures.push(format!("H^{n}(P) has dimension {b}"));
            }
            cohomology.push((n, b));
        }
    }

    let lambda = ext.regular();
    let homs: Vec<Vec<Matrix>> = p.modules.iter().map(|m| m.hom_space(&lambda)).collect();
    let bases: Vec<Matrix> = p
        .modules
        .iter()
        .zip(&homs)
        .map(|(m, h)| {
            let cols: Vec<Vec<_>> = h.iter().map(|f| qhw_linalg::sparse::to_dense(field, &flat(f), ext.dim() * m.dim())).collect();
            Matrix::from_columns(field, ext.dim() * m.dim(), &cols)
        })
        .collect();
    let delta = |n: i64, h: &Matrix| h.mul(p.differential(n)).scale(&sign(field, crate::util::odd(n)));
    // degrees -hi, …, -lo; the map into degree -n comes from (P^{n+1})^tr
    let mut dual_diffs = Vec::new();
    let mut dual_ok = true;
    for n in (lo..hi).rev() {
        let k = (n - lo) as usize;
        let target = &bases[k];
        let mut cols = Vec::new();
        for h in &homs[k + 1] {
            let img = delta(n, h);
            let v = qhw_linalg::sparse::to_dense(field, &flat(&img), target.rows());
            match target.solve(&v) {
                Some(c) => cols.push(from_dense(&c)),
                None => {
                    dual_ok = false;
                    cols.push(Vec::new());
                }
            }
        }
        dual_diffs.push(SparseMatrix::new(field, target.cols(), cols));
    }
    let dual_dims: Vec<usize> = homs.iter().rev().map(Vec::len).collect();
    let dual = BoundedComplex::new(field, -hi, dual_dims, dual_diffs);
    if !dual_ok || dual.is_err() {
        failures.push("Hom(P, Λ) is not a complex".to_string());
    }
    let mut dual_cohomology = Vec::new();
    if let Ok(c) = &dual {
        for n in lo + 1..hi {
            let b = c.betti(-n).expect("degree inside the window");
            if b != 0 {
                failures.push(format!("H^{}(Hom(P, Λ)) has dimension {b}", -n));
            }
            dual_cohomology.push((n, b));
        }
    }

    let mut dual_formula = Vec::new();
    for n in lo..hi {
        if !(s.contains(-n - 2) && s.contains(-n) && s.contains(n + 1)) {
            continue;
        }
        let ok = dual_formula_holds(p, n, homs[(n - lo) as usize].len(), |h| delta(n, h));
        if !ok {
            failures.push(format!("dual differential out of degree {} differs from the formula", n + 1));
        }
        dual_formula.push((n, ok));
    }
    AcyclicityReport {
        window: (lo, hi),
        is_complex,
        cohomology,
        dual_cohomology,
        dual_formula,
        pass: failures.is_empty(),
        failures,
    }
}
