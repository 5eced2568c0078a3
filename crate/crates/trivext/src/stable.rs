use qhw_linalg::sparse::{from_dense, to_dense};
use qhw_linalg::{FinDimAlgebra, FinDimModule, Field, Matrix, QuotientSpace, Scalar, Wedderburn};
use serde::Serialize;

use crate::ext::{LambdaModule, TrivialExtension};
use crate::util::{column_space, contains_columns, flat, same_column_space, span};
use crate::TrivextError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StableHomReport {
    pub hom_dim: usize,
    pub kernel_dim: usize,
    pub image_dim: usize,
    /// `dim K_M / Im φ_M`.
    pub formula_dim: usize,
    /// `dim Hom_Λ(A⁰, M) / P`, with `P` the maps factoring through a free module.
    pub oracle_dim: usize,
    /// Every map `A⁰ → Λ` factors through `d: A⁰ → P¹`.
    pub approximation: bool,
    /// `f ↦ f(1)` maps `Hom_Λ(A⁰, M)` onto `K_M` and `P` onto `Im φ_M`.
    pub matched: bool,
    /// Representatives in `M` of a basis of `K_M / Im φ_M`.
    pub basis: Vec<Vec<String>>,
    pub pass: bool,
}

fn flat_dense(field: Field, m: &Matrix) -> Vec<Scalar> {
    to_dense(field, &flat(m), m.rows() * m.cols())
}

/// Maps `A⁰ → M` that factor through `Λ^{dim M} → M`, `e_j ↦ m_j`.
fn factoring_maps(ext: &TrivialExtension, m: &FinDimModule) -> Vec<Matrix> {
    let field = m.field();
    let to_lambda = ext.a0_module().hom_space(&ext.regular());
    let mut out = Vec::new();
    for j in 0..m.dim() {
        let cols: Vec<Vec<Scalar>> = (0..ext.dim()).map(|i| m.act_basis(i).column(j)).collect();
        let pi = Matrix::from_columns(field, m.dim(), &cols);
        out.extend(to_lambda.iter().map(|u| pi.mul(u)));
    }
    out
}

/// `d: A⁰ → P¹ = A¹ ⊕ A⁰`, `a ↦ (0, a)`, and `P¹` itself.
fn approximation(ext: &TrivialExtension) -> (Matrix, FinDimModule) {
    let s = ext.stage();
    let field = s.field();
    let (d1, d0) = (s.dim(1), s.dim(0));
    let mut action = Vec::new();
    for i in 0..d0 {
        action.push(s.left_mul(0, i, 1).block_diag(&s.left_mul(0, i, 0)));
    }
    for j in 0..s.dim(-1) {
        let top = Matrix::zeros(field, d1, d1 + d0);
        action.push(top.vstack(&s.left_mul(-1, j, 1).hstack(&Matrix::zeros(field, d0, d0))));
    }
    let p1 = FinDimModule::new(field, d1 + d0, action);
    let d = Matrix::from_fn(field, d1 + d0, d0, |r, c| if r == d1 + c { field.one() } else { field.zero() });
    (d, p1)
}

/// Every map from `A⁰` into `Λ` is `h ∘ d` for some `h: P¹ → Λ`.
pub(crate) fn d_is_left_approximation(ext: &TrivialExtension) -> bool {
    let (d, p1) = approximation(ext);
    let lambda = ext.regular();
    let field = lambda.field();
    let len = lambda.dim() * ext.zero_dim();
    let through = span(field, len, p1.hom_space(&lambda).iter().map(|h| flat(&h.mul(&d))));
    ext.a0_module().hom_space(&lambda).iter().all(|g| through.contains(&flat(g)))
}

/// `Hom_Λ(A⁰, M)` modulo maps through projectives, by the formula and by brute force.
pub fn stable_hom(ext: &TrivialExtension, m: &LambdaModule) -> StableHomReport {
    let field = m.module().field();
    let a0 = ext.a0_module();
    let hom = a0.hom_space(m.module());
    let len = m.dim() * ext.zero_dim();
    let factoring = span(field, len, factoring_maps(ext, m.module()).iter().map(flat));
    let oracle_dim = hom.len() - factoring.rank();

    let kernel_dim = m.kernel().cols();
    let image_dim = m.image().cols();
    let formula_dim = kernel_dim - image_dim;

    // f ↦ f(1)
    let unit = to_dense(field, ext.stage().algebra().unit(), ext.zero_dim());
    let eval = |f: &Matrix| f.apply(&unit);
    let values = Matrix::from_columns(field, m.dim(), &hom.iter().map(eval).collect::<Vec<_>>());
    let p_basis: Vec<Vec<Scalar>> = {
        let vs = factoring_maps(ext, m.module());
        let mat = Matrix::from_columns(field, len, &vs.iter().map(|f| flat_dense(field, f)).collect::<Vec<_>>());
        mat.image_basis()
    };
    let p_values: Vec<Vec<Scalar>> = p_basis
        .iter()
        .map(|v| eval(&Matrix::from_fn(field, m.dim(), ext.zero_dim(), |r, c| v[r * ext.zero_dim() + c].clone())))
        .collect();
    let p_values = Matrix::from_columns(field, m.dim(), &p_values);
    let matched = values.rank() == hom.len()
        && same_column_space(&values, m.kernel())
        && same_column_space(&p_values, m.image())
        && p_values.rank() == factoring.rank();

    let q = QuotientSpace::from_echelon(&span(
        field,
        kernel_dim,
        m.image().columns().iter().map(|c| from_dense(&m.kernel().solve(c).expect("Im φ_M ⊆ K_M"))),
    ));
    let basis = q
        .section
        .columns()
        .iter()
        .map(|c| m.kernel().apply(c).iter().map(Scalar::to_string).collect())
        .collect();
    let approximation = d_is_left_approximation(ext);
    StableHomReport {
        hom_dim: hom.len(),
        kernel_dim,
        image_dim,
        formula_dim,
        oracle_dim,
        approximation,
        matched,
        basis,
        pass: formula_dim == oracle_dim && approximation && matched,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StableEndoReport {
    pub dim: usize,
    /// `a ↦ [r_a]`, `r_a(x) = xa`, is an algebra isomorphism `(A⁰)^op → End(A⁰)/P`.
    pub isomorphism: bool,
    #[serde(skip)]
    pub algebra: FinDimAlgebra,
    #[serde(skip)]
    pub map: Matrix,
}

/// The stable endomorphism algebra of `A⁰`, compared with `(A⁰)^op`.
pub fn stable_endo_ring(ext: &TrivialExtension) -> Result<StableEndoReport, TrivextError> {
    let a0 = ext.a0_module();
    let field = a0.field();
    let d0 = ext.zero_dim();
    let len = d0 * d0;
    let end = a0.hom_space(&a0);
    let p = span(field, len, factoring_maps(ext, &a0).iter().map(flat));
    let q = QuotientSpace::from_echelon(&p);
    let end_flat = Matrix::from_columns(field, len, &end.iter().map(|f| flat_dense(field, f)).collect::<Vec<_>>());
    let proj_end = q.projection.mul(&end_flat);
    // End(A⁰)/P inside the quotient of all linear maps by P
    let stable = column_space(&proj_end);
    let dim = stable.cols();
    let missing = || TrivextError::Linalg("map outside End(A⁰)".into());
    let class = |f: &Matrix| stable.solve(&q.projection.apply(&flat_dense(field, f))).ok_or_else(missing);
    let unflat = |v: &[Scalar]| Matrix::from_fn(field, d0, d0, |r, c| v[r * d0 + c].clone());
    let reps: Vec<Matrix> = stable
        .columns()
        .iter()
        .map(|w| Ok(unflat(&end_flat.apply(&proj_end.solve(w).ok_or_else(missing)?))))
        .collect::<Result<_, TrivextError>>()?;
    let table = reps
        .iter()
        .map(|f| reps.iter().map(|g| Ok(from_dense(&class(&f.mul(g))?))).collect())
        .collect::<Result<_, TrivextError>>()?;
    let labels = (0..dim).map(|k| format!("f{k}")).collect();
    let unit = from_dense(&class(&Matrix::identity(field, d0))?);
    let algebra = FinDimAlgebra::new(field, labels, table, unit)?;
    algebra.validate()?;
    let alg0 = ext.stage().algebra();
    let rights: Vec<Matrix> = (0..d0).map(|a| alg0.right_mul_matrix(&alg0.basis_vector(a))).collect();
    let linear = rights.iter().all(|r| a0.is_homomorphism(&a0, r));
    let classes = rights.iter().map(class).collect::<Result<Vec<_>, _>>()?;
    let map = Matrix::from_columns(field, dim, &classes);
    let isomorphism = linear && alg0.opposite().is_isomorphism(&algebra, &map);
    Ok(StableEndoReport {
        dim,
        isomorphism,
        algebra,
        map,
    })
}

#[derive(Clone, Debug)]
pub struct GprojDecomposition {
    /// Bases, as columns in `M`, of `K'`, `Im φ_M` and `K''`.
    pub k_prime: Matrix,
    pub image: Matrix,
    pub k_double: Matrix,
    /// `Λ ⊗_{A⁰} K'`, embedded in `M` by `embedding`.
    pub projective_part: FinDimModule,
    pub embedding: Matrix,
    /// `K''` with `A^{-1}` acting as zero.
    pub trivial_part: FinDimModule,
    /// `[embedding | K'']`; conjugating `M` by it gives the direct sum exactly.
    pub change_of_basis: Matrix,
}

impl GprojDecomposition {
    pub fn projective_rank(&self) -> usize {
        self.k_prime.cols()
    }

    pub fn trivial_dim(&self) -> usize {
        self.k_double.cols()
    }
}

/// A complement of `sub` in the `A⁰`-module `m`: the kernel of an
/// `A⁰`-linear projection onto `sub`, taken from the first solution in basis order.
fn complement(m: &FinDimModule, sub: &Matrix) -> Option<Matrix> {
    let field = m.field();
    let (n, r) = (m.dim(), sub.cols());
    // unknown Y (r × n); π = sub · Y must commute with the action and fix sub
    let var = |i: usize, j: usize| i * n + j;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut rhs: Vec<Scalar> = Vec::new();
    for a in m.action() {
        // sub · Y · a − a · sub · Y = 0, entry (p, c)
        let asub = a.mul(sub);
        for p in 0..n {
            for c in 0..n {
                let mut row = vec![field.zero(); r * n];
                for i in 0..r {
                    for k in 0..n {
                        let v = sub.get(p, i) * a.get(k, c);
                        if !v.is_zero() {
                            row[var(i, k)] += &v;
                        }
                    }
                    let w = asub.get(p, i);
                    if !w.is_zero() {
                        row[var(i, c)] -= w;
                    }
                }
                rows.push(row);
                rhs.push(field.zero());
            }
        }
    }
    // Y · sub = 1
    for i in 0..r {
        for j in 0..r {
            let mut row = vec![field.zero(); r * n];
            for k in 0..n {
                row[var(i, k)] = sub.get(k, j).clone();
            }
            rows.push(row);
            rhs.push(if i == j { field.one() } else { field.zero() });
        }
    }
    let system = Matrix::from_rows(field, r * n, &rows);
    let y = system.solve(&rhs)?;
    let y = Matrix::from_fn(field, r, n, |i, j| y[var(i, j)].clone());
    Some(crate::util::kernel(&y))
}

/// Splits `M = (K' ⊕ Im φ_M) ⊕ K''` and checks that `Λ ⊗_{A⁰} K' ⊕ K''`
/// reproduces the action matrices of `M`.
pub fn gproj_decompose(ext: &TrivialExtension, m: &LambdaModule) -> Result<GprojDecomposition, TrivextError> {
    let alg0 = ext.stage().algebra();
    Wedderburn::decompose(alg0, 0)?;
    let field = alg0.field();
    let fail = |s: &str| TrivextError::NotGorensteinProjective(s.to_string());
    let res = ext.restrict(m.module());
    let k_prime = complement(&res, m.kernel()).ok_or_else(|| fail("K_M has no A⁰-complement"))?;
    let k_mod = res.submodule(m.kernel()).ok_or_else(|| fail("K_M is not an A⁰-submodule"))?;
    let image_in_k = Matrix::from_columns(
        field,
        m.kernel().cols(),
        &m.image().columns().iter().map(|c| m.kernel().solve(c).expect("Im φ_M ⊆ K_M")).collect::<Vec<_>>(),
    );
    let k_double = m.kernel().mul(&complement(&k_mod, &image_in_k).ok_or_else(|| fail("Im φ_M has no complement in K_M"))?);

    let kp = res.submodule(&k_prime).ok_or_else(|| fail("K' is not an A⁰-submodule"))?;
    let (projective_part, t) = ext.induce(&kp);
    let cols: Vec<Vec<Scalar>> = (0..ext.dim())
        .flat_map(|i| (0..k_prime.cols()).map(move |j| (i, j)))
        .map(|(i, j)| m.module().act_basis(i).apply(&k_prime.column(j)))
        .collect();
    let unreduced = Matrix::from_columns(field, m.dim(), &cols);
    let embedding = unreduced.mul(&t.quotient.section);
    if embedding.mul(&t.quotient.projection) != unreduced || embedding.rank() != projective_part.dim() {
        return Err(fail("Λ ⊗ K' → M is not injective"));
    }
    if !projective_part.is_homomorphism(m.module(), &embedding)
        || !same_column_space(&embedding, &k_prime.hstack(m.image()))
    {
        return Err(fail("Λ ⊗ K' is not K' ⊕ Im φ_M"));
    }
    let trivial = m.module().submodule(&k_double).ok_or_else(|| fail("K'' is not a Λ-submodule"))?;
    let trivial_part = ext.trivial_action(&ext.restrict(&trivial));
    if trivial != trivial_part {
        return Err(fail("A^-1 acts nontrivially on K''"));
    }
    let change_of_basis = embedding.hstack(&k_double);
    if change_of_basis.rank() != m.dim() || change_of_basis.cols() != m.dim() {
        return Err(fail("the parts do not span M"));
    }
    if m.module().change_basis(&change_of_basis) != projective_part.direct_sum(&trivial_part) {
        return Err(fail("reassembled action differs from M"));
    }
    debug_assert!(contains_columns(m.kernel(), &k_double));
    Ok(GprojDecomposition {
        k_prime,
        image: m.image().clone(),
        k_double,
        projective_part,
        embedding,
        trivial_part,
        change_of_basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::build_trivext;
    use crate::stage::GradedStageInput;
    use std::sync::Arc;

    fn dual_numbers() -> TrivialExtension {
        build_trivext(&Arc::new(GradedStageInput::laurent(Field::Rational, 2))).unwrap()
    }

    #[test]
    fn stable_hom_examples() {
        let ext = dual_numbers();
        let a0 = LambdaModule::new(&ext, ext.a0_module()).unwrap();
        let r = stable_hom(&ext, &a0);
        assert_eq!((r.formula_dim, r.oracle_dim, r.image_dim), (1, 1, 0));
        assert!(r.pass);
        let reg = LambdaModule::new(&ext, ext.regular()).unwrap();
        let r = stable_hom(&ext, &reg);
        assert_eq!((r.formula_dim, r.oracle_dim), (0, 0));
        assert!(r.pass);
    }

    #[test]
    fn stable_endo_of_dual_numbers() {
        let r = stable_endo_ring(&dual_numbers()).unwrap();
        assert_eq!(r.dim, 1);
        assert!(r.isomorphism);
    }

    #[test]
    fn decomposes_dual_number_modules() {
        let ext = dual_numbers();
        let reg = LambdaModule::new(&ext, ext.regular()).unwrap();
        let d = gproj_decompose(&ext, &reg).unwrap();
        assert_eq!((d.projective_rank(), d.trivial_dim()), (1, 0));
        let k = LambdaModule::new(&ext, ext.a0_module()).unwrap();
        let d = gproj_decompose(&ext, &k).unwrap();
        assert_eq!((d.projective_rank(), d.trivial_dim()), (0, 1));
    }

    #[test]
    fn complement_is_equivariant() {
        let ext = dual_numbers();
        let m = ext.restrict(&ext.regular().direct_sum(&ext.a0_module()));
        let f = Field::Rational;
        let sub = Matrix::from_i64(f, &[vec![1], vec![1], vec![0]]);
        let c = complement(&m, &sub).unwrap();
        assert_eq!(c.cols(), 2);
        assert_eq!(c.hstack(&sub).rank(), 3);
    }
}
