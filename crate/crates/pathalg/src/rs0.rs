use std::sync::Arc;

use qhw_linalg::{FinDimAlgebra, FinDimModule, Field, Matrix, Scalar};
use qhw_quiver::Quiver;

/// `A = kQ/J²` with basis `Q₀ ∪ Q₁` (vertices first) and its canonical modules.
#[derive(Clone, Debug)]
pub struct Rs0Algebra {
    pub quiver: Arc<Quiver>,
    pub algebra: FinDimAlgebra,
    /// `P_i = A e_i`.
    pub projectives: Vec<FinDimModule>,
    /// `S_i = top P_i`.
    pub simples: Vec<FinDimModule>,
    /// `I_i = D(e_i A)`.
    pub injectives: Vec<FinDimModule>,
}

impl Rs0Algebra {
    pub fn vertex_index(&self, v: usize) -> usize {
        v
    }

    pub fn arrow_index(&self, a: usize) -> usize {
        self.quiver.vertex_count() + a
    }

    /// Basis indices spanning the radical.
    pub fn radical(&self) -> std::ops::Range<usize> {
        self.quiver.vertex_count()..self.algebra.dim()
    }

    /// Every product of two radical basis elements vanishes.
    pub fn radical_square_is_zero(&self) -> bool {
        self.radical()
            .all(|i| self.radical().all(|j| self.algebra.product(i, j).is_empty()))
    }
}

pub fn build_rs0(q: &Quiver, field: Field) -> Rs0Algebra {
    let nv = q.vertex_count();
    let dim = nv + q.arrow_count();
    let one = field.one();
    let basis = |k: usize| vec![(k, one.clone())];
    let mut table = vec![vec![Vec::new(); dim]; dim];
    for i in 0..nv {
        table[i][i] = basis(i);
    }
    for (a, arrow) in q.arrows().iter().enumerate() {
        table[arrow.target][nv + a] = basis(nv + a);
        table[nv + a][arrow.source] = basis(nv + a);
    }
    let mut labels: Vec<String> = (0..nv).map(|v| q.trivial_name(v)).collect();
    labels.extend(q.arrows().iter().map(|a| a.name.clone()));
    let unit = (0..nv).map(|i| (i, one.clone())).collect();
    let algebra =
        FinDimAlgebra::new(field, labels, table, unit).expect("structure table is well formed");

    let left = algebra.regular_module();
    let right = algebra.right_regular_module();
    let span = |indices: &[usize]| {
        Matrix::from_fn(field, dim, indices.len(), |r, c| {
            if indices[c] == r {
                field.one()
            } else {
                field.zero()
            }
        })
    };
    let mut projectives = Vec::with_capacity(nv);
    let mut simples = Vec::with_capacity(nv);
    let mut injectives = Vec::with_capacity(nv);
    for i in 0..nv {
        let mut p = vec![i];
        p.extend(q.arrows_from(i).into_iter().map(|a| nv + a));
        projectives.push(left.submodule(&span(&p)).expect("A e_i is a left ideal"));

        let mut e = vec![i];
        e.extend(q.arrows_to(i).into_iter().map(|a| nv + a));
        let e_a = right.submodule(&span(&e)).expect("e_i A is a right ideal");
        injectives.push(e_a.dual());

        let action = (0..dim)
            .map(|k| {
                let v: Scalar = if k == i { field.one() } else { field.zero() };
                Matrix::from_fn(field, 1, 1, |_, _| v.clone())
            })
            .collect();
        simples.push(FinDimModule::new(field, 1, action));
    }
    Rs0Algebra {
        quiver: Arc::new(q.clone()),
        algebra,
        projectives,
        simples,
        injectives,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qhw_quiver::parse_quiver;

    fn check(text: &str) -> Rs0Algebra {
        let q = parse_quiver(text).unwrap();
        let a = build_rs0(&q, Field::Rational);
        a.algebra.validate().unwrap();
        for m in a.projectives.iter().chain(&a.simples).chain(&a.injectives) {
            m.validate(&a.algebra).unwrap();
        }
        assert!(a.radical_square_is_zero());
        a
    }

    #[test]
    fn dual_numbers() {
        let a = check("vertices: v\narrows: a: v -> v");
        assert_eq!(a.algebra.dim(), 2);
        assert_eq!(a.simples.len(), 1);
        assert_eq!(a.projectives[0].dim(), 2);
        assert_eq!(a.injectives[0].dim(), 2);
        // P ≅ I for the self-injective dual numbers
        assert_eq!(a.projectives[0].hom_space(&a.injectives[0]).len(), 2);
    }

    #[test]
    fn cycle_of_two() {
        let a = check("vertices: 1 2\narrows: a: 1 -> 2, b: 2 -> 1");
        assert_eq!(a.algebra.dim(), 4);
        assert_eq!(a.simples.len(), 2);
        assert!(a.projectives.iter().all(|p| p.dim() == 2));
    }

    #[test]
    fn rose_projective() {
        let a = check("vertices: v\narrows: a: v -> v, b: v -> v");
        assert_eq!(a.algebra.dim(), 3);
        assert_eq!(a.projectives[0].dim(), 3);
    }

    #[test]
    fn simple_tops() {
        let a = check("vertices: 1 2\narrows: a: 1 -> 2");
        // Hom(P_i, S_j) = δ_ij
        for i in 0..2 {
            for j in 0..2 {
                let h = a.projectives[i].hom_space(&a.simples[j]).len();
                assert_eq!(h, usize::from(i == j));
            }
        }
        // Hom(S_j, I_i) = δ_ij
        for i in 0..2 {
            for j in 0..2 {
                let h = a.simples[j].hom_space(&a.injectives[i]).len();
                assert_eq!(h, usize::from(i == j));
            }
        }
    }
}
