use crate::error::LinalgError;
use crate::scalar::Field;
use crate::sparse::{Echelon, SparseMatrix, SparseVec};

/// A cochain complex supported on the window `[lo, hi]`.
///
/// `differentials[k]` is `d^{lo+k}: C^{lo+k} -> C^{lo+k+1}` for `lo <= lo+k < hi`.
#[derive(Clone, Debug)]
pub struct BoundedComplex {
    field: Field,
    lo: i64,
    dims: Vec<usize>,
    differentials: Vec<SparseMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cohomology {
    pub degree: i64,
    pub dim: usize,
    /// Cocycles whose classes form a basis of the cohomology.
    pub representatives: Vec<SparseVec>,
    /// Set at the window edges, where one differential is missing.
    pub truncated: bool,
}

impl BoundedComplex {
    /// Validates shapes and checks `d^{n+1} d^n = 0` for every consecutive pair.
    pub fn new(
        field: Field,
        lo: i64,
        dims: Vec<usize>,
        differentials: Vec<SparseMatrix>,
    ) -> Result<BoundedComplex, LinalgError> {
        if dims.is_empty() {
            return Err(LinalgError::DimensionMismatch("empty window".into()));
        }
        if differentials.len() + 1 != dims.len() {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} degrees need {} differentials, got {}",
                dims.len(),
                dims.len() - 1,
                differentials.len()
            )));
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.cols() != dims[k] || d.rows() != dims[k + 1] {
                return Err(LinalgError::DimensionMismatch(format!(
                    "d^{} is {}x{}, expected {}x{}",
                    lo + k as i64,
                    d.rows(),
                    d.cols(),
                    dims[k + 1],
                    dims[k]
                )));
            }
        }
        for k in 0..differentials.len().saturating_sub(1) {
            if !differentials[k + 1].compose(&differentials[k]).is_zero() {
                return Err(LinalgError::NotAComplex(lo + k as i64));
            }
        }
        Ok(BoundedComplex {
            field,
            lo,
            dims,
            differentials,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn dim(&self, n: i64) -> usize {
        if n < self.lo || n > self.hi() {
            0
        } else {
            self.dims[(n - self.lo) as usize]
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `d^n`, or `None` when it leaves the window.
    pub fn differential(&self, n: i64) -> Option<&SparseMatrix> {
        if n < self.lo || n >= self.hi() {
            None
        } else {
            Some(&self.differentials[(n - self.lo) as usize])
        }
    }

    fn check_degree(&self, n: i64) -> Result<(), LinalgError> {
        if n < self.lo || n > self.hi() {
            Err(LinalgError::DegreeOutsideWindow {
                degree: n,
                lo: self.lo,
                hi: self.hi(),
            })
        } else {
            Ok(())
        }
    }

    /// Dimension of `H^n` without computing representatives.
    pub fn betti(&self, n: i64) -> Result<usize, LinalgError> {
        self.check_degree(n)?;
        let out = self.differential(n).map_or(0, SparseMatrix::rank);
        let inc = self.differential(n - 1).map_or(0, SparseMatrix::rank);
        Ok(self.dim(n) - out - inc)
    }

    pub fn is_truncated(&self, n: i64) -> bool {
        n == self.lo || n == self.hi()
    }

    pub fn cohomology(&self, n: i64) -> Result<Cohomology, LinalgError> {
        self.check_degree(n)?;
        let cocycles: Vec<SparseVec> = match self.differential(n) {
            Some(d) => d.kernel_basis(),
            None => (0..self.dim(n)).map(|i| vec![(i, self.field.one())]).collect(),
        };
        let mut span = Echelon::new(self.field, self.dim(n));
        if let Some(d) = self.differential(n - 1) {
            for c in d.columns() {
                span.insert(c.clone());
            }
        }
        let mut representatives = Vec::new();
        for z in cocycles {
            if span.insert(z.clone()) {
                representatives.push(z);
            }
        }
        Ok(Cohomology {
            degree: n,
            dim: representatives.len(),
            representatives,
            truncated: self.is_truncated(n),
        })
    }

    /// Replaces each differential by `g_{n+1} d^n g_n^{-1}` for the given invertible maps.
    pub fn conjugate(
        &self,
        changes: &[(SparseMatrix, SparseMatrix)],
    ) -> Result<BoundedComplex, LinalgError> {
        let differentials = self
            .differentials
            .iter()
            .enumerate()
            .map(|(k, d)| changes[k + 1].0.compose(&d.compose(&changes[k].1)))
            .collect();
        BoundedComplex::new(self.field, self.lo, self.dims.clone(), differentials)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn single_term() {
        let c = BoundedComplex::new(q(), 0, vec![1], vec![]).unwrap();
        let h = c.cohomology(0).unwrap();
        assert_eq!(h.dim, 1);
        assert!(h.truncated);
        assert!(matches!(
            c.cohomology(1),
            Err(LinalgError::DegreeOutsideWindow { .. })
        ));
    }

    #[test]
    fn identity_is_acyclic() {
        let id = SparseMatrix::from_dense(&Matrix::identity(q(), 1));
        let c = BoundedComplex::new(q(), 0, vec![1, 1], vec![id]).unwrap();
        assert_eq!(c.betti(0).unwrap(), 0);
        assert_eq!(c.betti(1).unwrap(), 0);
    }

    #[test]
    fn rejects_nonzero_square() {
        let id = SparseMatrix::from_dense(&Matrix::identity(q(), 1));
        let err = BoundedComplex::new(q(), -1, vec![1, 1, 1], vec![id.clone(), id]).unwrap_err();
        assert_eq!(err, LinalgError::NotAComplex(-1));
    }

    #[test]
    fn dual_numbers_periodic() {
        // k[x]/x^2 -x-> k[x]/x^2 -x-> ...
        let x = SparseMatrix::from_dense(&Matrix::from_i64(q(), &[vec![0, 0], vec![1, 0]]));
        let c = BoundedComplex::new(q(), 0, vec![2, 2, 2, 2], vec![x.clone(), x.clone(), x])
            .unwrap();
        assert_eq!(c.betti(1).unwrap(), 0);
        assert_eq!(c.betti(2).unwrap(), 0);
        let h0 = c.cohomology(0).unwrap();
        assert_eq!(h0.dim, 1);
        assert!(h0.truncated);
        let h3 = c.cohomology(3).unwrap();
        assert_eq!(h3.dim, 1);
    }

    fn random_invertible(rng: &mut impl Rng, n: usize) -> (Matrix, Matrix) {
        loop {
            let m = Matrix::from_fn(q(), n, n, |_, _| q().from_i64(rng.gen_range(-2..3)));
            if let Some(inv) = m.inverse() {
                return (m, inv);
            }
        }
    }

    proptest! {
        #[test]
        fn betti_numbers_invariant_under_change_of_basis(seed in 0u64..500) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            // build a random complex as d = B A with A B = 0 through a random kernel
            let dims = vec![rng.gen_range(1..4), rng.gen_range(1..5), rng.gen_range(1..4)];
            let a = Matrix::from_fn(q(), dims[1], dims[0], |_, _| q().from_i64(rng.gen_range(-2..3)));
            let ker = a.transpose().kernel_basis();
            let b = Matrix::from_fn(q(), dims[2], dims[1], |i, j| {
                if ker.is_empty() { q().zero() } else { ker[i % ker.len()][j].clone() }
            });
            let c = BoundedComplex::new(q(), 0, dims.clone(), vec![
                SparseMatrix::from_dense(&a), SparseMatrix::from_dense(&b),
            ]).unwrap();
            let changes: Vec<_> = dims.iter().map(|&n| {
                let (g, gi) = random_invertible(&mut rng, n);
                (SparseMatrix::from_dense(&g), SparseMatrix::from_dense(&gi))
            }).collect();
            let c2 = c.conjugate(&changes).unwrap();
            for n in 0..3 {
                prop_assert_eq!(c.betti(n).unwrap(), c2.betti(n).unwrap());
                prop_assert_eq!(c.cohomology(n).unwrap().dim, c.betti(n).unwrap());
            }
        }
    }
}
