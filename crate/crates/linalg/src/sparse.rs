use std::collections::HashMap;

use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar};

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

/// `x + f * y` for sparse vectors.
pub fn axpy(x: &SparseVec, f: &Scalar, y: &SparseVec) -> SparseVec {
    if f.is_zero() {
        return x.clone();
    }
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
            out.push(x[i].clone());
            i += 1;
        } else if i == x.len() || y[j].0 < x[i].0 {
            out.push((y[j].0, f * &y[j].1));
            j += 1;
        } else {
            let v = &x[i].1 + &(f * &y[j].1);
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(x: &SparseVec, f: &Scalar) -> SparseVec {
    if f.is_zero() {
        return Vec::new();
    }
    x.iter().map(|(i, v)| (*i, v * f)).collect()
}

/// Sorts, merges duplicate indices and drops zeros.
pub fn normalize(mut entries: Vec<(usize, Scalar)>) -> SparseVec {
    entries.sort_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(entries.len());
    for (i, v) in entries {
        match out.last_mut() {
            Some((j, w)) if *j == i => *w = &*w + &v,
            _ => out.push((i, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

pub fn to_dense(field: Field, x: &SparseVec, len: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); len];
    for (i, s) in x {
        v[*i] = s.clone();
    }
    v
}

pub fn from_dense(x: &[Scalar]) -> SparseVec {
    x.iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (i, v.clone()))
        .collect()
}

/// A sparse matrix stored by columns: `columns[j]` is the image of the j-th basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    field: Field,
    rows: usize,
    columns: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn new(field: Field, rows: usize, columns: Vec<SparseVec>) -> SparseMatrix {
        for c in &columns {
            assert!(c.iter().all(|(i, v)| *i < rows && !v.is_zero()), "bad sparse column");
            assert!(c.windows(2).all(|w| w[0].0 < w[1].0), "unsorted sparse column");
        }
        SparseMatrix {
            field,
            rows,
            columns,
        }
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> SparseMatrix {
        SparseMatrix::new(field, rows, vec![Vec::new(); cols])
    }

    pub fn from_triplets(
        field: Field,
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> SparseMatrix {
        let mut columns: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            columns[c].push((r, v));
        }
        let columns = columns.into_iter().map(normalize).collect();
        SparseMatrix::new(field, rows, columns)
    }

    pub fn from_dense(m: &Matrix) -> SparseMatrix {
        let columns = (0..m.cols()).map(|c| from_dense(&m.column(c))).collect();
        SparseMatrix::new(m.field(), m.rows(), columns)
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows, self.cols());
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                m.set(*r, c, v.clone());
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, c: usize) -> &SparseVec {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn apply(&self, x: &SparseVec) -> SparseVec {
        let mut out = Vec::new();
        for (j, v) in x {
            out = axpy(&out, v, &self.columns[*j]);
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols(), other.rows, "composition dimension mismatch");
        let columns = other.columns.iter().map(|c| self.apply(c)).collect();
        SparseMatrix::new(self.field, self.rows, columns)
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut triplets = Vec::with_capacity(self.nnz());
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                triplets.push((c, *r, v.clone()));
            }
        }
        SparseMatrix::from_triplets(self.field, self.cols(), self.rows, triplets)
    }

    pub fn scale(&self, f: &Scalar) -> SparseMatrix {
        let columns = self.columns.iter().map(|c| scale(c, f)).collect();
        SparseMatrix::new(self.field, self.rows, columns)
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.rows, self.cols()), (other.rows, other.cols()), "shape mismatch");
        let one = self.field.one();
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| axpy(a, &one, b))
            .collect();
        SparseMatrix::new(self.field, self.rows, columns)
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.field, self.rows);
        for c in &self.columns {
            e.insert(c.clone());
        }
        e.rank()
    }

    /// Basis of the right null space, as sparse vectors.
    pub fn kernel_basis(&self) -> Vec<SparseVec> {
        let mut e = Echelon::new(self.field, self.cols());
        for row in self.transpose().columns() {
            e.insert(row.clone());
        }
        e.null_space()
    }
}

/// Incremental row-echelon basis of a subspace of `k^n`, keyed by pivot column.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    len: usize,
    pivots: HashMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new(field: Field, len: usize) -> Echelon {
        Echelon {
            field,
            len,
            pivots: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.len
    }

    /// Reduces `v` until its leading index is not a pivot. The result is zero
    /// exactly when `v` lies in the span.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        while let Some((lead, coeff)) = v.first().cloned() {
            match self.pivots.get(&lead) {
                Some(p) => v = axpy(&v, &-coeff, p),
                None => break,
            }
        }
        v
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    /// Adds `v` to the span; returns whether the rank increased.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let v = self.reduce(v);
        let Some((lead, coeff)) = v.first().cloned() else {
            return false;
        };
        let inv = coeff.inv().unwrap();
        self.pivots.insert(lead, scale(&v, &inv));
        true
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.pivots.keys().copied().collect();
        p.sort_unstable();
        p
    }

    /// Fully reduced rows, sorted by pivot column.
    pub fn rref_rows(&self) -> Vec<(usize, SparseVec)> {
        let order = self.pivot_columns();
        let mut done: HashMap<usize, SparseVec> = HashMap::new();
        for &p in order.iter().rev() {
            let mut row = self.pivots[&p].clone();
            // eliminate later pivot columns using rows that are already reduced
            let mut k = 1;
            while k < row.len() {
                let (c, coeff) = row[k].clone();
                if let Some(r) = done.get(&c) {
                    row = axpy(&row, &-coeff, r);
                } else {
                    k += 1;
                }
            }
            done.insert(p, row);
        }
        order.into_iter().map(|p| (p, done.remove(&p).unwrap())).collect()
    }

    /// Basis of `{x : <row, x> = 0 for every stored row}`.
    pub fn null_space(&self) -> Vec<SparseVec> {
        let rows = self.rref_rows();
        let mut entries_by_free: HashMap<usize, Vec<(usize, Scalar)>> = HashMap::new();
        for (p, row) in &rows {
            for (c, v) in row.iter().skip(1) {
                entries_by_free.entry(*c).or_default().push((*p, -v.clone()));
            }
        }
        let mut basis = Vec::new();
        for free in 0..self.len {
            if self.pivots.contains_key(&free) {
                continue;
            }
            let mut v = entries_by_free.remove(&free).unwrap_or_default();
            v.push((free, self.field.one()));
            basis.push(normalize(v));
        }
        basis
    }

    /// Indices of unit vectors that complete the stored basis to the whole space.
    pub fn complement_indices(&self) -> Vec<usize> {
        (0..self.len).filter(|c| !self.pivots.contains_key(c)).collect()
    }

    pub fn field(&self) -> Field {
        self.field
    }
}

/// Rank of a set of sparse vectors in `k^len`.
pub fn rank_of(field: Field, len: usize, vectors: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut e = Echelon::new(field, len);
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn axpy_cancels() {
        let f = Field::Rational;
        let x = vec![(0, f.from_i64(1)), (2, f.from_i64(3))];
        let y = vec![(2, f.from_i64(1)), (5, f.from_i64(1))];
        let z = axpy(&x, &f.from_i64(-3), &y);
        assert_eq!(z, vec![(0, f.from_i64(1)), (5, f.from_i64(-3))]);
    }

    #[test]
    fn sparse_matches_dense_example() {
        let f = Field::Rational;
        let d = Matrix::from_i64(f, &[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        let s = SparseMatrix::from_dense(&d);
        assert_eq!(s.rank(), 2);
        let k = s.kernel_basis();
        assert_eq!(k.len(), 1);
        assert!(s.apply(&k[0]).is_empty());
        assert_eq!(s.to_dense(), d);
    }

    proptest! {
        #[test]
        fn sparse_agrees_with_dense(r in 1usize..7, c in 1usize..7, v in proptest::collection::vec(-2i64..3, 49)) {
            let f = Field::Rational;
            let d = Matrix::from_fn(f, r, c, |i, j| f.from_i64(v[i * 7 + j]));
            let s = SparseMatrix::from_dense(&d);
            prop_assert_eq!(s.rank(), d.rank());
            let k = s.kernel_basis();
            prop_assert_eq!(k.len(), c - d.rank());
            for x in &k {
                prop_assert!(s.apply(x).is_empty());
            }
            prop_assert_eq!(rank_of(f, c, k.clone()), k.len());
            prop_assert_eq!(s.transpose().to_dense(), d.transpose());
        }
    }
}
