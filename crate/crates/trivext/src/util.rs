use qhw_linalg::{Echelon, Field, Matrix, Scalar, SparseVec};

/// Row-major entries of a matrix as a sparse vector.
pub(crate) fn flat(m: &Matrix) -> SparseVec {
    let mut out = Vec::new();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let v = m.get(r, c);
            if !v.is_zero() {
                out.push((r * m.cols() + c, v.clone()));
            }
        }
    }
    out
}

pub(crate) fn span(field: Field, len: usize, vs: impl IntoIterator<Item = SparseVec>) -> Echelon {
    let mut e = Echelon::new(field, len);
    for v in vs {
        e.insert(v);
    }
    e
}

/// Columns forming a basis of the column space.
pub(crate) fn column_space(m: &Matrix) -> Matrix {
    Matrix::from_columns(m.field(), m.rows(), &m.image_basis())
}

pub(crate) fn kernel(m: &Matrix) -> Matrix {
    Matrix::from_columns(m.field(), m.cols(), &m.kernel_basis())
}

pub(crate) fn contains_columns(big: &Matrix, small: &Matrix) -> bool {
    let e = span(big.field(), big.rows(), big.columns().iter().map(|c| qhw_linalg::sparse::from_dense(c)));
    small.columns().iter().all(|c| e.contains(&qhw_linalg::sparse::from_dense(c)))
}

pub(crate) fn same_column_space(a: &Matrix, b: &Matrix) -> bool {
    a.rank() == b.rank() && contains_columns(a, b)
}

pub(crate) fn stack_rows(field: Field, cols: usize, blocks: &[Matrix]) -> Matrix {
    blocks
        .iter()
        .fold(Matrix::zeros(field, 0, cols), |acc, b| acc.vstack(b))
}

pub(crate) fn stack_cols(field: Field, rows: usize, blocks: &[Matrix]) -> Matrix {
    blocks
        .iter()
        .fold(Matrix::zeros(field, rows, 0), |acc, b| acc.hstack(b))
}

pub(crate) fn sign(field: Field, negative: bool) -> Scalar {
    field.one().negate_if(negative)
}

/// `(-1)^k` as a parity.
pub(crate) fn odd(k: i64) -> bool {
    k.rem_euclid(2) == 1
}
