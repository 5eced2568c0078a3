use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::{bareiss_det, Matrix};
use crate::scalar::Field;

/// A dense integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            data: vec![vec![BigInt::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> IntMatrix {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> IntMatrix {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r][c] = v;
    }

    pub fn data(&self) -> &[Vec<BigInt>] {
        &self.data
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i][j] += &self.data[i][k] * &other.data[k][j];
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i][j] -= &other.data[i][j];
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j][i] = self.data[i][j].clone();
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> IntMatrix {
        assert_eq!(self.rows, self.cols, "power of a non-square matrix");
        let mut out = IntMatrix::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols)).map(|i| &self.data[i][i]).sum()
    }

    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        bareiss_det(self.data.clone())
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.determinant().abs().is_one()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().flatten().all(|x| !x.is_negative())
    }

    /// Conjugation by a permutation: entry `(σ(i), σ(j))` of the result is entry `(i, j)`.
    pub fn permute(&self, sigma: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[sigma[i]][sigma[j]] = self.data[i][j].clone();
            }
        }
        out
    }

    pub fn to_matrix(&self, field: Field) -> Matrix {
        Matrix::from_fn(field, self.rows, self.cols, |i, j| field.from_bigint(&self.data[i][j]))
    }

    pub fn rank(&self) -> usize {
        self.to_matrix(Field::Rational).rank()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for row in &mut self.data {
            row.swap(a, b);
        }
    }

    /// row[target] += q * row[source]
    fn add_row(&mut self, target: usize, source: usize, q: &BigInt) {
        for c in 0..self.cols {
            let v = &self.data[source][c] * q;
            self.data[target][c] += v;
        }
    }

    /// col[target] += q * col[source]
    fn add_col(&mut self, target: usize, source: usize, q: &BigInt) {
        for row in &mut self.data {
            let v = &row[source] * q;
            row[target] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for x in &mut self.data[r] {
            *x = -&*x;
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .data
            .iter()
            .map(|r| {
                let xs: Vec<String> = r.iter().map(ToString::to_string).collect();
                format!("[{}]", xs.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// `u * m * v = d` with `d` diagonal, `d_1 | d_2 | ...`, and `u`, `v` unimodular.
/// The inverses are tracked so that `m = u_inv * d * v_inv` exactly.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    rows: usize,
    cols: usize,
}

impl SmithForm {
    /// Nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| !d.is_zero()).cloned().collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.rows, self.cols);
        for (i, x) in self.diagonal.iter().enumerate() {
            d.data[i][i] = x.clone();
        }
        d
    }

    pub fn reconstruct(&self) -> IntMatrix {
        self.u_inv.mul(&self.diagonal_matrix()).mul(&self.v_inv)
    }

    /// Invariant factors of the cokernel `Z^rows / im`, omitting units:
    /// zeros stand for free summands.
    pub fn cokernel(&self) -> Vec<BigInt> {
        let mut out: Vec<BigInt> = self
            .diagonal
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect();
        out.extend(std::iter::repeat(BigInt::zero()).take(self.rows.saturating_sub(self.diagonal.len())));
        out
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut u_inv = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    let row_swap = |a: &mut IntMatrix, u: &mut IntMatrix, ui: &mut IntMatrix, i: usize, j: usize| {
        a.swap_rows(i, j);
        u.swap_rows(i, j);
        ui.swap_cols(i, j);
    };
    let col_swap = |a: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, i: usize, j: usize| {
        a.swap_cols(i, j);
        v.swap_cols(i, j);
        vi.swap_rows(i, j);
    };
    let row_add =
        |a: &mut IntMatrix, u: &mut IntMatrix, ui: &mut IntMatrix, t: usize, s: usize, q: &BigInt| {
            a.add_row(t, s, q);
            u.add_row(t, s, q);
            ui.add_col(s, t, &-q);
        };
    let col_add =
        |a: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, t: usize, s: usize, q: &BigInt| {
            a.add_col(t, s, q);
            v.add_col(t, s, q);
            vi.add_row(s, t, &-q);
        };

    let n = rows.min(cols);
    for t in 0..n {
        // global pivot: smallest nonzero entry of the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a.data[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| a.data[i][j].abs() < a.data[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        row_swap(&mut a, &mut u, &mut u_inv, t, bi);
        col_swap(&mut a, &mut v, &mut v_inv, t, bj);
        loop {
            // bring the smallest entry of row t / column t to the pivot
            let mut best = (t, t);
            for i in t + 1..rows {
                if !a.data[i][t].is_zero() && a.data[i][t].abs() < a.data[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t + 1..cols {
                if !a.data[t][j].is_zero() && a.data[t][j].abs() < a.data[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                row_swap(&mut a, &mut u, &mut u_inv, t, best.0);
            }
            if best.1 != t {
                col_swap(&mut a, &mut v, &mut v_inv, t, best.1);
            }
            let p = a.data[t][t].clone();
            for i in t + 1..rows {
                let q = a.data[i][t].div_floor(&p);
                if !q.is_zero() {
                    row_add(&mut a, &mut u, &mut u_inv, i, t, &-q);
                }
            }
            for j in t + 1..cols {
                let q = a.data[t][j].div_floor(&p);
                if !q.is_zero() {
                    col_add(&mut a, &mut v, &mut v_inv, j, t, &-q);
                }
            }
            let clear = (t + 1..rows).all(|i| a.data[i][t].is_zero())
                && (t + 1..cols).all(|j| a.data[t][j].is_zero());
            if !clear {
                continue;
            }
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a.data[i][j].is_multiple_of(&p)));
            match offender {
                Some(i) => row_add(&mut a, &mut u, &mut u_inv, t, i, &BigInt::one()),
                None => break,
            }
        }
        if a.data[t][t].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
            for row in &mut u_inv.data {
                row[t] = -&row[t];
            }
        }
    }
    let diagonal = (0..n).map(|i| a.data[i][i].clone()).collect();
    SmithForm {
        diagonal,
        u,
        v,
        u_inv,
        v_inv,
        rows,
        cols,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn factors(rows: &[Vec<i64>]) -> Vec<i64> {
        smith_normal_form(&IntMatrix::from_i64(rows))
            .diagonal
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect()
    }

    #[test]
    fn examples() {
        assert_eq!(factors(&[vec![2]]), vec![2]);
        assert_eq!(factors(&[vec![1, 0], vec![0, 1]]), vec![1, 1]);
        assert_eq!(factors(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert_eq!(factors(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(factors(&[vec![0, 0], vec![0, 0]]), vec![0, 0]);
    }

    #[test]
    fn cokernel_of_two() {
        let s = smith_normal_form(&IntMatrix::from_i64(&[vec![2]]));
        assert_eq!(s.cokernel(), vec![BigInt::from(2)]);
        let s = smith_normal_form(&IntMatrix::from_i64(&[vec![1]]));
        assert!(s.cokernel().is_empty());
        let s = smith_normal_form(&IntMatrix::from_i64(&[vec![0]]));
        assert_eq!(s.cokernel(), vec![BigInt::zero()]);
    }

    fn gcd_all(v: &[i64]) -> i64 {
        v.iter().fold(0i64, |g, &x| g.gcd(&x))
    }

    proptest! {
        #[test]
        fn transforms_reconstruct(r in 1usize..5, c in 1usize..5, v in proptest::collection::vec(-9i64..10, 16)) {
            let rows: Vec<Vec<i64>> = (0..r).map(|i| (0..c).map(|j| v[i * 4 + j]).collect()).collect();
            let m = IntMatrix::from_i64(&rows);
            let s = smith_normal_form(&m);
            prop_assert!(s.u.is_unimodular());
            prop_assert!(s.v.is_unimodular());
            prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.diagonal_matrix());
            prop_assert_eq!(s.reconstruct(), m.clone());
            prop_assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(r));
            prop_assert_eq!(s.v_inv.mul(&s.v), IntMatrix::identity(c));
            let d = &s.diagonal;
            for k in 1..d.len() {
                prop_assert!(d[k].is_zero() || (!d[k - 1].is_zero() && d[k].is_multiple_of(&d[k - 1])));
            }
            prop_assert!(d.iter().all(|x| !x.is_negative()));
            // first factor is the gcd of all entries
            let flat: Vec<i64> = rows.concat();
            prop_assert_eq!(d[0].clone(), BigInt::from(gcd_all(&flat)));
            prop_assert_eq!(s.rank(), m.rank());
            if r == c {
                let prod: BigInt = d.iter().product();
                prop_assert_eq!(prod, m.determinant().abs());
            }
        }
    }
}
