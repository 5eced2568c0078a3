//! Artin–Wedderburn data for split semisimple algebras.
//!
//! Two routes: certifying a supplied system of matrix units, or splitting
//! idempotents from rational eigenvalues of corner elements.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};

use crate::algebra::{FinDimAlgebra, FinDimModule};
use crate::error::LinalgError;
use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar};
use crate::sparse::{axpy, to_dense, Echelon, SparseVec};

#[derive(Clone, Debug)]
pub struct SimpleBlock {
    /// The block is `M_size(k)`.
    pub size: usize,
    pub central_idempotent: SparseVec,
    pub primitive_idempotent: SparseVec,
    /// `units[i][j] = E_ij`, when the block came from a certified family.
    pub units: Option<Vec<Vec<SparseVec>>>,
}

#[derive(Clone, Debug)]
pub struct Wedderburn {
    pub blocks: Vec<SimpleBlock>,
}

impl Wedderburn {
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.size).collect()
    }

    /// Checks `E_ij E_kl = δ_jk E_il` inside each family, zero products across
    /// families, `Σ E_ii = 1`, and that the units form a basis.
    pub fn from_matrix_units(
        alg: &FinDimAlgebra,
        families: Vec<Vec<Vec<SparseVec>>>,
    ) -> Result<Wedderburn, LinalgError> {
        let fail = |m: String| Err(LinalgError::NotSemisimple(m));
        let mut all = Echelon::new(alg.field(), alg.dim());
        let mut count = 0;
        let mut diagonal_sum: SparseVec = Vec::new();
        for (a, fam) in families.iter().enumerate() {
            let n = fam.len();
            if fam.iter().any(|r| r.len() != n) || n == 0 {
                return fail(format!("family {a} is not a square array"));
            }
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            let p = alg.mul(&fam[i][j], &fam[k][l]);
                            let expect = if j == k { fam[i][l].clone() } else { Vec::new() };
                            if p != expect {
                                return fail(format!(
                                    "family {a}: E{i}{j} E{k}{l} has the wrong value"
                                ));
                            }
                        }
                    }
                    count += 1;
                    all.insert(fam[i][j].clone());
                }
                diagonal_sum = axpy(&diagonal_sum, &alg.field().one(), &fam[i][i]);
            }
            for (b, other) in families.iter().enumerate() {
                if a != b && !alg.mul(&fam[0][0], &other[0][0]).is_empty() {
                    return fail(format!("families {a} and {b} are not orthogonal"));
                }
            }
        }
        if diagonal_sum != *alg.unit() {
            return fail("diagonal units do not sum to 1".into());
        }
        if count != alg.dim() || all.rank() != alg.dim() {
            return fail(format!(
                "{count} units spanning rank {} in dimension {}",
                all.rank(),
                alg.dim()
            ));
        }
        let blocks = families
            .into_iter()
            .map(|fam| {
                let central = fam
                    .iter()
                    .enumerate()
                    .fold(Vec::new(), |acc, (i, r)| axpy(&acc, &alg.field().one(), &r[i]));
                SimpleBlock {
                    size: fam.len(),
                    central_idempotent: central,
                    primitive_idempotent: fam[0][0].clone(),
                    units: Some(fam),
                }
            })
            .collect();
        Ok(Wedderburn { blocks })
    }

    /// Decomposes a split semisimple algebra by repeatedly splitting idempotents.
    /// Semisimplicity is tested with the trace form, which is conclusive in
    /// characteristic zero and in characteristic larger than the dimension.
    pub fn decompose(alg: &FinDimAlgebra, seed: u64) -> Result<Wedderburn, LinalgError> {
        let field = alg.field();
        let n = alg.dim();
        let traces: Vec<Scalar> = (0..n)
            .map(|i| {
                let l = alg.left_mul_matrix(&alg.basis_vector(i));
                (0..n).fold(field.zero(), |acc, k| &acc + l.get(k, k))
            })
            .collect();
        let form = Matrix::from_fn(field, n, n, |i, j| {
            alg.product(i, j)
                .iter()
                .fold(field.zero(), |acc, (k, v)| &acc + &(v * &traces[*k]))
        });
        if form.rank() != n {
            return Err(LinalgError::NotSemisimple(
                "trace form is degenerate".into(),
            ));
        }

        let mut rng = seeded_rng(seed);
        let mut work = vec![alg.unit().clone()];
        let mut primitive = Vec::new();
        while let Some(e) = work.pop() {
            match split_idempotent(alg, &e, &mut rng)? {
                Some((f, g)) => {
                    work.push(g);
                    work.push(f);
                }
                None => primitive.push(e),
            }
        }

        // f ~ g iff f A g != 0
        let k = primitive.len();
        let mut parent: Vec<usize> = (0..k).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for a in 0..k {
            for b in a + 1..k {
                let linked = (0..n).any(|i| {
                    let x = alg.mul(&alg.mul(&primitive[a], &alg.basis_vector(i)), &primitive[b]);
                    !x.is_empty()
                });
                if linked {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    parent[rb] = ra;
                }
            }
        }
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut roots: Vec<usize> = Vec::new();
        for a in 0..k {
            let r = find(&mut parent, a);
            match roots.iter().position(|&x| x == r) {
                Some(p) => classes[p].push(a),
                None => {
                    roots.push(r);
                    classes.push(vec![a]);
                }
            }
        }
        let total: usize = classes.iter().map(|c| c.len() * c.len()).sum();
        if total != n {
            return Err(LinalgError::NotSemisimple(format!(
                "block sizes account for dimension {total} of {n}; the algebra is not split"
            )));
        }
        let blocks = classes
            .into_iter()
            .map(|c| SimpleBlock {
                size: c.len(),
                central_idempotent: c
                    .iter()
                    .fold(Vec::new(), |acc, &i| axpy(&acc, &field.one(), &primitive[i])),
                primitive_idempotent: primitive[c[0]].clone(),
                units: None,
            })
            .collect();
        Ok(Wedderburn { blocks })
    }

    /// The simple left module `A f` of each block.
    pub fn simple_modules(&self, alg: &FinDimAlgebra) -> Vec<FinDimModule> {
        let reg = alg.regular_module();
        self.blocks
            .iter()
            .map(|b| {
                let mut e = Echelon::new(alg.field(), alg.dim());
                let mut cols = Vec::new();
                for i in 0..alg.dim() {
                    let v = alg.mul(&alg.basis_vector(i), &b.primitive_idempotent);
                    if e.insert(v.clone()) {
                        cols.push(to_dense(alg.field(), &v, alg.dim()));
                    }
                }
                let basis = Matrix::from_columns(alg.field(), alg.dim(), &cols);
                reg.submodule(&basis).expect("left ideal is a submodule")
            })
            .collect()
    }

    /// Multiplicity of each simple module in a semisimple module: the rank of
    /// the primitive idempotent acting on it.
    pub fn multiplicities(&self, module: &FinDimModule) -> Vec<usize> {
        self.blocks
            .iter()
            .map(|b| module.act(&b.primitive_idempotent).rank())
            .collect()
    }
}

fn seeded_rng(seed: u64) -> rand::rngs::StdRng {
    rand::rngs::StdRng::seed_from_u64(seed)
}

/// Splits `e = f + g` into nonzero orthogonal idempotents, or returns `None`
/// when the corner `eAe` is one-dimensional.
fn split_idempotent(
    alg: &FinDimAlgebra,
    e: &SparseVec,
    rng: &mut impl Rng,
) -> Result<Option<(SparseVec, SparseVec)>, LinalgError> {
    let field = alg.field();
    let n = alg.dim();
    let mut ech = Echelon::new(field, n);
    let mut corner: Vec<SparseVec> = Vec::new();
    for i in 0..n {
        let v = alg.mul(&alg.mul(e, &alg.basis_vector(i)), e);
        if ech.insert(v.clone()) {
            corner.push(v);
        }
    }
    let d = corner.len();
    if d <= 1 {
        return Ok(None);
    }
    let basis = Matrix::from_columns(
        field,
        n,
        &corner.iter().map(|v| to_dense(field, v, n)).collect::<Vec<_>>(),
    );
    let coords = |v: &SparseVec| basis.solve(&to_dense(field, v, n)).expect("stays in corner");

    let mut candidates: Vec<SparseVec> = corner.clone();
    for _ in 0..(4 * d + 8) {
        let mut z = Vec::new();
        for c in &corner {
            z = axpy(&z, &field.from_i64(rng.gen_range(-3..4)), c);
        }
        candidates.push(z);
    }
    for z in candidates {
        // matrix of y ↦ z y on the corner
        let cols: Vec<Vec<Scalar>> = corner.iter().map(|c| coords(&alg.mul(&z, c))).collect();
        let m = Matrix::from_columns(field, d, &cols);
        for lambda in rational_eigenvalues(&m) {
            let shifted = m.sub(&Matrix::identity(field, d).scale(&lambda));
            let kernel = shifted.kernel_basis();
            if kernel.is_empty() || kernel.len() == d {
                continue;
            }
            // right ideal r = ker(z - λ) inside the corner; find its left identity
            let ideal: Vec<SparseVec> = kernel
                .iter()
                .map(|k| {
                    k.iter().enumerate().fold(Vec::new(), |acc, (i, c)| axpy(&acc, c, &corner[i]))
                })
                .collect();
            let s = ideal.len();
            // Σ_k c_k r_k r_j = r_j for all j
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for rj in &ideal {
                let prods: Vec<Vec<Scalar>> = ideal
                    .iter()
                    .map(|rk| to_dense(field, &alg.mul(rk, rj), n))
                    .collect();
                let target = to_dense(field, rj, n);
                for t in 0..n {
                    rows.push((0..s).map(|k| prods[k][t].clone()).collect::<Vec<_>>());
                    rhs.push(target[t].clone());
                }
            }
            let sys = Matrix::from_rows(field, s, &rows);
            let Some(c) = sys.solve(&rhs) else {
                return Err(LinalgError::NotSemisimple(
                    "a right ideal of a corner has no idempotent generator".into(),
                ));
            };
            let f = c
                .iter()
                .enumerate()
                .fold(Vec::new(), |acc, (k, ck)| axpy(&acc, ck, &ideal[k]));
            let g = axpy(e, &-field.one(), &f);
            return Ok(Some((f, g)));
        }
    }
    Err(LinalgError::NotSemisimple(format!(
        "no rational eigenvalue splits a corner of dimension {d}; the algebra is not split"
    )))
}

/// Rational (or `F_p`) roots of the minimal polynomial of `m` on a cyclic vector,
/// for a few starting vectors.
fn rational_eigenvalues(m: &Matrix) -> Vec<Scalar> {
    let field = m.field();
    let d = m.rows();
    let mut out: Vec<Scalar> = Vec::new();
    for start in 0..d {
        let mut v = vec![field.zero(); d];
        v[start] = field.one();
        let poly = krylov_polynomial(m, v);
        for r in polynomial_roots(field, &poly) {
            if !out.contains(&r) {
                out.push(r);
            }
        }
    }
    out
}

/// Monic polynomial `p` of least degree with `p(m) v = 0`, lowest coefficient first.
fn krylov_polynomial(m: &Matrix, v: Vec<Scalar>) -> Vec<Scalar> {
    let field = m.field();
    let mut vectors = vec![v];
    loop {
        let next = m.apply(vectors.last().unwrap());
        let basis = Matrix::from_columns(field, m.rows(), &vectors);
        if let Some(c) = basis.solve(&next) {
            let mut p: Vec<Scalar> = c.into_iter().map(|x| -x).collect();
            p.push(field.one());
            return p;
        }
        vectors.push(next);
    }
}

fn polynomial_roots(field: Field, poly: &[Scalar]) -> Vec<Scalar> {
    let eval = |x: &Scalar| {
        poly.iter()
            .rev()
            .fold(field.zero(), |acc, c| &(&acc * x) + c)
    };
    match field {
        Field::Prime(p) => {
            if p > 100_000 {
                return Vec::new();
            }
            (0..p as i64)
                .map(|x| field.from_i64(x))
                .filter(|x| eval(x).is_zero())
                .collect()
        }
        Field::Rational => {
            let den = poly.iter().fold(BigInt::one(), |acc, c| {
                acc.lcm(c.as_rational().unwrap().denom())
            });
            let ints: Vec<BigInt> = poly
                .iter()
                .map(|c| {
                    let q = c.as_rational().unwrap();
                    q.numer() * (&den / q.denom())
                })
                .collect();
            let mut roots = Vec::new();
            let mut lo = 0;
            while lo < ints.len() && ints[lo].is_zero() {
                lo += 1;
            }
            if lo > 0 {
                roots.push(field.zero());
            }
            let (Some(a0), Some(an)) = (ints.get(lo), ints.last()) else {
                return roots;
            };
            let (Some(ps), Some(qs)) = (small_divisors(a0), small_divisors(an)) else {
                return roots;
            };
            for p in &ps {
                for q in &qs {
                    for sign in [1i64, -1] {
                        let x = Scalar::Rational(BigRational::new(
                            BigInt::from(sign) * p,
                            q.clone(),
                        ));
                        if !roots.contains(&x) && eval(&x).is_zero() {
                            roots.push(x);
                        }
                    }
                }
            }
            roots
        }
    }
}

/// Positive divisors of `n`, when `|n|` is small enough to factor by trial division.
fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// Coordinates of `v` in the given basis.
pub fn coordinates(field: Field, basis: &[SparseVec], len: usize, v: &SparseVec) -> Option<Vec<Scalar>> {
    let m = Matrix::from_columns(
        field,
        len,
        &basis.iter().map(|b| to_dense(field, b, len)).collect::<Vec<_>>(),
    );
    m.solve(&to_dense(field, v, len))
}

/// `Σ c_i v_i`.
pub fn combine(coeffs: &[Scalar], vectors: &[SparseVec]) -> SparseVec {
    coeffs
        .iter()
        .zip(vectors)
        .fold(Vec::new(), |acc, (c, v)| axpy(&acc, c, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_alg(n: usize) -> FinDimAlgebra {
        let f = Field::Rational;
        let idx = |i: usize, j: usize| n * i + j;
        let mut table = vec![vec![Vec::new(); n * n]; n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    table[idx(i, j)][idx(j, k)] = vec![(idx(i, k), f.one())];
                }
            }
        }
        let labels = (0..n * n).map(|k| format!("E{}{}", k / n, k % n)).collect();
        let unit = (0..n).map(|i| (idx(i, i), f.one())).collect();
        FinDimAlgebra::new(f, labels, table, unit).unwrap()
    }

    fn units(n: usize) -> Vec<Vec<SparseVec>> {
        let f = Field::Rational;
        (0..n)
            .map(|i| (0..n).map(|j| vec![(n * i + j, f.one())]).collect())
            .collect()
    }

    #[test]
    fn certifies_matrix_units() {
        let a = mat_alg(2);
        let w = Wedderburn::from_matrix_units(&a, vec![units(2)]).unwrap();
        assert_eq!(w.block_sizes(), vec![2]);
        let mut bad = units(2);
        bad[0].swap(0, 1);
        assert!(Wedderburn::from_matrix_units(&a, vec![bad]).is_err());
    }

    #[test]
    fn decomposes_products_of_matrix_algebras() {
        let a = mat_alg(2).direct_product(&mat_alg(1)).direct_product(&mat_alg(3));
        a.validate().unwrap();
        let w = Wedderburn::decompose(&a, 7).unwrap();
        let mut sizes = w.block_sizes();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        let simples = w.simple_modules(&a);
        for (b, s) in w.blocks.iter().zip(&simples) {
            assert_eq!(s.dim(), b.size);
            s.validate(&a).unwrap();
        }
        let reg = a.regular_module();
        let mult = w.multiplicities(&reg);
        assert_eq!(mult, w.block_sizes());
    }

    #[test]
    fn decomposes_group_algebra_of_c2() {
        // k[g]/(g^2 - 1) ≅ k × k
        let f = Field::Rational;
        let one = |i: usize| vec![(i, f.one())];
        let a = FinDimAlgebra::new(
            f,
            vec!["1".into(), "g".into()],
            vec![vec![one(0), one(1)], vec![one(1), one(0)]],
            one(0),
        )
        .unwrap();
        let w = Wedderburn::decompose(&a, 1).unwrap();
        assert_eq!(w.block_sizes(), vec![1, 1]);
    }

    #[test]
    fn rejects_non_semisimple_and_non_split() {
        let f = Field::Rational;
        let one = |i: usize| vec![(i, f.one())];
        let dual = FinDimAlgebra::new(
            f,
            vec!["1".into(), "x".into()],
            vec![vec![one(0), one(1)], vec![one(1), vec![]]],
            one(0),
        )
        .unwrap();
        assert!(Wedderburn::decompose(&dual, 1).is_err());
        // Q(i) is a field that does not split over Q
        let gaussian = FinDimAlgebra::new(
            f,
            vec!["1".into(), "i".into()],
            vec![vec![one(0), one(1)], vec![one(1), vec![(0, f.from_i64(-1))]]],
            one(0),
        )
        .unwrap();
        assert!(Wedderburn::decompose(&gaussian, 1).is_err());
    }
}
