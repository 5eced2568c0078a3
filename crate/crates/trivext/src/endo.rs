use qhw_linalg::sparse::{from_dense, to_dense};
use qhw_linalg::{BoundedComplex, Matrix, Scalar, SparseMatrix, SparseVec};
use serde::Serialize;

use crate::ext::TrivialExtension;
use crate::resolution::p_module;
use crate::stage::GradedStageInput;
use crate::util::{flat, odd, sign, span};
use crate::TrivextError;

/// Number of `x`-components is `WIDTH + 1`; `y`-components number `WIDTH`.
const WIDTH: i64 = 2;

/// `Φ(a) = {((-1)^{pn} a, 0)}` or, as a negative control, `{(a, 0)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PhiVariant {
    Signed,
    Unsigned,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndDegree {
    pub degree: i64,
    pub cohomology_dim: usize,
    pub component_dim: usize,
    /// Every `Φ(a)` is a cocycle.
    pub cocycles: bool,
    /// The classes of `Φ(a)` form a basis of `Hⁿ`.
    pub induces_iso: bool,
    /// Interior of the window, where the truncation does not interfere.
    pub reliable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiReport {
    pub window: (i64, i64),
    pub variant: PhiVariant,
    /// `(x, y) ↦ [(b, c) ↦ (bx, by + cx)]` is a bijection onto `Hom_Λ(P^p, P^{p+n})`.
    pub identification: bool,
    /// The differential `{(0, x_p − (−1)ⁿ x_{p+1})}` agrees with `d ∘ f − (−1)ⁿ f ∘ d`.
    pub formula_matches: bool,
    pub degrees: Vec<EndDegree>,
    pub failures: Vec<String>,
    pub pass: bool,
}

/// `b ↦ b x` from `A^p` to `A^{p+n}`.
fn right_by(s: &GradedStageInput, p: i64, n: i64, x: &SparseVec) -> Matrix {
    let mut out = Matrix::zeros(s.field(), s.dim(p + n), s.dim(p));
    for (j, c) in x {
        out = out.add(&s.right_mul(p, n, *j).scale(c));
    }
    out
}

/// `(b, c) ↦ (bx, by + cx)` from `P^p` to `P^{p+n}`.
fn component_map(s: &GradedStageInput, p: i64, n: i64, x: &SparseVec, y: &SparseVec) -> Matrix {
    let field = s.field();
    let top = right_by(s, p, n, x).hstack(&Matrix::zeros(field, s.dim(p + n), s.dim(p - 1)));
    let bottom = right_by(s, p, n - 1, y).hstack(&right_by(s, p - 1, n, x));
    top.vstack(&bottom)
}

struct Layout {
    dn: usize,
    dm: usize,
}

impl Layout {
    fn new(s: &GradedStageInput, n: i64) -> Layout {
        Layout {
            dn: s.dim(n),
            dm: s.dim(n - 1),
        }
    }

    fn dim(&self) -> usize {
        (WIDTH as usize + 1) * self.dn + WIDTH as usize * self.dm
    }

    fn x(&self, p: i64, k: usize) -> usize {
        p as usize * self.dn + k
    }

    fn y(&self, p: i64, k: usize) -> usize {
        (WIDTH as usize + 1) * self.dn + p as usize * self.dm + k
    }

    /// `(x_p, y_p)` of a vector; `y_WIDTH` is zero.
    fn split(&self, v: &[Scalar], p: i64) -> (SparseVec, SparseVec) {
        let x = from_dense(&v[self.x(p, 0)..self.x(p, 0) + self.dn]);
        let y = if p < WIDTH {
            from_dense(&v[self.y(p, 0)..self.y(p, 0) + self.dm])
        } else {
            Vec::new()
        };
        (x, y)
    }
}

/// The formula differential `Cⁿ → C^{n+1}`.
fn formula(s: &GradedStageInput, n: i64) -> SparseMatrix {
    let (src, dst) = (Layout::new(s, n), Layout::new(s, n + 1));
    let field = s.field();
    let minus = -sign(field, odd(n));
    let mut triplets = Vec::new();
    for p in 0..WIDTH {
        for k in 0..src.dn {
            triplets.push((dst.y(p, k), src.x(p, k), field.one()));
            triplets.push((dst.y(p, k), src.x(p + 1, k), minus.clone()));
        }
    }
    SparseMatrix::from_triplets(field, dst.dim(), src.dim(), triplets)
}

/// `Φ(a)` for a vector `a ∈ Aⁿ`.
fn phi(s: &GradedStageInput, n: i64, a: &[Scalar], variant: PhiVariant) -> SparseVec {
    let l = Layout::new(s, n);
    let mut v = vec![s.field().zero(); l.dim()];
    for p in 0..=WIDTH {
        let negative = variant == PhiVariant::Signed && odd(p * n);
        for (k, c) in a.iter().enumerate() {
            v[l.x(p, k)] = c.negate_if(negative);
        }
    }
    from_dense(&v)
}

/// Identification and formula checks for degree `n`.
fn check_degree(ext: &TrivialExtension, n: i64, failures: &mut Vec<String>) -> (bool, bool) {
    let s = ext.stage();
    let field = s.field();
    let src = Layout::new(s, n);
    let basis = |d: usize| Matrix::identity(field, d).columns();
    let mut identification = true;
    for p in 0..=WIDTH {
        let (pp, pq) = (p_module(ext, p), p_module(ext, p + n));
        let mut maps = Vec::new();
        for x in basis(src.dn) {
            maps.push(component_map(s, p, n, &from_dense(&x), &Vec::new()));
        }
        for y in basis(src.dm) {
            maps.push(component_map(s, p, n, &Vec::new(), &from_dense(&y)));
        }
        let linear = maps.iter().all(|f| pp.is_homomorphism(&pq, f));
        let rank = span(field, pp.dim() * pq.dim(), maps.iter().map(flat)).rank();
        if !(linear && rank == maps.len() && rank == pp.hom_space(&pq).len()) {
            identification = false;
            failures.push(format!("Hom(P^{p}, P^{}) is not A^{n} ⊕ A^{}", p + n, n - 1));
        }
    }

    let dst = Layout::new(s, n + 1);
    let d_formula = formula(s, n).to_dense();
    let mut matches = true;
    for v in basis(src.dim()) {
        let expected = d_formula.apply(&v);
        for p in 0..WIDTH {
            let (x0, y0) = src.split(&v, p);
            let (x1, y1) = src.split(&v, p + 1);
            let f_p = component_map(s, p, n, &x0, &y0);
            let f_next = component_map(s, p + 1, n, &x1, &y1);
            let d = |q: i64| crate::resolution::differential(ext, q);
            let g = d(p + n).mul(&f_p).sub(&f_next.mul(&d(p)).scale(&sign(field, odd(n))));
            let theta: Vec<Vec<Scalar>> = basis(dst.dn)
                .iter()
                .map(|x| component_map(s, p, n + 1, &from_dense(x), &Vec::new()))
                .chain(basis(dst.dm).iter().map(|y| component_map(s, p, n + 1, &Vec::new(), &from_dense(y))))
                .map(|m| to_dense(field, &flat(&m), m.rows() * m.cols()))
                .collect();
            let theta = Matrix::from_columns(field, g.rows() * g.cols(), &theta);
            let got = theta.solve(&to_dense(field, &flat(&g), g.rows() * g.cols()));
            let (ex, ey) = dst.split(&expected, p);
            let ok = got.is_some_and(|c| from_dense(&c[..dst.dn]) == ex && from_dense(&c[dst.dn..]) == ey);
            if !ok {
                matches = false;
            }
        }
    }
    if !matches {
        failures.push(format!("End differential out of degree {n} differs from the formula"));
    }
    (identification, matches)
}

pub fn verify_phi_quasi_iso(ext: &TrivialExtension, lo: i64, hi: i64) -> Result<PhiReport, TrivextError> {
    verify_phi_quasi_iso_variant(ext, lo, hi, PhiVariant::Signed)
}

/// The window `[lo, hi]` of `End_Λ(P)` in the model `∏_p (Aⁿ ⊕ A^{n-1})`, with
/// `x`-components for `0 ≤ p ≤ 2` and `y`-components for `0 ≤ p < 2`.
pub fn verify_phi_quasi_iso_variant(
    ext: &TrivialExtension,
    lo: i64,
    hi: i64,
    variant: PhiVariant,
) -> Result<PhiReport, TrivextError> {
    let s = ext.stage();
    let field = s.field();
    s.require(lo - 2, hi + WIDTH + 1)?;
    let mut failures = Vec::new();
    let mut identification = true;
    let mut formula_matches = true;
    for n in lo..hi {
        let (i, f) = check_degree(ext, n, &mut failures);
        identification &= i;
        formula_matches &= f;
    }
    let dims = (lo..=hi).map(|n| Layout::new(s, n).dim()).collect();
    let diffs: Vec<SparseMatrix> = (lo..hi).map(|n| formula(s, n)).collect();
    let complex = BoundedComplex::new(field, lo, dims, diffs.clone())?;
    let mut degrees = Vec::new();
    for n in lo..=hi {
        let reliable = lo < n && n < hi;
        let cohomology_dim = complex.betti(n)?;
        let l = Layout::new(s, n);
        let images: Vec<SparseVec> = Matrix::identity(field, l.dn)
            .columns()
            .iter()
            .map(|a| phi(s, n, a, variant))
            .collect();
        let cocycles = match complex.differential(n) {
            Some(d) => images.iter().all(|v| d.apply(v).is_empty()),
            None => true,
        };
        let mut bounds = span(field, l.dim(), std::iter::empty());
        if let Some(d) = complex.differential(n - 1) {
            for c in d.columns() {
                bounds.insert(c.clone());
            }
        }
        let before = bounds.rank();
        for v in &images {
            bounds.insert(v.clone());
        }
        let induces_iso = cocycles && bounds.rank() - before == l.dn && cohomology_dim == l.dn;
        if reliable && !(cocycles && induces_iso) {
            failures.push(format!("Φ does not induce H^{n} ≅ A^{n}"));
        }
        degrees.push(EndDegree {
            degree: n,
            cohomology_dim,
            component_dim: l.dn,
            cocycles,
            induces_iso,
            reliable,
        });
    }
    Ok(PhiReport {
        window: (lo, hi),
        variant,
        identification,
        formula_matches,
        degrees,
        pass: failures.is_empty(),
        failures,
    })
}
