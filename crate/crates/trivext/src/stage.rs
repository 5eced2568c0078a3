use std::collections::BTreeMap;
use std::sync::Arc;

use qhw_leavitt::{slice_basis, stage_algebra, LeavittElement, MonomialIndex};
use qhw_linalg::sparse::axpy;
use qhw_linalg::{balanced_tensor, FinDimAlgebra, Field, Matrix, SparseVec};
use qhw_quiver::Quiver;
use serde::Serialize;

use crate::util::span;
use crate::TrivextError;

/// Products `A^n × A^m → A^{n+m}` on basis elements: `table[i][j] = a_i b_j`.
type Table = Vec<Vec<SparseVec>>;

/// Homogeneous components `A^n` for `n` in a window `[lo, hi]` around zero,
/// with every product that stays inside the window.
#[derive(Clone, Debug)]
pub struct GradedStageInput {
    field: Field,
    lo: i64,
    hi: i64,
    labels: BTreeMap<i64, Vec<String>>,
    products: BTreeMap<(i64, i64), Table>,
    algebra: FinDimAlgebra,
}

/// Which trivial extension a Leavitt stage feeds: `L⁰ ⋉ L¹` or `L⁰ ⋉ L^{-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairCheck {
    pub left: i64,
    pub right: i64,
    pub tensor_dim: usize,
    pub target_dim: usize,
    pub image_rank: usize,
    pub bijective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrongGradingCheck {
    /// `A¹ A^{-1} = A⁰`.
    pub plus_minus: bool,
    /// `A^{-1} A¹ = A⁰`.
    pub minus_plus: bool,
    /// `A^n ⊗_{A⁰} A^m → A^{n+m}` for every pair inside the window.
    pub pairs: Vec<PairCheck>,
    pub pass: bool,
}

impl GradedStageInput {
    /// Validates shapes, the unit of `A⁰` on every component, and associativity
    /// on basis triples whose degrees stay in the window.
    pub fn new(
        field: Field,
        lo: i64,
        hi: i64,
        labels: BTreeMap<i64, Vec<String>>,
        products: BTreeMap<(i64, i64), Table>,
        unit: SparseVec,
    ) -> Result<GradedStageInput, TrivextError> {
        let bad = |m: String| Err(TrivextError::InvalidStage(m));
        if lo > -1 || hi < 1 {
            return bad(format!("window [{lo}, {hi}] must contain -1, 0 and 1"));
        }
        for n in lo..=hi {
            if !labels.contains_key(&n) {
                return bad(format!("missing component A^{n}"));
            }
        }
        let dim = |n: i64| labels[&n].len();
        for n in lo..=hi {
            for m in lo..=hi {
                if !(lo..=hi).contains(&(n + m)) {
                    continue;
                }
                let Some(t) = products.get(&(n, m)) else {
                    return bad(format!("missing product A^{n} × A^{m}"));
                };
                let target = dim(n + m);
                if t.len() != dim(n)
                    || t.iter().any(|r| r.len() != dim(m))
                    || t.iter().flatten().flatten().any(|(k, _)| *k >= target)
                {
                    return bad(format!("product table A^{n} × A^{m} has the wrong shape"));
                }
            }
        }
        let algebra = FinDimAlgebra::new(field, labels[&0].clone(), products[&(0, 0)].clone(), unit.clone())
            .map_err(|e| TrivextError::InvalidStage(e.to_string()))?;
        let s = GradedStageInput {
            field,
            lo,
            hi,
            labels,
            products,
            algebra,
        };
        for n in lo..=hi {
            for i in 0..s.dim(n) {
                let x = vec![(i, field.one())];
                if s.mul(0, n, &unit, &x) != x || s.mul(n, 0, &x, &unit) != x {
                    return bad(format!("the unit does not act trivially on A^{n}"));
                }
            }
        }
        for n in lo..=hi {
            for m in lo..=hi {
                for l in lo..=hi {
                    let inside = |d: i64| (lo..=hi).contains(&d);
                    if !(inside(n + m) && inside(m + l) && inside(n + m + l)) {
                        continue;
                    }
                    for i in 0..s.dim(n) {
                        for j in 0..s.dim(m) {
                            let xy = s.product(n, m, i, j);
                            for k in 0..s.dim(l) {
                                let z = vec![(k, field.one())];
                                let left = s.mul(n + m, l, xy, &z);
                                let right = s.mul(n, m + l, &vec![(i, field.one())], &s.mul(m, l, &vec![(j, field.one())], &z));
                                if left != right {
                                    return bad(format!(
                                        "({} {}) {} differs from {} ({} {})",
                                        s.labels[&n][i], s.labels[&m][j], s.labels[&l][k], s.labels[&n][i],
                                        s.labels[&m][j], s.labels[&l][k]
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(s)
    }

    /// The Laurent polynomials `k[x, x^{-1}]`, one basis element `x^n` per degree.
    pub fn laurent(field: Field, width: i64) -> GradedStageInput {
        let labels = (-width..=width).map(|n| (n, vec![format!("x^{n}")])).collect();
        let mut products = BTreeMap::new();
        for n in -width..=width {
            for m in -width..=width {
                if (n + m).abs() <= width {
                    products.insert((n, m), vec![vec![vec![(0, field.one())]]]);
                }
            }
        }
        GradedStageInput::new(field, -width, width, labels, products, vec![(0, field.one())])
            .expect("the Laurent stage is valid")
    }

    /// `A` concentrated in degree zero; never strongly graded.
    pub fn concentrated(algebra: &FinDimAlgebra, width: i64) -> GradedStageInput {
        let field = algebra.field();
        let mut labels = BTreeMap::new();
        let mut products = BTreeMap::new();
        for n in -width..=width {
            labels.insert(n, if n == 0 { algebra.labels().to_vec() } else { Vec::new() });
        }
        for n in -width..=width {
            for m in -width..=width {
                if (n + m).abs() > width {
                    continue;
                }
                let table = if n == 0 && m == 0 {
                    (0..algebra.dim())
                        .map(|i| (0..algebra.dim()).map(|j| algebra.product(i, j).clone()).collect())
                        .collect()
                } else {
                    let rows = if n == 0 { algebra.dim() } else { 0 };
                    let cols = if m == 0 { algebra.dim() } else { 0 };
                    vec![vec![Vec::new(); cols]; rows]
                };
                products.insert((n, m), table);
            }
        }
        GradedStageInput::new(field, -width, width, labels, products, algebra.unit().clone())
            .expect("a trivially graded algebra is a valid stage")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn contains(&self, n: i64) -> bool {
        (self.lo..=self.hi).contains(&n)
    }

    /// `A⁰` as an algebra.
    pub fn algebra(&self) -> &FinDimAlgebra {
        &self.algebra
    }

    pub fn dim(&self, n: i64) -> usize {
        self.labels.get(&n).map_or(0, Vec::len)
    }

    pub fn labels(&self, n: i64) -> &[String] {
        &self.labels[&n]
    }

    pub fn product(&self, n: i64, m: i64, i: usize, j: usize) -> &SparseVec {
        &self.products[&(n, m)][i][j]
    }

    pub fn mul(&self, n: i64, m: i64, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let table = &self.products[&(n, m)];
        let mut out = Vec::new();
        for (i, a) in x {
            for (j, b) in y {
                out = axpy(&out, &(a * b), &table[*i][*j]);
            }
        }
        out
    }

    /// Matrix of `y ↦ a_i y` from `A^m` to `A^{n+m}` for the basis element `a_i ∈ A^n`.
    pub fn left_mul(&self, n: i64, i: usize, m: i64) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.dim(n + m), self.dim(m));
        for j in 0..self.dim(m) {
            for (k, v) in self.product(n, m, i, j) {
                out.set(*k, j, v.clone());
            }
        }
        out
    }

    /// Matrix of `x ↦ x b_j` from `A^n` to `A^{n+m}` for the basis element `b_j ∈ A^m`.
    pub fn right_mul(&self, n: i64, m: i64, j: usize) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.dim(n + m), self.dim(n));
        for i in 0..self.dim(n) {
            for (k, v) in self.product(n, m, i, j) {
                out.set(*k, i, v.clone());
            }
        }
        out
    }

    /// Left action of the `A⁰` basis on `A^n`.
    pub fn left_action(&self, n: i64) -> Vec<Matrix> {
        (0..self.dim(0)).map(|i| self.left_mul(0, i, n)).collect()
    }

    /// Right action of the `A⁰` basis on `A^n`.
    pub fn right_action(&self, n: i64) -> Vec<Matrix> {
        (0..self.dim(0)).map(|j| self.right_mul(n, 0, j)).collect()
    }

    /// Rank of the multiplication `A^n × A^m → A^{n+m}`.
    fn image_rank(&self, n: i64, m: i64) -> usize {
        let vs = (0..self.dim(n)).flat_map(|i| (0..self.dim(m)).map(move |j| (i, j)));
        span(self.field, self.dim(n + m), vs.map(|(i, j)| self.product(n, m, i, j).clone())).rank()
    }

    pub fn check_strongly_graded(&self) -> StrongGradingCheck {
        let d0 = self.dim(0);
        let plus_minus = self.image_rank(1, -1) == d0;
        let minus_plus = self.image_rank(-1, 1) == d0;
        let mut pairs = Vec::new();
        for n in self.lo..=self.hi {
            for m in self.lo..=self.hi {
                if !self.contains(n + m) {
                    continue;
                }
                let t = balanced_tensor(self.field, &self.right_action(n), &self.left_action(m));
                let image_rank = self.image_rank(n, m);
                let target_dim = self.dim(n + m);
                pairs.push(PairCheck {
                    left: n,
                    right: m,
                    tensor_dim: t.dim(),
                    target_dim,
                    image_rank,
                    bijective: t.dim() == target_dim && image_rank == target_dim,
                });
            }
        }
        let pass = plus_minus && minus_plus && pairs.iter().all(|p| p.bijective);
        StrongGradingCheck {
            plus_minus,
            minus_plus,
            pairs,
            pass,
        }
    }

    pub(crate) fn require_strongly_graded(&self) -> Result<(), TrivextError> {
        let c = self.check_strongly_graded();
        if c.pass {
            return Ok(());
        }
        let reason = if !c.plus_minus {
            "A^1 A^-1 is a proper subspace of A^0".to_string()
        } else if !c.minus_plus {
            "A^-1 A^1 is a proper subspace of A^0".to_string()
        } else {
            let p = c.pairs.iter().find(|p| !p.bijective).expect("some pair fails");
            format!("A^{} ⊗ A^{} → A^{} is not bijective", p.left, p.right, p.left + p.right)
        };
        Err(TrivextError::StageNotStronglyGraded(reason))
    }

    pub(crate) fn require(&self, lo: i64, hi: i64) -> Result<(), TrivextError> {
        match (lo..=hi).find(|n| !self.contains(*n)) {
            Some(n) => Err(TrivextError::WindowNotGenerated(n)),
            None => Ok(()),
        }
    }
}

/// The stage-`m` data of `L(Q)` in degrees `[-width, width]`.
///
/// `Side::Minus` is `L(Q)` itself; `Side::Plus` negates the grading, so that
/// the trivial extension by the degree `-1` part is `L⁰ ⋉ L¹`.
pub fn stage_from_leavitt(
    q: &Arc<Quiver>,
    m: usize,
    side: Side,
    width: i64,
    field: Field,
) -> Result<GradedStageInput, TrivextError> {
    if let Some(&v) = q.classify_vertices().0.first() {
        return Err(TrivextError::HasSink(q.vertex_name(v).to_string()));
    }
    let stage = stage_algebra(q, m, field)?;
    let flip = |n: i64| if side == Side::Plus { -n } else { n };
    let mut slices = BTreeMap::new();
    for n in -width..=width {
        let basis = if n == 0 { stage.basis().to_vec() } else { slice_basis(q, flip(n), m) };
        slices.insert(n, MonomialIndex::new(basis));
    }
    let elements: BTreeMap<i64, Vec<LeavittElement>> = slices
        .iter()
        .map(|(n, idx)| (*n, (0..idx.len()).map(|k| idx.monomial(q, field, k)).collect()))
        .collect();
    let mut products = BTreeMap::new();
    for n in -width..=width {
        for k in -width..=width {
            if (n + k).abs() > width {
                continue;
            }
            let target = &slices[&(n + k)];
            let mut table = Vec::with_capacity(elements[&n].len());
            for x in &elements[&n] {
                let mut row = Vec::with_capacity(elements[&k].len());
                for y in &elements[&k] {
                    let p = x.multiply(y)?;
                    let c = target.coordinates(&p).ok_or_else(|| {
                        TrivextError::StageNotStronglyGraded(format!(
                            "{x} · {y} leaves the stage-{m} slice of degree {}",
                            flip(n + k)
                        ))
                    })?;
                    row.push(c);
                }
                table.push(row);
            }
            products.insert((n, k), table);
        }
    }
    let labels = slices
        .iter()
        .map(|(n, idx)| (*n, idx.basis().iter().map(|b| b.format(q)).collect()))
        .collect();
    let unit = stage.algebra().unit().clone();
    let s = GradedStageInput::new(field, -width, width, labels, products, unit)?;
    s.require_strongly_graded()?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qhw_quiver::parse_quiver;

    fn quiver(text: &str) -> Arc<Quiver> {
        Arc::new(parse_quiver(text).unwrap())
    }

    #[test]
    fn laurent_is_strongly_graded() {
        let s = GradedStageInput::laurent(Field::Rational, 3);
        assert_eq!(s.window(), (-3, 3));
        assert_eq!(s.dim(-3), 1);
        assert!(s.check_strongly_graded().pass);
    }

    #[test]
    fn concentrated_is_not_strongly_graded() {
        let a = GradedStageInput::laurent(Field::Rational, 1).algebra().clone();
        let s = GradedStageInput::concentrated(&a, 2);
        let c = s.check_strongly_graded();
        assert!(!c.plus_minus && !c.pass);
        assert!(matches!(s.require_strongly_graded(), Err(TrivextError::StageNotStronglyGraded(_))));
    }

    #[test]
    fn leavitt_cycle_stage() {
        let c2 = quiver("vertices: 1 2\narrows: a: 1 -> 2, b: 2 -> 1");
        let s = stage_from_leavitt(&c2, 1, Side::Minus, 3, Field::Rational).unwrap();
        assert_eq!((s.dim(0), s.dim(-1), s.dim(3)), (2, 2, 2));
        assert_eq!(s.labels(-1), ["a*", "b*"]);
        let p = stage_from_leavitt(&c2, 1, Side::Plus, 3, Field::Rational).unwrap();
        assert_eq!(p.labels(-1), ["a", "b"]);
    }

    #[test]
    fn loop_stage_is_laurent() {
        let r1 = quiver("vertices: v\narrows: a: v -> v");
        let s = stage_from_leavitt(&r1, 2, Side::Minus, 2, Field::Rational).unwrap();
        assert!((-2..=2).all(|n| s.dim(n) == 1));
        assert_eq!(s.labels(-2), ["a*.a*"]);
    }

    #[test]
    fn rose_stage_is_not_closed() {
        let r2 = quiver("vertices: v\narrows: a: v -> v, b: v -> v");
        let e = stage_from_leavitt(&r2, 1, Side::Minus, 1, Field::Rational).unwrap_err();
        assert!(matches!(e, TrivextError::StageNotStronglyGraded(_)));
        let line = quiver("vertices: 1 2\narrows: a: 1 -> 2");
        let e = stage_from_leavitt(&line, 1, Side::Minus, 1, Field::Rational).unwrap_err();
        assert_eq!(e, TrivextError::HasSink("2".into()));
    }

    #[test]
    fn rejects_non_associative_tables() {
        let f = Field::Rational;
        let mut labels = BTreeMap::new();
        let mut products = BTreeMap::new();
        for n in -1..=1 {
            labels.insert(n, vec![format!("x{n}")]);
        }
        for n in -1..=1i64 {
            for m in -1..=1i64 {
                if (n + m).abs() <= 1 {
                    let c = if (n, m) == (1, -1) { 2 } else { 1 };
                    products.insert((n, m), vec![vec![vec![(0, f.from_i64(c))]]]);
                }
            }
        }
        let e = GradedStageInput::new(f, -1, 1, labels, products, vec![(0, f.one())]).unwrap_err();
        assert!(matches!(e, TrivextError::InvalidStage(_)));
    }
}
