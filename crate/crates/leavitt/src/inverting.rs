use std::collections::BTreeSet;
use std::sync::Arc;

use qhw_linalg::{Echelon, Field};
use qhw_quiver::{Letter, Quiver};
use serde::Serialize;

use crate::monomial::{LeavittElement, LeavittMonomial};
use crate::stage::MonomialIndex;

/// The explicit inverse at one vertex: a row and a column of letters whose
/// products are `e_i` and the identity of `⊕ e_{t}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexInverse {
    pub vertex: String,
    pub row: Vec<String>,
    pub column: Vec<String>,
    pub row_times_column: String,
    pub column_times_row: Vec<Vec<String>>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvertingReport {
    /// `ι_Q` at each non-sink: the row of ghosts `α*` against the column of
    /// arrows `α` with `s(α) = i`, in `L(Q)`.
    pub iota: Vec<VertexInverse>,
    /// `κ_Q` at each non-source: the row of arrows against the column of
    /// ghosts over `Q^op`, multiplied in `L(Q^op)^op`.
    pub kappa: Vec<VertexInverse>,
    pub pass: bool,
}

fn check_vertex(
    q: &Arc<Quiver>,
    field: Field,
    vertex: usize,
    row: &[Letter],
    column: &[Letter],
    opposite: bool,
) -> VertexInverse {
    let el = |l: Letter| LeavittElement::letter(q.clone(), field, l);
    let mul = |x: &LeavittElement, y: &LeavittElement| {
        if opposite {
            y.multiply(x).expect("same quiver")
        } else {
            x.multiply(y).expect("same quiver")
        }
    };
    let mut rc = LeavittElement::zero(q.clone(), field);
    for (&r, &c) in row.iter().zip(column) {
        rc = rc.add(&mul(&el(r), &el(c))).expect("same quiver");
    }
    let e = |v: usize| LeavittElement::from_monomial(q.clone(), field, LeavittMonomial::vertex(v));
    let mut pass = rc == e(vertex);
    let mut cr = Vec::new();
    for (j, &c) in column.iter().enumerate() {
        let mut out = Vec::new();
        for (k, &r) in row.iter().enumerate() {
            let p = mul(&el(c), &el(r));
            let expected = if j == k {
                // the identity entry sits at t(α) for the product taken in `mul`
                let l = el(c);
                let m = l.terms().keys().next().expect("letters are nonzero");
                e(if opposite { m.source() } else { m.target() })
            } else {
                LeavittElement::zero(q.clone(), field)
            };
            pass &= p == expected;
            out.push(p.to_string());
        }
        cr.push(out);
    }
    let name = |l: &Letter| {
        let a = &q.arrow(l.arrow()).name;
        if l.is_ghost() {
            format!("{a}*")
        } else {
            a.clone()
        }
    };
    VertexInverse {
        vertex: q.vertex_name(vertex).to_string(),
        row: row.iter().map(name).collect(),
        column: column.iter().map(name).collect(),
        row_times_column: rc.to_string(),
        column_times_row: cr,
        pass,
    }
}

pub fn verify_inverting(q: &Arc<Quiver>, field: Field) -> InvertingReport {
    let iota: Vec<VertexInverse> = (0..q.vertex_count())
        .filter(|&v| !q.is_sink(v))
        .map(|v| {
            let arrows = q.arrows_from(v);
            let row: Vec<Letter> = arrows.iter().map(|&a| Letter::Ghost(a)).collect();
            let column: Vec<Letter> = arrows.iter().map(|&a| Letter::Real(a)).collect();
            check_vertex(q, field, v, &row, &column, false)
        })
        .collect();
    let op = Arc::new(q.opposite());
    let kappa: Vec<VertexInverse> = (0..q.vertex_count())
        .filter(|&v| !q.is_source(v))
        .map(|v| {
            let arrows = op.arrows_from(v);
            let row: Vec<Letter> = arrows.iter().map(|&a| Letter::Real(a)).collect();
            let column: Vec<Letter> = arrows.iter().map(|&a| Letter::Ghost(a)).collect();
            check_vertex(&op, field, v, &row, &column, true)
        })
        .collect();
    let pass = iota.iter().chain(&kappa).all(|v| v.pass);
    InvertingReport { iota, kappa, pass }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InjectivityReport {
    pub bound: usize,
    pub paths: usize,
    pub distinct_images: usize,
    pub rank: usize,
    /// Each path of length `n` lands in degree `n`.
    pub graded: bool,
    pub pass: bool,
}

/// Images under `ι_Q` of all paths of length at most `bound`.
pub fn verify_iota_injective(q: &Arc<Quiver>, bound: usize, field: Field) -> InjectivityReport {
    let paths: Vec<_> = (0..=bound).flat_map(|l| q.enumerate_paths(l)).collect();
    let images: Vec<LeavittElement> = paths
        .iter()
        .map(|p| LeavittElement::from_monomial(q.clone(), field, LeavittMonomial::from_real(p.clone())))
        .collect();
    let graded = paths
        .iter()
        .zip(&images)
        .all(|(p, x)| x.degrees() == vec![p.len() as i64]);
    let monomials: BTreeSet<LeavittMonomial> = images.iter().flat_map(|x| x.terms().keys().cloned()).collect();
    let distinct: BTreeSet<String> = images.iter().map(|x| x.to_string()).collect();
    let index = MonomialIndex::new(monomials.into_iter().collect());
    let mut span = Echelon::new(field, index.len());
    for x in &images {
        span.insert(index.coordinates(x).expect("indexed"));
    }
    let rank = span.rank();
    InjectivityReport {
        bound,
        paths: paths.len(),
        distinct_images: distinct.len(),
        rank,
        graded,
        pass: graded && rank == paths.len() && distinct.len() == paths.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qhw_quiver::parse_quiver;

    fn quiver(text: &str) -> Arc<Quiver> {
        Arc::new(parse_quiver(text).unwrap())
    }

    #[test]
    fn rose_inverses() {
        let r2 = quiver("vertices: v\narrows: a: v -> v, b: v -> v");
        let r = verify_inverting(&r2, Field::Rational);
        assert!(r.pass);
        assert_eq!(r.iota[0].row_times_column, "e");
        assert_eq!(r.iota[0].column_times_row, vec![vec!["e", "0"], vec!["0", "e"]]);
        assert_eq!(r.kappa[0].row, vec!["a", "b"]);
        assert_eq!(r.kappa[0].row_times_column, "e");
    }

    #[test]
    fn loop_and_cycle_inverses() {
        let r1 = quiver("vertices: v\narrows: a: v -> v");
        let r = verify_inverting(&r1, Field::Rational);
        assert!(r.pass);
        assert_eq!((r.iota.len(), r.kappa.len()), (1, 1));
        let c2 = quiver("vertices: 1 2\narrows: a: 1 -> 2, b: 2 -> 1");
        let r = verify_inverting(&c2, Field::Rational);
        assert!(r.pass);
        assert_eq!((r.iota.len(), r.kappa.len()), (2, 2));
        let line = quiver("vertices: 1 2\narrows: a: 1 -> 2");
        let r = verify_inverting(&line, Field::Rational);
        assert!(r.pass);
        assert_eq!(r.iota[0].vertex, "1");
        assert_eq!(r.kappa[0].vertex, "2");
    }

    #[test]
    fn injectivity_examples() {
        let f = Field::Rational;
        let r = verify_iota_injective(&quiver("vertices: v\narrows: a: v -> v, b: v -> v"), 3, f);
        assert!(r.pass);
        assert_eq!(r.rank, 15);
        let r = verify_iota_injective(&quiver("vertices: v\narrows: a: v -> v"), 4, f);
        assert_eq!((r.rank, r.pass), (5, true));
        let r = verify_iota_injective(&quiver("vertices: 1 2\narrows: a: 1 -> 2, b: 2 -> 1"), 3, f);
        assert_eq!((r.rank, r.pass), (8, true));
    }
}
