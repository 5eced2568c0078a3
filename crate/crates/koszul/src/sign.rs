use std::sync::Arc;

use qhw_pathalg::{PathAlgError, PathElement};
use qhw_quiver::Quiver;

/// The product of `B = (kQ)^opp`: `x · y = (-1)^{|x||y|} y x`, extended bilinearly.
pub fn b_multiply(x: &PathElement, y: &PathElement) -> Result<PathElement, PathAlgError> {
    if x.quiver() != y.quiver() {
        return Err(PathAlgError::QuiverMismatch);
    }
    let mut out = PathElement::zero(x.quiver().clone(), x.field());
    for (p, a) in x.terms() {
        for (q, b) in y.terms() {
            if let Some(qp) = q.compose(p) {
                let c = (a * b).negate_if((p.len() * q.len()) % 2 == 1);
                out.add_term(qp, &c);
            }
        }
    }
    Ok(out)
}

/// The graded isomorphism `kQ^op → B`, `p ↦ (-1)^{l(l+1)/2} p` for `p` of length `l`.
///
/// `x` lives over the opposite quiver; the result lives over `base`.
pub fn sign_twist(base: &Arc<Quiver>, x: &PathElement) -> PathElement {
    let mut out = PathElement::zero(base.clone(), x.field());
    for (p, a) in x.terms() {
        let l = p.len();
        out.add_term(p.reversed(), &a.negate_if((l * (l + 1) / 2) % 2 == 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use qhw_linalg::Field;
    use qhw_quiver::{parse_quiver, Path};

    #[test]
    fn twist_signs() {
        let q = Arc::new(parse_quiver("vertices: v\narrows: a: v -> v, b: v -> v").unwrap());
        let op = Arc::new(q.opposite());
        let f = Field::Rational;
        let a = PathElement::parse(op.clone(), f, "a").unwrap();
        assert_eq!(sign_twist(&q, &a).to_string(), "-a");
        let ab = PathElement::parse(op.clone(), f, "a.b").unwrap();
        assert_eq!(sign_twist(&q, &ab).to_string(), "-b.a");
        let e = PathElement::parse(op.clone(), f, "e").unwrap();
        assert_eq!(sign_twist(&q, &e).to_string(), "e");
        let p = Path::from_arrows(&op, vec![0, 1, 1]).unwrap();
        // l = 3: (-1)^6
        let x = PathElement::from_path(op, f, p);
        assert_eq!(sign_twist(&q, &x).to_string(), "b.b.a");
    }
}
