use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use qhw_linalg::{Field, Scalar};
use qhw_quiver::{Path, Quiver};

use crate::PathAlgError;

/// A finite linear combination of paths of one quiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathElement {
    quiver: Arc<Quiver>,
    field: Field,
    terms: BTreeMap<Path, Scalar>,
}

impl PathElement {
    pub fn zero(quiver: Arc<Quiver>, field: Field) -> PathElement {
        PathElement {
            quiver,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_path(quiver: Arc<Quiver>, field: Field, p: Path) -> PathElement {
        let mut e = PathElement::zero(quiver, field);
        e.terms.insert(p, field.one());
        e
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, p: &Path) -> Scalar {
        self.terms.get(p).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, p: Path, c: &Scalar) {
        let v = &self.coefficient(&p) + c;
        if v.is_zero() {
            self.terms.remove(&p);
        } else {
            self.terms.insert(p, v);
        }
    }

    fn same_quiver(&self, other: &PathElement) -> Result<(), PathAlgError> {
        if Arc::ptr_eq(&self.quiver, &other.quiver) || self.quiver == other.quiver {
            Ok(())
        } else {
            Err(PathAlgError::QuiverMismatch)
        }
    }

    pub fn add(&self, other: &PathElement) -> Result<PathElement, PathAlgError> {
        self.same_quiver(other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> PathElement {
        let mut out = PathElement::zero(self.quiver.clone(), self.field);
        if !s.is_zero() {
            for (p, c) in &self.terms {
                out.terms.insert(p.clone(), c * s);
            }
        }
        out
    }

    /// Bilinear extension of `p·q = p ∘ q`, zero when `s(p) ≠ t(q)`.
    pub fn multiply(&self, other: &PathElement) -> Result<PathElement, PathAlgError> {
        self.same_quiver(other)?;
        let mut out = PathElement::zero(self.quiver.clone(), self.field);
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                if let Some(pq) = p.compose(q) {
                    out.add_term(pq, &(a * b));
                }
            }
        }
        Ok(out)
    }

    /// The length-`n` component.
    pub fn component(&self, n: usize) -> PathElement {
        PathElement {
            quiver: self.quiver.clone(),
            field: self.field,
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| p.len() == n)
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    /// The common length of all terms, if homogeneous and nonzero.
    pub fn degree(&self) -> Option<usize> {
        let mut lens = self.terms.keys().map(Path::len);
        let first = lens.next()?;
        lens.all(|l| l == first).then_some(first)
    }

    /// Parses `2*a.b - c + 3/2*e_1`.
    pub fn parse(quiver: Arc<Quiver>, field: Field, text: &str) -> Result<PathElement, PathAlgError> {
        let mut out = PathElement::zero(quiver.clone(), field);
        let text = text.trim();
        if text == "0" {
            return Ok(out);
        }
        for (sign, term) in split_signed_terms(text)? {
            let (coeff, path) = match term.split_once('*') {
                Some((c, p)) => (
                    field
                        .parse(c)
                        .ok_or_else(|| PathAlgError::Parse(term.to_string()))?,
                    p,
                ),
                None => (field.one(), term),
            };
            let p = quiver.parse_path(path)?;
            out.add_term(p, &coeff.negate_if(sign < 0));
        }
        Ok(out)
    }
}

/// Splits an expression into signed terms at top-level `+` and `-`.
pub fn split_signed_terms(text: &str) -> Result<Vec<(i8, &str)>, PathAlgError> {
    let mut out = Vec::new();
    let mut sign = 1i8;
    let mut start = 0;
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut expecting_term = true;
    while i <= bytes.len() {
        let at_sep = i == bytes.len() || bytes[i] == b'+' || bytes[i] == b'-';
        if at_sep {
            let piece = text[start..i].trim();
            if piece.is_empty() {
                if !expecting_term || i == bytes.len() {
                    return Err(PathAlgError::Parse(text.to_string()));
                }
            } else {
                out.push((sign, piece));
                expecting_term = false;
            }
            if i < bytes.len() {
                if piece.is_empty() && bytes[i] == b'-' {
                    sign = -sign;
                } else {
                    sign = if bytes[i] == b'-' { -1 } else { 1 };
                }
                expecting_term = true;
            }
            start = i + 1;
        }
        i += 1;
    }
    if out.is_empty() {
        return Err(PathAlgError::Parse(text.to_string()));
    }
    Ok(out)
}

impl fmt::Display for PathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut named: Vec<(usize, String, &Scalar)> = self
            .terms
            .iter()
            .map(|(p, c)| (p.len(), self.quiver.format_path(p), c))
            .collect();
        named.sort_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)));
        let mut first = true;
        for (_, name, c) in named {
            let neg = c.to_string().starts_with('-');
            let abs = c.negate_if(neg);
            let body = if abs.is_one() {
                name
            } else {
                format!("{abs}*{name}")
            };
            match (first, neg) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}
