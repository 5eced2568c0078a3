use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use qhw_linalg::{Field, Scalar};
use qhw_pathalg::{split_signed_terms, PathElement};
use qhw_quiver::{Letter, Path, Quiver};

use crate::LeavittError;

/// A normal monomial `q* p`: first the real path `p`, then the ghost of `q`.
/// Composition needs `t(p) = t(q)`; the monomial runs from `s(p)` to `s(q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LeavittMonomial {
    ghost: Path,
    real: Path,
}

impl LeavittMonomial {
    pub fn new(ghost: Path, real: Path) -> Option<LeavittMonomial> {
        (ghost.target() == real.target()).then_some(LeavittMonomial { ghost, real })
    }

    pub fn vertex(v: usize) -> LeavittMonomial {
        LeavittMonomial {
            ghost: Path::trivial(v),
            real: Path::trivial(v),
        }
    }

    pub fn from_real(p: Path) -> LeavittMonomial {
        LeavittMonomial {
            ghost: Path::trivial(p.target()),
            real: p,
        }
    }

    /// `q*` alone.
    pub fn from_ghost(q: Path) -> LeavittMonomial {
        LeavittMonomial {
            real: Path::trivial(q.target()),
            ghost: q,
        }
    }

    pub fn ghost(&self) -> &Path {
        &self.ghost
    }

    pub fn real(&self) -> &Path {
        &self.real
    }

    pub fn source(&self) -> usize {
        self.real.source()
    }

    pub fn target(&self) -> usize {
        self.ghost.source()
    }

    pub fn degree(&self) -> i64 {
        self.real.len() as i64 - self.ghost.len() as i64
    }

    pub fn total_len(&self) -> usize {
        self.real.len() + self.ghost.len()
    }

    /// Letters in written order: the ghost part reversed and starred, then `p`.
    pub fn word(&self) -> Vec<Letter> {
        self.ghost
            .arrows()
            .iter()
            .rev()
            .map(|&a| Letter::Ghost(a))
            .chain(self.real.arrows().iter().map(|&a| Letter::Real(a)))
            .collect()
    }

    /// `(q* p)* = p* q`.
    pub fn star(&self) -> LeavittMonomial {
        LeavittMonomial {
            ghost: self.real.clone(),
            real: self.ghost.clone(),
        }
    }

    /// No `γ_v* γ_v` at the junction of the ghost and real parts.
    pub fn is_normal(&self, q: &Quiver) -> bool {
        match (self.ghost.arrows().first(), self.real.arrows().first()) {
            (Some(&a), Some(&b)) => !(a == b && special_arrow(q, q.arrow(a).source) == Some(a)),
            _ => true,
        }
    }

    pub fn format(&self, q: &Quiver) -> String {
        if self.total_len() == 0 {
            return q.trivial_name(self.source());
        }
        let mut parts: Vec<String> = self
            .ghost
            .arrows()
            .iter()
            .rev()
            .map(|&a| format!("{}*", q.arrow(a).name))
            .collect();
        parts.extend(self.real.arrows().iter().map(|&a| q.arrow(a).name.clone()));
        parts.join(".")
    }

    fn key(&self) -> (usize, i64, Vec<Letter>, usize) {
        (self.total_len(), self.degree(), self.word(), self.source())
    }
}

impl Ord for LeavittMonomial {
    /// Total length, then degree, then the written word.
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for LeavittMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The special arrow `γ_v` at a non-sink `v`: its first outgoing arrow.
pub fn special_arrow(q: &Quiver, v: usize) -> Option<usize> {
    (0..q.arrow_count()).find(|&a| q.arrow(a).source == v)
}

/// Rewrites `q* p` at its junction until it is normal. Coefficients are `±1`.
pub(crate) fn reduce(q: &Quiver, ghost: Path, real: Path) -> Vec<(LeavittMonomial, i64)> {
    let mut out = Vec::new();
    let (mut ghost, mut real) = (ghost, real);
    loop {
        let (Some(&a), Some(&b)) = (ghost.arrows().first(), real.arrows().first()) else {
            break;
        };
        let v = q.arrow(a).source;
        if a != b || special_arrow(q, v) != Some(a) {
            break;
        }
        let g = Path::arrow(q, a);
        let g2 = ghost.strip_prefix(q, &g).expect("leading arrow");
        let r2 = real.strip_prefix(q, &g).expect("leading arrow");
        // γ*γ = e_v - Σ_{α ≠ γ} α*α
        for alpha in q.arrows_from(v).into_iter().filter(|&x| x != a) {
            let ap = Path::arrow(q, alpha);
            out.push((
                LeavittMonomial {
                    ghost: ap.compose(&g2).expect("s(α) = v"),
                    real: ap.compose(&r2).expect("s(α) = v"),
                },
                -1,
            ));
        }
        ghost = g2;
        real = r2;
    }
    out.push((LeavittMonomial { ghost, real }, 1));
    out
}

/// Product of two normal monomials, as a signed list of normal monomials.
pub(crate) fn multiply_monomials(
    q: &Quiver,
    x: &LeavittMonomial,
    y: &LeavittMonomial,
) -> Vec<(LeavittMonomial, i64)> {
    // x·y = q1* (p1 q2*) p2
    if x.source() != y.target() {
        return Vec::new();
    }
    let (q1, p1) = (&x.ghost, &x.real);
    let (q2, p2) = (&y.ghost, &y.real);
    if let Some(rest) = p1.strip_suffix(q, q2) {
        // p1 q2* = rest
        reduce(q, q1.clone(), rest.compose(p2).expect("t(p2) = t(q2) = s(rest)"))
    } else if let Some(rest) = q2.strip_suffix(q, p1) {
        // p1 q2* = rest*
        reduce(q, rest.compose(q1).expect("s(rest) = t(p1) = t(q1)"), p2.clone())
    } else {
        Vec::new()
    }
}

/// An element of `L(Q)` as a combination of normal monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeavittElement {
    quiver: Arc<Quiver>,
    field: Field,
    terms: BTreeMap<LeavittMonomial, Scalar>,
}

impl LeavittElement {
    pub fn zero(quiver: Arc<Quiver>, field: Field) -> LeavittElement {
        LeavittElement {
            quiver,
            field,
            terms: BTreeMap::new(),
        }
    }

    /// `Σ e_v`.
    pub fn one(quiver: Arc<Quiver>, field: Field) -> LeavittElement {
        let mut out = LeavittElement::zero(quiver.clone(), field);
        for v in 0..quiver.vertex_count() {
            out.add_term(LeavittMonomial::vertex(v), &field.one());
        }
        out
    }

    /// The monomial, rewritten to normal form if needed.
    pub fn from_monomial(quiver: Arc<Quiver>, field: Field, m: LeavittMonomial) -> LeavittElement {
        let mut out = LeavittElement::zero(quiver.clone(), field);
        for (n, c) in reduce(&quiver, m.ghost, m.real) {
            out.add_term(n, &field.from_i64(c));
        }
        out
    }

    pub fn letter(quiver: Arc<Quiver>, field: Field, l: Letter) -> LeavittElement {
        let p = Path::arrow(&quiver, l.arrow());
        let m = if l.is_ghost() {
            LeavittMonomial::from_ghost(p)
        } else {
            LeavittMonomial::from_real(p)
        };
        LeavittElement::from_monomial(quiver, field, m)
    }

    /// Product of the letters in written order; zero if they do not compose.
    pub fn from_word(quiver: Arc<Quiver>, field: Field, vertex: usize, word: &[Letter]) -> LeavittElement {
        let mut out = LeavittElement::from_monomial(quiver.clone(), field, LeavittMonomial::vertex(vertex));
        if let Some(first) = word.first() {
            out = LeavittElement::letter(quiver.clone(), field, *first);
        }
        for l in word.iter().skip(1) {
            out = out.multiply_unchecked(&LeavittElement::letter(quiver.clone(), field, *l));
        }
        out
    }

    /// `ι_Q`: a path combination viewed in `L(Q)`.
    pub fn iota(x: &PathElement) -> LeavittElement {
        let mut out = LeavittElement::zero(x.quiver().clone(), x.field());
        for (p, c) in x.terms() {
            out.add_term(LeavittMonomial::from_real(p.clone()), c);
        }
        out
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> &BTreeMap<LeavittMonomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &LeavittMonomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Adds `c·m` for a monomial already in normal form.
    pub fn add_term(&mut self, m: LeavittMonomial, c: &Scalar) {
        debug_assert!(m.is_normal(&self.quiver));
        let entry = self.terms.entry(m).or_insert_with(|| self.field.zero());
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    fn check(&self, other: &LeavittElement) -> Result<(), LeavittError> {
        if self.quiver != other.quiver || self.field != other.field {
            return Err(LeavittError::QuiverMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &LeavittElement) -> Result<LeavittElement, LeavittError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &LeavittElement) -> Result<LeavittElement, LeavittError> {
        self.add(&other.scale(&self.field.from_i64(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> LeavittElement {
        let mut out = LeavittElement::zero(self.quiver.clone(), self.field);
        if s.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect();
        out
    }

    pub fn multiply(&self, other: &LeavittElement) -> Result<LeavittElement, LeavittError> {
        self.check(other)?;
        Ok(self.multiply_unchecked(other))
    }

    fn multiply_unchecked(&self, other: &LeavittElement) -> LeavittElement {
        let mut out = LeavittElement::zero(self.quiver.clone(), self.field);
        for (x, a) in &self.terms {
            for (y, b) in &other.terms {
                let ab = a * b;
                for (m, s) in multiply_monomials(&self.quiver, x, y) {
                    out.add_term(m, &ab.negate_if(s < 0));
                }
            }
        }
        out
    }

    /// The anti-automorphism fixing vertices and swapping `α` with `α*`.
    pub fn involution(&self) -> LeavittElement {
        let mut out = LeavittElement::zero(self.quiver.clone(), self.field);
        for (m, c) in &self.terms {
            for (n, s) in reduce(&self.quiver, m.real.clone(), m.ghost.clone()) {
                out.add_term(n, &c.negate_if(s < 0));
            }
        }
        out
    }

    pub fn component(&self, n: i64) -> LeavittElement {
        LeavittElement {
            quiver: self.quiver.clone(),
            field: self.field,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == n)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Degrees with a nonzero component, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.terms.keys().map(LeavittMonomial::degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Parses `2*a*.b - e_1 + 3/2*b.c`: ghosts carry a `*` suffix, a
    /// leading `c*` is a scalar when `c` reads as one.
    pub fn parse(quiver: Arc<Quiver>, field: Field, text: &str) -> Result<LeavittElement, LeavittError> {
        let text = text.trim();
        let mut out = LeavittElement::zero(quiver.clone(), field);
        if text == "0" {
            return Ok(out);
        }
        let bad = || LeavittError::Parse(text.to_string());
        for (sign, term) in split_signed_terms(text).map_err(|_| bad())? {
            let (coeff, word) = match term.split_once('*') {
                Some((c, rest)) if field.parse(c.trim()).is_some() => {
                    (field.parse(c.trim()).expect("checked"), rest.trim())
                }
                _ => (field.one(), term),
            };
            let x = parse_word(&quiver, field, word).ok_or_else(bad)?;
            out = out.add(&x.scale(&coeff.negate_if(sign < 0)))?;
        }
        Ok(out)
    }
}

fn parse_word(q: &Arc<Quiver>, field: Field, word: &str) -> Option<LeavittElement> {
    if let Ok(p) = q.parse_path(word) {
        if p.is_trivial() {
            return Some(LeavittElement::from_monomial(q.clone(), field, LeavittMonomial::vertex(p.source())));
        }
    }
    let mut letters = Vec::new();
    for token in word.split('.') {
        let token = token.trim();
        let l = match token.strip_suffix('*') {
            Some(name) => Letter::Ghost(q.arrow_index(name)?),
            None => Letter::Real(q.arrow_index(token)?),
        };
        letters.push(l);
    }
    Some(LeavittElement::from_word(q.clone(), field, 0, &letters))
}

impl fmt::Display for LeavittElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let text = c.to_string();
            let (negative, magnitude) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let name = m.format(&self.quiver);
            if magnitude == "1" {
                write!(f, "{name}")?;
            } else {
                write!(f, "{magnitude}*{name}")?;
            }
        }
        Ok(())
    }
}
