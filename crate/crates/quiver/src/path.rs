use crate::Quiver;

/// A path `α_n ⋯ α_1`, stored in written order: `arrows()[0]` is `α_n`,
/// the arrow applied last.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    arrows: Vec<usize>,
    source: usize,
    target: usize,
}

impl Path {
    pub fn trivial(v: usize) -> Path {
        Path {
            arrows: Vec::new(),
            source: v,
            target: v,
        }
    }

    pub fn arrow(q: &Quiver, a: usize) -> Path {
        let arrow = q.arrow(a);
        Path {
            arrows: vec![a],
            source: arrow.source,
            target: arrow.target,
        }
    }

    /// The path with the given written word, if consecutive arrows compose.
    pub fn from_arrows(q: &Quiver, arrows: Vec<usize>) -> Option<Path> {
        let first = *arrows.first()?;
        let last = *arrows.last()?;
        for w in arrows.windows(2) {
            if q.arrow(w[0]).source != q.arrow(w[1]).target {
                return None;
            }
        }
        Some(Path {
            source: q.arrow(last).source,
            target: q.arrow(first).target,
            arrows,
        })
    }

    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `self ∘ other`, defined when `s(self) = t(other)`.
    pub fn compose(&self, other: &Path) -> Option<Path> {
        if self.source != other.target {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Some(Path {
            arrows,
            source: other.source,
            target: self.target,
        })
    }

    /// If `self = prefix ∘ q'`, returns `q'`.
    pub fn strip_prefix(&self, q: &Quiver, prefix: &Path) -> Option<Path> {
        if prefix.len() > self.len() {
            return None;
        }
        if prefix.is_trivial() {
            return (prefix.source == self.target).then(|| self.clone());
        }
        if self.arrows[..prefix.len()] != prefix.arrows[..] {
            return None;
        }
        let rest = self.arrows[prefix.len()..].to_vec();
        if rest.is_empty() {
            Some(Path::trivial(self.source))
        } else {
            Path::from_arrows(q, rest)
        }
    }

    /// If `self = p' ∘ suffix`, returns `p'`.
    pub fn strip_suffix(&self, q: &Quiver, suffix: &Path) -> Option<Path> {
        if suffix.len() > self.len() {
            return None;
        }
        if suffix.is_trivial() {
            return (suffix.target == self.source).then(|| self.clone());
        }
        let k = self.len() - suffix.len();
        if self.arrows[k..] != suffix.arrows[..] {
            return None;
        }
        if k == 0 {
            Some(Path::trivial(self.target))
        } else {
            Path::from_arrows(q, self.arrows[..k].to_vec())
        }
    }

    /// The same arrows read in the opposite quiver.
    pub fn reversed(&self) -> Path {
        let mut arrows = self.arrows.clone();
        arrows.reverse();
        Path {
            arrows,
            source: self.target,
            target: self.source,
        }
    }
}
