//! Finite quivers, their paths, and a line-oriented text format.
//!
//! Paths compose right to left: the word `a.b` is `a ∘ b`, defined when
//! `s(a) = t(b)`. Vertex and arrow order is declaration order throughout.

mod error;
mod parse;
mod path;

use std::collections::HashMap;

use qhw_linalg::IntMatrix;

pub use error::QuiverError;
pub use parse::parse_quiver;
pub use path::Path;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// Builds a quiver from names, checking uniqueness and endpoints.
    pub fn new(vertices: Vec<String>, arrows: Vec<(String, String, String)>) -> Result<Quiver, QuiverError> {
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(QuiverError::DuplicateName(v.clone()));
            }
        }
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::with_capacity(arrows.len());
        for (name, s, t) in arrows {
            if !seen.insert(name.clone()) || index.contains_key(&name) {
                return Err(QuiverError::DuplicateName(name));
            }
            let lookup = |v: &String| {
                index.get(v).copied().ok_or_else(|| QuiverError::UnknownVertex {
                    name: v.clone(),
                    line: 0,
                    column: 0,
                })
            };
            out.push(Arrow {
                source: lookup(&s)?,
                target: lookup(&t)?,
                name,
            });
        }
        Ok(Quiver {
            vertices,
            arrows: out,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn arrow(&self, a: usize) -> &Arrow {
        &self.arrows[a]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// Arrows starting at `v`, in declaration order.
    pub fn arrows_from(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&a| self.arrows[a].source == v).collect()
    }

    /// Arrows ending at `v`, in declaration order.
    pub fn arrows_to(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&a| self.arrows[a].target == v).collect()
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.arrows.iter().all(|a| a.source != v)
    }

    pub fn is_source(&self, v: usize) -> bool {
        self.arrows.iter().all(|a| a.target != v)
    }

    /// `(sinks, sources)`, each in vertex order.
    pub fn classify_vertices(&self) -> (Vec<usize>, Vec<usize>) {
        let n = self.vertices.len();
        let sinks = (0..n).filter(|&v| self.is_sink(v)).collect();
        let sources = (0..n).filter(|&v| self.is_source(v)).collect();
        (sinks, sources)
    }

    pub fn has_sinks(&self) -> bool {
        !self.classify_vertices().0.is_empty()
    }

    pub fn has_sources(&self) -> bool {
        !self.classify_vertices().1.is_empty()
    }

    /// Reverses every arrow, keeping names and order.
    pub fn opposite(&self) -> Quiver {
        Quiver {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow {
                    name: a.name.clone(),
                    source: a.target,
                    target: a.source,
                })
                .collect(),
        }
    }

    /// Entry `(i, j)` counts the arrows `j -> i`.
    pub fn adjacency_matrix(&self) -> IntMatrix {
        let n = self.vertices.len();
        let mut counts = vec![vec![0i64; n]; n];
        for a in &self.arrows {
            counts[a.target][a.source] += 1;
        }
        IntMatrix::from_i64(&counts)
    }

    /// All paths of length `n`, sorted by their written words. Length zero gives
    /// the trivial paths in vertex order.
    pub fn enumerate_paths(&self, n: usize) -> Vec<Path> {
        if n == 0 {
            return (0..self.vertices.len()).map(Path::trivial).collect();
        }
        // extend on the left: p ↦ α p with s(α) = t(p)
        let mut current: Vec<Path> = (0..self.arrows.len()).map(|a| Path::arrow(self, a)).collect();
        for _ in 1..n {
            let mut next = Vec::new();
            for p in &current {
                for a in self.arrows_from(p.target()) {
                    next.push(Path::arrow(self, a).compose(p).expect("composable by construction"));
                }
            }
            current = next;
        }
        current.sort_by(|a, b| self.word_names(a).cmp(&self.word_names(b)));
        current
    }

    /// Number of paths of length `n` ending at each vertex.
    pub fn paths_ending_at(&self, n: usize) -> Vec<usize> {
        let mut counts = vec![1usize; self.vertices.len()];
        for _ in 0..n {
            let mut next = vec![0usize; self.vertices.len()];
            for a in &self.arrows {
                next[a.target] += counts[a.source];
            }
            counts = next;
        }
        counts
    }

    /// Number of paths of length `n` starting at each vertex.
    pub fn paths_starting_at(&self, n: usize) -> Vec<usize> {
        self.opposite().paths_ending_at(n)
    }

    pub fn path_count(&self, n: usize) -> usize {
        self.paths_ending_at(n).iter().sum()
    }

    fn word_names<'a>(&'a self, p: &Path) -> Vec<&'a str> {
        p.arrows().iter().map(|&a| self.arrows[a].name.as_str()).collect()
    }

    /// Parses `a.b.c` (or `e_v`, or `e` for a one-vertex quiver) into a path.
    pub fn parse_path(&self, text: &str) -> Result<Path, QuiverError> {
        let text = text.trim();
        if let Some(v) = self.trivial_path_vertex(text) {
            return Ok(Path::trivial(v));
        }
        let mut arrows = Vec::new();
        for name in text.split('.') {
            let name = name.trim();
            let a = self
                .arrow_index(name)
                .ok_or_else(|| QuiverError::UnknownArrow(name.to_string()))?;
            arrows.push(a);
        }
        Path::from_arrows(self, arrows).ok_or_else(|| QuiverError::NotComposable(text.to_string()))
    }

    fn trivial_path_vertex(&self, text: &str) -> Option<usize> {
        if text == "e" && self.vertices.len() == 1 {
            return Some(0);
        }
        text.strip_prefix("e_").and_then(|v| self.vertex_index(v))
    }

    pub fn format_path(&self, p: &Path) -> String {
        if p.is_trivial() {
            self.trivial_name(p.source())
        } else {
            self.word_names(p).join(".")
        }
    }

    /// `e` for a one-vertex quiver, otherwise `e_<vertex>`.
    pub fn trivial_name(&self, v: usize) -> String {
        if self.vertices.len() == 1 {
            "e".to_string()
        } else {
            format!("e_{}", self.vertices[v])
        }
    }

    /// Canonical text form.
    pub fn serialize(&self) -> String {
        let mut s = format!("vertices: {}\n", self.vertices.join(" "));
        if !self.arrows.is_empty() {
            let items: Vec<String> = self
                .arrows
                .iter()
                .map(|a| {
                    format!(
                        "{}: {} -> {}",
                        a.name, self.vertices[a.source], self.vertices[a.target]
                    )
                })
                .collect();
            s.push_str(&format!("arrows: {}\n", items.join(", ")));
        }
        s
    }

    /// The same quiver with vertices reordered: new position of old vertex `v` is `sigma[v]`.
    pub fn permute_vertices(&self, sigma: &[usize]) -> Quiver {
        let mut vertices = vec![String::new(); self.vertices.len()];
        for (v, name) in self.vertices.iter().enumerate() {
            vertices[sigma[v]] = name.clone();
        }
        Quiver {
            vertices,
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow {
                    name: a.name.clone(),
                    source: sigma[a.source],
                    target: sigma[a.target],
                })
                .collect(),
        }
    }

    /// The same quiver with every vertex renamed.
    pub fn rename_vertices(&self, names: &[String]) -> Result<Quiver, QuiverError> {
        let arrows = self
            .arrows
            .iter()
            .map(|a| (a.name.clone(), names[a.source].clone(), names[a.target].clone()))
            .collect();
        Quiver::new(names.to_vec(), arrows)
    }
}

/// An arrow of the double quiver: a real arrow `α` or its ghost `α*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Real(usize),
    Ghost(usize),
}

impl Letter {
    pub fn arrow(self) -> usize {
        match self {
            Letter::Real(a) | Letter::Ghost(a) => a,
        }
    }

    pub fn is_ghost(self) -> bool {
        matches!(self, Letter::Ghost(_))
    }

    pub fn star(self) -> Letter {
        match self {
            Letter::Real(a) => Letter::Ghost(a),
            Letter::Ghost(a) => Letter::Real(a),
        }
    }

    /// `+1` for real arrows, `-1` for ghosts.
    pub fn degree(self) -> i64 {
        if self.is_ghost() {
            -1
        } else {
            1
        }
    }
}

/// The double quiver: each arrow `α: i -> j` gets a ghost `α*: j -> i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleQuiver {
    base: Quiver,
}

impl DoubleQuiver {
    pub fn new(base: Quiver) -> DoubleQuiver {
        DoubleQuiver { base }
    }

    pub fn base(&self) -> &Quiver {
        &self.base
    }

    /// Real letters in declaration order, then ghosts in declaration order.
    pub fn letters(&self) -> Vec<Letter> {
        let n = self.base.arrow_count();
        (0..n).map(Letter::Real).chain((0..n).map(Letter::Ghost)).collect()
    }

    pub fn source(&self, l: Letter) -> usize {
        match l {
            Letter::Real(a) => self.base.arrows[a].source,
            Letter::Ghost(a) => self.base.arrows[a].target,
        }
    }

    pub fn target(&self, l: Letter) -> usize {
        match l {
            Letter::Real(a) => self.base.arrows[a].target,
            Letter::Ghost(a) => self.base.arrows[a].source,
        }
    }

    pub fn name(&self, l: Letter) -> String {
        match l {
            Letter::Real(a) => self.base.arrows[a].name.clone(),
            Letter::Ghost(a) => format!("{}*", self.base.arrows[a].name),
        }
    }

    pub fn parse_letter(&self, text: &str) -> Option<Letter> {
        match text.strip_suffix('*') {
            Some(base) => self.base.arrow_index(base).map(Letter::Ghost),
            None => self.base.arrow_index(text).map(Letter::Real),
        }
    }

    /// The double quiver as an ordinary quiver, ghosts named with a `*` suffix.
    pub fn as_quiver(&self) -> Quiver {
        let arrows = self
            .letters()
            .into_iter()
            .map(|l| {
                (
                    self.name(l),
                    self.base.vertices[self.source(l)].clone(),
                    self.base.vertices[self.target(l)].clone(),
                )
            })
            .collect();
        Quiver::new(self.base.vertices.clone(), arrows).expect("ghost names are fresh")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn q(text: &str) -> Quiver {
        parse_quiver(text).unwrap()
    }

    #[test]
    fn path_enumeration_examples() {
        let r2 = q("vertices: v\narrows: a: v -> v, b: v -> v");
        let p2: Vec<String> = r2.enumerate_paths(2).iter().map(|p| r2.format_path(p)).collect();
        assert_eq!(p2, vec!["a.a", "a.b", "b.a", "b.b"]);
        let c2 = q("vertices: 1 2\narrows: a: 1 -> 2, b: 2 -> 1");
        assert_eq!(c2.enumerate_paths(3).len(), 2);
        let p0: Vec<String> = c2.enumerate_paths(0).iter().map(|p| c2.format_path(p)).collect();
        assert_eq!(p0, vec!["e_1", "e_2"]);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(q("vertices: v\narrows: a: v -> v").classify_vertices(), (vec![], vec![]));
        assert_eq!(q("vertices: 1 2\narrows: a: 1 -> 2").classify_vertices(), (vec![1], vec![0]));
        let c3 = q("vertices: 1 2 3\narrows: a: 1 -> 2, b: 2 -> 3, c: 3 -> 1");
        assert_eq!(c3.classify_vertices(), (vec![], vec![]));
    }

    #[test]
    fn adjacency_examples() {
        let r1 = q("vertices: v\narrows: a: v -> v");
        assert_eq!(r1.adjacency_matrix(), IntMatrix::from_i64(&[vec![1]]));
        let r2 = q("vertices: v\narrows: a: v -> v, b: v -> v");
        assert_eq!(r2.adjacency_matrix(), IntMatrix::from_i64(&[vec![2]]));
        let c2 = q("vertices: 1 2\narrows: a: 1 -> 2, b: 2 -> 1");
        assert_eq!(c2.adjacency_matrix(), IntMatrix::from_i64(&[vec![0, 1], vec![1, 0]]));
        let line = q("vertices: 1 2\narrows: a: 1 -> 2");
        assert_eq!(line.adjacency_matrix(), IntMatrix::from_i64(&[vec![0, 0], vec![1, 0]]));
    }

    #[test]
    fn opposite_examples() {
        let line = q("vertices: 1 2\narrows: a: 1 -> 2");
        assert_eq!(line.opposite().serialize(), "vertices: 1 2\narrows: a: 2 -> 1\n");
        assert_eq!(line.opposite().opposite(), line);
        let r1 = q("vertices: v\narrows: a: v -> v");
        assert_eq!(r1.opposite(), r1);
    }

    #[test]
    fn paths_parse_and_compose() {
        let c2 = q("vertices: 1 2\narrows: a: 1 -> 2, b: 2 -> 1");
        let p = c2.parse_path("a.b").unwrap();
        assert_eq!((p.source(), p.target(), p.len()), (1, 1, 2));
        assert!(matches!(c2.parse_path("a.a"), Err(QuiverError::NotComposable(_))));
        assert!(matches!(c2.parse_path("z"), Err(QuiverError::UnknownArrow(_))));
        assert_eq!(c2.parse_path("e_2").unwrap(), Path::trivial(1));
        assert_eq!(c2.format_path(&p), "a.b");
    }

    #[test]
    fn double_quiver_ghosts() {
        let line = q("vertices: 1 2\narrows: a: 1 -> 2");
        let d = DoubleQuiver::new(line);
        let g = d.parse_letter("a*").unwrap();
        assert_eq!((d.source(g), d.target(g)), (1, 0));
        assert_eq!(d.as_quiver().serialize(), "vertices: 1 2\narrows: a: 1 -> 2, a*: 2 -> 1\n");
    }

    fn random_quiver() -> impl Strategy<Value = Quiver> {
        (1usize..4).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..6).prop_map(move |edges| {
                let vertices = (0..n).map(|i| format!("v{i}")).collect();
                let arrows = edges
                    .iter()
                    .enumerate()
                    .map(|(k, (s, t))| (format!("x{k}"), format!("v{s}"), format!("v{t}")))
                    .collect();
                Quiver::new(vertices, arrows).unwrap()
            })
        })
    }

    fn matrix_entry_sum(m: &IntMatrix) -> i64 {
        m.data().iter().flatten().map(|x| i64::try_from(x).unwrap()).sum()
    }

    proptest! {
        #[test]
        fn path_counts_match_adjacency_powers(quiver in random_quiver(), n in 0usize..5) {
            let a = quiver.adjacency_matrix().pow(n as u32);
            prop_assert_eq!(quiver.enumerate_paths(n).len() as i64, matrix_entry_sum(&a));
            prop_assert_eq!(quiver.path_count(n), quiver.enumerate_paths(n).len());
        }

        #[test]
        fn paths_are_composable_and_sorted(quiver in random_quiver(), n in 1usize..4) {
            let paths = quiver.enumerate_paths(n);
            for p in &paths {
                prop_assert_eq!(p.len(), n);
                let text = quiver.format_path(p);
                prop_assert_eq!(&quiver.parse_path(&text).unwrap(), p);
            }
            let words: Vec<String> = paths.iter().map(|p| quiver.format_path(p)).collect();
            let mut sorted = words.clone();
            sorted.sort();
            let names: Vec<Vec<String>> = words.iter().map(|w| w.split('.').map(String::from).collect()).collect();
            let mut sorted_names = names.clone();
            sorted_names.sort();
            prop_assert_eq!(names, sorted_names);
        }

        #[test]
        fn opposite_swaps_sinks_and_sources(quiver in random_quiver()) {
            let (sinks, sources) = quiver.classify_vertices();
            let op = quiver.opposite();
            prop_assert_eq!(op.classify_vertices(), (sources, sinks));
            prop_assert_eq!(op.adjacency_matrix(), quiver.adjacency_matrix().transpose());
            prop_assert_eq!(op.opposite(), quiver);
        }

        #[test]
        fn serialize_round_trip(quiver in random_quiver()) {
            let text = quiver.serialize();
            let back = parse_quiver(&text).unwrap();
            prop_assert_eq!(&back, &quiver);
            prop_assert_eq!(back.serialize(), text);
        }
    }
}
