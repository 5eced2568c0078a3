use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use qhw_linalg::{Field, Scalar};
use qhw_quiver::{DoubleQuiver, Letter, Path, Quiver};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::monomial::{special_arrow, LeavittElement, LeavittMonomial};

/// A word over the double quiver in written order; `vertex` is its source,
/// which names the empty word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub letters: Vec<Letter>,
    pub vertex: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RuleKind {
    Ck1,
    Ck2,
}

/// `lhs → Σ c·w`, where every right-hand word is empty or has two letters.
#[derive(Clone, Debug)]
pub struct Rule {
    pub kind: RuleKind,
    pub lhs: [Letter; 2],
    pub rhs: Vec<(Word, i64)>,
}

/// CK1 as `αβ* → δ e_{t(α)}`, and CK2 oriented by the special arrows as
/// `γ_v* γ_v → e_v - Σ_{α ≠ γ_v} α*α`.
#[derive(Clone, Debug)]
pub struct RewriteSystem {
    quiver: Arc<Quiver>,
    double: DoubleQuiver,
    special: Vec<Option<usize>>,
    rules: Vec<Rule>,
    index: HashMap<[Letter; 2], usize>,
}

impl RewriteSystem {
    pub fn new(q: &Arc<Quiver>) -> RewriteSystem {
        let double = DoubleQuiver::new((**q).clone());
        let special: Vec<Option<usize>> = (0..q.vertex_count()).map(|v| special_arrow(q, v)).collect();
        let mut rules = Vec::new();
        for a in 0..q.arrow_count() {
            for b in 0..q.arrow_count() {
                if q.arrow(a).source != q.arrow(b).source {
                    continue;
                }
                let rhs = if a == b {
                    vec![(Word { letters: Vec::new(), vertex: q.arrow(a).target }, 1)]
                } else {
                    Vec::new()
                };
                rules.push(Rule {
                    kind: RuleKind::Ck1,
                    lhs: [Letter::Real(a), Letter::Ghost(b)],
                    rhs,
                });
            }
        }
        for (v, g) in special.iter().enumerate() {
            let Some(g) = *g else { continue };
            let mut rhs = vec![(Word { letters: Vec::new(), vertex: v }, 1)];
            for a in q.arrows_from(v).into_iter().filter(|&a| a != g) {
                rhs.push((
                    Word {
                        letters: vec![Letter::Ghost(a), Letter::Real(a)],
                        vertex: v,
                    },
                    -1,
                ));
            }
            rules.push(Rule {
                kind: RuleKind::Ck2,
                lhs: [Letter::Ghost(g), Letter::Real(g)],
                rhs,
            });
        }
        let index = rules.iter().enumerate().map(|(k, r)| (r.lhs, k)).collect();
        RewriteSystem {
            quiver: q.clone(),
            double,
            special,
            rules,
            index,
        }
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn special(&self, v: usize) -> Option<usize> {
        self.special[v]
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn describe(&self, rule: &Rule) -> String {
        let lhs = format!("{}.{}", self.double.name(rule.lhs[0]), self.double.name(rule.lhs[1]));
        let mut rhs = String::new();
        for (k, (w, c)) in rule.rhs.iter().enumerate() {
            let sign = match (k, *c < 0) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            rhs.push_str(sign);
            rhs.push_str(&self.format_word(w));
        }
        if rhs.is_empty() {
            rhs.push('0');
        }
        format!("{lhs} -> {rhs}")
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.letters.is_empty() {
            return self.quiver.trivial_name(w.vertex);
        }
        w.letters.iter().map(|&l| self.double.name(l)).collect::<Vec<_>>().join(".")
    }

    /// Builds a word, taking its source from the letters when there are any.
    pub fn word(&self, letters: Vec<Letter>, vertex: usize) -> Word {
        let vertex = letters.last().map_or(vertex, |&l| self.double.source(l));
        Word { letters, vertex }
    }

    pub fn is_composable(&self, w: &Word) -> bool {
        w.letters
            .windows(2)
            .all(|p| self.double.source(p[0]) == self.double.target(p[1]))
    }

    /// Positions `i` such that letters `i, i+1` form a left-hand side.
    pub fn redexes(&self, w: &Word) -> Vec<usize> {
        w.letters
            .windows(2)
            .enumerate()
            .filter(|(_, p)| self.index.contains_key(&[p[0], p[1]]))
            .map(|(i, _)| i)
            .collect()
    }

    /// `(length, number of special CK2 redexes)`; every rewrite lowers it.
    pub fn measure(&self, w: &Word) -> (usize, usize) {
        let special = w
            .letters
            .windows(2)
            .filter(|p| match (p[0], p[1]) {
                (Letter::Ghost(a), Letter::Real(b)) => {
                    a == b && self.special[self.quiver.arrow(a).source] == Some(a)
                }
                _ => false,
            })
            .count();
        (w.letters.len(), special)
    }

    pub fn rewrite_at(&self, w: &Word, pos: usize) -> Vec<(Word, i64)> {
        let rule = &self.rules[self.index[&[w.letters[pos], w.letters[pos + 1]]]];
        rule.rhs
            .iter()
            .map(|(r, c)| {
                let mut letters = w.letters[..pos].to_vec();
                letters.extend_from_slice(&r.letters);
                letters.extend_from_slice(&w.letters[pos + 2..]);
                (self.word(letters, r.vertex), *c)
            })
            .collect()
    }

    /// A redex-free composable word as a monomial.
    fn to_monomial(&self, w: &Word) -> LeavittMonomial {
        let split = w.letters.iter().take_while(|l| l.is_ghost()).count();
        let q = &self.quiver;
        let ghost: Vec<usize> = w.letters[..split].iter().rev().map(|l| l.arrow()).collect();
        let real: Vec<usize> = w.letters[split..].iter().map(|l| l.arrow()).collect();
        let real = Path::from_arrows(q, real);
        let ghost = Path::from_arrows(q, ghost);
        let (ghost, real) = match (ghost, real) {
            (Some(g), Some(r)) => (g, r),
            (Some(g), None) => (g.clone(), Path::trivial(g.target())),
            (None, Some(r)) => (Path::trivial(r.target()), r),
            (None, None) => (Path::trivial(w.vertex), Path::trivial(w.vertex)),
        };
        LeavittMonomial::new(ghost, real).expect("composable word")
    }

    /// Exhaustive rewriting, choosing among the redex positions with `choose`.
    pub fn normalize_with(
        &self,
        w: &Word,
        field: Field,
        mut choose: impl FnMut(&[usize]) -> usize,
    ) -> LeavittElement {
        let mut out = LeavittElement::zero(self.quiver.clone(), field);
        let mut pending: BTreeMap<Word, Scalar> = BTreeMap::new();
        pending.insert(w.clone(), field.one());
        while let Some((word, c)) = pending.pop_first() {
            if c.is_zero() || !self.is_composable(&word) {
                continue;
            }
            let redexes = self.redexes(&word);
            if redexes.is_empty() {
                out.add_term(self.to_monomial(&word), &c);
                continue;
            }
            let pos = redexes[choose(&redexes).min(redexes.len() - 1)];
            for (next, s) in self.rewrite_at(&word, pos) {
                debug_assert!(self.measure(&next) < self.measure(&word));
                let entry = pending.entry(next).or_insert_with(|| field.zero());
                *entry += &c.negate_if(s < 0);
            }
        }
        out
    }

    /// Leftmost-innermost normal form.
    pub fn normalize(&self, w: &Word, field: Field) -> LeavittElement {
        self.normalize_with(w, field, |_| 0)
    }

    pub fn normalize_random(&self, w: &Word, field: Field, rng: &mut impl Rng) -> LeavittElement {
        self.normalize_with(w, field, |r| rng.gen_range(0..r.len()))
    }

    /// A random composable word with `len` letters.
    pub fn random_word(&self, len: usize, rng: &mut impl Rng) -> Word {
        let letters = self.double.letters();
        let mut v = rng.gen_range(0..self.quiver.vertex_count());
        let mut out = Vec::with_capacity(len);
        // grow to the right: the next letter must end where the word starts
        for _ in 0..len {
            let options: Vec<Letter> = letters
                .iter()
                .copied()
                .filter(|&l| self.double.target(l) == v)
                .collect();
            if options.is_empty() {
                break;
            }
            let l = options[rng.gen_range(0..options.len())];
            v = self.double.source(l);
            out.push(l);
        }
        self.word(out, v)
    }

    /// All composable words with `len` letters.
    pub fn words(&self, len: usize) -> Vec<Word> {
        if len == 0 {
            return (0..self.quiver.vertex_count())
                .map(|v| Word { letters: Vec::new(), vertex: v })
                .collect();
        }
        let letters = self.double.letters();
        let dq = self.double.as_quiver();
        dq.enumerate_paths(len)
            .into_iter()
            .map(|p| self.word(p.arrows().iter().map(|&k| letters[k]).collect(), 0))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalPair {
    pub word: String,
    pub left_rule: String,
    pub right_rule: String,
    pub left_result: String,
    pub right_result: String,
    pub resolved: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfluenceReport {
    pub max_overlap_len: usize,
    pub rules: usize,
    /// Overlaps of two left-hand sides, each rewritten both ways.
    pub critical_pairs: Vec<CriticalPair>,
    /// Words up to the length bound with at least two redexes.
    pub ambiguous_words: usize,
    /// Of those, words where some pair of first steps disagrees.
    pub unresolved_words: Vec<String>,
    pub all_resolved: bool,
}

impl ConfluenceReport {
    pub fn resolved_pairs(&self) -> usize {
        self.critical_pairs.iter().filter(|c| c.resolved).count()
    }
}

/// Rewrites every ambiguous word up to `max_len` letters once at each redex,
/// normalizes the results and compares them.
pub fn check_local_confluence(rs: &RewriteSystem, max_len: usize, field: Field) -> ConfluenceReport {
    let after = |w: &Word, pos: usize| {
        let mut out = LeavittElement::zero(rs.quiver.clone(), field);
        for (next, s) in rs.rewrite_at(w, pos) {
            let nf = rs.normalize(&next, field);
            out = out.add(&nf.scale(&field.from_i64(s))).expect("same quiver");
        }
        out
    };
    let mut critical_pairs = Vec::new();
    if max_len >= 3 {
        for w in rs.words(3) {
            let r = rs.redexes(&w);
            if r != [0, 1] {
                continue;
            }
            let (left, right) = (after(&w, 0), after(&w, 1));
            let rule = |pos: usize| {
                let k = rs.index[&[w.letters[pos], w.letters[pos + 1]]];
                rs.describe(&rs.rules[k])
            };
            critical_pairs.push(CriticalPair {
                word: rs.format_word(&w),
                left_rule: rule(0),
                right_rule: rule(1),
                left_result: left.to_string(),
                right_result: right.to_string(),
                resolved: left == right,
            });
        }
    }
    let words: Vec<Word> = (2..=max_len).flat_map(|l| rs.words(l)).collect();
    let results: Vec<(bool, Option<String>)> = words
        .par_iter()
        .map(|w| {
            let r = rs.redexes(w);
            if r.len() < 2 {
                return (false, None);
            }
            let first = after(w, r[0]);
            let ok = r[1..].iter().all(|&p| after(w, p) == first);
            (true, (!ok).then(|| rs.format_word(w)))
        })
        .collect();
    let ambiguous_words = results.iter().filter(|(a, _)| *a).count();
    let unresolved_words: Vec<String> = results.into_iter().filter_map(|(_, u)| u).collect();
    let all_resolved = unresolved_words.is_empty() && critical_pairs.iter().all(|c| c.resolved);
    ConfluenceReport {
        max_overlap_len: max_len,
        rules: rs.rules.len(),
        critical_pairs,
        ambiguous_words,
        unresolved_words,
        all_resolved,
    }
}
