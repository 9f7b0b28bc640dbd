use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::word::{FreeWord, GeneratorTuple};
use super::{FreeGroupError, MoveTrace, TraceStep};

/// States examined when no single move shortens the tuple and moves that
/// keep its length are tried instead.
pub const DEFAULT_ESCAPE_BUDGET: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `y_i -> y_i y_j`
    Right,
    /// `y_i -> y_j y_i`
    Left,
}

/// An elementary Nielsen transformation; indices are one-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "move")]
pub enum NielsenMove {
    N1 { i: usize, j: usize, side: Side },
    N2 { i: usize },
    N3 { i: usize, j: usize },
}

impl fmt::Display for NielsenMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NielsenMove::N1 { i, j, side: Side::Right } => write!(f, "N1: y{i} -> y{i} y{j}"),
            NielsenMove::N1 { i, j, side: Side::Left } => write!(f, "N1: y{i} -> y{j} y{i}"),
            NielsenMove::N2 { i } => write!(f, "N2: y{i} -> y{i}^-1"),
            NielsenMove::N3 { i, j } => write!(f, "N3: y{i} <-> y{j}"),
        }
    }
}

pub fn apply_nielsen(y: &GeneratorTuple, m: &NielsenMove) -> Result<GeneratorTuple, FreeGroupError> {
    let n = y.len();
    let ok = |k: usize| (1..=n).contains(&k);
    let mut out = y.clone();
    let words = out.words_mut();
    match *m {
        NielsenMove::N1 { i, j, side } => {
            if !ok(i) || !ok(j) || i == j {
                return Err(FreeGroupError::InvalidMove(m.to_string()));
            }
            words[i - 1] = match side {
                Side::Right => words[i - 1].mul(&words[j - 1]),
                Side::Left => words[j - 1].mul(&words[i - 1]),
            };
        }
        NielsenMove::N2 { i } => {
            if !ok(i) {
                return Err(FreeGroupError::InvalidMove(m.to_string()));
            }
            words[i - 1] = words[i - 1].inverse();
        }
        NielsenMove::N3 { i, j } => {
            if !ok(i) || !ok(j) || i == j {
                return Err(FreeGroupError::InvalidMove(m.to_string()));
            }
            words.swap(i - 1, j - 1);
        }
    }
    Ok(out)
}

/// The four replacements tried for an ordered pair `(i, j)`:
/// `y_i y_j`, `y_j y_i`, `y_i y_j^-1`, `y_j^-1 y_i`.
fn composite(i: usize, j: usize, variant: u8) -> Vec<NielsenMove> {
    let side = if variant % 2 == 0 { Side::Right } else { Side::Left };
    let n1 = NielsenMove::N1 { i, j, side };
    if variant < 2 {
        vec![n1]
    } else {
        vec![NielsenMove::N2 { i: j }, n1, NielsenMove::N2 { i: j }]
    }
}

fn composite_word(words: &[FreeWord], i: usize, j: usize, variant: u8) -> FreeWord {
    let (a, b) = (&words[i - 1], &words[j - 1]);
    match variant {
        0 => a.mul(b),
        1 => b.mul(a),
        2 => a.mul(&b.inverse()),
        _ => b.inverse().mul(a),
    }
}

/// All composites with nonempty `y_i`, `y_j`, in `(i, j, variant)` order,
/// with the length change they cause.
fn composites(words: &[FreeWord]) -> impl Iterator<Item = (usize, usize, u8, isize)> + '_ {
    let m = words.len();
    (1..=m).flat_map(move |i| {
        (1..=m).flat_map(move |j| {
            (0..4u8).filter_map(move |v| {
                if i == j || words[i - 1].is_empty() || words[j - 1].is_empty() {
                    return None;
                }
                let new = composite_word(words, i, j, v);
                Some((i, j, v, new.len() as isize - words[i - 1].len() as isize))
            })
        })
    })
}

fn first_decrease(words: &[FreeWord]) -> Option<(usize, usize, u8)> {
    composites(words).find(|c| c.3 < 0).map(|(i, j, v, _)| (i, j, v))
}

/// Breadth-first search over length-preserving composites for a tuple
/// admitting a shortening move. Returns the path, or whether the search
/// stopped on the budget.
fn escape(words: &[FreeWord], budget: usize) -> Result<Vec<(usize, usize, u8)>, bool> {
    let key = |ws: &[FreeWord]| ws.iter().map(|w| w.letters().to_vec()).collect::<Vec<_>>();
    let mut parent: HashMap<Vec<Vec<i32>>, Option<(Vec<Vec<i32>>, (usize, usize, u8))>> = HashMap::new();
    let mut queue = VecDeque::new();
    parent.insert(key(words), None);
    queue.push_back(words.to_vec());
    while let Some(cur) = queue.pop_front() {
        let cur_key = key(&cur);
        for (i, j, v, delta) in composites(&cur) {
            if delta != 0 {
                continue;
            }
            let mut next = cur.clone();
            next[i - 1] = composite_word(&cur, i, j, v);
            let next_key = key(&next);
            if parent.contains_key(&next_key) {
                continue;
            }
            parent.insert(next_key.clone(), Some((cur_key.clone(), (i, j, v))));
            if first_decrease(&next).is_some() {
                let mut path = Vec::new();
                let mut k = next_key;
                while let Some(Some((prev, step))) = parent.get(&k) {
                    path.push(*step);
                    k = prev.clone();
                }
                path.reverse();
                return Ok(path);
            }
            if parent.len() >= budget {
                return Err(true);
            }
            queue.push_back(next);
        }
    }
    Err(false)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NielsenReduction {
    /// The reduced tuple with trivial words removed.
    pub tuple: GeneratorTuple,
    /// Replaying the trace on the input and deleting trivial words gives
    /// `tuple`.
    pub trace: MoveTrace<NielsenMove>,
    /// Set when a search over length-preserving moves ran out of budget, so
    /// a shorter Nielsen-equivalent tuple may exist.
    pub escape_budget_hit: bool,
}

pub fn nielsen_reduce(y: &GeneratorTuple) -> NielsenReduction {
    nielsen_reduce_with_budget(y, DEFAULT_ESCAPE_BUDGET)
}

/// Repeatedly applies the first composite that shortens the tuple, in
/// `(i, j, variant)` order. When none does, a bounded search over
/// length-preserving composites looks for a tuple from which one does.
pub fn nielsen_reduce_with_budget(y: &GeneratorTuple, escape_budget: usize) -> NielsenReduction {
    let mut words = y.words().to_vec();
    let mut trace = MoveTrace::default();
    let mut complexity: usize = words.iter().map(FreeWord::len).sum();
    let mut apply = |words: &mut Vec<FreeWord>, (i, j, v): (usize, usize, u8), trace: &mut MoveTrace<NielsenMove>| {
        let new = composite_word(words, i, j, v);
        complexity = complexity + new.len() - words[i - 1].len();
        words[i - 1] = new;
        trace.steps.push(TraceStep {
            moves: composite(i, j, v),
            complexity,
        });
    };
    let budget_hit = loop {
        if let Some(c) = first_decrease(&words) {
            apply(&mut words, c, &mut trace);
            continue;
        }
        match escape(&words, escape_budget) {
            Ok(path) => {
                for c in path {
                    apply(&mut words, c, &mut trace);
                }
            }
            Err(hit) => break hit,
        }
    };
    words.retain(|w| !w.is_empty());
    NielsenReduction {
        tuple: GeneratorTuple::from_parts(words, y.rank()),
        trace,
        escape_budget_hit: budget_hit,
    }
}

/// Replays a Nielsen trace and deletes trivial words.
pub fn replay_nielsen(y: &GeneratorTuple, trace: &MoveTrace<NielsenMove>) -> Result<GeneratorTuple, FreeGroupError> {
    let mut cur = y.clone();
    for step in &trace.steps {
        for m in &step.moves {
            cur = apply_nielsen(&cur, m)?;
        }
        if cur.complexity() != step.complexity {
            return Err(FreeGroupError::TraceMismatch(format!(
                "complexity {} after {:?}, trace records {}",
                cur.complexity(),
                step.moves,
                step.complexity
            )));
        }
    }
    let words: Vec<FreeWord> = cur.words().iter().filter(|w| !w.is_empty()).cloned().collect();
    Ok(GeneratorTuple::from_parts(words, y.rank()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum AutomorphismCheck {
    Automorphism {
        reduced: GeneratorTuple,
        trace: MoveTrace<NielsenMove>,
    },
    NotAutomorphism {
        reduced: GeneratorTuple,
        trace: MoveTrace<NielsenMove>,
    },
    /// The reduction stopped on its search budget before reaching a basis.
    Inconclusive {
        reduced: GeneratorTuple,
        trace: MoveTrace<NielsenMove>,
    },
}

impl AutomorphismCheck {
    pub fn is_automorphism(&self) -> bool {
        matches!(self, AutomorphismCheck::Automorphism { .. })
    }
}

fn is_signed_basis(t: &GeneratorTuple) -> bool {
    let mut seen = vec![false; t.rank() + 1];
    t.len() == t.rank()
        && t.words().iter().all(|w| {
            w.len() == 1 && !std::mem::replace(&mut seen[w.letters()[0].unsigned_abs() as usize], true)
        })
}

/// Decides whether `x_k -> images[k - 1]` is an automorphism of the free
/// group, by Nielsen-reducing the images.
pub fn is_free_automorphism(images: &GeneratorTuple) -> Result<AutomorphismCheck, FreeGroupError> {
    if images.len() != images.rank() {
        return Err(FreeGroupError::SizeMismatch {
            expected: images.rank(),
            found: images.len(),
        });
    }
    let r = nielsen_reduce(images);
    Ok(if is_signed_basis(&r.tuple) {
        AutomorphismCheck::Automorphism {
            reduced: r.tuple,
            trace: r.trace,
        }
    } else if r.escape_budget_hit {
        AutomorphismCheck::Inconclusive {
            reduced: r.tuple,
            trace: r.trace,
        }
    } else {
        AutomorphismCheck::NotAutomorphism {
            reduced: r.tuple,
            trace: r.trace,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::parse_tuple;

    fn t(s: &str) -> GeneratorTuple {
        parse_tuple(s, None).unwrap()
    }

    #[test]
    fn raw_moves() {
        let y = t("x1 x2, x2");
        let m = NielsenMove::N1 { i: 1, j: 2, side: Side::Right };
        assert_eq!(apply_nielsen(&y, &m).unwrap(), t("x1 x2 x2, x2"));
        assert_eq!(apply_nielsen(&t("x1, x2"), &NielsenMove::N3 { i: 1, j: 2 }).unwrap(), t("x2, x1"));
        assert_eq!(apply_nielsen(&t("x1, x2"), &NielsenMove::N2 { i: 1 }).unwrap(), t("x1^-1, x2"));
        assert!(apply_nielsen(&y, &NielsenMove::N3 { i: 1, j: 1 }).is_err());
        assert!(apply_nielsen(&y, &NielsenMove::N2 { i: 3 }).is_err());
    }

    #[test]
    fn reduction_examples() {
        let r = nielsen_reduce(&t("x1 x2, x2"));
        assert_eq!(r.tuple, t("x1, x2"));
        assert_eq!(r.trace.steps.len(), 1);
        assert_eq!(r.trace.steps[0].moves, composite(1, 2, 2));
        assert_eq!(replay_nielsen(&t("x1 x2, x2"), &r.trace).unwrap(), r.tuple);

        let r = nielsen_reduce(&t("x1, x2"));
        assert!(r.trace.steps.is_empty());
        let r = nielsen_reduce(&t("x1^2, x2"));
        assert!(r.trace.steps.is_empty());
        assert_eq!(r.tuple, t("x1^2, x2"));
    }

    #[test]
    fn trivial_words_are_deleted() {
        let r = nielsen_reduce(&t("x1 x2, x1 x2, x2"));
        assert_eq!(r.tuple.len(), 2);
        assert_eq!(r.tuple.complexity(), 2);
    }

    #[test]
    fn automorphism_examples() {
        assert!(is_free_automorphism(&t("x1 x2, x2")).unwrap().is_automorphism());
        assert!(!is_free_automorphism(&t("x1^2, x2")).unwrap().is_automorphism());
        assert!(is_free_automorphism(&t("x2, x1")).unwrap().is_automorphism());
        assert!(is_free_automorphism(&t("x1")).is_err());
    }
}
