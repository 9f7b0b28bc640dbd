use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::word::{cyclic_reduce, CyclicWord, FreeWord};
use super::{FreeGroupError, MoveTrace, TraceStep};

/// States visited by [`automorphic_conjugacy`] unless told otherwise.
pub const DEFAULT_CONJUGACY_BUDGET: usize = 100_000;

/// What a multiplier-type move does to a generator `x_i` other than the
/// multiplier's own generator; `a` is the multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Assignment {
    /// `x_i`
    Fix,
    /// `x_i a`
    Right,
    /// `a^-1 x_i`
    LeftInv,
    /// `a^-1 x_i a`
    Conj,
}

const ASSIGNMENTS: [Assignment; 4] = [Assignment::Fix, Assignment::Right, Assignment::LeftInv, Assignment::Conj];

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum WhiteheadMove {
    /// `x_i -> x_{perm[i-1]}`, inverted where `invert[i-1]` is set.
    Kind1 { perm: Vec<usize>, invert: Vec<bool> },
    /// `multiplier` is a signed generator `a = x_j^±1`; `assignment` lists
    /// the action on each `x_i`, `i != j`, in increasing `i`.
    Kind2 { multiplier: i32, assignment: Vec<Assignment> },
}

impl WhiteheadMove {
    pub fn rank(&self) -> usize {
        match self {
            WhiteheadMove::Kind1 { perm, .. } => perm.len(),
            WhiteheadMove::Kind2 { assignment, .. } => assignment.len() + 1,
        }
    }

    pub fn validate(&self) -> Result<(), FreeGroupError> {
        let bad = || FreeGroupError::InvalidMove(self.to_string());
        match self {
            WhiteheadMove::Kind1 { perm, invert } => {
                let n = perm.len();
                let mut seen = vec![false; n + 1];
                if invert.len() != n || n == 0 {
                    return Err(bad());
                }
                for &p in perm {
                    if p == 0 || p > n || std::mem::replace(&mut seen[p], true) {
                        return Err(bad());
                    }
                }
            }
            WhiteheadMove::Kind2 { multiplier, assignment } => {
                let j = multiplier.unsigned_abs() as usize;
                if j == 0 || j > assignment.len() + 1 {
                    return Err(bad());
                }
            }
        }
        Ok(())
    }

    /// Images of the generators, as words of rank `self.rank()`.
    pub fn images(&self) -> Vec<FreeWord> {
        let n = self.rank();
        let g = |k: i32| FreeWord::generator(k, n).unwrap();
        match self {
            WhiteheadMove::Kind1 { perm, invert } => perm
                .iter()
                .zip(invert)
                .map(|(&p, &inv)| g(if inv { -(p as i32) } else { p as i32 }))
                .collect(),
            WhiteheadMove::Kind2 { multiplier, assignment } => {
                let j = multiplier.unsigned_abs() as usize;
                let a = g(*multiplier);
                let ai = a.inverse();
                let mut acts = assignment.iter();
                (1..=n)
                    .map(|i| {
                        let xi = g(i as i32);
                        if i == j {
                            return xi;
                        }
                        match acts.next().unwrap() {
                            Assignment::Fix => xi,
                            Assignment::Right => xi.mul(&a),
                            Assignment::LeftInv => ai.mul(&xi),
                            Assignment::Conj => ai.mul(&xi).mul(&a),
                        }
                    })
                    .collect()
            }
        }
    }

    pub fn inverse(&self) -> WhiteheadMove {
        match self {
            WhiteheadMove::Kind1 { perm, invert } => {
                let n = perm.len();
                let mut p = vec![0; n];
                let mut inv = vec![false; n];
                for i in 0..n {
                    p[perm[i] - 1] = i + 1;
                    inv[perm[i] - 1] = invert[i];
                }
                WhiteheadMove::Kind1 { perm: p, invert: inv }
            }
            WhiteheadMove::Kind2 { multiplier, assignment } => WhiteheadMove::Kind2 {
                multiplier: -multiplier,
                assignment: assignment.clone(),
            },
        }
    }

    pub fn apply(&self, w: &FreeWord) -> Result<FreeWord, FreeGroupError> {
        if self.rank() != w.rank() {
            return Err(FreeGroupError::RankMismatch);
        }
        w.substitute(&self.images())
    }

    pub fn apply_cyclic(&self, w: &CyclicWord) -> Result<CyclicWord, FreeGroupError> {
        Ok(cyclic_reduce(&self.apply(w.word())?))
    }
}

impl fmt::Display for WhiteheadMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, img) in self.images().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "x{} -> {img}", i + 1)?;
        }
        write!(f, ")")
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for rest in permutations(n - 1) {
            let mut p = vec![first];
            p.extend(rest.into_iter().map(|r| if r >= first { r + 1 } else { r }));
            out.push(p);
        }
    }
    out
}

/// Every Whitehead move of rank `n`: signed permutations (permutations in
/// lexicographic order, then inversion masks by bit pattern), followed by
/// multiplier moves (multiplier `x_1, x_1^-1, x_2, ...`, then assignments
/// counted in base 4 with the first generator most significant).
pub fn enumerate_whitehead_moves(n: usize) -> Vec<WhiteheadMove> {
    assert!(n >= 1, "rank must be positive");
    let mut out = Vec::new();
    for perm in permutations(n) {
        for mask in 0u32..(1 << n) {
            out.push(WhiteheadMove::Kind1 {
                perm: perm.clone(),
                invert: (0..n).map(|i| mask >> i & 1 == 1).collect(),
            });
        }
    }
    let others = n - 1;
    for j in 1..=n as i32 {
        for multiplier in [j, -j] {
            for code in 0..4usize.pow(others as u32) {
                let assignment = (0..others)
                    .map(|d| ASSIGNMENTS[code / 4usize.pow((others - 1 - d) as u32) % 4])
                    .collect();
                out.push(WhiteheadMove::Kind2 { multiplier, assignment });
            }
        }
    }
    out
}

/// Steepest descent on cyclic length; ties go to the earliest move in
/// [`enumerate_whitehead_moves`] order.
pub fn whitehead_minimize(w: &CyclicWord) -> (CyclicWord, MoveTrace<WhiteheadMove>) {
    let moves = enumerate_whitehead_moves(w.rank());
    let mut cur = w.clone();
    let mut trace = MoveTrace::default();
    loop {
        let mut best: Option<(usize, CyclicWord)> = None;
        for (k, m) in moves.iter().enumerate() {
            let next = m.apply_cyclic(&cur).expect("rank checked");
            let bound = best.as_ref().map_or(cur.len(), |(_, b)| b.len());
            if next.len() < bound {
                best = Some((k, next));
            }
        }
        match best {
            Some((k, next)) => {
                trace.steps.push(TraceStep {
                    moves: vec![moves[k].clone()],
                    complexity: next.len(),
                });
                cur = next;
            }
            None => return (cur, trace),
        }
    }
}

/// Replays a Whitehead trace on a cyclic word, checking the recorded
/// lengths.
pub fn replay_whitehead(w: &CyclicWord, trace: &MoveTrace<WhiteheadMove>) -> Result<CyclicWord, FreeGroupError> {
    let mut cur = w.clone();
    for step in &trace.steps {
        for m in &step.moves {
            m.validate()?;
            cur = m.apply_cyclic(&cur)?;
        }
        if cur.len() != step.complexity {
            return Err(FreeGroupError::TraceMismatch(format!(
                "length {} after step, trace records {}",
                cur.len(),
                step.complexity
            )));
        }
    }
    Ok(cur)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PrimitiveVerdict {
    Primitive {
        minimal: CyclicWord,
        trace: MoveTrace<WhiteheadMove>,
    },
    NotPrimitive {
        minimal: CyclicWord,
        trace: MoveTrace<WhiteheadMove>,
    },
}

impl PrimitiveVerdict {
    pub fn is_primitive(&self) -> bool {
        matches!(self, PrimitiveVerdict::Primitive { .. })
    }

    pub fn trace(&self) -> &MoveTrace<WhiteheadMove> {
        match self {
            PrimitiveVerdict::Primitive { trace, .. } | PrimitiveVerdict::NotPrimitive { trace, .. } => trace,
        }
    }
}

/// A word is primitive iff Whitehead minimization brings its cyclic
/// reduction down to length 1.
pub fn is_primitive(w: &FreeWord) -> Result<PrimitiveVerdict, FreeGroupError> {
    if w.is_empty() {
        return Err(FreeGroupError::EmptyWord);
    }
    let (minimal, trace) = whitehead_minimize(&cyclic_reduce(w));
    Ok(if minimal.len() == 1 {
        PrimitiveVerdict::Primitive { minimal, trace }
    } else {
        PrimitiveVerdict::NotPrimitive { minimal, trace }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ConjugacyVerdict {
    /// Replaying `trace` on the cyclic reduction of `u` gives that of `v`.
    Equivalent { trace: MoveTrace<WhiteheadMove> },
    NotEquivalent { minimal_u: CyclicWord, minimal_v: CyclicWord },
    BudgetExceeded { explored: usize },
}

/// Decides whether some automorphism takes `u` to a conjugate of `v`.
///
/// Both words are minimized; when the minimal lengths agree, a breadth-first
/// search over length-preserving moves connects the two minimal words.
pub fn automorphic_conjugacy(u: &FreeWord, v: &FreeWord, budget: usize) -> Result<ConjugacyVerdict, FreeGroupError> {
    if u.rank() != v.rank() {
        return Err(FreeGroupError::RankMismatch);
    }
    let (mu, tu) = whitehead_minimize(&cyclic_reduce(u));
    let (mv, tv) = whitehead_minimize(&cyclic_reduce(v));
    if mu.len() != mv.len() {
        return Ok(ConjugacyVerdict::NotEquivalent {
            minimal_u: mu,
            minimal_v: mv,
        });
    }
    let moves = enumerate_whitehead_moves(u.rank());
    let mut parent: HashMap<CyclicWord, Option<(CyclicWord, usize)>> = HashMap::new();
    parent.insert(mu.clone(), None);
    let mut queue = VecDeque::from([mu.clone()]);
    let mut found = mu == mv;
    'bfs: while let Some(cur) = queue.pop_front() {
        if found {
            break;
        }
        for (k, m) in moves.iter().enumerate() {
            let next = m.apply_cyclic(&cur)?;
            if next.len() != cur.len() || parent.contains_key(&next) {
                continue;
            }
            parent.insert(next.clone(), Some((cur.clone(), k)));
            if next == mv {
                found = true;
                break 'bfs;
            }
            if parent.len() >= budget {
                return Ok(ConjugacyVerdict::BudgetExceeded { explored: parent.len() });
            }
            queue.push_back(next);
        }
    }
    if !found {
        return Ok(ConjugacyVerdict::NotEquivalent {
            minimal_u: mu,
            minimal_v: mv,
        });
    }
    let mut path = Vec::new();
    let mut k = mv.clone();
    while let Some(Some((prev, idx))) = parent.get(&k) {
        path.push((moves[*idx].clone(), k.len()));
        k = prev.clone();
    }
    path.reverse();
    let mut trace = tu;
    for (m, len) in path {
        trace.steps.push(TraceStep {
            moves: vec![m],
            complexity: len,
        });
    }
    // Undo the minimization of v, last move first.
    let mut lengths: Vec<usize> = vec![cyclic_reduce(v).len()];
    lengths.extend(tv.steps.iter().map(|s| s.complexity));
    for (idx, step) in tv.steps.iter().enumerate().rev() {
        trace.steps.push(TraceStep {
            moves: step.moves.iter().rev().map(WhiteheadMove::inverse).collect(),
            complexity: lengths[idx],
        });
    }
    Ok(ConjugacyVerdict::Equivalent { trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::parse_word;

    fn w(s: &str) -> FreeWord {
        parse_word(s, Some(2)).unwrap()
    }

    fn c(s: &str) -> CyclicWord {
        cyclic_reduce(&w(s))
    }

    #[test]
    fn enumeration_counts() {
        let m2 = enumerate_whitehead_moves(2);
        assert_eq!(m2.iter().filter(|m| matches!(m, WhiteheadMove::Kind1 { .. })).count(), 8);
        assert_eq!(m2.iter().filter(|m| matches!(m, WhiteheadMove::Kind2 { .. })).count(), 16);
        let m3 = enumerate_whitehead_moves(3);
        assert_eq!(m3.iter().filter(|m| matches!(m, WhiteheadMove::Kind1 { .. })).count(), 48);
        assert_eq!(m3.len(), 48 + 6 * 16);
        let set: std::collections::HashSet<_> = m3.iter().collect();
        assert_eq!(set.len(), m3.len());
    }

    #[test]
    fn inverses_undo_moves() {
        let x = w("x1 x2^-1 x1 x1 x2");
        for m in enumerate_whitehead_moves(2) {
            let back = m.inverse().apply(&m.apply(&x).unwrap()).unwrap();
            assert_eq!(back, x, "{m}");
        }
    }

    #[test]
    fn minimize_examples() {
        let (min, trace) = whitehead_minimize(&c("x1 x1 x2"));
        assert_eq!(min.len(), 1);
        assert_eq!(trace.steps.len(), 2);
        let expected = WhiteheadMove::Kind2 {
            multiplier: 1,
            assignment: vec![Assignment::LeftInv],
        };
        for s in &trace.steps {
            assert_eq!(s.moves, vec![expected.clone()]);
        }
        assert_eq!(replay_whitehead(&c("x1 x1 x2"), &trace).unwrap(), min);

        let (min, trace) = whitehead_minimize(&c("x1"));
        assert_eq!(min, c("x1"));
        assert!(trace.steps.is_empty());
        let (min, _) = whitehead_minimize(&c("x1 x2 x1^-1 x2^-1"));
        assert_eq!(min.len(), 4);
    }

    #[test]
    fn primitive_examples() {
        assert!(is_primitive(&w("x2 x1 x2^-1")).unwrap().is_primitive());
        assert!(is_primitive(&w("x1^2 x2")).unwrap().is_primitive());
        assert!(!is_primitive(&w("x1 x2 x1^-1 x2^-1")).unwrap().is_primitive());
        assert!(!is_primitive(&w("x1^2")).unwrap().is_primitive());
        assert!(is_primitive(&FreeWord::identity(2)).is_err());
    }

    #[test]
    fn conjugacy_examples() {
        for (u, v) in [("x1", "x2"), ("x1 x2", "x1 x2^-1"), ("x1 x1 x2", "x2^-1"), ("x1 x2 x1^-1 x2^-1", "x2 x1 x2^-1 x1^-1")] {
            match automorphic_conjugacy(&w(u), &w(v), DEFAULT_CONJUGACY_BUDGET).unwrap() {
                ConjugacyVerdict::Equivalent { trace } => {
                    assert_eq!(replay_whitehead(&c(u), &trace).unwrap(), c(v), "{u} -> {v}");
                }
                other => panic!("{u} {v}: {other:?}"),
            }
        }
        assert!(matches!(
            automorphic_conjugacy(&w("x1"), &w("x1 x2 x1^-1 x2^-1"), 1000).unwrap(),
            ConjugacyVerdict::NotEquivalent { .. }
        ));
        assert!(matches!(
            automorphic_conjugacy(&w("x1 x1"), &w("x1 x2 x2"), 1000).unwrap(),
            ConjugacyVerdict::NotEquivalent { .. }
        ));
    }
}
