//! Depth-first search over reduction steps on a pair of polynomials.

use std::collections::HashSet;

use crate::groebner::{s_polynomial, ReductionStep};
use crate::poly::Polynomial;
use crate::rational::Rational;

pub(crate) struct SearchLimits {
    /// Maximum number of states expanded.
    pub node_budget: usize,
    /// Maximum number of singular steps along a path.
    pub max_singular: usize,
    /// Maximum number of singular steps tried over the whole search.
    pub singular_budget: usize,
}

pub(crate) enum SearchOutcome {
    Found {
        steps: Vec<ReductionStep>,
    },
    Exhausted {
        /// The first dead end met by the search.
        dead_end: [Polynomial; 2],
        explored: usize,
    },
    BudgetExceeded {
        explored: usize,
    },
}

/// True for `(c, 0)` and `(0, c)` with `c` a nonzero scalar.
pub(crate) fn is_terminal(pair: &[Polynomial; 2]) -> bool {
    match (pair[0].is_zero(), pair[1].is_zero()) {
        (false, true) => pair[0].is_constant(),
        (true, false) => pair[1].is_constant(),
        _ => false,
    }
}

pub(crate) fn max_degree(pair: &[Polynomial; 2]) -> u32 {
    pair[0].degree_or_zero().max(pair[1].degree_or_zero())
}

/// Steps turning a terminal pair into `(1, 0)`.
pub(crate) fn normalization_steps(pair: &[Polynomial; 2]) -> Vec<ReductionStep> {
    let mut out = Vec::new();
    let c = if pair[0].is_zero() {
        out.push(ReductionStep::Swap);
        pair[1].constant_value().unwrap()
    } else {
        pair[0].constant_value().unwrap()
    };
    if !c.is_one() {
        out.push(ReductionStep::Scale {
            index: 0,
            factor: c.recip(),
        });
    }
    out
}

/// Index of the component with the larger leading monomial; ties go to
/// the first component.
fn larger(pair: &[Polynomial; 2]) -> usize {
    if pair[1].lm() > pair[0].lm() {
        1
    } else {
        0
    }
}

type Move = (ReductionStep, Option<[Polynomial; 2]>);

fn regular_moves(pair: &[Polynomial; 2]) -> Vec<Move> {
    let mut moves: Vec<Move> = Vec::new();
    let big = larger(pair);
    let small = 1 - big;
    if let (Some(lb), Some(ls)) = (pair[big].lm(), pair[small].lm()) {
        if ls.divides(lb) {
            let (q, r) = pair[big].divide(std::slice::from_ref(&pair[small]));
            let mut result = pair.clone();
            result[big] = r;
            let step = ReductionStep::Regular {
                target: big,
                source: small,
                multiplier: q.into_iter().next().unwrap(),
                scalar: Rational::one(),
            };
            moves.push((step, Some(result)));
        }
    }
    for target in [big, small] {
        let source = 1 - target;
        let Some((ls, lc)) = pair[source].lt() else { continue };
        for (m, c) in pair[target].terms() {
            if let Some(shift) = ls.divide_into(m) {
                let step = ReductionStep::Regular {
                    target,
                    source,
                    multiplier: Polynomial::term(shift, c / lc),
                    scalar: Rational::one(),
                };
                if !moves.iter().any(|(s, _)| *s == step) {
                    moves.push((step, None));
                }
            }
        }
    }
    moves
}

fn singular_moves(pair: &[Polynomial; 2]) -> Vec<Move> {
    let (Some(la), Some(lb)) = (pair[0].lm(), pair[1].lm()) else {
        return Vec::new();
    };
    if la.divides(lb) || lb.divides(la) {
        return Vec::new();
    }
    let spoly = s_polynomial(&pair[0], &pair[1]).unwrap();
    let big = larger(pair);
    [big, 1 - big]
        .into_iter()
        .map(|replaced| {
            let mut result = pair.clone();
            result[replaced] = spoly.value.clone();
            let step = ReductionStep::Singular {
                pair: (0, 1),
                replaced,
                spoly: spoly.clone(),
            };
            (step, Some(result))
        })
        .collect()
}

type Key = (Polynomial, Polynomial, usize);

fn key(pair: &[Polynomial; 2], singular: usize) -> Key {
    (pair[0].monic(), pair[1].monic(), singular)
}

struct Frame {
    pair: [Polynomial; 2],
    singular: usize,
    moves: Vec<Move>,
    next: usize,
}

/// Searches for a path of steps from `start` to a terminal pair. Regular
/// steps never raise the maximum degree of the pair; paths are explored
/// in move order, so the first path found is the greedy one whenever the
/// greedy loop succeeds.
pub(crate) fn search(start: &[Polynomial; 2], limits: &SearchLimits) -> SearchOutcome {
    if is_terminal(start) {
        return SearchOutcome::Found { steps: Vec::new() };
    }
    let mut seen: HashSet<Key> = HashSet::new();
    let mut singular_tried = 0usize;
    let mut singular_skipped = false;
    let mut explored = 0usize;
    let mut dead_end: Option<[Polynomial; 2]> = None;

    let expand = |pair: &[Polynomial; 2], singular: usize| {
        let mut moves = regular_moves(pair);
        if singular < limits.max_singular {
            moves.extend(singular_moves(pair));
        }
        moves
    };

    seen.insert(key(start, 0));
    let mut stack = vec![Frame {
        pair: start.clone(),
        singular: 0,
        moves: expand(start, 0),
        next: 0,
    }];
    explored += 1;
    let mut path: Vec<ReductionStep> = Vec::new();

    while let Some(frame) = stack.last_mut() {
        if frame.next >= frame.moves.len() {
            if frame.moves.is_empty() && dead_end.is_none() {
                dead_end = Some(frame.pair.clone());
            }
            stack.pop();
            path.pop();
            continue;
        }
        let (step, precomputed) = std::mem::replace(
            &mut frame.moves[frame.next],
            (ReductionStep::Swap, None),
        );
        frame.next += 1;
        let mut singular = frame.singular;
        if matches!(step, ReductionStep::Singular { .. }) {
            if singular_tried >= limits.singular_budget {
                singular_skipped = true;
                continue;
            }
            singular_tried += 1;
            singular += 1;
        }
        let pair = precomputed.unwrap_or_else(|| step.apply(&frame.pair));
        if pair[0].is_zero() && pair[1].is_zero() {
            continue;
        }
        if is_terminal(&pair) {
            path.push(step);
            return SearchOutcome::Found { steps: path };
        }
        if !seen.insert(key(&pair, singular)) {
            continue;
        }
        if explored >= limits.node_budget {
            return SearchOutcome::BudgetExceeded { explored };
        }
        explored += 1;
        let moves = expand(&pair, singular);
        path.push(step);
        stack.push(Frame {
            pair,
            singular,
            moves,
            next: 0,
        });
    }
    if singular_skipped {
        return SearchOutcome::BudgetExceeded { explored };
    }
    SearchOutcome::Exhausted {
        dead_end: dead_end.unwrap_or_else(|| start.clone()),
        explored,
    }
}
