use serde::{Deserialize, Serialize};

use super::search::{normalization_steps, search, SearchLimits, SearchOutcome};
use super::{gradient_pair, unimodular_gradient, CoordError};
use crate::groebner::{ReductionKind, ReductionStep};
use crate::poly::Polynomial;

/// Default number of singular steps the search may try.
pub const DEFAULT_CONJG_BUDGET: usize = 64;

const NODE_BUDGET: usize = 50_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ConjectureGVerdict {
    /// Steps from the gradient to `(1, 0)` with at most one singular step.
    Witness {
        steps: Vec<ReductionStep>,
        singular_steps: usize,
        /// The pair before the first step and after each step.
        pairs: Vec<[Polynomial; 2]>,
    },
    NoneFoundWithinBudget {
        explored: usize,
    },
}

impl ConjectureGVerdict {
    pub fn is_witness(&self) -> bool {
        matches!(self, ConjectureGVerdict::Witness { .. })
    }
}

/// Replays steps from the gradient of `p`; returns every intermediate pair.
pub fn replay_steps(p: &Polynomial, steps: &[ReductionStep]) -> Result<Vec<[Polynomial; 2]>, CoordError> {
    let mut pairs = vec![gradient_pair(p)?];
    for s in steps {
        let next = s.apply(pairs.last().unwrap());
        pairs.push(next);
    }
    Ok(pairs)
}

/// Looks for a reduction of the gradient of `p` to `(1, 0)` that uses at
/// most one singular step, trying at most `budget` singular steps in
/// total. A miss is never a refutation.
pub fn conjecture_g_search(p: &Polynomial, budget: usize) -> Result<ConjectureGVerdict, CoordError> {
    let grad = gradient_pair(p)?;
    if !unimodular_gradient(p) {
        return Err(CoordError::GradientNotUnimodular(p.to_string()));
    }
    let limits = SearchLimits {
        node_budget: NODE_BUDGET,
        max_singular: 1,
        singular_budget: budget,
    };
    match search(&grad, &limits) {
        SearchOutcome::Found { mut steps } => {
            let pairs = replay_steps(p, &steps)?;
            steps.extend(normalization_steps(pairs.last().unwrap()));
            let pairs = replay_steps(p, &steps)?;
            let last = pairs.last().unwrap();
            if !last[0].is_one() || !last[1].is_zero() {
                return Err(CoordError::CertificateFailed("witness does not end at (1, 0)".into()));
            }
            let singular_steps = steps.iter().filter(|s| s.kind() == ReductionKind::Singular).count();
            Ok(ConjectureGVerdict::Witness {
                steps,
                singular_steps,
                pairs,
            })
        }
        SearchOutcome::Exhausted { explored, .. } | SearchOutcome::BudgetExceeded { explored } => {
            Ok(ConjectureGVerdict::NoneFoundWithinBudget { explored })
        }
    }
}
