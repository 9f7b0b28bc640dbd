//! Words in a free group of finite rank, with Nielsen reduction of tuples,
//! subgroup membership, and Whitehead minimization of single words.

mod folding;
mod nielsen;
mod parse;
mod whitehead;
mod word;

use serde::{Deserialize, Serialize};

pub use folding::{check_expression, same_subgroup, subgroup_membership, FoldedGraph, Membership};
pub use nielsen::{
    apply_nielsen, is_free_automorphism, nielsen_reduce, nielsen_reduce_with_budget, replay_nielsen,
    AutomorphismCheck, NielsenMove, NielsenReduction, Side, DEFAULT_ESCAPE_BUDGET,
};
pub use parse::{parse_letters, parse_tuple, parse_word};
pub use whitehead::{
    automorphic_conjugacy, enumerate_whitehead_moves, is_primitive, replay_whitehead, whitehead_minimize,
    Assignment, ConjugacyVerdict, PrimitiveVerdict, WhiteheadMove, DEFAULT_CONJUGACY_BUDGET,
};
pub use word::{cyclic_reduce, free_reduce, letter_order, CyclicWord, FreeWord, GeneratorTuple};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FreeGroupError {
    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: i32, rank: usize },
    #[error("word is not freely reduced")]
    NotReduced,
    #[error("word is not a canonical cyclic word")]
    NotCanonical,
    #[error("the empty word is not allowed here")]
    EmptyWord,
    #[error("a tuple needs at least one word")]
    EmptyTuple,
    #[error("words of different rank")]
    RankMismatch,
    #[error("expected {expected} words, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("invalid move {0}")]
    InvalidMove(String),
    #[error("trace does not replay: {0}")]
    TraceMismatch(String),
}

/// One step of a trace: moves applied in order, then the complexity (total
/// or cyclic length) of the result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep<M> {
    pub moves: Vec<M>,
    pub complexity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MoveTrace<M> {
    pub steps: Vec<TraceStep<M>>,
}

impl<M> Default for MoveTrace<M> {
    fn default() -> Self {
        MoveTrace { steps: Vec::new() }
    }
}

impl<M> MoveTrace<M> {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Total number of elementary moves.
    pub fn move_count(&self) -> usize {
        self.steps.iter().map(|s| s.moves.len()).sum()
    }
}
