//! Decision procedures for free groups and for automorphisms, coordinates
//! and retracts of the polynomial algebra in two variables.
//!
//! Every positive or negative answer comes with a certificate that can be
//! replayed independently: move traces for free-group questions, factor
//! lists and matrix products for polynomial questions.

pub mod rational;
pub mod coordinate;
pub mod freegroup;
pub mod groebner;
pub mod poly;
pub mod retract;
pub mod tame;

pub use poly::{PolyMap, Polynomial};
pub use rational::Rational;
