//! Coordinate polynomials of `K[x, y]`: unimodular gradients, reduction of
//! the gradient to `(1, 0)` by elementary steps, completion to a basis,
//! and the search for reductions with a single singular step.

mod conjg;
mod search;
mod straighten;

use serde::{Deserialize, Serialize};

use crate::groebner::{contains_one, GEMatrix, ReductionKind, ReductionStep};
use crate::poly::{PolyError, PolyMap, Polynomial};
use crate::tame::{decompose_automorphism, Decomposition, TameError};

pub use conjg::{conjecture_g_search, replay_steps, ConjectureGVerdict, DEFAULT_CONJG_BUDGET};
pub use straighten::straighten;

use search::{max_degree, normalization_steps, search, SearchLimits, SearchOutcome};

/// Default number of states the gradient search may expand.
pub const DEFAULT_NODE_BUDGET: usize = 20_000;
/// Search size tried before the Gröbner unimodularity test.
const QUICK_NODE_BUDGET: usize = 500;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoordError {
    #[error("coordinate detection needs two variables, found {0}")]
    NotBivariate(usize),
    #[error("{0} is not a coordinate polynomial")]
    NotCoordinate(String),
    #[error("gradient of {0} is not unimodular")]
    GradientNotUnimodular(String),
    #[error("certificate check failed: {0}")]
    CertificateFailed(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Tame(#[from] TameError),
}

pub fn gradient_pair(p: &Polynomial) -> Result<[Polynomial; 2], CoordError> {
    if p.nvars() != 2 {
        return Err(CoordError::NotBivariate(p.nvars()));
    }
    Ok([p.partial_derivative(0), p.partial_derivative(1)])
}

/// True iff the partial derivatives of `p` generate the unit ideal.
/// Constants have zero gradient and give `false`.
pub fn unimodular_gradient(p: &Polynomial) -> bool {
    if p.is_constant() {
        return false;
    }
    contains_one(&p.gradient())
}

/// The steps of a gradient reduction with the maximum monomial degree of
/// the pair before the first step and after each step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradientTrace {
    pub steps: Vec<ReductionStep>,
    pub max_degrees: Vec<u32>,
    /// Number of single leading-term cancellations performed.
    pub elementary_steps: usize,
}

impl GradientTrace {
    fn replay(start: &[Polynomial; 2], steps: Vec<ReductionStep>) -> (GradientTrace, [Polynomial; 2]) {
        let mut pair = start.clone();
        let mut max_degrees = vec![max_degree(&pair)];
        let mut elementary_steps = 0;
        for s in &steps {
            if let ReductionStep::Regular { multiplier, .. } = s {
                elementary_steps += multiplier.num_terms();
            }
            pair = s.apply(&pair);
            max_degrees.push(max_degree(&pair));
        }
        (
            GradientTrace {
                steps,
                max_degrees,
                elementary_steps,
            },
            pair,
        )
    }

    /// Maximal runs of steps at one maximum degree, as `(degree, steps)`,
    /// excluding the final run at degree zero.
    pub fn division_rounds(&self) -> Vec<(u32, usize)> {
        let mut rounds: Vec<(u32, usize)> = Vec::new();
        for w in self.max_degrees.windows(2) {
            let d = w[0];
            if d == 0 {
                continue;
            }
            match rounds.last_mut() {
                Some((deg, n)) if *deg == d => *n += 1,
                _ => rounds.push((d, 1)),
            }
        }
        rounds
    }

    /// The maximum degree never rises and strictly drops from one division
    /// round to the next, so there are at most `initial degree` rounds.
    pub fn is_degree_monotone(&self) -> bool {
        let non_increasing = self.max_degrees.windows(2).all(|w| w[1] <= w[0]);
        let rounds = self.division_rounds();
        let strictly = rounds.windows(2).all(|w| w[1].0 < w[0].0);
        let initial = self.max_degrees.first().copied().unwrap_or(0) as usize;
        non_increasing && strictly && rounds.len() <= initial
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum GradientVerdict {
    Reached {
        matrix: GEMatrix,
        trace: GradientTrace,
    },
    Stuck {
        final_pair: [Polynomial; 2],
        explored: usize,
    },
    BudgetExhausted {
        explored: usize,
    },
}

impl GradientVerdict {
    pub fn is_reached(&self) -> bool {
        matches!(self, GradientVerdict::Reached { .. })
    }
}

/// Searches for elementary steps taking `(d1 p, d2 p)` to `(1, 0)`.
pub fn elementary_reduce_gradient(p: &Polynomial) -> Result<GradientVerdict, CoordError> {
    elementary_reduce_gradient_with_budget(p, DEFAULT_NODE_BUDGET)
}

pub fn elementary_reduce_gradient_with_budget(
    p: &Polynomial,
    node_budget: usize,
) -> Result<GradientVerdict, CoordError> {
    let grad = gradient_pair(p)?;
    let limits = SearchLimits {
        node_budget,
        max_singular: 0,
        singular_budget: 0,
    };
    match search(&grad, &limits) {
        SearchOutcome::Found { steps } => {
            let (_, terminal) = GradientTrace::replay(&grad, steps.clone());
            let mut steps = steps;
            steps.extend(normalization_steps(&terminal));
            let (trace, last) = GradientTrace::replay(&grad, steps);
            let matrix = matrix_of(&trace.steps)?;
            check_matrix(&grad, &matrix)?;
            if !last[0].is_one() || !last[1].is_zero() {
                return Err(CoordError::CertificateFailed("trace does not end at (1, 0)".into()));
            }
            Ok(GradientVerdict::Reached { matrix, trace })
        }
        SearchOutcome::Exhausted { dead_end, explored } => Ok(GradientVerdict::Stuck {
            final_pair: dead_end,
            explored,
        }),
        SearchOutcome::BudgetExceeded { explored } => Ok(GradientVerdict::BudgetExhausted { explored }),
    }
}

fn matrix_of(steps: &[ReductionStep]) -> Result<GEMatrix, CoordError> {
    let mut m = GEMatrix::identity();
    for s in steps {
        let fs = s
            .ge_factors()
            .ok_or_else(|| CoordError::CertificateFailed("singular step in an elementary trace".into()))?;
        m.extend(fs);
    }
    Ok(m)
}

fn check_matrix(grad: &[Polynomial; 2], m: &GEMatrix) -> Result<(), CoordError> {
    if !m.verify() {
        return Err(CoordError::CertificateFailed("matrix product or determinant".into()));
    }
    let row = m.apply_row(grad);
    if !row[0].is_one() || !row[1].is_zero() {
        return Err(CoordError::CertificateFailed(format!(
            "gradient times matrix is ({}, {}), not (1, 0)",
            row[0], row[1]
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordCertificate {
    /// `(d1 p, d2 p) * matrix = (1, 0)`.
    pub matrix: GEMatrix,
    /// A polynomial with `(p, q)` an automorphism.
    pub q: Polynomial,
    /// Applied in order by substitution, these factors take `p` to `x`.
    pub auto_sequence: Decomposition,
    pub trace: GradientTrace,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NotCoordinateReason {
    GradientNotUnimodular,
    ReductionStuck { final_pair: [Polynomial; 2] },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CoordinateVerdict {
    Coordinate {
        certificate: CoordCertificate,
    },
    NotCoordinate {
        #[serde(flatten)]
        reason: NotCoordinateReason,
    },
    /// The gradient search ran out of budget.
    Inconclusive {
        explored: usize,
    },
}

impl CoordinateVerdict {
    pub fn is_coordinate(&self) -> bool {
        matches!(self, CoordinateVerdict::Coordinate { .. })
    }

    pub fn certificate(&self) -> Option<&CoordCertificate> {
        match self {
            CoordinateVerdict::Coordinate { certificate } => Some(certificate),
            _ => None,
        }
    }
}

/// Decides whether `p` belongs to a generating pair of `K[x, y]`.
pub fn is_coordinate(p: &Polynomial) -> Result<CoordinateVerdict, CoordError> {
    is_coordinate_with_budget(p, DEFAULT_NODE_BUDGET)
}

pub fn is_coordinate_with_budget(
    p: &Polynomial,
    node_budget: usize,
) -> Result<CoordinateVerdict, CoordError> {
    gradient_pair(p)?;
    let mut verdict = elementary_reduce_gradient_with_budget(p, node_budget.min(QUICK_NODE_BUDGET))?;
    // Reaching (1, 0) already proves the gradient unimodular.
    if !matches!(verdict, GradientVerdict::Reached { .. }) && !unimodular_gradient(p) {
        return Ok(CoordinateVerdict::NotCoordinate {
            reason: NotCoordinateReason::GradientNotUnimodular,
        });
    }
    if matches!(verdict, GradientVerdict::BudgetExhausted { .. }) && node_budget > QUICK_NODE_BUDGET {
        verdict = elementary_reduce_gradient_with_budget(p, node_budget)?;
    }
    match verdict {
        GradientVerdict::Reached { matrix, trace } => {
            let q = completion(p)?;
            let auto_sequence = straighten(p)?;
            let certificate = CoordCertificate {
                matrix,
                q,
                auto_sequence,
                trace,
            };
            verify_certificate(p, &certificate)?;
            Ok(CoordinateVerdict::Coordinate { certificate })
        }
        GradientVerdict::Stuck { final_pair, .. } => Ok(CoordinateVerdict::NotCoordinate {
            reason: NotCoordinateReason::ReductionStuck { final_pair },
        }),
        GradientVerdict::BudgetExhausted { explored } => Ok(CoordinateVerdict::Inconclusive { explored }),
    }
}

/// Applies the factors in order, each by substitution: `p <- p ∘ F`.
pub fn apply_sequence(p: &Polynomial, seq: &Decomposition) -> Result<Polynomial, CoordError> {
    let mut cur = p.clone();
    for f in seq.elementary_factors() {
        cur = f.to_map().apply(&cur)?;
    }
    Ok(cur)
}

/// Re-checks every part of a certificate from scratch.
pub fn verify_certificate(p: &Polynomial, cert: &CoordCertificate) -> Result<(), CoordError> {
    let grad = gradient_pair(p)?;
    check_matrix(&grad, &cert.matrix)?;
    let (_, last) = GradientTrace::replay(&grad, cert.trace.steps.clone());
    if !last[0].is_one() || !last[1].is_zero() {
        return Err(CoordError::CertificateFailed("trace does not end at (1, 0)".into()));
    }
    if cert.trace.steps.iter().any(|s| s.kind() == ReductionKind::Singular) {
        return Err(CoordError::CertificateFailed("singular step in an elementary trace".into()));
    }
    let jac = PolyMap::pair(p.clone(), cert.q.clone())?.jacobian_det()?;
    if jac.is_zero() || !jac.is_constant() {
        return Err(CoordError::CertificateFailed(format!("Jacobian of (p, q) is {jac}")));
    }
    cert.auto_sequence.validate()?;
    let x = Polynomial::var(2, 0);
    if apply_sequence(p, &cert.auto_sequence)? != x {
        return Err(CoordError::CertificateFailed("automorphism sequence does not reach x".into()));
    }
    Ok(())
}

/// `q` of degree below `deg p` (for nonlinear `p`) with `(p, q)` an
/// automorphism, built from the degree-reducing substitutions of
/// [`straighten`].
fn completion(p: &Polynomial) -> Result<Polynomial, CoordError> {
    let beta = straighten(p)?;
    // q = y ∘ beta^-1, computed without forming the first component.
    let mut q = Polynomial::var(2, 1);
    for f in beta.inverse().elementary_factors() {
        q = f.to_map().apply(&q)?;
    }
    let dp = p.degree_or_zero();
    if dp >= 2 {
        while q.degree_or_zero() >= dp {
            let dq = q.degree_or_zero();
            if dq % dp != 0 {
                break;
            }
            let Some(mu) = crate::tame::leading_form_multiplier(&q, p, dq / dp) else {
                break;
            };
            q = &q - &p.pow(dq / dp).scale(&mu);
        }
    } else {
        let a = p.coeff(&crate::poly::Monomial::new(&[1, 0]));
        q = if a.is_zero() {
            Polynomial::var(2, 0)
        } else {
            Polynomial::var(2, 1)
        };
    }
    let c = Polynomial::constant(2, q.coeff(&crate::poly::Monomial::one(2)));
    Ok(&q - &c)
}

fn sequence_for(p: &Polynomial, q: &Polynomial) -> Result<Decomposition, CoordError> {
    match decompose_automorphism(p, q)? {
        crate::tame::AutomorphismVerdict::Automorphism { decomposition } => Ok(decomposition.inverse()),
        crate::tame::AutomorphismVerdict::NotAutomorphism { reason, .. } => Err(CoordError::CertificateFailed(
            format!("completion ({p}, {q}) rejected: {reason}"),
        )),
    }
}

/// A polynomial `q` such that `(p, q)` is an automorphism of `K[x, y]`.
pub fn complete_to_basis(p: &Polynomial) -> Result<Polynomial, CoordError> {
    gradient_pair(p)?;
    if !unimodular_gradient(p) {
        return Err(CoordError::GradientNotUnimodular(p.to_string()));
    }
    let q = completion(p)?;
    let jac = PolyMap::pair(p.clone(), q.clone())?.jacobian_det()?;
    if jac.is_zero() || !jac.is_constant() {
        return Err(CoordError::CertificateFailed(format!("Jacobian of (p, q) is {jac}")));
    }
    sequence_for(p, &q)?;
    Ok(q)
}

/// Elementary automorphisms which, applied in order by substitution, take
/// `p` to `x`.
pub fn reduce_to_x1(p: &Polynomial) -> Result<Decomposition, CoordError> {
    complete_to_basis(p)?;
    let seq = straighten(p)?;
    if apply_sequence(p, &seq)? != Polynomial::var(2, 0) {
        return Err(CoordError::CertificateFailed("sequence does not reach x".into()));
    }
    Ok(seq)
}

#[cfg(test)]
mod tests;
