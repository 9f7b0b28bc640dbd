//! Recognition and decomposition of automorphisms of `K[x, y]` into linear
//! maps and shears, and the generating-pair test for `K[t]`.

mod random;
mod univariate;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::poly::{Monomial, PolyError, PolyMap, Polynomial};
use crate::rational::Rational;

pub use random::{random_generating_pair, random_tame_automorphism, RandomTameConfig};
pub use univariate::{
    is_univariate_generating_pair, NotGeneratingReason, UnivariateStep, UnivariateVerdict,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TameError {
    #[error("automorphism decomposition needs two variables, found {0}")]
    NotBivariate(usize),
    #[error("invalid factor: {0}")]
    InvalidFactor(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A building block of a tame automorphism of `K[x, y]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ElementaryFactor {
    /// `(x, y) -> (m00 x + m01 y, m10 x + m11 y)`.
    Linear { matrix: [[Rational; 2]; 2] },
    /// `(x, y) -> (x + f(y), y)`; `f` may have a constant term.
    Shear { f: Polynomial },
    /// `(x, y) -> (y, x)`.
    Swap,
}

fn det2(m: &[[Rational; 2]; 2]) -> Rational {
    &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0])
}

impl ElementaryFactor {
    pub fn shear(f: Polynomial) -> Self {
        ElementaryFactor::Shear { f }
    }

    pub fn linear(matrix: [[Rational; 2]; 2]) -> Self {
        ElementaryFactor::Linear { matrix }
    }

    pub fn validate(&self) -> Result<(), TameError> {
        match self {
            ElementaryFactor::Linear { matrix } if det2(matrix).is_zero() => {
                Err(TameError::InvalidFactor("singular linear factor".into()))
            }
            ElementaryFactor::Shear { f } if f.nvars() != 2 || !f.is_univariate_in(1) => Err(
                TameError::InvalidFactor(format!("shear polynomial {f} must involve y only")),
            ),
            _ => Ok(()),
        }
    }

    pub fn to_map(&self) -> PolyMap {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let images = match self {
            ElementaryFactor::Linear { matrix: m } => vec![
                &x.scale(&m[0][0]) + &y.scale(&m[0][1]),
                &x.scale(&m[1][0]) + &y.scale(&m[1][1]),
            ],
            ElementaryFactor::Shear { f } => vec![&x + f, y],
            ElementaryFactor::Swap => vec![y, x],
        };
        PolyMap::new(images).unwrap()
    }

    pub fn inverse(&self) -> ElementaryFactor {
        match self {
            ElementaryFactor::Linear { matrix: m } => {
                let d = det2(m).recip();
                ElementaryFactor::Linear {
                    matrix: [
                        [&m[1][1] * &d, -(&m[0][1] * &d)],
                        [-(&m[1][0] * &d), &m[0][0] * &d],
                    ],
                }
            }
            ElementaryFactor::Shear { f } => ElementaryFactor::Shear { f: -f },
            ElementaryFactor::Swap => ElementaryFactor::Swap,
        }
    }

    /// True for linear factors and swaps; shears of degree at most one are
    /// affine but still reported as shears.
    pub fn is_linear(&self) -> bool {
        !matches!(self, ElementaryFactor::Shear { .. })
    }
}

impl fmt::Display for ElementaryFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementaryFactor::Linear { matrix: m } => {
                write!(f, "Linear[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
            }
            ElementaryFactor::Shear { f: g } => write!(f, "Shear(x + {g})"),
            ElementaryFactor::Swap => write!(f, "Swap"),
        }
    }
}

/// One factor of a decomposition, with the `(mu, d)` of the reduction
/// step that produced it when there was one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorRecord {
    #[serde(flatten)]
    pub factor: ElementaryFactor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
}

impl From<ElementaryFactor> for FactorRecord {
    fn from(factor: ElementaryFactor) -> Self {
        FactorRecord {
            factor,
            mu: None,
            d: None,
        }
    }
}

/// An ordered factor list `F1, ..., Fk` standing for `F1 ∘ ... ∘ Fk`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Decomposition {
    pub factors: Vec<FactorRecord>,
}

impl Decomposition {
    pub fn from_factors(fs: impl IntoIterator<Item = ElementaryFactor>) -> Self {
        Decomposition {
            factors: fs.into_iter().map(FactorRecord::from).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn elementary_factors(&self) -> impl DoubleEndedIterator<Item = &ElementaryFactor> + '_ {
        self.factors.iter().map(|r| &r.factor)
    }

    pub fn validate(&self) -> Result<(), TameError> {
        self.elementary_factors().try_for_each(|f| f.validate())
    }

    /// The composed map `F1 ∘ ... ∘ Fk`.
    pub fn compose(&self) -> PolyMap {
        // Folding from the right substitutes into the small factor maps.
        self.elementary_factors()
            .rev()
            .fold(PolyMap::identity(2), |acc, f| f.to_map().compose(&acc).unwrap())
    }

    /// Factor list of the inverse map, `Fk^-1, ..., F1^-1`.
    pub fn inverse(&self) -> Decomposition {
        Decomposition::from_factors(self.elementary_factors().rev().map(|f| f.inverse()))
    }
}

/// Two-sided inverse of the automorphism described by `d`.
pub fn invert_automorphism(d: &Decomposition) -> Result<PolyMap, TameError> {
    d.validate()?;
    Ok(d.inverse().compose())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum RejectReason {
    /// A component became constant.
    ComponentConstant,
    /// Neither degree divides the other.
    DegreeRatio { deg_g1: u32, deg_g2: u32 },
    /// `LF(g1) != mu * LF(g2)^d` for every scalar `mu`.
    LeadingFormMismatch { d: u32 },
    /// The affine base case has a singular linear part.
    LinearPartSingular,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::ComponentConstant => write!(f, "a component is constant"),
            RejectReason::DegreeRatio { deg_g1, deg_g2 } => {
                write!(f, "degree {deg_g1} is not a multiple of degree {deg_g2}")
            }
            RejectReason::LeadingFormMismatch { d } => write!(
                f,
                "leading form of g1 is not a scalar multiple of the leading form of g2 to the power {d}"
            ),
            RejectReason::LinearPartSingular => write!(f, "linear part is singular"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum AutomorphismVerdict {
    Automorphism {
        decomposition: Decomposition,
    },
    NotAutomorphism {
        #[serde(flatten)]
        reason: RejectReason,
        /// The pair at which the reduction stopped.
        stuck_at: PolyMap,
    },
}

impl AutomorphismVerdict {
    pub fn is_automorphism(&self) -> bool {
        matches!(self, AutomorphismVerdict::Automorphism { .. })
    }

    pub fn decomposition(&self) -> Option<&Decomposition> {
        match self {
            AutomorphismVerdict::Automorphism { decomposition } => Some(decomposition),
            _ => None,
        }
    }
}

/// The scalar `mu` with `LF(g1) = mu * LF(g2)^d`, if one exists. It is
/// unique because it must match the leading coefficients.
pub fn leading_form_multiplier(g1: &Polynomial, g2: &Polynomial, d: u32) -> Option<Rational> {
    let lf1 = g1.leading_form().ok()?;
    let lf2d = g2.leading_form().ok()?.pow(d);
    let mu = lf1.lc()? / lf2d.lc()?;
    (lf1 == lf2d.scale(&mu)).then_some(mu)
}

fn push_swap(out: &mut Vec<FactorRecord>) {
    if out.last().is_some_and(|r| r.factor == ElementaryFactor::Swap) {
        out.pop();
    } else {
        out.push(ElementaryFactor::Swap.into());
    }
}

/// Decomposes the map `(g1, g2)` into elementary factors, or explains why
/// it is not an automorphism.
pub fn decompose_automorphism(
    g1: &Polynomial,
    g2: &Polynomial,
) -> Result<AutomorphismVerdict, TameError> {
    for g in [g1, g2] {
        if g.nvars() != 2 {
            return Err(TameError::NotBivariate(g.nvars()));
        }
    }
    let mut factors: Vec<FactorRecord> = Vec::new();
    let (mut a, mut b) = (g1.clone(), g2.clone());
    let reject = |reason, a: Polynomial, b: Polynomial| {
        Ok(AutomorphismVerdict::NotAutomorphism {
            reason,
            stuck_at: PolyMap::pair(a, b).unwrap(),
        })
    };
    loop {
        if a.is_constant() || b.is_constant() {
            return reject(RejectReason::ComponentConstant, a, b);
        }
        let (na, nb) = (a.degree_or_zero(), b.degree_or_zero());
        if na <= 1 && nb <= 1 {
            match affine_factors(&a, &b) {
                Some(fs) => {
                    for f in fs {
                        if f == ElementaryFactor::Swap {
                            push_swap(&mut factors);
                        } else {
                            factors.push(f.into());
                        }
                    }
                    break;
                }
                None => return reject(RejectReason::LinearPartSingular, a, b),
            }
        }
        if na < nb {
            push_swap(&mut factors);
            std::mem::swap(&mut a, &mut b);
            continue;
        }
        let (na, nb) = (a.degree_or_zero(), b.degree_or_zero());
        if na % nb != 0 {
            return reject(RejectReason::DegreeRatio { deg_g1: na, deg_g2: nb }, a, b);
        }
        let d = na / nb;
        let Some(mu) = leading_form_multiplier(&a, &b, d) else {
            return reject(RejectReason::LeadingFormMismatch { d }, a, b);
        };
        let factor = if d == 1 {
            ElementaryFactor::Linear {
                matrix: [
                    [Rational::one(), mu.clone()],
                    [Rational::zero(), Rational::one()],
                ],
            }
        } else {
            ElementaryFactor::Shear {
                f: Polynomial::term(Monomial::var_power(2, 1, d), mu.clone()),
            }
        };
        a = &a - &b.pow(d).scale(&mu);
        debug_assert!(a.degree_or_zero() < na);
        factors.push(FactorRecord {
            factor,
            mu: Some(mu),
            d: Some(d),
        });
    }
    let decomposition = Decomposition { factors };
    let recomposed = decomposition.compose();
    assert!(
        recomposed.images()[0] == *g1 && recomposed.images()[1] == *g2,
        "decomposition does not recompose to the input"
    );
    Ok(AutomorphismVerdict::Automorphism { decomposition })
}

pub fn decompose_map(phi: &PolyMap) -> Result<AutomorphismVerdict, TameError> {
    if phi.arity() != 2 {
        return Err(TameError::NotBivariate(phi.arity()));
    }
    decompose_automorphism(&phi.images()[0], &phi.images()[1])
}

/// Factors of an affine pair: translations (as constant shears) followed
/// by the linear part. `None` if the linear part is singular.
fn affine_factors(a: &Polynomial, b: &Polynomial) -> Option<Vec<ElementaryFactor>> {
    let c = |p: &Polynomial, m: &[u32]| p.coeff(&Monomial::new(m));
    let matrix = [
        [c(a, &[1, 0]), c(a, &[0, 1])],
        [c(b, &[1, 0]), c(b, &[0, 1])],
    ];
    if det2(&matrix).is_zero() {
        return None;
    }
    let (c1, c2) = (c(a, &[0, 0]), c(b, &[0, 0]));
    let mut out = Vec::new();
    if !c1.is_zero() {
        out.push(ElementaryFactor::Shear {
            f: Polynomial::constant(2, c1),
        });
    }
    if !c2.is_zero() {
        out.push(ElementaryFactor::Swap);
        out.push(ElementaryFactor::Shear {
            f: Polynomial::constant(2, c2),
        });
        out.push(ElementaryFactor::Swap);
    }
    let identity = [
        [Rational::one(), Rational::zero()],
        [Rational::zero(), Rational::one()],
    ];
    if matrix == [[Rational::zero(), Rational::one()], [Rational::one(), Rational::zero()]] {
        out.push(ElementaryFactor::Swap);
    } else if matrix != identity {
        out.push(ElementaryFactor::Linear { matrix });
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_map, parse_polynomial};

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s).unwrap()
    }

    fn decompose(a: &str, b: &str) -> AutomorphismVerdict {
        decompose_automorphism(&p(a), &p(b)).unwrap()
    }

    #[test]
    fn single_shear() {
        let v = decompose("x + y^2", "y");
        let d = v.decomposition().unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.factors[0].factor, ElementaryFactor::shear(p("y^2")));
        assert_eq!(d.factors[0].mu, Some(Rational::one()));
        assert_eq!(d.factors[0].d, Some(2));
    }

    #[test]
    fn swap() {
        let v = decompose("y", "x");
        assert_eq!(v.decomposition().unwrap().factors[0].factor, ElementaryFactor::Swap);
    }

    #[test]
    fn rejects_leading_form_mismatch() {
        match decompose("x + x*y", "y") {
            AutomorphismVerdict::NotAutomorphism { reason, .. } => {
                assert_eq!(reason, RejectReason::LeadingFormMismatch { d: 2 })
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_other_reasons() {
        assert!(matches!(
            decompose("x^2", "y^3"),
            AutomorphismVerdict::NotAutomorphism { reason: RejectReason::DegreeRatio { .. }, .. }
        ));
        assert!(matches!(
            decompose("x + y", "2*x + 2*y"),
            AutomorphismVerdict::NotAutomorphism { reason: RejectReason::LinearPartSingular, .. }
        ));
        assert!(matches!(
            decompose("3", "y"),
            AutomorphismVerdict::NotAutomorphism { reason: RejectReason::ComponentConstant, .. }
        ));
        assert!(decompose_automorphism(&p("x3"), &p("y")).is_err());
    }

    #[test]
    fn affine_maps() {
        for (a, b) in [("x + 1", "y - 2"), ("2*x + y + 3", "x - y"), ("y + 1", "x"), ("x", "y")] {
            let v = decompose(a, b);
            let m = v.decomposition().unwrap().compose();
            assert_eq!(m, PolyMap::pair(p(a), p(b)).unwrap());
        }
        assert!(decompose("x", "y").decomposition().unwrap().is_empty());
    }

    #[test]
    fn mu_is_unique() {
        let g1 = p("3*x^2 + 12*x*y + 12*y^2 + x");
        let g2 = p("x + 2*y");
        assert_eq!(leading_form_multiplier(&g1, &g2, 2), Some(Rational::from(3)));
        assert_eq!(leading_form_multiplier(&g1, &g2, 1), None);
    }

    #[test]
    fn inverses() {
        let d = Decomposition::from_factors([ElementaryFactor::shear(p("y^2"))]);
        assert_eq!(invert_automorphism(&d).unwrap(), parse_map("(x - y^2, y)").unwrap());
        let m = [[Rational::from(2), Rational::from(1)], [Rational::from(1), Rational::from(1)]];
        let lin = ElementaryFactor::linear(m.clone());
        assert_eq!(lin.to_map().compose(&lin.inverse().to_map()).unwrap(), PolyMap::identity(2));
        let d = Decomposition::from_factors([
            ElementaryFactor::shear(p("y^3 - 1")),
            lin,
            ElementaryFactor::Swap,
            ElementaryFactor::shear(p("2*y^2")),
        ]);
        let f = d.compose();
        let g = invert_automorphism(&d).unwrap();
        assert!(f.compose(&g).unwrap().is_identity());
        assert!(g.compose(&f).unwrap().is_identity());
    }

    #[test]
    fn decomposition_json_round_trip() {
        let v = decompose("x + y^2 + 1", "y");
        let json = serde_json::to_string(&v).unwrap();
        let back: AutomorphismVerdict = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
        assert!(json.contains("\"kind\":\"shear\""));
    }
}
