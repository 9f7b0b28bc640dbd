use serde::{Deserialize, Serialize};

use crate::poly::Polynomial;
use crate::rational::Rational;

/// `poly[reduced] <- poly[reduced] - mu * poly[other]^power`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnivariateStep {
    pub reduced: usize,
    pub mu: Rational,
    pub power: u32,
    #[serde(with = "crate::poly::univariate_text")]
    pub result: Polynomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NotGeneratingReason {
    /// Both polynomials are constant.
    BothConstant,
    /// Only one nonconstant polynomial is left and its degree exceeds one.
    SingleNonlinear { degree: u32 },
    /// Neither degree divides the other.
    DegreesIndivisible { deg_u: u32, deg_v: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum UnivariateVerdict {
    Generating {
        trace: Vec<UnivariateStep>,
        /// The degree-one element reached, as an index into the final pair.
        linear_index: usize,
        #[serde(with = "crate::poly::univariate_text")]
        linear: Polynomial,
    },
    NotGenerating {
        trace: Vec<UnivariateStep>,
        #[serde(flatten)]
        reason: NotGeneratingReason,
    },
}

impl UnivariateVerdict {
    pub fn is_generating(&self) -> bool {
        matches!(self, UnivariateVerdict::Generating { .. })
    }

    pub fn trace(&self) -> &[UnivariateStep] {
        match self {
            UnivariateVerdict::Generating { trace, .. } | UnivariateVerdict::NotGenerating { trace, .. } => trace,
        }
    }
}

/// Decides whether `K[u, v] = K[t]` for polynomials in one variable.
///
/// The higher-degree polynomial is reduced by a scalar multiple of a power
/// of the other until a degree-one element appears, a single nonlinear
/// polynomial remains, or the degrees stop dividing each other.
pub fn is_univariate_generating_pair(u: &Polynomial, v: &Polynomial) -> UnivariateVerdict {
    assert!(u.nvars() == 1 && v.nvars() == 1, "univariate input expected");
    let mut pair = [u.clone(), v.clone()];
    let mut trace = Vec::new();
    loop {
        let degs = [pair[0].degree_or_zero(), pair[1].degree_or_zero()];
        if let Some(i) = (0..2).find(|&i| degs[i] == 1) {
            return UnivariateVerdict::Generating {
                trace,
                linear_index: i,
                linear: pair[i].clone(),
            };
        }
        match (degs[0], degs[1]) {
            (0, 0) => {
                return UnivariateVerdict::NotGenerating {
                    trace,
                    reason: NotGeneratingReason::BothConstant,
                }
            }
            (0, d) | (d, 0) => {
                return UnivariateVerdict::NotGenerating {
                    trace,
                    reason: NotGeneratingReason::SingleNonlinear { degree: d },
                }
            }
            _ => {}
        }
        let (hi, lo) = if degs[0] >= degs[1] { (0, 1) } else { (1, 0) };
        if degs[hi] % degs[lo] != 0 {
            return UnivariateVerdict::NotGenerating {
                trace,
                reason: NotGeneratingReason::DegreesIndivisible {
                    deg_u: degs[0],
                    deg_v: degs[1],
                },
            };
        }
        let power = degs[hi] / degs[lo];
        let lopow = pair[lo].pow(power);
        let mu = pair[hi].lc().unwrap() / lopow.lc().unwrap();
        pair[hi] = &pair[hi] - &lopow.scale(&mu);
        debug_assert!(pair[hi].degree_or_zero() < degs[hi]);
        trace.push(UnivariateStep {
            reduced: hi,
            mu,
            power,
            result: pair[hi].clone(),
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_univariate;

    fn t(s: &str) -> Polynomial {
        parse_univariate(s).unwrap()
    }

    #[test]
    fn examples() {
        let v = is_univariate_generating_pair(&t("t^2"), &t("t^3"));
        assert_eq!(
            v,
            UnivariateVerdict::NotGenerating {
                trace: vec![],
                reason: NotGeneratingReason::DegreesIndivisible { deg_u: 2, deg_v: 3 }
            }
        );
        assert!(is_univariate_generating_pair(&t("t^2 + 1"), &t("t")).is_generating());
        let v = is_univariate_generating_pair(&t("t^2 + t"), &t("t^2"));
        match v {
            UnivariateVerdict::Generating { trace, linear, .. } => {
                assert_eq!(trace.len(), 1);
                assert_eq!(linear, t("t"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn degenerate_inputs() {
        assert!(!is_univariate_generating_pair(&t("3"), &t("5")).is_generating());
        assert!(!is_univariate_generating_pair(&t("t^2"), &t("5")).is_generating());
        assert!(is_univariate_generating_pair(&t("2*t + 1"), &t("0")).is_generating());
        // t^2 and t^4 + t: reduce to t, degree one.
        assert!(is_univariate_generating_pair(&t("t^4 + t"), &t("t^2")).is_generating());
        // t^2 and t^4 + t^2: reduces to a constant, leaving t^2 alone.
        assert!(!is_univariate_generating_pair(&t("t^4 + t^2"), &t("t^2")).is_generating());
    }
}
