use serde::{Deserialize, Serialize};

use super::RetractError;
use crate::groebner::{buchberger_bounded, GroebnerError};
use crate::poly::{Monomial, PolyMap, Polynomial};
use crate::rational::Rational;

/// S-pair reductions allowed in each Gröbner computation of the search.
pub const DEFAULT_WITNESS_BUDGET: usize = 2000;

/// Values tried, in order, for a coefficient the equations leave free.
const TRIAL_VALUES: [i64; 5] = [0, 1, -1, 2, -2];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RetractVerdict {
    /// `p(witness) = x`, checked by substitution.
    Retract { witness: PolyMap, degree: u32 },
    NoWitnessUpToDegree {
        max_degree: u32,
        /// Every degree up to this one was ruled out outright (the
        /// coefficient equations have no solution at all).
        excluded_through: Option<u32>,
        budget_exhausted: bool,
    },
}

impl RetractVerdict {
    pub fn is_retract(&self) -> bool {
        matches!(self, RetractVerdict::Retract { .. })
    }
}

/// `2 deg p`.
pub fn default_search_degree(p: &Polynomial) -> u32 {
    2 * p.degree_or_zero()
}

/// Whether `p(a, b) = x` for the witness `(a, b)`.
pub fn verify_witness(p: &Polynomial, witness: &PolyMap) -> bool {
    witness.arity() == 2 && witness.apply(p).is_ok_and(|v| v == Polynomial::var(2, 0))
}

fn monomials_up_to(d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for total in 0..=d {
        for i in 0..=total {
            out.push(Monomial::new(&[i, total - i]));
        }
    }
    out.sort();
    out
}

/// Coefficient equations of `p(a, b) - x` where `a`, `b` range over
/// polynomials of degree `<= d`. Unknown `k` is the coefficient of
/// `monos[k]` in `a` for `k < N`, and of `monos[k - N]` in `b` otherwise.
fn coefficient_equations(p: &Polynomial, monos: &[Monomial]) -> Result<Vec<Polynomial>, RetractError> {
    let n = monos.len();
    let nv = 2 + 2 * n;
    let generic = |offset: usize| {
        let mut g = Polynomial::zero(nv);
        for (k, m) in monos.iter().enumerate() {
            let mut e = vec![0u32; nv];
            e[0] = m.exp(0);
            e[1] = m.exp(1);
            e[2 + offset + k] = 1;
            g.add_term(Monomial::new(&e), &Rational::one());
        }
        g
    };
    let mut images = vec![generic(0), generic(n)];
    images.extend((2..nv).map(|i| Polynomial::var(nv, i)));
    let lifted = p.with_nvars(nv);
    let value = &lifted.substitute(&images)? - &Polynomial::var(nv, 0);
    let mut eqs: std::collections::BTreeMap<(u32, u32), Polynomial> = Default::default();
    for (m, c) in value.terms() {
        let key = (m.exp(0), m.exp(1));
        let rest = Monomial::new(&m.exps()[2..]);
        eqs.entry(key)
            .or_insert_with(|| Polynomial::zero(2 * n))
            .add_term(rest, c);
    }
    Ok(eqs.into_values().filter(|e| !e.is_zero()).collect())
}

fn is_unit(basis: &[Polynomial]) -> bool {
    basis.len() == 1 && basis[0].is_constant()
}

/// `c_k - v` read off a basis element, if some element has that form.
fn determined(basis: &[Polynomial]) -> Option<(usize, Rational)> {
    basis.iter().find_map(|g| {
        let (m, c) = g.lt()?;
        if m.degree() != 1 || g.num_terms() > 2 {
            return None;
        }
        let rest = &(g - &Polynomial::term(m.clone(), c.clone()));
        if !rest.is_constant() {
            return None;
        }
        let k = m.exps().iter().position(|e| *e == 1)?;
        Some((k, -(rest.constant_value().unwrap_or_else(Rational::zero) / c.clone())))
    })
}

fn fix(basis: &[Polynomial], k: usize, v: &Rational) -> Result<Vec<Polynomial>, RetractError> {
    let nv = basis.first().map_or(0, Polynomial::nvars);
    let images: Vec<Polynomial> = (0..nv)
        .map(|i| {
            if i == k {
                Polynomial::constant(nv, v.clone())
            } else {
                Polynomial::var(nv, i)
            }
        })
        .collect();
    basis
        .iter()
        .map(|g| g.substitute(&images).map_err(RetractError::from))
        .collect()
}

enum DegreeOutcome {
    Found(Vec<Rational>),
    /// The equations have no solution.
    Excluded,
    /// No rational point reached by trial values.
    NotFound,
    Budget,
}

fn gb(gens: &[Polynomial], budget: usize) -> Option<Vec<Polynomial>> {
    match buchberger_bounded(gens, Some(budget)) {
        Ok(b) => Some(b),
        Err(GroebnerError::BudgetExceeded(_)) => None,
        Err(GroebnerError::ZeroInput) => Some(Vec::new()),
    }
}

/// Finds a rational point of the ideal: coefficients forced by a linear
/// basis element are read off, the first remaining free coefficient is
/// set to a trial value, and the basis is recomputed.
fn solve(eqs: Vec<Polynomial>, unknowns: usize, budget: usize) -> Result<DegreeOutcome, RetractError> {
    let Some(mut basis) = gb(&eqs, budget) else {
        return Ok(DegreeOutcome::Budget);
    };
    if is_unit(&basis) {
        return Ok(DegreeOutcome::Excluded);
    }
    let mut values: Vec<Option<Rational>> = vec![None; unknowns];
    loop {
        while let Some((k, v)) = determined(&basis) {
            basis = fix(&basis, k, &v)?;
            values[k] = Some(v);
            basis = match gb(&basis, budget) {
                Some(b) => b,
                None => return Ok(DegreeOutcome::Budget),
            };
            if is_unit(&basis) {
                return Ok(DegreeOutcome::NotFound);
            }
        }
        let appears = |k: usize| basis.iter().any(|g| g.degree_in(k).unwrap_or(0) > 0);
        let Some(k) = (0..unknowns).find(|&k| values[k].is_none() && appears(k)) else {
            break;
        };
        let mut next = None;
        for t in TRIAL_VALUES {
            let v = Rational::from(t);
            let fixed = fix(&basis, k, &v)?;
            match gb(&fixed, budget) {
                None => return Ok(DegreeOutcome::Budget),
                Some(b) if !is_unit(&b) => {
                    next = Some((v, b));
                    break;
                }
                Some(_) => {}
            }
        }
        let Some((v, b)) = next else {
            return Ok(DegreeOutcome::NotFound);
        };
        values[k] = Some(v);
        basis = b;
    }
    Ok(DegreeOutcome::Found(
        values.into_iter().map(|v| v.unwrap_or_else(Rational::zero)).collect(),
    ))
}

/// Looks for `(a, b)` of degree at most `max_degree` with `p(a, b) = x`,
/// trying degrees `1, 2, ...` in turn. The coefficient equations are
/// handled with Gröbner bases; `budget` caps the S-pair reductions of each
/// basis computation.
pub fn retract_witness_search(p: &Polynomial, max_degree: u32, budget: usize) -> Result<RetractVerdict, RetractError> {
    if p.nvars() != 2 {
        return Err(RetractError::NotBivariate(p.nvars()));
    }
    if p.is_constant() {
        return Err(RetractError::ConstantPolynomial);
    }
    let mut excluded_through = None;
    let mut still_excluding = true;
    let mut budget_exhausted = false;
    for d in 1..=max_degree {
        let monos = monomials_up_to(d);
        let n = monos.len();
        let eqs = coefficient_equations(p, &monos)?;
        match solve(eqs, 2 * n, budget)? {
            DegreeOutcome::Found(values) => {
                let build = |offset: usize| {
                    Polynomial::from_terms(
                        2,
                        monos.iter().enumerate().map(|(k, m)| (m.clone(), values[offset + k].clone())),
                    )
                };
                let witness = PolyMap::pair(build(0), build(n))?;
                if !verify_witness(p, &witness) {
                    return Err(RetractError::CertificateFailed(format!(
                        "{witness} does not take {p} to x"
                    )));
                }
                return Ok(RetractVerdict::Retract { witness, degree: d });
            }
            DegreeOutcome::Excluded => {
                if still_excluding {
                    excluded_through = Some(d);
                }
            }
            DegreeOutcome::NotFound => still_excluding = false,
            DegreeOutcome::Budget => {
                still_excluding = false;
                budget_exhausted = true;
            }
        }
    }
    Ok(RetractVerdict::NoWitnessUpToDegree {
        max_degree,
        excluded_through,
        budget_exhausted,
    })
}
