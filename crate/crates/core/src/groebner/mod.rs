//! S-polynomials, Buchberger completion and the regular/singular
//! classification of reduction steps.

mod ge2;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::poly::{Monomial, Polynomial};
use crate::rational::Rational;

pub use ge2::{GEFactor, GEMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroebnerError {
    #[error("S-polynomial and reduction classification need nonzero inputs")]
    ZeroInput,
    #[error("Buchberger completion exceeded its budget of {0} S-pair reductions")]
    BudgetExceeded(usize),
}

/// `S(p, q)` together with the data it was built from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SPolynomial {
    pub value: Polynomial,
    /// Least common multiple of the two leading monomials.
    pub lcm: Polynomial,
    pub lt_p: Polynomial,
    pub lt_q: Polynomial,
    /// Cofactors `L / lt(p)` and `L / lt(q)`, so `value = u*p - v*q`.
    pub u: Polynomial,
    pub v: Polynomial,
}

/// `S(p, q) = L/lt(p) * p - L/lt(q) * q` with `L = lcm(lm(p), lm(q))`.
pub fn s_polynomial(p: &Polynomial, q: &Polynomial) -> Result<SPolynomial, GroebnerError> {
    let (cp, mp) = p.leading_term().map_err(|_| GroebnerError::ZeroInput)?;
    let (cq, mq) = q.leading_term().map_err(|_| GroebnerError::ZeroInput)?;
    let l = mp.lcm(&mq);
    let u = Polynomial::term(mp.divide_into(&l).unwrap(), cp.recip());
    let v = Polynomial::term(mq.divide_into(&l).unwrap(), cq.recip());
    let value = &(&u * p) - &(&v * q);
    Ok(SPolynomial {
        value,
        lcm: Polynomial::term(l, Rational::one()),
        lt_p: Polynomial::term(mp, cp),
        lt_q: Polynomial::term(mq, cq),
        u,
        v,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionKind {
    Regular,
    Singular,
}

/// Regular iff one leading monomial divides the other.
pub fn classify_reduction(p: &Polynomial, q: &Polynomial) -> Result<ReductionKind, GroebnerError> {
    let mp = p.lm().ok_or(GroebnerError::ZeroInput)?;
    let mq = q.lm().ok_or(GroebnerError::ZeroInput)?;
    if mp.divides(mq) || mq.divides(mp) {
        Ok(ReductionKind::Regular)
    } else {
        Ok(ReductionKind::Singular)
    }
}

/// One step applied to a pair of polynomials `(a_0, a_1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReductionStep {
    /// `a_target <- scalar * a_target - multiplier * a_source`.
    Regular {
        target: usize,
        source: usize,
        multiplier: Polynomial,
        scalar: Rational,
    },
    /// `a_replaced <- S(a_i, a_j)` for the ordered pair `(i, j)`.
    Singular {
        pair: (usize, usize),
        replaced: usize,
        spoly: SPolynomial,
    },
    /// `a_index <- factor * a_index`.
    Scale { index: usize, factor: Rational },
    /// Exchange the two components.
    Swap,
}

impl ReductionStep {
    /// Applies the step to `pair`, returning the new pair.
    pub fn apply(&self, pair: &[Polynomial; 2]) -> [Polynomial; 2] {
        let mut out = pair.clone();
        match self {
            ReductionStep::Regular {
                target,
                source,
                multiplier,
                scalar,
            } => {
                out[*target] = &pair[*target].scale(scalar) - &(multiplier * &pair[*source]);
            }
            ReductionStep::Singular { pair: (i, j), replaced, .. } => {
                // Recomputed rather than trusted, so replays check the record.
                let s = s_polynomial(&pair[*i], &pair[*j]).expect("nonzero pair");
                out[*replaced] = s.value;
            }
            ReductionStep::Scale { index, factor } => {
                out[*index] = pair[*index].scale(factor);
            }
            ReductionStep::Swap => out.swap(0, 1),
        }
        out
    }

    pub fn kind(&self) -> ReductionKind {
        match self {
            ReductionStep::Singular { .. } => ReductionKind::Singular,
            _ => ReductionKind::Regular,
        }
    }

    /// The matrix realizing this step in the row-vector convention, when
    /// it lies in GE2 (every step except a singular one).
    pub fn ge_factors(&self) -> Option<Vec<GEFactor>> {
        match self {
            ReductionStep::Regular {
                target,
                source,
                multiplier,
                scalar,
            } => {
                let mut fs = Vec::new();
                if !scalar.is_one() {
                    fs.push(GEFactor::diagonal_at(*target, scalar.clone()));
                }
                if !multiplier.is_zero() {
                    fs.push(GEFactor::Elementary {
                        row: *source,
                        col: *target,
                        entry: -multiplier,
                    });
                }
                Some(fs)
            }
            ReductionStep::Scale { index, factor } => Some(vec![GEFactor::diagonal_at(*index, factor.clone())]),
            ReductionStep::Swap => Some(GEFactor::swap_factors()),
            ReductionStep::Singular { .. } => None,
        }
    }
}

fn normalize(p: Polynomial) -> Polynomial {
    p.primitive()
}

/// Reduced Gröbner basis of the ideal generated by `gens`, monic and sorted
/// by ascending leading monomial. The zero ideal gives an empty basis.
pub fn buchberger(gens: &[Polynomial]) -> Vec<Polynomial> {
    buchberger_bounded(gens, None).expect("no budget set")
}

/// [`buchberger`] with at most `max_reductions` S-pair reductions. A unit
/// ideal is reported as `{1}` as soon as a nonzero constant appears.
pub fn buchberger_bounded(
    gens: &[Polynomial],
    max_reductions: Option<usize>,
) -> Result<Vec<Polynomial>, GroebnerError> {
    let nonzero: Vec<Polynomial> = gens.iter().filter(|p| !p.is_zero()).cloned().collect();
    let Some(first) = nonzero.first() else {
        return Ok(Vec::new());
    };
    let nvars = first.nvars();
    let unit = || vec![Polynomial::one(nvars)];
    if nonzero.iter().any(|p| p.is_constant()) {
        return Ok(unit());
    }

    let mut basis: Vec<Polynomial> = Vec::new();
    // Pairs keyed by (lcm, i, j) so the smallest lcm is taken first.
    let mut pairs: BTreeSet<(Monomial, usize, usize)> = BTreeSet::new();
    let add = |basis: &mut Vec<Polynomial>,
                   pairs: &mut BTreeSet<(Monomial, usize, usize)>,
                   g: Polynomial| {
        let k = basis.len();
        let mk = g.lm().unwrap().clone();
        for (i, b) in basis.iter().enumerate() {
            let mi = b.lm().unwrap();
            pairs.insert((mi.lcm(&mk), i, k));
        }
        basis.push(g);
    };

    for g in nonzero {
        let r = g.reduce(&basis);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(unit());
        }
        add(&mut basis, &mut pairs, normalize(r));
    }

    let mut reductions = 0usize;
    while let Some((l, i, j)) = pairs.pop_first() {
        let (mi, mj) = (basis[i].lm().unwrap(), basis[j].lm().unwrap());
        if mi.is_coprime(mj) {
            continue;
        }
        // Chain criterion: skip if some third element's leading monomial
        // divides the lcm and both of its pairs were already handled.
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].lm().unwrap().divides(&l)
                && !pairs.contains(&pair_key(&basis, i, k))
                && !pairs.contains(&pair_key(&basis, j, k))
        });
        if chain {
            continue;
        }
        if let Some(max) = max_reductions {
            if reductions >= max {
                return Err(GroebnerError::BudgetExceeded(max));
            }
        }
        reductions += 1;
        let s = s_polynomial(&basis[i], &basis[j]).unwrap().value;
        let r = s.reduce(&basis);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(unit());
        }
        add(&mut basis, &mut pairs, normalize(r));
    }
    Ok(interreduce(basis))
}

fn pair_key(basis: &[Polynomial], a: usize, b: usize) -> (Monomial, usize, usize) {
    let (i, j) = if a < b { (a, b) } else { (b, a) };
    let l = basis[i].lm().unwrap().lcm(basis[j].lm().unwrap());
    (l, i, j)
}

/// Minimal, fully reduced, monic form of a Gröbner basis.
fn interreduce(mut basis: Vec<Polynomial>) -> Vec<Polynomial> {
    basis.sort_by(|a, b| a.lm().cmp(&b.lm()));
    let mut minimal: Vec<Polynomial> = Vec::new();
    for g in basis {
        let lm = g.lm().unwrap();
        if minimal.iter().any(|h| h.lm().unwrap().divides(lm)) {
            continue;
        }
        minimal.push(g);
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, p)| p.clone())
            .collect();
        let r = minimal[k].reduce(&others);
        out.push(r.monic());
    }
    out.sort_by(|a, b| a.lm().cmp(&b.lm()));
    out
}

/// True iff `1` lies in the ideal generated by `gens`.
pub fn contains_one(gens: &[Polynomial]) -> bool {
    let basis = buchberger(gens);
    basis.len() == 1 && basis[0].is_constant()
}

/// Normal form of `p` modulo a Gröbner basis.
pub fn reduce_mod_basis(p: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    p.reduce(basis)
}

/// Direct check of the Gröbner property: every S-polynomial of a pair of
/// elements reduces to zero modulo the set.
pub fn is_groebner_basis(basis: &[Polynomial]) -> bool {
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            let s = match s_polynomial(&basis[i], &basis[j]) {
                Ok(s) => s.value,
                Err(_) => return false,
            };
            if !s.reduce(basis).is_zero() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s).unwrap()
    }

    #[test]
    fn s_polynomial_examples() {
        let s = s_polynomial(&p("2*x*y + 1"), &p("x^2")).unwrap();
        assert_eq!(s.value, p("1/2*x"));
        assert_eq!(s.lcm, p("x^2*y"));
        assert!(s_polynomial(&p("x + y"), &p("x + y")).unwrap().value.is_zero());
        assert!(s_polynomial(&p("x"), &p("y")).unwrap().value.is_zero());
        assert_eq!(
            s_polynomial(&Polynomial::zero(2), &p("x")),
            Err(GroebnerError::ZeroInput)
        );
    }

    #[test]
    fn classification() {
        assert_eq!(classify_reduction(&p("2*x*y + 1"), &p("x^2")).unwrap(), ReductionKind::Singular);
        assert_eq!(classify_reduction(&p("x^2*y"), &p("x")).unwrap(), ReductionKind::Regular);
        assert_eq!(classify_reduction(&p("x"), &p("x")).unwrap(), ReductionKind::Regular);
    }

    #[test]
    fn buchberger_examples() {
        assert_eq!(buchberger(&[p("x"), p("y")]), vec![p("y"), p("x")]);
        assert_eq!(buchberger(&[p("1 + 2*x*y"), p("x^2")]), vec![p("1")]);
        assert_eq!(buchberger(&[p("3*x^2")]), vec![p("x^2")]);
        let gb = buchberger(&[p("x^2 - y"), p("x*y - 1")]);
        assert!(is_groebner_basis(&gb));
    }

    #[test]
    fn unit_ideal() {
        assert!(contains_one(&[p("1 + 2*x*y"), p("x^2")]));
        let witness = &(&p("1 + 2*x*y") * &p("1 - 2*x*y")) + &(&p("4*y^2") * &p("x^2"));
        assert!(witness.is_one());
        assert!(!contains_one(&[p("x"), p("y")]));
        assert!(contains_one(&[p("5")]));
    }

    #[test]
    fn normal_forms() {
        assert!(reduce_mod_basis(&p("x^2*y"), &[p("x^2")]).is_zero());
        assert_eq!(reduce_mod_basis(&p("x + 1"), &[p("y")]), p("x + 1"));
        assert!(reduce_mod_basis(&p("x^3 + y"), &[p("1")]).is_zero());
    }

    #[test]
    fn budget_is_reported() {
        let gens = [p("x^3 - 2*x*y"), p("x^2*y - 2*y^2 + x")];
        let r = buchberger_bounded(&gens, Some(0));
        assert_eq!(r, Err(GroebnerError::BudgetExceeded(0)));
        assert!(is_groebner_basis(&buchberger(&gens)));
    }
}
