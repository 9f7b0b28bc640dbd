use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{check_map, RetractError};
use crate::poly::{Monomial, PolyMap, Polynomial};
use crate::tame::{decompose_map, AutomorphismVerdict};

/// Iteration in [`stable_image_diagnostics`] stops once an iterate has
/// larger degree.
pub const ITERATE_DEGREE_CAP: u32 = 512;

/// A basis of `{p : φ(p) = p, deg p <= degree_bound}` in echelon form:
/// monic, distinct leading monomials, sorted ascending, each element free
/// of the other leading monomials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedSubspace {
    pub degree_bound: u32,
    pub basis: Vec<Polynomial>,
}

impl FixedSubspace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Dimension of the fixed polynomials of degree at most `d`.
    pub fn dimension_up_to(&self, d: u32) -> usize {
        self.basis.iter().filter(|p| p.degree_or_zero() <= d).count()
    }

    /// A fixed polynomial of positive degree, if any.
    pub fn nonconstant(&self) -> Option<&Polynomial> {
        self.basis.iter().find(|p| !p.is_constant())
    }
}

/// Reduced echelon form of a list of polynomials regarded as vectors.
fn echelonize(vectors: Vec<Polynomial>) -> Vec<Polynomial> {
    let mut rows: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
    for mut v in vectors {
        while let Some((m, c)) = v.lt().map(|(m, c)| (m.clone(), c.clone())) {
            match rows.get(&m) {
                Some(r) => v = &v - &r.scale(&c),
                None => {
                    rows.insert(m, v.monic());
                    break;
                }
            }
        }
    }
    let keys: Vec<Monomial> = rows.keys().cloned().collect();
    for k in &keys {
        let pivot = rows[k].clone();
        for other in &keys {
            if other == k {
                continue;
            }
            let c = rows[other].coeff(k);
            if !c.is_zero() {
                let updated = &rows[other] - &pivot.scale(&c);
                rows.insert(other.clone(), updated);
            }
        }
    }
    rows.into_values().collect()
}

/// Solves the linear system `φ(p) - p = 0` for `p` of degree at most `d`.
/// Every basis element is checked by substitution before it is returned.
pub fn find_fixed_polynomials(phi: &PolyMap, d: u32) -> Result<FixedSubspace, RetractError> {
    check_map(phi)?;
    let [u, v] = [&phi.images()[0], &phi.images()[1]];
    let mut pu = vec![Polynomial::one(2)];
    let mut pv = vec![Polynomial::one(2)];
    for k in 1..=d as usize {
        pu.push(&pu[k - 1] * u);
        pv.push(&pv[k - 1] * v);
    }
    let mut monos: Vec<Monomial> = (0..=d)
        .flat_map(|t| (0..=t).map(move |i| Monomial::new(&[i, t - i])))
        .collect();
    monos.sort();
    // Pivot rows keyed by the leading monomial of φ(p) - p, carrying p.
    let mut pivots: BTreeMap<Monomial, (Polynomial, Polynomial)> = BTreeMap::new();
    let mut kernel = Vec::new();
    for m in monos {
        let mut src = Polynomial::term(m.clone(), 1);
        let mut diff = &(&pu[m.exp(0) as usize] * &pv[m.exp(1) as usize]) - &src;
        while let Some((lm, lc)) = diff.lt().map(|(a, b)| (a.clone(), b.clone())) {
            match pivots.get(&lm) {
                Some((pd, ps)) => {
                    let c = &lc / pd.lc().unwrap();
                    diff = &diff - &pd.scale(&c);
                    src = &src - &ps.scale(&c);
                }
                None => break,
            }
        }
        match diff.lm().cloned() {
            Some(lm) => {
                pivots.insert(lm, (diff, src));
            }
            None => kernel.push(src),
        }
    }
    let basis = echelonize(kernel);
    for p in &basis {
        if &phi.apply(p)? != p {
            return Err(RetractError::CertificateFailed(format!("{p} is not fixed by {phi}")));
        }
    }
    Ok(FixedSubspace { degree_bound: d, basis })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterateInfo {
    pub k: usize,
    /// Degrees of `φ^k(x)` and `φ^k(y)`.
    pub degrees: [u32; 2],
    pub constant: [bool; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StableImageBranch {
    /// `φ` is an automorphism, so every iterate is onto.
    Automorphism,
    /// Unit Jacobian but no decomposition: the stable image would have to
    /// be `K`. Reaching this branch would contradict the Jacobian
    /// conjecture.
    UnitJacobianNonAutomorphism,
    /// The Jacobian is not a nonzero constant; nothing is claimed.
    NoClaim,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableImageReport {
    pub is_automorphism: bool,
    pub jacobian_unit: bool,
    pub branch: StableImageBranch,
    pub iterates: Vec<IterateInfo>,
    /// Set when iteration stopped before `k_max` on the degree cap.
    pub truncated: bool,
    /// Entry `d` is the dimension of the fixed polynomials of degree `<= d`.
    pub fixed_dimensions: Vec<usize>,
}

/// Degrees of the iterates `φ^k`, `k <= k_max`, the fixed-subspace
/// dimensions up to degree `d`, and the automorphism test. The stable
/// image itself is not computed.
pub fn stable_image_diagnostics(phi: &PolyMap, k_max: usize, d: u32) -> Result<StableImageReport, RetractError> {
    check_map(phi)?;
    let is_automorphism = decompose_map(phi)?.is_automorphism();
    let jacobian_unit = phi.is_jacobian_unit()?;
    let mut iterates = Vec::new();
    let mut cur = phi.clone();
    let mut truncated = false;
    for k in 1..=k_max.max(1) {
        let imgs = cur.images();
        iterates.push(IterateInfo {
            k,
            degrees: [imgs[0].degree_or_zero(), imgs[1].degree_or_zero()],
            constant: [imgs[0].is_constant(), imgs[1].is_constant()],
        });
        if k == k_max {
            break;
        }
        if cur.degree().saturating_mul(phi.degree()) > ITERATE_DEGREE_CAP {
            truncated = true;
            break;
        }
        cur = cur.compose(phi)?;
    }
    let fixed = find_fixed_polynomials(phi, d)?;
    let branch = if is_automorphism {
        StableImageBranch::Automorphism
    } else if jacobian_unit {
        StableImageBranch::UnitJacobianNonAutomorphism
    } else {
        StableImageBranch::NoClaim
    };
    Ok(StableImageReport {
        is_automorphism,
        jacobian_unit,
        branch,
        iterates,
        truncated,
        fixed_dimensions: (0..=d).map(|e| fixed.dimension_up_to(e)).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JcStatus {
    /// The Jacobian determinant is not a nonzero constant.
    HypothesisNotMet,
    /// Unit Jacobian, but no nonconstant fixed polynomial up to the bound.
    NoFixedPolynomial,
    /// Unit Jacobian, a nonconstant fixed polynomial, and an automorphism.
    Consistent,
    /// Unit Jacobian and a nonconstant fixed polynomial, yet the map does
    /// not decompose.
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JcReport {
    pub jacobian: Polynomial,
    pub jacobian_unit: bool,
    pub fixed: FixedSubspace,
    pub automorphism: AutomorphismVerdict,
    pub status: JcStatus,
    pub inconsistency: bool,
}

/// Checks that a unit-Jacobian map fixing a nonconstant polynomial is an
/// automorphism. Fixed polynomials are sought up to degree `d`, by default
/// `2 deg φ`.
pub fn jc_harness(phi: &PolyMap, d: Option<u32>) -> Result<JcReport, RetractError> {
    check_map(phi)?;
    let jacobian = phi.jacobian_det()?;
    let jacobian_unit = !jacobian.is_zero() && jacobian.is_constant();
    let fixed = find_fixed_polynomials(phi, d.unwrap_or(2 * phi.degree()))?;
    let automorphism = decompose_map(phi)?;
    let status = match (jacobian_unit, fixed.nonconstant().is_some(), automorphism.is_automorphism()) {
        (false, _, _) => JcStatus::HypothesisNotMet,
        (true, false, _) => JcStatus::NoFixedPolynomial,
        (true, true, true) => JcStatus::Consistent,
        (true, true, false) => JcStatus::Inconsistent,
    };
    Ok(JcReport {
        jacobian,
        jacobian_unit,
        fixed,
        automorphism,
        status,
        inconsistency: status == JcStatus::Inconsistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_map, parse_polynomial};

    fn m(s: &str) -> PolyMap {
        parse_map(s).unwrap()
    }

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s).unwrap()
    }

    #[test]
    fn fixed_examples() {
        let f = find_fixed_polynomials(&PolyMap::identity(2), 3).unwrap();
        assert_eq!(f.dimension(), 10);
        let f = find_fixed_polynomials(&m("(x + y^2, y)"), 3).unwrap();
        for q in ["1", "y", "y^2", "y^3"] {
            assert!(f.basis.contains(&p(q)), "{q}");
        }
        assert_eq!(f.dimension(), 4);
        let f = find_fixed_polynomials(&m("(x, 0)"), 2).unwrap();
        assert_eq!(f.basis, vec![p("1"), p("x"), p("x^2")]);
    }

    #[test]
    fn fixed_combination() {
        // The swap fixes x + y and xy but neither x nor y.
        let f = find_fixed_polynomials(&m("(y, x)"), 2).unwrap();
        assert_eq!(f.dimension(), 4);
        assert!(f.basis.iter().all(|q| m("(y, x)").apply(q).unwrap() == *q));
        assert_eq!(f.dimension_up_to(1), 2);
    }

    #[test]
    fn stable_image_examples() {
        let r = stable_image_diagnostics(&m("(x + y^2, y)"), 3, 2).unwrap();
        assert_eq!(r.branch, StableImageBranch::Automorphism);
        let r = stable_image_diagnostics(&m("(x^2, y^2)"), 4, 2).unwrap();
        assert!(!r.is_automorphism);
        assert_eq!(r.branch, StableImageBranch::NoClaim);
        let degs: Vec<u32> = r.iterates.iter().map(|i| i.degrees[0]).collect();
        assert_eq!(degs, vec![2, 4, 8, 16]);
        let r = stable_image_diagnostics(&m("(0, 0)"), 3, 2).unwrap();
        assert!(r.iterates.iter().all(|i| i.constant == [true, true]));
        assert_eq!(r.fixed_dimensions, vec![1, 1, 1]);
    }

    #[test]
    fn jc_examples() {
        let r = jc_harness(&m("(x + y^2, y)"), None).unwrap();
        assert_eq!(r.status, JcStatus::Consistent);
        assert!(r.fixed.basis.contains(&p("y")));
        let r = jc_harness(&m("(x + x^2*y, y)"), None).unwrap();
        assert_eq!(r.status, JcStatus::HypothesisNotMet);
        assert_eq!(r.jacobian, p("1 + 2*x*y"));
        let r = jc_harness(&PolyMap::identity(2), None).unwrap();
        assert_eq!(r.status, JcStatus::Consistent);
        assert!(!r.inconsistency);
    }
}
