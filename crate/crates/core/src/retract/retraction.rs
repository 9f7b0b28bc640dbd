use serde::{Deserialize, Serialize};

use super::{check_map, RetractError};
use crate::poly::{PolyMap, Polynomial};
use crate::rational::Rational;
use crate::tame::leading_form_multiplier;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "image", rename_all = "snake_case")]
pub enum RetractImage {
    /// The retraction is the identity.
    WholeAlgebra,
    /// Both images are constants.
    Constants,
    /// The image is `K[generator]`.
    Generated { generator: Polynomial },
    /// A proper retract whose generator was not found.
    GeneratorNotLocated,
}

/// An idempotent endomorphism of `K[x, y]` with its image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Retraction {
    pub map: PolyMap,
    /// `φ(φ(x)), φ(φ(y))`, equal to the images of `map`.
    pub squared: PolyMap,
    #[serde(flatten)]
    pub image: RetractImage,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RetractionVerdict {
    Retraction { retraction: Retraction },
    NotRetraction { squared: PolyMap },
}

impl RetractionVerdict {
    pub fn is_retraction(&self) -> bool {
        matches!(self, RetractionVerdict::Retraction { .. })
    }
}

fn square(phi: &PolyMap) -> Result<PolyMap, RetractError> {
    let imgs = phi
        .images()
        .iter()
        .map(|p| phi.apply(p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PolyMap::new(imgs)?)
}

/// Coefficients `c_0, c_1, ...` with `u = Σ c_k h^k`, if `u ∈ K[h]`.
pub fn subalgebra_coefficients(u: &Polynomial, h: &Polynomial) -> Option<Vec<Rational>> {
    let dh = h.degree()?;
    if dh == 0 {
        return u.constant_value().map(|c| vec![c]);
    }
    let mut rest = u.clone();
    let mut coeffs: Vec<Rational> = Vec::new();
    while !rest.is_constant() {
        let du = rest.degree_or_zero();
        if du % dh != 0 {
            return None;
        }
        let k = du / dh;
        let mu = leading_form_multiplier(&rest, h, k)?;
        if coeffs.len() <= k as usize {
            coeffs.resize(k as usize + 1, Rational::zero());
        }
        coeffs[k as usize] = mu.clone();
        rest = &rest - &h.pow(k).scale(&mu);
    }
    if coeffs.is_empty() {
        coeffs.push(Rational::zero());
    }
    coeffs[0] = rest.constant_value().unwrap_or_else(Rational::zero);
    Some(coeffs)
}

/// Locates `h` with `K[u, v] = K[h]` by cancelling leading forms, as for a
/// univariate generating pair.
fn image_generator(u: &Polynomial, v: &Polynomial) -> Option<Polynomial> {
    let (mut a, mut b) = (u.clone(), v.clone());
    let h = loop {
        if a.is_constant() {
            break b;
        }
        if b.is_constant() {
            break a;
        }
        if a.degree_or_zero() < b.degree_or_zero() {
            std::mem::swap(&mut a, &mut b);
        }
        let (da, db) = (a.degree_or_zero(), b.degree_or_zero());
        if da % db != 0 {
            return None;
        }
        let mu = leading_form_multiplier(&a, &b, da / db)?;
        a = &a - &b.pow(da / db).scale(&mu);
    };
    let h = &h - &Polynomial::constant(2, h.coeff(&crate::poly::Monomial::one(2)));
    (subalgebra_coefficients(u, &h).is_some() && subalgebra_coefficients(v, &h).is_some()).then_some(h)
}

fn classify_image(phi: &PolyMap) -> RetractImage {
    let [u, v] = [&phi.images()[0], &phi.images()[1]];
    if phi.is_identity() {
        return RetractImage::WholeAlgebra;
    }
    match (u.is_constant(), v.is_constant()) {
        (true, true) => RetractImage::Constants,
        (false, true) => RetractImage::Generated { generator: u.clone() },
        (true, false) => RetractImage::Generated { generator: v.clone() },
        (false, false) => match image_generator(u, v) {
            Some(h) if phi.apply(&h).ok().as_ref() == Some(&h) => RetractImage::Generated { generator: h },
            _ => RetractImage::GeneratorNotLocated,
        },
    }
}

/// Checks `φ ∘ φ = φ` on both variables and, when it holds, describes the
/// image.
pub fn verify_retraction(phi: &PolyMap) -> Result<RetractionVerdict, RetractError> {
    check_map(phi)?;
    let squared = square(phi)?;
    if &squared != phi {
        return Ok(RetractionVerdict::NotRetraction { squared });
    }
    Ok(RetractionVerdict::Retraction {
        retraction: Retraction {
            map: phi.clone(),
            squared,
            image: classify_image(phi),
        },
    })
}

/// The retraction `x -> x + y q, y -> 0` onto `K[x + y q]`.
pub fn normal_form_retraction(q: &Polynomial) -> Result<Retraction, RetractError> {
    if q.nvars() != 2 {
        return Err(RetractError::NotBivariate(q.nvars()));
    }
    let (x, y) = (Polynomial::var(2, 0), Polynomial::var(2, 1));
    let p = &x + &(&y * q);
    let map = PolyMap::pair(p.clone(), Polynomial::zero(2))?;
    let squared = square(&map)?;
    if squared != map {
        return Err(RetractError::CertificateFailed(format!("{map} is not idempotent")));
    }
    Ok(Retraction {
        map,
        squared,
        image: RetractImage::Generated { generator: p },
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
    fn verify_examples() {
        match verify_retraction(&m("(x + y*x^2, 0)")).unwrap() {
            RetractionVerdict::Retraction { retraction } => {
                assert_eq!(retraction.image, RetractImage::Generated { generator: p("x + x^2*y") });
            }
            other => panic!("{other:?}"),
        }
        match verify_retraction(&m("(x, y)")).unwrap() {
            RetractionVerdict::Retraction { retraction } => assert_eq!(retraction.image, RetractImage::WholeAlgebra),
            other => panic!("{other:?}"),
        }
        assert!(!verify_retraction(&m("(y, x)")).unwrap().is_retraction());
        assert!(verify_retraction(&m("(1, 2)")).unwrap().is_retraction());
    }

    #[test]
    fn generator_of_conjugated_retraction() {
        let alpha = m("(x, y + x^2)");
        let alpha_inv = m("(x, y - x^2)");
        let rho = m("(x + y*x^2, 0)");
        let images = [p("x"), p("y")]
            .iter()
            .map(|v| alpha_inv.apply(&rho.apply(&alpha.apply(v).unwrap()).unwrap()).unwrap())
            .collect();
        let phi = PolyMap::new(images).unwrap();
        assert!(phi.images().iter().all(|c| !c.is_constant()));
        let RetractionVerdict::Retraction { retraction } = verify_retraction(&phi).unwrap() else {
            panic!("not idempotent");
        };
        let RetractImage::Generated { generator } = retraction.image else {
            panic!("no generator");
        };
        assert_eq!(phi.apply(&generator).unwrap(), generator);
        for c in phi.images() {
            assert!(subalgebra_coefficients(c, &generator).is_some());
        }
    }

    #[test]
    fn normal_form_examples() {
        let r = normal_form_retraction(&p("x^2")).unwrap();
        assert_eq!(r.map, m("(x + x^2*y, 0)"));
        let r = normal_form_retraction(&Polynomial::zero(2)).unwrap();
        assert_eq!(r.map, m("(x, 0)"));
        let r = normal_form_retraction(&Polynomial::one(2)).unwrap();
        assert_eq!(r.map, m("(x + y, 0)"));
        assert_eq!(r.squared, r.map);
    }

    #[test]
    fn subalgebra_membership() {
        let h = p("x + x^2*y");
        let u = &(&h.pow(3).scale(&Rational::from(2)) - &h) + &Polynomial::constant(2, 5);
        assert_eq!(
            subalgebra_coefficients(&u, &h).unwrap(),
            vec![Rational::from(5), Rational::from(-1), Rational::zero(), Rational::from(2)]
        );
        assert!(subalgebra_coefficients(&p("x"), &h).is_none());
    }
}
