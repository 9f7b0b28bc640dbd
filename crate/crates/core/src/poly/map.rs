use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::polynomial::Polynomial;
use super::PolyError;

/// An endomorphism of `K[x1..xn]`, given by the images of the variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMap {
    images: Vec<Polynomial>,
}

impl PolyMap {
    pub fn new(images: Vec<Polynomial>) -> Result<Self, PolyError> {
        let n = images.len();
        if let Some(bad) = images.iter().find(|p| p.nvars() != n) {
            return Err(PolyError::ArityMismatch {
                expected: n,
                found: bad.nvars(),
            });
        }
        Ok(PolyMap { images })
    }

    /// The pair map `(f, g)` on `K[x, y]`.
    pub fn pair(f: Polynomial, g: Polynomial) -> Result<Self, PolyError> {
        Self::new(vec![f, g])
    }

    pub fn identity(n: usize) -> Self {
        PolyMap {
            images: (0..n).map(|i| Polynomial::var(n, i)).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn into_images(self) -> Vec<Polynomial> {
        self.images
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.arity())
    }

    /// Maximum total degree of the images (zero images count as 0).
    pub fn degree(&self) -> u32 {
        self.images.iter().map(|p| p.degree_or_zero()).max().unwrap_or(0)
    }

    /// The algebra endomorphism applied to `p`, i.e. `p(images)`.
    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial, PolyError> {
        p.substitute(&self.images)
    }

    /// `self ∘ other` as maps of points: component `i` is `self_i(other)`.
    pub fn compose(&self, other: &PolyMap) -> Result<PolyMap, PolyError> {
        if self.arity() != other.arity() {
            return Err(PolyError::ArityMismatch {
                expected: self.arity(),
                found: other.arity(),
            });
        }
        let images = self
            .images
            .iter()
            .map(|p| p.substitute(&other.images))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PolyMap { images })
    }

    /// Jacobian matrix `J[i][j] = d images[i] / d x_j`.
    pub fn jacobian(&self) -> Vec<Vec<Polynomial>> {
        self.images.iter().map(|p| p.gradient()).collect()
    }

    /// Determinant of the Jacobian of a map of `K[x, y]`.
    pub fn jacobian_det(&self) -> Result<Polynomial, PolyError> {
        if self.arity() != 2 {
            return Err(PolyError::NotBivariate(self.arity()));
        }
        let j = self.jacobian();
        Ok(&(&j[0][0] * &j[1][1]) - &(&j[0][1] * &j[1][0]))
    }

    /// True iff the Jacobian determinant is a nonzero constant.
    pub fn is_jacobian_unit(&self) -> Result<bool, PolyError> {
        let d = self.jacobian_det()?;
        Ok(!d.is_zero() && d.is_constant())
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyMap{self}")
    }
}

impl Serialize for PolyMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PolyMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        super::parse_map(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_map, parse_polynomial};

    fn m(s: &str) -> PolyMap {
        parse_map(s).unwrap()
    }

    #[test]
    fn shears_cancel() {
        let c = m("(x + y^2, y)").compose(&m("(x - y^2, y)")).unwrap();
        assert!(c.is_identity());
        let c = m("(x - y^2, y)").compose(&m("(x + y^2, y)")).unwrap();
        assert!(c.is_identity());
    }

    #[test]
    fn composition_order() {
        // (x + y^2, y) after the swap (y, x) sends (x, y) to (y + x^2, x).
        let c = m("(x + y^2, y)").compose(&m("(y, x)")).unwrap();
        assert_eq!(c, m("(y + x^2, x)"));
    }

    #[test]
    fn jacobians() {
        let d = m("(x + y^2, y)").jacobian_det().unwrap();
        assert!(d.is_one());
        let d = m("(x + x^2*y, y)").jacobian_det().unwrap();
        assert_eq!(d, parse_polynomial("1 + 2*x*y").unwrap());
        assert!(!m("(x + x^2*y, y)").is_jacobian_unit().unwrap());
        assert_eq!(m("(x^2, y)").jacobian_det().unwrap(), parse_polynomial("2*x").unwrap());
        assert!(m("(x1, x2, x3)").jacobian_det().is_err());
    }

    #[test]
    fn display_round_trip() {
        let a = m("(x + y^2, 3/2*y - 1)");
        assert_eq!(parse_map(&a.to_string()).unwrap(), a);
    }
}
