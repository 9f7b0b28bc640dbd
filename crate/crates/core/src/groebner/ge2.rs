use serde::{Deserialize, Deserializer, Serialize};

use crate::poly::Polynomial;
use crate::rational::Rational;

/// A generator of GE2 over `K[x, y]`: identity plus one off-diagonal
/// polynomial, or an invertible scalar diagonal matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GEFactor {
    /// Identity with `entry` at position `(row, col)`, `row != col`.
    Elementary {
        row: usize,
        col: usize,
        entry: Polynomial,
    },
    Diagonal { d0: Rational, d1: Rational },
}

impl GEFactor {
    /// Diagonal matrix scaling coordinate `index` by `c`.
    pub fn diagonal_at(index: usize, c: Rational) -> GEFactor {
        if index == 0 {
            GEFactor::Diagonal {
                d0: c,
                d1: Rational::one(),
            }
        } else {
            GEFactor::Diagonal {
                d0: Rational::one(),
                d1: c,
            }
        }
    }

    /// The permutation matrix exchanging the two coordinates, written with
    /// elementary and diagonal factors only.
    pub fn swap_factors() -> Vec<GEFactor> {
        let one = Polynomial::one(2);
        vec![
            GEFactor::Elementary { row: 0, col: 1, entry: one.clone() },
            GEFactor::Elementary { row: 1, col: 0, entry: -&one },
            GEFactor::Elementary { row: 0, col: 1, entry: one },
            GEFactor::Diagonal {
                d0: Rational::from(-1),
                d1: Rational::one(),
            },
        ]
    }

    pub fn matrix(&self) -> [[Polynomial; 2]; 2] {
        let mut m = identity();
        match self {
            GEFactor::Elementary { row, col, entry } => {
                assert_ne!(row, col, "elementary factor must be off-diagonal");
                m[*row][*col] = entry.clone();
            }
            GEFactor::Diagonal { d0, d1 } => {
                m[0][0] = Polynomial::constant(2, d0.clone());
                m[1][1] = Polynomial::constant(2, d1.clone());
            }
        }
        m
    }

    fn is_valid(&self) -> bool {
        match self {
            GEFactor::Elementary { row, col, entry } => row != col && *row < 2 && *col < 2 && entry.nvars() == 2,
            GEFactor::Diagonal { d0, d1 } => !d0.is_zero() && !d1.is_zero(),
        }
    }
}

fn identity() -> [[Polynomial; 2]; 2] {
    [
        [Polynomial::one(2), Polynomial::zero(2)],
        [Polynomial::zero(2), Polynomial::one(2)],
    ]
}

fn mat_mul(a: &[[Polynomial; 2]; 2], b: &[[Polynomial; 2]; 2]) -> [[Polynomial; 2]; 2] {
    let cell = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
    [[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]]
}

/// A 2x2 matrix over `K[x, y]` kept as a product of GE2 generators.
///
/// Row vectors act on the left: `(a, b) * M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GEMatrix {
    factors: Vec<GEFactor>,
    product: [[Polynomial; 2]; 2],
}

impl Default for GEMatrix {
    fn default() -> Self {
        Self::identity()
    }
}

impl GEMatrix {
    pub fn identity() -> Self {
        GEMatrix {
            factors: Vec::new(),
            product: identity(),
        }
    }

    pub fn from_factors(factors: Vec<GEFactor>) -> Self {
        let mut m = Self::identity();
        for f in factors {
            m.push(f);
        }
        m
    }

    /// Right-multiplies by `f`.
    pub fn push(&mut self, f: GEFactor) {
        assert!(f.is_valid(), "invalid GE2 factor {f:?}");
        self.product = mat_mul(&self.product, &f.matrix());
        self.factors.push(f);
    }

    pub fn extend(&mut self, fs: impl IntoIterator<Item = GEFactor>) {
        for f in fs {
            self.push(f);
        }
    }

    pub fn factors(&self) -> &[GEFactor] {
        &self.factors
    }

    pub fn product(&self) -> &[[Polynomial; 2]; 2] {
        &self.product
    }

    pub fn det(&self) -> Polynomial {
        let m = &self.product;
        &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0])
    }

    /// `(v0, v1) * M`.
    pub fn apply_row(&self, v: &[Polynomial; 2]) -> [Polynomial; 2] {
        let m = &self.product;
        [
            &(&v[0] * &m[0][0]) + &(&v[1] * &m[1][0]),
            &(&v[0] * &m[0][1]) + &(&v[1] * &m[1][1]),
        ]
    }

    /// Recomputes the product from the factors and checks that it matches
    /// the cached value and has a nonzero scalar determinant.
    pub fn verify(&self) -> bool {
        if !self.factors.iter().all(GEFactor::is_valid) {
            return false;
        }
        let recomputed = self
            .factors
            .iter()
            .fold(identity(), |acc, f| mat_mul(&acc, &f.matrix()));
        let det = self.det();
        recomputed == self.product && det.is_constant() && !det.is_zero()
    }
}

impl<'de> Deserialize<'de> for GEMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            factors: Vec<GEFactor>,
        }
        let raw = Raw::deserialize(deserializer)?;
        if let Some(bad) = raw.factors.iter().find(|f| !f.is_valid()) {
            return Err(serde::de::Error::custom(format!("invalid GE2 factor {bad:?}")));
        }
        Ok(GEMatrix::from_factors(raw.factors))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s).unwrap()
    }

    #[test]
    fn swap_is_a_permutation() {
        let m = GEMatrix::from_factors(GEFactor::swap_factors());
        assert_eq!(m.apply_row(&[p("x"), p("y^2")]), [p("y^2"), p("x")]);
        assert!(m.verify());
        assert_eq!(m.det(), p("-1"));
    }

    #[test]
    fn elementary_row_action() {
        // (1, 2y) -> (1, 2y - 2y*1) = (1, 0).
        let m = GEMatrix::from_factors(vec![GEFactor::Elementary {
            row: 0,
            col: 1,
            entry: p("-2*y"),
        }]);
        assert_eq!(m.apply_row(&[p("1"), p("2*y")]), [p("1"), p("0")]);
        assert!(m.verify());
    }

    #[test]
    fn serde_recomputes_product() {
        let mut m = GEMatrix::identity();
        m.push(GEFactor::Elementary { row: 1, col: 0, entry: p("x^2 + y") });
        m.push(GEFactor::diagonal_at(1, Rational::new(1, 3)));
        let json = serde_json::to_string(&m).unwrap();
        let back: GEMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }
}
