use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Decomposition, ElementaryFactor};
use crate::poly::{PolyMap, Polynomial};
use crate::rational::Rational;

/// Parameters for [`random_tame_automorphism`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomTameConfig {
    /// Number of factors composed.
    pub factors: usize,
    /// Largest degree of a shear polynomial.
    pub max_shear_degree: u32,
    /// Coefficients are drawn from `-coeff_bound..=coeff_bound`.
    pub coeff_bound: i64,
    /// Largest total degree allowed for the composed map.
    pub degree_cap: u32,
}

impl Default for RandomTameConfig {
    fn default() -> Self {
        RandomTameConfig {
            factors: 6,
            max_shear_degree: 4,
            coeff_bound: 3,
            degree_cap: 64,
        }
    }
}

fn random_coeff(rng: &mut impl Rng, bound: i64, nonzero: bool) -> Rational {
    loop {
        let c = rng.gen_range(-bound..=bound);
        if c != 0 || !nonzero {
            return Rational::from(c);
        }
    }
}

fn random_shear(rng: &mut impl Rng, degree: u32, bound: i64) -> ElementaryFactor {
    let mut coeffs: Vec<Rational> = (0..=degree)
        .map(|k| random_coeff(rng, bound, k == degree))
        .collect();
    if degree == 0 {
        coeffs[0] = random_coeff(rng, bound.max(1), true);
    }
    ElementaryFactor::Shear {
        f: Polynomial::univariate(2, 1, &coeffs),
    }
}

fn random_linear(rng: &mut impl Rng) -> ElementaryFactor {
    loop {
        let mut e = || Rational::from(rng.gen_range(-2i64..=2));
        let matrix = [[e(), e()], [e(), e()]];
        let det = &(&matrix[0][0] * &matrix[1][1]) - &(&matrix[0][1] * &matrix[1][0]);
        if !det.is_zero() {
            return ElementaryFactor::Linear { matrix };
        }
    }
}

/// Composes `cfg.factors` random shears and linear maps. The factor list is
/// returned as ground truth. A factor that would push the degree past the
/// cap is redrawn with a smaller shear degree.
pub fn random_tame_automorphism(seed: u64, cfg: &RandomTameConfig) -> (PolyMap, Decomposition) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut map = PolyMap::identity(2);
    let mut factors = Vec::with_capacity(cfg.factors);
    for _ in 0..cfg.factors {
        let mut max_deg = cfg.max_shear_degree.max(1);
        loop {
            let f = if rng.gen_bool(0.6) {
                let d = rng.gen_range(1..=max_deg);
                random_shear(&mut rng, d, cfg.coeff_bound.max(1))
            } else {
                random_linear(&mut rng)
            };
            let next = map.compose(&f.to_map()).unwrap();
            if next.degree() <= cfg.degree_cap {
                map = next;
                factors.push(f);
                break;
            }
            max_deg = (max_deg - 1).max(1);
        }
    }
    (map, Decomposition::from_factors(factors))
}

/// A pair generating `K[t]`, built from `(a t + b, w)` by `steps` random
/// substitutions `u <- u + mu * v^k`, which never change the algebra.
pub fn random_generating_pair(seed: u64, steps: usize, degree_cap: u32) -> (Polynomial, Polynomial) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lin = Polynomial::univariate(1, 0, &[random_coeff(&mut rng, 3, false), random_coeff(&mut rng, 3, true)]);
    let wdeg = rng.gen_range(0..=3u32);
    let w: Vec<Rational> = (0..=wdeg).map(|k| random_coeff(&mut rng, 3, k == wdeg)).collect();
    let mut pair = [lin, Polynomial::univariate(1, 0, &w)];
    for _ in 0..steps {
        let i = rng.gen_range(0..2usize);
        let other = pair[1 - i].clone();
        let od = other.degree_or_zero().max(1);
        let kmax = (degree_cap / od).max(1);
        let k = rng.gen_range(1..=kmax.min(4));
        let mu = random_coeff(&mut rng, 3, true);
        let candidate = &pair[i] + &other.pow(k).scale(&mu);
        if candidate.degree_or_zero() <= degree_cap {
            pair[i] = candidate;
        }
    }
    if rng.gen_bool(0.5) {
        pair.swap(0, 1);
    }
    let [u, v] = pair;
    (u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_map;
    use crate::tame::{decompose_map, is_univariate_generating_pair};

    #[test]
    fn zero_factors_is_identity() {
        let cfg = RandomTameConfig {
            factors: 0,
            ..Default::default()
        };
        let (m, d) = random_tame_automorphism(1, &cfg);
        assert!(m.is_identity());
        assert!(d.is_empty());
    }

    #[test]
    fn single_shear_factor() {
        let d = Decomposition::from_factors([ElementaryFactor::shear(
            crate::poly::parse_polynomial("y^3").unwrap(),
        )]);
        assert_eq!(d.compose(), parse_map("(x + y^3, y)").unwrap());
    }

    #[test]
    fn generated_maps_decompose() {
        let cfg = RandomTameConfig::default();
        for seed in 0..30 {
            let (m, truth) = random_tame_automorphism(seed, &cfg);
            assert_eq!(truth.compose(), m);
            assert!(m.degree() <= cfg.degree_cap);
            let v = decompose_map(&m).unwrap();
            assert_eq!(v.decomposition().unwrap().compose(), m);
        }
    }

    #[test]
    fn generated_pairs_generate() {
        for seed in 0..30 {
            let (u, v) = random_generating_pair(seed, 5, 24);
            assert!(is_univariate_generating_pair(&u, &v).is_generating(), "{u}, {v}");
        }
    }
}
