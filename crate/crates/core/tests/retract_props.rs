use combalg::poly::Monomial;
use combalg::retract::{find_fixed_polynomials, normal_form_retraction, verify_retraction, verify_witness, RetractionVerdict};
use combalg::tame::{invert_automorphism, random_tame_automorphism, RandomTameConfig};
use combalg::{PolyMap, Polynomial, Rational};
use proptest::prelude::*;

fn poly(max_deg: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((0..=max_deg, 0..=max_deg, -5i64..=5, 1i64..=3), 0..=max_terms).prop_map(|ts| {
        Polynomial::from_terms(2, ts.into_iter().map(|(i, j, n, d)| (Monomial::new(&[i, j]), Rational::new(n, d))))
    })
}

fn small_tame() -> RandomTameConfig {
    RandomTameConfig {
        factors: 3,
        max_shear_degree: 3,
        coeff_bound: 3,
        degree_cap: 8,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn normal_form_retraction_fixes_its_generator(q in poly(3, 4)) {
        let r = normal_form_retraction(&q).unwrap();
        let p = &Polynomial::var(2, 0) + &(&Polynomial::var(2, 1) * &q);
        prop_assert_eq!(r.map.apply(&p).unwrap(), p.clone());
        prop_assert_eq!(r.map.compose(&r.map).unwrap(), r.map.clone());
        let is_retraction = matches!(verify_retraction(&r.map).unwrap(), RetractionVerdict::Retraction { .. });
        prop_assert!(is_retraction);
    }

    #[test]
    fn inverse_automorphism_is_a_witness(seed in 0u64..10_000) {
        let (phi, d) = random_tame_automorphism(seed, &small_tame());
        let inv = invert_automorphism(&d).unwrap();
        prop_assert!(verify_witness(&phi.images()[0], &inv));
        let id = PolyMap::identity(2);
        prop_assert_eq!(verify_witness(&phi.images()[0], &id), phi.images()[0] == Polynomial::var(2, 0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn fixed_polynomials_are_fixed(seed in 0u64..10_000) {
        let (phi, _) = random_tame_automorphism(seed, &small_tame());
        let d = phi.degree().min(4);
        let fixed = find_fixed_polynomials(&phi, d).unwrap();
        prop_assert!(fixed.basis.iter().any(Polynomial::is_constant), "constants are always fixed");
        for b in &fixed.basis {
            prop_assert_eq!(&phi.apply(b).unwrap(), b);
            prop_assert!(b.degree_or_zero() <= d);
        }
    }
}

#[test]
fn swap_fixes_symmetric_polynomials() {
    let swap = PolyMap::pair(Polynomial::var(2, 1), Polynomial::var(2, 0)).unwrap();
    let fixed = find_fixed_polynomials(&swap, 2).unwrap();
    // 1, x + y, x^2 + y^2 and xy span the invariants of degree at most 2.
    assert_eq!(fixed.dimension(), 4);
}
