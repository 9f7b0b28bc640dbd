use combalg::poly::{parse_polynomial_in, Monomial};
use combalg::{Polynomial, Rational};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| Rational::new(n, d))
}

fn poly(max_deg: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(((0..=max_deg), (0..=max_deg), rational()), 0..=max_terms).prop_map(|ts| {
        Polynomial::from_terms(2, ts.into_iter().map(|(i, j, c)| (Monomial::new(&[i, j]), c)))
    })
}

fn nonzero_poly(max_deg: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    poly(max_deg, max_terms).prop_filter("nonzero", |p| !p.is_zero())
}

fn monomial() -> impl Strategy<Value = Monomial> {
    (0u32..6, 0u32..6).prop_map(|(i, j)| Monomial::new(&[i, j]))
}

fn point() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational(), 2)
}

fn times(a: &Rational, b: &Rational) -> Rational {
    let mut c = a.clone();
    c *= b;
    c
}

fn plus(a: &Rational, b: &Rational) -> Rational {
    let mut c = a.clone();
    c += b;
    c
}

proptest! {
    #[test]
    fn ring_axioms(f in poly(3, 5), g in poly(3, 5), h in poly(3, 5)) {
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert!((&f - &f).is_zero());
        prop_assert_eq!(&f * &Polynomial::one(2), f.clone());
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(f in poly(4, 6), g in poly(4, 6), pt in point()) {
        let (a, b) = (f.evaluate(&pt), g.evaluate(&pt));
        prop_assert_eq!((&f * &g).evaluate(&pt), times(&a, &b));
        prop_assert_eq!((&f + &g).evaluate(&pt), plus(&a, &b));
    }

    #[test]
    fn leading_terms_multiply(f in nonzero_poly(4, 6), g in nonzero_poly(4, 6)) {
        let fg = &f * &g;
        let (mf, cf) = f.lt().unwrap();
        let (mg, cg) = g.lt().unwrap();
        let (m, c) = fg.lt().unwrap();
        prop_assert_eq!(m, &mf.mul(mg));
        prop_assert_eq!(c, &times(cf, cg));
    }

    #[test]
    fn deglex_is_a_monomial_order(a in monomial(), b in monomial(), c in monomial()) {
        prop_assert_eq!(a.cmp(&b), a.mul(&c).cmp(&b.mul(&c)));
        if a.degree() != b.degree() {
            prop_assert_eq!(a.cmp(&b), a.degree().cmp(&b.degree()));
        }
        prop_assert!(Monomial::one(2) <= a);
    }

    #[test]
    fn division_contract(f in poly(5, 8), g1 in nonzero_poly(3, 3), g2 in nonzero_poly(3, 3)) {
        let gs = [g1, g2];
        let (qs, r) = f.divide(&gs);
        let mut back = r.clone();
        for (q, g) in qs.iter().zip(&gs) {
            back = &back + &(q * g);
            if !q.is_zero() {
                // No cancellation pushes a quotient term above the dividend.
                prop_assert!(q.lm().unwrap().mul(g.lm().unwrap()) <= *f.lm().unwrap());
            }
        }
        prop_assert_eq!(back, f);
        for (m, _) in r.terms() {
            prop_assert!(gs.iter().all(|g| !g.lm().unwrap().divides(m)), "{} divisible in remainder", r);
        }
    }

    #[test]
    fn leibniz_rule(f in poly(4, 5), g in poly(4, 5), i in 0usize..2) {
        let lhs = (&f * &g).partial_derivative(i);
        let rhs = &(&f.partial_derivative(i) * &g) + &(&f * &g.partial_derivative(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn canonical_text_parses_back(f in poly(4, 6)) {
        prop_assert_eq!(parse_polynomial_in(&f.to_string(), 2).unwrap(), f);
    }

    #[test]
    fn substitution_commutes_with_evaluation(f in poly(3, 4), a in poly(2, 3), b in poly(2, 3), pt in point()) {
        let composed = f.substitute(&[a.clone(), b.clone()]).unwrap();
        let inner = vec![a.evaluate(&pt), b.evaluate(&pt)];
        prop_assert_eq!(composed.evaluate(&pt), f.evaluate(&inner));
    }
}
