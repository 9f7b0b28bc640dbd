use super::CoordError;
use crate::poly::{Monomial, Polynomial};
use crate::rational::Rational;
use crate::tame::{Decomposition, ElementaryFactor};

fn not_coordinate(p: &Polynomial, why: &str) -> CoordError {
    CoordError::NotCoordinate(format!("{p} ({why})"))
}

/// Linear form `x + beta*y` (or `y`) and scalar `c` with `lf = c * l^n`.
fn power_of_linear_form(lf: &Polynomial, n: u32) -> Option<(Option<Rational>, Rational)> {
    let cx = lf.coeff(&Monomial::new(&[n, 0]));
    if cx.is_zero() {
        let cy = lf.coeff(&Monomial::new(&[0, n]));
        let ok = !cy.is_zero() && lf.num_terms() == 1;
        return ok.then_some((None, cy));
    }
    let beta = &lf.coeff(&Monomial::new(&[n - 1, 1])) / &(&cx * &Rational::from(n as i64));
    let l = &Polynomial::var(2, 0) + &Polynomial::var(2, 1).scale(&beta);
    (*lf == l.pow(n).scale(&cx)).then_some((Some(beta), cx))
}

/// Elementary factors `F1, ..., Fm` with `p ∘ F1 ∘ ... ∘ Fm = x`.
///
/// Each round makes the leading form a power of `y` by a linear change,
/// then removes the top edge `c (x + mu y^k)^a` of the Newton polygon with
/// the shear `x -> x - mu y^k`, which strictly lowers the degree. Every
/// coordinate polynomial has this shape; failure proves `p` is not one.
pub fn straighten(p: &Polynomial) -> Result<Decomposition, CoordError> {
    if p.nvars() != 2 {
        return Err(CoordError::NotBivariate(p.nvars()));
    }
    let mut cur = p.clone();
    let mut factors: Vec<ElementaryFactor> = Vec::new();
    let mut push = |cur: &mut Polynomial, f: ElementaryFactor| -> Result<(), CoordError> {
        *cur = f.to_map().apply(cur)?;
        factors.push(f);
        Ok(())
    };
    loop {
        let n = match cur.degree() {
            None | Some(0) => return Err(not_coordinate(p, "constant")),
            Some(n) => n,
        };
        if n == 1 {
            let coeff = |c: &Polynomial, e: &[u32]| c.coeff(&Monomial::new(e));
            if coeff(&cur, &[1, 0]).is_zero() {
                push(&mut cur, ElementaryFactor::Swap)?;
            }
            let a = coeff(&cur, &[1, 0]);
            let b = coeff(&cur, &[0, 1]);
            let c = coeff(&cur, &[0, 0]);
            if !c.is_zero() {
                push(
                    &mut cur,
                    ElementaryFactor::shear(Polynomial::constant(2, -(&c / &a))),
                )?;
            }
            if !a.is_one() || !b.is_zero() {
                let inv = a.recip();
                push(
                    &mut cur,
                    ElementaryFactor::linear([
                        [inv.clone(), -(&b * &inv)],
                        [Rational::zero(), Rational::one()],
                    ]),
                )?;
            }
            debug_assert_eq!(cur, Polynomial::var(2, 0));
            break;
        }
        let lf = cur.leading_form()?;
        let (beta, _) = power_of_linear_form(&lf, n)
            .ok_or_else(|| not_coordinate(p, "leading form is not a power of a linear form"))?;
        if let Some(beta) = beta {
            // (x, y) -> (y - beta x, x) sends x + beta y to y.
            push(
                &mut cur,
                ElementaryFactor::linear([[-beta, Rational::one()], [Rational::one(), Rational::zero()]]),
            )?;
        }
        let a = cur.degree_in(0).unwrap_or(0);
        if a == 0 || n % a != 0 {
            return Err(not_coordinate(p, "Newton polygon is not a triangle with dividing sides"));
        }
        let k = n / a;
        let weighted = |m: &Monomial| k * m.exp(0) + m.exp(1);
        if cur.terms().any(|(m, _)| weighted(m) > n) {
            return Err(not_coordinate(p, "Newton polygon is not a triangle"));
        }
        let edge = Polynomial::from_terms(
            2,
            cur.terms()
                .filter(|(m, _)| weighted(m) == n)
                .map(|(m, c)| (m.clone(), c.clone())),
        );
        let c = cur.coeff(&Monomial::new(&[a, 0]));
        if c.is_zero() {
            return Err(not_coordinate(p, "no pure power of x on the Newton polygon"));
        }
        let mu = &cur.coeff(&Monomial::new(&[a - 1, k])) / &(&c * &Rational::from(a as i64));
        let shifted = &Polynomial::var(2, 0) + &Polynomial::term(Monomial::new(&[0, k]), mu.clone());
        if edge != shifted.pow(a).scale(&c) {
            return Err(not_coordinate(p, "top edge is not a power of a binomial"));
        }
        push(
            &mut cur,
            ElementaryFactor::shear(Polynomial::term(Monomial::new(&[0, k]), -mu)),
        )?;
        debug_assert!(cur.degree_or_zero() < n);
    }
    Ok(Decomposition::from_factors(factors))
}
