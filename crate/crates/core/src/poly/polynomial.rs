use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::monomial::Monomial;
use super::PolyError;
use crate::rational::Rational;

/// Sparse polynomial over the rationals in `nvars` variables.
///
/// Terms are kept in a map ordered by deglex; zero coefficients are never
/// stored, so structural equality is equality of polynomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: impl Into<Rational>) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    /// The variable `x_{i+1}` (zero-based index).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        Self::term(Monomial::var_power(nvars, i, 1), Rational::one())
    }

    pub fn term(m: Monomial, c: impl Into<Rational>) -> Self {
        let c = c.into();
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Polynomial::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity mismatch");
            p.add_term(m, &c);
        }
        p
    }

    /// Univariate polynomial in variable `var` of an `nvars`-variable ring,
    /// from ascending coefficients.
    pub fn univariate(nvars: usize, var: usize, coeffs: &[Rational]) -> Self {
        Self::from_terms(
            nvars,
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (Monomial::var_power(nvars, var, k as u32), c.clone())),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// True for zero and for nonzero constants.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// The constant value, when the polynomial is constant (zero included).
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    /// Total degree with the zero polynomial mapped to 0.
    pub fn degree_or_zero(&self) -> u32 {
        self.degree().unwrap_or(0)
    }

    /// Largest exponent of `x_{i+1}` among the terms.
    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(i)).max()
    }

    /// Terms in descending deglex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn lm(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn lc(&self) -> Option<&Rational> {
        self.terms.values().next_back()
    }

    pub fn lt(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Leading monomial with its coefficient, as `(coefficient, monomial)`.
    pub fn leading_term(&self) -> Result<(Rational, Monomial), PolyError> {
        self.lt()
            .map(|(m, c)| (c.clone(), m.clone()))
            .ok_or(PolyError::ZeroPolynomial)
    }

    /// Top-degree homogeneous component.
    pub fn leading_form(&self) -> Result<Polynomial, PolyError> {
        let d = self.degree().ok_or(PolyError::ZeroPolynomial)?;
        Ok(self.homogeneous_component(d))
    }

    pub fn homogeneous_component(&self, d: u32) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.degree() {
            None => true,
            Some(d) => self.terms.keys().all(|m| m.degree() == d),
        }
    }

    /// Adds `c * m` in place.
    pub fn add_term(&mut self, m: Monomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.nvars(), self.nvars);
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self -= c * m * f`, in place.
    pub fn sub_scaled_shift(&mut self, c: &Rational, m: &Monomial, f: &Polynomial) {
        for (fm, fc) in &f.terms {
            let coeff = -(c * fc);
            self.add_term(m.mul(fm), &coeff);
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut result = Polynomial::one(self.nvars);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Formal partial derivative with respect to `x_{i+1}` (zero-based).
    pub fn partial_derivative(&self, i: usize) -> Polynomial {
        assert!(i < self.nvars, "variable index {i} out of range");
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[i] -= 1;
            out.add_term(Monomial::new(&exps), &(c * &Rational::from(e as i64)));
        }
        out
    }

    /// Gradient `(d1 p, ..., dn p)`.
    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.nvars).map(|i| self.partial_derivative(i)).collect()
    }

    /// `p(images[0], ..., images[n-1])`. All images must share one arity.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial, PolyError> {
        if images.len() != self.nvars {
            return Err(PolyError::ArityMismatch {
                expected: self.nvars,
                found: images.len(),
            });
        }
        let target = images.first().map(|p| p.nvars).unwrap_or(self.nvars);
        if let Some(bad) = images.iter().find(|p| p.nvars != target) {
            return Err(PolyError::ArityMismatch {
                expected: target,
                found: bad.nvars,
            });
        }
        if self.nvars == 0 {
            return Ok(Polynomial::constant(target, self.coeff(&Monomial::one(0))));
        }
        let mut cache: Vec<Vec<Polynomial>> = vec![vec![Polynomial::one(target)]; self.nvars];
        let terms: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        Ok(substitute_rec(&terms, 0, images, target, &mut cache))
    }

    /// Divides by `divisors` in order, always using the first divisor whose
    /// leading monomial divides the current leading monomial. Returns the
    /// quotients and a remainder none of whose monomials is divisible by a
    /// divisor's leading monomial.
    pub fn divide(&self, divisors: &[Polynomial]) -> (Vec<Polynomial>, Polynomial) {
        let mut quotients = vec![Polynomial::zero(self.nvars); divisors.len()];
        let mut rem = Polynomial::zero(self.nvars);
        let mut p = self.clone();
        let leads: Vec<Option<(&Monomial, &Rational)>> = divisors.iter().map(|d| d.lt()).collect();
        while let Some((m, c)) = p.terms.pop_last() {
            let hit = leads.iter().enumerate().find_map(|(i, lt)| {
                lt.and_then(|(lm, lc)| lm.divide_into(&m).map(|q| (i, q, lc)))
            });
            match hit {
                Some((i, shift, lc)) => {
                    let factor = &c / lc;
                    quotients[i].add_term(shift.clone(), &factor);
                    // The leading term cancels exactly; subtract the tail.
                    for (fm, fc) in divisors[i].terms.iter().rev().skip(1) {
                        p.add_term(shift.mul(fm), &-(&factor * fc));
                    }
                }
                None => {
                    rem.terms.insert(m, c);
                }
            }
        }
        (quotients, rem)
    }

    /// Remainder of [`Polynomial::divide`].
    pub fn reduce(&self, divisors: &[Polynomial]) -> Polynomial {
        self.divide(divisors).1
    }

    /// Scaled so the leading coefficient is one.
    pub fn monic(&self) -> Polynomial {
        match self.lc() {
            None => self.clone(),
            Some(c) if c.is_one() => self.clone(),
            Some(c) => self.scale(&c.recip()),
        }
    }

    /// Scaled to coprime integer coefficients with a positive leading
    /// coefficient.
    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let l = Rational::denominator_lcm(self.terms.values());
        let cleared: Vec<Rational> = self
            .terms
            .values()
            .map(|c| c * &Rational::from_integer(l.clone()))
            .collect();
        let mut g = Rational::numerator_gcd(&cleared);
        if self.lc().unwrap().is_negative() {
            g = -g;
        }
        let factor = Rational::new(l, g);
        self.scale(&factor)
    }

    /// Re-embeds the polynomial in a ring with `nvars` variables.
    pub fn with_nvars(&self, nvars: usize) -> Polynomial {
        Polynomial {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.with_nvars(nvars), c.clone()))
                .collect(),
        }
    }

    /// True if every term involves only the variable `x_{i+1}`.
    pub fn is_univariate_in(&self, i: usize) -> bool {
        self.terms.keys().all(|m| m.degree() == m.exp(i))
    }

    /// Ascending coefficient list of a polynomial in `x_{i+1}` alone.
    pub fn univariate_coeffs(&self, i: usize) -> Option<Vec<Rational>> {
        if !self.is_univariate_in(i) {
            return None;
        }
        let d = self.degree_in(i).unwrap_or(0) as usize;
        let mut out = vec![Rational::zero(); d + 1];
        for (m, c) in &self.terms {
            out[m.exp(i) as usize] = c.clone();
        }
        Some(out)
    }

    /// Coefficient of `x_{i+1}^k`, as a polynomial in the other variables.
    pub fn coefficient_of_power(&self, i: usize, k: u32) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.exp(i) == k {
                let mut exps = m.exps().to_vec();
                exps[i] = 0;
                out.add_term(Monomial::new(&exps), c);
            }
        }
        out
    }

    /// Total number of bits in all coefficients.
    pub fn coefficient_bits(&self) -> u64 {
        self.terms.values().map(|c| c.height_bits()).sum()
    }

    /// Evaluates at a rational point.
    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, e) in point.iter().zip(m.exps()) {
                if *e > 0 {
                    t *= &x.pow(*e);
                }
            }
            acc += &t;
        }
        acc
    }

    /// Integer content check used by tests: true if all coefficients are integers.
    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Largest absolute numerator, for coefficient-growth diagnostics.
    pub fn max_numerator(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.numer().abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

fn substitute_rec(
    terms: &[(&Monomial, &Rational)],
    var: usize,
    images: &[Polynomial],
    target: usize,
    cache: &mut Vec<Vec<Polynomial>>,
) -> Polynomial {
    if var == images.len() {
        let mut acc = Rational::zero();
        for (_, c) in terms {
            acc += c;
        }
        return Polynomial::constant(target, acc);
    }
    let mut groups: BTreeMap<u32, Vec<(&Monomial, &Rational)>> = BTreeMap::new();
    for &(m, c) in terms {
        groups.entry(m.exp(var)).or_default().push((m, c));
    }
    let mut out = Polynomial::zero(target);
    for (e, group) in groups {
        let inner = substitute_rec(&group, var + 1, images, target, cache);
        if inner.is_zero() {
            continue;
        }
        while cache[var].len() <= e as usize {
            let next = cache[var].last().unwrap() * &images[var];
            cache[var].push(next);
        }
        let part = if e == 0 {
            inner
        } else {
            &cache[var][e as usize] * &inner
        };
        out = &out + &part;
    }
    out
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "arity mismatch in addition");
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c);
        }
        big
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "arity mismatch in subtraction");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }
}

fn cleared_terms(p: &Polynomial) -> (BigInt, Vec<(&Monomial, BigInt)>) {
    let l = Rational::denominator_lcm(p.terms.values());
    let ints = p
        .terms
        .iter()
        .map(|(m, c)| (m, c.numer() * (&l / c.denom())))
        .collect();
    (l, ints)
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "arity mismatch in multiplication");
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        // Multiply the integer polynomials obtained by clearing
        // denominators, then divide once per output term.
        let (la, a) = cleared_terms(self);
        let (lb, b) = cleared_terms(rhs);
        let mut acc: HashMap<Monomial, BigInt> = HashMap::with_capacity(a.len() * b.len() / 2 + 1);
        for (m1, c1) in &a {
            for (m2, c2) in &b {
                let prod = c1 * c2;
                match acc.entry(m1.mul(m2)) {
                    std::collections::hash_map::Entry::Occupied(mut o) => *o.get_mut() += prod,
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(prod);
                    }
                }
            }
        }
        let denom = la * lb;
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m, Rational::new(c, denom.clone())))
            .collect();
        Polynomial {
            nvars: self.nvars,
            terms,
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

macro_rules! owned_ops {
    ($Trait:ident, $method:ident) => {
        impl $Trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $Trait<&'a Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &'a Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Variable names used for display: `t` in one variable, `x, y` in two,
/// `x1..xn` otherwise.
pub fn variable_names(nvars: usize) -> Vec<String> {
    match nvars {
        1 => vec!["t".to_string()],
        2 => vec!["x".to_string(), "y".to_string()],
        n => (1..=n).map(|i| format!("x{i}")).collect(),
    }
}

fn fmt_monomial(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, e) in m.exps().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{}", names[i], e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = variable_names(self.nvars);
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", fmt_monomial(m, &names))?;
            } else {
                write!(f, "{a}*{}", fmt_monomial(m, &names))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        super::parse::parse_polynomial_auto(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for polynomials that live in the univariate ring `K[t]`.
pub mod univariate_text {
    use super::Polynomial;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &Polynomial, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(p)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Polynomial, D::Error> {
        let s = String::deserialize(d)?;
        crate::poly::parse_univariate(&s).map_err(serde::de::Error::custom)
    }
}
