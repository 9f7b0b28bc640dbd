//! Text grammar for polynomials and polynomial maps.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*'? unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer ('/' integer)? | variable | '(' expr ')'
//! ```
//!
//! Variables are `x`, `y`, `x1`, `x2`, ... (`x` = `x1`, `y` = `x2`), or `t`
//! for the univariate ring.

use std::fmt;

use super::map::PolyMap;
use super::polynomial::Polynomial;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at position {}: {}", self.pos, self.message)
    }
}

fn err<T>(pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        message: message.into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Var {
    Indexed(usize),
    T,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(num_bigint::BigInt),
    Var(Var),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((i, Token::Plus));
                i += 1
            }
            '-' => {
                out.push((i, Token::Minus));
                i += 1
            }
            '*' => {
                out.push((i, Token::Star));
                i += 1
            }
            '/' => {
                out.push((i, Token::Slash));
                i += 1
            }
            '^' => {
                out.push((i, Token::Caret));
                i += 1
            }
            '(' => {
                out.push((i, Token::LParen));
                i += 1
            }
            ')' => {
                out.push((i, Token::RParen));
                i += 1
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Token::Num(s[start..i].parse().unwrap())));
            }
            'x' => {
                let start = i;
                i += 1;
                let dstart = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if dstart == i {
                    out.push((start, Token::Var(Var::Indexed(0))));
                } else {
                    let k: usize = s[dstart..i]
                        .parse()
                        .map_err(|_| ParseError { pos: start, message: "variable index too large".into() })?;
                    if k == 0 {
                        return err(start, "variables are numbered from x1");
                    }
                    out.push((start, Token::Var(Var::Indexed(k - 1))));
                }
            }
            'y' => {
                out.push((i, Token::Var(Var::Indexed(1))));
                i += 1
            }
            't' => {
                out.push((i, Token::Var(Var::T)));
                i += 1
            }
            other => return err(i, format!("unexpected character {other:?}")),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Expr {
    Num(Rational),
    Var(Var),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Token::Num(_)) | Some(Token::Var(_)) | Some(Token::LParen) => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Token::Slash) => {
                    return err(self.offset(), "division is only allowed inside a rational literal p/q")
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            let at = self.offset();
            match self.peek().cloned() {
                Some(Token::Num(n)) => {
                    self.pos += 1;
                    let k: u32 = n
                        .try_into()
                        .map_err(|_| ParseError { pos: at, message: "exponent too large".into() })?;
                    Ok(Expr::Pow(Box::new(base), k))
                }
                _ => err(at, "expected a non-negative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Token::Num(n)) => {
                self.pos += 1;
                if self.peek() == Some(&Token::Slash) {
                    if let Some((_, Token::Num(d))) = self.tokens.get(self.pos + 1).cloned() {
                        self.pos += 2;
                        if num_traits::Zero::is_zero(&d) {
                            return err(at, "zero denominator");
                        }
                        return Ok(Expr::Num(Rational::new(n, d)));
                    }
                    return err(self.offset(), "expected an integer denominator");
                }
                Ok(Expr::Num(Rational::from_integer(n)))
            }
            Some(Token::Var(v)) => {
                self.pos += 1;
                Ok(Expr::Var(v))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Token::RParen) {
                    return err(self.offset(), "expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(_) => err(at, "expected a number, a variable or '('"),
            None => err(at, "unexpected end of input"),
        }
    }
}

fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
    };
    let e = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return err(parser.offset(), "unexpected trailing input");
    }
    Ok(e)
}

fn collect_vars(e: &Expr, out: &mut Vec<Var>) {
    match e {
        Expr::Num(_) => {}
        Expr::Var(v) => out.push(*v),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
            collect_vars(a, out);
            collect_vars(b, out);
        }
        Expr::Neg(a) | Expr::Pow(a, _) => collect_vars(a, out),
    }
}

fn eval(e: &Expr, nvars: usize, univariate: bool) -> Polynomial {
    match e {
        Expr::Num(q) => Polynomial::constant(nvars, q.clone()),
        Expr::Var(Var::T) => Polynomial::var(nvars, 0),
        Expr::Var(Var::Indexed(i)) => {
            if univariate {
                Polynomial::var(nvars, 0)
            } else {
                Polynomial::var(nvars, *i)
            }
        }
        Expr::Add(a, b) => &eval(a, nvars, univariate) + &eval(b, nvars, univariate),
        Expr::Sub(a, b) => &eval(a, nvars, univariate) - &eval(b, nvars, univariate),
        Expr::Mul(a, b) => &eval(a, nvars, univariate) * &eval(b, nvars, univariate),
        Expr::Neg(a) => -&eval(a, nvars, univariate),
        Expr::Pow(a, k) => eval(a, nvars, univariate).pow(*k),
    }
}

fn max_index(vars: &[Var]) -> Option<usize> {
    vars.iter()
        .filter_map(|v| match v {
            Var::Indexed(i) => Some(*i),
            Var::T => None,
        })
        .max()
}

/// Parses with the arity inferred from the text: `t` alone gives the
/// univariate ring, otherwise `max(2, largest index)` variables.
pub fn parse_polynomial_auto(text: &str) -> Result<Polynomial, ParseError> {
    let e = parse_expr(text)?;
    let mut vars = Vec::new();
    collect_vars(&e, &mut vars);
    if vars.contains(&Var::T) {
        if vars.iter().any(|v| *v != Var::T) {
            return err(0, "cannot mix t with x/y variables");
        }
        return Ok(eval(&e, 1, true));
    }
    let n = max_index(&vars).map(|i| i + 1).unwrap_or(0).max(2);
    Ok(eval(&e, n, false))
}

/// Parses in the ring with `x, y` variables (or `x1..xn` when the text
/// mentions a higher index).
pub fn parse_polynomial(text: &str) -> Result<Polynomial, ParseError> {
    let e = parse_expr(text)?;
    let mut vars = Vec::new();
    collect_vars(&e, &mut vars);
    if vars.contains(&Var::T) {
        return err(text.find('t').unwrap_or(0), "t is reserved for univariate input");
    }
    let n = max_index(&vars).map(|i| i + 1).unwrap_or(0).max(2);
    Ok(eval(&e, n, false))
}

/// Parses in a ring with exactly `nvars` variables.
pub fn parse_polynomial_in(text: &str, nvars: usize) -> Result<Polynomial, ParseError> {
    let e = parse_expr(text)?;
    let mut vars = Vec::new();
    collect_vars(&e, &mut vars);
    if vars.contains(&Var::T) {
        return err(text.find('t').unwrap_or(0), "t is reserved for univariate input");
    }
    if let Some(i) = max_index(&vars) {
        if i >= nvars {
            return err(0, format!("variable x{} exceeds the ring's {} variables", i + 1, nvars));
        }
    }
    Ok(eval(&e, nvars, false))
}

/// Parses a polynomial in one variable; `t` and `x` are both accepted.
pub fn parse_univariate(text: &str) -> Result<Polynomial, ParseError> {
    let e = parse_expr(text)?;
    let mut vars = Vec::new();
    collect_vars(&e, &mut vars);
    if vars.iter().any(|v| matches!(v, Var::Indexed(i) if *i != 0)) {
        return err(0, "univariate input may only use t (or x)");
    }
    Ok(eval(&e, 1, true))
}

/// Splits at commas that are not nested inside parentheses.
fn split_top_level(text: &str) -> Vec<(usize, &str)> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push((start, &text[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push((start, &text[start..]));
    parts
}

/// Parses a map such as `(x + y^2, y)` or `x + y^2, y`. The arity is the
/// number of components, which must cover every variable mentioned.
pub fn parse_map(text: &str) -> Result<PolyMap, ParseError> {
    let mut parts = split_top_level(text);
    if parts.len() == 1 {
        let trimmed = text.trim();
        if trimmed.starts_with('(') && trimmed.ends_with(')') {
            let lead = text.len() - text.trim_start().len();
            let inner = &trimmed[1..trimmed.len() - 1];
            let inner_parts = split_top_level(inner);
            if inner_parts.len() > 1 {
                parts = inner_parts
                    .into_iter()
                    .map(|(o, s)| (o + lead + 1, s))
                    .collect();
            }
        }
    }
    let n = parts.len();
    if n < 2 {
        return err(0, "a map needs at least two comma-separated components");
    }
    let mut images = Vec::with_capacity(n);
    for (offset, part) in parts {
        let p = parse_polynomial_in(part, n).map_err(|e| ParseError {
            pos: e.pos + offset,
            message: e.message,
        })?;
        images.push(p);
    }
    Ok(PolyMap::new(images).expect("components share the arity"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;

    #[test]
    fn parses_the_retract_example() {
        let p = parse_polynomial("x + x^2*y").unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coeff(&Monomial::new(&[2, 1])), Rational::one());
        assert_eq!(p.coeff(&Monomial::new(&[1, 0])), Rational::one());
    }

    #[test]
    fn rational_coefficients() {
        let p = parse_polynomial("3/2*x - 1").unwrap();
        assert_eq!(p.coeff(&Monomial::new(&[1, 0])), Rational::new(3, 2));
        assert_eq!(p.coeff(&Monomial::new(&[0, 0])), Rational::from(-1));
    }

    #[test]
    fn round_trip_simple() {
        let p = parse_polynomial("x^2").unwrap();
        assert_eq!(parse_polynomial(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn aliases_and_implicit_products() {
        assert_eq!(parse_polynomial("x1*x2").unwrap(), parse_polynomial("x y").unwrap());
        assert_eq!(parse_polynomial("2x").unwrap(), parse_polynomial("2*x").unwrap());
        assert_eq!(parse_polynomial("x3").unwrap().nvars(), 3);
        assert_eq!(parse_polynomial("-x^2").unwrap(), -parse_polynomial("x^2").unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_polynomial("x + ").unwrap_err();
        assert_eq!(e.pos, 4);
        let e = parse_polynomial("x + $").unwrap_err();
        assert_eq!(e.pos, 4);
        let e = parse_polynomial("(x + y").unwrap_err();
        assert_eq!(e.pos, 6);
        assert!(parse_polynomial("x/y").is_err());
        assert!(parse_polynomial("x^y").is_err());
        assert!(parse_polynomial("1/0").is_err());
    }

    #[test]
    fn maps() {
        let m = parse_map("(x + y^2, y)").unwrap();
        assert_eq!(m.images()[0], parse_polynomial("x + y^2").unwrap());
        let m = parse_map("(x+y)*(x-y), y").unwrap();
        assert_eq!(m.images()[0], parse_polynomial("x^2 - y^2").unwrap());
        let e = parse_map("x, y + $").unwrap_err();
        assert_eq!(e.pos, 7);
        assert!(parse_map("x").is_err());
        assert!(parse_map("x3, y").is_err());
    }

    #[test]
    fn univariate() {
        let u = parse_univariate("t^2 + 1").unwrap();
        assert_eq!(u.nvars(), 1);
        assert_eq!(u.to_string(), "t^2 + 1");
        assert!(parse_univariate("y").is_err());
        assert_eq!(parse_polynomial_auto("t^3").unwrap().nvars(), 1);
        assert!(parse_polynomial_auto("t + x").is_err());
    }
}
