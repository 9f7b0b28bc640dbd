//! Turning positional inputs into library values.

use combalg::freegroup::{parse_tuple, parse_word, FreeWord, GeneratorTuple};
use combalg::poly::{parse_map, parse_polynomial, parse_polynomial_in, parse_univariate, ParseError};
use combalg::{PolyMap, Polynomial};

use crate::CliError;

fn parse_err(arg: usize, text: &str, offset: usize, e: ParseError) -> CliError {
    CliError::Parse {
        arg,
        text: text.to_string(),
        pos: offset + e.pos,
        message: e.message,
    }
}

pub fn arity(args: &[String], n: usize, what: &str) -> Result<(), CliError> {
    if args.len() != n {
        return Err(CliError::Usage(format!("expected {what}, got {} input(s)", args.len())));
    }
    Ok(())
}

pub fn input_error(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

/// A polynomial in `K[x, y]`.
pub fn poly2(args: &[String], i: usize) -> Result<Polynomial, CliError> {
    parse_polynomial_in(&args[i], 2).map_err(|e| parse_err(i, &args[i], 0, e))
}

pub fn univariate(args: &[String], i: usize) -> Result<Polynomial, CliError> {
    parse_univariate(&args[i]).map_err(|e| parse_err(i, &args[i], 0, e))
}

/// A map of `K[x, y]`, given either as one input `(f, g)` or as two.
pub fn map2(args: &[String]) -> Result<PolyMap, CliError> {
    let map = match args.len() {
        1 => parse_map(&args[0]).map_err(|e| parse_err(0, &args[0], 0, e))?,
        2 => PolyMap::pair(poly2(args, 0)?, poly2(args, 1)?).map_err(input_error)?,
        _ => return Err(CliError::Usage("expected a map \"(f, g)\" or two polynomials f g".into())),
    };
    if map.arity() != 2 {
        return Err(CliError::Input(format!("expected a map of K[x, y], got {} components", map.arity())));
    }
    Ok(map)
}

/// Splits at top-level commas, returning byte offsets with the pieces.
fn split_commas(text: &str) -> Vec<(usize, &str)> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
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

/// A list of polynomials in a common ring. Each input may hold several
/// comma-separated polynomials, optionally inside `{...}`.
pub fn poly_list(args: &[String]) -> Result<Vec<Polynomial>, CliError> {
    if args.is_empty() {
        return Err(CliError::Usage("expected at least one polynomial".into()));
    }
    let mut out = Vec::new();
    for (i, text) in args.iter().enumerate() {
        let trimmed = text.trim();
        let (body, base) = match trimmed.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
            Some(inner) => (inner, text.find('{').unwrap() + 1),
            None => (text.as_str(), 0),
        };
        for (offset, piece) in split_commas(body) {
            let p = parse_polynomial(piece).map_err(|e| parse_err(i, text, base + offset, e))?;
            out.push(p);
        }
    }
    let n = out.iter().map(Polynomial::nvars).max().unwrap_or(2);
    Ok(out.into_iter().map(|p| p.with_nvars(n)).collect())
}

/// Rank used for free-group inputs: `--rank`, else the largest generator
/// index among all inputs (at least 2).
pub fn common_rank(args: &[String], rank: Option<usize>) -> Result<usize, CliError> {
    if let Some(r) = rank {
        return Ok(r);
    }
    let mut r = 2;
    for (i, text) in args.iter().enumerate() {
        let t = parse_tuple(text, None).map_err(|e| parse_err(i, text, 0, e))?;
        r = r.max(t.rank());
    }
    Ok(r)
}

pub fn word(args: &[String], i: usize, rank: usize) -> Result<FreeWord, CliError> {
    parse_word(&args[i], Some(rank)).map_err(|e| parse_err(i, &args[i], 0, e))
}

pub fn tuple(args: &[String], i: usize, rank: usize) -> Result<GeneratorTuple, CliError> {
    parse_tuple(&args[i], Some(rank)).map_err(|e| parse_err(i, &args[i], 0, e))
}

/// A tuple given as one input `"w1, w2"` or as one word per input.
pub fn tuple_from_inputs(args: &[String], rank: usize) -> Result<GeneratorTuple, CliError> {
    match args.len() {
        0 => Err(CliError::Usage("expected a tuple of words".into())),
        1 => tuple(args, 0, rank),
        _ => {
            let words = (0..args.len()).map(|i| word(args, i, rank)).collect::<Result<Vec<_>, _>>()?;
            GeneratorTuple::new(words).map_err(input_error)
        }
    }
}
