//! Text grammar for words and tuples.
//!
//! A word is a sequence of factors separated by whitespace or `*`. A factor
//! is a generator `x1`, `x2`, ... or a letter `a`..`z` (`a` = `x1`),
//! optionally followed by `^n` with `n` a nonzero integer. Uppercase means
//! inverse (`A` = `a^-1`, `X2` = `x2^-1`). A lone `1` is the identity.
//! Tuples are comma-separated words, optionally in parentheses.

use super::word::{free_reduce, FreeWord, GeneratorTuple};
use crate::poly::ParseError;

fn err<T>(pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        message: message.into(),
    })
}

/// Letters of a word, unreduced.
pub fn parse_letters(text: &str) -> Result<Vec<i32>, ParseError> {
    let b = text.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    let mut saw_factor = false;
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() || c == b'*' {
            i += 1;
            continue;
        }
        let gen: i32 = if c == b'1' && !b.get(i + 1).is_some_and(u8::is_ascii_digit) {
            i += 1;
            0
        } else if (c == b'x' || c == b'X') && b.get(i + 1).is_some_and(u8::is_ascii_digit) {
            let mut j = i + 1;
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            let k: i32 = match text[i + 1..j].parse() {
                Ok(k) if k >= 1 => k,
                _ => return err(i + 1, "generator index must be a positive integer"),
            };
            i = j;
            if c == b'X' {
                -k
            } else {
                k
            }
        } else if c.is_ascii_lowercase() {
            i += 1;
            (c - b'a' + 1) as i32
        } else if c.is_ascii_uppercase() {
            i += 1;
            -((c - b'A' + 1) as i32)
        } else {
            return err(i, format!("unexpected character {:?}", c as char));
        };
        let mut power: i64 = 1;
        if i < b.len() && b[i] == b'^' {
            let mut j = i + 1;
            if j < b.len() && (b[j] == b'-' || b[j] == b'+') {
                j += 1;
            }
            let digits = j;
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            if j == digits {
                return err(i + 1, "expected an integer exponent");
            }
            power = match text[i + 1..j].parse() {
                Ok(p) => p,
                Err(_) => return err(i + 1, "exponent out of range"),
            };
            i = j;
        }
        saw_factor = true;
        if gen == 0 || power == 0 {
            continue;
        }
        let letter = if power < 0 { -gen } else { gen };
        for _ in 0..power.unsigned_abs() {
            out.push(letter);
        }
    }
    if !saw_factor {
        return err(0, "empty word (write 1 for the identity)");
    }
    Ok(out)
}

fn default_rank(max_index: usize) -> usize {
    max_index.max(2)
}

fn to_word(raw: &[i32], rank: usize, pos: usize) -> Result<FreeWord, ParseError> {
    free_reduce(raw, rank).or_else(|e| err(pos, e.to_string()))
}

/// Parses a word; the rank defaults to the largest index used, and at
/// least 2.
pub fn parse_word(text: &str, rank: Option<usize>) -> Result<FreeWord, ParseError> {
    let raw = parse_letters(text)?;
    let max = raw.iter().map(|g| g.unsigned_abs() as usize).max().unwrap_or(0);
    to_word(&raw, rank.unwrap_or(default_rank(max)), 0)
}

/// Parses a comma-separated tuple of words with a common rank.
pub fn parse_tuple(text: &str, rank: Option<usize>) -> Result<GeneratorTuple, ParseError> {
    let trimmed = text.trim();
    let (body, offset) = match trimmed.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        Some(inner) => (inner, text.find('(').unwrap() + 1),
        None => (text, 0),
    };
    let mut parts = Vec::new();
    let mut pos = offset;
    for piece in body.split(',') {
        let raw = parse_letters(piece).map_err(|e| ParseError {
            pos: e.pos + pos,
            message: e.message,
        })?;
        parts.push((raw, pos));
        pos += piece.len() + 1;
    }
    let max = parts
        .iter()
        .flat_map(|(r, _)| r.iter())
        .map(|g| g.unsigned_abs() as usize)
        .max()
        .unwrap_or(0);
    let rank = rank.unwrap_or(default_rank(max));
    let words = parts
        .iter()
        .map(|(raw, p)| to_word(raw, rank, *p))
        .collect::<Result<Vec<_>, _>>()?;
    GeneratorTuple::new(words).or_else(|e| err(0, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar() {
        assert_eq!(parse_letters("x1 x2^-1 x1").unwrap(), vec![1, -2, 1]);
        assert_eq!(parse_letters("a B a").unwrap(), vec![1, -2, 1]);
        assert_eq!(parse_letters("x1*x1*x2").unwrap(), vec![1, 1, 2]);
        assert_eq!(parse_letters("a^3 b^-2").unwrap(), vec![1, 1, 1, -2, -2]);
        assert_eq!(parse_letters("X1").unwrap(), vec![-1]);
        assert_eq!(parse_letters("1").unwrap(), Vec::<i32>::new());
        assert!(parse_letters("").is_err());
        assert_eq!(parse_letters("x1 ?").unwrap_err().pos, 3);
        assert!(parse_letters("a^").is_err());
    }

    #[test]
    fn words_and_tuples() {
        let w = parse_word("x1 x1^-1 x2", None).unwrap();
        assert_eq!(w.letters(), &[2]);
        assert_eq!(w.rank(), 2);
        assert_eq!(parse_word("x3", None).unwrap().rank(), 3);
        assert!(parse_word("x3", Some(2)).is_err());
        let t = parse_tuple("(x1 x2, x2)", None).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.words()[0].letters(), &[1, 2]);
        let e = parse_tuple("x1, x2 #", None).unwrap_err();
        assert_eq!(e.pos, 7);
    }
}
