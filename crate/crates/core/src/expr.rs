//! Parsing dehomogenized maps written as text, e.g. `1/6z^2 - 7/6z - 2`,
//! `(7z^2 + 31z - 6)/(-2z^2 - 6z + 6)` or `\frac{z^2 - 1}{2z}`.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{denominator_lcm, parse_rational, Integer, Rational};
use crate::dynamics::{DynSystem, DynamicsError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapParseError {
    #[error("cannot parse term `{0}`")]
    BadTerm(String),
    #[error("unbalanced brackets in `{0}`")]
    Unbalanced(String),
    #[error("empty expression")]
    Empty,
    #[error(transparent)]
    Map(#[from] DynamicsError),
}

// Index of the bracket closing the one at `open`.
fn closing(s: &[u8], open: usize) -> Option<usize> {
    let (o, c) = (s[open], if s[open] == b'(' { b')' } else { b'}' });
    let mut depth = 0;
    for (i, &ch) in s.iter().enumerate().skip(open) {
        if ch == o {
            depth += 1;
        } else if ch == c {
            depth -= 1;
            if depth == 0 {
                return Some(i);
            }
        }
    }
    None
}

fn split_fraction(s: &str) -> Result<(String, Option<String>), MapParseError> {
    let unbalanced = || MapParseError::Unbalanced(s.to_string());
    if let Some(rest) = s.strip_prefix("\\frac") {
        let b = rest.as_bytes();
        if b.first() != Some(&b'{') {
            return Err(unbalanced());
        }
        let end = closing(b, 0).ok_or_else(unbalanced)?;
        let tail = &rest[end + 1..];
        let tb = tail.as_bytes();
        if tb.first() != Some(&b'{') || closing(tb, 0) != Some(tb.len() - 1) {
            return Err(unbalanced());
        }
        return Ok((rest[1..end].to_string(), Some(tail[1..tail.len() - 1].to_string())));
    }
    let b = s.as_bytes();
    if b.first() == Some(&b'(') {
        let end = closing(b, 0).ok_or_else(unbalanced)?;
        let num = &s[1..end];
        if end == s.len() - 1 {
            return Ok((num.to_string(), None));
        }
        let den = s[end + 1..].strip_prefix('/').ok_or_else(unbalanced)?;
        let den = match den.strip_prefix('(') {
            Some(d) => d.strip_suffix(')').ok_or_else(unbalanced)?,
            None => den,
        };
        return Ok((num.to_string(), Some(den.to_string())));
    }
    Ok((s.to_string(), None))
}

fn parse_term(term: &str, out: &mut Vec<Rational>) -> Result<(), MapParseError> {
    let bad = || MapParseError::BadTerm(term.to_string());
    let (sign, body) = match term.as_bytes().first() {
        Some(b'-') => (-1, &term[1..]),
        Some(b'+') => (1, &term[1..]),
        _ => (1, term),
    };
    let (coef, power) = match body.find(['z', 'x']) {
        Some(i) => {
            let exp = &body[i + 1..];
            let power = match exp.strip_prefix('^') {
                Some(e) => e.trim_matches(['{', '}']).parse::<usize>().map_err(|_| bad())?,
                None if exp.is_empty() => 1,
                None => return Err(bad()),
            };
            let coef = body[..i].trim_end_matches('*');
            let coef = if coef.is_empty() {
                Rational::one()
            } else {
                parse_rational(coef).ok_or_else(bad)?
            };
            (coef, power)
        }
        None => (parse_rational(body).ok_or_else(bad)?, 0),
    };
    if out.len() <= power {
        out.resize(power + 1, Rational::zero());
    }
    out[power] += coef * Rational::from_integer(sign.into());
    Ok(())
}

/// Coefficients (ascending) of a polynomial in `z` (or `x`) with rational
/// coefficients.
pub fn parse_polynomial(s: &str) -> Result<Vec<Rational>, MapParseError> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(MapParseError::Empty);
    }
    let mut out = Vec::new();
    let mut start = 0;
    let b = s.as_bytes();
    for i in 1..=b.len() {
        // A sign starts a new term unless it follows `^`.
        if i == b.len() || ((b[i] == b'+' || b[i] == b'-') && b[i - 1] != b'^') {
            parse_term(&s[start..i], &mut out)?;
            start = i;
        }
    }
    Ok(out)
}

/// Parses a dehomogenized map; its degree is the larger of the two degrees.
pub fn parse_map(s: &str) -> Result<DynSystem, MapParseError> {
    let s: String = s.chars().filter(|c| !c.is_whitespace() && *c != '$').collect();
    let (num, den) = split_fraction(&s)?;
    let num = parse_polynomial(&num)?;
    let den = match den {
        Some(d) => parse_polynomial(&d)?,
        None => vec![Rational::one()],
    };
    let degree_of = |p: &[Rational]| p.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
    let d = degree_of(&num).max(degree_of(&den));
    let all: Vec<Rational> = num.iter().chain(&den).cloned().collect();
    let l = denominator_lcm(&all);
    let scale = |p: &[Rational]| -> Vec<Integer> {
        (0..=d)
            .map(|i| {
                p.get(i)
                    .map_or_else(Integer::zero, |c| (c * Rational::from_integer(l.clone())).to_integer())
            })
            .collect()
    };
    Ok(DynSystem::new(scale(&num), scale(&den))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_forms() {
        let f = parse_map("1/6z^2 - 7/6z - 2").unwrap();
        assert_eq!(f, DynSystem::from_i64s(&[-12, -7, 1], &[6, 0, 0]).unwrap());
        assert_eq!(parse_map(&f.display_affine()).unwrap(), f);
        let g = parse_map("1/30x^4 - 14/15x^3 + 82/15x^2 - 257/30x + 3").unwrap();
        assert_eq!(
            g,
            DynSystem::from_i64s(&[90, -257, 164, -28, 1], &[30, 0, 0, 0, 0]).unwrap()
        );
    }

    #[test]
    fn rational_forms_up_to_sign() {
        let a = parse_map("(7z^2 + 31z - 6)/(-2z^2 - 6z + 6)").unwrap();
        let b = parse_map("\\frac{-7z^2 - 31z + 6}{2z^2 + 6z - 6}").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, DynSystem::from_i64s(&[-6, 31, 7], &[6, -6, -2]).unwrap());
        assert_eq!(parse_map(&a.display_affine()).unwrap(), a);
        let sq = parse_map("z^2").unwrap();
        assert_eq!(sq, DynSystem::from_i64s(&[0, 0, 1], &[1, 0, 0]).unwrap());
        let inv = parse_map("\\frac{7z - 7}{-5z^2 + 4z + 7}").unwrap();
        assert_eq!(inv.degree(), 2);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_map(""), Err(MapParseError::Empty)));
        assert!(matches!(parse_map("z^2 + q"), Err(MapParseError::BadTerm(_))));
        assert!(matches!(parse_map("(z^2 + 1/(z"), Err(MapParseError::Unbalanced(_))));
        assert!(matches!(parse_map("z"), Err(MapParseError::Map(_))));
        assert!(matches!(parse_map("(z^2 - 1)/(z - 1)"), Err(MapParseError::Map(_))));
    }
}
