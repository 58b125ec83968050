//! Polynomial string syntax: `3*x^2*y - 1/2`.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::mono::{Mono, MAX_VARS};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let lit: String = cs[st..i].iter().collect();
            out.push(Tok::Num(lit.parse().map_err(|_| Error::Parse(format!("bad number {lit}")))?));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else {
            out.push(match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '^' => Tok::Caret,
                '/' => Tok::Slash,
                _ => return Err(Error::Parse(format!("unexpected character `{c}` in `{s}`"))),
            });
            i += 1;
        }
    }
    Ok(out)
}

/// Parses a polynomial into raw terms (not yet reduced modulo relations).
pub fn parse_poly(s: &str, vars: &[String], field: Field) -> Result<BTreeMap<Mono, Scalar>> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut terms: BTreeMap<Mono, Scalar> = BTreeMap::new();
    let mut i = 0;
    let mut first = true;
    while i < toks.len() {
        let mut sign = 1i64;
        match toks[i] {
            Tok::Plus => i += 1,
            Tok::Minus => {
                sign = -1;
                i += 1;
            }
            _ if first => {}
            _ => return Err(Error::Parse(format!("expected `+` or `-` in `{s}`"))),
        }
        first = false;
        let mut coeff = field.from_i64(sign);
        let mut mono = Mono::ONE;
        let mut expect_factor = true;
        while expect_factor {
            match toks.get(i) {
                Some(Tok::Num(n)) => {
                    i += 1;
                    let mut den = BigInt::from(1);
                    if toks.get(i) == Some(&Tok::Slash) {
                        match toks.get(i + 1) {
                            Some(Tok::Num(d)) => den = d.clone(),
                            _ => return Err(Error::Parse(format!("expected denominator in `{s}`"))),
                        }
                        i += 2;
                    }
                    coeff = &coeff * &field.ratio(n, &den)?;
                }
                Some(Tok::Ident(name)) => {
                    i += 1;
                    let v = vars
                        .iter()
                        .position(|x| x == name)
                        .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
                    let mut e: u32 = 1;
                    if toks.get(i) == Some(&Tok::Caret) {
                        match toks.get(i + 1) {
                            Some(Tok::Num(k)) => {
                                e = k
                                    .to_string()
                                    .parse()
                                    .map_err(|_| Error::Parse(format!("exponent too large in `{s}`")))?
                            }
                            _ => return Err(Error::Parse(format!("expected exponent in `{s}`"))),
                        }
                        i += 2;
                    }
                    let total = mono.0[v] as u32 + e;
                    if total > u16::MAX as u32 {
                        return Err(Error::Parse(format!("exponent too large in `{s}`")));
                    }
                    mono.0[v] = total as u16;
                }
                _ => return Err(Error::Parse(format!("expected a factor in `{s}`"))),
            }
            if toks.get(i) == Some(&Tok::Star) {
                i += 1;
            } else {
                expect_factor = false;
            }
        }
        let e = terms.entry(mono).or_insert_with(|| field.zero());
        *e = &*e + &coeff;
    }
    terms.retain(|_, c| !c.is_zero());
    Ok(terms)
}

/// Parses a single monomial such as `x^2*y` (coefficient must be 1).
pub fn parse_mono(s: &str, vars: &[String], field: Field) -> Result<Mono> {
    let t = parse_poly(s, vars, field)?;
    if t.len() == 1 {
        let (m, c) = t.into_iter().next().unwrap();
        if c.is_one() {
            return Ok(m);
        }
    }
    Err(Error::Parse(format!("`{s}` is not a monomial")))
}

pub fn check_var_count(vars: &[String]) -> Result<()> {
    if vars.len() > MAX_VARS {
        return Err(Error::Invalid(format!("at most {MAX_VARS} variables are supported")));
    }
    for (i, v) in vars.iter().enumerate() {
        let ok = v.chars().next().map(|c| c.is_alphabetic() || c == '_').unwrap_or(false)
            && v.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !ok {
            return Err(Error::Invalid(format!("bad variable name `{v}`")));
        }
        if vars[..i].contains(v) {
            return Err(Error::Invalid(format!("duplicate variable `{v}`")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn parses_mixed_terms() {
        let f = Field::Rationals;
        let t = parse_poly("3*x^2*y - 1/2", &names(), f).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[&Mono::ONE].to_string(), "-1/2");
        let m = Mono::pure_power(0, 2).mul(&Mono::var(1));
        assert_eq!(t[&m].to_string(), "3");
    }

    #[test]
    fn like_terms_cancel() {
        let t = parse_poly("x - x + 2*y*x - x*y", &names(), Field::Rationals).unwrap();
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn unknown_variable_is_reported() {
        let e = parse_poly("z + 1", &names(), Field::Rationals).unwrap_err();
        assert_eq!(e, Error::UnknownVariable("z".into()));
    }

    #[test]
    fn malformed_input() {
        assert!(parse_poly("x +", &names(), Field::Rationals).is_err());
        assert!(parse_poly("x ^", &names(), Field::Rationals).is_err());
        assert!(parse_poly("x y", &names(), Field::Rationals).is_err());
    }
}
