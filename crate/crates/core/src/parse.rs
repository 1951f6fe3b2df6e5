//! Textual address syntax.
//!
//! ```text
//! address      := "inf" | generator | intermediate | external
//! external     := "(" entry+ ")^inf"            pure periodic   (1 2)^inf
//!               | entry* "[" entry+ "]"         preperiod + period   3 [1 2]
//! intermediate := entry* half "inf"             5 1/2 inf
//! entry        := "-"? digits                   integer
//! half         := "-"? odd-digits "/2"          exact half-integer, e.g. -3/2
//! generator    := "gen:iterexp:" digits         built-in iterated exponential
//! ```
//!
//! Tokens are separated by whitespace except that `(`, `)`, `[`, `]` and the
//! `^inf` suffix bind tightly. `to_text`/`parse` round-trip for every form.

use thiserror::Error;

use crate::address::{ExtendedAddress, ExternalAddress};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { position, message: message.into() })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    /// twice the half-integer value
    Half(i64),
    Inf,
    LBracket,
    RBracket,
    LParen,
    /// the `)^inf` closer of a periodic block
    RParenInf,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        match c {
            '[' => {
                toks.push((i, Tok::LBracket));
                i += 1;
            }
            ']' => {
                toks.push((i, Tok::RBracket));
                i += 1;
            }
            '(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                if text[i..].starts_with(")^inf") {
                    toks.push((i, Tok::RParenInf));
                    i += 5;
                } else {
                    return err(i, "expected \")^inf\" to close a periodic block");
                }
            }
            '-' | '0'..='9' => {
                let start = i;
                i += 1;
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                let num: i64 = text[start..i]
                    .parse()
                    .map_err(|_| ParseError { position: start, message: "invalid integer".into() })?;
                if i + 1 < bytes.len() && bytes[i] == b'/' && bytes[i + 1] == b'2' {
                    i += 2;
                    if num.rem_euclid(2) != 1 {
                        return err(start, "half-integer numerator must be odd");
                    }
                    toks.push((start, Tok::Half(num)));
                } else {
                    toks.push((start, Tok::Int(num)));
                }
            }
            'i' => {
                if text[i..].starts_with("inf") {
                    toks.push((i, Tok::Inf));
                    i += 3;
                } else {
                    return err(i, "unexpected token");
                }
            }
            _ => return err(i, format!("unexpected character '{c}'")),
        }
    }
    Ok(toks)
}

/// Parse any point of the completed address space.
pub fn parse_extended(text: &str) -> Result<ExtendedAddress, ParseError> {
    let trimmed = text.trim();
    if let Some(rest) = trimmed.strip_prefix("gen:") {
        return parse_generator(rest, text.len() - trimmed.len());
    }
    let toks = tokenize(trimmed)?;
    if toks.is_empty() {
        return err(0, "empty address");
    }
    if toks.len() == 1 && toks[0].1 == Tok::Inf {
        return Ok(ExtendedAddress::Infinity);
    }

    // periodic block form: ( e+ )^inf
    if toks[0].1 == Tok::LParen {
        let mut entries = Vec::new();
        for (pos, t) in &toks[1..toks.len() - 1] {
            match t {
                Tok::Int(v) => entries.push(*v),
                _ => return err(*pos, "only integers may appear inside a period"),
            }
        }
        match toks.last().unwrap() {
            (_, Tok::RParenInf) => {}
            (pos, _) => return err(*pos, "periodic block must end with \")^inf\""),
        }
        if entries.is_empty() {
            return err(toks[0].0, "period must be nonempty");
        }
        return Ok(ExtendedAddress::Infinite(
            ExternalAddress::periodic(entries).expect("nonempty period"),
        ));
    }

    // preperiod + bracketed period: e* [ e+ ]
    if toks.iter().any(|(_, t)| *t == Tok::LBracket) {
        let mut pre = Vec::new();
        let mut iter = toks.iter().peekable();
        while let Some((pos, t)) = iter.next() {
            match t {
                Tok::Int(v) => pre.push(*v),
                Tok::LBracket => {
                    let mut per = Vec::new();
                    for (pos2, t2) in iter.by_ref() {
                        match t2 {
                            Tok::Int(v) => per.push(*v),
                            Tok::RBracket => {
                                if per.is_empty() {
                                    return err(*pos2, "period must be nonempty");
                                }
                                return Ok(ExtendedAddress::Infinite(
                                    ExternalAddress::eventually_periodic(pre, per)
                                        .expect("nonempty period"),
                                ));
                            }
                            _ => return err(*pos2, "only integers may appear inside a period"),
                        }
                    }
                    return err(*pos, "unclosed '['");
                }
                _ => return err(*pos, "expected integer or '[' in preperiod"),
            }
        }
        unreachable!("loop returns on bracket");
    }

    // intermediate: e* half inf
    match toks.last().unwrap() {
        (_, Tok::Inf) => {
            if toks.len() < 2 {
                return err(0, "bare inf handled above");
            }
            let (hpos, half) = &toks[toks.len() - 2];
            let last_twice = match half {
                Tok::Half(h) => *h,
                _ => return err(*hpos, "entry before inf must be a half-integer like 1/2"),
            };
            let mut heads = Vec::new();
            for (pos, t) in &toks[..toks.len() - 2] {
                match t {
                    Tok::Int(v) => heads.push(*v),
                    _ => return err(*pos, "leading entries of an intermediate address are integers"),
                }
            }
            Ok(ExtendedAddress::intermediate(heads, last_twice))
        }
        (pos, _) => err(
            *pos,
            "an infinite address needs a period \"[..]\"/\"(..)^inf\", a generator, or an \"inf\" tail",
        ),
    }
}

fn parse_generator(rest: &str, offset: usize) -> Result<ExtendedAddress, ParseError> {
    if let Some(seed_text) = rest.strip_prefix("iterexp:") {
        let seed: u32 = seed_text.trim().parse().map_err(|_| ParseError {
            position: offset + 4 + 8,
            message: "generator seed must be a small non-negative integer".into(),
        })?;
        Ok(ExtendedAddress::Infinite(ExternalAddress::iterexp(seed)))
    } else {
        err(offset + 4, format!("unknown generator \"{rest}\"; available: iterexp:<seed>"))
    }
}

/// Parse an infinite external address (rejects intermediates and `inf`).
pub fn parse_external(text: &str) -> Result<ExternalAddress, ParseError> {
    match parse_extended(text)? {
        ExtendedAddress::Infinite(a) => Ok(a),
        _ => err(0, "expected an infinite external address"),
    }
}
