//! Plain-text reading of jet polynomials.
//!
//! The printed form of [`JetPoly`] and [`RAlg`] is a sum of products of a
//! rational coefficient, powers of `R` (possibly negative), curvature words
//! `R12`, and jet variables `s`, `s21`. Reading accepts the same grammar as
//! plane expressions, with identifiers `R`, `R<word>`, `s`, `s<word>` for any
//! written word over {1, 2}; words are brought to canonical form on input.
//! Division is allowed only by elements `q·R^k`.

use symexpr::{parse_ast, Ast, BinOp};

use crate::error::JetError;
use crate::jet::JetPoly;
use crate::ralg::RAlg;
use crate::ring::free_word;
use crate::word::Word;

/// Reads a jet polynomial; jet variables are canonicalized in free mode.
pub fn parse_jet(src: &str) -> Result<JetPoly, JetError> {
    let ast = parse_ast(src)?;
    from_ast(&ast)
}

/// Reads an element of the coefficient algebra.
pub fn parse_ralg(src: &str) -> Result<RAlg, JetError> {
    let p = parse_jet(src)?;
    let coeffs = p
        .as_s_poly()
        .filter(|c| c.len() <= 1)
        .ok_or_else(|| JetError::Parse { pos: 0, msg: "jet variables are not allowed in a coefficient".into() })?;
    Ok(coeffs.into_iter().next().unwrap_or_default())
}

fn ident(name: &str, pos: usize) -> Result<JetPoly, JetError> {
    let bad = || JetError::Parse { pos, msg: format!("unknown identifier `{name}`") };
    let (head, tail) = name.split_at(1);
    let word: Word = tail.parse().map_err(|_| bad())?;
    match head {
        "R" => Ok(JetPoly::from_ralg(RAlg::word(word))),
        "s" => Ok(free_word(word)),
        _ => Err(bad()),
    }
}

fn invert(p: &JetPoly) -> Option<JetPoly> {
    let c = p.as_s_poly().filter(|c| c.len() == 1)?;
    c[0].inverse().map(JetPoly::from_ralg)
}

fn from_ast(ast: &Ast) -> Result<JetPoly, JetError> {
    Ok(match ast {
        Ast::Num(q) => JetPoly::from_ralg(RAlg::constant(q.clone())),
        Ast::Ident { name, pos } => ident(name, *pos)?,
        Ast::Neg(a) => -from_ast(a)?,
        Ast::Bin(op, a, b) => {
            let (x, y) = (from_ast(a)?, from_ast(b)?);
            match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => &x * &y,
                BinOp::Div => {
                    let inv = invert(&y).ok_or_else(|| JetError::Parse {
                        pos: 0,
                        msg: format!("cannot divide by `{y}`: only q*R^k is invertible"),
                    })?;
                    &x * &inv
                }
            }
        }
        Ast::Pow(a, n) => {
            let base = from_ast(a)?;
            if *n >= 0 {
                base.pow(*n as u32)
            } else {
                let inv = invert(&base).ok_or_else(|| JetError::Parse {
                    pos: 0,
                    msg: format!("negative power of non-invertible `{base}`"),
                })?;
                inv.pow(n.unsigned_abs())
            }
        }
        Ast::Call { name, pos, .. } => {
            return Err(JetError::Parse { pos: *pos, msg: format!("function `{name}` is not allowed here") })
        }
    })
}

/// Parses `name = expression` blocks; a line that does not start a new entry
/// continues the previous one, and `#` starts a comment line.
pub fn parse_named_blocks(src: &str) -> Result<Vec<(String, JetPoly)>, JetError> {
    let mut raw: Vec<(String, String)> = Vec::new();
    for line in src.lines() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let starts_entry = !line.starts_with(char::is_whitespace)
            && trimmed.split_once('=').is_some_and(|(head, _)| {
                let head = head.trim();
                !head.is_empty() && head.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            });
        if starts_entry {
            let (head, body) = trimmed.split_once('=').expect("checked above");
            raw.push((head.trim().to_string(), body.trim().to_string()));
        } else {
            let last = raw
                .last_mut()
                .ok_or_else(|| JetError::Parse { pos: 0, msg: "continuation before any entry".into() })?;
            last.1.push(' ');
            last.1.push_str(trimmed);
        }
    }
    raw.into_iter()
        .map(|(name, body)| {
            let p = parse_jet(&body).map_err(|e| match e {
                JetError::Parse { pos, msg } => JetError::Parse { pos, msg: format!("in `{name}`: {msg}") },
                other => other,
            })?;
            Ok((name, p))
        })
        .collect()
}

/// Prints `name = expression` blocks in the format read by [`parse_named_blocks`].
pub fn write_named_blocks(entries: &[(String, JetPoly)]) -> String {
    let mut out = String::new();
    for (name, p) in entries {
        out.push_str(name);
        out.push_str(" = ");
        out.push_str(&p.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let p = parse_jet("3/(4*R)*(R12 - R21)*s^2 - 24*R*s21 + s12").unwrap();
        let printed = p.to_string();
        assert_eq!(parse_jet(&printed).unwrap(), p);
        assert!(!p.is_zero());
        assert!(parse_jet("1/R1").is_err());
        assert!(parse_jet("q1").is_err());
        assert!(RAlg::zero().is_zero());
    }
}
