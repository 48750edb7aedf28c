//! Lexer and Pratt parser producing an untyped syntax tree.
//!
//! Grammar (EBNF):
//!
//! ```text
//! expr     = term { ("+" | "-") term } ;
//! term     = unary { ("*" | "/") unary } ;
//! unary    = "-" unary | power ;
//! power    = primary { "^" exponent } ;
//! exponent = ["-"] integer | "(" ["-"] integer ")" ;
//! primary  = number | ident | ident "(" expr ")" | "(" expr ")" ;
//! number   = digits ["." digits] [("e" | "E") ["+" | "-"] digits] ;
//! rational = integer "/" integer ;   (* read as one literal unless followed by "^" *)
//! ```
//!
//! A minus sign directly in front of a numeric literal produces a negative
//! literal rather than a negation node, except when the literal is the base of
//! a power (`-3^2` is `-(3^2)`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::ExprError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num { value: BigRational, integer: bool },
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: usize,
}

/// Binary operators of the surface syntax.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Untyped syntax tree. Identifiers are resolved by the consumer, which lets
/// the same grammar serve plane expressions and jet-polynomial text.
#[derive(Clone, Debug, PartialEq)]
pub enum Ast {
    Num(BigRational),
    Ident { name: String, pos: usize },
    Neg(Box<Ast>),
    Bin(BinOp, Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, i32),
    Call { name: String, pos: usize, arg: Box<Ast> },
}

fn lex(src: &str) -> Result<Vec<Token>, ExprError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let pos = i;
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token { tok, pos });
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let (value, integer, next) = lex_number(src, i)?;
            out.push(Token { tok: Tok::Num { value, integer }, pos });
            i = next;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(src[start..i].to_string()), pos });
            continue;
        }
        return Err(ExprError::Syntax { pos, msg: format!("unexpected character `{c}`") });
    }
    out.push(Token { tok: Tok::End, pos: src.len() });
    Ok(out)
}

fn lex_number(src: &str, start: usize) -> Result<(BigRational, bool, usize), ExprError> {
    let bytes = src.as_bytes();
    let mut i = start;
    let mut digits = String::new();
    let mut frac_len = 0usize;
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        digits.push(bytes[i] as char);
        i += 1;
    }
    let mut integer = true;
    if i < bytes.len() && bytes[i] == b'.' {
        integer = false;
        i += 1;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            digits.push(bytes[i] as char);
            frac_len += 1;
            i += 1;
        }
    }
    if digits.is_empty() {
        return Err(ExprError::Syntax { pos: start, msg: "malformed number".into() });
    }
    let mut exp10: i64 = -(frac_len as i64);
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        let mut sign = 1i64;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            if bytes[j] == b'-' {
                sign = -1;
            }
            j += 1;
        }
        let es = j;
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        if j > es {
            let e: i64 =
                src[es..j].parse().map_err(|_| ExprError::Syntax { pos: i, msg: "exponent out of range".into() })?;
            exp10 += sign * e;
            integer = false;
            i = j;
        }
    }
    let mantissa: BigInt = digits.parse().expect("digit string");
    let ten = BigInt::from(10);
    let value = if exp10 >= 0 {
        BigRational::from_integer(mantissa * num_traits::pow(ten, exp10 as usize))
    } else {
        BigRational::new(mantissa, num_traits::pow(ten, (-exp10) as usize))
    };
    let integer = integer && value.is_integer();
    Ok((value, integer, i))
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

const BP_ADD: u8 = 1;
const BP_MUL: u8 = 3;
const BP_UNARY: u8 = 5;
const BP_POW: u8 = 7;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let idx = (self.at + k).min(self.toks.len() - 1);
        &self.toks[idx].tok
    }

    fn pos(&self) -> usize {
        self.toks[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ExprError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(ExprError::Syntax { pos: self.pos(), msg: format!("expected {what}") })
        }
    }

    /// If the upcoming tokens form a literal (with `int / int` merged into a
    /// rational), returns it together with the number of tokens it spans.
    fn literal_ahead(&self) -> Option<(BigRational, usize)> {
        let Tok::Num { value, integer } = self.peek() else {
            return None;
        };
        if *integer {
            if let (Tok::Slash, Tok::Num { value: den, integer: true }) = (self.peek_at(1), self.peek_at(2)) {
                if *self.peek_at(3) != Tok::Caret && !den.is_zero() {
                    return Some((value / den, 3));
                }
            }
        }
        Some((value.clone(), 1))
    }

    fn parse_expr(&mut self, min_bp: u8) -> Result<Ast, ExprError> {
        let mut lhs = self.parse_prefix()?;
        loop {
            let (op, lbp) = match self.peek() {
                Tok::Plus => (Some(BinOp::Add), BP_ADD),
                Tok::Minus => (Some(BinOp::Sub), BP_ADD),
                Tok::Star => (Some(BinOp::Mul), BP_MUL),
                Tok::Slash => (Some(BinOp::Div), BP_MUL),
                Tok::Caret => (None, BP_POW),
                _ => break,
            };
            if lbp < min_bp {
                break;
            }
            self.bump();
            match op {
                Some(op) => {
                    let rhs = self.parse_expr(lbp + 1)?;
                    lhs = Ast::Bin(op, Box::new(lhs), Box::new(rhs));
                }
                None => {
                    let n = self.parse_exponent()?;
                    lhs = Ast::Pow(Box::new(lhs), n);
                }
            }
        }
        Ok(lhs)
    }

    fn parse_exponent(&mut self) -> Result<i32, ExprError> {
        let paren = *self.peek() == Tok::LParen;
        if paren {
            self.bump();
        }
        let neg = *self.peek() == Tok::Minus;
        if neg {
            self.bump();
        }
        let pos = self.pos();
        let n = match self.bump().tok {
            Tok::Num { value, integer: true } => value.to_integer(),
            _ => return Err(ExprError::Syntax { pos, msg: "exponent must be an integer literal".into() }),
        };
        let n: i32 = n.try_into().map_err(|_| ExprError::Syntax { pos, msg: "exponent out of range".into() })?;
        if paren {
            self.expect(Tok::RParen, "`)` after exponent")?;
        }
        Ok(if neg { -n } else { n })
    }

    fn parse_prefix(&mut self) -> Result<Ast, ExprError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num { .. } => {
                let (value, span) = self.literal_ahead().expect("number token");
                for _ in 0..span {
                    self.bump();
                }
                Ok(Ast::Num(value))
            }
            Tok::Minus => {
                self.bump();
                if let Some((value, span)) = self.literal_ahead() {
                    if *self.peek_at(span) != Tok::Caret {
                        for _ in 0..span {
                            self.bump();
                        }
                        return Ok(Ast::Num(-value));
                    }
                }
                let inner = self.parse_expr(BP_UNARY)?;
                Ok(Ast::Neg(Box::new(inner)))
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    let arg = self.parse_expr(0)?;
                    self.expect(Tok::RParen, "`)` closing the argument list")?;
                    Ok(Ast::Call { name, pos, arg: Box::new(arg) })
                } else {
                    Ok(Ast::Ident { name, pos })
                }
            }
            Tok::LParen => {
                self.bump();
                let inner = self.parse_expr(0)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::End => Err(ExprError::Syntax { pos, msg: "unexpected end of input".into() }),
            other => Err(ExprError::Syntax { pos, msg: format!("unexpected token {other:?}") }),
        }
    }
}

/// Parses infix text into a syntax tree.
pub fn parse_ast(src: &str) -> Result<Ast, ExprError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, at: 0 };
    let ast = p.parse_expr(0)?;
    if *p.peek() != Tok::End {
        return Err(ExprError::Syntax { pos: p.pos(), msg: "trailing input".into() });
    }
    Ok(ast)
}

impl Ast {
    /// Folds a syntax tree that contains only numbers into a rational.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self {
            Ast::Num(q) => Some(q.clone()),
            Ast::Neg(a) => a.as_constant().map(|q| -q),
            Ast::Bin(op, a, b) => {
                let (a, b) = (a.as_constant()?, b.as_constant()?);
                match op {
                    BinOp::Add => Some(a + b),
                    BinOp::Sub => Some(a - b),
                    BinOp::Mul => Some(a * b),
                    BinOp::Div => (!b.is_zero()).then(|| a / b),
                }
            }
            Ast::Pow(a, n) => {
                let a = a.as_constant()?;
                if *n < 0 && a.is_zero() {
                    return None;
                }
                Some(num_traits::pow::Pow::pow(&a, *n))
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_literal_merges() {
        assert_eq!(parse_ast("1/2").unwrap(), Ast::Num(q(1, 2)));
        assert_eq!(parse_ast("-3/4").unwrap(), Ast::Num(q(-3, 4)));
    }

    #[test]
    fn literal_before_power_does_not_merge() {
        let a = parse_ast("2/3^2").unwrap();
        assert_eq!(
            a,
            Ast::Bin(BinOp::Div, Box::new(Ast::Num(q(2, 1))), Box::new(Ast::Pow(Box::new(Ast::Num(q(3, 1))), 2)))
        );
        assert_eq!(parse_ast("-3^2").unwrap().as_constant().unwrap(), q(-9, 1));
    }

    #[test]
    fn decimal_is_exact() {
        assert_eq!(parse_ast("0.25").unwrap(), Ast::Num(q(1, 4)));
        assert_eq!(parse_ast("1.5e-1").unwrap(), Ast::Num(q(3, 20)));
    }

    #[test]
    fn errors_carry_position() {
        match parse_ast("x + * y") {
            Err(ExprError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_ast("(x").is_err());
        assert!(parse_ast("x^y").is_err());
        assert!(parse_ast("x $ y").is_err());
    }

    #[test]
    fn precedence() {
        assert_eq!(parse_ast("1 - 2*3^2").unwrap().as_constant().unwrap(), q(-17, 1));
        assert_eq!(parse_ast("2^-1").unwrap().as_constant().unwrap(), q(1, 2));
        assert_eq!(parse_ast("8/2/2").unwrap().as_constant().unwrap(), q(2, 1));
        assert_eq!(parse_ast("-2*3").unwrap().as_constant().unwrap(), q(-6, 1));
    }
}
