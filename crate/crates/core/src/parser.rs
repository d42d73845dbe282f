//! Concrete syntax.
//!
//! Terms:    t ::= t "+" t | t "*" t | t "/\" t | t "\/" t | ident | nat | "(" t ")"
//!           precedence: lattice (/\, \/) < + < *; all left-associative,
//!           /\ and \/ share a level. A numeral `n` abbreviates 1 + ... + 1.
//!
//! Formulas: φ ::= operand | φ "+" φ | φ "-" φ
//!           operand ::= "sup" ident ["<=" t] "." φ
//!                     | "inf" ident ["<=" t] "." φ
//!                     | rat ["*" operand]
//!                     | "d" "(" t "," t ")"
//!                     | "|" t "|"
//!                     | "(" φ ")"
//!           rat ::= ["-"] nat ["/" nat]
//!           φ - ψ abbreviates φ + -1 * ψ; |t| abbreviates d(t, 0); a bounded
//!           quantifier substitutes x /\ t for x in its body.
//!
//! Conditions: c ::= φ "<=" φ

use std::fmt;

use thiserror::Error;

use crate::rat::{rat_int, Rat};
use crate::syntax::{Condition, Formula, Term};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(u64),
    Plus,
    Minus,
    Star,
    Slash,
    Meet,
    Join,
    LParen,
    RParen,
    Bar,
    Comma,
    Dot,
    Le,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Nat(n) => write!(f, "'{n}'"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Slash => write!(f, "'/'"),
            Tok::Meet => write!(f, "'/\\'"),
            Tok::Join => write!(f, "'\\/'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::Bar => write!(f, "'|'"),
            Tok::Comma => write!(f, "','"),
            Tok::Dot => write!(f, "'.'"),
            Tok::Le => write!(f, "'<='"),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

type Spanned = (Tok, usize, usize);

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError { line: self.line, col: self.col, msg: msg.into() }
    }

    fn bump(&mut self) -> u8 {
        let c = self.src[self.pos];
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        c
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn tokens(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_whitespace() {
                self.bump();
                continue;
            }
            let (line, col) = (self.line, self.col);
            let tok = match c {
                b'+' => {
                    self.bump();
                    Tok::Plus
                }
                b'-' => {
                    self.bump();
                    Tok::Minus
                }
                b'*' => {
                    self.bump();
                    Tok::Star
                }
                b'(' => {
                    self.bump();
                    Tok::LParen
                }
                b')' => {
                    self.bump();
                    Tok::RParen
                }
                b'|' => {
                    self.bump();
                    Tok::Bar
                }
                b',' => {
                    self.bump();
                    Tok::Comma
                }
                b'.' => {
                    self.bump();
                    Tok::Dot
                }
                b'/' => {
                    self.bump();
                    if self.peek() == Some(b'\\') {
                        self.bump();
                        Tok::Meet
                    } else {
                        Tok::Slash
                    }
                }
                b'\\' => {
                    self.bump();
                    if self.peek() == Some(b'/') {
                        self.bump();
                        Tok::Join
                    } else {
                        return Err(self.err("expected '/' after '\\'"));
                    }
                }
                b'<' => {
                    self.bump();
                    if self.peek() == Some(b'=') {
                        self.bump();
                        Tok::Le
                    } else {
                        return Err(self.err("expected '=' after '<'"));
                    }
                }
                b'0'..=b'9' => {
                    let mut n: u64 = 0;
                    while matches!(self.peek(), Some(b'0'..=b'9')) {
                        let d = (self.bump() - b'0') as u64;
                        n = n
                            .checked_mul(10)
                            .and_then(|n| n.checked_add(d))
                            .ok_or_else(|| self.err("numeral too large"))?;

                    }
                    Tok::Nat(n)
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    let start = self.pos;
                    while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_' || c == b'\'')
                    {
                        self.bump();
                    }
                    Tok::Ident(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
                }
                c => return Err(self.err(format!("unexpected character '{}'", c as char))),
            };
            out.push((tok, line, col));
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

const RESERVED: [&str; 3] = ["sup", "inf", "d"];

impl Parser {
    fn new(src: &str) -> Result<Parser, ParseError> {
        Ok(Parser { toks: Lexer::new(src).tokens()?, pos: 0 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }


    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|&(_, l, c)| (l, c))
            .unwrap_or((1, 1))
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError { line, col, msg: msg.into() }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, want: Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.err(format!("expected {want}, found {t}"))),
            None => Err(self.err(format!("expected {want}, found end of input"))),
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if !RESERVED.contains(&s.as_str()) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            Some(Tok::Ident(s)) => Err(self.err(format!("'{s}' is reserved"))),
            Some(t) => Err(self.err(format!("expected identifier, found {t}"))),
            None => Err(self.err("expected identifier, found end of input")),
        }
    }

    // Terms ----------------------------------------------------------------

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut t = self.term_sum()?;
        loop {
            match self.peek() {
                Some(Tok::Meet) => {
                    self.pos += 1;
                    t = Term::meet(t, self.term_sum()?);
                }
                Some(Tok::Join) => {
                    self.pos += 1;
                    t = Term::join(t, self.term_sum()?);
                }
                _ => return Ok(t),
            }
        }
    }

    fn term_sum(&mut self) -> Result<Term, ParseError> {
        let mut t = self.term_prod()?;
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            t = Term::sum(t, self.term_prod()?);
        }
        Ok(t)
    }

    fn term_prod(&mut self) -> Result<Term, ParseError> {
        let mut t = self.term_atom()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            t = Term::product(t, self.term_atom()?);
        }
        Ok(t)
    }

    fn term_atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Nat(n)) => {
                self.pos += 1;
                Ok(Term::numeral(n))
            }
            Some(Tok::Ident(_)) => Ok(Term::Var(self.ident()?)),
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.eat(Tok::RParen)?;
                Ok(t)
            }
            Some(t) => Err(self.err(format!("expected term, found {t}"))),
            None => Err(self.err("expected term, found end of input")),
        }
    }

    // Formulas ---------------------------------------------------------------

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.operand()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    f = Formula::add(f, self.operand()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    f = Formula::sub(f, self.operand()?);
                }
                _ => return Ok(f),
            }
        }
    }

    fn rational(&mut self) -> Result<Rat, ParseError> {
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let n = match self.bump() {
            Some(Tok::Nat(n)) => n,
            Some(t) => return Err(self.err(format!("expected numeral, found {t}"))),
            None => return Err(self.err("expected numeral, found end of input")),
        };
        let mut r = rat_int(n as i64);
        if self.peek() == Some(&Tok::Slash) {
            self.pos += 1;
            match self.bump() {
                Some(Tok::Nat(d)) if d > 0 => r /= rat_int(d as i64),
                Some(Tok::Nat(_)) => return Err(self.err("zero denominator")),
                Some(t) => return Err(self.err(format!("expected denominator, found {t}"))),
                None => return Err(self.err("expected denominator, found end of input")),
            }
        }
        Ok(if neg { -r } else { r })
    }

    fn operand(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(kw)) if kw == "sup" || kw == "inf" => {
                self.pos += 1;
                let var = self.ident()?;
                let bound = if self.peek() == Some(&Tok::Le) {
                    self.pos += 1;
                    Some(self.term()?)
                } else {
                    None
                };
                self.eat(Tok::Dot)?;
                let body = self.formula()?;
                Ok(match (kw.as_str(), bound) {
                    ("sup", None) => Formula::sup(&var, body),
                    ("sup", Some(t)) => Formula::bounded_sup(&var, &t, &body),
                    (_, Some(t)) => Formula::bounded_inf(&var, &t, &body),
                    (_, None) => Formula::inf(&var, body),
                })
            }
            Some(Tok::Ident(kw)) if kw == "d" => {
                self.pos += 1;
                self.eat(Tok::LParen)?;
                let a = self.term()?;
                self.eat(Tok::Comma)?;
                let b = self.term()?;
                self.eat(Tok::RParen)?;
                Ok(Formula::Dist(a, b))
            }
            Some(Tok::Bar) => {
                self.pos += 1;
                let t = self.term()?;
                self.eat(Tok::Bar)?;
                Ok(Formula::norm(t))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.formula()?;
                self.eat(Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::Minus) | Some(Tok::Nat(_)) => {
                let r = self.rational()?;
                if self.peek() == Some(&Tok::Star) {
                    self.pos += 1;
                    Ok(Formula::scale(r, self.operand()?))
                } else {
                    Ok(Formula::Const(r))
                }
            }
            Some(t) => Err(self.err(format!("expected formula, found {t}"))),
            None => Err(self.err("expected formula, found end of input")),
        }
    }

    fn condition(&mut self) -> Result<Condition, ParseError> {
        let lhs = self.formula()?;
        self.eat(Tok::Le)?;
        let rhs = self.formula()?;
        Ok(Condition::new(lhs, rhs))
    }

    fn finish<T>(self, v: T) -> Result<T, ParseError> {
        match self.peek() {
            None => Ok(v),
            Some(t) => {
                let msg = format!("unexpected {t} after complete input");
                Err(self.err(msg))
            }
        }
    }
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.term()?;
    p.finish(t)
}

pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(src)?;
    let f = p.formula()?;
    p.finish(f)
}

pub fn parse_condition(src: &str) -> Result<Condition, ParseError> {
    let mut p = Parser::new(src)?;
    let c = p.condition()?;
    p.finish(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    #[test]
    fn term_precedence() {
        assert_eq!(
            parse_term("x + y * z").unwrap(),
            Term::sum(Term::var("x"), Term::product(Term::var("y"), Term::var("z")))
        );
        assert_eq!(
            parse_term("x /\\ y + z").unwrap(),
            Term::meet(Term::var("x"), Term::sum(Term::var("y"), Term::var("z")))
        );
        // mixed lattice operators associate left at one level
        assert_eq!(
            parse_term("x /\\ y \\/ z").unwrap(),
            Term::join(Term::meet(Term::var("x"), Term::var("y")), Term::var("z"))
        );
        assert_eq!(parse_term("2").unwrap(), Term::sum(Term::One, Term::One));
    }

    #[test]
    fn formula_sugar() {
        assert_eq!(parse_formula("|x|").unwrap(), Formula::dist(Term::var("x"), Term::Zero));
        assert_eq!(
            parse_formula("d(x, y) - 1").unwrap(),
            Formula::sub(
                Formula::dist(Term::var("x"), Term::var("y")),
                Formula::Const(rat_int(1))
            )
        );
        assert_eq!(
            parse_formula("1/2 * d(x, 0)").unwrap(),
            Formula::scale(rat(1, 2), Formula::norm(Term::var("x")))
        );
        // scale binds tighter than formula +
        assert_eq!(
            parse_formula("1/2 * d(x, 0) + 1").unwrap(),
            Formula::add(
                Formula::scale(rat(1, 2), Formula::norm(Term::var("x"))),
                Formula::Const(rat_int(1))
            )
        );
    }

    #[test]
    fn bounded_quantifier_desugars() {
        assert_eq!(
            parse_formula("sup x <= t . d(x, 0)").unwrap(),
            Formula::sup(
                "x",
                Formula::dist(Term::meet(Term::var("x"), Term::var("t")), Term::Zero)
            )
        );
    }

    #[test]
    fn quantifier_extends_right() {
        // sup x . d(x,0) + 1  parses the + under the sup
        let f = parse_formula("sup x . d(x, 0) + 1").unwrap();
        assert_eq!(
            f,
            Formula::sup(
                "x",
                Formula::add(Formula::norm(Term::var("x")), Formula::Const(rat_int(1)))
            )
        );
    }

    #[test]
    fn conditions() {
        let c = parse_condition("d(x, y) <= 1").unwrap();
        assert_eq!(c.lhs, Formula::dist(Term::var("x"), Term::var("y")));
        assert_eq!(c.rhs, Formula::Const(rat_int(1)));
    }

    #[test]
    fn errors_carry_position() {
        let e = parse_formula("d(x, )").unwrap_err();
        assert_eq!((e.line, e.col), (1, 6));
        assert!(parse_formula("sup d . 1").is_err());
        assert!(parse_formula("d(x, y) extra").is_err());
    }
}
