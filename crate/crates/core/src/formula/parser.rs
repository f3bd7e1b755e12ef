//! Recursive-descent parser for the formula grammar:
//!
//! ```text
//! formula := quant | disj
//! quant   := ("A"|"E"|"Ec"|"Ep") ident "." formula
//! disj    := conj ("|" conj)*
//! conj    := neg ("&" neg)*
//! neg     := "not" neg | "(" formula ")" | atom
//! atom    := kind "(" ident ("," ident)* ")"
//! kind    := "clopen" | "open" | "closed" | "stex" | "borel@<pointclass>"
//! ```
//!
//! The first identifier of an atom is the predicate name, the rest are
//! variables; every variable must be bound by exactly one enclosing
//! quantifier.

use std::fmt;

use thiserror::Error;

use super::{Atom, AtomKind, Formula, Quantifier};
use crate::pointclass::Pointclass;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected {expected}, found `{found}`")]
    Unexpected { expected: &'static str, found: String },
    #[error("unknown pointclass in `borel@{0}`")]
    BadPointclass(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("duplicate binder `{0}`")]
    DuplicateBinder(String),
    #[error("trailing input after formula")]
    TrailingInput,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.kind)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Borel(Pointclass),
    LParen,
    RParen,
    Comma,
    Dot,
    Pipe,
    Amp,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Borel(g) => write!(f, "borel@{g}"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::Comma => write!(f, ","),
            Tok::Dot => write!(f, "."),
            Tok::Pipe => write!(f, "|"),
            Tok::Amp => write!(f, "&"),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { chars: text.chars().peekable(), line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { line: self.line, col: self.col, kind }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
        let mut out = Vec::new();
        loop {
            while matches!(self.chars.peek(), Some(c) if c.is_whitespace()) {
                self.bump();
            }
            let (line, col) = (self.line, self.col);
            let Some(&c) = self.chars.peek() else { break };
            let tok = match c {
                '(' => {
                    self.bump();
                    Tok::LParen
                }
                ')' => {
                    self.bump();
                    Tok::RParen
                }
                ',' => {
                    self.bump();
                    Tok::Comma
                }
                '.' => {
                    self.bump();
                    Tok::Dot
                }
                '|' => {
                    self.bump();
                    Tok::Pipe
                }
                '&' => {
                    self.bump();
                    Tok::Amp
                }
                c if c.is_alphabetic() || c == '_' => {
                    let mut ident = String::new();
                    while matches!(self.chars.peek(), Some(c) if c.is_alphanumeric() || *c == '_')
                    {
                        ident.push(self.bump().unwrap());
                    }
                    if ident == "borel" && self.chars.peek() == Some(&'@') {
                        self.bump();
                        let mut cls = String::new();
                        while matches!(
                            self.chars.peek(),
                            Some(c) if c.is_alphanumeric() || *c == '_'
                        ) {
                            cls.push(self.bump().unwrap());
                        }
                        let g: Pointclass = cls
                            .parse()
                            .map_err(|_| ParseError {
                                line,
                                col,
                                kind: ParseErrorKind::BadPointclass(cls.clone()),
                            })?;
                        Tok::Borel(g)
                    } else {
                        Tok::Ident(ident)
                    }
                }
                other => return Err(self.err(ParseErrorKind::UnexpectedChar(other))),
            };
            out.push((tok, line, col));
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    binders: Vec<String>,
}

impl Parser {
    fn peek(&self, offset: usize) -> Option<&Tok> {
        self.toks.get(self.pos + offset).map(|(t, _, _)| t)
    }

    fn location(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map_or((1, 1), |&(_, l, c)| (l, c))
    }

    fn err_here(&self, kind: ParseErrorKind) -> ParseError {
        let (line, col) = self.location();
        ParseError { line, col, kind }
    }

    fn next(&mut self, expected: &'static str) -> Result<Tok, ParseError> {
        match self.toks.get(self.pos) {
            Some((t, _, _)) => {
                let t = t.clone();
                self.pos += 1;
                Ok(t)
            }
            None => Err(self.err_here(ParseErrorKind::Unexpected {
                expected,
                found: "end of input".to_string(),
            })),
        }
    }

    fn expect(&mut self, want: Tok, expected: &'static str) -> Result<(), ParseError> {
        let got = self.next(expected)?;
        if got == want {
            Ok(())
        } else {
            self.pos -= 1;
            Err(self.err_here(ParseErrorKind::Unexpected { expected, found: got.to_string() }))
        }
    }

    fn ident(&mut self, expected: &'static str) -> Result<String, ParseError> {
        match self.next(expected)? {
            Tok::Ident(s) => Ok(s),
            other => {
                self.pos -= 1;
                Err(self.err_here(ParseErrorKind::Unexpected {
                    expected,
                    found: other.to_string(),
                }))
            }
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        if self.quant_lookahead() {
            let Some(Tok::Ident(head)) = self.peek(0) else { unreachable!() };
            let q = match head.as_str() {
                "A" => Quantifier::ForallCtbl,
                "E" => Quantifier::ExistsCtbl,
                "Ec" => Quantifier::ExistsCpt,
                "Ep" => Quantifier::ExistsPolish,
                _ => unreachable!(),
            };
            self.pos += 1;
            let var = self.ident("variable")?;
            if self.binders.contains(&var) {
                self.pos -= 1;
                return Err(self.err_here(ParseErrorKind::DuplicateBinder(var)));
            }
            self.expect(Tok::Dot, "`.`")?;
            self.binders.push(var.clone());
            let body = self.formula()?;
            self.binders.pop();
            return Ok(Formula::Quant { q, var, body: Box::new(body) });
        }
        self.disj()
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conj()?;
        while self.peek(0) == Some(&Tok::Pipe) {
            self.pos += 1;
            let rhs = self.conj()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.neg()?;
        while self.peek(0) == Some(&Tok::Amp) {
            self.pos += 1;
            let rhs = self.neg()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn quant_lookahead(&self) -> bool {
        if let Some(Tok::Ident(head)) = self.peek(0) {
            matches!(head.as_str(), "A" | "E" | "Ec" | "Ep")
                && matches!(self.peek(1), Some(Tok::Ident(_)))
                && matches!(self.peek(2), Some(Tok::Dot))
        } else {
            false
        }
    }

    fn neg(&mut self) -> Result<Formula, ParseError> {
        if self.quant_lookahead() {
            // a quantifier in operand position binds as far right as possible
            return self.formula();
        }
        match self.peek(0) {
            Some(Tok::Ident(s)) if s == "not" => {
                self.pos += 1;
                Ok(Formula::not(self.neg()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let kind = match self.next("atom kind")? {
            Tok::Borel(g) => AtomKind::Opaque(g),
            Tok::Ident(s) => match s.as_str() {
                "clopen" => AtomKind::Clopen,
                "open" => AtomKind::Open,
                "closed" => AtomKind::Closed,
                "stex" => AtomKind::StableExists,
                other => {
                    self.pos -= 1;
                    return Err(self.err_here(ParseErrorKind::Unexpected {
                        expected: "atom kind",
                        found: other.to_string(),
                    }));
                }
            },
            other => {
                self.pos -= 1;
                return Err(self.err_here(ParseErrorKind::Unexpected {
                    expected: "atom kind",
                    found: other.to_string(),
                }));
            }
        };
        self.expect(Tok::LParen, "`(`")?;
        let name = self.ident("predicate name")?;
        let mut vars = Vec::new();
        while self.peek(0) == Some(&Tok::Comma) {
            self.pos += 1;
            let v = self.ident("variable")?;
            if !self.binders.contains(&v) {
                self.pos -= 1;
                return Err(self.err_here(ParseErrorKind::UnboundVariable(v)));
            }
            vars.push(v);
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(Formula::Atom(Atom { kind, name, vars }))
    }
}

/// Parse a formula from its concrete syntax.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser { toks, pos: 0, binders: Vec::new() };
    let f = p.formula()?;
    if p.pos != p.toks.len() {
        return Err(p.err_here(ParseErrorKind::TrailingInput));
    }
    Ok(f)
}
