//! Text input for exact rational functions and matrices.
//!
//! The grammar covers exactly the notation the library prints, so every
//! `Display` output round-trips: integer literals, `t`, the operators
//! `+ - * /`, parentheses, and integer exponents that may be negative, as
//! in `(1-t)^-2 * (t + 3*t^2)`. Matrices separate entries with `,` and rows
//! with `;`; newlines count as whitespace and a trailing `;` is tolerated.
//! Syntax errors carry a 1-based line and column; semantic errors such as a
//! vanishing denominator keep their own kinds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::matk::MatK;
use crate::ratfn::RatFn;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    TVar,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Semi,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("integer {n}"),
        Tok::TVar => "'t'".into(),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Slash => "'/'".into(),
        Tok::Caret => "'^'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::Comma => "','".into(),
        Tok::Semi => "';'".into(),
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<(Vec<Spanned>, (usize, usize))> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            chars.next();
            col += 1;
        } else if c.is_ascii_digit() {
            let (l0, c0) = (line, col);
            let mut digits = String::new();
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                digits.push(d);
                chars.next();
                col += 1;
            }
            let n = BigInt::parse_bytes(digits.as_bytes(), 10).expect("digit run");
            toks.push(Spanned {
                tok: Tok::Int(n),
                line: l0,
                col: c0,
            });
        } else {
            let tok = match c {
                't' => Tok::TVar,
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                other => {
                    return Err(Error::Parse {
                        line,
                        col,
                        msg: format!("unexpected character '{other}'"),
                    });
                }
            };
            toks.push(Spanned { tok, line, col });
            chars.next();
            col += 1;
        }
    }
    Ok((toks, (line, col)))
}

/// Exponentiation by squaring; negative exponents go through the reciprocal
/// and so report division by zero for a zero base.
fn ratfn_pow(base: &RatFn, k: i64) -> Result<RatFn> {
    if k == 0 {
        return Ok(RatFn::one());
    }
    let mut b = if k < 0 { base.recip()? } else { base.clone() };
    let mut e = k.unsigned_abs();
    let mut acc = RatFn::one();
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    Ok(acc)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    eof: (usize, usize),
}

impl Parser {
    fn new(src: &str) -> Result<Parser> {
        let (toks, eof) = lex(src)?;
        Ok(Parser { toks, pos: 0, eof })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    /// Position of the next token, or of end-of-input.
    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.eof, |s| (s.line, s.col))
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.here();
        Err(Error::Parse {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFn> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = &acc + &self.term()?;
            } else if self.eat(&Tok::Minus) {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFn> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(&Tok::Star) {
                acc = &acc * &self.factor()?;
            } else if self.eat(&Tok::Slash) {
                acc = acc.div(&self.factor()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<RatFn> {
        if self.eat(&Tok::Minus) {
            return Ok(-&self.factor()?);
        }
        let base = self.primary()?;
        if self.eat(&Tok::Caret) {
            let k = self.exponent()?;
            return ratfn_pow(&base, k);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64> {
        let neg = self.eat(&Tok::Minus);
        let Some(Tok::Int(n)) = self.peek() else {
            return self.err("expected an integer exponent");
        };
        match n.to_i64().filter(|k| *k <= 1_000_000) {
            Some(k) => {
                self.pos += 1;
                Ok(if neg { -k } else { k })
            }
            None => self.err("exponent too large"),
        }
    }

    fn primary(&mut self) -> Result<RatFn> {
        let Some(s) = self.toks.get(self.pos) else {
            return self.err("unexpected end of input");
        };
        let tok = s.tok.clone();
        match tok {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(RatFn::from_rational(BigRational::from_integer(n)))
            }
            Tok::TVar => {
                self.pos += 1;
                Ok(RatFn::t())
            }
            Tok::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                Ok(inner)
            }
            other => self.err(format!("expected a value, found {}", describe(&other))),
        }
    }
}

/// Parses one rational-function expression; the whole input must be consumed.
pub fn parse_ratfn(src: &str) -> Result<RatFn> {
    let mut p = Parser::new(src)?;
    if p.at_end() {
        return p.err("empty input");
    }
    let value = p.expr()?;
    if !p.at_end() {
        return p.err("unexpected trailing input");
    }
    Ok(value)
}

/// Parses a matrix of expressions: `,` between entries, `;` between rows,
/// optional trailing `;`. All rows must be equally long.
pub fn parse_matrix(src: &str) -> Result<MatK> {
    let mut p = Parser::new(src)?;
    if p.at_end() {
        return p.err("empty matrix");
    }
    let mut rows: Vec<Vec<RatFn>> = Vec::new();
    let mut row_starts: Vec<(usize, usize)> = Vec::new();
    while !p.at_end() {
        row_starts.push(p.here());
        let mut row = vec![p.expr()?];
        while p.eat(&Tok::Comma) {
            row.push(p.expr()?);
        }
        rows.push(row);
        if p.eat(&Tok::Semi) {
            continue;
        }
        if p.at_end() {
            break;
        }
        return p.err("expected ',' or ';'");
    }
    let want = rows[0].len();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != want {
            let (line, col) = row_starts[i];
            return Err(Error::Parse {
                line,
                col,
                msg: format!("row {} has {} entries, expected {}", i + 1, row.len(), want),
            });
        }
    }
    MatK::from_rows(rows)
}
