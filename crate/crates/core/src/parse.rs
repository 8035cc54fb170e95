//! Recursive-descent parser for expressions and grammars.
//!
//! ```text
//! matrix := group (',' group)* | prods
//! group  := '[' prods ']'
//! prods  := prod (';' prod)*
//! prod   := VAR '->' expr
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor (('*')? factor)*
//! factor := NUM | VAR ('^' INT)? | '(' expr ')' ('^' INT)?
//! NUM    := INT | INT '/' INT
//! VAR    := [a-z] ; INT := ['-'] [0-9]+
//! ```
//!
//! Whitespace may appear between any two tokens. Positions in errors are
//! byte offsets into the input.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::grammar::{Grammar, MatrixGrammar};
use crate::poly::{Monomial, Polynomial, Variable};
use crate::rational::Rational;

pub fn parse_expr(text: &str) -> Result<Polynomial> {
    let mut p = Parser::new(text);
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

pub fn parse_grammar(text: &str) -> Result<MatrixGrammar> {
    let mut p = Parser::new(text);
    let mg = p.matrix()?;
    p.finish()?;
    Ok(mg)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos,
            msg: msg.into(),
        })
    }

    fn unexpected<T>(&mut self, wanted: &str) -> Result<T> {
        let pos = {
            self.skip_ws();
            self.pos
        };
        match self.src.get(pos) {
            None => self.err(pos, format!("expected {wanted}, found end of input")),
            Some(&b) if b.is_ascii_graphic() => {
                self.err(pos, format!("expected {wanted}, found '{}'", b as char))
            }
            Some(&b) => self.err(pos, format!("expected {wanted}, found byte 0x{b:02x}")),
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            self.unexpected(&format!("'{}'", b as char))
        }
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => self.unexpected("end of input"),
        }
    }

    fn matrix(&mut self) -> Result<MatrixGrammar> {
        if self.peek() != Some(b'[') {
            return Ok(MatrixGrammar::single(self.prods()?));
        }
        let mut groups = Vec::new();
        loop {
            self.expect(b'[')?;
            let start = self.pos - 1;
            if self.peek() == Some(b']') {
                return Err(Error::EmptyGroup(start));
            }
            groups.push(self.prods()?);
            self.expect(b']')?;
            if !self.eat(b',') {
                break;
            }
        }
        MatrixGrammar::new(groups)
    }

    fn prods(&mut self) -> Result<Grammar> {
        let mut g = Grammar::new();
        loop {
            let (v, body) = self.prod()?;
            g.insert(v, body)?;
            if !self.eat(b';') {
                return Ok(g);
            }
        }
    }

    fn prod(&mut self) -> Result<(Variable, Polynomial)> {
        let v = match self.peek() {
            Some(b) if b.is_ascii_lowercase() => {
                self.pos += 1;
                Variable::new(b as char)?
            }
            _ => return self.unexpected("a variable"),
        };
        self.skip_ws();
        if self.src[self.pos..].starts_with(b"->") {
            self.pos += 2;
        } else {
            return self.unexpected("'->'");
        }
        Ok((v, self.expr()?))
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let negate = self.eat(b'-');
        let first = self.term()?;
        let mut acc = if negate { first.neg() } else { first };
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.peek() == Some(b'-') && !self.at_arrow() {
                self.pos += 1;
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn at_arrow(&self) -> bool {
        self.src[self.pos..].starts_with(b"->")
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            let next = if self.eat(b'*') {
                self.factor()?
            } else {
                match self.peek() {
                    Some(b) if b.is_ascii_digit() || b.is_ascii_lowercase() || b == b'(' => {
                        self.factor()?
                    }
                    _ => return Ok(acc),
                }
            };
            acc = acc.mul(&next)?;
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b) if b.is_ascii_digit() || b == b'-' => self.number(),
            Some(b) if b.is_ascii_lowercase() => {
                self.pos += 1;
                let v = Variable::new(b as char)?;
                let e = self.exponent()?.unwrap_or(1);
                Ok(Polynomial::term(Rational::one(), Monomial::var_pow(v, e)))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                let at = self.pos;
                match self.exponent()? {
                    None => Ok(inner),
                    Some(e) => inner.pow(e).or_else(|err| match err {
                        Error::ExponentOverflow => Err(err),
                        other => self.err(at, other.to_string()),
                    }),
                }
            }
            _ => self.unexpected("a number, variable or '('"),
        }
    }

    fn exponent(&mut self) -> Result<Option<i64>> {
        if !self.eat(b'^') {
            return Ok(None);
        }
        let (pos, digits) = self.int_literal()?;
        digits
            .parse::<i64>()
            .map(Some)
            .or_else(|_| self.err(pos, "exponent out of range"))
    }

    fn number(&mut self) -> Result<Polynomial> {
        let (_, num) = self.int_literal()?;
        let num: BigInt = num.parse().expect("validated digits");
        if !self.eat(b'/') {
            return Ok(Polynomial::constant(Rational::from_integer(num)));
        }
        let (pos, den) = self.int_literal()?;
        let den: BigInt = den.parse().expect("validated digits");
        match Rational::new(num, den) {
            Ok(r) => Ok(Polynomial::constant(r)),
            Err(e) => self.err(pos, e.to_string()),
        }
    }

    /// `['-'] [0-9]+` with no interior whitespace.
    fn int_literal(&mut self) -> Result<(usize, String)> {
        self.skip_ws();
        let start = self.pos;
        let mut end = start;
        if self.src.get(end) == Some(&b'-') {
            end += 1;
        }
        let digits_start = end;
        while end < self.src.len() && self.src[end].is_ascii_digit() {
            end += 1;
        }
        if end == digits_start {
            self.pos = end;
            return self.unexpected("digits");
        }
        self.pos = end;
        let text = std::str::from_utf8(&self.src[start..end]).expect("ascii");
        Ok((start, text.to_owned()))
    }
}
