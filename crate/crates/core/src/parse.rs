//! Recursive-descent parser for expressions and differential forms.
//!
//! ```text
//! expr   := term (("+"|"-") term)*
//! term   := factor (("*"|"/"|"/\") factor)*
//! factor := "-" factor | base ("^" uint)?
//! base   := uint | coord | diff | func "(" expr ")" | "(" expr ")"
//! coord  := "q" uint ("'"* | "[" uint "]")
//! diff   := "d" coord
//! ```
//!
//! Everything is parsed as a differential form; scalars are 0-forms and
//! `*` between forms is the wedge product.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::ParseError;
use crate::expr::{Coordinate, Expression, Function, Rational};
use crate::form::DifferentialForm;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(BigInt),
    Coord(Coordinate),
    Diff(Coordinate),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Wedge,
    Caret,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Number(n) => write!(f, "number {n}"),
            Token::Coord(c) => write!(f, "coordinate {c}"),
            Token::Diff(c) => write!(f, "differential d{c}"),
            Token::Ident(name) => write!(f, "identifier `{name}`"),
            Token::Plus => f.write_str("`+`"),
            Token::Minus => f.write_str("`-`"),
            Token::Star => f.write_str("`*`"),
            Token::Slash => f.write_str("`/`"),
            Token::Wedge => f.write_str("`/\\`"),
            Token::Caret => f.write_str("`^`"),
            Token::LParen => f.write_str("`(`"),
            Token::RParen => f.write_str("`)`"),
            Token::End => f.write_str("end of input"),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    dim: usize,
}

impl<'a> Lexer<'a> {
    fn syntax(&self, position: usize, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            position,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()?
            .parse()
            .ok()
    }

    /// Reads `uint ("'"* | "[" uint "]")` after the leading `q`.
    fn coordinate(&mut self, start: usize) -> Result<Coordinate, ParseError> {
        let index = self
            .digits()
            .ok_or_else(|| self.syntax(self.pos, "expected coordinate index"))?;
        let index_value = index.to_u64().unwrap_or(u64::MAX);
        if index_value == 0 || index_value > self.dim as u64 {
            return Err(ParseError::IndexOutOfRange {
                position: start,
                index: index_value,
                dim: self.dim,
            });
        }
        let mut order: u32 = 0;
        if self.peek() == Some(b'[') {
            self.pos += 1;
            let n = self
                .digits()
                .ok_or_else(|| self.syntax(self.pos, "expected derivative order"))?;
            order = n
                .to_u32()
                .ok_or_else(|| self.syntax(start, "derivative order too large"))?;
            if self.peek() != Some(b']') {
                return Err(self.syntax(self.pos, "expected `]`"));
            }
            self.pos += 1;
        } else {
            while self.peek() == Some(b'\'') {
                order += 1;
                self.pos += 1;
            }
        }
        Ok(Coordinate::new(index_value as u32, order))
    }

    fn tokens(mut self) -> Result<Vec<(Token, usize)>, ParseError> {
        let mut out = Vec::new();
        loop {
            while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
                self.pos += 1;
            }
            let start = self.pos;
            let Some(b) = self.peek() else {
                out.push((Token::End, start));
                return Ok(out);
            };
            let next = self.src.get(self.pos + 1).copied();
            let after = self.src.get(self.pos + 2).copied();
            let token = match b {
                b'+' => {
                    self.pos += 1;
                    Token::Plus
                }
                b'-' => {
                    self.pos += 1;
                    Token::Minus
                }
                b'*' => {
                    self.pos += 1;
                    Token::Star
                }
                b'/' if next == Some(b'\\') => {
                    self.pos += 2;
                    Token::Wedge
                }
                b'/' => {
                    self.pos += 1;
                    Token::Slash
                }
                b'^' => {
                    self.pos += 1;
                    Token::Caret
                }
                b'(' => {
                    self.pos += 1;
                    Token::LParen
                }
                b')' => {
                    self.pos += 1;
                    Token::RParen
                }
                b'0'..=b'9' => Token::Number(self.digits().unwrap()),
                b'q' if next.is_some_and(|n| n.is_ascii_digit()) => {
                    self.pos += 1;
                    Token::Coord(self.coordinate(start)?)
                }
                b'd' if next == Some(b'q') && after.is_some_and(|n| n.is_ascii_digit()) => {
                    self.pos += 2;
                    Token::Diff(self.coordinate(start)?)
                }
                b if b.is_ascii_alphabetic() => {
                    while self.peek().is_some_and(|b| b.is_ascii_alphanumeric()) {
                        self.pos += 1;
                    }
                    let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                    Token::Ident(name)
                }
                other => {
                    return Err(
                        self.syntax(start, format!("unexpected character `{}`", other as char))
                    )
                }
            };
            out.push((token, start));
        }
    }
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    cursor: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.cursor].0
    }

    fn position(&self) -> usize {
        self.tokens[self.cursor].1
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.cursor].0.clone();
        if self.cursor + 1 < self.tokens.len() {
            self.cursor += 1;
        }
        t
    }

    fn syntax(&self, position: usize, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            position,
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<DifferentialForm, ParseError> {
        let mut acc = self.term()?;
        loop {
            let position = self.position();
            let negate = match self.peek() {
                Token::Plus => false,
                Token::Minus => true,
                _ => return Ok(acc),
            };
            self.bump();
            let rhs = self.term()?;
            if rhs.degree() != acc.degree() {
                return Err(self.syntax(
                    position,
                    format!(
                        "cannot add forms of degree {} and {}",
                        acc.degree(),
                        rhs.degree()
                    ),
                ));
            }
            acc = if negate { &acc - &rhs } else { &acc + &rhs };
        }
    }

    fn term(&mut self) -> Result<DifferentialForm, ParseError> {
        let mut acc = self.factor()?;
        loop {
            let position = self.position();
            match self.peek() {
                Token::Star | Token::Wedge => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = acc.wedge(&rhs);
                }
                Token::Slash => {
                    self.bump();
                    let rhs = self.factor()?;
                    let divisor = rhs
                        .as_function()
                        .ok_or_else(|| self.syntax(position, "cannot divide by a differential"))?;
                    let inverse = divisor
                        .recip()
                        .map_err(|_| self.syntax(position, "division by zero"))?;
                    acc = acc.scale(&inverse);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<DifferentialForm, ParseError> {
        if *self.peek() == Token::Minus {
            self.bump();
            return Ok(-&self.factor()?);
        }
        let base = self.base()?;
        if *self.peek() != Token::Caret {
            return Ok(base);
        }
        let position = self.position();
        self.bump();
        let exponent = match self.bump() {
            Token::Number(n) => n
                .to_i32()
                .ok_or_else(|| self.syntax(position, "exponent too large"))?,
            _ => return Err(self.syntax(position + 1, "expected unsigned integer exponent")),
        };
        let scalar = base
            .as_function()
            .ok_or_else(|| self.syntax(position, "cannot raise a differential to a power"))?;
        let value = scalar
            .pow(exponent)
            .map_err(|_| self.syntax(position, "invalid power"))?;
        Ok(DifferentialForm::function(value))
    }

    fn base(&mut self) -> Result<DifferentialForm, ParseError> {
        let position = self.position();
        match self.bump() {
            Token::Number(n) => Ok(DifferentialForm::function(Expression::constant(
                Rational::from_integer(n),
            ))),
            Token::Coord(c) => Ok(DifferentialForm::function(Expression::coordinate(c))),
            Token::Diff(c) => Ok(DifferentialForm::differential(c)),
            Token::LParen => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Token::Ident(name) => {
                let f = Function::from_name(&name).ok_or(ParseError::UnknownFunction {
                    position,
                    name: name.clone(),
                })?;
                if *self.peek() != Token::LParen {
                    return Err(
                        self.syntax(self.position(), format!("expected `(` after `{name}`"))
                    );
                }
                self.bump();
                let arg_position = self.position();
                let arg = self.expr()?;
                self.expect_rparen()?;
                let arg = arg.as_function().ok_or_else(|| {
                    self.syntax(arg_position, "function argument must be a scalar")
                })?;
                let value =
                    Expression::apply(f, arg).map_err(|e| self.syntax(position, e.to_string()))?;
                Ok(DifferentialForm::function(value))
            }
            Token::End => Err(self.syntax(position, "unexpected end of input")),
            other => Err(self.syntax(position, format!("unexpected {other}"))),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Token::RParen {
            self.bump();
            Ok(())
        } else {
            Err(self.syntax(self.position(), "expected `)`"))
        }
    }
}

/// Parses a differential form; coordinate indices must lie in `1..=dim`.
pub fn parse_form(text: &str, dim: usize) -> Result<DifferentialForm, ParseError> {
    let tokens = Lexer {
        src: text.as_bytes(),
        pos: 0,
        dim,
    }
    .tokens()?;
    let mut parser = Parser { tokens, cursor: 0 };
    let form = parser.expr()?;
    if *parser.peek() != Token::End {
        return Err(parser.syntax(parser.position(), "unexpected trailing input"));
    }
    Ok(form)
}

/// Parses a scalar expression; coordinate indices must lie in `1..=dim`.
pub fn parse_expression(text: &str, dim: usize) -> Result<Expression, ParseError> {
    let form = parse_form(text, dim)?;
    form.as_function().ok_or(ParseError::Syntax {
        position: 0,
        message: format!(
            "expected a scalar expression, found a {}-form",
            form.degree()
        ),
    })
}
