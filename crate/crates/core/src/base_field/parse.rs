//! Expression grammar for field elements:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' exponent)?
//! exponent:= '-'? integer | '(' '-'? integer ')'
//! atom    := integer | variable | '(' expr ')'
//! ```
//!
//! Whitespace is ignored and integer literals are reduced modulo `p`.

use super::field::FieldDescriptor;
use super::rational::RationalFunction;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(String),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
}

fn lex(src: &str) -> Result<Lexer> {
    let mut toks = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                i += 1;
                col += 1;
            }
            toks.push((Tok::Int(s), start.0, start.1));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                i += 1;
                col += 1;
            }
            toks.push((Tok::Ident(s), start.0, start.1));
        } else if "+-*/^()".contains(c) {
            toks.push((Tok::Sym(c), line, col));
            i += 1;
            col += 1;
        } else {
            return Err(Error::Parse {
                line,
                column: col,
                message: format!("unexpected character {c:?}"),
            });
        }
    }
    toks.push((Tok::End, line, col));
    Ok(Lexer { toks })
}

struct Parser<'a> {
    field: &'a FieldDescriptor,
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        let (_, line, column) = &self.toks[self.pos];
        Err(Error::Parse {
            line: *line,
            column: *column,
            message: message.into(),
        })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if *self.peek() == Tok::Sym('/') {
                let at = self.pos;
                self.pos += 1;
                let rhs = self.unary()?;
                acc = match acc.checked_div(&rhs) {
                    Ok(q) => q,
                    Err(_) => {
                        self.pos = at;
                        return self.err("division by zero");
                    }
                };
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let at = self.pos;
        let paren = self.eat('(');
        let neg = self.eat('-');
        let e = match self.bump() {
            Tok::Int(s) => match s.parse::<i64>() {
                Ok(v) => v,
                Err(_) => {
                    self.pos = at;
                    return self.err("exponent too large");
                }
            },
            _ => {
                self.pos = at;
                return self.err("expected integer exponent");
            }
        };
        if paren && !self.eat(')') {
            return self.err("expected ')'");
        }
        let e = if neg { -e } else { e };
        base.pow(e).or_else(|_| {
            self.pos = at;
            self.err("negative power of zero")
        })
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        match self.peek().clone() {
            Tok::Int(s) => {
                self.pos += 1;
                let p = self.field.p() as u64;
                let r = s.bytes().fold(0u64, |acc, b| (acc * 10 + (b - b'0') as u64) % p);
                Ok(self.field.constant(r as i64))
            }
            Tok::Ident(name) => match self.field.var_index(&name) {
                Some(i) => {
                    self.pos += 1;
                    Ok(self.field.var(i))
                }
                None => {
                    let (_, line, column) = self.toks[self.pos];
                    Err(Error::Semantic(format!(
                        "unknown variable {name:?} at line {line}, column {column}"
                    )))
                }
            },
            Tok::Sym('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Tok::End => self.err("unexpected end of input"),
            Tok::Sym(c) => self.err(format!("unexpected {c:?}")),
        }
    }
}

pub fn parse_expr(field: &FieldDescriptor, src: &str) -> Result<RationalFunction> {
    let Lexer { toks } = lex(src)?;
    let mut parser = Parser { field, toks, pos: 0 };
    let value = parser.expr()?;
    if *parser.peek() != Tok::End {
        return parser.err("trailing input");
    }
    Ok(value)
}
