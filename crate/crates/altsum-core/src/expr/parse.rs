//! Recursive-descent parser for the expression DSL.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := NUMBER | NUMBER '*' factor | call | '(' expr ')' | '-' factor
//! call   := 'id()' | 'pow(' NUMBER ')' | 'floor()' | 'xlogx()' | 'exp()'
//!         | 'compose(' expr ',' expr ')' | 'series(' coeffpairs ')'
//! coeffpairs := coeff ',' expr (',' coeff ',' expr)*   with coeff := ['-'] NUMBER
//! ```
//!
//! Subtraction and unary minus desugar to `Scale(-1, ·)` and negative
//! constants; `NUMBER '*' factor` is a `Scale` node, binding tighter than
//! the product operator.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{ExprError, FuncExpr};

/// Parse failure with the byte offset of the offending input.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("parse error at byte {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("unexpected end of input, expected {0}")]
    UnexpectedEnd(&'static str),
    #[error("expected {expected}, found {found}")]
    UnexpectedToken {
        expected: &'static str,
        found: String,
    },
    #[error("unknown function {0:?}")]
    UnknownFunction(String),
    #[error("{name} takes {expected} argument(s)")]
    ArityMismatch {
        name: &'static str,
        expected: &'static str,
    },
    #[error("invalid numeric literal {0:?}")]
    BadNumber(String),
    #[error("{0}")]
    Invalid(ExprError),
    #[error("trailing input after expression")]
    TrailingInput,
}

/// Parses DSL text into an expression tree.
pub fn parse(text: &str) -> Result<FuncExpr, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens: &tokens,
        pos: 0,
        end: text.len(),
    };
    let expr = p.expr()?;
    match p.peek() {
        None => Ok(expr),
        Some(t) => Err(ParseError {
            offset: t.offset,
            kind: ParseErrorKind::TrailingInput,
        }),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(f64),
    Ident(String),
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Number(v) => {
                let mut s = String::from("number ");
                s.push_str(&v.to_string());
                s
            }
            Tok::Ident(s) => {
                let mut d = String::from("identifier ");
                d.push_str(s);
                d
            }
            Tok::LParen => "'('".to_string(),
            Tok::RParen => "')'".to_string(),
            Tok::Comma => "','".to_string(),
            Tok::Plus => "'+'".to_string(),
            Tok::Minus => "'-'".to_string(),
            Tok::Star => "'*'".to_string(),
        }
    }
}

struct Token {
    tok: Tok,
    offset: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'(' => {
                out.push(Token {
                    tok: Tok::LParen,
                    offset: i,
                });
                i += 1;
            }
            b')' => {
                out.push(Token {
                    tok: Tok::RParen,
                    offset: i,
                });
                i += 1;
            }
            b',' => {
                out.push(Token {
                    tok: Tok::Comma,
                    offset: i,
                });
                i += 1;
            }
            b'+' => {
                out.push(Token {
                    tok: Tok::Plus,
                    offset: i,
                });
                i += 1;
            }
            b'-' => {
                out.push(Token {
                    tok: Tok::Minus,
                    offset: i,
                });
                i += 1;
            }
            b'*' => {
                out.push(Token {
                    tok: Tok::Star,
                    offset: i,
                });
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // optional exponent, consumed only when well-formed
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let raw = &text[start..i];
                let value: f64 = raw.parse().map_err(|_| ParseError {
                    offset: start,
                    kind: ParseErrorKind::BadNumber(raw.to_string()),
                })?;
                if !value.is_finite() {
                    return Err(ParseError {
                        offset: start,
                        kind: ParseErrorKind::BadNumber(raw.to_string()),
                    });
                }
                out.push(Token {
                    tok: Tok::Number(value),
                    offset: start,
                });
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(text[start..i].to_string()),
                    offset: start,
                });
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    offset: i,
                    kind: ParseErrorKind::UnexpectedChar(ch),
                });
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eof_err(&self, expected: &'static str) -> ParseError {
        ParseError {
            offset: self.end,
            kind: ParseErrorKind::UnexpectedEnd(expected),
        }
    }

    fn expect(&mut self, want: &Tok, expected: &'static str) -> Result<usize, ParseError> {
        match self.next() {
            None => Err(self.eof_err(expected)),
            Some(t) if &t.tok == want => Ok(t.offset),
            Some(t) => Err(ParseError {
                offset: t.offset,
                kind: ParseErrorKind::UnexpectedToken {
                    expected,
                    found: t.tok.describe(),
                },
            }),
        }
    }

    fn expr(&mut self) -> Result<FuncExpr, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().map(|t| &t.tok) {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = FuncExpr::sum(acc, rhs);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = FuncExpr::sum(acc, negate(rhs));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<FuncExpr, ParseError> {
        let mut acc = self.factor()?;
        while matches!(self.peek().map(|t| &t.tok), Some(Tok::Star)) {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = FuncExpr::product(acc, rhs);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<FuncExpr, ParseError> {
        let t = self.next().ok_or_else(|| self.eof_err("an expression"))?;
        match &t.tok {
            Tok::Number(v) => {
                // NUMBER '*' factor is a Scale node and binds tighter than
                // the product operator
                if matches!(self.peek().map(|p| &p.tok), Some(Tok::Star)) {
                    self.pos += 1;
                    let child = self.factor()?;
                    FuncExpr::scale(*v, child).map_err(|e| ParseError {
                        offset: t.offset,
                        kind: ParseErrorKind::Invalid(e),
                    })
                } else {
                    Ok(FuncExpr::Constant(*v))
                }
            }
            Tok::Minus => {
                let inner = self.factor()?;
                Ok(negate(inner))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Ident(name) => self.call(name, t.offset),
            other => Err(ParseError {
                offset: t.offset,
                kind: ParseErrorKind::UnexpectedToken {
                    expected: "an expression",
                    found: other.describe(),
                },
            }),
        }
    }

    fn call(&mut self, name: &str, offset: usize) -> Result<FuncExpr, ParseError> {
        self.expect(&Tok::LParen, "'('")?;
        match name {
            "id" => {
                self.close_nullary("id")?;
                Ok(FuncExpr::Identity)
            }
            "floor" => {
                self.close_nullary("floor")?;
                Ok(FuncExpr::Floor)
            }
            "xlogx" => {
                self.close_nullary("xlogx")?;
                Ok(FuncExpr::XLogX)
            }
            "exp" => {
                self.close_nullary("exp")?;
                Ok(FuncExpr::Exp)
            }
            "pow" => {
                let (r, num_off) = self.number("pow", "one numeric exponent")?;
                self.expect(&Tok::RParen, "')'")?;
                FuncExpr::power(r).map_err(|e| ParseError {
                    offset: num_off,
                    kind: ParseErrorKind::Invalid(e),
                })
            }
            "compose" => {
                let outer = self.expr()?;
                self.expect(&Tok::Comma, "','")?;
                let inner = self.expr()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(FuncExpr::compose(outer, inner))
            }
            "series" => {
                let mut pairs = Vec::new();
                loop {
                    let (c, _) = self.coeff()?;
                    self.expect(&Tok::Comma, "','")?;
                    let term = self.expr()?;
                    pairs.push((c, term));
                    match self.next() {
                        Some(t) if t.tok == Tok::Comma => continue,
                        Some(t) if t.tok == Tok::RParen => break,
                        Some(t) => {
                            return Err(ParseError {
                                offset: t.offset,
                                kind: ParseErrorKind::UnexpectedToken {
                                    expected: "',' or ')'",
                                    found: t.tok.describe(),
                                },
                            })
                        }
                        None => return Err(self.eof_err("',' or ')'")),
                    }
                }
                FuncExpr::series(pairs).map_err(|e| ParseError {
                    offset,
                    kind: ParseErrorKind::Invalid(e),
                })
            }
            _ => Err(ParseError {
                offset,
                kind: ParseErrorKind::UnknownFunction(name.to_string()),
            }),
        }
    }

    fn close_nullary(&mut self, name: &'static str) -> Result<(), ParseError> {
        match self.next() {
            Some(t) if t.tok == Tok::RParen => Ok(()),
            Some(t) => Err(ParseError {
                offset: t.offset,
                kind: ParseErrorKind::ArityMismatch {
                    name,
                    expected: "no",
                },
            }),
            None => Err(self.eof_err("')'")),
        }
    }

    fn number(
        &mut self,
        name: &'static str,
        expected: &'static str,
    ) -> Result<(f64, usize), ParseError> {
        match self.next() {
            Some(t) => match &t.tok {
                Tok::Number(v) => Ok((*v, t.offset)),
                _ => Err(ParseError {
                    offset: t.offset,
                    kind: ParseErrorKind::ArityMismatch { name, expected },
                }),
            },
            None => Err(self.eof_err("a number")),
        }
    }

    /// Series coefficient: a number with optional leading minus.
    fn coeff(&mut self) -> Result<(f64, usize), ParseError> {
        match self.peek().map(|t| &t.tok) {
            Some(Tok::Minus) => {
                self.pos += 1;
                let (v, off) = self.number("series", "numeric coefficients")?;
                Ok((-v, off))
            }
            _ => self.number("series", "numeric coefficients"),
        }
    }
}

/// Desugars unary minus, folding into constants and scale factors.
fn negate(e: FuncExpr) -> FuncExpr {
    match e {
        FuncExpr::Constant(c) => FuncExpr::Constant(-c),
        FuncExpr::Scale(a, child) => FuncExpr::Scale(-a, child),
        other => FuncExpr::Scale(-1.0, Box::new(other)),
    }
}
