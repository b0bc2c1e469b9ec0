//! Recursive-descent parser for the polynomial expression grammar shared by
//! curve files and the CLI: `+ - * ^`, parentheses, integer literals,
//! variables, and the field generator symbol.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::field::{FieldElement, NumberField, Rat};
use crate::poly::{HomPoly, MPoly, PolyError, VAR_NAMES};

struct Lexer<'a> {
    text: &'a [u8],
    pos: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Sym(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            text: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek_pos(&mut self) -> usize {
        self.skip_ws();
        self.pos
    }

    fn next(&mut self) -> Result<(Tok, usize), PolyError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos >= self.text.len() {
            return Ok((Tok::End, start));
        }
        let c = self.text[self.pos];
        let tok = match c {
            b'+' => {
                self.pos += 1;
                Tok::Plus
            }
            b'-' => {
                self.pos += 1;
                Tok::Minus
            }
            b'*' => {
                self.pos += 1;
                Tok::Star
            }
            b'^' => {
                self.pos += 1;
                Tok::Caret
            }
            b'(' => {
                self.pos += 1;
                Tok::LParen
            }
            b')' => {
                self.pos += 1;
                Tok::RParen
            }
            b'0'..=b'9' => {
                let mut end = self.pos;
                while end < self.text.len() && self.text[end].is_ascii_digit() {
                    end += 1;
                }
                let s = std::str::from_utf8(&self.text[self.pos..end]).unwrap();
                self.pos = end;
                Tok::Int(s.parse().unwrap())
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut end = self.pos;
                while end < self.text.len()
                    && (self.text[end].is_ascii_alphanumeric() || self.text[end] == b'_')
                {
                    end += 1;
                }
                let s = std::str::from_utf8(&self.text[self.pos..end]).unwrap().to_string();
                self.pos = end;
                Tok::Sym(s)
            }
            other => {
                return Err(PolyError::Syntax {
                    position: start,
                    message: format!("unexpected character `{}`", other as char),
                })
            }
        };
        Ok((tok, start))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    lookahead: (Tok, usize),
    field: Arc<NumberField>,
    vars: Vec<String>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, field: &Arc<NumberField>, vars: &[&str]) -> Result<Self, PolyError> {
        let mut lexer = Lexer::new(text);
        let lookahead = lexer.next()?;
        Ok(Parser {
            lexer,
            lookahead,
            field: Arc::clone(field),
            vars: vars.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn advance(&mut self) -> Result<(Tok, usize), PolyError> {
        let current = self.lookahead.clone();
        self.lookahead = self.lexer.next()?;
        Ok(current)
    }

    fn expr(&mut self) -> Result<MPoly<3>, PolyError> {
        let mut negate = false;
        if self.lookahead.0 == Tok::Minus {
            self.advance()?;
            negate = true;
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.lookahead.0 {
                Tok::Plus => {
                    self.advance()?;
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Tok::Minus => {
                    self.advance()?;
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly<3>, PolyError> {
        let mut acc = self.factor()?;
        while self.lookahead.0 == Tok::Star {
            self.advance()?;
            let f = self.factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MPoly<3>, PolyError> {
        if self.lookahead.0 == Tok::Minus {
            self.advance()?;
            return Ok(self.factor()?.neg());
        }
        let base = self.primary()?;
        if self.lookahead.0 == Tok::Caret {
            self.advance()?;
            let (tok, pos) = self.advance()?;
            match tok {
                Tok::Int(n) => {
                    let exp: u32 = n.try_into().map_err(|_| PolyError::Syntax {
                        position: pos,
                        message: "exponent out of range".to_string(),
                    })?;
                    Ok(base.pow(exp))
                }
                _ => Err(PolyError::Syntax {
                    position: pos,
                    message: "expected a nonnegative integer exponent".to_string(),
                }),
            }
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<MPoly<3>, PolyError> {
        let (tok, pos) = self.advance()?;
        match tok {
            Tok::Int(n) => Ok(MPoly::constant(FieldElement::from_rat(
                Rat::from_integer(n),
                &self.field,
            ))),
            Tok::Sym(name) => {
                if let Some(idx) = self.vars.iter().position(|v| *v == name) {
                    Ok(MPoly::variable(idx, &self.field))
                } else if !self.field.generator_name().is_empty()
                    && name == self.field.generator_name()
                {
                    Ok(MPoly::constant(FieldElement::generator(&self.field)))
                } else {
                    Err(PolyError::UnknownSymbol(name))
                }
            }
            Tok::LParen => {
                let inner = self.expr()?;
                let (tok, pos) = self.advance()?;
                if tok != Tok::RParen {
                    return Err(PolyError::Syntax {
                        position: pos,
                        message: "expected `)`".to_string(),
                    });
                }
                Ok(inner)
            }
            Tok::End => Err(PolyError::Syntax {
                position: pos,
                message: "unexpected end of input".to_string(),
            }),
            other => Err(PolyError::Syntax {
                position: pos,
                message: format!("unexpected token {other:?}"),
            }),
        }
    }

    fn finish(mut self, value: MPoly<3>) -> Result<MPoly<3>, PolyError> {
        let pos = self.lexer.peek_pos();
        if self.lookahead.0 != Tok::End {
            return Err(PolyError::Syntax {
                position: pos.min(self.lookahead.1),
                message: format!("trailing input starting with {:?}", self.lookahead.0),
            });
        }
        Ok(value)
    }
}

/// Parses an expression over the given variables into a trivariate
/// polynomial (unused variable slots simply stay empty).
pub fn parse_expr(
    text: &str,
    field: &Arc<NumberField>,
    vars: &[&str],
) -> Result<MPoly<3>, PolyError> {
    let mut parser = Parser::new(text, field, vars)?;
    let value = parser.expr()?;
    parser.finish(value)
}

/// Parses a homogeneous polynomial in x, y, z; collects like terms,
/// verifies homogeneity, and records the degree.
pub fn parse_hompoly(text: &str, field: &Arc<NumberField>) -> Result<HomPoly, PolyError> {
    let value = parse_expr(text, field, &VAR_NAMES)?;
    HomPoly::new(value)
}

/// Parses a variable-free field expression (point coordinates).
pub fn parse_constant(text: &str, field: &Arc<NumberField>) -> Result<FieldElement, PolyError> {
    let value = parse_expr(text, field, &[])?;
    match value.homogeneous_degree() {
        Some(0) => Ok(value.coeff(&[0, 0, 0])),
        _ => Err(PolyError::Syntax {
            position: 0,
            message: "expected a constant expression".to_string(),
        }),
    }
}

/// Parses a linear form a*x + b*y + c*z into its coefficient triple.
pub fn parse_linear_form(
    text: &str,
    field: &Arc<NumberField>,
) -> Result<[FieldElement; 3], PolyError> {
    let p = parse_hompoly(text, field)?;
    if p.is_zero() || p.degree() != 1 {
        return Err(PolyError::Syntax {
            position: 0,
            message: format!("`{text}` is not a nonzero linear form"),
        });
    }
    Ok([
        p.coeff(&[1, 0, 0]),
        p.coeff(&[0, 1, 0]),
        p.coeff(&[0, 0, 1]),
    ])
}

/// Parses a monic integer-coefficient polynomial in `t` (constant term
/// first) for field declarations.
pub fn parse_minpoly(text: &str) -> Result<Vec<Rat>, PolyError> {
    let q = NumberField::rationals();
    let value = parse_expr(text, &q, &["t"])?;
    let deg = value.total_degree().unwrap_or(0) as usize;
    let mut coeffs = vec![Rat::zero(); deg + 1];
    for (e, c) in value.terms() {
        if e[1] != 0 || e[2] != 0 {
            unreachable!("only variable t is declared");
        }
        coeffs[e[0] as usize] = c.as_rat().expect("rational base field").clone();
    }
    Ok(coeffs)
}
