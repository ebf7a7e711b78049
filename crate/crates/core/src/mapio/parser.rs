//! Recursive-descent parser for map expressions.
//!
//! ```text
//! map    := "(" expr "," expr ")"
//! expr   := term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := "-"? base ("^" nat)?
//! base   := "x" | "y" | nat | "(" expr ")"
//! ```
//!
//! Coefficients are folded into exact rationals while parsing. Division is
//! accepted only by a nonzero constant, so `x/2` is `(1/2)·x`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::ratpoly::{Poly2, Rat};

use super::polymap::{PolyMap, DEFAULT_DEGREE_CAP};
use super::MapError;

const MAX_NESTING: usize = 200;
const MAX_CONSTANT_EXPONENT: u32 = 4096;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    X,
    Y,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(n) => format!("number {n}"),
            Tok::X => "'x'".into(),
            Tok::Y => "'y'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, MapError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, ch)) = chars.peek() {
        let tok = match ch {
            c if c.is_whitespace() => {
                chars.next();
                continue;
            }
            '0'..='9' => {
                let mut end = pos;
                while let Some(&(p, c)) = chars.peek() {
                    if c.is_ascii_digit() {
                        end = p + c.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((Tok::Num(text[pos..end].parse().expect("digits")), pos));
                continue;
            }
            'x' => Tok::X,
            'y' => Tok::Y,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            other => {
                return Err(MapError::Syntax {
                    position: pos,
                    found: format!("character {other:?}"),
                    expected: vec!["'x'", "'y'", "number", "operator", "parenthesis"],
                })
            }
        };
        chars.next();
        out.push((tok, pos));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    cap: u32,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, label: &'static str) -> Result<(), MapError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(vec![label]))
        }
    }

    fn unexpected(&self, expected: Vec<&'static str>) -> MapError {
        MapError::Syntax {
            position: self.pos(),
            found: self.peek().describe(),
            expected,
        }
    }

    fn check_cap(&self, p: &Poly2, position: usize) -> Result<(), MapError> {
        if p.degree() > self.cap as i64 {
            return Err(MapError::DegreeCapExceeded {
                degree: p.degree() as u32,
                cap: self.cap,
                position: Some(position),
            });
        }
        Ok(())
    }

    fn map(&mut self) -> Result<(Poly2, Poly2), MapError> {
        self.expect(Tok::LParen, "'('")?;
        let f1 = self.expr()?;
        self.expect(Tok::Comma, "','")?;
        let f2 = self.expr()?;
        self.expect(Tok::RParen, "')'")?;
        if *self.peek() != Tok::End {
            return Err(self.unexpected(vec!["end of input"]));
        }
        Ok((f1, f2))
    }

    fn expr(&mut self) -> Result<Poly2, MapError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly2, MapError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    let (_, pos) = self.bump();
                    let rhs = self.factor()?;
                    if acc.degree() + rhs.degree() > self.cap as i64 {
                        return Err(MapError::DegreeCapExceeded {
                            degree: (acc.degree() + rhs.degree()) as u32,
                            cap: self.cap,
                            position: Some(pos),
                        });
                    }
                    acc = &acc * &rhs;
                }
                Tok::Slash => {
                    let (_, pos) = self.bump();
                    let divisor_pos = self.pos();
                    let rhs = self.factor()?;
                    if rhs.degree() > 0 {
                        return Err(MapError::NonPolynomial { position: divisor_pos });
                    }
                    let c = rhs.constant_term();
                    if c.is_zero() {
                        return Err(MapError::DivisionByZero { position: pos });
                    }
                    acc = acc.scale(&(Rat::from_integer(1.into()) / c));
                }
                Tok::X | Tok::Y | Tok::Num(_) | Tok::LParen => {
                    return Err(MapError::Syntax {
                        position: self.pos(),
                        found: self.peek().describe(),
                        expected: vec!["'*'", "'/'", "'+'", "'-'", "','", "')'"],
                    })
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly2, MapError> {
        let negate = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let mut base = self.base()?;
        if *self.peek() == Tok::Caret {
            let (_, caret_pos) = self.bump();
            let exp_pos = self.pos();
            let exponent = match self.bump().0 {
                Tok::Num(n) => n,
                _ => return Err(MapError::NonIntegerExponent { position: exp_pos }),
            };
            let e = exponent.to_u32();
            match base.degree() {
                d if d >= 1 => {
                    let total = e.map(|e| e as i64 * d);
                    match total {
                        Some(t) if t <= self.cap as i64 => {}
                        _ => {
                            return Err(MapError::DegreeCapExceeded {
                                degree: total.map(|t| t.min(u32::MAX as i64) as u32).unwrap_or(u32::MAX),
                                cap: self.cap,
                                position: Some(caret_pos),
                            })
                        }
                    }
                }
                _ => {
                    if e.is_none_or(|e| e > MAX_CONSTANT_EXPONENT) {
                        return Err(MapError::ExponentTooLarge { position: exp_pos });
                    }
                }
            }
            base = base.pow(e.expect("checked above"));
            self.check_cap(&base, caret_pos)?;
        }
        Ok(if negate { -base } else { base })
    }

    fn base(&mut self) -> Result<Poly2, MapError> {
        match self.peek().clone() {
            Tok::X => {
                self.bump();
                Ok(Poly2::x())
            }
            Tok::Y => {
                self.bump();
                Ok(Poly2::y())
            }
            Tok::Num(n) => {
                self.bump();
                Ok(Poly2::constant(Rat::from_integer(n)))
            }
            Tok::LParen => {
                if self.depth >= MAX_NESTING {
                    return Err(MapError::Syntax {
                        position: self.pos(),
                        found: "nesting deeper than 200 levels".into(),
                        expected: vec!["shallower expression"],
                    });
                }
                self.bump();
                self.depth += 1;
                let inner = self.expr()?;
                self.depth -= 1;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(self.unexpected(vec!["'x'", "'y'", "number", "'('"])),
        }
    }
}

/// Parses `"(expr, expr)"` with the default degree cap.
pub fn parse_map(text: &str) -> Result<PolyMap, MapError> {
    parse_map_with_cap(text, DEFAULT_DEGREE_CAP)
}

pub fn parse_map_with_cap(text: &str, cap: u32) -> Result<PolyMap, MapError> {
    let mut parser = Parser {
        toks: lex(text)?,
        at: 0,
        cap,
        depth: 0,
    };
    let (f1, f2) = parser.map()?;
    let mut map = PolyMap::with_cap(f1, f2, cap)?;
    map.source_text = Some(text.to_string());
    Ok(map)
}

/// Parses a single polynomial expression (no surrounding pair).
pub fn parse_poly(text: &str, cap: u32) -> Result<Poly2, MapError> {
    let mut parser = Parser {
        toks: lex(text)?,
        at: 0,
        cap,
        depth: 0,
    };
    let p = parser.expr()?;
    if *parser.peek() != Tok::End {
        return Err(parser.unexpected(vec!["end of input"]));
    }
    Ok(p)
}
