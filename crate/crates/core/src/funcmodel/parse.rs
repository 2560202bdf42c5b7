//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | 'x' | ident '(' expr (',' expr)? ')' | '(' expr ')'
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so `-x^2`
//! reads as `-(x^2)`. Columns in errors are 1-based character positions.

use super::expr::{BinaryOp, Expr, UnaryOp};
use crate::error::ParseError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
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
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push((tok, col));
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let literal: String = chars[start..i].iter().collect();
            let value = literal.parse::<f64>().map_err(|_| ParseError::Syntax {
                column: col,
                message: format!("malformed number `{literal}`"),
            })?;
            out.push((Tok::Num(value), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else {
            return Err(ParseError::Syntax {
                column: col,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(ParseError::Syntax {
                column: self.column(),
                message: format!("expected {}, found {}", want.describe(), self.peek().describe()),
            })
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinaryOp::Add,
                Tok::Minus => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinaryOp::Mul,
                Tok::Slash => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            Ok(Expr::unary(UnaryOp::Neg, self.unary()?))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let exponent = self.unary()?;
            Ok(Expr::binary(BinaryOp::Pow, base, exponent))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let (tok, column) = self.bump();
        match tok {
            Tok::Num(v) => Ok(Expr::Constant(v)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(name) if name == "x" => Ok(Expr::Variable),
            Tok::Ident(name) => {
                enum Kind {
                    One(UnaryOp),
                    Two(BinaryOp),
                }
                let kind = match name.as_str() {
                    "exp" => Kind::One(UnaryOp::Exp),
                    "log" => Kind::One(UnaryOp::Log),
                    "abs" => Kind::One(UnaryOp::Abs),
                    "sqrt" => Kind::One(UnaryOp::Sqrt),
                    "min" => Kind::Two(BinaryOp::Min),
                    "max" => Kind::Two(BinaryOp::Max),
                    _ => return Err(ParseError::UnknownIdentifier { column, name }),
                };
                self.expect(Tok::LParen)?;
                let first = self.expr()?;
                let node = match kind {
                    Kind::One(op) => Expr::unary(op, first),
                    Kind::Two(op) => {
                        self.expect(Tok::Comma)?;
                        let second = self.expr()?;
                        Expr::binary(op, first, second)
                    }
                };
                self.expect(Tok::RParen)?;
                Ok(node)
            }
            other => Err(ParseError::Syntax {
                column,
                message: format!("expected an operand, found {}", other.describe()),
            }),
        }
    }
}

/// Parses expression text in the variable `x`.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(ParseError::Syntax {
            column: p.column(),
            message: format!("unexpected {}", p.peek().describe()),
        });
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: f64) -> Expr {
        Expr::Constant(v)
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(
            parse("x^2").unwrap(),
            Expr::binary(BinaryOp::Pow, Expr::Variable, c(2.0))
        );
        assert_eq!(
            parse("exp(x)").unwrap(),
            Expr::unary(UnaryOp::Exp, Expr::Variable)
        );
        let err = parse("1/(1-x").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { column: 7, .. }), "{err:?}");
    }

    #[test]
    fn precedence() {
        // 1 + 2*3^2 = 19
        assert_eq!(parse("1+2*3^2").unwrap().eval(0.0).unwrap(), 19.0);
        // right-assoc power
        assert_eq!(parse("2^3^2").unwrap().eval(0.0).unwrap(), 512.0);
        assert_eq!(parse("-x^2").unwrap().eval(3.0).unwrap(), -9.0);
        assert_eq!(parse("2^-1").unwrap().eval(0.0).unwrap(), 0.5);
        assert_eq!(parse("8/2/2").unwrap().eval(0.0).unwrap(), 2.0);
        assert_eq!(parse("1-2-3").unwrap().eval(0.0).unwrap(), -4.0);
        assert_eq!(parse("2*-x").unwrap().eval(1.5).unwrap(), -3.0);
    }

    #[test]
    fn numbers_and_functions() {
        assert_eq!(parse("1.5e-3").unwrap(), c(1.5e-3));
        assert_eq!(parse(".25").unwrap(), c(0.25));
        assert_eq!(parse("max(x, 0.5)").unwrap().eval(0.1).unwrap(), 0.5);
        assert_eq!(parse("min(x,0.5)").unwrap().eval(0.1).unwrap(), 0.1);
        assert_eq!(parse(" abs( x - 1 ) ").unwrap().eval(0.25).unwrap(), 0.75);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse("sin(x)"),
            Err(ParseError::UnknownIdentifier { column: 1, .. })
        ));
        assert!(matches!(
            parse("2 * y"),
            Err(ParseError::UnknownIdentifier { column: 5, .. })
        ));
        assert!(matches!(parse("x +"), Err(ParseError::Syntax { column: 4, .. })));
        assert!(matches!(parse("x x"), Err(ParseError::Syntax { column: 3, .. })));
        assert!(matches!(parse("max(x)"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("x # 2"), Err(ParseError::Syntax { column: 3, .. })));
        assert!(parse("").is_err());
    }
}
