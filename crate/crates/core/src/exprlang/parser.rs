//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | 'x' | 'e' | 'pi' | func '(' expr ')' | '(' expr ')'
//! func    := 'ln' | 'log' | 'exp' | 'sqrt'
//! number  := digits ['.' digits] [('e' | 'E') ['+' | '-'] digits]
//! ```
//!
//! `^` binds tighter than unary minus and is right-associative, so `-x^2`
//! is `-(x^2)` and `2^3^2` is `2^(3^2)`.

use thiserror::Error;

use super::ast::{BinOp, Constant, Expr, Func};

/// Nesting limit; deeper input is rejected instead of exhausting the stack.
const MAX_DEPTH: usize = 512;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("syntax error at byte {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("empty expression")]
    Empty,
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected {found}, expected {expected}")]
    UnexpectedToken {
        found: String,
        expected: &'static str,
    },
    #[error("malformed number {0:?}")]
    InvalidNumber(String),
    #[error("unknown identifier {0:?}")]
    UnknownIdentifier(String),
    #[error("unknown function {0:?}")]
    UnknownFunction(String),
    #[error("input is not valid UTF-8")]
    InvalidUtf8,
    #[error("expression nested deeper than {MAX_DEPTH} levels")]
    TooDeep,
}

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
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // An exponent only if digits follow, so `2*e` style input
                // never gets swallowed into the literal.
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text = &src[start..i];
                match text.parse::<f64>() {
                    Ok(v) if v.is_finite() => out.push((start, Tok::Num(v))),
                    _ => {
                        return Err(ParseError {
                            offset: start,
                            kind: ParseErrorKind::InvalidNumber(text.to_string()),
                        })
                    }
                }
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('\u{fffd}');
                return Err(ParseError {
                    offset: start,
                    kind: ParseErrorKind::UnexpectedChar(ch),
                });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        let kind = match self.peek() {
            Tok::End => ParseErrorKind::UnexpectedEnd,
            other => ParseErrorKind::UnexpectedToken {
                found: other.describe(),
                expected,
            },
        };
        ParseError {
            offset: self.offset(),
            kind,
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError {
                offset: self.offset(),
                kind: ParseErrorKind::TooDeep,
            });
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let mut levels = 1;
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            // Every operator in a chain deepens the (left-leaning) tree.
            self.enter()?;
            levels += 1;
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        self.depth -= levels;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut levels = 0;
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.enter()?;
            levels += 1;
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        self.depth -= levels;
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let e = if *self.peek() == Tok::Minus {
            self.bump();
            Expr::neg(self.unary()?)
        } else {
            self.power()?
        };
        self.depth -= 1;
        Ok(e)
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let exponent = self.unary()?;
            return Ok(Expr::binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let offset = self.offset();
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Lit(v))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() == Tok::LParen {
                    let func = Func::lookup(&name).ok_or(ParseError {
                        offset,
                        kind: ParseErrorKind::UnknownFunction(name),
                    })?;
                    self.bump();
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    return Ok(Expr::call(func, arg));
                }
                match name.as_str() {
                    "x" => Ok(Expr::Var),
                    "e" => Ok(Expr::Const(Constant::E)),
                    "pi" => Ok(Expr::Const(Constant::Pi)),
                    _ if Func::lookup(&name).is_some() => Err(self.unexpected("'('")),
                    _ => Err(ParseError {
                        offset,
                        kind: ParseErrorKind::UnknownIdentifier(name),
                    }),
                }
            }
            _ => Err(self.unexpected("a number, 'x', a constant, a function call or '('")),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::RParen {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected("')'"))
        }
    }
}

pub(crate) fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    if toks.len() == 1 {
        return Err(ParseError {
            offset: 0,
            kind: ParseErrorKind::Empty,
        });
    }
    let mut p = Parser {
        toks,
        pos: 0,
        depth: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(v: f64) -> Expr {
        Expr::Lit(v)
    }

    #[test]
    fn reciprocal() {
        assert_eq!(
            parse_expr("1/x").unwrap(),
            Expr::binary(BinOp::Div, lit(1.0), Expr::Var)
        );
    }

    #[test]
    fn power_binds_parenthesised_exponent() {
        let expected = Expr::binary(
            BinOp::Mul,
            lit(2.0),
            Expr::binary(
                BinOp::Pow,
                Expr::Var,
                Expr::binary(BinOp::Sub, lit(0.5), lit(1.0)),
            ),
        );
        assert_eq!(parse_expr("2*x^(0.5-1)").unwrap(), expected);
    }

    #[test]
    fn unterminated_call_reports_end_offset() {
        let err = parse_expr("ln(").unwrap_err();
        assert_eq!(err.offset, 3);
        assert_eq!(err.kind, ParseErrorKind::UnexpectedEnd);
    }

    #[test]
    fn neg_is_looser_than_pow() {
        assert_eq!(
            parse_expr("-x^2").unwrap(),
            Expr::neg(Expr::binary(BinOp::Pow, Expr::Var, lit(2.0)))
        );
    }

    #[test]
    fn pow_is_right_associative() {
        assert_eq!(
            parse_expr("2^3^2").unwrap(),
            Expr::binary(
                BinOp::Pow,
                lit(2.0),
                Expr::binary(BinOp::Pow, lit(3.0), lit(2.0))
            )
        );
    }

    #[test]
    fn neg_exponent_allowed() {
        assert_eq!(
            parse_expr("x^-1").unwrap(),
            Expr::binary(BinOp::Pow, Expr::Var, Expr::neg(lit(1.0)))
        );
    }

    #[test]
    fn sub_and_div_are_left_associative() {
        assert_eq!(
            parse_expr("8/4/2").unwrap(),
            Expr::binary(
                BinOp::Div,
                Expr::binary(BinOp::Div, lit(8.0), lit(4.0)),
                lit(2.0)
            )
        );
    }

    #[test]
    fn log_aliases_ln() {
        assert_eq!(parse_expr("log(x)").unwrap(), parse_expr("ln(x)").unwrap());
    }

    #[test]
    fn exponent_literals_and_constant_e() {
        assert_eq!(parse_expr("1e-3").unwrap(), lit(1e-3));
        assert_eq!(
            parse_expr("2*e").unwrap(),
            Expr::binary(BinOp::Mul, lit(2.0), Expr::Const(Constant::E))
        );
        // `2e` is a literal followed by a stray identifier.
        assert!(parse_expr("2e").is_err());
    }

    #[test]
    fn unknown_names() {
        let err = parse_expr("sin(x)").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownFunction("sin".into()));
        assert_eq!(err.offset, 0);
        let err = parse_expr("x + y").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownIdentifier("y".into()));
        assert_eq!(err.offset, 4);
        let err = parse_expr("sin").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownIdentifier("sin".into()));
    }

    #[test]
    fn malformed_inputs() {
        assert_eq!(parse_expr("").unwrap_err().kind, ParseErrorKind::Empty);
        assert_eq!(parse_expr("   ").unwrap_err().kind, ParseErrorKind::Empty);
        assert_eq!(parse_expr("x $ 1").unwrap_err().offset, 2);
        assert_eq!(parse_expr("1..2").unwrap_err().offset, 0);
        assert_eq!(parse_expr("1e999").unwrap_err().offset, 0);
        assert_eq!(
            parse_expr("(x").unwrap_err().kind,
            ParseErrorKind::UnexpectedEnd
        );
        assert_eq!(parse_expr("x)").unwrap_err().offset, 1);
        assert_eq!(parse_expr("ln x").unwrap_err().offset, 3);
    }

    #[test]
    fn deep_nesting_is_rejected_not_overflowed() {
        let src = "(".repeat(10_000) + "x" + &")".repeat(10_000);
        assert_eq!(parse_expr(&src).unwrap_err().kind, ParseErrorKind::TooDeep);
        let src = "-".repeat(10_000) + "x";
        assert_eq!(parse_expr(&src).unwrap_err().kind, ParseErrorKind::TooDeep);
        let src = "2^".repeat(10_000) + "x";
        assert_eq!(parse_expr(&src).unwrap_err().kind, ParseErrorKind::TooDeep);
        let src = "x".to_string() + &"*x".repeat(10_000);
        assert_eq!(parse_expr(&src).unwrap_err().kind, ParseErrorKind::TooDeep);
        let src = "x".to_string() + &"+x".repeat(100);
        assert!(parse_expr(&src).is_ok());
    }
}
