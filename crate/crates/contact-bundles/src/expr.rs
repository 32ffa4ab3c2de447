//! A small expression language for scalar fields in scenario files.
//!
//! Grammar, by precedence: `^` binds tightest (right-associative), then
//! unary minus, then `*` `/`, then `+` `-` (all left-associative).
//! Atoms are numeric literals, `pi`, ambient coordinates `x0, x1, ...`,
//! parenthesized expressions, and the functions sin, cos, exp, log,
//! sqrt, atan2.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::tolerances::EXPR_DIV_GUARD;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Coord(usize),
    Pi,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Atan2,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Atan2 => "atan2",
        }
    }

    fn arity(self) -> usize {
        match self {
            Func::Atan2 => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize)>> {
        let mut lx = Lexer {
            src: src.as_bytes(),
            pos: 0,
        };
        let mut out = Vec::new();
        loop {
            lx.skip_ws();
            if lx.pos >= lx.src.len() {
                return Ok(out);
            }
            let start = lx.pos;
            let c = lx.src[lx.pos];
            let tok = match c {
                b'(' => {
                    lx.pos += 1;
                    Tok::LParen
                }
                b')' => {
                    lx.pos += 1;
                    Tok::RParen
                }
                b',' => {
                    lx.pos += 1;
                    Tok::Comma
                }
                b'+' => {
                    lx.pos += 1;
                    Tok::Plus
                }
                b'-' => {
                    lx.pos += 1;
                    Tok::Minus
                }
                b'*' => {
                    lx.pos += 1;
                    Tok::Star
                }
                b'/' => {
                    lx.pos += 1;
                    Tok::Slash
                }
                b'^' => {
                    lx.pos += 1;
                    Tok::Caret
                }
                b'0'..=b'9' => lx.number(start)?,
                c if c.is_ascii_alphabetic() || c == b'_' => lx.ident(start),
                other => {
                    return Err(Error::Expr {
                        offset: start,
                        message: format!("unexpected character '{}'", other as char),
                    })
                }
            };
            out.push((tok, start));
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn number(&mut self, start: usize) -> Result<Tok> {
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
        {
            self.pos += 1;
        }
        if self.pos < self.src.len() && (self.src[self.pos] | 32) == b'e' {
            let mut probe = self.pos + 1;
            if probe < self.src.len() && (self.src[probe] == b'+' || self.src[probe] == b'-') {
                probe += 1;
            }
            if probe < self.src.len() && self.src[probe].is_ascii_digit() {
                self.pos = probe;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse::<f64>().map(Tok::Num).map_err(|_| Error::Expr {
            offset: start,
            message: format!("malformed number '{text}'"),
        })
    }

    fn ident(&mut self, start: usize) -> Tok {
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        Tok::Ident(
            std::str::from_utf8(&self.src[start..self.pos])
                .expect("ascii")
                .to_string(),
        )
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

pub fn parse_expression(text: &str) -> Result<Expr> {
    let toks = Lexer::tokens(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(Error::Expr {
            offset: p.toks[p.pos].1,
            message: "trailing input".into(),
        });
    }
    Ok(e)
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, o)| *o).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Expr {
                offset: self.offset(),
                message: format!("expected {what}"),
            })
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => BinOp::Add,
                Some(Tok::Minus) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => BinOp::Mul,
                Some(Tok::Slash) => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let offset = self.offset();
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Expr::Num(v)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => self.ident_atom(name, offset),
            Some(other) => Err(Error::Expr {
                offset,
                message: format!("expected an operand, found {other:?}"),
            }),
            None => Err(Error::Expr {
                offset,
                message: "unexpected end of input".into(),
            }),
        }
    }

    fn ident_atom(&mut self, name: String, offset: usize) -> Result<Expr> {
        if name == "pi" {
            return Ok(Expr::Pi);
        }
        if let Some(rest) = name.strip_prefix('x') {
            if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                return Ok(Expr::Coord(rest.parse().expect("digits")));
            }
        }
        let func = match name.as_str() {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "atan2" => Func::Atan2,
            _ => {
                return Err(Error::Expr {
                    offset,
                    message: format!("unknown identifier '{name}'"),
                })
            }
        };
        self.expect(Tok::LParen, "'(' after function name")?;
        let mut args = vec![self.expr()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            args.push(self.expr()?);
        }
        self.expect(Tok::RParen, "')'")?;
        if args.len() != func.arity() {
            return Err(Error::Expr {
                offset,
                message: format!(
                    "{} takes {} argument(s), found {}",
                    func.name(),
                    func.arity(),
                    args.len()
                ),
            });
        }
        Ok(Expr::Call(func, args))
    }
}

impl Expr {
    /// Largest ambient coordinate referenced, if any.
    pub fn max_coord(&self) -> Option<usize> {
        match self {
            Expr::Num(_) | Expr::Pi => None,
            Expr::Coord(i) => Some(*i),
            Expr::Neg(e) => e.max_coord(),
            Expr::Bin(_, l, r) => l.max_coord().max(r.max_coord()),
            Expr::Call(_, args) => args.iter().filter_map(|a| a.max_coord()).max(),
        }
    }

    /// Total evaluation; domain violations yield an error naming the
    /// failing operation.
    pub fn eval(&self, p: &[f64]) -> std::result::Result<f64, String> {
        match self {
            Expr::Num(v) => Ok(*v),
            Expr::Pi => Ok(std::f64::consts::PI),
            Expr::Coord(i) => p
                .get(*i)
                .copied()
                .ok_or_else(|| format!("coordinate x{i} out of range")),
            Expr::Neg(e) => Ok(-e.eval(p)?),
            Expr::Bin(op, l, r) => {
                let (a, b) = (l.eval(p)?, r.eval(p)?);
                match op {
                    BinOp::Add => Ok(a + b),
                    BinOp::Sub => Ok(a - b),
                    BinOp::Mul => Ok(a * b),
                    BinOp::Div => {
                        if b.abs() < EXPR_DIV_GUARD {
                            Err(format!("division by {b}"))
                        } else {
                            Ok(a / b)
                        }
                    }
                    BinOp::Pow => {
                        let v = a.powf(b);
                        if v.is_nan() {
                            Err(format!("{a}^{b} is undefined"))
                        } else {
                            Ok(v)
                        }
                    }
                }
            }
            Expr::Call(f, args) => {
                let a = args[0].eval(p)?;
                match f {
                    Func::Sin => Ok(a.sin()),
                    Func::Cos => Ok(a.cos()),
                    Func::Exp => Ok(a.exp()),
                    Func::Log => {
                        if a <= 0.0 {
                            Err(format!("log of {a}"))
                        } else {
                            Ok(a.ln())
                        }
                    }
                    Func::Sqrt => {
                        if a < 0.0 {
                            Err(format!("sqrt of {a}"))
                        } else {
                            Ok(a.sqrt())
                        }
                    }
                    Func::Atan2 => Ok(a.atan2(args[1].eval(p)?)),
                }
            }
        }
    }

    /// Field backed by this expression; derivatives fall back to finite
    /// differences. Domain errors surface as NaN and are screened by the
    /// scenario validator before any sweep runs.
    pub fn to_field(&self, ambient_dim: usize) -> Result<ScalarField> {
        if let Some(i) = self.max_coord() {
            if i >= ambient_dim {
                return Err(Error::Expr {
                    offset: 0,
                    message: format!(
                        "expression references x{i} but the ambient dimension is {ambient_dim}"
                    ),
                });
            }
        }
        let e = self.clone();
        Ok(ScalarField::from_fn(move |p| {
            e.eval(p).unwrap_or(f64::NAN)
        }))
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Bin(BinOp::Pow, ..) => 4,
            _ => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let prec = self.prec();
        if prec < min_prec {
            write!(f, "(")?;
            self.fmt_prec(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Pi => write!(f, "pi"),
            Expr::Coord(i) => write!(f, "x{i}"),
            Expr::Neg(e) => {
                write!(f, "-")?;
                e.fmt_prec(f, 3)
            }
            Expr::Bin(op, l, r) => {
                let (sym, lp, rp) = match op {
                    BinOp::Add => ("+", 1, 2),
                    BinOp::Sub => ("-", 1, 2),
                    BinOp::Mul => ("*", 2, 3),
                    BinOp::Div => ("/", 2, 3),
                    BinOp::Pow => ("^", 5, 3),
                };
                l.fmt_prec(f, lp)?;
                write!(f, "{sym}")?;
                r.fmt_prec(f, rp)
            }
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    a.fmt_prec(f, 0)?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Expr {
        parse_expression(s).unwrap()
    }

    #[test]
    fn sin_of_product() {
        let e = parse("sin(2*pi*x1)");
        assert_eq!(
            e,
            Expr::Call(
                Func::Sin,
                vec![Expr::Bin(
                    BinOp::Mul,
                    Box::new(Expr::Bin(
                        BinOp::Mul,
                        Box::new(Expr::Num(2.0)),
                        Box::new(Expr::Pi)
                    )),
                    Box::new(Expr::Coord(1)),
                )]
            )
        );
        assert!((e.eval(&[0.0, 0.25]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn precedence_of_pow_and_mul() {
        let e = parse("x0*x1 + x2^2");
        assert_eq!(
            e,
            Expr::Bin(
                BinOp::Add,
                Box::new(Expr::Bin(
                    BinOp::Mul,
                    Box::new(Expr::Coord(0)),
                    Box::new(Expr::Coord(1))
                )),
                Box::new(Expr::Bin(
                    BinOp::Pow,
                    Box::new(Expr::Coord(2)),
                    Box::new(Expr::Num(2.0))
                )),
            )
        );
    }

    #[test]
    fn unary_minus_binds_below_pow() {
        let e = parse("-x0^2");
        assert_eq!(e.eval(&[3.0]).unwrap(), -9.0);
        let e2 = parse("2^-2");
        assert_eq!(e2.eval(&[]).unwrap(), 0.25);
    }

    #[test]
    fn pow_is_right_associative() {
        let e = parse("2^3^2");
        assert_eq!(e.eval(&[]).unwrap(), 512.0);
    }

    #[test]
    fn syntax_error_carries_offset() {
        match parse_expression("2*+3") {
            Err(Error::Expr { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_identifier_rejected() {
        match parse_expression("2*foo(1)") {
            Err(Error::Expr { offset, message }) => {
                assert_eq!(offset, 2);
                assert!(message.contains("foo"));
            }
            other => panic!("expected error, got {other:?}"),
        }
    }

    #[test]
    fn domain_errors() {
        assert!(parse("log(x0)").eval(&[-1.0]).is_err());
        assert!(parse("sqrt(x0)").eval(&[-1.0]).is_err());
        assert!(parse("1/x0").eval(&[0.0]).is_err());
        assert!(parse("atan2(x0,x1)").eval(&[1.0, 0.0]).is_ok());
    }

    #[test]
    fn coordinate_out_of_ambient_is_rejected() {
        let e = parse("x9");
        assert!(e.to_field(6).is_err());
        assert!(e.to_field(10).is_ok());
    }

    #[test]
    fn print_parse_round_trip_examples() {
        for s in [
            "sin(2*pi*x1)",
            "x0*x1+x2^2",
            "-x0^2",
            "2^-2",
            "(x0+x1)*x2",
            "x0-(x1-x2)",
            "x0/x1/x2",
            "atan2(x1,x0)",
        ] {
            let e = parse(s);
            let printed = e.to_string();
            assert_eq!(parse(&printed), e, "round trip through '{printed}'");
        }
    }
}
