//! A small arithmetic expression language over one variable `x`.
//!
//! Grammar (whitespace insignificant):
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?            // right-associative
//! atom   := number | 'x' | func '(' expr (',' expr)? ')' | '(' expr ')'
//! func   := sin | cos | exp | ln | sqrt | abs   (one argument)
//!         | min | max                           (two arguments)
//! ```
//! Parse errors carry the byte position of the offending token.

use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at position {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone)]
enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call1(Func1, Box<Expr>),
    Call2(Func2, Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, Copy)]
enum Func1 {
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
    Abs,
}

#[derive(Debug, Clone, Copy)]
enum Func2 {
    Min,
    Max,
}

impl Expr {
    fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var => x,
            Expr::Neg(e) => -e.eval(x),
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Pow(a, b) => a.eval(x).powf(b.eval(x)),
            Expr::Call1(f, e) => {
                let v = e.eval(x);
                match f {
                    Func1::Sin => v.sin(),
                    Func1::Cos => v.cos(),
                    Func1::Exp => v.exp(),
                    Func1::Ln => v.ln(),
                    Func1::Sqrt => v.sqrt(),
                    Func1::Abs => v.abs(),
                }
            }
            Expr::Call2(f, a, b) => {
                let (u, v) = (a.eval(x), b.eval(x));
                match f {
                    Func2::Min => u.min(v),
                    Func2::Max => u.max(v),
                }
            }
        }
    }
}

/// A parsed expression, evaluable at any x. Cheap to clone.
#[derive(Clone, Debug)]
pub struct Compiled {
    root: Arc<Expr>,
    pub source: String,
}

impl Compiled {
    pub fn eval(&self, x: f64) -> f64 {
        self.root.eval(x)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            pos,
            msg: msg.into(),
        })
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

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            Some(got) => self.err(
                self.pos,
                format!("expected '{}', found '{}'", c as char, got as char),
            ),
            None => self.err(
                self.pos,
                format!("expected '{}', found end of input", c as char),
            ),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            // right-associative: 2^3^2 = 2^(3^2); unary so -x binds the exponent
            let exp = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        match self.peek() {
            None => self.err(self.pos, "expected a value, found end of input"),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let name = self.ident();
                if name == "x" {
                    return Ok(Expr::Var);
                }
                let f1 = match name.as_str() {
                    "sin" => Some(Func1::Sin),
                    "cos" => Some(Func1::Cos),
                    "exp" => Some(Func1::Exp),
                    "ln" => Some(Func1::Ln),
                    "sqrt" => Some(Func1::Sqrt),
                    "abs" => Some(Func1::Abs),
                    _ => None,
                };
                if let Some(f) = f1 {
                    self.expect(b'(')?;
                    let arg = self.expr()?;
                    self.expect(b')')?;
                    return Ok(Expr::Call1(f, Box::new(arg)));
                }
                let f2 = match name.as_str() {
                    "min" => Some(Func2::Min),
                    "max" => Some(Func2::Max),
                    _ => None,
                };
                if let Some(f) = f2 {
                    self.expect(b'(')?;
                    let a = self.expr()?;
                    self.expect(b',')?;
                    let b = self.expr()?;
                    self.expect(b')')?;
                    return Ok(Expr::Call2(f, Box::new(a), Box::new(b)));
                }
                self.err(start, format!("unknown identifier '{name}'"))
            }
            Some(c) => self.err(self.pos, format!("unexpected character '{}'", c as char)),
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
        {
            self.pos += 1;
        }
        // exponent suffix: 1e-3, 2.5E+7
        if self.pos < self.src.len() && (self.src[self.pos] | 0x20) == b'e' {
            let mark = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && (self.src[self.pos] == b'+' || self.src[self.pos] == b'-')
            {
                self.pos += 1;
            }
            if self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            } else {
                self.pos = mark; // bare 'e' is not part of the number
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match text.parse::<f64>() {
            Ok(v) => Ok(Expr::Num(v)),
            Err(_) => self.err(start, format!("invalid number '{text}'")),
        }
    }
}

pub fn parse(source: &str) -> Result<Compiled, ParseError> {
    let mut p = Parser {
        src: source.as_bytes(),
        pos: 0,
    };
    let root = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(ParseError {
            pos: p.pos,
            msg: format!("unexpected trailing input '{}'", &source[p.pos..]),
        });
    }
    Ok(Compiled {
        root: Arc::new(root),
        source: source.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(src: &str, x: f64) -> f64 {
        parse(src).unwrap().eval(x)
    }

    #[test]
    fn arithmetic_and_precedence() {
        assert_eq!(eval("1+2*3", 0.0), 7.0);
        assert_eq!(eval("(1+2)*3", 0.0), 9.0);
        assert_eq!(eval("2^3^2", 0.0), 512.0);
        assert_eq!(eval("-2^2", 0.0), -4.0);
        assert_eq!(eval("6/3/2", 0.0), 1.0);
        assert_eq!(eval("1 - 2 - 3", 0.0), -4.0);
    }

    #[test]
    fn variable_and_functions() {
        assert_eq!(eval("x*x", 3.0), 9.0);
        assert!((eval("sin(x)", 1.0) - 1.0f64.sin()).abs() < 1e-15);
        assert!((eval("exp(ln(x))", 2.5) - 2.5).abs() < 1e-15);
        assert_eq!(eval("sqrt(abs(x))", -4.0), 2.0);
        assert_eq!(eval("min(x, 1)", 3.0), 1.0);
        assert_eq!(eval("max(x, 1)", 3.0), 3.0);
        assert_eq!(eval("min(1, max(x, 0))", -2.0), 0.0);
    }

    #[test]
    fn scientific_notation() {
        assert_eq!(eval("1e-3", 0.0), 1e-3);
        assert_eq!(eval("2.5E+2", 0.0), 250.0);
        assert_eq!(eval("1e3 + 1", 0.0), 1001.0);
    }

    #[test]
    fn errors_carry_position() {
        let e = parse("1 + ").unwrap_err();
        assert_eq!(e.pos, 4);
        let e = parse("sin(x").unwrap_err();
        assert_eq!(e.pos, 5);
        let e = parse("1 + y").unwrap_err();
        assert_eq!(e.pos, 4);
        assert!(e.msg.contains("unknown identifier"));
        let e = parse("1 2").unwrap_err();
        assert_eq!(e.pos, 2);
        assert!(e.msg.contains("trailing"));
        let e = parse("min(1)").unwrap_err();
        assert_eq!(e.pos, 5);
    }

    #[test]
    fn whitespace_is_insignificant() {
        assert_eq!(eval("  1 +  2 * x ", 2.0), 5.0);
    }
}
