//! A tiny arithmetic expression language for user-supplied maps.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' integer)?
//! atom  := number | 'x' | 'u' | 'h' | func '(' expr ')' | '(' expr ')'
//! func  := sqrt | abs | exp | ln
//! ```
//! `x` and `u` name the same variable; `h` is the deformation parameter.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Hbar,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Abs,
    Exp,
    Ln,
}

impl Expr {
    pub fn eval<T: Scalar>(&self, x: T, h: T) -> T {
        match self {
            Expr::Num(v) => T::lit(*v),
            Expr::Var => x,
            Expr::Hbar => h,
            Expr::Neg(a) => -a.eval(x, h),
            Expr::Add(a, b) => a.eval(x, h) + b.eval(x, h),
            Expr::Sub(a, b) => a.eval(x, h) - b.eval(x, h),
            Expr::Mul(a, b) => a.eval(x, h) * b.eval(x, h),
            Expr::Div(a, b) => a.eval(x, h) / b.eval(x, h),
            Expr::Pow(a, k) => a.eval(x, h).powi(*k),
            Expr::Call(f, a) => {
                let v = a.eval(x, h);
                match f {
                    Func::Sqrt => v.sqrt(),
                    Func::Abs => v.abs(),
                    Func::Exp => v.exp(),
                    Func::Ln => v.ln(),
                }
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var => f.write_str("x"),
            Expr::Hbar => f.write_str("h"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, k) => write!(f, "({a}^{k})"),
            Expr::Call(func, a) => {
                let name = match func {
                    Func::Sqrt => "sqrt",
                    Func::Abs => "abs",
                    Func::Exp => "exp",
                    Func::Ln => "ln",
                };
                write!(f, "{name}({a})")
            }
        }
    }
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(e)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Expression(format!("{what} at offset {}", self.pos))
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let k: i32 = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.error("expected integer exponent"))?;
            return Ok(Expr::Pow(Box::new(base), if neg { -k } else { k }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.pos;
                while self.pos < self.src.len() {
                    let c = self.src[self.pos];
                    let exp_sign = (c == b'-' || c == b'+')
                        && self.pos > start
                        && matches!(self.src[self.pos - 1], b'e' | b'E');
                    if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || exp_sign {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                text.parse().map(Expr::Num).map_err(|_| self.error("bad number"))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let func = match name {
                    "x" | "u" => return Ok(Expr::Var),
                    "h" | "hbar" => return Ok(Expr::Hbar),
                    "sqrt" => Func::Sqrt,
                    "abs" => Func::Abs,
                    "exp" => Func::Exp,
                    "ln" => Func::Ln,
                    _ => return Err(self.error(&format!("unknown name {name:?}"))),
                };
                if !self.eat(b'(') {
                    return Err(self.error("expected '('"));
                }
                let arg = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(Expr::Call(func, Box::new(arg)))
            }
            _ => Err(self.error("unexpected input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, x: f64, h: f64) -> f64 {
        s.parse::<Expr>().unwrap().eval(x, h)
    }

    #[test]
    fn precedence() {
        assert_eq!(ev("1 + 2*3", 0.0, 0.0), 7.0);
        assert_eq!(ev("-x^2", 3.0, 0.0), -9.0);
        assert_eq!(ev("(1-u)^2/2", 0.0, 0.0), 0.5);
        assert_eq!(ev("2^-1", 0.0, 0.0), 0.5);
        assert_eq!(ev("x - h - 1", 5.0, 1.0), 3.0);
        assert!((ev("sqrt(1 + h*x)", 3.0, 1.0) - 2.0).abs() < 1e-15);
        assert_eq!(ev("1.5e-1*x", 2.0, 0.0), 0.3);
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "1 +", "foo(x)", "sqrt x", "(x", "x)", "x^y"] {
            assert!(s.parse::<Expr>().is_err(), "{s}");
        }
    }

    #[test]
    fn display_reparses() {
        let e: Expr = "x + h*sqrt(abs(1-x))^3/2".parse().unwrap();
        let again: Expr = e.to_string().parse().unwrap();
        assert_eq!(e.eval(0.3, 0.1), again.eval(0.3, 0.1));
    }
}
