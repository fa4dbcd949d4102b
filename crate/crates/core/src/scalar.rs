//! Complex scalars and the small arithmetic language used in category files.
//!
//! An expression is built from decimal or rational literals, the constants
//! `i`, `pi` and `e`, the functions `sqrt`, `exp`, `cos`, `sin`, `conj`, and
//! the operators `+ - * / ^` with parentheses. `^` is right associative and
//! binds tighter than unary minus, so `-2^2` is `-4`.

use crate::error::{Error, Result};
use num_complex::Complex64;

pub type Scalar = Complex64;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

pub fn c(re: f64, im: f64) -> Scalar {
    Complex64::new(re, im)
}

pub fn real(re: f64) -> Scalar {
    Complex64::new(re, 0.0)
}

pub fn approx_eq(a: Scalar, b: Scalar, tol: f64) -> bool {
    (a - b).norm() < tol
}

/// Largest entry modulus, 0 for an empty matrix.
pub fn max_abs(m: &nalgebra::DMatrix<Scalar>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Integer power that stays exact for exponent 0 and uses repeated
/// multiplication for small exponents.
pub fn powi(z: Scalar, n: i64) -> Scalar {
    if n == 0 {
        return real(1.0);
    }
    let base = if n < 0 { real(1.0) / z } else { z };
    let mut acc = real(1.0);
    for _ in 0..n.unsigned_abs() {
        acc *= base;
    }
    acc
}

pub fn eval_expr(src: &str) -> Result<Scalar> {
    let mut p = Parser {
        src,
        chars: src.char_indices().collect(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        let col = self.pos + 1;
        Error::parse_at(0, col, format!("{msg} in scalar \"{}\"", self.src))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&(_, ch)| ch)
    }

    fn expr(&mut self) -> Result<Scalar> {
        let mut acc = self.term()?;
        while let Some(op) = self.peek() {
            if op != '+' && op != '-' {
                break;
            }
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Scalar> {
        let mut acc = self.unary()?;
        while let Some(op) = self.peek() {
            if op != '*' && op != '/' {
                break;
            }
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == '*' { acc * rhs } else { acc / rhs };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Scalar> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Scalar> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let exp = self.unary()?;
            if exp.im == 0.0 && exp.re.fract() == 0.0 && exp.re.abs() < 64.0 {
                return Ok(powi(base, exp.re as i64));
            }
            return Ok(base.powc(exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Scalar> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(ch) if ch.is_ascii_digit() || ch == '.' => self.number(),
            Some(ch) if ch.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].1.is_ascii_alphanumeric()
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
                match name.as_str() {
                    "i" => Ok(c(0.0, 1.0)),
                    "pi" => Ok(real(std::f64::consts::PI)),
                    "e" => Ok(real(std::f64::consts::E)),
                    "sqrt" | "exp" | "cos" | "sin" | "conj" => {
                        if self.peek() != Some('(') {
                            self.pos = start;
                            return Err(self.err("expected '(' after function name"));
                        }
                        let arg = self.atom()?;
                        Ok(match name.as_str() {
                            "sqrt" => arg.sqrt(),
                            "exp" => arg.exp(),
                            "cos" => arg.cos(),
                            "sin" => arg.sin(),
                            _ => arg.conj(),
                        })
                    }
                    _ => {
                        self.pos = start;
                        Err(self.err(&format!("unknown identifier '{name}'")))
                    }
                }
            }
            _ => Err(self.err("expected a number, constant or '('")),
        }
    }

    fn number(&mut self) -> Result<Scalar> {
        let start = self.pos;
        while self.pos < self.chars.len() {
            let ch = self.chars[self.pos].1;
            if ch.is_ascii_digit() || ch == '.' {
                self.pos += 1;
            } else if (ch == 'e' || ch == 'E')
                && self
                    .chars
                    .get(self.pos + 1)
                    .is_some_and(|n| n.1.is_ascii_digit() || n.1 == '-' || n.1 == '+')
            {
                self.pos += 2;
            } else {
                break;
            }
        }
        let text: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
        text.parse::<f64>()
            .map(real)
            .map_err(|_| self.err(&format!("bad number '{text}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str) -> Scalar {
        eval_expr(s).unwrap()
    }

    #[test]
    fn literals_and_precedence() {
        assert!(approx_eq(ev("1/2*sqrt(2)"), real(2f64.sqrt() / 2.0), 1e-15));
        assert!(approx_eq(ev("-2^2"), real(-4.0), 1e-15));
        assert!(approx_eq(ev("2^-1"), real(0.5), 1e-15));
        assert!(approx_eq(ev("2^3^2"), real(512.0), 1e-12));
        assert!(approx_eq(ev("(1+sqrt(5))/2"), real(1.618033988749895), 1e-15));
        assert!(approx_eq(ev("1.5e-1"), real(0.15), 1e-15));
    }

    #[test]
    fn complex_constants() {
        let z = ev("exp(i*pi/8)");
        let want = c((std::f64::consts::PI / 8.0).cos(), (std::f64::consts::PI / 8.0).sin());
        assert!(approx_eq(z, want, 1e-15));
        assert!(approx_eq(ev("i*i"), real(-1.0), 1e-15));
        assert!(approx_eq(ev("conj(1+2*i)"), c(1.0, -2.0), 1e-15));
    }

    #[test]
    fn errors() {
        assert!(eval_expr("1+").is_err());
        assert!(eval_expr("sqrt 2").is_err());
        assert!(eval_expr("foo(1)").is_err());
        assert!(eval_expr("(1").is_err());
        assert!(eval_expr("1 2").is_err());
    }
}
