//! Recursive-descent parser for the polynomial text grammar:
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := rational | var ('^' uint)? | '(' expr ')' | '-' factor
//! rational := int ('/' uint)?
//! var      := 'x' uint            (1-based, at most n)
//! ```
//!
//! Whitespace is insignificant. Error positions are 0-based byte offsets.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Monomial, PolyError, Polynomial, Rational};

/// Parses `text` as a polynomial in `dim` coordinates.
pub fn parse(text: &str, dim: usize) -> Result<Polynomial, PolyError> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        dim,
    };
    let p = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.syntax("unexpected trailing input"));
    }
    Ok(p)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    dim: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn syntax(&self, message: &str) -> PolyError {
        PolyError::Syntax {
            pos: self.pos,
            message: message.to_string(),
        }
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'x') => self.var(),
            Some(c) if c.is_ascii_digit() => self.rational(),
            Some(_) => Err(self.syntax("expected a number, variable, '(' or '-'")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn digits(&mut self) -> Option<&str> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            None
        } else {
            std::str::from_utf8(&self.src[start..self.pos]).ok()
        }
    }

    fn uint(&mut self, what: &str) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        match self.digits() {
            Some(d) => Ok(d.parse::<BigInt>().expect("ascii digits")),
            None => {
                self.pos = start;
                Err(self.syntax(&format!("expected {what}")))
            }
        }
    }

    fn rational(&mut self) -> Result<Polynomial, PolyError> {
        let num = self.uint("integer")?;
        let mut value = Rational::from_integer(num);
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let den = self.uint("denominator")?;
            if den.is_zero() {
                return Err(PolyError::DivisionByZero { pos: at });
            }
            value /= Rational::from_integer(den);
        }
        Ok(Polynomial::constant(self.dim, value))
    }

    fn var(&mut self) -> Result<Polynomial, PolyError> {
        let at = self.pos;
        self.pos += 1; // 'x'
        let start = self.pos;
        let index: usize = match self.digits() {
            Some(d) => d.parse().unwrap_or(usize::MAX),
            None => return Err(self.syntax("expected variable index after 'x'")),
        };
        if index == 0 {
            self.pos = start;
            return Err(self.syntax("variable indices start at 1"));
        }
        if index > self.dim {
            return Err(PolyError::VariableOutOfRange {
                index,
                dim: self.dim,
                pos: at,
            });
        }
        let mut exponent = 1u32;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            if self.peek() == Some(b'-') {
                return Err(PolyError::NegativeExponent { pos: self.pos });
            }
            let e = self.uint("exponent")?;
            exponent = u32::try_from(e).map_err(|_| self.syntax("exponent too large"))?;
        }
        let mut exps = vec![0u32; self.dim];
        exps[index - 1] = exponent;
        Ok(Polynomial::monomial(
            self.dim,
            Monomial::new(exps),
            Rational::from_integer(1.into()),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational;

    #[test]
    fn parses_examples() {
        let x3 = parse("x3", 4).unwrap();
        assert_eq!(x3, Polynomial::var(4, 3).unwrap());

        let p = parse("x1*x4 + 2*x2^2", 4).unwrap();
        assert_eq!(
            p.coefficient(&Monomial::new(vec![1, 0, 0, 1])),
            rational(1, 1)
        );
        assert_eq!(
            p.coefficient(&Monomial::new(vec![0, 2, 0, 0])),
            rational(2, 1)
        );
        assert_eq!(p.num_terms(), 2);

        let q = parse(" -1/2*x2^2 + 3 ", 4).unwrap();
        assert_eq!(q.coefficient(&Monomial::one(4)), rational(3, 1));
        assert_eq!(
            q.coefficient(&Monomial::new(vec![0, 2, 0, 0])),
            rational(-1, 2)
        );
    }

    #[test]
    fn parens_and_unary_minus() {
        let p = parse("-(x1 - x2)*x3", 4).unwrap();
        assert_eq!(p, parse("x2*x3 - x1*x3", 4).unwrap());
        assert_eq!(parse("--x1", 4).unwrap(), parse("x1", 4).unwrap());
        assert_eq!(parse("4/6", 2).unwrap(), parse("2/3", 2).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse("x5", 4),
            Err(PolyError::VariableOutOfRange {
                index: 5,
                dim: 4,
                pos: 0
            })
        ));
        assert!(matches!(
            parse("x1^-2", 4),
            Err(PolyError::NegativeExponent { pos: 3 })
        ));
        assert!(matches!(
            parse("1/0", 4),
            Err(PolyError::DivisionByZero { pos: 2 })
        ));
        assert!(matches!(parse("x0", 4), Err(PolyError::Syntax { .. })));
        assert!(matches!(
            parse("x1 +", 4),
            Err(PolyError::Syntax { pos: 4, .. })
        ));
        assert!(matches!(parse("(x1", 4), Err(PolyError::Syntax { .. })));
        assert!(matches!(
            parse("x1 x2", 4),
            Err(PolyError::Syntax { pos: 3, .. })
        ));
        assert!(matches!(parse("", 4), Err(PolyError::Syntax { .. })));
        assert!(matches!(
            parse("y1", 4),
            Err(PolyError::Syntax { pos: 0, .. })
        ));
    }
}
