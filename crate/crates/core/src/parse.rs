//! Reader for polynomials written as sums of rational multiples of monomials.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! poly    := sign? term (sign term)*
//! term    := coeff ('*'? factor ('*'? factor)*)? | factor ('*'? factor)*
//! coeff   := int ('/' int)?
//! factor  := name ('^' int)?
//! ```
//!
//! A name is one letter followed by digits. Parentheses are not supported.

use num_bigint::BigInt;

use crate::poly::{Mono, Poly, MAX_VARS};
use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("unexpected '{found}' at position {pos}")]
    Unexpected { pos: usize, found: String },
    #[error("unknown variable '{name}' at position {pos}")]
    UnknownVariable { pos: usize, name: String },
    #[error("zero denominator at position {pos}")]
    ZeroDenominator { pos: usize },
    #[error("exponent too large at position {pos}")]
    Exponent { pos: usize },
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.s[start..self.pos]).ok()?.parse().ok()
    }

    fn name(&mut self) -> Option<(usize, String)> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.s.len() && self.s[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            Some((start, String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()))
        } else {
            None
        }
    }

    fn unexpected(&mut self) -> ParseError {
        self.skip_ws();
        let found = match self.s.get(self.pos) {
            Some(&c) => (c as char).to_string(),
            None => "end of input".to_string(),
        };
        ParseError::Unexpected {
            pos: self.pos,
            found,
        }
    }
}

/// A term as a coefficient and one exponent per variable.
pub type Term = (Rat, Vec<u32>);

/// Parses a sum of terms over any number of variables; like terms are not merged.
pub fn parse_terms(text: &str, vars: &[&str]) -> Result<Vec<Term>, ParseError> {
    let mut lx = Lexer {
        s: text.as_bytes(),
        pos: 0,
    };
    if lx.peek().is_none() {
        return Err(ParseError::Empty);
    }
    let mut out = Vec::new();
    let mut first = true;
    loop {
        let mut sign = 1i64;
        if lx.eat(b'+') {
        } else if lx.eat(b'-') {
            sign = -1;
        } else if !first {
            return Err(lx.unexpected());
        }
        first = false;

        let mut coeff = Rat::from_int(sign);
        let mut saw_coeff = false;
        if let Some(num) = lx.int() {
            saw_coeff = true;
            let mut c = Rat::from_bigint(num);
            if lx.eat(b'/') {
                let pos = lx.pos;
                let den = lx.int().ok_or_else(|| lx.unexpected())?;
                if den == BigInt::from(0) {
                    return Err(ParseError::ZeroDenominator { pos });
                }
                c = c / Rat::from_bigint(den);
            }
            coeff = coeff * c;
        }
        let mut exps = vec![0u32; vars.len()];
        let mut nfactors = 0;
        loop {
            let star = lx.eat(b'*');
            let Some((pos, name)) = lx.name() else {
                if star {
                    return Err(lx.unexpected());
                }
                break;
            };
            let idx = vars
                .iter()
                .position(|v| *v == name)
                .ok_or(ParseError::UnknownVariable { pos, name })?;
            let mut e = 1u32;
            if lx.eat(b'^') {
                let epos = lx.pos;
                let k = lx.int().ok_or_else(|| lx.unexpected())?;
                e = u32::try_from(&k)
                    .ok()
                    .filter(|&k| k <= 1000)
                    .ok_or(ParseError::Exponent { pos: epos })?;
            }
            exps[idx] += e;
            if exps[idx] > u16::MAX as u32 {
                return Err(ParseError::Exponent { pos });
            }
            nfactors += 1;
        }
        if !saw_coeff && nfactors == 0 {
            return Err(lx.unexpected());
        }
        out.push((coeff, exps));
        if lx.peek().is_none() {
            break;
        }
    }
    Ok(out)
}

/// Parses a polynomial in the given variables (at most `MAX_VARS` of them).
pub fn parse_poly(text: &str, vars: &[&str]) -> Result<Poly<Rat>, ParseError> {
    assert!(vars.len() <= MAX_VARS, "too many variables");
    let mut out = Poly::zero(vars.len());
    for (c, exps) in parse_terms(text, vars)? {
        let mut m = Mono::one();
        for (i, e) in exps.iter().enumerate() {
            m.0[i] = *e as u16;
        }
        out.add_term(m, c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::XNAMES;

    const X: [&str; 3] = ["x0", "x1", "x2"];

    #[test]
    fn nodal_example() {
        let f = parse_poly("x0^3 + x1^3 + x0*x1*x2 + x2^2 - x0 + 2*x1", &X).unwrap();
        assert_eq!(f.total_degree(), Some(3));
        assert_eq!(f.len(), 6);
    }

    #[test]
    fn juxtaposition_and_fractions() {
        let f = parse_poly("-3/4 x0x1^2 + 1/2*x2 - 7", &X).unwrap();
        assert_eq!(f.render(&XNAMES), "-3/4*x0*x1^2 + 1/2*x2 - 7");
    }

    #[test]
    fn collects_like_terms() {
        let f = parse_poly("x0 + x0 - 2x0", &X).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn errors_are_reported() {
        assert_eq!(parse_poly("   ", &X), Err(ParseError::Empty));
        assert!(matches!(
            parse_poly("x0 + y1", &X),
            Err(ParseError::UnknownVariable { .. })
        ));
        assert!(matches!(parse_poly("x0 +", &X), Err(ParseError::Unexpected { .. })));
        assert!(matches!(parse_poly("(x0)", &X), Err(ParseError::Unexpected { .. })));
        assert!(matches!(
            parse_poly("1/0 x0", &X),
            Err(ParseError::ZeroDenominator { .. })
        ));
    }
}
