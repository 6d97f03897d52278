//! Text grammar for rational functions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' '-'? digits)?
//! atom   := digits | symbol | '(' expr ')'
//! ```
//!
//! Printing is canonical: `RatFunc`'s `Display` output parses back to an equal value.

use crate::error::ScalarError;
use crate::int::Int;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::symbol::Symbol;

/// Largest exponent accepted on a symbol.
pub const MAX_SYMBOL_EXPONENT: i64 = 4096;
/// Largest exponent accepted on a parenthesized expression.
pub const MAX_GROUP_EXPONENT: i64 = 16;
const MAX_DEPTH: usize = 64;
const MAX_DIGITS: usize = 2000;
/// Bound on any exponent of an intermediate value.
const MAX_RESULT_EXPONENT: i32 = 8192;
/// Bound on `span * exponent` when raising a non-monomial group to a power.
const MAX_POWER_SPAN: i32 = 128;
const MAX_TERMS: usize = 20_000;

pub fn parse_ratfunc(s: &str) -> Result<RatFunc, ScalarError> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
        depth: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

pub fn parse_poly(s: &str) -> Result<Poly, ScalarError> {
    let f = parse_ratfunc(s)?;
    match f.as_poly() {
        Some(p) => Ok(p.clone()),
        None => Err(ScalarError::Parse {
            pos: 0,
            msg: "expected a Laurent polynomial".into(),
        }),
    }
}

impl std::str::FromStr for RatFunc {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<RatFunc, ScalarError> {
        parse_ratfunc(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    depth: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ScalarError {
        ScalarError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
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

    fn enter(&mut self) -> Result<(), ScalarError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.err("nesting too deep"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<RatFunc, ScalarError> {
        self.enter()?;
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                let t = self.term()?;
                acc = &acc + &t;
                self.bounded(&acc)?;
            } else if self.eat(b'-') {
                let t = self.term()?;
                acc = &acc - &t;
                self.bounded(&acc)?;
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc, ScalarError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                let t = self.unary()?;
                acc = &acc * &t;
                self.bounded(&acc)?;
            } else if self.eat(b'/') {
                let at = self.pos;
                let t = self.unary()?;
                acc = acc.try_div(&t).map_err(|_| ScalarError::Parse {
                    pos: at,
                    msg: "division by zero".into(),
                })?;
                self.bounded(&acc)?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFunc, ScalarError> {
        if self.eat(b'-') {
            self.enter()?;
            let v = self.unary()?;
            self.depth -= 1;
            return Ok(-v);
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc, ScalarError> {
        self.skip_ws();
        let start = self.pos;
        let (base, is_symbol) = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let neg = self.eat(b'-');
        let e = self.exponent()?;
        let limit = if is_symbol {
            MAX_SYMBOL_EXPONENT
        } else {
            MAX_GROUP_EXPONENT
        };
        if e > limit {
            return Err(self.err("exponent too large"));
        }
        let e = if neg { -(e as i32) } else { e as i32 };
        if e < 0 && base.is_zero() {
            return Err(ScalarError::Parse {
                pos: start,
                msg: "division by zero".into(),
            });
        }
        let (span, top) = extent(&base);
        if top.saturating_mul(e.abs()) > MAX_RESULT_EXPONENT {
            return Err(self.err("exponent too large"));
        }
        let single = base.numer().len() <= 1 && base.denom().len() <= 1;
        if !single && span.saturating_mul(e.abs()) > MAX_POWER_SPAN {
            return Err(self.err("power too large"));
        }
        let v = base.pow(e);
        self.bounded(&v)?;
        Ok(v)
    }

    fn bounded(&self, v: &RatFunc) -> Result<(), ScalarError> {
        let (_, top) = extent(v);
        if top > MAX_RESULT_EXPONENT || v.numer().len() + v.denom().len() > MAX_TERMS {
            return Err(self.err("value too large"));
        }
        Ok(())
    }

    fn exponent(&mut self) -> Result<i64, ScalarError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
            if self.pos - start > 6 {
                return Err(self.err("exponent too large"));
            }
        }
        if start == self.pos {
            return Err(self.err("expected exponent"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("bounded digit run"))
    }

    fn atom(&mut self) -> Result<(RatFunc, bool), ScalarError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok((v, false))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if self.pos - start > MAX_DIGITS {
                    return Err(self.err("integer literal too long"));
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
                let v: Int = s.parse().map_err(|_| self.err("bad integer"))?;
                Ok((RatFunc::from_int(v), false))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match Symbol::by_name(name) {
                    Some(s) => Ok((RatFunc::var(s), true)),
                    None => Err(ScalarError::Parse {
                        pos: start,
                        msg: format!("unknown symbol `{name}`"),
                    }),
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Largest exponent span and largest absolute exponent over numerator and denominator.
fn extent(v: &RatFunc) -> (i32, i32) {
    let mut span = 0;
    let mut top = 0;
    for p in [v.numer(), v.denom()] {
        if p.is_zero() {
            continue;
        }
        let lo = p.min_monomial();
        let hi = p.max_monomial();
        for (a, b) in lo.exponents().iter().zip(hi.exponents()) {
            span = span.max(*b as i32 - *a as i32);
            top = top.max((*a as i32).abs()).max((*b as i32).abs());
        }
    }
    (span, top)
}
