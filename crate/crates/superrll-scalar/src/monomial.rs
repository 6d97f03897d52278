//! Laurent monomials: one signed exponent per registered symbol.

use std::cmp::Ordering;
use std::fmt;

use crate::error::ScalarError;
use crate::symbol::{Symbol, MAX_SYMBOLS};

#[derive(Copy, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub(crate) [i16; MAX_SYMBOLS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; MAX_SYMBOLS]);

    pub fn var(s: Symbol) -> Monomial {
        Monomial::var_pow(s, 1)
    }

    pub fn var_pow(s: Symbol, e: i16) -> Monomial {
        let mut m = Monomial::ONE;
        m.0[s.index()] = e;
        m
    }

    pub fn exp(&self, s: Symbol) -> i16 {
        self.0[s.index()]
    }

    pub fn exponents(&self) -> &[i16; MAX_SYMBOLS] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0 == [0; MAX_SYMBOLS]
    }

    pub fn degree(&self) -> i32 {
        self.0.iter().map(|&e| e as i32).sum()
    }

    pub fn try_mul(&self, other: &Monomial) -> Result<Monomial, ScalarError> {
        let mut out = [0i16; MAX_SYMBOLS];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[i]
                .checked_add(other.0[i])
                .ok_or(ScalarError::ExponentOverflow)?;
        }
        Ok(Monomial(out))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.try_mul(other).expect("monomial exponent overflow")
    }

    pub fn inv(&self) -> Monomial {
        let mut out = self.0;
        for e in out.iter_mut() {
            *e = -*e;
        }
        Monomial(out)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inv())
    }

    pub fn pow(&self, k: i32) -> Monomial {
        let mut out = self.0;
        for e in out.iter_mut() {
            let v = *e as i32 * k;
            *e = i16::try_from(v).expect("monomial exponent overflow");
        }
        Monomial(out)
    }

    /// Componentwise minimum (the gcd in the Laurent sense).
    pub fn meet(&self, other: &Monomial) -> Monomial {
        let mut out = self.0;
        for (i, e) in out.iter_mut().enumerate() {
            *e = (*e).min(other.0[i]);
        }
        Monomial(out)
    }

    pub fn join(&self, other: &Monomial) -> Monomial {
        let mut out = self.0;
        for (i, e) in out.iter_mut().enumerate() {
            *e = (*e).max(other.0[i]);
        }
        Monomial(out)
    }

    /// True when every exponent is at least the corresponding one of `other`.
    pub fn dominates(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a >= b)
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    pub fn without(&self, s: Symbol) -> Monomial {
        let mut out = *self;
        out.0[s.index()] = 0;
        out
    }

    pub fn with_exp(&self, s: Symbol, e: i16) -> Monomial {
        let mut out = *self;
        out.0[s.index()] = e;
        out
    }

    pub fn symbols(&self) -> impl Iterator<Item = (Symbol, i16)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (Symbol(i as u8), e))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then exponents compared in registry order.
    fn cmp(&self, other: &Monomial) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (s, e) in self.symbols() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", s.name())?;
            } else {
                write!(f, "{}^{}", s.name(), e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_order() {
        let p = Monomial::var(Symbol::P);
        let q = Monomial::var(Symbol::Q);
        let pq = p.mul(&q);
        let p2 = p.pow(2);
        assert!(pq > p);
        assert!(p > q);
        assert!(p2 > pq);
        assert!(Monomial::ONE > p.inv());
    }

    #[test]
    fn display() {
        let m = Monomial::var_pow(Symbol::P, 2).mul(&Monomial::var_pow(Symbol::Z, -1));
        assert_eq!(m.to_string(), "p^2*z^-1");
        assert_eq!(Monomial::ONE.to_string(), "1");
    }
}
