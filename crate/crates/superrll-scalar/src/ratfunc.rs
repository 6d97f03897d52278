//! Rational functions in canonical form.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::ScalarError;
use crate::gcd::gcd;
use crate::int::Int;
use crate::monomial::Monomial;
use crate::poly::Poly;
use crate::symbol::Symbol;

/// `num / den` with `den` an ordinary polynomial carrying no monomial factor, with positive
/// leading coefficient, and coprime to `num`. Monomial units live in the numerator, so the
/// representation is unique and derived equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl Default for RatFunc {
    fn default() -> RatFunc {
        RatFunc::zero()
    }
}

impl RatFunc {
    pub fn zero() -> RatFunc {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> RatFunc {
        RatFunc::from_poly(Poly::one())
    }

    pub fn int(c: i64) -> RatFunc {
        RatFunc::from_poly(Poly::int(c))
    }

    pub fn var(s: Symbol) -> RatFunc {
        RatFunc::from_poly(Poly::var(s))
    }

    pub fn var_pow(s: Symbol, e: i16) -> RatFunc {
        RatFunc::from_poly(Poly::var_pow(s, e))
    }

    pub fn monomial(m: Monomial) -> RatFunc {
        RatFunc::from_poly(Poly::term(m, Int::ONE))
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn from_int(c: Int) -> RatFunc {
        RatFunc::from_poly(Poly::constant(c))
    }

    /// The rational number `n/d`.
    pub fn ratio(n: i64, d: i64) -> Result<RatFunc, ScalarError> {
        RatFunc::new(Poly::int(n), Poly::int(d))
    }

    pub fn new(num: Poly, den: Poly) -> Result<RatFunc, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(RatFunc::normalize(num, den))
    }

    /// Canonicalizes an arbitrary fraction with nonzero denominator.
    fn normalize(num: Poly, den: Poly) -> RatFunc {
        if num.is_zero() {
            return RatFunc::zero();
        }
        let m = den.min_monomial();
        let (mut num, mut den) = if m.is_one() {
            (num, den)
        } else {
            let mi = m.inv();
            (num.shift(&mi), den.shift(&mi))
        };
        if !den.is_one() {
            let g = gcd(&num, &den);
            if !g.is_one() {
                num = num.div_exact(&g).expect("gcd divides numerator");
                den = den.div_exact(&g).expect("gcd divides denominator");
            }
        }
        RatFunc::fix_sign(num, den)
    }

    fn fix_sign(num: Poly, den: Poly) -> RatFunc {
        if den.leading_coeff().is_negative() {
            RatFunc {
                num: -num,
                den: -den,
            }
        } else {
            RatFunc { num, den }
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn into_parts(self) -> (Poly, Poly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    /// The value as a rational number `(n, d)` with `d > 0`, if constant.
    pub fn as_rational(&self) -> Option<(Int, Int)> {
        Some((self.num.as_constant()?, self.den.as_constant()?))
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.num.contains(s) || self.den.contains(s)
    }

    pub fn support_mask(&self) -> u32 {
        self.num.support_mask() | self.den.support_mask()
    }

    pub fn try_inv(&self) -> Result<RatFunc, ScalarError> {
        if self.num.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let m = self.num.min_monomial();
        let mi = m.inv();
        // Already coprime; only the unit placement and sign change.
        Ok(RatFunc::fix_sign(self.den.shift(&mi), self.num.shift(&mi)))
    }

    pub fn inv(&self) -> RatFunc {
        self.try_inv().expect("inverse of zero")
    }

    pub fn try_div(&self, other: &RatFunc) -> Result<RatFunc, ScalarError> {
        Ok(self * &other.try_inv()?)
    }

    pub fn pow(&self, e: i32) -> RatFunc {
        if e < 0 {
            return self.inv().pow(-e);
        }
        if self.den.is_one() && self.num.is_monomial() {
            let (m, c) = &self.num.terms()[0];
            return RatFunc::from_poly(Poly::term(m.pow(e), c.pow(e as u32)));
        }
        // Powers of coprime polynomials stay coprime.
        RatFunc::fix_sign(self.num.pow(e as u32), self.den.pow(e as u32))
    }

    pub fn scale_int(&self, c: &Int) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() {
            return RatFunc::from_poly(self.num.scale(c));
        }
        RatFunc::normalize(self.num.scale(c), self.den.clone())
    }

    pub fn mul_monomial(&self, m: &Monomial) -> RatFunc {
        RatFunc {
            num: self.num.shift(m),
            den: self.den.clone(),
        }
    }

    /// Substitutes `value` for the symbol `s`.
    pub fn subs(&self, s: Symbol, value: &RatFunc) -> Result<RatFunc, ScalarError> {
        if !self.contains(s) {
            return Ok(self.clone());
        }
        let n = subs_poly(&self.num, s, value)?;
        let d = subs_poly(&self.den, s, value)?;
        n.try_div(&d)
    }

    /// Simultaneous substitution of several symbols.
    pub fn subs_many(&self, values: &[(Symbol, RatFunc)]) -> Result<RatFunc, ScalarError> {
        let n = subs_poly_many(&self.num, values)?;
        let d = subs_poly_many(&self.den, values)?;
        n.try_div(&d)
    }

    /// Evaluates at rational points for every symbol present; errors if a denominator vanishes.
    pub fn eval(&self, values: &[(Symbol, RatFunc)]) -> Result<RatFunc, ScalarError> {
        self.subs_many(values)
    }

    /// Replaces `s` by `s * lambda` where `lambda` is a monomial.
    pub fn scale_symbol(&self, s: Symbol, lambda: &Monomial) -> RatFunc {
        let f = |p: &Poly| {
            Poly::from_terms(p.terms().iter().map(|(m, c)| {
                let e = m.exp(s) as i32;
                (m.mul(&lambda.pow(e)), c.clone())
            }))
        };
        RatFunc::normalize(f(&self.num), f(&self.den))
    }
}

fn subs_poly(p: &Poly, s: Symbol, value: &RatFunc) -> Result<RatFunc, ScalarError> {
    let parts = p.collect(s);
    let mut acc = RatFunc::zero();
    for (e, c) in parts {
        let v = if e < 0 {
            value.try_inv()?.pow(-(e as i32))
        } else {
            value.pow(e as i32)
        };
        acc = &acc + &(&RatFunc::from_poly(c) * &v);
    }
    Ok(acc)
}

fn subs_poly_many(p: &Poly, values: &[(Symbol, RatFunc)]) -> Result<RatFunc, ScalarError> {
    let mut acc = RatFunc::zero();
    for (m, c) in p.terms() {
        let mut rest = *m;
        let mut t = RatFunc::from_int(c.clone());
        for (s, v) in values {
            let e = m.exp(*s);
            if e == 0 {
                continue;
            }
            rest = rest.with_exp(*s, 0);
            let f = if e < 0 {
                v.try_inv()?.pow(-(e as i32))
            } else {
                v.pow(e as i32)
            };
            t = &t * &f;
        }
        acc = &acc + &t.mul_monomial(&rest);
    }
    Ok(acc)
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num + &rhs.num);
        }
        if self.den == rhs.den {
            return RatFunc::normalize(&self.num + &rhs.num, self.den.clone());
        }
        if self.den.is_one() {
            // den coprime to any polynomial combination num + a*den.
            return RatFunc {
                num: &(&self.num * &rhs.den) + &rhs.num,
                den: rhs.den.clone(),
            };
        }
        if rhs.den.is_one() {
            return RatFunc {
                num: &self.num + &(&rhs.num * &self.den),
                den: self.den.clone(),
            };
        }
        let g = gcd(&self.den, &rhs.den);
        if g.is_one() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            if num.is_zero() {
                return RatFunc::zero();
            }
            return RatFunc::fix_sign(num, &self.den * &rhs.den);
        }
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g).expect("gcd divides");
        let t = &(&self.num * &d2) + &(&rhs.num * &d1);
        if t.is_zero() {
            return RatFunc::zero();
        }
        let g2 = gcd(&t, &g);
        let (t, gr) = if g2.is_one() {
            (t, g)
        } else {
            (
                t.div_exact(&g2).expect("gcd divides"),
                g.div_exact(&g2).expect("gcd divides"),
            )
        };
        RatFunc::fix_sign(t, &(&d1 * &d2) * &gr)
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        let cross = |n: &Poly, d: &Poly| -> (Poly, Poly) {
            if d.is_one() {
                return (n.clone(), d.clone());
            }
            let g = gcd(n, d);
            if g.is_one() {
                (n.clone(), d.clone())
            } else {
                (
                    n.div_exact(&g).expect("gcd divides"),
                    d.div_exact(&g).expect("gcd divides"),
                )
            }
        };
        let (n1, d2) = cross(&self.num, &rhs.den);
        let (n2, d1) = cross(&rhs.num, &self.den);
        let num = &n1 * &n2;
        let den = &d1 * &d2;
        // Dividing by gcds can leave a monomial unit in a denominator factor.
        let m = den.min_monomial();
        if m.is_one() {
            RatFunc::fix_sign(num, den)
        } else {
            let mi = m.inv();
            RatFunc::fix_sign(num.shift(&mi), den.shift(&mi))
        }
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.try_div(rhs).expect("division by zero")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $f(self, rhs: RatFunc) -> RatFunc {
                (&self).$f(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> RatFunc {
        RatFunc::from_poly(p)
    }
}

impl From<i64> for RatFunc {
    fn from(c: i64) -> RatFunc {
        RatFunc::int(c)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: Symbol) -> RatFunc {
        RatFunc::var(x)
    }

    fn entry_12_12(z: &RatFunc) -> RatFunc {
        let p = s(Symbol::P);
        let q = s(Symbol::Q);
        let one = RatFunc::one();
        let num = &(&(z - &one) * &q) / &p;
        let den = &(z * &q) - &p.inv();
        &num / &den
    }

    #[test]
    fn self_division() {
        let z = s(Symbol::Z);
        let d = &(&z * &s(Symbol::Q)) - &s(Symbol::P).inv();
        assert!((&d / &d).is_one());
    }

    #[test]
    fn common_denominator() {
        let z = s(Symbol::Z);
        let one = RatFunc::one();
        let a = &z / &(&z - &one);
        let b = &one / &(&one - &z);
        assert!((&a + &b).is_one());
    }

    #[test]
    fn numeric_substitution() {
        let f = entry_12_12(&s(Symbol::Z));
        let v = f
            .eval(&[
                (Symbol::P, RatFunc::int(2)),
                (Symbol::Q, RatFunc::int(3)),
                (Symbol::Z, RatFunc::int(5)),
            ])
            .unwrap();
        assert_eq!(v, RatFunc::ratio(12, 29).unwrap());
    }

    #[test]
    fn canonical_sign_and_units() {
        let z = s(Symbol::Z);
        let one = RatFunc::one();
        let a = &one / &(&one - &z);
        assert!(a.denom().leading_coeff() > Int::ZERO);
        let b = &one / &(&z * &z);
        assert!(b.is_poly());
        assert_eq!(b, RatFunc::var_pow(Symbol::Z, -2));
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(
            RatFunc::one().try_div(&RatFunc::zero()),
            Err(ScalarError::DivisionByZero)
        );
    }
}
