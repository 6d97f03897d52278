//! Sparse multivariate Laurent polynomials with integer coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::int::Int;
use crate::monomial::Monomial;
use crate::symbol::{Symbol, MAX_SYMBOLS};

/// Terms are kept sorted by decreasing monomial with no zero coefficients,
/// so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Monomial, Int)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Int::ONE)
    }

    pub fn constant(c: Int) -> Poly {
        Poly::term(Monomial::ONE, c)
    }

    pub fn int(c: i64) -> Poly {
        Poly::constant(Int::from(c))
    }

    pub fn var(s: Symbol) -> Poly {
        Poly::term(Monomial::var(s), Int::ONE)
    }

    pub fn var_pow(s: Symbol, e: i16) -> Poly {
        Poly::term(Monomial::var_pow(s, e), Int::ONE)
    }

    pub fn term(m: Monomial, c: Int) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(m, c)],
            }
        }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Int)>>(it: I) -> Poly {
        let mut v: Vec<(Monomial, Int)> = it.into_iter().collect();
        v.sort_by(|a, b| b.0.cmp(&a.0));
        Poly {
            terms: merge_sorted(v),
        }
    }

    pub fn terms(&self) -> &[(Monomial, Int)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Int)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Constant term value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Int> {
        match self.terms.len() {
            0 => Some(Int::ZERO),
            1 if self.terms[0].0.is_one() => Some(self.terms[0].1.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, Int)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> Int {
        self.terms
            .first()
            .map(|t| t.1.clone())
            .unwrap_or(Int::ZERO)
    }

    pub fn coeff(&self, m: &Monomial) -> Int {
        self.terms
            .binary_search_by(|t| m.cmp(&t.0))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or(Int::ZERO)
    }

    /// Positive gcd of the integer coefficients (zero for the zero polynomial).
    pub fn content(&self) -> Int {
        let mut g = Int::ZERO;
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Componentwise minimum exponent over all terms.
    pub fn min_monomial(&self) -> Monomial {
        let mut it = self.terms.iter();
        match it.next() {
            None => Monomial::ONE,
            Some(first) => it.fold(first.0, |acc, t| acc.meet(&t.0)),
        }
    }

    pub fn max_monomial(&self) -> Monomial {
        let mut it = self.terms.iter();
        match it.next() {
            None => Monomial::ONE,
            Some(first) => it.fold(first.0, |acc, t| acc.join(&t.0)),
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.iter().all(|t| t.0.is_polynomial())
    }

    /// Multiplies by a monomial. Order is preserved because the monomial order is a total
    /// order compatible with multiplication.
    pub fn shift(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Int) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn div_int_exact(&self, c: &Int) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (*k, v.div_exact(c)))
                .collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Int) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Bitmask of symbols that occur with a nonzero exponent.
    pub fn support_mask(&self) -> u32 {
        let mut mask = 0u32;
        for (m, _) in &self.terms {
            for (i, &e) in m.exponents().iter().enumerate() {
                if e != 0 {
                    mask |= 1 << i;
                }
            }
        }
        mask
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.support_mask() & (1 << s.index()) != 0
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mask = self.support_mask();
        (0..MAX_SYMBOLS)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| Symbol(i as u8))
            .collect()
    }

    pub fn degree_in(&self, s: Symbol) -> Option<i16> {
        self.terms.iter().map(|t| t.0.exp(s)).max()
    }

    pub fn min_degree_in(&self, s: Symbol) -> Option<i16> {
        self.terms.iter().map(|t| t.0.exp(s)).min()
    }

    /// Collects coefficients by the exponent of `s`; the coefficient polynomials are free of `s`.
    pub fn collect(&self, s: Symbol) -> BTreeMap<i16, Poly> {
        let mut groups: BTreeMap<i16, Vec<(Monomial, Int)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            groups
                .entry(m.exp(s))
                .or_default()
                .push((m.without(s), c.clone()));
        }
        groups
            .into_iter()
            .map(|(e, ts)| {
                // Removing one exponent can reorder terms.
                (e, Poly::from_terms(ts))
            })
            .collect()
    }

    /// Inverse of [`Poly::collect`].
    pub fn from_collected(s: Symbol, parts: &BTreeMap<i16, Poly>) -> Poly {
        let mut all = Vec::new();
        for (e, p) in parts {
            let m = Monomial::var_pow(s, *e);
            for (k, c) in p.terms() {
                all.push((k.mul(&m), c.clone()));
            }
        }
        Poly::from_terms(all)
    }

    /// Exact quotient in the Laurent ring, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if d.is_monomial() {
            let (m, c) = &d.terms[0];
            if !self.terms.iter().all(|(_, v)| c.divides(v)) {
                return None;
            }
            let inv = m.inv();
            return Some(Poly {
                terms: self
                    .terms
                    .iter()
                    .map(|(k, v)| (k.mul(&inv), v.div_exact(c)))
                    .collect(),
            });
        }
        // Move both into the ordinary polynomial ring with the divisor free of monomial factors.
        let dm = d.min_monomial();
        let dn = d.shift(&dm.inv());
        let am = self.min_monomial();
        let an = self.shift(&am.inv());
        let q = div_exact_poly(&an, &dn)?;
        Some(q.shift(&am.div(&dm)))
    }

    pub fn map_coeffs<F: Fn(&Int) -> Int>(&self, f: F) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }
}

/// Division in `Z[x]` for polynomials with non-negative exponents.
fn div_exact_poly(a: &Poly, d: &Poly) -> Option<Poly> {
    let (lm, lc) = d.terms[0].clone();
    let mut rem = a.clone();
    let mut quot: Vec<(Monomial, Int)> = Vec::new();
    while let Some((rm, rc)) = rem.terms.first().cloned() {
        if !rm.dominates(&lm) || !lc.divides(&rc) {
            return None;
        }
        let qm = rm.div(&lm);
        let qc = rc.div_exact(&lc);
        rem = &rem - &d.mul_term(&qm, &qc);
        quot.push((qm, qc));
    }
    Some(Poly::from_terms(quot))
}

fn merge_sorted(v: Vec<(Monomial, Int)>) -> Vec<(Monomial, Int)> {
    let mut out: Vec<(Monomial, Int)> = Vec::with_capacity(v.len());
    for (m, c) in v {
        if let Some(last) = out.last_mut() {
            if last.0 == m {
                last.1 = &last.1 + &c;
                if last.1.is_zero() {
                    out.pop();
                }
                continue;
            }
        }
        if !c.is_zero() {
            out.push((m, c));
        }
    }
    out
}

fn add_sorted(a: &[(Monomial, Int)], b: &[(Monomial, Int)], negate_b: bool) -> Vec<(Monomial, Int)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b {
                    &a[i].1 - &b[j].1
                } else {
                    &a[i].1 + &b[j].1
                };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for t in &b[j..] {
        let c = if negate_b { -&t.1 } else { t.1.clone() };
        out.push((t.0, c));
    }
    out
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        Poly {
            terms: add_sorted(&self.terms, &rhs.terms, false),
        }
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        Poly {
            terms: add_sorted(&self.terms, &rhs.terms, true),
        }
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return rhs.mul_term(m, c);
        }
        if rhs.terms.len() == 1 {
            let (m, c) = &rhs.terms[0];
            return self.mul_term(m, c);
        }
        let mut v = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                v.push((m1.mul(m2), c1 * c2));
            }
        }
        Poly::from_terms(v)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    /// Canonical text: terms by decreasing monomial, `c*m` with unit coefficients elided.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
