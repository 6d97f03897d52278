//! Directed Laurent expansions of rational functions in one ratio symbol.

use std::collections::BTreeMap;

use crate::error::ScalarError;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::symbol::Symbol;

/// Largest absolute exponent a window may reach.
pub const MAX_WINDOW: i64 = 4096;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    TowardZero,
    TowardInfinity,
}

impl Direction {
    pub fn opposite(self) -> Direction {
        match self {
            Direction::TowardZero => Direction::TowardInfinity,
            Direction::TowardInfinity => Direction::TowardZero,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::TowardZero => "toward-zero",
            Direction::TowardInfinity => "toward-infinity",
        }
    }
}

/// Lazily computed expansion coefficients of `num/den` in `ratio`.
///
/// Toward zero the series is `sum_{k >= base} c_k u^k`; toward infinity it is
/// `sum_{k <= base} c_k u^k`. Coefficients are rational functions in the other symbols.
#[derive(Clone, Debug)]
pub struct Expander {
    direction: Direction,
    base: i64,
    num: Vec<RatFunc>,
    den: Vec<RatFunc>,
    lead_inv: RatFunc,
    cache: Vec<RatFunc>,
}

impl Expander {
    pub fn new(f: &RatFunc, ratio: Symbol, direction: Direction) -> Result<Expander, ScalarError> {
        Expander::from_parts(f.numer(), f.denom(), ratio, direction)
    }

    /// Expands `num/den` without requiring a reduced fraction.
    pub fn from_parts(
        num: &Poly,
        den: &Poly,
        ratio: Symbol,
        direction: Direction,
    ) -> Result<Expander, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let n = num.collect(ratio);
        let d = den.collect(ratio);
        let ordered = |m: &BTreeMap<i16, Poly>| -> (i64, Vec<RatFunc>) {
            if m.is_empty() {
                return (0, Vec::new());
            }
            let lo = *m.keys().next().unwrap() as i64;
            let hi = *m.keys().next_back().unwrap() as i64;
            let mut v = vec![RatFunc::zero(); (hi - lo + 1) as usize];
            for (e, c) in m {
                v[(*e as i64 - lo) as usize] = RatFunc::from_poly(c.clone());
            }
            match direction {
                Direction::TowardZero => (lo, v),
                Direction::TowardInfinity => {
                    v.reverse();
                    (hi, v)
                }
            }
        };
        let (n0, nv) = ordered(&n);
        let (d0, dv) = ordered(&d);
        let lead_inv = dv[0]
            .try_inv()
            .map_err(|_| ScalarError::Domain("vanishing extreme coefficient".into()))?;
        Ok(Expander {
            direction,
            base: n0 - d0,
            num: nv,
            den: dv,
            lead_inv,
            cache: Vec::new(),
        })
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// First exponent with a possibly nonzero coefficient (lowest toward zero, highest toward infinity).
    pub fn base(&self) -> i64 {
        self.base
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    fn step(&self, k: i64) -> Option<usize> {
        if self.num.is_empty() {
            return None;
        }
        let t = match self.direction {
            Direction::TowardZero => k - self.base,
            Direction::TowardInfinity => self.base - k,
        };
        if t < 0 {
            None
        } else {
            Some(t as usize)
        }
    }

    /// Coefficient of `ratio^k`.
    pub fn coeff(&mut self, k: i64) -> Result<RatFunc, ScalarError> {
        if k.abs() > MAX_WINDOW {
            return Err(ScalarError::WindowTooLarge { lo: k, hi: k });
        }
        let Some(t) = self.step(k) else {
            return Ok(RatFunc::zero());
        };
        while self.cache.len() <= t {
            let i = self.cache.len();
            let mut v = self.num.get(i).cloned().unwrap_or_default();
            for j in 1..self.den.len().min(i + 1) {
                if self.den[j].is_zero() || self.cache[i - j].is_zero() {
                    continue;
                }
                v = &v - &(&self.den[j] * &self.cache[i - j]);
            }
            self.cache.push(&v * &self.lead_inv);
        }
        Ok(self.cache[t].clone())
    }

    /// Range of exponents that can carry nonzero coefficients.
    pub fn support(&self) -> (Option<i64>, Option<i64>) {
        if self.num.is_empty() {
            return (Some(0), Some(-1));
        }
        match self.direction {
            Direction::TowardZero => (Some(self.base), None),
            Direction::TowardInfinity => (None, Some(self.base)),
        }
    }
}

/// A truncated bilateral expansion of `base` in `ratio` on the window `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedSeries {
    pub base: RatFunc,
    pub ratio: Symbol,
    pub direction: Option<Direction>,
    pub lo: i64,
    pub hi: i64,
    pub coeffs: BTreeMap<i64, RatFunc>,
}

impl DirectedSeries {
    pub fn coeff(&self, k: i64) -> RatFunc {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Re-multiplies by the denominator and compares with the numerator on exponents whose
    /// every contribution lies inside the window.
    pub fn check_window(&self) -> bool {
        let Some(direction) = self.direction else {
            return true;
        };
        let n = self.base.numer().collect(self.ratio);
        let d = self.base.denom().collect(self.ratio);
        let dlo = *d.keys().next().unwrap() as i64;
        let dhi = *d.keys().next_back().unwrap() as i64;
        // Outside the window the series is known to vanish on the side it starts from.
        let ex = Expander::new(&self.base, self.ratio, direction).ok();
        let known_zero = |k: i64| match (&ex, direction) {
            (Some(e), Direction::TowardZero) => k < e.base(),
            (Some(e), Direction::TowardInfinity) => k > e.base(),
            _ => false,
        };
        for e in (self.lo + dlo)..=(self.hi + dhi) {
            let mut acc = RatFunc::zero();
            let mut interior = true;
            for (j, dj) in &d {
                let k = e - *j as i64;
                if k < self.lo || k > self.hi {
                    if !known_zero(k) {
                        interior = false;
                        break;
                    }
                    continue;
                }
                acc = &acc + &(&self.coeff(k) * &RatFunc::from_poly(dj.clone()));
            }
            if !interior {
                continue;
            }
            let target = i16::try_from(e)
                .ok()
                .and_then(|e| n.get(&e))
                .cloned()
                .map(RatFunc::from_poly)
                .unwrap_or_default();
            if acc != target {
                return false;
            }
        }
        true
    }
}

fn check_window(lo: i64, hi: i64) -> Result<(), ScalarError> {
    if lo > hi {
        return Err(ScalarError::Domain(format!("empty window [{lo}, {hi}]")));
    }
    if lo < -MAX_WINDOW || hi > MAX_WINDOW {
        return Err(ScalarError::WindowTooLarge { lo, hi });
    }
    Ok(())
}

/// Laurent expansion of `f` in `ratio` in the given direction, restricted to `[lo, hi]`.
pub fn expand(
    f: &RatFunc,
    ratio: Symbol,
    direction: Direction,
    lo: i64,
    hi: i64,
) -> Result<DirectedSeries, ScalarError> {
    check_window(lo, hi)?;
    let mut ex = Expander::new(f, ratio, direction)?;
    let mut coeffs = BTreeMap::new();
    for k in lo..=hi {
        let c = ex.coeff(k)?;
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
    }
    Ok(DirectedSeries {
        base: f.clone(),
        ratio,
        direction: Some(direction),
        lo,
        hi,
        coeffs,
    })
}

/// Toward-zero expansion minus toward-infinity expansion of `f` on `[lo, hi]`.
pub fn delta_difference(
    f: &RatFunc,
    ratio: Symbol,
    lo: i64,
    hi: i64,
) -> Result<DirectedSeries, ScalarError> {
    let a = expand(f, ratio, Direction::TowardZero, lo, hi)?;
    let b = expand(f, ratio, Direction::TowardInfinity, lo, hi)?;
    let mut coeffs = BTreeMap::new();
    for k in lo..=hi {
        let c = &a.coeff(k) - &b.coeff(k);
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
    }
    Ok(DirectedSeries {
        base: f.clone(),
        ratio,
        direction: None,
        lo,
        hi,
        coeffs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kernel() -> RatFunc {
        let z = RatFunc::var(Symbol::Z);
        let d = &(&z * &RatFunc::var(Symbol::Q)) - &RatFunc::var_pow(Symbol::P, -1);
        d.inv()
    }

    #[test]
    fn toward_zero() {
        let s = expand(&kernel(), Symbol::Z, Direction::TowardZero, 0, 2).unwrap();
        let p = RatFunc::var(Symbol::P);
        let q = RatFunc::var(Symbol::Q);
        assert_eq!(s.coeff(0), -&p);
        assert_eq!(s.coeff(1), -&(&p.pow(2) * &q));
        assert_eq!(s.coeff(2), -&(&p.pow(3) * &q.pow(2)));
        assert!(s.check_window());
    }

    #[test]
    fn toward_infinity() {
        let s = expand(&kernel(), Symbol::Z, Direction::TowardInfinity, -2, -1).unwrap();
        assert_eq!(s.coeff(-1), RatFunc::var_pow(Symbol::Q, -1));
        assert_eq!(
            s.coeff(-2),
            &RatFunc::var_pow(Symbol::P, -1) * &RatFunc::var_pow(Symbol::Q, -2)
        );
        assert_eq!(s.coeffs.len(), 2);
    }

    #[test]
    fn polynomial_is_its_own_expansion() {
        let z = RatFunc::var(Symbol::Z);
        for d in [Direction::TowardZero, Direction::TowardInfinity] {
            let s = expand(&z, Symbol::Z, d, -3, 3).unwrap();
            assert_eq!(s.coeffs.len(), 1);
            assert!(s.coeff(1).is_one());
        }
    }

    #[test]
    fn delta_of_geometric() {
        let u = RatFunc::var(Symbol::U);
        let f = (&RatFunc::one() - &u).inv();
        let d = delta_difference(&f, Symbol::U, -2, 2).unwrap();
        for k in -2..=2 {
            assert!(d.coeff(k).is_one());
        }
        let g = &u * &f;
        let d = delta_difference(&g, Symbol::U, -1, 1).unwrap();
        for k in -1..=1 {
            assert!(d.coeff(k).is_one());
        }
        let d = delta_difference(&RatFunc::one(), Symbol::U, -3, 3).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn window_limits() {
        let f = kernel();
        assert!(matches!(
            expand(&f, Symbol::Z, Direction::TowardZero, 0, MAX_WINDOW + 1),
            Err(ScalarError::WindowTooLarge { .. })
        ));
        assert!(matches!(
            expand(&f, Symbol::Z, Direction::TowardZero, 2, 1),
            Err(ScalarError::Domain(_))
        ));
    }
}
