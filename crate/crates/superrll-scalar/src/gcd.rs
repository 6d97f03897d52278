//! Multivariate polynomial gcd over the integers.
//!
//! A heuristic evaluation/interpolation gcd handles the common case; when it gives up,
//! recursive primitive remainder sequences in one variable at a time take over.
//! Monomials are units in the Laurent ring, so inputs are first shifted to ordinary
//! polynomials free of monomial factors.

use num_bigint::BigInt;
use num_integer::Integer;

use crate::int::Int;
use crate::monomial::Monomial;
use crate::poly::Poly;
use crate::symbol::Symbol;

/// Gcd in the Laurent ring, normalized to have no monomial factor and a positive
/// leading coefficient. `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return normalize_unit(b);
    }
    if b.is_zero() {
        return normalize_unit(a);
    }
    let a = strip(a);
    let b = strip(b);
    normalize_sign(poly_gcd(&a, &b))
}

/// Removes the monomial factor and makes the leading coefficient positive.
pub fn normalize_unit(a: &Poly) -> Poly {
    if a.is_zero() {
        return Poly::zero();
    }
    normalize_sign(strip(a))
}

fn strip(a: &Poly) -> Poly {
    let m = a.min_monomial();
    if m.is_one() {
        a.clone()
    } else {
        a.shift(&m.inv())
    }
}

fn normalize_sign(a: Poly) -> Poly {
    if a.leading_coeff().is_negative() {
        -a
    } else {
        a
    }
}

/// Gcd of two nonzero polynomials with non-negative exponents.
fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    gcd_with(a, b, true)
}

fn gcd_with(a: &Poly, b: &Poly, heu: bool) -> Poly {
    if a == b {
        return a.clone();
    }
    if a.is_monomial() || b.is_monomial() {
        return monomial_gcd(a, b);
    }
    if divides(a, b) {
        return a.clone();
    }
    if divides(b, a) {
        return b.clone();
    }
    let ma = a.support_mask();
    let mb = b.support_mask();
    // A variable present in only one argument cannot occur in the gcd.
    let only = (ma ^ mb).trailing_zeros();
    if only < 32 {
        let v = Symbol(only as u8);
        return if ma & (1 << only) != 0 {
            gcd_with(&content_in(a, v), b, heu)
        } else {
            gcd_with(a, &content_in(b, v), heu)
        };
    }
    if heu {
        if let Some(g) = heuristic(a, b) {
            return g;
        }
    }
    let v = pick_variable(a, b, ma);
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let gc = gcd_with(&ca, &cb, heu);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let g = prs_gcd(pa, pb, v);
    &gc * &g
}

const HEU_ATTEMPTS: usize = 6;
const HEU_MAX_BITS: u64 = 40_000;

fn max_norm(a: &Poly) -> Int {
    a.terms().iter().map(|(_, c)| c.abs()).max().unwrap_or(Int::ZERO)
}

fn heuristic(a: &Poly, b: &Poly) -> Option<Poly> {
    let g = heu_rec(a, b)?;
    Some(normalize_sign(g))
}

/// Full gcd (integer content included) by evaluating one variable at a large integer,
/// recursing, and reading the result back in base `xi`.
fn heu_rec(a: &Poly, b: &Poly) -> Option<Poly> {
    if a.is_constant() || b.is_constant() {
        return Some(Poly::constant(a.content().gcd(&b.content())));
    }
    let mask = a.support_mask() | b.support_mask();
    let x = Symbol((31 - mask.leading_zeros()) as u8);
    let ca = a.content();
    let cb = b.content();
    let g0 = ca.gcd(&cb);
    let a = a.div_int_exact(&ca);
    let b = b.div_int_exact(&cb);
    let deg = a.degree_in(x).unwrap_or(0).min(b.degree_in(x).unwrap_or(0)).max(0) as u64;
    let na = max_norm(&a);
    let nb = max_norm(&b);
    let mut xi = &(&na.min(nb) * &Int::from(2)) + &Int::from(29);
    for _ in 0..HEU_ATTEMPTS {
        if xi.bits() * (deg + 1) > HEU_MAX_BITS {
            return None;
        }
        let ea = eval_at(&a, x, &xi);
        let eb = eval_at(&b, x, &xi);
        if let Some(gamma) = heu_rec(&ea, &eb) {
            if let Some(g) = interpolate(&gamma, x, &xi, deg) {
                if !g.is_zero() {
                    let g = normalize_sign(g.div_int_exact(&g.content()));
                    if divides(&g, &a) && divides(&g, &b) {
                        return Some(g.scale(&g0));
                    }
                }
            }
        }
        xi = Int::from_big(xi.to_big() * BigInt::from(73794) / BigInt::from(27011));
    }
    None
}

fn eval_at(a: &Poly, x: Symbol, xi: &Int) -> Poly {
    let mut powers: Vec<Int> = vec![Int::ONE];
    Poly::from_terms(a.terms().iter().map(|(m, c)| {
        let e = m.exp(x) as usize;
        while powers.len() <= e {
            let next = powers.last().expect("nonempty") * xi;
            powers.push(next);
        }
        (m.without(x), c * &powers[e])
    }))
}

/// Symmetric base-`xi` digits of each coefficient become the coefficients of `x^i`.
fn interpolate(gamma: &Poly, x: Symbol, xi: &Int, deg: u64) -> Option<Poly> {
    let xb = xi.to_big();
    let half = &xb / BigInt::from(2);
    let mut rest: Vec<(Monomial, BigInt)> = gamma.terms().iter().map(|(m, c)| (*m, c.to_big())).collect();
    let mut out = Vec::new();
    let mut i: i16 = 0;
    while rest.iter().any(|(_, c)| c != &BigInt::from(0)) {
        if i as u64 > deg {
            return None;
        }
        for (m, c) in rest.iter_mut() {
            let mut r = c.mod_floor(&xb);
            if r > half {
                r -= &xb;
            }
            if r != BigInt::from(0) {
                out.push((m.with_exp(x, i), Int::from_big(r.clone())));
            }
            *c = (&*c - &r) / &xb;
        }
        i += 1;
    }
    Some(Poly::from_terms(out))
}

/// Divisibility in the ordinary polynomial ring.
fn divides(d: &Poly, a: &Poly) -> bool {
    a.div_exact(d).is_some_and(|q| q.is_polynomial())
}

fn monomial_gcd(a: &Poly, b: &Poly) -> Poly {
    let mut m = a.min_monomial().meet(&b.min_monomial());
    for s in 0..16 {
        if m.exponents()[s] < 0 {
            m = m.with_exp(Symbol(s as u8), 0);
        }
    }
    Poly::term(m, a.content().gcd(&b.content()))
}

fn pick_variable(a: &Poly, b: &Poly, mask: u32) -> Symbol {
    let mut best: Option<(i32, Symbol)> = None;
    for i in 0..16 {
        if mask & (1 << i) == 0 {
            continue;
        }
        let s = Symbol(i as u8);
        let d = a.degree_in(s).unwrap_or(0) as i32 + b.degree_in(s).unwrap_or(0) as i32;
        if best.map_or(true, |(bd, _)| d < bd) {
            best = Some((d, s));
        }
    }
    best.expect("nonconstant polynomials").1
}

/// Gcd of the coefficients of `a` viewed as a polynomial in `v`.
fn content_in(a: &Poly, v: Symbol) -> Poly {
    let parts = a.collect(v);
    let mut it = parts.into_values();
    let mut g = it.next().expect("nonzero polynomial");
    for c in it {
        if g.is_constant() && g.leading_coeff().abs().is_one() {
            break;
        }
        g = normalize_sign(poly_gcd(&g, &c));
    }
    normalize_sign(g)
}

/// Dense coefficient vector in `v`, index = exponent.
fn dense(a: &Poly, v: Symbol) -> Vec<Poly> {
    let parts = a.collect(v);
    let top = *parts.keys().next_back().unwrap_or(&0) as usize;
    let mut out = vec![Poly::zero(); top + 1];
    for (e, c) in parts {
        out[e as usize] = c;
    }
    out
}

fn undense(c: &[Poly], v: Symbol) -> Poly {
    let mut terms = Vec::new();
    for (e, p) in c.iter().enumerate() {
        let m = Monomial::var_pow(v, e as i16);
        for (k, x) in p.terms() {
            terms.push((k.mul(&m), x.clone()));
        }
    }
    Poly::from_terms(terms)
}

fn trim(c: &mut Vec<Poly>) {
    while c.len() > 1 && c.last().is_some_and(|p| p.is_zero()) {
        c.pop();
    }
    if c.len() == 1 && c[0].is_zero() {
        c.clear();
    }
}

/// Pseudo-remainder of `a` by `b` in a dense representation.
fn prem(mut a: Vec<Poly>, b: &[Poly]) -> Vec<Poly> {
    let db = b.len() - 1;
    let lb = &b[db];
    trim(&mut a);
    while !a.is_empty() && a.len() > db {
        let da = a.len() - 1;
        let la = a[da].clone();
        let shift = da - db;
        for x in a.iter_mut() {
            *x = &*x * lb;
        }
        for (j, bj) in b.iter().enumerate() {
            let t = &la * bj;
            a[j + shift] = &a[j + shift] - &t;
        }
        trim(&mut a);
    }
    a
}

fn primitive_dense(c: Vec<Poly>) -> Vec<Poly> {
    let mut g: Option<Poly> = None;
    for x in &c {
        if x.is_zero() {
            continue;
        }
        g = Some(match g {
            None => x.clone(),
            Some(g) => poly_gcd(&g, x),
        });
        if g.as_ref().is_some_and(|g| g.is_constant() && g.leading_coeff().abs().is_one()) {
            break;
        }
    }
    match g {
        None => c,
        Some(g) => {
            let g = normalize_sign(g);
            if g.is_one() {
                c
            } else {
                c.into_iter()
                    .map(|x| x.div_exact(&g).expect("content divides"))
                    .collect()
            }
        }
    }
}

fn prs_gcd(a: Poly, b: Poly, v: Symbol) -> Poly {
    let mut x = dense(&a, v);
    let mut y = dense(&b, v);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        if y.len() == 1 {
            // Constant in v: the primitive gcd is trivial.
            return Poly::one();
        }
        let r = prem(x, &y);
        x = y;
        y = primitive_dense(r);
    }
    normalize_sign(undense(&primitive_dense(x), v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int::Int;

    fn v(s: Symbol) -> Poly {
        Poly::var(s)
    }

    #[test]
    fn univariate() {
        let x = v(Symbol::Z);
        let one = Poly::one();
        let a = &(&x - &one) * &(&x + &Poly::int(2));
        let b = &(&x - &one) * &(&x - &Poly::int(3));
        assert_eq!(gcd(&a, &b), &x - &one);
    }

    #[test]
    fn multivariate_with_units() {
        let p = v(Symbol::P);
        let q = v(Symbol::Q);
        let z = v(Symbol::Z);
        let f = &(&z * &q) - &Poly::var_pow(Symbol::P, -1);
        let a = &(&f * &(&p + &q)) * &Poly::var_pow(Symbol::Z, -2);
        let b = &(&f * &(&p - &q)).scale(&Int::from(6)) * &Poly::int(1);
        let g = gcd(&a, &b);
        let expected = normalize_unit(&f);
        assert_eq!(g, expected);
    }

    #[test]
    fn integer_content() {
        let z = v(Symbol::Z);
        let a = (&z + &Poly::one()).scale(&Int::from(4));
        let b = (&z + &Poly::one()).scale(&Int::from(6));
        assert_eq!(gcd(&a, &b), (&z + &Poly::one()).scale(&Int::from(2)));
    }

    #[test]
    fn remainder_sequence_matches_heuristic() {
        let p = v(Symbol::P);
        let q = v(Symbol::Q);
        let z = v(Symbol::Z);
        let one = Poly::one();
        let g = &(&(&p * &z) - &q) * &(&(&q * &q) + &(&z * &Poly::int(3)));
        let a = &g * &(&(&p * &q) + &one);
        let b = &g * &(&(&z * &z) - &(&p * &Poly::int(2)));
        let h = normalize_sign(gcd_with(&a, &b, false));
        assert_eq!(h, normalize_sign(g.clone()));
        assert_eq!(gcd(&a, &b), normalize_sign(g));
    }

    #[test]
    fn coprime() {
        let p = v(Symbol::P);
        let q = v(Symbol::Q);
        assert!(gcd(&(&p + &q), &(&p - &q)).is_one());
    }
}
