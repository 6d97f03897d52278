use proptest::prelude::*;
use superrll_scalar::{
    delta_difference, expand, parse_ratfunc, Direction, Int, Monomial, Poly, RatFunc, Symbol,
};

const SYMS: [Symbol; 3] = [Symbol::P, Symbol::Q, Symbol::Z];

fn poly_strategy() -> impl Strategy<Value = Poly> {
    prop::collection::vec((-4i64..=4, -2i16..=2, -2i16..=2, -1i16..=2), 1..4).prop_map(|ts| {
        Poly::from_terms(ts.into_iter().map(|(c, a, b, d)| {
            let m = Monomial::var_pow(SYMS[0], a)
                .mul(&Monomial::var_pow(SYMS[1], b))
                .mul(&Monomial::var_pow(SYMS[2], d));
            (m, Int::from(c))
        }))
    })
}

fn nonzero_poly() -> impl Strategy<Value = Poly> {
    poly_strategy().prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfunc_strategy() -> impl Strategy<Value = RatFunc> {
    (poly_strategy(), nonzero_poly()).prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonicalization_is_idempotent(f in ratfunc_strategy()) {
        let again = RatFunc::new(f.numer().clone(), f.denom().clone()).unwrap();
        prop_assert_eq!(&again, &f);
    }

    #[test]
    fn scaled_fraction_is_equal(n in poly_strategy(), d in nonzero_poly(), k in nonzero_poly()) {
        let a = RatFunc::new(n.clone(), d.clone()).unwrap();
        let b = RatFunc::new(&n * &k, &d * &k).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn field_laws(a in ratfunc_strategy(), b in ratfunc_strategy(), c in ratfunc_strategy()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv()).is_one());
        }
    }

    #[test]
    fn text_roundtrip(f in ratfunc_strategy()) {
        let printed = f.to_string();
        let g = parse_ratfunc(&printed).unwrap();
        prop_assert_eq!(&g, &f);
        prop_assert_eq!(g.to_string(), printed);
    }

    #[test]
    fn expansion_soundness(f in ratfunc_strategy(), toward_zero in any::<bool>(), lo in -4i64..0, len in 1i64..8) {
        let dir = if toward_zero { Direction::TowardZero } else { Direction::TowardInfinity };
        let hi = lo + len;
        let s = expand(&f, Symbol::Z, dir, lo, hi).unwrap();
        // Oracle: multiply the truncated series by the denominator and compare with the
        // numerator at exponents whose contributions all come from the window or from the
        // side where the expansion is identically zero.
        let den = f.denom().collect(Symbol::Z);
        let num = f.numer().collect(Symbol::Z);
        let nmin = num.keys().next().map(|&e| e as i64).unwrap_or(0);
        let nmax = num.keys().next_back().map(|&e| e as i64).unwrap_or(0);
        let dmin = *den.keys().next().unwrap() as i64;
        let dmax = *den.keys().next_back().unwrap() as i64;
        let vanish = |k: i64| match dir {
            Direction::TowardZero => k < nmin - dmin,
            Direction::TowardInfinity => k > nmax - dmax,
        };
        for e in (lo + dmin)..=(hi + dmax) {
            let mut acc = RatFunc::zero();
            let mut inside = true;
            for (j, dj) in &den {
                let k = e - *j as i64;
                if k < lo || k > hi {
                    if vanish(k) { continue; }
                    inside = false;
                    break;
                }
                acc = &acc + &(&s.coeff(k) * &RatFunc::from_poly(dj.clone()));
            }
            if inside {
                let target = num.get(&(e as i16)).cloned().map(RatFunc::from_poly).unwrap_or_default();
                prop_assert_eq!(acc, target);
            }
        }
        prop_assert!(s.check_window());
    }

    #[test]
    fn larger_window_extends(f in ratfunc_strategy(), lo in -3i64..0, hi in 0i64..3) {
        let small = expand(&f, Symbol::Z, Direction::TowardZero, lo, hi).unwrap();
        let big = expand(&f, Symbol::Z, Direction::TowardZero, lo - 2, hi + 2).unwrap();
        for k in lo..=hi {
            prop_assert_eq!(small.coeff(k), big.coeff(k));
        }
    }

    #[test]
    fn delta_is_all_ones(lo in -20i64..0, hi in 0i64..20) {
        let u = RatFunc::var(Symbol::U);
        let f = (&RatFunc::one() - &u).inv();
        let d = delta_difference(&f, Symbol::U, lo, hi).unwrap();
        for k in lo..=hi {
            prop_assert!(d.coeff(k).is_one());
        }
    }
}

/// Exact fraction arithmetic on machine integers, independent of the crate.
fn frac(n: i64, d: i64) -> (i64, i64) {
    fn g(a: i64, b: i64) -> i64 {
        if b == 0 { a.abs() } else { g(b, a % b) }
    }
    let k = g(n, d) * d.signum();
    (n / k, d / k)
}

#[test]
fn r_entry_at_rational_point() {
    // (z-1) q p^-1 / (z q - p^-1) at p=2, q=3, z=5 computed as ((z-1) q) / (p z q - 1).
    let (p, q, z) = (2i64, 3, 5);
    let expected = frac((z - 1) * q, p * z * q - 1);
    let f = parse_ratfunc("(z - 1)*q*p^-1/(z*q - p^-1)").unwrap();
    let v = f
        .eval(&[
            (Symbol::P, RatFunc::int(p)),
            (Symbol::Q, RatFunc::int(q)),
            (Symbol::Z, RatFunc::int(z)),
        ])
        .unwrap();
    assert_eq!(v, RatFunc::ratio(expected.0, expected.1).unwrap());
    assert_eq!(expected, (12, 29));
}

#[test]
fn geometric_kernel_oracle() {
    // -p * sum (p q z)^k toward zero; q^-1 z^-1 sum (p q z)^-k toward infinity.
    let f = parse_ratfunc("1/(z*q - p^-1)").unwrap();
    let s = expand(&f, Symbol::Z, Direction::TowardZero, 0, 5).unwrap();
    for k in 0..=5i64 {
        let m = Monomial::var_pow(Symbol::P, (k + 1) as i16).mul(&Monomial::var_pow(Symbol::Q, k as i16));
        assert_eq!(s.coeff(k), RatFunc::from_poly(Poly::term(m, Int::from(-1))));
    }
    let s = expand(&f, Symbol::Z, Direction::TowardInfinity, -5, -1).unwrap();
    for k in 1..=5i64 {
        let m = Monomial::var_pow(Symbol::P, -(k as i16 - 1)).mul(&Monomial::var_pow(Symbol::Q, -(k as i16)));
        assert_eq!(s.coeff(-k), RatFunc::monomial(m));
    }
}
