use proptest::prelude::*;
use superrll::algebra::{AlgebraElement, Letter, Word};
use superrll::hopf::{counit_slot, Coproduct, Tensor};
use superrll::relations::relation_set;
use superrll::rewrite::Rewriter;
use superrll::{ReportBuilder, VerificationReport};
use superrll_scalar::{RatFunc, Symbol};

fn letter() -> impl Strategy<Value = Letter> {
    let alphabet = Letter::alphabet(1);
    (0..alphabet.len()).prop_map(move |k| alphabet[k])
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(letter(), 0..=max).prop_map(|ls| Word::from_letters(&ls))
}

fn coeff() -> impl Strategy<Value = RatFunc> {
    (-3i64..=3, -1i16..=1, -1i16..=1).prop_filter_map("nonzero", |(c, a, b)| {
        (c != 0).then(|| &(&RatFunc::int(c) * &RatFunc::var_pow(Symbol::P, a)) * &RatFunc::var_pow(Symbol::Q, b))
    })
}

fn element(max_len: usize) -> impl Strategy<Value = AlgebraElement> {
    prop::collection::vec((word(max_len), coeff()), 0..4).prop_map(AlgebraElement::from_terms)
}

fn sum(a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
    let mut s = a.clone();
    s.add_scaled(b, &RatFunc::one());
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn product_is_bilinear(a in element(2), b in element(2), c in element(2)) {
        prop_assert_eq!(a.mul(&sum(&b, &c)), sum(&a.mul(&b), &a.mul(&c)));
        prop_assert_eq!(sum(&a, &b).mul(&c), sum(&a.mul(&c), &b.mul(&c)));
    }

    #[test]
    fn product_is_associative(a in element(2), b in element(2), c in element(2)) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn element_text_roundtrips(a in element(3)) {
        let back: AlgebraElement = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn ideal_elements_reduce_to_zero(
        picks in prop::collection::vec((0usize..1000, word(1), word(1), coeff()), 1..4)
    ) {
        let set = relation_set(1, Symbol::GAMMA);
        let rw = Rewriter::new(&set);
        let mut e = AlgebraElement::zero();
        for (k, u, v, c) in picks {
            let r = &set.relations[k % set.len()].element;
            let row = AlgebraElement::word(u).mul(r).mul(&AlgebraElement::word(v));
            e.add_scaled(&row, &c);
        }
        prop_assume!(rw.element_in_scope(&e));
        prop_assert!(rw.normal_form(&e).is_zero());
    }

    #[test]
    fn normal_form_is_idempotent(a in element(3)) {
        let rw = Rewriter::new(&relation_set(1, Symbol::GAMMA));
        prop_assume!(rw.element_in_scope(&a));
        let nf = rw.normal_form(&a);
        prop_assert_eq!(rw.normal_form(&nf), nf);
    }

    #[test]
    fn tensor_product_obeys_koszul_rule(a in word(2), b in word(2), c in word(2), d in word(2)) {
        let lhs = Tensor::term(vec![a.clone(), b.clone()], RatFunc::one())
            .mul(&Tensor::term(vec![c.clone(), d.clone()], RatFunc::one()));
        let sign = if b.parity() * c.parity() % 2 == 1 { -1 } else { 1 };
        let rhs = Tensor::term(vec![a.concat(&c), b.concat(&d)], RatFunc::int(sign));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn tensor_parity_is_additive(a in word(2), b in word(2), c in word(2), d in word(2)) {
        let x = Tensor::term(vec![a, b], RatFunc::one());
        let y = Tensor::term(vec![c, d], RatFunc::one());
        let p = (x.parity().unwrap() + y.parity().unwrap()) % 2;
        prop_assert_eq!(x.mul(&y).parity(), Some(p));
    }

    #[test]
    fn tensor_product_is_associative(ws in prop::collection::vec(word(1), 6)) {
        let t = |i: usize| Tensor::term(vec![ws[i].clone(), ws[i + 1].clone()], RatFunc::one());
        prop_assert_eq!(t(0).mul(&t(2)).mul(&t(4)), t(0).mul(&t(2).mul(&t(4))));
    }

    #[test]
    fn coproduct_is_multiplicative_on_words(a in word(2), b in word(2)) {
        let cop = Coproduct::default();
        prop_assert_eq!(cop.word(&a.concat(&b)), cop.word(&a).mul(&cop.word(&b)));
    }

    #[test]
    fn counit_is_a_left_and_right_unit(l in letter()) {
        let cop = Coproduct::default();
        let x = AlgebraElement::letter(l);
        let d = cop.apply(&x);
        let g1 = [(Symbol::GAMMA1, RatFunc::one()), (Symbol::GAMMA2, RatFunc::one())];
        let left = counit_slot(&d, 0).try_map_coeffs(|c| c.subs_many(&g1)).unwrap();
        let right = counit_slot(&d, 1).try_map_coeffs(|c| c.subs_many(&g1)).unwrap();
        prop_assert_eq!(&left, &x);
        prop_assert_eq!(&right, &x);
    }

    #[test]
    fn report_json_roundtrips(zero in 0usize..5, bad in prop::collection::vec(("[a-z]{1,6}", "[a-z0-9*+-]{1,12}"), 0..3), only in any::<bool>()) {
        let mut b = ReportBuilder::new("check.x", "a = b").report_only(only);
        for _ in 0..zero {
            b.zero();
        }
        for (loc, res) in &bad {
            b.residue(loc.clone(), res.clone(), 1);
        }
        b.note("direction", "toward-zero");
        let r = b.finish();
        let back: VerificationReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        prop_assert_eq!(back, r);
    }
}
