//! Consistency checks on the mode relations themselves.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use superrll_scalar::{RatFunc, Symbol};

use crate::algebra::{AlgebraElement, Letter, Sign, Word};
use crate::error::EngineError;
use crate::relations::{relation_set_for, RelationSet, Sector};
use crate::report::{Outcome, ReportBuilder, VerificationReport, RESIDUE_TERM_CAP};
use crate::rewrite::{verify_skew, IdealSlice, Rewriter, Strategy};

/// Every emitted relation has normal form zero.
pub fn verify_relations(set: &RelationSet, rw: &Rewriter) -> VerificationReport {
    let mut b = ReportBuilder::new("rll.relations", "R(z/w) L1(z) L2(w) = L2(w) L1(z) R(z/w)");
    b.note("truncation", set.truncation.to_string());
    b.note("rules", rw.rule_count().to_string());
    let nfs: Vec<_> = set.relations.par_iter().map(|r| rw.normal_form(&r.element)).collect();
    for (r, nf) in set.relations.iter().zip(nfs) {
        if nf.is_zero() {
            b.zero();
        } else {
            b.residue(r.provenance(), nf.display_capped(RESIDUE_TERM_CAP), nf.len());
        }
    }
    b.finish()
}

/// Zero modes skew-commute with every generator.
pub fn verify_skew_factors(rw: &Rewriter) -> VerificationReport {
    let mut b = ReportBuilder::new("rll.skew", "y x = lambda(y, x) x y for invertible zero modes y");
    match verify_skew(rw) {
        Ok(()) => b.zero(),
        Err(e) => b.residue("skew", e.to_string(), 1),
    }
    b.finish()
}

/// Uniformly sampled in-scope words of the given length, without repetition.
pub fn sample_words(rw: &Rewriter, len: usize, count: usize, seed: u64) -> Vec<Word> {
    let alphabet = Letter::alphabet(rw.truncation());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Word> = Vec::new();
    let mut attempts = 0usize;
    while out.len() < count && attempts < 100 * count {
        attempts += 1;
        let ls: Vec<Letter> = (0..len)
            .map(|_| *alphabet.choose(&mut rng).expect("nonempty alphabet"))
            .collect();
        let w = Word::from_letters(&ls);
        if rw.in_scope(&w) && !out.contains(&w) {
            out.push(w);
        }
    }
    out
}

/// Leftmost, rightmost and randomized rewriting give the same normal form on sampled words.
pub fn verify_reduction_order(rw: &Rewriter, words: &[Word], seed: u64) -> VerificationReport {
    let mut b = ReportBuilder::new("rll.reduction-order", "normal form independent of rewrite order");
    b.note("truncation", rw.truncation().to_string());
    b.note("sampled_words", words.len().to_string());
    b.note("seed", seed.to_string());
    let outcomes: Vec<Outcome> = words
        .par_iter()
        .enumerate()
        .map(|(k, w)| {
            let e = AlgebraElement::word(w.clone());
            let left = rw.normal_form_with(&e, Strategy::Leftmost);
            let right = rw.normal_form_with(&e, Strategy::Rightmost);
            let rand = rw.normal_form_with(&e, Strategy::Random(seed.wrapping_add(k as u64)));
            if left == right && left == rand {
                if left == e {
                    Outcome::Trivial
                } else {
                    Outcome::Zero
                }
            } else {
                let mut d = left;
                d.add_scaled(if right != d { &right } else { &rand }, &RatFunc::int(-1));
                Outcome::Residue {
                    location: w.to_string(),
                    residue: d.display_capped(RESIDUE_TERM_CAP),
                    terms: d.len(),
                }
            }
        })
        .collect();
    for o in outcomes {
        b.absorb(o);
    }
    b.finish()
}

/// `w − NF(w)` lies in the bounded two-sided ideal slice, found by linear algebra alone.
pub fn verify_ideal_slice(
    set: &RelationSet,
    rw: &Rewriter,
    words: &[Word],
    max_dim: usize,
) -> Result<VerificationReport, EngineError> {
    let mut b = ReportBuilder::new("rll.ideal-slice", "w - NF(w) in the degree-bounded ideal");
    let diffs: Vec<AlgebraElement> = words
        .par_iter()
        .map(|w| {
            let e = AlgebraElement::word(w.clone());
            let mut d = rw.normal_form(&e);
            d.add_scaled(&e, &RatFunc::int(-1));
            d
        })
        .collect();
    let max_len = words.iter().map(Word::len).max().unwrap_or(2).max(2);
    let slice = IdealSlice::build(set, &diffs, max_len, max_dim)?;
    b.note("slice_rank", slice.rank().to_string());
    b.note("slice_rows", slice.rows().to_string());
    for (w, d) in words.iter().zip(&diffs) {
        if d.is_zero() {
            b.trivial();
            continue;
        }
        let r = slice.reduce(d);
        if r.is_zero() {
            b.zero();
        } else {
            b.residue(w.to_string(), r.display_capped(RESIDUE_TERM_CAP), r.len());
        }
    }
    Ok(b.finish())
}

/// Image of a minus-sector element under `l_ij^{-k} ↦ l_{i'j'}^{+k}`, `1 ↔ 2`, `p ↔ q`.
pub fn sector_swap(e: &AlgebraElement) -> AlgebraElement {
    let swap = [
        (Symbol::P, RatFunc::var(Symbol::Q)),
        (Symbol::Q, RatFunc::var(Symbol::P)),
    ];
    AlgebraElement::from_terms(e.terms().map(|(w, c)| {
        let ls: Vec<Letter> = w
            .letters()
            .iter()
            .map(|l| Letter::mode(Sign::Plus, 1 - l.row(), 1 - l.col(), l.index()))
            .collect();
        (Word::from_letters(&ls), c.subs_many(&swap).expect("swap is a substitution"))
    }))
}

/// The minus-sector relations map into the plus-sector ideal under [`sector_swap`].
pub fn verify_sector_symmetry(n: u32) -> VerificationReport {
    let mut b = ReportBuilder::new("rll.sector-symmetry", "L-(z) relations mirror L+(z) relations");
    b.note("map", "l_ij^-k -> l_(3-i)(3-j)^+k, p <-> q");
    let plus = Rewriter::new(&relation_set_for(&[Sector::PlusPlus], n, Symbol::GAMMA));
    let minus = relation_set_for(&[Sector::MinusMinus], n, Symbol::GAMMA);
    for rel in &minus.relations {
        let nf = plus.normal_form(&sector_swap(&rel.element));
        if nf.is_zero() {
            b.zero();
        } else {
            b.residue(rel.provenance(), nf.display_capped(RESIDUE_TERM_CAP), nf.len());
        }
    }
    b.finish()
}
