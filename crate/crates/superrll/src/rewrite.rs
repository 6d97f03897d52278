//! Reduction modulo the mode relations.
//!
//! The degree-2 relations are brought to an interreduced echelon form under the word order;
//! each pivot row becomes a rewrite rule `lead → rest`. Normal forms are computed by
//! rewriting the largest word first. A bounded linear-algebra reducer over the two-sided
//! ideal slice is kept alongside as an independent decision procedure.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use superrll_scalar::{RatFunc, Symbol};

use crate::algebra::{AlgebraElement, Letter, Sign, Word};
use crate::error::EngineError;
use crate::relations::RelationSet;
use crate::report::{Outcome, RESIDUE_TERM_CAP};

/// Rows kept monic and keyed by their leading word.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<Word, AlgebraElement>,
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn leads(&self) -> impl Iterator<Item = &Word> {
        self.pivots.keys()
    }

    /// Reduces the leading word repeatedly; returns the remainder whose lead is not a pivot.
    fn reduce_lead(&self, mut v: AlgebraElement) -> AlgebraElement {
        loop {
            let Some((lead, c)) = v.leading() else {
                return v;
            };
            let Some(row) = self.pivots.get(lead) else {
                return v;
            };
            let c = -c;
            v.add_scaled(row, &c);
        }
    }

    /// Full reduction: no word of the result is a pivot.
    pub fn reduce(&self, v: &AlgebraElement) -> AlgebraElement {
        let mut todo = v.clone();
        let mut out = AlgebraElement::zero();
        while let Some((w, c)) = todo.pop_leading() {
            match self.pivots.get(&w) {
                Some(row) => {
                    let mut rest = row.clone();
                    rest.pop_leading();
                    todo.add_scaled(&rest, &-&c);
                }
                None => out.add_term(w, &c),
            }
        }
        out
    }

    /// Adds a row; false if it was already in the span.
    pub fn insert(&mut self, v: AlgebraElement) -> bool {
        let v = self.reduce_lead(v);
        let Some((lead, c)) = v.leading() else {
            return false;
        };
        let lead = lead.clone();
        let inv = c.inv();
        self.pivots.insert(lead, v.scale(&inv));
        true
    }

    /// Makes every non-leading word of every row a non-pivot.
    pub fn interreduce(&mut self) {
        let keys: Vec<Word> = self.pivots.keys().cloned().collect();
        for k in keys {
            let row = self.pivots.remove(&k).expect("pivot present");
            let mut rest = row.clone();
            let (lead, c) = rest.pop_leading().expect("nonzero row");
            let mut reduced = self.reduce(&rest);
            reduced.add_term(lead.clone(), &c);
            self.pivots.insert(lead, reduced);
        }
    }

    pub fn contains(&self, v: &AlgebraElement) -> bool {
        self.reduce_lead(v.clone()).is_zero()
    }
}

/// Which redex to rewrite when a word has several.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    Random(u64),
}

/// Rewriting system for the mode relations at a fixed truncation.
#[derive(Clone, Debug)]
pub struct Rewriter {
    truncation: u32,
    gamma: Symbol,
    rules: HashMap<(Letter, Letter), AlgebraElement>,
    echelon: Echelon,
}

impl Rewriter {
    pub fn new(set: &RelationSet) -> Rewriter {
        let mut ech = Echelon::new();
        for r in set.elements() {
            ech.insert(r.clone());
        }
        ech.interreduce();
        let mut rules = HashMap::new();
        for (lead, row) in &ech.pivots {
            debug_assert_eq!(lead.len(), 2);
            let mut rest = row.clone();
            rest.pop_leading();
            rules.insert((lead.0[0], lead.0[1]), rest.scale(&RatFunc::int(-1)));
        }
        Rewriter {
            truncation: set.truncation,
            gamma: set.gamma,
            rules,
            echelon: ech,
        }
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn gamma(&self) -> Symbol {
        self.gamma
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    /// Leading words of the rules.
    pub fn leads(&self) -> BTreeSet<Word> {
        self.echelon.leads().cloned().collect()
    }

    pub fn is_reducible(&self, w: &Word) -> bool {
        w.0.windows(2).any(|p| self.rules.contains_key(&(p[0], p[1])))
    }

    pub fn normal_form(&self, e: &AlgebraElement) -> AlgebraElement {
        self.normal_form_with(e, Strategy::Leftmost)
    }

    pub fn normal_form_with(&self, e: &AlgebraElement, strategy: Strategy) -> AlgebraElement {
        let mut rng = match strategy {
            Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        let mut todo = e.clone();
        let mut out = AlgebraElement::zero();
        while let Some((w, c)) = todo.pop_leading() {
            let redexes: Vec<usize> = (0..w.len().saturating_sub(1))
                .filter(|&i| self.rules.contains_key(&(w.0[i], w.0[i + 1])))
                .collect();
            if redexes.is_empty() {
                out.add_term(w, &c);
                continue;
            }
            let at = match strategy {
                Strategy::Leftmost => redexes[0],
                Strategy::Rightmost => redexes[redexes.len() - 1],
                Strategy::Random(_) => {
                    let r = rng.as_mut().expect("seeded");
                    redexes[r.gen_range(0..redexes.len())]
                }
            };
            let rhs = &self.rules[&(w.0[at], w.0[at + 1])];
            for (v, a) in rhs.terms() {
                let mut nw = Word(w.0[..at].iter().copied().collect());
                nw.0.extend(v.0.iter().copied());
                nw.0.extend(w.0[at + 2..].iter().copied());
                todo.add_term(nw, &(a * &c));
            }
        }
        out
    }

    /// Plus and minus mode sums both within the truncation.
    pub fn in_scope(&self, w: &Word) -> bool {
        let (p, m) = w.mode_split();
        p <= self.truncation && m <= self.truncation
    }

    pub fn element_in_scope(&self, e: &AlgebraElement) -> bool {
        e.words().all(|w| self.in_scope(w))
    }
}

/// Zero-mode skew commutation `y x = λ(y, x) x y` for invertible `y`.
pub fn skew_factor(y: Letter, x: Letter) -> RatFunc {
    let (y, x) = (base(y), base(x));
    let e = match (x.row(), x.col()) {
        (0, 1) => 1,
        (1, 0) => -1,
        _ => 0,
    };
    if e == 0 {
        return RatFunc::one();
    }
    match y.sign() {
        Sign::Plus => RatFunc::var_pow(Symbol::Q, e),
        Sign::Minus => RatFunc::var_pow(Symbol::P, -e),
    }
}

fn base(l: Letter) -> Letter {
    if l.is_inverse() {
        l.partner().expect("inverse has partner")
    } else {
        l
    }
}

/// Checks every skew factor against the rewriter: `NF(y x − λ x y) = 0` for each invertible
/// `y` and each generator `x` at the truncation.
pub fn verify_skew(rw: &Rewriter) -> Result<(), EngineError> {
    for y in Letter::invertible() {
        for x in Letter::alphabet(rw.truncation()) {
            let yx = AlgebraElement::word(Word::from_letters(&[y, x]));
            let xy = AlgebraElement::word(Word::from_letters(&[x, y]));
            let mut d = yx;
            d.add_scaled(&xy, &-&skew_factor(y, x));
            if !rw.normal_form(&d).is_zero() {
                return Err(EngineError::Construction(format!(
                    "zero mode {y} does not skew-commute with {x}"
                )));
            }
        }
    }
    Ok(())
}

/// Removes adjoined inverses: each inverse letter is moved to the right end using the
/// skew factors, then the element is multiplied on the right by the common power of the
/// zero modes. The result vanishes iff the input does.
pub fn clear_inverses(e: &AlgebraElement) -> AlgebraElement {
    if !e.words().any(|w| w.has_inverse()) {
        return e.clone();
    }
    let staged: Vec<_> = e.terms().map(|(w, c)| strip_inverses(w, c)).collect();
    let mut most = [0usize; 4];
    for s in &staged {
        raise(&mut most, &s.1);
    }
    let mut out = AlgebraElement::zero();
    for (letters, counts, coeff) in staged {
        out.add_term(pad_inverses(letters, &counts, &most), &coeff);
    }
    out
}

/// Drops the inverse letters of `w`, moving each to the right end with its skew factors.
/// Returns the remaining letters, the number of dropped inverses per invertible letter
/// (in [`Letter::invertible`] order) and the adjusted coefficient.
pub(crate) fn strip_inverses(w: &Word, c: &RatFunc) -> (Vec<Letter>, [usize; 4], RatFunc) {
    let order = Letter::invertible();
    let mut letters = Vec::with_capacity(w.len());
    let mut pending: Vec<Letter> = Vec::new();
    let mut coeff = c.clone();
    for &x in w.letters() {
        if x.is_inverse() {
            pending.push(x.partner().expect("inverse"));
            continue;
        }
        for &y in &pending {
            let lam = skew_factor(y, x);
            if !lam.is_one() {
                coeff = &coeff * &lam.inv();
            }
        }
        letters.push(x);
    }
    let mut counts = [0usize; 4];
    for y in &pending {
        counts[order.iter().position(|o| o == y).expect("invertible letter")] += 1;
    }
    (letters, counts, coeff)
}

pub(crate) fn raise(most: &mut [usize; 4], counts: &[usize; 4]) {
    for k in 0..4 {
        most[k] = most[k].max(counts[k]);
    }
}

/// Appends the zero modes missing from `counts` up to `most`.
pub(crate) fn pad_inverses(mut letters: Vec<Letter>, counts: &[usize; 4], most: &[usize; 4]) -> Word {
    let order = Letter::invertible();
    for k in 0..4 {
        for _ in counts[k]..most[k] {
            letters.push(order[k]);
        }
    }
    Word::from_letters(&letters)
}

/// Decides whether `e` vanishes in the algebra.
///
/// Inverses are cleared, then the normal form is taken. A zero normal form is a proof; a
/// nonzero normal form is a residue only when every word is inside the truncation scope,
/// and is counted as skipped otherwise.
pub fn decide(rw: &Rewriter, e: &AlgebraElement, location: impl Into<String>) -> Outcome {
    if e.is_zero() {
        return Outcome::Trivial;
    }
    let cleared = clear_inverses(e);
    let nf = rw.normal_form(&cleared);
    if nf.is_zero() {
        return Outcome::Zero;
    }
    if !rw.element_in_scope(&cleared) {
        return Outcome::Skipped;
    }
    Outcome::Residue {
        location: location.into(),
        residue: nf.display_capped(RESIDUE_TERM_CAP),
        terms: nf.len(),
    }
}

/// Bounded two-sided ideal slice: spans `u·r·v` over relations `r` and words `u`, `v` with
/// total length at most `max_len`, every word inside the truncation scope.
#[derive(Debug)]
pub struct IdealSlice {
    echelon: Echelon,
    rows: usize,
}

impl IdealSlice {
    /// Builds the slice restricted to the graded pieces met by `targets`.
    pub fn build(
        set: &RelationSet,
        targets: &[AlgebraElement],
        max_len: usize,
        max_dim: usize,
    ) -> Result<IdealSlice, EngineError> {
        let n = set.truncation;
        let grades: BTreeSet<_> = targets.iter().flat_map(|t| t.words().map(|w| w.grade())).collect();
        let alphabet = Letter::alphabet(n);
        let scope = |w: &Word| {
            let (p, m) = w.mode_split();
            p <= n && m <= n
        };
        let mut words_by_len: Vec<Vec<Word>> = vec![vec![Word::empty()]];
        for len in 1..=max_len.saturating_sub(2) {
            let mut next = Vec::new();
            for w in &words_by_len[len - 1] {
                for &l in &alphabet {
                    let mut nw = w.clone();
                    nw.0.push(l);
                    if scope(&nw) {
                        next.push(nw);
                    }
                }
            }
            if next.len() > max_dim {
                return Err(EngineError::Resource(format!(
                    "{} words of length {len} exceed cap {max_dim}",
                    next.len()
                )));
            }
            words_by_len.push(next);
        }
        let mut ech = Echelon::new();
        let mut rows = 0usize;
        for r in set.elements() {
            let (rl, rones, rsigned, rplus) = r.leading().expect("nonzero relation").0.grade();
            for lu in 0..words_by_len.len() {
                for lv in 0..words_by_len.len() - lu {
                    if lu + lv + 2 > max_len {
                        continue;
                    }
                    for u in &words_by_len[lu] {
                        let gu = u.grade();
                        for v in &words_by_len[lv] {
                            let gv = v.grade();
                            let g = (rl + gu.0 + gv.0, rones + gu.1 + gv.1, rsigned + gu.2 + gv.2, rplus + gu.3 + gv.3);
                            if !grades.contains(&g) {
                                continue;
                            }
                            let row = AlgebraElement::word(u.clone())
                                .mul(r)
                                .mul(&AlgebraElement::word(v.clone()));
                            if !row.words().all(scope) {
                                continue;
                            }
                            rows += 1;
                            ech.insert(row);
                            if ech.rank() > max_dim {
                                return Err(EngineError::Resource(format!(
                                    "ideal slice rank exceeds cap {max_dim}"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(IdealSlice { echelon: ech, rows })
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Canonical representative modulo the slice.
    pub fn reduce(&self, e: &AlgebraElement) -> AlgebraElement {
        self.echelon.reduce(e)
    }
}

/// Reduces `e` modulo the bounded ideal slice of degree `max_len`.
pub fn reduce(
    e: &AlgebraElement,
    set: &RelationSet,
    max_len: usize,
    max_dim: usize,
) -> Result<AlgebraElement, EngineError> {
    let slice = IdealSlice::build(set, std::slice::from_ref(e), max_len, max_dim)?;
    Ok(slice.reduce(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::{relation_set, relation_set_for, Sector};

    fn rw(n: u32) -> Rewriter {
        Rewriter::new(&relation_set(n, Symbol::GAMMA))
    }

    #[test]
    fn relations_reduce_to_zero() {
        let set = relation_set(2, Symbol::GAMMA);
        let r = Rewriter::new(&set);
        for rel in &set.relations {
            assert!(r.normal_form(&rel.element).is_zero(), "{}", rel.provenance());
        }
    }

    #[test]
    fn l11_modes_commute() {
        let set = relation_set(1, Symbol::GAMMA);
        let a = AlgebraElement::generator(Sign::Plus, 0, 0, 0);
        let b = AlgebraElement::generator(Sign::Plus, 0, 0, 1);
        let mut d = a.mul(&b);
        d.add_scaled(&b.mul(&a), &RatFunc::int(-1));
        assert!(Rewriter::new(&set).normal_form(&d).is_zero());
        assert!(reduce(&d, &set, 2, 100_000).unwrap().is_zero());
    }

    #[test]
    fn skew_factors_hold() {
        for n in 0..=2 {
            verify_skew(&rw(n)).unwrap();
        }
    }

    #[test]
    fn clearing_preserves_vanishing() {
        let r = rw(1);
        let y = AlgebraElement::generator(Sign::Plus, 0, 0, 0);
        let yi = AlgebraElement::inverse(Sign::Plus, 0);
        let x = AlgebraElement::generator(Sign::Plus, 0, 1, 1);
        // y^-1 x y = q^-1 x
        let mut d = yi.mul(&x).mul(&y);
        d.add_scaled(&x, &-&RatFunc::var_pow(Symbol::Q, -1));
        assert_eq!(decide(&r, &d, "t"), Outcome::Zero);
        let mut bad = yi.mul(&x).mul(&y);
        bad.add_scaled(&x, &RatFunc::int(-1));
        assert!(matches!(decide(&r, &bad, "t"), Outcome::Residue { .. }));
    }

    #[test]
    fn strategies_agree_on_words() {
        let r = rw(1);
        let alphabet = Letter::alphabet(1);
        for a in &alphabet {
            for b in &alphabet {
                for c in alphabet.iter().step_by(3) {
                    let w = AlgebraElement::word(Word::from_letters(&[*a, *b, *c]));
                    if !r.element_in_scope(&w) {
                        continue;
                    }
                    let left = r.normal_form_with(&w, Strategy::Leftmost);
                    let right = r.normal_form_with(&w, Strategy::Rightmost);
                    assert_eq!(left, right, "{w}");
                }
            }
        }
    }

    #[test]
    fn normal_form_agrees_with_slice() {
        let set = relation_set(1, Symbol::GAMMA);
        let r = Rewriter::new(&set);
        let alphabet = Letter::alphabet(1);
        let mut targets = Vec::new();
        for a in alphabet.iter().step_by(2) {
            for b in &alphabet {
                for c in alphabet.iter().step_by(5) {
                    let w = AlgebraElement::word(Word::from_letters(&[*a, *b, *c]));
                    if r.element_in_scope(&w) {
                        targets.push(w);
                    }
                }
            }
        }
        let diffs: Vec<AlgebraElement> = targets
            .iter()
            .map(|w| {
                let mut d = r.normal_form(w);
                d.add_scaled(w, &RatFunc::int(-1));
                d
            })
            .collect();
        let slice = IdealSlice::build(&set, &diffs, 3, 1_000_000).unwrap();
        for d in &diffs {
            assert!(slice.reduce(d).is_zero());
        }
    }

    #[test]
    fn minus_sector_maps_to_plus_sector() {
        // l_ij^{-k} ↦ l_{i'j'}^{+k} with 1 ↔ 2 on both indices and p ↔ q on coefficients.
        let swap = [
            (Symbol::P, RatFunc::var(Symbol::Q)),
            (Symbol::Q, RatFunc::var(Symbol::P)),
        ];
        for n in 0..=2 {
            let plus = Rewriter::new(&relation_set_for(&[Sector::PlusPlus], n, Symbol::GAMMA));
            let minus = relation_set_for(&[Sector::MinusMinus], n, Symbol::GAMMA);
            for rel in &minus.relations {
                let image = AlgebraElement::from_terms(rel.element.terms().map(|(w, c)| {
                    let ls: Vec<Letter> = w
                        .letters()
                        .iter()
                        .map(|l| Letter::mode(Sign::Plus, 1 - l.row(), 1 - l.col(), l.index()))
                        .collect();
                    (Word::from_letters(&ls), c.subs_many(&swap).unwrap())
                }));
                assert!(!image.words().any(|w| w.letters().iter().any(|l| l.vanishes())));
                assert!(plus.normal_form(&image).is_zero(), "{}", rel.provenance());
            }
        }
    }
}
