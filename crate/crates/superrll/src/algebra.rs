//! Words in mode generators and their linear combinations.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;
use superrll_scalar::{parse_ratfunc, RatFunc, ScalarError, Symbol};

use crate::error::EngineError;
use crate::linear::Ring;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    /// `+1` or `-1`.
    pub fn unit(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

const SIGN_BIT: u32 = 1 << 20;
const ROW_BIT: u32 = 1 << 19;
const COL_BIT: u32 = 1 << 18;
const INV_BIT: u32 = 1 << 17;
const MODE_MASK: u32 = INV_BIT - 1;

/// A generator `l_ij^{±k}` or the inverse of a diagonal zero mode.
///
/// Rows and columns are 0-based internally and printed 1-based. The numeric order of the
/// packed value is the letter order: sign (minus first), row, column, mode.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u32);

impl Letter {
    pub fn mode(sign: Sign, i: usize, j: usize, k: u32) -> Letter {
        assert!(i < 2 && j < 2 && k < INV_BIT, "letter out of range");
        let mut v = k;
        if sign == Sign::Plus {
            v |= SIGN_BIT;
        }
        if i == 1 {
            v |= ROW_BIT;
        }
        if j == 1 {
            v |= COL_BIT;
        }
        Letter(v)
    }

    /// Inverse of `l_dd^{±0}`.
    pub fn inverse(sign: Sign, d: usize) -> Letter {
        Letter(Letter::mode(sign, d, d, 0).0 | INV_BIT)
    }

    pub fn sign(self) -> Sign {
        if self.0 & SIGN_BIT != 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn row(self) -> usize {
        (self.0 & ROW_BIT != 0) as usize
    }

    pub fn col(self) -> usize {
        (self.0 & COL_BIT != 0) as usize
    }

    pub fn index(self) -> u32 {
        self.0 & MODE_MASK
    }

    pub fn is_inverse(self) -> bool {
        self.0 & INV_BIT != 0
    }

    /// Parity of the generator; inverses are even.
    pub fn parity(self) -> u32 {
        if self.is_inverse() {
            0
        } else {
            ((self.row() + self.col()) % 2) as u32
        }
    }

    /// Mode carried by the letter (zero for inverses).
    pub fn weight(self) -> u32 {
        if self.is_inverse() {
            0
        } else {
            self.index()
        }
    }

    /// True for the zero modes that vanish by triangularity: `l12^{+0}` and `l21^{-0}`.
    pub fn vanishes(self) -> bool {
        !self.is_inverse()
            && self.index() == 0
            && match self.sign() {
                Sign::Plus => self.row() == 0 && self.col() == 1,
                Sign::Minus => self.row() == 1 && self.col() == 0,
            }
    }

    /// Diagonal zero modes have adjoined inverses.
    pub fn is_invertible(self) -> bool {
        self.index() == 0 && self.row() == self.col()
    }

    /// The partner of an invertible letter: `y ↔ y^-1`.
    pub fn partner(self) -> Option<Letter> {
        if self.is_invertible() {
            Some(Letter(self.0 ^ INV_BIT))
        } else {
            None
        }
    }

    /// All non-vanishing generators with mode at most `n`, in letter order.
    pub fn alphabet(n: u32) -> Vec<Letter> {
        let mut out = Vec::new();
        for sign in [Sign::Minus, Sign::Plus] {
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..=n {
                        let l = Letter::mode(sign, i, j, k);
                        if !l.vanishes() {
                            out.push(l);
                        }
                    }
                }
            }
        }
        out
    }

    /// Diagonal zero modes `l11^{±0}`, `l22^{±0}`.
    pub fn invertible() -> [Letter; 4] {
        [
            Letter::mode(Sign::Minus, 0, 0, 0),
            Letter::mode(Sign::Minus, 1, 1, 0),
            Letter::mode(Sign::Plus, 0, 0, 0),
            Letter::mode(Sign::Plus, 1, 1, 0),
        ]
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "l{}{}{}{}",
            self.row() + 1,
            self.col() + 1,
            self.sign().as_char(),
            self.index()
        )?;
        if self.is_inverse() {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Letter {
    type Err = String;

    fn from_str(s: &str) -> Result<Letter, String> {
        let b = s.as_bytes();
        if b.len() < 5 || b[0] != b'l' {
            return Err(format!("bad generator `{s}`"));
        }
        let idx = |c: u8| match c {
            b'1' => Ok(0),
            b'2' => Ok(1),
            _ => Err(format!("bad index in `{s}`")),
        };
        let i = idx(b[1])?;
        let j = idx(b[2])?;
        let sign = match b[3] {
            b'+' => Sign::Plus,
            b'-' => Sign::Minus,
            _ => return Err(format!("bad sign in `{s}`")),
        };
        let rest = &s[4..];
        let (digits, inverse) = match rest.strip_suffix("^-1") {
            Some(d) => (d, true),
            None => (rest, false),
        };
        if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) || (digits.len() > 1 && digits.starts_with('0')) {
            return Err(format!("bad mode in `{s}`"));
        }
        let k: u32 = digits.parse().map_err(|_| format!("bad mode in `{s}`"))?;
        if k >= INV_BIT {
            return Err(format!("mode too large in `{s}`"));
        }
        let l = Letter::mode(sign, i, j, k);
        if inverse {
            if !l.is_invertible() {
                return Err(format!("`{s}` has no inverse"));
            }
            return Ok(Letter::inverse(sign, i));
        }
        Ok(l)
    }
}

/// A word in letters. Ordered by length, then total mode, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub SmallVec<[Letter; 4]>);

impl Word {
    pub fn empty() -> Word {
        Word(SmallVec::new())
    }

    pub fn single(l: Letter) -> Word {
        Word(smallvec::smallvec![l])
    }

    pub fn from_letters(ls: &[Letter]) -> Word {
        Word(ls.iter().copied().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn total_mode(&self) -> u32 {
        self.0.iter().map(|l| l.weight()).sum()
    }

    /// Total modes of the plus and minus letters.
    pub fn mode_split(&self) -> (u32, u32) {
        let mut p = 0;
        let mut m = 0;
        for l in &self.0 {
            match l.sign() {
                Sign::Plus => p += l.weight(),
                Sign::Minus => m += l.weight(),
            }
        }
        (p, m)
    }

    pub fn parity(&self) -> u32 {
        self.0.iter().map(|l| l.parity()).sum::<u32>() % 2
    }

    pub fn has_inverse(&self) -> bool {
        self.0.iter().any(|l| l.is_inverse())
    }

    /// Concatenation, cancelling adjoined inverse pairs at the junction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            match (out.last(), l.partner()) {
                (Some(&last), Some(p)) if last == p => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word(out)
    }

    /// Grading preserved by every relation: length, count of index-1 entries, signed mode
    /// sum, number of plus letters.
    pub fn grade(&self) -> (usize, u32, i64, u32) {
        let mut ones = 0;
        let mut signed = 0i64;
        let mut plus = 0;
        for l in &self.0 {
            if l.is_inverse() {
                continue;
            }
            ones += (l.row() == 0) as u32 + (l.col() == 0) as u32;
            signed += l.sign().unit() * l.index() as i64;
            plus += (l.sign() == Sign::Plus) as u32;
        }
        (self.0.len(), ones, signed, plus)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Word) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.total_mode().cmp(&other.total_mode()))
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Word) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (n, l) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str("*")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite linear combination of words with rational-function coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<Word, RatFunc>,
}

impl AlgebraElement {
    pub fn zero() -> AlgebraElement {
        AlgebraElement::default()
    }

    pub fn one() -> AlgebraElement {
        AlgebraElement::scalar(RatFunc::one())
    }

    pub fn scalar(c: RatFunc) -> AlgebraElement {
        AlgebraElement::term(Word::empty(), c)
    }

    pub fn term(w: Word, c: RatFunc) -> AlgebraElement {
        let mut e = AlgebraElement::zero();
        e.add_term(w, &c);
        e
    }

    pub fn word(w: Word) -> AlgebraElement {
        AlgebraElement::term(w, RatFunc::one())
    }

    /// The generator as an element; vanishing zero modes give zero.
    pub fn letter(l: Letter) -> AlgebraElement {
        if l.vanishes() {
            AlgebraElement::zero()
        } else {
            AlgebraElement::word(Word::single(l))
        }
    }

    pub fn generator(sign: Sign, i: usize, j: usize, k: u32) -> AlgebraElement {
        AlgebraElement::letter(Letter::mode(sign, i, j, k))
    }

    pub fn inverse(sign: Sign, d: usize) -> AlgebraElement {
        AlgebraElement::letter(Letter::inverse(sign, d))
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, RatFunc)>>(it: I) -> AlgebraElement {
        let mut e = AlgebraElement::zero();
        for (w, c) in it {
            e.add_term(w, &c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &RatFunc)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Word, RatFunc> {
        self.terms
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn coeff(&self, w: &Word) -> RatFunc {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// Largest word under the word order.
    pub fn leading(&self) -> Option<(&Word, &RatFunc)> {
        self.terms.iter().next_back()
    }

    pub fn pop_leading(&mut self) -> Option<(Word, RatFunc)> {
        self.terms.pop_last()
    }

    pub fn add_term(&mut self, w: Word, c: &RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &AlgebraElement, c: &RatFunc) {
        if c.is_zero() {
            return;
        }
        for (w, a) in &other.terms {
            self.add_term(w.clone(), &(a * c));
        }
    }

    pub fn scale(&self, c: &RatFunc) -> AlgebraElement {
        if c.is_zero() {
            return AlgebraElement::zero();
        }
        AlgebraElement {
            terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&RatFunc) -> RatFunc) -> AlgebraElement {
        AlgebraElement::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), f(c))))
    }

    pub fn try_map_coeffs(
        &self,
        f: impl Fn(&RatFunc) -> Result<RatFunc, ScalarError>,
    ) -> Result<AlgebraElement, ScalarError> {
        let mut out = AlgebraElement::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &f(c)?);
        }
        Ok(out)
    }

    /// Substitutes a symbol in every coefficient.
    pub fn subs(&self, s: Symbol, value: &RatFunc) -> Result<AlgebraElement, ScalarError> {
        self.try_map_coeffs(|c| c.subs(s, value))
    }

    pub fn mul(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), &(a * b));
            }
        }
        out
    }

    /// Parity if every word has the same parity.
    pub fn parity(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|w| w.parity());
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    /// Keeps words satisfying the predicate.
    pub fn filter(&self, keep: impl Fn(&Word) -> bool) -> AlgebraElement {
        AlgebraElement {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| keep(w))
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Text with at most `cap` terms; the rest are summarized.
    pub fn display_capped(&self, cap: usize) -> String {
        if self.terms.len() <= cap {
            return self.to_string();
        }
        let head = AlgebraElement {
            terms: self.terms.iter().rev().take(cap).map(|(w, c)| (w.clone(), c.clone())).collect(),
        };
        format!("{head} + ... ({} more terms)", self.terms.len() - cap)
    }
}

impl Ring for AlgebraElement {
    fn zero() -> Self {
        AlgebraElement::zero()
    }
    fn one() -> Self {
        AlgebraElement::one()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &RatFunc::one());
        out
    }
    fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &RatFunc::int(-1));
        out
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negate(&self) -> Self {
        self.scale(&RatFunc::int(-1))
    }
}

/// Printed largest word first; each term is `(coefficient)*word`.
impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (w, c)) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            if !w.is_empty() {
                write!(f, "*{w}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for AlgebraElement {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<AlgebraElement, EngineError> {
        let err = |msg: String| EngineError::Parse { line: 1, msg };
        let s = s.trim();
        if s == "0" {
            return Ok(AlgebraElement::zero());
        }
        let b = s.as_bytes();
        let mut pos = 0;
        let mut out = AlgebraElement::zero();
        let mut seen = std::collections::BTreeSet::new();
        loop {
            if b.get(pos) != Some(&b'(') {
                return Err(err(format!("expected `(` at byte {pos}")));
            }
            let mut depth = 0usize;
            let mut end = None;
            for (k, &c) in b.iter().enumerate().skip(pos) {
                match c {
                    b'(' => depth += 1,
                    b')' => {
                        depth -= 1;
                        if depth == 0 {
                            end = Some(k);
                            break;
                        }
                    }
                    _ => {}
                }
            }
            let end = end.ok_or_else(|| err("unbalanced parentheses".into()))?;
            let coeff = parse_ratfunc(&s[pos + 1..end]).map_err(|e| err(e.to_string()))?;
            if coeff.is_zero() {
                return Err(err("zero coefficient".into()));
            }
            pos = end + 1;
            let stop = s[pos..].find(" + ").map(|k| pos + k).unwrap_or(s.len());
            let tail = &s[pos..stop];
            let mut letters = SmallVec::new();
            if !tail.is_empty() {
                let rest = tail
                    .strip_prefix('*')
                    .ok_or_else(|| err(format!("expected `*` after coefficient, found `{tail}`")))?;
                for part in rest.split('*') {
                    let l: Letter = part.parse().map_err(err)?;
                    if l.vanishes() {
                        return Err(err(format!("`{l}` vanishes")));
                    }
                    letters.push(l);
                }
            }
            let w = Word(letters);
            if !reduced(&w) {
                return Err(err(format!("word `{w}` has an adjacent inverse pair")));
            }
            if !seen.insert(w.clone()) {
                return Err(err(format!("repeated word `{w}`")));
            }
            out.add_term(w, &coeff);
            if stop == s.len() {
                break;
            }
            pos = stop + 3;
        }
        Ok(out)
    }
}

fn reduced(w: &Word) -> bool {
    w.0.windows(2).all(|p| p[1].partner() != Some(p[0]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: Sign, i: usize, j: usize, k: u32) -> AlgebraElement {
        AlgebraElement::generator(s, i, j, k)
    }

    #[test]
    fn letter_roundtrip() {
        for l in Letter::alphabet(3) {
            assert_eq!(l.to_string().parse::<Letter>().unwrap(), l);
        }
        for l in Letter::invertible() {
            let inv = l.partner().unwrap();
            assert!(inv.is_inverse());
            assert_eq!(inv.to_string().parse::<Letter>().unwrap(), inv);
            assert_eq!(inv.partner(), Some(l));
        }
        assert!("l12+0^-1".parse::<Letter>().is_err());
        assert!("l13+0".parse::<Letter>().is_err());
    }

    #[test]
    fn parities() {
        assert_eq!(Letter::mode(Sign::Plus, 0, 1, 2).parity(), 1);
        assert_eq!(Letter::mode(Sign::Minus, 1, 1, 0).parity(), 0);
        assert_eq!(Letter::inverse(Sign::Plus, 1).parity(), 0);
    }

    #[test]
    fn inverse_pairs_cancel() {
        let y = g(Sign::Plus, 0, 0, 0);
        let yi = AlgebraElement::inverse(Sign::Plus, 0);
        assert_eq!(y.mul(&yi), AlgebraElement::one());
        assert_eq!(yi.mul(&y), AlgebraElement::one());
        let x = g(Sign::Minus, 1, 0, 1);
        assert_eq!(x.mul(&y).mul(&yi), x);
        let gamma = AlgebraElement::scalar(RatFunc::var(Symbol::GAMMA));
        let gamma_inv = AlgebraElement::scalar(RatFunc::var_pow(Symbol::GAMMA, -1));
        assert_eq!(gamma.mul(&gamma_inv).mul(&x), x);
    }

    #[test]
    fn vanishing_letters() {
        assert!(g(Sign::Plus, 0, 1, 0).is_zero());
        assert!(g(Sign::Minus, 1, 0, 0).is_zero());
        assert!(!g(Sign::Plus, 1, 0, 0).is_zero());
        assert_eq!(Letter::alphabet(0).len(), 6);
        assert_eq!(Letter::alphabet(3).len(), 30);
    }

    #[test]
    fn word_order() {
        let a = Word::single(Letter::mode(Sign::Plus, 0, 0, 0));
        let b = Word::single(Letter::mode(Sign::Minus, 0, 0, 1));
        let c = Word::single(Letter::mode(Sign::Minus, 1, 1, 0));
        assert!(a < b);
        assert!(c < a);
        assert!(b < a.concat(&a));
    }

    #[test]
    fn text_roundtrip() {
        let e = g(Sign::Plus, 0, 0, 1)
            .mul(&g(Sign::Minus, 1, 0, 2))
            .scale(&RatFunc::var(Symbol::Q))
            .plus(&AlgebraElement::inverse(Sign::Minus, 1).scale(&"p - q^-1".parse().unwrap()))
            .plus(&AlgebraElement::scalar(RatFunc::int(3)));
        let text = e.to_string();
        let back: AlgebraElement = text.parse().unwrap();
        assert_eq!(back, e);
        assert_eq!(back.to_string(), text);
        assert_eq!("0".parse::<AlgebraElement>().unwrap(), AlgebraElement::zero());
        assert!("(1)*l11+0*l11+0^-1".parse::<AlgebraElement>().is_err());
        assert!("(0)*l11+0".parse::<AlgebraElement>().is_err());
    }
}
