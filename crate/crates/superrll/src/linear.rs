//! Z2-graded linear algebra on the (1|1) superspace `V` and its tensor powers.
//!
//! Basis vectors of `V` are indexed `0` and `1` (printed as 1 and 2); index `0` is even and
//! index `1` is odd. A composite index of `V^{⊗n}` is the big-endian number formed by its
//! digits, so `V⊗V` is ordered (11, 12, 21, 22).

use std::fmt;

use superrll_scalar::RatFunc;

/// Coefficient rings for [`GradedMatrix`]. Multiplication need not commute.
pub trait Ring: Clone + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
}

impl Ring for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_index(i: usize) -> Parity {
        if i % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

/// Parity of a basis index of `V`: `P(1) = 0`, `P(2) = 1`.
pub fn parity(i: usize) -> u32 {
    Parity::of_index(i).bit()
}

/// Parity of a composite index of `V^{⊗n}`: the sum of its digit parities.
pub fn composite_parity(index: usize) -> u32 {
    index.count_ones() % 2
}

/// The Koszul sign `(-1)^{a b}`.
pub fn koszul(a: u32, b: u32) -> i64 {
    if (a & b) & 1 == 1 {
        -1
    } else {
        1
    }
}

fn signed<T: Ring>(x: &T, sign: i64) -> T {
    if sign < 0 {
        x.negate()
    } else {
        x.clone()
    }
}

/// Square matrix on `V^{⊗factors}` with entries in `T`.
#[derive(Clone, PartialEq)]
pub struct GradedMatrix<T> {
    factors: usize,
    entries: Vec<T>,
}

impl<T: Ring> GradedMatrix<T> {
    pub fn zeros(factors: usize) -> GradedMatrix<T> {
        let n = 1usize << factors;
        GradedMatrix {
            factors,
            entries: vec![T::zero(); n * n],
        }
    }

    pub fn identity(factors: usize) -> GradedMatrix<T> {
        let mut m = GradedMatrix::zeros(factors);
        for i in 0..m.dim() {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_fn(factors: usize, mut f: impl FnMut(usize, usize) -> T) -> GradedMatrix<T> {
        let n = 1usize << factors;
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                entries.push(f(r, c));
            }
        }
        GradedMatrix { factors, entries }
    }

    /// Elementary matrix `E_{rc}` on `V^{⊗factors}`.
    pub fn elementary(factors: usize, r: usize, c: usize) -> GradedMatrix<T> {
        let mut m = GradedMatrix::zeros(factors);
        m.set(r, c, T::one());
        m
    }

    pub fn factors(&self) -> usize {
        self.factors
    }

    pub fn dim(&self) -> usize {
        1 << self.factors
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.entries[r * self.dim() + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        let n = self.dim();
        self.entries[r * n + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> GradedMatrix<U> {
        GradedMatrix {
            factors: self.factors,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn try_map<U: Ring, E>(
        &self,
        f: impl Fn(&T) -> Result<U, E>,
    ) -> Result<GradedMatrix<U>, E> {
        Ok(GradedMatrix {
            factors: self.factors,
            entries: self.entries.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    pub fn add(&self, other: &GradedMatrix<T>) -> GradedMatrix<T> {
        assert_eq!(self.factors, other.factors, "dimension mismatch");
        GradedMatrix {
            factors: self.factors,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.plus(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &GradedMatrix<T>) -> GradedMatrix<T> {
        assert_eq!(self.factors, other.factors, "dimension mismatch");
        GradedMatrix {
            factors: self.factors,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.minus(b))
                .collect(),
        }
    }

    /// Ordinary matrix product; entry products keep left-to-right order.
    pub fn mul(&self, other: &GradedMatrix<T>) -> GradedMatrix<T> {
        assert_eq!(self.factors, other.factors, "dimension mismatch");
        let n = self.dim();
        let mut out: GradedMatrix<T> = GradedMatrix::zeros(self.factors);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(r, c).plus(&a.times(b));
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    /// Left multiplication by a diagonal sign pattern.
    pub fn scale_rows(&self, signs: &[i64]) -> GradedMatrix<T> {
        let n = self.dim();
        GradedMatrix::from_fn(self.factors, |r, c| signed(self.get(r, c), signs[r % n]))
    }

    /// Entrywise transpose.
    pub fn transpose(&self) -> GradedMatrix<T> {
        GradedMatrix::from_fn(self.factors, |r, c| self.get(c, r).clone())
    }

    /// Positions and values of nonzero entries in row-major order.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        let n = self.dim();
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(k, v)| (k / n, k % n, v))
    }
}

/// The diagonal matrix `η_{ik,jl} = (-1)^{P(i)P(k)} δ_ij δ_kl` on `V⊗V`.
pub fn build_eta<T: Ring>() -> GradedMatrix<T> {
    GradedMatrix::from_fn(2, |r, c| {
        if r != c {
            return T::zero();
        }
        let (i, k) = (r >> 1, r & 1);
        signed(&T::one(), koszul(parity(i), parity(k)))
    })
}

/// Super-permutation `P(v_a ⊗ v_b) = (-1)^{P(a)P(b)} v_b ⊗ v_a`.
pub fn super_permutation<T: Ring>() -> GradedMatrix<T> {
    GradedMatrix::from_fn(2, |r, c| {
        let (a, b) = (c >> 1, c & 1);
        if r == (b << 1 | a) {
            signed(&T::one(), koszul(parity(a), parity(b)))
        } else {
            T::zero()
        }
    })
}

/// Graded tensor product `(A⊗B)_{(i,k),(j,l)} = (-1)^{P(k)(P(i)+P(j))} A_ij B_kl`.
pub fn graded_tensor<T: Ring>(a: &GradedMatrix<T>, b: &GradedMatrix<T>) -> GradedMatrix<T> {
    let nb = b.dim();
    let shift = b.factors();
    GradedMatrix::from_fn(a.factors() + b.factors(), |r, c| {
        let (i, k) = (r >> shift, r & (nb - 1));
        let (j, l) = (c >> shift, c & (nb - 1));
        let x = a.get(i, j);
        let y = b.get(k, l);
        if x.is_zero() || y.is_zero() {
            return T::zero();
        }
        let s = koszul(composite_parity(k), composite_parity(i) + composite_parity(j));
        signed(&x.times(y), s)
    })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    S12,
    S13,
    S23,
}

impl Slot {
    pub fn parse(tag: &str) -> Option<Slot> {
        match tag {
            "12" => Some(Slot::S12),
            "13" => Some(Slot::S13),
            "23" => Some(Slot::S23),
            _ => None,
        }
    }

    fn positions(self) -> (usize, usize) {
        match self {
            Slot::S12 => (0, 1),
            Slot::S13 => (0, 2),
            Slot::S23 => (1, 2),
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.positions();
        write!(f, "{}{}", a + 1, b + 1)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Embedding {
    /// Ordinary index placement, no signs.
    Plain,
    /// Placement through super-permutations: factors passing between the two slots pick up
    /// Koszul signs.
    Graded,
}

fn digit(index: usize, pos: usize, factors: usize) -> usize {
    (index >> (factors - 1 - pos)) & 1
}

/// Places a two-factor operator on factors `(s, t)` of `V^{⊗factors}`, `s < t`, by index
/// without signs.
pub fn embed_pair<T: Ring>(a: &GradedMatrix<T>, s: usize, t: usize, factors: usize) -> GradedMatrix<T> {
    assert_eq!(a.factors(), 2, "embedding expects an operator on V⊗V");
    assert!(s < t && t < factors, "bad slot pair");
    GradedMatrix::from_fn(factors, |r, c| {
        for pos in 0..factors {
            if pos != s && pos != t && digit(r, pos, factors) != digit(c, pos, factors) {
                return T::zero();
            }
        }
        let row = digit(r, s, factors) << 1 | digit(r, t, factors);
        let col = digit(c, s, factors) << 1 | digit(c, t, factors);
        a.get(row, col).clone()
    })
}

/// Embeds an operator on `V⊗V` into `V⊗V⊗V`.
///
/// The graded embedding is `A⊗1`, `1⊗A`, and `P23 (A⊗1) P23` with the super-permutation.
pub fn embed<T: Ring>(a: &GradedMatrix<T>, slot: Slot, mode: Embedding) -> GradedMatrix<T> {
    if mode == Embedding::Plain {
        let (s, t) = slot.positions();
        return embed_pair(a, s, t, 3);
    }
    let id = GradedMatrix::<T>::identity(1);
    match slot {
        Slot::S12 => graded_tensor(a, &id),
        Slot::S23 => graded_tensor(&id, a),
        Slot::S13 => {
            let p23 = graded_tensor(&id, &super_permutation());
            p23.mul(&graded_tensor(a, &id)).mul(&p23)
        }
    }
}

/// Supertrace over the first tensor factor: `Σ_i (-1)^{P(i)} A_{(i,·),(i,·)}`.
pub fn supertrace<T: Ring>(a: &GradedMatrix<T>) -> GradedMatrix<T> {
    assert!(a.factors() >= 1, "nothing to trace");
    let rest = a.factors() - 1;
    let n = 1usize << rest;
    GradedMatrix::from_fn(rest, |r, c| {
        let mut acc = T::zero();
        for i in 0..2 {
            let v = a.get(i * n + r, i * n + c);
            if !v.is_zero() {
                acc = acc.plus(&signed(v, koszul(parity(i), 1)));
            }
        }
        acc
    })
}

/// Ordinary trace over the first tensor factor.
pub fn partial_trace<T: Ring>(a: &GradedMatrix<T>) -> GradedMatrix<T> {
    let rest = a.factors() - 1;
    let n = 1usize << rest;
    GradedMatrix::from_fn(rest, |r, c| a.get(r, c).plus(a.get(n + r, n + c)))
}

impl<T: Ring + fmt::Display> fmt::Display for GradedMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        for r in 0..n {
            f.write_str("[")?;
            for c in 0..n {
                if c > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            f.write_str("]\n")?;
        }
        Ok(())
    }
}

impl<T: Ring + fmt::Display> fmt::Debug for GradedMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use superrll_scalar::Symbol;

    type M = GradedMatrix<RatFunc>;

    fn int(c: i64) -> RatFunc {
        RatFunc::int(c)
    }

    #[test]
    fn eta_is_diag() {
        let eta: M = build_eta();
        for (k, want) in [1, 1, 1, -1].into_iter().enumerate() {
            assert_eq!(eta.get(k, k), &int(want));
        }
        assert_eq!(eta.mul(&eta), M::identity(2));
        assert_eq!(eta.nonzero().count(), 4);
    }

    #[test]
    fn koszul_sign_table() {
        for a in 0..2u32 {
            for b in 0..2u32 {
                let want = if a == 1 && b == 1 { -1 } else { 1 };
                assert_eq!(koszul(a, b), want);
            }
        }
        assert_eq!(parity(0), 0);
        assert_eq!(parity(1), 1);
    }

    #[test]
    fn tensor_of_identities() {
        let i1 = M::identity(1);
        assert_eq!(graded_tensor(&i1, &i1), M::identity(2));
    }

    #[test]
    fn elementary_tensor_signs() {
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let t = graded_tensor(&M::elementary(1, i, j), &M::elementary(1, k, l));
                        let sign = if parity(k) * (parity(i) + parity(j)) % 2 == 1 { -1 } else { 1 };
                        assert_eq!(t.get(2 * i + k, 2 * j + l), &int(sign));
                        assert_eq!(t.nonzero().count(), 1);
                    }
                }
            }
        }
    }

    #[test]
    fn koszul_coherence() {
        // (A⊗B)(C⊗D) = (-1)^{|B||C|} (AC⊗BD) on elementary matrices.
        let el = |r, c| M::elementary(1, r, c);
        let deg = |r: usize, c: usize| (parity(r) + parity(c)) % 2;
        for code in 0..256usize {
            let d = |k: usize| ((code >> (2 * k)) & 1, (code >> (2 * k + 1)) & 1);
            let (a, b, c, e) = (d(0), d(1), d(2), d(3));
            let lhs = graded_tensor(&el(a.0, a.1), &el(b.0, b.1))
                .mul(&graded_tensor(&el(c.0, c.1), &el(e.0, e.1)));
            let mut rhs = graded_tensor(
                &el(a.0, a.1).mul(&el(c.0, c.1)),
                &el(b.0, b.1).mul(&el(e.0, e.1)),
            );
            if deg(b.0, b.1) * deg(c.0, c.1) == 1 {
                rhs = rhs.map(|x| -x);
            }
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn embeddings() {
        let id = M::identity(2);
        for slot in [Slot::S12, Slot::S13, Slot::S23] {
            for mode in [Embedding::Plain, Embedding::Graded] {
                assert_eq!(embed(&id, slot, mode), M::identity(3));
            }
        }
        let p: M = super_permutation();
        let p12 = embed(&p, Slot::S12, Embedding::Graded);
        assert_eq!(p12.mul(&p12), M::identity(3));
        let p23 = embed(&p, Slot::S23, Embedding::Graded);
        // Conjugating a 12-operator by the 23 super-permutation moves it to slot 13.
        let a = M::from_fn(2, |r, c| int((1 + r * 4 + c) as i64));
        let moved = p23.mul(&embed(&a, Slot::S12, Embedding::Graded)).mul(&p23);
        assert_eq!(moved, embed(&a, Slot::S13, Embedding::Graded));
    }

    #[test]
    fn embedding_matches_tensor_oracle() {
        // Brute-force entries from the Koszul rule on 8×8 indices.
        let dg = |x: usize| composite_parity(x);
        let oracle12 = |a: &M, r: usize, c: usize| {
            if r & 1 != c & 1 {
                return int(0);
            }
            let v = a.get(r >> 1, c >> 1).clone();
            if koszul(parity(r & 1), dg(r >> 1) + dg(c >> 1)) < 0 { -v } else { v }
        };
        let oracle23 = |b: &M, r: usize, c: usize| {
            if r >> 2 != c >> 2 { int(0) } else { b.get(r & 3, c & 3).clone() }
        };
        for code in 0..256usize {
            let a = M::elementary(2, code >> 6 & 3, code >> 4 & 3);
            let b = M::elementary(2, code >> 2 & 3, code & 3);
            let want12 = M::from_fn(3, |r, c| oracle12(&a, r, c));
            let want23 = M::from_fn(3, |r, c| oracle23(&b, r, c));
            let got = embed(&a, Slot::S12, Embedding::Graded).mul(&embed(&b, Slot::S23, Embedding::Graded));
            assert_eq!(got, want12.mul(&want23));
        }
    }

    #[test]
    fn supertraces() {
        assert!(supertrace(&M::identity(1)).get(0, 0).is_zero());
        let (z, w) = (RatFunc::var(Symbol::Z), RatFunc::var(Symbol::W));
        let mut d = M::zeros(1);
        d.set(0, 0, z.clone());
        d.set(1, 1, w.clone());
        assert_eq!(supertrace(&d).get(0, 0), &(&z - &w));
        // str_1 of the super-permutation: entries Σ_i (-1)^{P(i)} P_{(i,r),(i,c)}.
        let p: M = super_permutation();
        let s = supertrace(&p);
        for r in 0..2 {
            for c in 0..2 {
                let mut want = 0;
                for i in 0..2 {
                    let v = p.get(2 * i + r, 2 * i + c);
                    let sign = if i == 1 { -1 } else { 1 };
                    if v == &int(1) {
                        want += sign;
                    } else if v == &int(-1) {
                        want -= sign;
                    }
                }
                assert_eq!(s.get(r, c), &int(want));
            }
        }
        assert_eq!(s, M::identity(1));
    }
}
