//! The two-parameter graded R-matrix and its defining identities.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use superrll_scalar::{RatFunc, ScalarError, Symbol};

use crate::linear::{
    build_eta, composite_parity, embed, koszul, parity, super_permutation, Embedding,
    GradedMatrix, Slot,
};
use crate::report::{ReportBuilder, VerificationReport};

pub type Matrix = GradedMatrix<RatFunc>;

fn q() -> RatFunc {
    RatFunc::var(Symbol::Q)
}

fn p_inv() -> RatFunc {
    RatFunc::var_pow(Symbol::P, -1)
}

/// Numerator of each nonzero entry as `c0 + c1 u`; every entry shares the denominator
/// `u q - p^-1`. Indices are composite `(11, 12, 21, 22) = (0, 1, 2, 3)`.
pub fn numerators() -> Vec<(usize, usize, RatFunc, RatFunc)> {
    let qp = &q() * &p_inv();
    let d = &q() - &p_inv();
    vec![
        (0, 0, -&p_inv(), q()),
        (1, 1, -&qp, qp.clone()),
        (1, 2, RatFunc::zero(), d.clone()),
        (2, 1, d, RatFunc::zero()),
        (2, 2, RatFunc::int(-1), RatFunc::one()),
        (3, 3, -&q(), p_inv()),
    ]
}

/// `u q - p^-1`.
pub fn denominator(u: &RatFunc) -> RatFunc {
    &(u * &q()) - &p_inv()
}

/// An R-matrix as a function of one spectral argument, stored symbolically in `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct RMatrix {
    value: Matrix,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Negate one entry.
    Flip(usize, usize),
    /// Exchange two entries.
    Swap((usize, usize), (usize, usize)),
}

impl std::fmt::Display for Mutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mutation::Flip(r, c) => write!(f, "flip {}", entry_label(*r, *c)),
            Mutation::Swap(a, b) => write!(
                f,
                "swap {} {}",
                entry_label(a.0, a.1),
                entry_label(b.0, b.1)
            ),
        }
    }
}

/// `(ik),(jl)` with 1-based digits.
pub fn entry_label(r: usize, c: usize) -> String {
    format!("({}{},{}{})", (r >> 1) + 1, (r & 1) + 1, (c >> 1) + 1, (c & 1) + 1)
}

impl RMatrix {
    /// The R-matrix with entries as printed: corners `1` and `-(q - u p^-1)/(u q - p^-1)`.
    pub fn standard() -> RMatrix {
        let u = RatFunc::var(Symbol::U);
        let d = denominator(&u).inv();
        let mut m = Matrix::zeros(2);
        for (r, c, c0, c1) in numerators() {
            m.set(r, c, &(&c0 + &(&c1 * &u)) * &d);
        }
        RMatrix { value: m }
    }

    pub fn identity() -> RMatrix {
        RMatrix {
            value: Matrix::identity(2),
        }
    }

    pub fn symbolic(&self) -> &Matrix {
        &self.value
    }

    pub fn mutate(&self, m: Mutation) -> RMatrix {
        let mut v = self.value.clone();
        match m {
            Mutation::Flip(r, c) => {
                let x = -v.get(r, c);
                v.set(r, c, x);
            }
            Mutation::Swap(a, b) => {
                let x = v.get(a.0, a.1).clone();
                let y = v.get(b.0, b.1).clone();
                v.set(a.0, a.1, y);
                v.set(b.0, b.1, x);
            }
        }
        RMatrix { value: v }
    }

    /// The matrix at spectral argument `arg`.
    pub fn at(&self, arg: &RatFunc) -> Result<Matrix, ScalarError> {
        self.value.try_map(|e| e.subs(Symbol::U, arg))
    }

    /// Substitutes values for the parameters, leaving `u` symbolic.
    pub fn specialize(&self, values: &[(Symbol, RatFunc)]) -> Result<RMatrix, ScalarError> {
        Ok(RMatrix {
            value: self.value.try_map(|e| e.subs_many(values))?,
        })
    }
}

/// `R(z)` for the printed R-matrix.
pub fn build_r(spectral: Symbol) -> Matrix {
    RMatrix::standard()
        .at(&RatFunc::var(spectral))
        .expect("symbolic substitution cannot vanish")
}

fn ratio(a: Symbol, b: Symbol) -> RatFunc {
    &RatFunc::var(a) * &RatFunc::var_pow(b, -1)
}

fn triple_label(r: usize, c: usize) -> String {
    let d = |x: usize| format!("{}{}{}", (x >> 2) + 1, ((x >> 1) & 1) + 1, (x & 1) + 1);
    format!("({},{})", d(r), d(c))
}

/// Both sides of the η-dressed Yang–Baxter identity as 8×8 matrices over `(p, q, z, w)`.
///
/// `ηR` satisfies the ordinary Yang–Baxter equation, so each factor is placed by index
/// without signs.
pub fn gybe_sides(r: &RMatrix) -> Result<(Matrix, Matrix), ScalarError> {
    let eta: Matrix = build_eta();
    let dressed = |arg: &RatFunc| -> Result<Matrix, ScalarError> { Ok(eta.mul(&r.at(arg)?)) };
    let a = dressed(&ratio(Symbol::Z, Symbol::W))?;
    let b = dressed(&RatFunc::var(Symbol::Z))?;
    let c = dressed(&RatFunc::var(Symbol::W))?;
    let e12 = embed(&a, Slot::S12, Embedding::Plain);
    let e13 = embed(&b, Slot::S13, Embedding::Plain);
    let e23 = embed(&c, Slot::S23, Embedding::Plain);
    Ok((e12.mul(&e13).mul(&e23), e23.mul(&e13).mul(&e12)))
}

/// Per-entry verdicts of the matrix form, indexed by `row * 8 + col`.
pub fn gybe_matrix_pattern(r: &RMatrix) -> Result<Vec<Option<RatFunc>>, ScalarError> {
    let (lhs, rhs) = gybe_sides(r)?;
    let mut out = Vec::with_capacity(64);
    for row in 0..8 {
        for col in 0..8 {
            let d = lhs.get(row, col) - rhs.get(row, col);
            out.push(if d.is_zero() { None } else { Some(d) });
        }
    }
    Ok(out)
}

pub fn verify_gybe_matrix(r: &RMatrix) -> VerificationReport {
    let mut b = ReportBuilder::new(
        "ybe.matrix",
        "eta12 R12(z/w) eta13 R13(z) eta23 R23(w) = eta23 R23(w) eta13 R13(z) eta12 R12(z/w)",
    );
    b.note("embedding", "plain index placement of eta-dressed factors");
    match gybe_matrix_pattern(r) {
        Ok(pattern) => {
            for (k, d) in pattern.into_iter().enumerate() {
                match d {
                    None => b.zero(),
                    Some(d) => {
                        let terms = d.numer().len();
                        b.residue(triple_label(k / 8, k % 8), d.to_string(), terms)
                    }
                }
            }
        }
        Err(e) => b.residue("substitution", e.to_string(), 0),
    }
    b.finish()
}

/// Parity function used by the component form; `offset = 1` swaps the grading.
fn par(i: usize, offset: usize) -> u32 {
    parity((i + offset) % 2)
}

/// Component form: `R^{ij}_{ab}(z/w) R^{ak}_{pc}(z) R^{bc}_{qr}(w) (-1)^{(P(a)-P(p))P(b)}
/// = (-1)^{P(e)(P(f)-P(r))} R^{jk}_{ef}(w) R^{if}_{dr}(z) R^{de}_{pq}(z/w)`, with
/// `R^{ij}_{ab}` the entry in row `(ij)` and column `(ab)`.
pub fn gybe_component_pattern(
    r: &RMatrix,
    parity_offset: usize,
) -> Result<Vec<Option<RatFunc>>, ScalarError> {
    let a = r.at(&ratio(Symbol::Z, Symbol::W))?;
    let b = r.at(&RatFunc::var(Symbol::Z))?;
    let c = r.at(&RatFunc::var(Symbol::W))?;
    let e = |m: &Matrix, i: usize, j: usize, k: usize, l: usize| m.get(2 * i + j, 2 * k + l).clone();
    let sgn = |x: RatFunc, s: i64| if s < 0 { -x } else { x };
    let po = parity_offset;
    let mut out = Vec::with_capacity(64);
    for row in 0..8usize {
        let (i, j, k) = (row >> 2, (row >> 1) & 1, row & 1);
        for col in 0..8usize {
            let (pp, qq, rr) = (col >> 2, (col >> 1) & 1, col & 1);
            let mut lhs = RatFunc::zero();
            let mut rhs = RatFunc::zero();
            for inner in 0..8usize {
                let (x, y, z) = (inner >> 2, (inner >> 1) & 1, inner & 1);
                // Left: a = x, b = y, c = z.
                let t = e(&a, i, j, x, y);
                if !t.is_zero() {
                    let t = &(&t * &e(&b, x, k, pp, z)) * &e(&c, y, z, qq, rr);
                    let s = koszul(par(x, po) + par(pp, po), par(y, po));
                    lhs = &lhs + &sgn(t, s);
                }
                // Right: d = x, e = y, f = z.
                let t = e(&c, j, k, y, z);
                if !t.is_zero() {
                    let t = &(&t * &e(&b, i, z, x, rr)) * &e(&a, x, y, pp, qq);
                    let s = koszul(par(y, po), par(z, po) + par(rr, po));
                    rhs = &rhs + &sgn(t, s);
                }
            }
            let d = &lhs - &rhs;
            out.push(if d.is_zero() { None } else { Some(d) });
        }
    }
    Ok(out)
}

pub fn verify_gybe_components(r: &RMatrix) -> VerificationReport {
    verify_gybe_components_with(r, 0)
}

pub fn verify_gybe_components_with(r: &RMatrix, parity_offset: usize) -> VerificationReport {
    let mut b = ReportBuilder::new(
        "ybe.components",
        "R^{ij}_{ab}(z/w) R^{ak}_{pc}(z) R^{bc}_{qr}(w) (-1)^{(P(a)-P(p))P(b)} = (-1)^{P(e)(P(f)-P(r))} R^{jk}_{ef}(w) R^{if}_{dr}(z) R^{de}_{pq}(z/w)",
    );
    b.note(
        "parity",
        if parity_offset == 0 { "P(1)=0, P(2)=1" } else { "P(1)=1, P(2)=0" },
    );
    match gybe_component_pattern(r, parity_offset) {
        Ok(pattern) => {
            for (k, d) in pattern.into_iter().enumerate() {
                match d {
                    None => b.zero(),
                    Some(d) => {
                        let terms = d.numer().len();
                        b.residue(triple_label(k / 8, k % 8), d.to_string(), terms)
                    }
                }
            }
        }
        Err(e) => b.residue("substitution", e.to_string(), 0),
    }
    b.finish()
}

/// `R21(z)` by the ordinary index flip `R21^{kl}_{ij} = R^{lk}_{ji}`.
pub fn flip(m: &Matrix) -> Matrix {
    let sw = |x: usize| ((x & 1) << 1) | (x >> 1);
    Matrix::from_fn(2, |r, c| m.get(sw(r), sw(c)).clone())
}

/// `P_s R P_s` with the super-permutation.
pub fn super_flip(m: &Matrix) -> Matrix {
    let ps: Matrix = super_permutation();
    ps.mul(m).mul(&ps)
}

fn unitarity_residues(r: &RMatrix, super_variant: bool) -> Result<Vec<(String, RatFunc)>, ScalarError> {
    let z = RatFunc::var(Symbol::Z);
    let a = r.at(&z)?;
    let b = r.at(&z.inv())?;
    let b21 = if super_variant { super_flip(&b) } else { flip(&b) };
    let prod = a.mul(&b21);
    let mut out = Vec::new();
    for row in 0..4 {
        for col in 0..4 {
            let want = if row == col { RatFunc::one() } else { RatFunc::zero() };
            let d = prod.get(row, col) - &want;
            if !d.is_zero() {
                out.push((entry_label(row, col), d));
            }
        }
    }
    Ok(out)
}

/// Rational values for `(p, q, z)` avoiding `pq ∈ {0, 1}` and vanishing denominators.
pub fn random_points(seed: u64, count: usize) -> Vec<[(Symbol, RatFunc); 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let frac = |rng: &mut ChaCha8Rng| {
        let n: i64 = rng.gen_range(1..=40) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let d: i64 = rng.gen_range(1..=40);
        RatFunc::ratio(n, d).expect("nonzero denominator")
    };
    while out.len() < count {
        let (pv, qv, zv) = (frac(&mut rng), frac(&mut rng), frac(&mut rng));
        let pq = &pv * &qv;
        if pq.is_one() || zv.is_one() {
            continue;
        }
        let den = |u: &RatFunc| &(u * &qv) - &pv.inv();
        if den(&zv).is_zero() || den(&zv.inv()).is_zero() {
            continue;
        }
        out.push([(Symbol::P, pv), (Symbol::Q, qv), (Symbol::Z, zv)]);
    }
    out
}

pub fn verify_unitarity(r: &RMatrix) -> VerificationReport {
    let mut b = ReportBuilder::new("unitarity", "R12(z) R21(z^-1) = 1");
    b.note("r21", "ordinary index flip R21^{kl}_{ij} = R^{lk}_{ji}");
    match unitarity_residues(r, false) {
        Ok(res) if res.is_empty() => {
            for _ in 0..16 {
                b.zero();
            }
        }
        Ok(res) => {
            for (loc, d) in res {
                let n = d.numer().len();
                b.residue(loc, d.to_string(), n);
            }
        }
        Err(e) => b.residue("substitution", e.to_string(), 0),
    }
    let super_verdict = match unitarity_residues(r, true) {
        Ok(res) if res.is_empty() => "holds".to_string(),
        Ok(res) => format!("fails at {} entries", res.len()),
        Err(e) => format!("error: {e}"),
    };
    b.note("super_flip_variant", super_verdict);
    let points = random_points(0x5eed, 10);
    let mut bad = 0;
    for (k, pt) in points.iter().enumerate() {
        let ok = r
            .specialize(&pt[..2])
            .and_then(|s| {
                let z = pt[2].1.clone();
                let a = s.at(&z)?;
                let b21 = flip(&s.at(&z.inv())?);
                Ok(a.mul(&b21) == Matrix::identity(2))
            })
            .unwrap_or(false);
        if ok {
            b.zero();
        } else {
            bad += 1;
            let label = pt.iter().map(|(s, v)| format!("{s}={v}")).collect::<Vec<_>>().join(",");
            b.residue(format!("point {k} ({label})"), "R12 R21 != 1", 0);
        }
    }
    b.note("numeric_points", format!("{} of {} specializations hold", points.len() - bad, points.len()));
    b.finish()
}

/// `R(1)` against the super-permutation.
pub fn verify_r_at_one(r: &RMatrix) -> VerificationReport {
    let mut b = ReportBuilder::new("r-at-one", "R(1) = P (super-permutation)");
    let ps: Matrix = super_permutation();
    match r.at(&RatFunc::one()) {
        Ok(m) => {
            for row in 0..4 {
                for col in 0..4 {
                    let d = m.get(row, col) - ps.get(row, col);
                    if d.is_zero() {
                        b.zero();
                    } else {
                        let n = d.numer().len();
                        b.residue(entry_label(row, col), d.to_string(), n);
                    }
                }
            }
        }
        Err(e) => b.residue("substitution", e.to_string(), 0),
    }
    b.finish()
}

/// The R-matrix is even: nonzero entries only between composite indices of equal parity.
pub fn is_even(m: &Matrix) -> bool {
    m.nonzero()
        .all(|(r, c, _)| composite_parity(r) == composite_parity(c))
}

/// Random sign flips and entry swaps.
pub fn random_mutations(seed: u64, count: usize) -> Vec<Mutation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let support: Vec<(usize, usize)> = numerators().iter().map(|(r, c, _, _)| (*r, *c)).collect();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = *support.choose(&mut rng).expect("nonempty");
        if rng.gen_bool(0.5) {
            out.push(Mutation::Flip(a.0, a.1));
        } else {
            let b = (rng.gen_range(0..4), rng.gen_range(0..4));
            if a != b {
                out.push(Mutation::Swap(a, b));
            }
        }
    }
    out
}

/// Verdicts of both printed forms over random mutations: `(mutation, matrix ok, components ok,
/// entrywise patterns equal)`.
pub fn cross_validate(seed: u64, count: usize) -> Vec<(Mutation, bool, bool, bool)> {
    let base = RMatrix::standard();
    random_mutations(seed, count)
        .into_iter()
        .map(|m| {
            let r = base.mutate(m);
            let a = gybe_matrix_pattern(&r).unwrap_or_default();
            let b = gybe_component_pattern(&r, 0).unwrap_or_default();
            let ok_a = a.len() == 64 && a.iter().all(Option::is_none);
            let ok_b = b.len() == 64 && b.iter().all(Option::is_none);
            let same = a.len() == b.len()
                && a.iter().zip(&b).all(|(x, y)| x.is_none() == y.is_none());
            (m, ok_a, ok_b, same)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> RatFunc {
        s.parse().unwrap()
    }

    #[test]
    fn printed_entries() {
        let r = build_r(Symbol::Z);
        assert_eq!(r.get(3, 3), &parse("-(q - z*p^-1)/(z*q - p^-1)"));
        assert_eq!(r.get(1, 2), &parse("z*(q - p^-1)/(z*q - p^-1)"));
        assert_eq!(r.get(0, 0), &RatFunc::one());
        assert_eq!(r.nonzero().count(), 6);
        assert!(is_even(&r));
    }

    #[test]
    fn entry_at_rational_point() {
        let r = build_r(Symbol::Z);
        let v = r
            .get(1, 1)
            .eval(&[
                (Symbol::P, RatFunc::int(2)),
                (Symbol::Q, RatFunc::int(3)),
                (Symbol::Z, RatFunc::int(5)),
            ])
            .unwrap();
        assert_eq!(v, RatFunc::ratio(12, 29).unwrap());
    }

    #[test]
    fn r_at_one_is_super_permutation() {
        assert!(verify_r_at_one(&RMatrix::standard()).passed());
        let ps: Matrix = super_permutation();
        assert_eq!(RMatrix::standard().at(&RatFunc::one()).unwrap(), ps);
    }

    #[test]
    fn ybe_both_forms() {
        let r = RMatrix::standard();
        let m = verify_gybe_matrix(&r);
        assert!(m.passed(), "{m:?}");
        assert_eq!(m.tally.zero, 64);
        assert!(verify_gybe_components(&r).passed());
        assert!(verify_gybe_matrix(&RMatrix::identity()).passed());
    }

    #[test]
    fn corner_sign_mutation_fails() {
        let r = RMatrix::standard().mutate(Mutation::Flip(3, 3));
        let rep = verify_gybe_matrix(&r);
        assert!(!rep.passed());
        assert!(!rep.residues.is_empty());
        assert!(!verify_gybe_components(&r).passed());
    }

    #[test]
    fn swapped_parity_fails_components() {
        assert!(!verify_gybe_components_with(&RMatrix::standard(), 1).passed());
    }

    #[test]
    fn unitarity() {
        let rep = verify_unitarity(&RMatrix::standard());
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn unitarity_middle_entry() {
        let z = RatFunc::var(Symbol::Z);
        let r = RMatrix::standard();
        let prod = r.at(&z).unwrap().mul(&flip(&r.at(&z.inv()).unwrap()));
        assert!(prod.get(1, 1).is_one());
        assert!(prod.get(1, 2).is_zero());
    }

    #[test]
    fn equal_parameters_stay_regular() {
        let r = RMatrix::standard()
            .specialize(&[(Symbol::P, RatFunc::var(Symbol::Q))])
            .unwrap();
        let m = r.at(&RatFunc::var(Symbol::Z)).unwrap();
        let den = parse("z*q - q^-1");
        for (_, _, v) in m.nonzero() {
            assert!((v * &den).is_poly(), "{v}");
        }
    }
}
