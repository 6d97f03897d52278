//! Quadratic mode relations from the RLL equations.

use std::fmt;
use std::io::{BufRead, Write};

use rayon::prelude::*;
use superrll_scalar::{RatFunc, Symbol};

use crate::algebra::{AlgebraElement, Sign};
use crate::error::EngineError;
use crate::linear::parity;
use crate::rmatrix::numerators;

/// Which pair of generating matrices a relation comes from.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sector {
    PlusPlus,
    MinusMinus,
    Mixed,
}

impl Sector {
    pub const ALL: [Sector; 3] = [Sector::PlusPlus, Sector::MinusMinus, Sector::Mixed];

    pub fn signs(self) -> (Sign, Sign) {
        match self {
            Sector::PlusPlus => (Sign::Plus, Sign::Plus),
            Sector::MinusMinus => (Sign::Minus, Sign::Minus),
            Sector::Mixed => (Sign::Plus, Sign::Minus),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Sector::PlusPlus => "++",
            Sector::MinusMinus => "--",
            Sector::Mixed => "+-",
        }
    }

    pub fn parse(s: &str) -> Option<Sector> {
        Sector::ALL.into_iter().find(|t| t.tag() == s)
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// One emitted relation `element ≡ 0` and where it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub element: AlgebraElement,
    pub sector: Sector,
    /// Matrix component `(i, k, j, l)`, 0-based: row `(ik)`, column `(jl)`.
    pub component: [usize; 4],
    pub z_exp: i64,
    pub w_exp: i64,
}

impl Relation {
    pub fn provenance(&self) -> String {
        let [i, k, j, l] = self.component;
        format!(
            "sector={} component=({}{},{}{}) z^{} w^{} expansion=toward-zero",
            self.sector,
            i + 1,
            k + 1,
            j + 1,
            l + 1,
            self.z_exp,
            self.w_exp
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationSet {
    pub truncation: u32,
    pub gamma: Symbol,
    pub relations: Vec<Relation>,
}

impl RelationSet {
    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = &AlgebraElement> {
        self.relations.iter().map(|r| &r.element)
    }
}

/// Coefficients of `R(alpha u)` expanded toward `u → 0`, at order `u^s`, as sparse
/// `(row, col, value)` entries.
pub fn r_expansion(alpha: &RatFunc, s: u32) -> Vec<(usize, usize, RatFunc)> {
    // 1/(alpha u q - p^-1) = -p sum_s (p q alpha u)^s
    let p = RatFunc::var(Symbol::P);
    let ratio = &(&p * &RatFunc::var(Symbol::Q)) * alpha;
    let geo = |t: u32| -&(&p * &ratio.pow(t as i32));
    let mut out = Vec::new();
    for (r, c, c0, c1) in numerators() {
        let mut v = &c0 * &geo(s);
        if s >= 1 {
            v = &v + &(&(&c1 * alpha) * &geo(s - 1));
        }
        if !v.is_zero() {
            out.push((r, c, v));
        }
    }
    out
}

fn entry(m: &[(usize, usize, RatFunc)], r: usize, c: usize) -> Option<&RatFunc> {
    m.iter().find(|(a, b, _)| *a == r && *b == c).map(|(_, _, v)| v)
}

fn sgn(e: u32) -> RatFunc {
    RatFunc::int(if e % 2 == 0 { 1 } else { -1 })
}

/// Coefficient of `z^z_exp w^w_exp` in component `(ik),(jl)` of
/// `R(α_L z/w) L1(z) η L2(w) η − η L2(w) η L1(z) R(α_R z/w)` with both prefactors
/// expanded toward `z/w → 0`.
#[allow(clippy::too_many_arguments)]
fn component(
    sector: Sector,
    c: [usize; 4],
    alpha_l: &RatFunc,
    alpha_r: &RatFunc,
    z_exp: i64,
    w_exp: i64,
    n: u32,
) -> AlgebraElement {
    let (s1, s2) = sector.signs();
    let [i, k, j, l] = c;
    let mut out = AlgebraElement::zero();
    let smax = (z_exp.abs() + w_exp.abs() + 1) as u32;
    for s in 0..=smax {
        let m = (z_exp - s as i64) * s1.unit();
        let nn = (w_exp + s as i64) * s2.unit();
        if m < 0 || nn < 0 || m > n as i64 || nn > n as i64 {
            continue;
        }
        let (m, nn) = (m as u32, nn as u32);
        let left = r_expansion(alpha_l, s);
        let right = r_expansion(alpha_r, s);
        for a in 0..2 {
            for b in 0..2 {
                if let Some(v) = entry(&left, 2 * i + k, 2 * a + b) {
                    let sign = sgn(parity(j) * (parity(b) + parity(l)));
                    let word = AlgebraElement::generator(s1, a, j, m)
                        .mul(&AlgebraElement::generator(s2, b, l, nn));
                    out.add_scaled(&word, &(v * &sign));
                }
                if let Some(v) = entry(&right, 2 * a + b, 2 * j + l) {
                    let sign = sgn(parity(i) * (parity(k) + parity(b)));
                    let word = AlgebraElement::generator(s2, k, b, nn)
                        .mul(&AlgebraElement::generator(s1, i, a, m));
                    out.add_scaled(&word, &-&(v * &sign));
                }
            }
        }
    }
    out
}

/// Coefficient positions `(z_exp, w_exp)` visited for a sector at truncation `n`.
fn positions(sector: Sector, n: u32) -> Vec<(i64, i64)> {
    let n = n as i64;
    let mut out = Vec::new();
    match sector {
        Sector::PlusPlus => {
            for d in 0..=n {
                for a in 0..=d + 1 {
                    out.push((a, d - a));
                }
            }
        }
        Sector::MinusMinus => {
            for d in 0..=n {
                for a in -d..=1 {
                    out.push((a, -d - a));
                }
            }
        }
        Sector::Mixed => {
            for a in 0..=n {
                for b in 0..=n {
                    out.push((a, -b));
                }
            }
        }
    }
    out
}

/// Relations of one sector at truncation `n`, with central symbol `gamma`.
pub fn expand_rll(sector: Sector, n: u32, gamma: Symbol) -> Vec<Relation> {
    let (alpha_l, alpha_r) = match sector {
        Sector::Mixed => (RatFunc::var_pow(gamma, -2), RatFunc::var_pow(gamma, 2)),
        _ => (RatFunc::one(), RatFunc::one()),
    };
    let mut comps = Vec::new();
    for (z, w) in positions(sector, n) {
        for code in 0..16usize {
            comps.push((z, w, [code >> 3 & 1, code >> 2 & 1, code >> 1 & 1, code & 1]));
        }
    }
    comps
        .par_iter()
        .filter_map(|&(z, w, c)| {
            let e = component(sector, c, &alpha_l, &alpha_r, z, w, n);
            (!e.is_zero()).then_some(Relation {
                element: e,
                sector,
                component: c,
                z_exp: z,
                w_exp: w,
            })
        })
        .collect()
}

/// All three sectors.
pub fn relation_set(n: u32, gamma: Symbol) -> RelationSet {
    relation_set_for(&Sector::ALL, n, gamma)
}

pub fn relation_set_for(sectors: &[Sector], n: u32, gamma: Symbol) -> RelationSet {
    let mut relations = Vec::new();
    for &s in sectors {
        relations.extend(expand_rll(s, n, gamma));
    }
    RelationSet {
        truncation: n,
        gamma,
        relations,
    }
}

const DUMP_HEADER: &str = "# mode relations, one per line: element ≡ 0  # provenance";

/// Writes the line-oriented relation dump.
pub fn write_dump(set: &RelationSet, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "{DUMP_HEADER}")?;
    writeln!(out, "# truncation={} gamma={}", set.truncation, set.gamma)?;
    for r in &set.relations {
        writeln!(out, "{}  # {}", r.element, r.provenance())?;
    }
    Ok(())
}

pub fn dump_string(set: &RelationSet) -> String {
    let mut buf = Vec::new();
    write_dump(set, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("dump is utf-8")
}

/// Parses one relation line into its element and provenance text.
pub fn parse_dump_line(line: &str, number: usize) -> Result<(AlgebraElement, String), EngineError> {
    let (body, prov) = line.split_once("  # ").ok_or(EngineError::Parse {
        line: number,
        msg: "missing provenance".into(),
    })?;
    let element = body.parse::<AlgebraElement>().map_err(|e| match e {
        EngineError::Parse { msg, .. } => EngineError::Parse { line: number, msg },
        other => other,
    })?;
    Ok((element, prov.to_string()))
}

/// Reads a dump back, skipping comment lines.
pub fn read_dump(input: impl BufRead) -> Result<Vec<(AlgebraElement, String)>, EngineError> {
    let mut out = Vec::new();
    for (k, line) in input.lines().enumerate() {
        let line = line.map_err(|e| EngineError::Parse {
            line: k + 1,
            msg: e.to_string(),
        })?;
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        out.push(parse_dump_line(&line, k + 1)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Letter;
    use superrll_scalar::{Direction, Expander};

    #[test]
    fn expansion_matches_series_oracle() {
        let u = RatFunc::var(Symbol::U);
        let alpha = RatFunc::var_pow(Symbol::GAMMA, -2);
        let r = crate::rmatrix::build_r(Symbol::U);
        for (row, col, _, _) in numerators() {
            let f = r.get(row, col).subs(Symbol::U, &(&u * &alpha)).unwrap();
            let mut ex = Expander::new(&f, Symbol::U, Direction::TowardZero).unwrap();
            for s in 0..5 {
                let want = ex.coeff(s as i64).unwrap();
                let got = entry(&r_expansion(&alpha, s), row, col).cloned().unwrap_or_default();
                assert_eq!(got, want, "entry ({row},{col}) order {s}");
            }
        }
    }

    #[test]
    fn leading_order_is_r_at_zero() {
        // R(0) = [[1,0,0,0],[0,q,0,0],[0,1-pq,p,0],[0,0,0,pq]]
        let m = r_expansion(&RatFunc::one(), 0);
        let get = |r, c| entry(&m, r, c).cloned().unwrap_or_default();
        let p = RatFunc::var(Symbol::P);
        let q = RatFunc::var(Symbol::Q);
        assert!(get(0, 0).is_one());
        assert_eq!(get(1, 1), q);
        assert_eq!(get(2, 1), &RatFunc::one() - &(&p * &q));
        assert_eq!(get(2, 2), p);
        assert_eq!(get(3, 3), &p * &q);
        assert!(get(1, 2).is_zero());
    }

    #[test]
    fn relations_are_homogeneous() {
        let set = relation_set(2, Symbol::GAMMA);
        assert!(!set.is_empty());
        for r in &set.relations {
            assert!(r.element.parity().is_some(), "{}", r.provenance());
            let grades: std::collections::BTreeSet<_> = r.element.words().map(|w| w.grade()).collect();
            assert_eq!(grades.len(), 1, "{}", r.provenance());
            assert!(r.element.words().all(|w| w.len() == 2));
        }
    }

    #[test]
    fn diagonal_component_is_commutator() {
        // component (11,11) at z^a w^b only involves l11 modes
        let rels = expand_rll(Sector::PlusPlus, 1, Symbol::GAMMA);
        let l11 = |w: &crate::algebra::Word| w.letters().iter().all(|l: &Letter| l.row() == 0 && l.col() == 0);
        for r in rels.iter().filter(|r| r.component == [0, 0, 0, 0]) {
            assert!(r.element.words().all(l11));
        }
    }

    #[test]
    fn dump_roundtrip() {
        let set = relation_set(1, Symbol::GAMMA);
        let text = dump_string(&set);
        let back = read_dump(text.as_bytes()).unwrap();
        assert_eq!(back.len(), set.len());
        for ((e, prov), r) in back.iter().zip(&set.relations) {
            assert_eq!(e, &r.element);
            assert_eq!(prov, &r.provenance());
        }
        assert_eq!(dump_string(&set), text);
        let empty = relation_set_for(&[], 0, Symbol::GAMMA);
        assert_eq!(dump_string(&empty).lines().count(), 2);
    }
}
