//! F-polynomials and Caldero–Chapoton functions of locally free modules,
//! computed symbolically through sink and source reflections.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use malachite::num::basic::traits::Zero;
use malachite::Integer;
use thiserror::Error;

use crate::cartan::{CartanData, CartanError, IndexSequence, RankVector};
use crate::laurent::LaurentPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CcError {
    #[error("vertex {k} is not a {} of the current orientation", if *.dir == Direction::Plus { "sink" } else { "source" })]
    NotSinkOrSource { k: usize, dir: Direction },
    #[error("F-polynomial substitution left the polynomial ring")]
    NonLaurentResult,
    #[error("exponent mismatch at support point {0}")]
    ExponentMismatch(RankVector),
    #[error("sequence {0} is not admissible")]
    NotAdmissible(IndexSequence),
    #[error("reflection produced the negative rank vector {0}")]
    NegativeRank(RankVector),
    #[error("F-polynomial invariant violated: {0}")]
    InvariantViolated(String),
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Cartan(#[from] CartanError),
}

/// Reflection direction: `Plus` at a sink, `Minus` at a source.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Plus,
    Minus,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Plus => "+",
            Direction::Minus => "-",
        })
    }
}

/// A polynomial in `y_1, …, y_n` (nonnegative exponents).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FPoly(LaurentPoly);

impl FPoly {
    pub fn new(p: LaurentPoly) -> Option<FPoly> {
        let ok = p.terms().all(|(e, _)| e.iter().all(|&x| x >= 0));
        ok.then_some(FPoly(p))
    }

    pub fn poly(&self) -> &LaurentPoly {
        &self.0
    }

    /// The coefficient of `y^r`, i.e. `χ(Gr_lf(r, M))`.
    pub fn coeff(&self, r: &RankVector) -> Integer {
        self.0.coeff(&r.0)
    }

    /// Checks `supp F ⊆ [0, rank]` and unit coefficients at `0` and `rank`.
    pub fn check_box(&self, rank: &RankVector) -> Result<(), CcError> {
        for (e, _) in self.0.terms() {
            if e.iter().zip(&rank.0).any(|(a, m)| a < &0 || a > m) {
                return Err(CcError::InvariantViolated(format!(
                    "support point {} outside [0, {rank}]",
                    RankVector(e.to_vec())
                )));
            }
        }
        let zero = RankVector::zero(rank.0.len());
        for corner in [&zero, rank] {
            if self.coeff(corner) != 1 {
                return Err(CcError::InvariantViolated(format!(
                    "coefficient at {corner} is {}",
                    self.coeff(corner)
                )));
            }
        }
        Ok(())
    }

    pub fn is_positive(&self) -> bool {
        self.0.terms().all(|(_, c)| *c > 0)
    }
}

impl fmt::Display for FPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.to_string_with('y'))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    Module { rank: RankVector, f: FPoly },
    InitialVariable(usize),
}

/// A locally free rigid module (or an initial cluster variable) tracked only
/// through its rank vector and F-polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CCSymbol {
    pub cd: CartanData,
    pub kind: SymbolKind,
}

impl CCSymbol {
    pub fn rank(&self) -> Option<&RankVector> {
        match &self.kind {
            SymbolKind::Module { rank, .. } => Some(rank),
            SymbolKind::InitialVariable(_) => None,
        }
    }

    pub fn f_poly(&self) -> Option<&FPoly> {
        match &self.kind {
            SymbolKind::Module { f, .. } => Some(f),
            SymbolKind::InitialVariable(_) => None,
        }
    }
}

/// The symbol of `E_k`: rank `α_k`, `F = 1 + y_k`.
pub fn f_of_e(cd: &CartanData, k: usize) -> CCSymbol {
    let n = cd.n();
    let f = &LaurentPoly::one(n) + &LaurentPoly::var(n, k);
    CCSymbol {
        cd: cd.clone(),
        kind: SymbolKind::Module {
            rank: RankVector::simple(n, k),
            f: FPoly(f),
        },
    }
}

pub fn reflect_symbol(s: &CCSymbol, k: usize, dir: Direction) -> Result<CCSymbol, CcError> {
    let ok = match dir {
        Direction::Plus => s.cd.is_sink(k),
        Direction::Minus => s.cd.is_source(k),
    };
    if k >= s.cd.n() || !ok {
        return Err(CcError::NotSinkOrSource { k, dir });
    }
    let new_cd = s.cd.reflect_orientation(k)?;
    let (rank, f) = match &s.kind {
        SymbolKind::InitialVariable(i) if *i == k => return Ok(f_of_e(&new_cd, k)),
        SymbolKind::InitialVariable(i) => {
            return Ok(CCSymbol {
                cd: new_cd,
                kind: SymbolKind::InitialVariable(*i),
            })
        }
        SymbolKind::Module { rank, f } => (rank, f),
    };
    if rank.simple_index() == Some(k) {
        return Ok(CCSymbol {
            cd: new_cd,
            kind: SymbolKind::InitialVariable(k),
        });
    }
    let new_rank = s.cd.reflect_root(k, rank);
    if !new_rank.is_nonnegative() {
        return Err(CcError::NegativeRank(new_rank));
    }
    let n = s.cd.n();
    let new_f = match dir {
        Direction::Plus => {
            let b: Vec<i64> = (0..n).map(|i| s.cd.b(k, i)).collect();
            let mk = rank.0[k];
            transform(f, k, |r| {
                let sb: i64 = weighted(&b, r, k);
                (mk - r[k], sb - mk)
            })?
        }
        Direction::Minus => {
            let b: Vec<i64> = (0..n).map(|i| new_cd.b(k, i)).collect();
            let mk = new_rank.0[k];
            transform(f, k, |r| {
                let sb: i64 = weighted(&b, r, k);
                (sb - r[k], mk - sb)
            })?
        }
    };
    new_f.check_box(&new_rank)?;
    if !new_f.is_positive() {
        log::warn!("non-positive F-polynomial coefficient after reflecting at {}", k + 1);
    }
    Ok(CCSymbol {
        cd: new_cd,
        kind: SymbolKind::Module {
            rank: new_rank,
            f: new_f,
        },
    })
}

fn weighted(b: &[i64], r: &[i64], k: usize) -> i64 {
    (0..r.len()).filter(|&i| i != k).map(|i| b[i] * r[i]).sum()
}

/// Sends each term `a y^r` to `a y^{r'} t^s (1+t)^e` where `t = y_k`, `r'`
/// is `r` off `k` and `(s, e) = rule(r)`; `e` may only depend on `r'`.
fn transform(
    f: &FPoly,
    k: usize,
    rule: impl Fn(&[i64]) -> (i64, i64),
) -> Result<FPoly, CcError> {
    let n = f.0.nvars();
    let mut groups: HashMap<Vec<i64>, (i64, Vec<(i64, Integer)>)> = HashMap::new();
    for (e, c) in f.0.terms() {
        let (s, pow) = rule(e);
        let mut key = e.to_vec();
        key[k] = 0;
        let entry = groups.entry(key).or_insert((pow, Vec::new()));
        debug_assert_eq!(entry.0, pow);
        entry.1.push((s, c.clone()));
    }
    let mut terms = Vec::new();
    for (key, (pow, parts)) in groups {
        let lo = parts.iter().map(|p| p.0).min().unwrap();
        let hi = parts.iter().map(|p| p.0).max().unwrap();
        let mut dense = vec![Integer::ZERO; (hi - lo + 1) as usize];
        for (s, c) in parts {
            dense[(s - lo) as usize] += c;
        }
        if pow >= 0 {
            for _ in 0..pow {
                mul_one_plus_t(&mut dense);
            }
        } else {
            for _ in 0..-pow {
                if !div_one_plus_t(&mut dense) {
                    return Err(CcError::NonLaurentResult);
                }
            }
        }
        for (idx, c) in dense.into_iter().enumerate() {
            if c == 0 {
                continue;
            }
            let t = lo + idx as i64;
            if t < 0 {
                return Err(CcError::NonLaurentResult);
            }
            let mut e = key.clone();
            e[k] = t;
            terms.push((e, c));
        }
    }
    Ok(FPoly(LaurentPoly::from_terms(n, terms)))
}

fn mul_one_plus_t(a: &mut Vec<Integer>) {
    a.push(Integer::ZERO);
    for j in (1..a.len()).rev() {
        let (lo, hi) = a.split_at_mut(j);
        hi[0] += &lo[j - 1];
    }
}

fn div_one_plus_t(a: &mut Vec<Integer>) -> bool {
    for j in 1..a.len() {
        let (lo, hi) = a.split_at_mut(j);
        hi[0] -= &lo[j - 1];
    }
    match a.pop() {
        Some(r) if r == 0 => {
            if a.is_empty() {
                a.push(Integer::ZERO);
            }
            true
        }
        _ => false,
    }
}

/// `X_M = x^{-m + [-B]_+ m} F_M(ŷ)` with `ŷ_j = ∏_i x_i^{b_ij}`, cross-checked
/// against the exponents `(-⟨r,α_i⟩_H - ⟨α_i, m-r⟩_H) / c_i`.
pub fn cc_from_f(s: &CCSymbol) -> Result<LaurentPoly, CcError> {
    let cd = &s.cd;
    let n = cd.n();
    let (rank, f) = match &s.kind {
        SymbolKind::InitialVariable(i) => return Ok(LaurentPoly::var(n, *i)),
        SymbolKind::Module { rank, f } => (rank, f),
    };
    let m = &rank.0;
    let base: Vec<i64> = (0..n)
        .map(|i| -m[i] + (0..n).map(|j| (-cd.b(i, j)).max(0) * m[j]).sum::<i64>())
        .collect();
    let gram: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| cd.bilinear_form_h(&RankVector::simple(n, i), &RankVector::simple(n, j)))
                .collect()
        })
        .collect();
    let mut terms = Vec::with_capacity(f.0.len());
    for (r, c) in f.0.terms() {
        let e: Vec<i64> = (0..n)
            .map(|i| base[i] + (0..n).map(|j| cd.b(i, j) * r[j]).sum::<i64>())
            .collect();
        for i in 0..n {
            let left: i64 = (0..n).map(|j| r[j] * gram[j][i]).sum();
            let right: i64 = (0..n).map(|j| gram[i][j] * (m[j] - r[j])).sum();
            let num = -left - right;
            if num % cd.d(i) != 0 || num / cd.d(i) != e[i] {
                return Err(CcError::ExponentMismatch(RankVector(r.to_vec())));
            }
        }
        terms.push((e, c.clone()));
    }
    Ok(LaurentPoly::from_terms(n, terms))
}

fn check_rank2(b: i64, c: i64, c1: i64, c2: i64) -> Result<CartanData, CcError> {
    if b < 0 || c < 0 || b * c < 4 {
        return Err(CcError::Domain(format!("need b, c >= 0 and bc >= 4, got ({b},{c})")));
    }
    if c1 * b != c2 * c {
        return Err(CcError::Domain(format!("need c1*b = c2*c, got {c1}*{b} != {c2}*{c}")));
    }
    Ok(CartanData::rank2(b, c, c1, c2)?)
}

/// The symbol of `M(n)` over `H` for `n <= 0` or `n >= 3`.
pub fn rank2_symbol(b: i64, c: i64, c1: i64, c2: i64, n: i64) -> Result<CCSymbol, CcError> {
    let h = check_rank2(b, c, c1, c2)?;
    if n == 1 || n == 2 {
        return Err(CcError::Domain("M(n) is defined for n <= 0 or n >= 3".into()));
    }
    let (steps, dir, start) = if n >= 3 {
        let s = n - 3;
        (s, Direction::Plus, if s % 2 == 0 { 0 } else { 1 })
    } else {
        let s = -n;
        (s, Direction::Minus, if s % 2 == 0 { 1 } else { 0 })
    };
    let mut cd = h;
    if steps % 2 == 1 {
        cd = cd.reflect_orientation(0)?;
    }
    let mut sym = f_of_e(&cd, start);
    for _ in 0..steps {
        sym = reflect_step(&sym, dir)?;
    }
    Ok(sym)
}

/// One rank-2 tower step at whichever vertex is a sink (`Plus`) or source (`Minus`).
fn reflect_step(sym: &CCSymbol, dir: Direction) -> Result<CCSymbol, CcError> {
    let k = (0..2)
        .find(|&k| match dir {
            Direction::Plus => sym.cd.is_sink(k),
            Direction::Minus => sym.cd.is_source(k),
        })
        .expect("rank-2 orientation has a sink and a source");
    reflect_symbol(sym, k, dir)
}

pub fn rank2_cc(b: i64, c: i64, c1: i64, c2: i64, n: i64) -> Result<LaurentPoly, CcError> {
    cc_from_f(&rank2_symbol(b, c, c1, c2, n)?)
}

/// Symbols `M(n)` for every `n` in `lo..=hi` outside `{1, 2}`, sharing the
/// reflection towers: `M(n+2) = F_1^+ F_2^+ M(n)` and `M(-n-2) = F_2^- F_1^- M(-n)`.
pub fn rank2_tower(
    b: i64,
    c: i64,
    c1: i64,
    c2: i64,
    lo: i64,
    hi: i64,
) -> Result<BTreeMap<i64, CCSymbol>, CcError> {
    check_rank2(b, c, c1, c2)?;
    let mut out = BTreeMap::new();
    for (first, dir, step) in [(3, Direction::Plus, 2), (4, Direction::Plus, 2), (0, Direction::Minus, -2), (-1, Direction::Minus, -2)] {
        let mut n = first;
        if !(lo..=hi).contains(&n) {
            continue;
        }
        let mut sym = rank2_symbol(b, c, c1, c2, n)?;
        loop {
            out.insert(n, sym.clone());
            n += step;
            if !(lo..=hi).contains(&n) {
                break;
            }
            sym = reflect_step(&reflect_step(&sym, dir)?, dir)?;
        }
    }
    Ok(out)
}

/// The symbol `F_{i_1}^± ⋯ F_{i_k}^±(E_{i_{k+1}})` of an admissible sequence.
pub fn symbol_of_sequence(cd: &CartanData, seq: &IndexSequence) -> Result<CCSymbol, CcError> {
    if !cd.is_admissible(seq) {
        return Err(CcError::NotAdmissible(seq.clone()));
    }
    let k = seq.0.len() - 1;
    let mut orientations = vec![cd.clone()];
    for &i in &seq.0[..k] {
        let next = orientations.last().unwrap().reflect_orientation(i)?;
        orientations.push(next);
    }
    let mut sym = f_of_e(&orientations[k], seq.0[k]);
    for l in (0..k).rev() {
        let i = seq.0[l];
        let dir = if sym.cd.is_sink(i) {
            Direction::Plus
        } else {
            Direction::Minus
        };
        sym = reflect_symbol(&sym, i, dir)?;
    }
    debug_assert_eq!(sym.cd, *cd);
    Ok(sym)
}

pub fn cc_of_sequence(cd: &CartanData, seq: &IndexSequence) -> Result<LaurentPoly, CcError> {
    cc_from_f(&symbol_of_sequence(cd, seq)?)
}
