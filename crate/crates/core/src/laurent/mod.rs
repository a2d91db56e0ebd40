//! Sparse multivariate Laurent polynomials over the integers.

mod kronecker;
mod text;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use malachite::num::arithmetic::traits::DivRem;
use malachite::num::basic::traits::{One, Zero};
use malachite::Integer;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("variable count mismatch ({0} vs {1})")]
    VarCountMismatch(usize, usize),
    #[error("division is not exact")]
    NonExactDivision,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("substitution does not produce a Laurent polynomial")]
    NonLaurentResult,
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Exponent vector of a Laurent monomial, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<i64>);

impl Monomial {
    pub fn new(exponents: Vec<i64>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn shifted(&self, by: &[i64]) -> Monomial {
        Monomial(self.0.iter().zip(by).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A Laurent polynomial in `nvars` variables with nonzero integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Integer>,
}

// Coefficient-product count at which multiplication switches from schoolbook to packed.
const DENSE_THRESHOLD: usize = 4096;

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Integer::ONE)
    }

    pub fn constant(nvars: usize, c: Integer) -> Self {
        Self::monomial(nvars, Monomial::one(nvars), c)
    }

    /// The variable `x_{i+1}` (indices are 0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range");
        Self::monomial(nvars, Monomial::var(nvars, i), Integer::ONE)
    }

    pub fn monomial(nvars: usize, m: Monomial, c: Integer) -> Self {
        assert_eq!(m.0.len(), nvars, "monomial length");
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(m, c);
        }
        LaurentPoly { nvars, terms }
    }

    /// `x^e` for an exponent vector `e`.
    pub fn x_pow(e: &[i64]) -> Self {
        Self::monomial(e.len(), Monomial::new(e.to_vec()), Integer::ONE)
    }

    /// Builds a polynomial from possibly repeated terms, summing duplicates.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<i64>, Integer)>,
    {
        let mut map: BTreeMap<Monomial, Integer> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "monomial length");
            *map.entry(Monomial(e)).or_insert(Integer::ZERO) += c;
        }
        map.retain(|_, c| *c != 0);
        LaurentPoly { nvars, terms: map }
    }

    pub(crate) fn from_map(nvars: usize, terms: BTreeMap<Monomial, Integer>) -> Self {
        debug_assert!(terms.values().all(|c| *c != 0));
        LaurentPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && *c == 1)
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &Integer)> + '_ {
        self.terms.iter().map(|(m, c)| (m.exponents(), c))
    }

    pub fn coeff(&self, e: &[i64]) -> Integer {
        self.terms
            .get(&Monomial(e.to_vec()))
            .cloned()
            .unwrap_or(Integer::ZERO)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Componentwise minimum exponents; `None` for the zero polynomial.
    pub fn min_exponents(&self) -> Option<Vec<i64>> {
        self.fold_exponents(i64::min)
    }

    /// Componentwise maximum exponents; `None` for the zero polynomial.
    pub fn max_exponents(&self) -> Option<Vec<i64>> {
        self.fold_exponents(i64::max)
    }

    fn fold_exponents(&self, f: fn(i64, i64) -> i64) -> Option<Vec<i64>> {
        let mut it = self.terms.keys();
        let mut acc = it.next()?.0.clone();
        for m in it {
            for (a, &e) in acc.iter_mut().zip(&m.0) {
                *a = f(*a, e);
            }
        }
        Some(acc)
    }

    /// Negated minimum exponent of each variable.
    pub fn d_vector(&self) -> Vec<i64> {
        self.min_exponents()
            .expect("d-vector of the zero polynomial")
            .into_iter()
            .map(|e| -e)
            .collect()
    }

    /// Multiplies by `c * x^shift`.
    pub fn mul_term(&self, shift: &[i64], c: &Integer) -> LaurentPoly {
        if *c == 0 {
            return LaurentPoly::zero(self.nvars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (m.shifted(shift), a * c))
            .collect();
        LaurentPoly::from_map(self.nvars, terms)
    }

    fn check_vars(&self, other: &LaurentPoly) -> Result<(), LaurentError> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(LaurentError::VarCountMismatch(self.nvars, other.nvars))
        }
    }

    pub fn try_add(&self, other: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.check_vars(other)?;
        Ok(self.combine(other, false))
    }

    pub fn try_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.check_vars(other)?;
        Ok(self.combine(other, true))
    }

    pub fn try_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.check_vars(other)?;
        Ok(self.product(other))
    }

    fn combine(&self, other: &LaurentPoly, negate: bool) -> LaurentPoly {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            match terms.get_mut(m) {
                Some(a) => {
                    if negate {
                        *a -= c;
                    } else {
                        *a += c;
                    }
                    if *a == 0 {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(m.clone(), if negate { -c } else { c.clone() });
                }
            }
        }
        LaurentPoly::from_map(self.nvars, terms)
    }

    fn product(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || other.is_zero() {
            return LaurentPoly::zero(self.nvars);
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            return other.mul_term(&m.0, c);
        }
        if other.terms.len() == 1 {
            let (m, c) = other.terms.iter().next().unwrap();
            return self.mul_term(&m.0, c);
        }
        if self.terms.len().saturating_mul(other.terms.len()) >= DENSE_THRESHOLD {
            if let Some(p) = kronecker::mul(self, other) {
                return p;
            }
        }
        self.schoolbook_mul(other)
    }

    fn schoolbook_mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut acc: HashMap<Vec<i64>, Integer> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let e: Vec<i64> = ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert(Integer::ZERO) += ca * cb;
            }
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(e, c)| (Monomial(e), c))
            .collect();
        LaurentPoly::from_map(self.nvars, terms)
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        let mut result = LaurentPoly::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.product(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.product(&base);
            }
        }
        result
    }

    /// Returns `q` with `q * g == self`, or `NonExactDivision`.
    pub fn exact_div(&self, g: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.check_vars(g)?;
        if g.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero(self.nvars));
        }
        if g.terms.len() == 1 {
            let (m, c) = g.terms.iter().next().unwrap();
            let shift: Vec<i64> = m.0.iter().map(|e| -e).collect();
            let mut terms = BTreeMap::new();
            for (mf, cf) in &self.terms {
                let (q, r) = cf.div_rem(c);
                if r != 0 {
                    return Err(LaurentError::NonExactDivision);
                }
                terms.insert(mf.shifted(&shift), q);
            }
            return Ok(LaurentPoly::from_map(self.nvars, terms));
        }
        let (fmin, fmax) = (self.min_exponents().unwrap(), self.max_exponents().unwrap());
        let (gmin, gmax) = (g.min_exponents().unwrap(), g.max_exponents().unwrap());
        for v in 0..self.nvars {
            if fmax[v] - fmin[v] < gmax[v] - gmin[v] {
                return Err(LaurentError::NonExactDivision);
            }
        }
        if self.terms.len() >= 64 && g.terms.len() >= 8 {
            if let Some(res) = kronecker::div_exact(self, g) {
                return res;
            }
        }
        self.elimination_div(g, &fmin, &gmin)
    }

    /// Leading-term elimination on the polynomials `self * x^-fmin` and `g * x^-gmin`.
    fn elimination_div(
        &self,
        g: &LaurentPoly,
        fmin: &[i64],
        gmin: &[i64],
    ) -> Result<LaurentPoly, LaurentError> {
        let neg = |v: &[i64]| v.iter().map(|e| -e).collect::<Vec<_>>();
        let g0: Vec<(Monomial, Integer)> = g
            .terms
            .iter()
            .map(|(m, c)| (m.shifted(&neg(gmin)), c.clone()))
            .collect();
        let (lm, lc) = g0.last().cloned().unwrap();
        let mut rem: BTreeMap<Monomial, Integer> = self
            .terms
            .iter()
            .map(|(m, c)| (m.shifted(&neg(fmin)), c.clone()))
            .collect();
        let mut quot: BTreeMap<Monomial, Integer> = BTreeMap::new();
        while let Some((m, c)) = rem.last_key_value() {
            if m.0.iter().zip(&lm.0).any(|(a, b)| a < b) {
                return Err(LaurentError::NonExactDivision);
            }
            let (q, r) = c.div_rem(&lc);
            if r != 0 {
                return Err(LaurentError::NonExactDivision);
            }
            let qm = Monomial(m.0.iter().zip(&lm.0).map(|(a, b)| a - b).collect());
            for (gm, gc) in &g0 {
                let key = gm.shifted(&qm.0);
                let delta = &q * gc;
                match rem.get_mut(&key) {
                    Some(a) => {
                        *a -= delta;
                        if *a == 0 {
                            rem.remove(&key);
                        }
                    }
                    None => {
                        rem.insert(key, -delta);
                    }
                }
            }
            quot.insert(qm, q);
        }
        let shift: Vec<i64> = fmin.iter().zip(gmin).map(|(a, b)| a - b).collect();
        let terms = quot.into_iter().map(|(m, c)| (m.shifted(&shift), c)).collect();
        Ok(LaurentPoly::from_map(self.nvars, terms))
    }

    /// Replaces each variable `v` in `subs` by `num / den` simultaneously.
    pub fn subst_frac(
        &self,
        subs: &BTreeMap<usize, (LaurentPoly, LaurentPoly)>,
    ) -> Result<LaurentPoly, LaurentError> {
        for (num, den) in subs.values() {
            self.check_vars(num)?;
            self.check_vars(den)?;
            if den.is_zero() {
                return Err(LaurentError::DivisionByZero);
            }
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let vars: Vec<usize> = subs.keys().copied().collect();
        let (lo, hi) = (self.min_exponents().unwrap(), self.max_exponents().unwrap());

        let mut groups: BTreeMap<Vec<i64>, Vec<(Vec<i64>, Integer)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key: Vec<i64> = vars.iter().map(|&v| m.0[v]).collect();
            let mut rest = m.0.clone();
            for &v in &vars {
                rest[v] = 0;
            }
            groups.entry(key).or_default().push((rest, c.clone()));
        }

        let mut num_pows: Vec<Vec<LaurentPoly>> = Vec::new();
        let mut den_pows: Vec<Vec<LaurentPoly>> = Vec::new();
        for &v in &vars {
            let (num, den) = &subs[&v];
            let span = (hi[v] - lo[v]) as usize;
            num_pows.push(power_table(num, span));
            den_pows.push(power_table(den, span));
        }

        let mut acc = LaurentPoly::zero(self.nvars);
        for (key, rest) in groups {
            let mut part = LaurentPoly::from_terms(self.nvars, rest);
            for (idx, &v) in vars.iter().enumerate() {
                let e = key[idx];
                part = part.product(&num_pows[idx][(e - lo[v]) as usize]);
                part = part.product(&den_pows[idx][(hi[v] - e) as usize]);
            }
            acc = acc.combine(&part, false);
        }

        for &v in &vars {
            let (num, den) = &subs[&v];
            if lo[v] > 0 {
                acc = acc.product(&num.pow(lo[v] as u32));
            }
            if hi[v] < 0 {
                acc = acc.product(&den.pow((-hi[v]) as u32));
            }
            if lo[v] < 0 {
                if num.is_zero() {
                    return Err(LaurentError::NonLaurentResult);
                }
                acc = acc
                    .exact_div(&num.pow((-lo[v]) as u32))
                    .map_err(|_| LaurentError::NonLaurentResult)?;
            }
            if hi[v] > 0 {
                acc = acc
                    .exact_div(&den.pow(hi[v] as u32))
                    .map_err(|_| LaurentError::NonLaurentResult)?;
            }
        }
        Ok(acc)
    }

    /// Reads a polynomial in the canonical grammar, with `nvars` variables.
    pub fn parse(s: &str, nvars: usize) -> Result<LaurentPoly, LaurentError> {
        text::parse(s, nvars)
    }

    /// Canonical rendering using `prefix` as the variable letter.
    pub fn to_string_with(&self, prefix: char) -> String {
        text::render(self, prefix)
    }
}

fn power_table(p: &LaurentPoly, up_to: usize) -> Vec<LaurentPoly> {
    let mut out = Vec::with_capacity(up_to + 1);
    out.push(LaurentPoly::one(p.nvars));
    for k in 1..=up_to {
        let next = out[k - 1].product(p);
        out.push(next);
    }
    out
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::render(self, 'x'))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_add(rhs).expect("LaurentPoly addition")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_sub(rhs).expect("LaurentPoly subtraction")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_mul(rhs).expect("LaurentPoly multiplication")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        LaurentPoly::from_map(self.nvars, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> LaurentPoly {
        LaurentPoly::parse(s, n).unwrap()
    }

    #[test]
    fn graded_lex_order() {
        let a = Monomial::new(vec![-1, 0]);
        let b = Monomial::new(vec![-1, 3]);
        let c = Monomial::new(vec![0, 2]);
        assert!(a < b);
        assert!(b < c);
        assert!(a < c);
    }

    #[test]
    fn schoolbook_and_packed_products_agree() {
        let f = p("1 + x1 + x2^3", 2).pow(12);
        let g = p("x1^-2 + 3*x2 - x1*x2^-1", 2).pow(9);
        assert!(f.len() * g.len() >= DENSE_THRESHOLD);
        let packed = kronecker::mul(&f, &g).unwrap();
        assert_eq!(packed, f.schoolbook_mul(&g));
    }

    #[test]
    fn packed_division_round_trips() {
        let f = p("2 + x1^3 + x2^2 - 5*x1*x2", 2).pow(10);
        let g = p("1 + x1^-1*x2^4 - 7*x2", 2).pow(6);
        let fg = f.schoolbook_mul(&g);
        assert_eq!(kronecker::div_exact(&fg, &g).unwrap().unwrap(), f);
        let bumped = &fg + &LaurentPoly::one(2);
        assert_eq!(
            bumped.exact_div(&g),
            Err(LaurentError::NonExactDivision)
        );
    }

    #[test]
    fn elimination_rejects_inexact() {
        let f = p("x1^2 + x2^6 + 1 + 2*x2^3", 2);
        let g = p("1 + x2^3", 2);
        assert_eq!(f.exact_div(&g), Err(LaurentError::NonExactDivision));
    }
}
