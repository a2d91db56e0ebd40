//! Kronecker substitution: polynomials packed into a single big integer with
//! 64-bit aligned balanced digits.

use std::collections::BTreeMap;

use malachite::num::arithmetic::traits::{DivRem, Square};
use malachite::num::basic::traits::Zero;
use malachite::num::logic::traits::SignificantBits;
use malachite::{Integer, Natural};

use super::{LaurentError, LaurentPoly, Monomial};

const MAX_SLOTS: usize = 1 << 26;

struct Layout {
    step: Vec<i64>,
    dims: Vec<usize>,
    strides: Vec<usize>,
    slots: usize,
}

impl Layout {
    fn new(step: Vec<i64>, dims: Vec<usize>) -> Option<Layout> {
        let mut strides = Vec::with_capacity(dims.len());
        let mut slots: usize = 1;
        for &d in &dims {
            strides.push(slots);
            slots = slots.checked_mul(d)?;
        }
        (slots <= MAX_SLOTS).then_some(Layout {
            step,
            dims,
            strides,
            slots,
        })
    }

    fn index(&self, e: &[i64], base: &[i64]) -> usize {
        let mut idx = 0;
        for v in 0..e.len() {
            idx += ((e[v] - base[v]) / self.step[v]) as usize * self.strides[v];
        }
        idx
    }

    fn exponent(&self, mut idx: usize, base: &[i64]) -> Vec<i64> {
        let mut e = vec![0; self.dims.len()];
        for v in 0..self.dims.len() {
            e[v] = base[v] + (idx % self.dims[v]) as i64 * self.step[v];
            idx /= self.dims[v];
        }
        e
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Common exponent step per variable: all exponents of each operand lie in
/// `min + step * Z`.
fn common_steps(polys: &[(&LaurentPoly, &[i64])], nvars: usize) -> Vec<i64> {
    let mut step = vec![0i64; nvars];
    for (p, min) in polys {
        for (e, _) in p.terms() {
            for v in 0..nvars {
                step[v] = gcd(step[v], e[v] - min[v]);
            }
        }
    }
    step.into_iter().map(|s| s.max(1)).collect()
}

fn max_bits(p: &LaurentPoly) -> u64 {
    p.terms().map(|(_, c)| c.significant_bits()).max().unwrap_or(0)
}

fn ceil_log2(n: usize) -> u64 {
    (usize::BITS - n.saturating_sub(1).leading_zeros()) as u64
}

fn limbs_for(bits: u64) -> usize {
    bits.div_ceil(64).max(1) as usize
}

fn pack(p: &LaurentPoly, base: &[i64], layout: &Layout, k: usize) -> Integer {
    let mut pos = vec![0u64; layout.slots * k];
    let mut neg: Option<Vec<u64>> = None;
    for (e, c) in p.terms() {
        let at = layout.index(e, base) * k;
        let limbs = c.unsigned_abs_ref().to_limbs_asc();
        let target = if *c > 0 {
            &mut pos
        } else {
            neg.get_or_insert_with(|| vec![0u64; layout.slots * k])
        };
        target[at..at + limbs.len()].copy_from_slice(&limbs);
    }
    let p = Integer::from(Natural::from_owned_limbs_asc(pos));
    match neg {
        Some(n) => p - Integer::from(Natural::from_owned_limbs_asc(n)),
        None => p,
    }
}

/// Splits `v` into balanced base-`2^(64k)` digits; `None` if a digit falls
/// outside `slots`.
fn unpack(v: &Integer, k: usize, slots: usize) -> Option<Vec<(usize, Integer)>> {
    let negative = *v < 0;
    let limbs = v.unsigned_abs_ref().to_limbs_asc();
    let mut out = Vec::new();
    let mut carry = false;
    let mut slot = 0;
    while slot * k < limbs.len() || carry {
        let lo = (slot * k).min(limbs.len());
        let hi = ((slot + 1) * k).min(limbs.len());
        let mut digit = vec![0u64; k];
        digit[..hi - lo].copy_from_slice(&limbs[lo..hi]);
        let mut overflow = false;
        if carry {
            overflow = true;
            for d in digit.iter_mut() {
                let (s, o) = d.overflowing_add(1);
                *d = s;
                if !o {
                    overflow = false;
                    break;
                }
            }
        }
        let value = if overflow {
            carry = true;
            Integer::ZERO
        } else if digit[k - 1] >> 63 == 1 {
            carry = true;
            let mut comp: Vec<u64> = digit.iter().map(|d| !d).collect();
            for d in comp.iter_mut() {
                let (s, o) = d.overflowing_add(1);
                *d = s;
                if !o {
                    break;
                }
            }
            -Integer::from(Natural::from_owned_limbs_asc(comp))
        } else {
            carry = false;
            Integer::from(Natural::from_owned_limbs_asc(digit))
        };
        if value != 0 {
            if slot >= slots {
                return None;
            }
            out.push((slot, if negative { -value } else { value }));
        }
        slot += 1;
    }
    Some(out)
}

fn assemble(nvars: usize, digits: Vec<(usize, Integer)>, layout: &Layout, base: &[i64]) -> LaurentPoly {
    let terms: BTreeMap<Monomial, Integer> = digits
        .into_iter()
        .map(|(idx, c)| (Monomial(layout.exponent(idx, base)), c))
        .collect();
    LaurentPoly::from_map(nvars, terms)
}

fn worthwhile(slots: usize, terms: usize) -> bool {
    slots <= terms.saturating_mul(32).max(4096)
}

pub(super) fn mul(f: &LaurentPoly, g: &LaurentPoly) -> Option<LaurentPoly> {
    let n = f.nvars();
    let (fmin, fmax) = (f.min_exponents()?, f.max_exponents()?);
    let (gmin, gmax) = (g.min_exponents()?, g.max_exponents()?);
    let step = common_steps(&[(f, &fmin), (g, &gmin)], n);
    let dims: Vec<usize> = (0..n)
        .map(|v| ((fmax[v] - fmin[v] + gmax[v] - gmin[v]) / step[v]) as usize + 1)
        .collect();
    let layout = Layout::new(step, dims)?;
    if !worthwhile(layout.slots, f.len() + g.len()) {
        return None;
    }
    let bits = max_bits(f) + max_bits(g) + ceil_log2(f.len().min(g.len())) + 2;
    let k = limbs_for(bits);
    let base: Vec<i64> = fmin.iter().zip(&gmin).map(|(a, b)| a + b).collect();
    let pf = pack(f, &fmin, &layout, k);
    let prod = if std::ptr::eq(f, g) {
        (&pf).square()
    } else {
        &pf * &pack(g, &gmin, &layout, k)
    };
    let digits = unpack(&prod, k, layout.slots)?;
    Some(assemble(n, digits, &layout, &base))
}

/// Exact division by evaluation at a power of two. `None` asks the caller to
/// fall back to term elimination.
pub(super) fn div_exact(f: &LaurentPoly, g: &LaurentPoly) -> Option<Result<LaurentPoly, LaurentError>> {
    let n = f.nvars();
    let (fmin, fmax) = (f.min_exponents()?, f.max_exponents()?);
    let (gmin, gmax) = (g.min_exponents()?, g.max_exponents()?);
    let step = common_steps(&[(f, &fmin), (g, &gmin)], n);
    let dims: Vec<usize> = (0..n)
        .map(|v| ((fmax[v] - fmin[v]) / step[v]) as usize + 1)
        .collect();
    for v in 0..n {
        if gmax[v] - gmin[v] > fmax[v] - fmin[v] {
            return Some(Err(LaurentError::NonExactDivision));
        }
    }
    let layout = Layout::new(step, dims)?;
    if !worthwhile(layout.slots, f.len()) {
        return None;
    }
    let qbase: Vec<i64> = fmin.iter().zip(&gmin).map(|(a, b)| a - b).collect();
    let mut bits = max_bits(f) + ceil_log2(f.len()) + 8;
    for _ in 0..3 {
        let k = limbs_for(bits);
        let pf = pack(f, &fmin, &layout, k);
        let pg = pack(g, &gmin, &layout, k);
        let (q, r) = pf.div_rem(&pg);
        if r != 0 {
            return Some(Err(LaurentError::NonExactDivision));
        }
        if let Some(digits) = unpack(&q, k, layout.slots) {
            let cand = assemble(n, digits, &layout, &qbase);
            if !cand.is_zero() && &cand * g == *f {
                return Some(Ok(cand));
            }
        }
        bits *= 2;
    }
    None
}
