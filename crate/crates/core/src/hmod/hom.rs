use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::field::Field;
use super::linalg::{self, Mat};
use super::module::{make_e, LfModuleRep};

/// A module homomorphism: one matrix `M_i -> M'_i` per vertex.
pub type Morphism<E> = Vec<Mat<E>>;

const RANDOM_TRIES: usize = 32;
const EXHAUSTIVE_LIMIT: u64 = 1 << 16;

/// A basis of `Hom_H(m1, m2)`: all families `φ_i` commuting with every `ε_i`
/// and every arrow.
pub fn hom_space<F: Field>(m1: &LfModuleRep<F>, m2: &LfModuleRep<F>) -> Vec<Morphism<F::Elem>> {
    assert_eq!(m1.cd(), m2.cd(), "modules over different algebras");
    let f = m1.field();
    let n = m1.cd().n();
    let mut offsets = Vec::with_capacity(n);
    let mut total = 0;
    for i in 0..n {
        offsets.push(total);
        total += m2.dim(i) * m1.dim(i);
    }
    // unknown φ_i[r][c] lives at offsets[i] + r * dim1(i) + c
    let var = |i: usize, r: usize, c: usize| offsets[i] + r * m1.dim(i) + c;
    let mut rows: Vec<Vec<(usize, F::Elem)>> = Vec::new();
    for i in 0..n {
        let (d1, d2) = (m1.dim(i), m2.dim(i));
        let (e1, e2) = (m1.eps(i), m2.eps(i));
        for r in 0..d2 {
            for c in 0..d1 {
                let mut row = Vec::new();
                for s in 0..d2 {
                    if !f.is_zero(e2.get(r, s)) {
                        row.push((var(i, s, c), e2.get(r, s).clone()));
                    }
                }
                for s in 0..d1 {
                    if !f.is_zero(e1.get(s, c)) {
                        row.push((var(i, r, s), f.neg(e1.get(s, c))));
                    }
                }
                rows.push(row);
            }
        }
    }
    for (&(i, j, t), a1) in m1.arrows() {
        let a2 = m2.arrow(i, j, t);
        for r in 0..m2.dim(i) {
            for c in 0..m1.dim(j) {
                let mut row = Vec::new();
                for s in 0..m2.dim(j) {
                    if !f.is_zero(a2.get(r, s)) {
                        row.push((var(j, s, c), a2.get(r, s).clone()));
                    }
                }
                for s in 0..m1.dim(i) {
                    if !f.is_zero(a1.get(s, c)) {
                        row.push((var(i, r, s), f.neg(a1.get(s, c))));
                    }
                }
                rows.push(row);
            }
        }
    }
    rows.retain(|r| !r.is_empty());
    let mut system = linalg::zeros(f, rows.len(), total);
    for (r, row) in rows.iter().enumerate() {
        for (c, v) in row {
            let cur = f.add(system.get(r, *c), v);
            system.set(r, *c, cur);
        }
    }
    let kernel = linalg::kernel(f, &system);
    (0..kernel.cols())
        .map(|b| {
            (0..n)
                .map(|i| {
                    Mat::from_fn(m2.dim(i), m1.dim(i), |r, c| {
                        kernel.get(var(i, r, c), b).clone()
                    })
                })
                .collect()
        })
        .collect()
}

/// `Hom_H(m, E_k) = 0`; equivalent to surjectivity of `M_{k,in}`.
pub fn hom_to_e_vanishes<F: Field>(m: &LfModuleRep<F>, k: usize) -> bool {
    hom_space(m, &make_e(m.cd(), m.field().clone(), k)).is_empty()
}

/// `Hom_H(E_k, m) = 0`; equivalent to injectivity of `M_{k,out}`.
pub fn hom_from_e_vanishes<F: Field>(m: &LfModuleRep<F>, k: usize) -> bool {
    hom_space(&make_e(m.cd(), m.field().clone(), k), m).is_empty()
}

fn combine<F: Field>(f: &F, basis: &[Morphism<F::Elem>], coeffs: &[F::Elem]) -> Morphism<F::Elem> {
    let mut out: Morphism<F::Elem> = basis[0]
        .iter()
        .map(|m| linalg::zeros(f, m.rows(), m.cols()))
        .collect();
    for (phi, c) in basis.iter().zip(coeffs) {
        if f.is_zero(c) {
            continue;
        }
        for (o, p) in out.iter_mut().zip(phi) {
            *o = linalg::add(f, o, &linalg::scale(f, c, p));
        }
    }
    out
}

fn invertible<F: Field>(f: &F, phi: &Morphism<F::Elem>) -> bool {
    phi.iter()
        .all(|m| m.rows() == m.cols() && linalg::rank(f, m) == m.rows())
}

/// Searches `Hom(m1, m2)` for an invertible element: exhaustively over small
/// finite fields, otherwise through seeded random combinations.
pub fn find_isomorphism<F: Field>(
    m1: &LfModuleRep<F>,
    m2: &LfModuleRep<F>,
) -> Option<Morphism<F::Elem>> {
    if m1.cd() != m2.cd() || m1.ranks() != m2.ranks() {
        return None;
    }
    let f = m1.field();
    let basis = hom_space(m1, m2);
    if basis.is_empty() {
        return (m1.total_dim() == 0).then(|| {
            (0..m1.cd().n()).map(|_| linalg::zeros(f, 0, 0)).collect()
        });
    }
    let d = basis.len() as u32;
    if let Some(q) = f.order() {
        if let Some(total) = q.checked_pow(d).filter(|&t| t <= EXHAUSTIVE_LIMIT) {
            for idx in 0..total {
                let mut rest = idx;
                let coeffs: Vec<F::Elem> = (0..d)
                    .map(|_| {
                        let c = f.nth(rest % q);
                        rest /= q;
                        c
                    })
                    .collect();
                let phi = combine(f, &basis, &coeffs);
                if invertible(f, &phi) {
                    return Some(phi);
                }
            }
            return None;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..RANDOM_TRIES {
        let coeffs: Vec<F::Elem> = (0..d).map(|_| f.random(&mut rng)).collect();
        let phi = combine(f, &basis, &coeffs);
        if invertible(f, &phi) {
            return Some(phi);
        }
    }
    None
}

pub fn is_isomorphic<F: Field>(m1: &LfModuleRep<F>, m2: &LfModuleRep<F>) -> bool {
    find_isomorphism(m1, m2).is_some()
}
