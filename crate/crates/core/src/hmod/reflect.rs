//! Sink and source reflection functors on explicit modules.
//!
//! For a sink `k`, `_kH_j ⊗ M_j` is identified with `⊕_{t, f} M_j` through the
//! right basis `ε_k^{F-1-f} α_kj^{(t)}` (`F = f_jk`); the same space with the
//! same `ε_k`-action serves the source case.

use std::collections::BTreeMap;

use super::field::Field;
use super::linalg::{self, Mat};
use super::module::{free_basis, jordan_eps, LfModuleRep};
use super::HmodError;
use crate::cartan::RankVector;
use crate::ccrec::Direction;

struct Block {
    j: usize,
    t: usize,
    f: usize,
    offset: usize,
}

struct Layout {
    blocks: Vec<Block>,
    dim: usize,
}

impl Layout {
    fn new<F: Field>(m: &LfModuleRep<F>, k: usize, nbrs: &[usize]) -> Layout {
        let cd = m.cd();
        let mut blocks = Vec::new();
        let mut offset = 0;
        for &j in nbrs {
            for t in 0..cd.g(k, j) as usize {
                for f in 0..cd.f(j, k) as usize {
                    blocks.push(Block { j, t, f, offset });
                    offset += m.dim(j);
                }
            }
        }
        Layout { blocks, dim: offset }
    }

    fn find(&self, j: usize, t: usize, f: usize) -> &Block {
        self.blocks
            .iter()
            .find(|b| b.j == j && b.t == t && b.f == f)
            .expect("block exists")
    }

    /// `ε_k` acting on `⊕ _kH_j ⊗ M_j`.
    fn eps<F: Field>(&self, m: &LfModuleRep<F>, k: usize) -> Mat<F::Elem> {
        let fld = m.field();
        let mut out = linalg::zeros(fld, self.dim, self.dim);
        for b in &self.blocks {
            let d = m.dim(b.j);
            if b.f > 0 {
                let target = self.find(b.j, b.t, b.f - 1);
                for x in 0..d {
                    out.set(target.offset + x, b.offset + x, fld.one());
                }
            } else {
                let big_f = m.cd().f(b.j, k) as usize;
                let target = self.find(b.j, b.t, big_f - 1);
                let e = linalg::pow(fld, m.eps(b.j), m.cd().f(k, b.j) as u32);
                for r in 0..d {
                    for c in 0..d {
                        out.set(target.offset + r, b.offset + c, e.get(r, c).clone());
                    }
                }
            }
        }
        out
    }
}

fn place<E: Clone>(dst: &mut Mat<E>, r0: usize, c0: usize, src: &Mat<E>) {
    for r in 0..src.rows() {
        for c in 0..src.cols() {
            dst.set(r0 + r, c0 + c, src.get(r, c).clone());
        }
    }
}

/// `M_{k,in}: ⊕_{j ∈ Ω(k,-)} _kH_j ⊗ M_j -> M_k`.
pub fn in_map<F: Field>(m: &LfModuleRep<F>, k: usize) -> Mat<F::Elem> {
    let fld = m.field();
    let layout = Layout::new(m, k, &m.cd().arrows_into(k));
    let mut out = linalg::zeros(fld, m.dim(k), layout.dim);
    for b in &layout.blocks {
        let big_f = m.cd().f(b.j, k) as u32;
        let e = linalg::pow(fld, m.eps(k), big_f - 1 - b.f as u32);
        place(&mut out, 0, b.offset, &linalg::mul(fld, &e, m.arrow(k, b.j, b.t)));
    }
    out
}

/// `M_{k,out}: M_k -> ⊕_{j ∈ Ω(-,k)} _kH_j ⊗ M_j`.
pub fn out_map<F: Field>(m: &LfModuleRep<F>, k: usize) -> Mat<F::Elem> {
    let fld = m.field();
    let layout = Layout::new(m, k, &m.cd().arrows_out_of(k));
    let mut out = linalg::zeros(fld, layout.dim, m.dim(k));
    for b in &layout.blocks {
        let e = linalg::pow(fld, m.eps(k), b.f as u32);
        place(&mut out, b.offset, 0, &linalg::mul(fld, m.arrow(b.j, k, b.t), &e));
    }
    out
}

pub fn in_map_surjective<F: Field>(m: &LfModuleRep<F>, k: usize) -> bool {
    linalg::rank(m.field(), &in_map(m, k)) == m.dim(k)
}

pub fn out_map_injective<F: Field>(m: &LfModuleRep<F>, k: usize) -> bool {
    linalg::rank(m.field(), &out_map(m, k)) == m.dim(k)
}

/// `F_k^+(m)` at a sink (`Plus`) or `F_k^-(m)` at a source (`Minus`).
pub fn reflect_module<F: Field>(
    m: &LfModuleRep<F>,
    k: usize,
    dir: Direction,
) -> Result<LfModuleRep<F>, HmodError> {
    match dir {
        Direction::Plus if !m.cd().is_sink(k) => return Err(HmodError::NotSink(k)),
        Direction::Minus if !m.cd().is_source(k) => return Err(HmodError::NotSource(k)),
        _ => {}
    }
    let m = if m.is_block_form() {
        m.clone()
    } else {
        m.to_block_form()?
    };
    let fld = m.field();
    let cd = m.cd();
    let ck = cd.d(k) as usize;
    let new_cd = cd.reflect_orientation(k)?;
    let mut arrows: BTreeMap<_, _> = m
        .arrows()
        .iter()
        .filter(|((i, j, _), _)| *i != k && *j != k)
        .map(|(key, a)| (*key, a.clone()))
        .collect();
    let new_rank;
    match dir {
        Direction::Plus => {
            let nbrs = cd.arrows_into(k);
            let layout = Layout::new(&m, k, &nbrs);
            let eps_x = layout.eps(&m, k);
            let kernel = linalg::kernel(fld, &in_map(&m, k));
            let g = free_basis(fld, &eps_x, &kernel, ck)?;
            new_rank = g.cols() / ck;
            for b in layout.blocks.iter().filter(|b| b.f == 0) {
                let rows: Vec<usize> = (b.offset..b.offset + m.dim(b.j)).collect();
                arrows.insert((b.j, k, b.t), g.select_rows(&rows));
            }
        }
        Direction::Minus => {
            let nbrs = cd.arrows_out_of(k);
            let layout = Layout::new(&m, k, &nbrs);
            let eps_x = layout.eps(&m, k);
            let out = out_map(&m, k);
            let none = linalg::zeros(fld, layout.dim, 0);
            let image = out.select_cols(&linalg::independent_columns(fld, &none, &out));
            let id = linalg::identity(fld, layout.dim);
            let complement = id.select_cols(&linalg::independent_columns(fld, &image, &id));
            let q = complement.cols();
            let split = linalg::inverse(fld, &image.hstack(&complement)).expect("basis of X");
            let proj = split.select_rows(&(image.cols()..layout.dim).collect::<Vec<_>>());
            let eps_q = linalg::mul(fld, &proj, &linalg::mul(fld, &eps_x, &complement));
            let t = free_basis(fld, &eps_q, &linalg::identity(fld, q), ck)?;
            let t_inv = linalg::inverse(fld, &t).expect("free basis is invertible");
            new_rank = q / ck;
            for &j in &nbrs {
                for tt in 0..cd.g(k, j) as usize {
                    let b = layout.find(j, tt, cd.f(j, k) as usize - 1);
                    let cols: Vec<usize> = (b.offset..b.offset + m.dim(j)).collect();
                    let a = linalg::mul(fld, &t_inv, &proj.select_cols(&cols));
                    arrows.insert((k, j, tt), a);
                }
            }
        }
    }
    let mut ranks = m.ranks().clone();
    ranks.0[k] = new_rank as i64;
    let eps = (0..cd.n())
        .map(|i| {
            if i == k {
                jordan_eps(fld, ck, new_rank)
            } else {
                m.eps(i).clone()
            }
        })
        .collect();
    LfModuleRep::new(fld.clone(), new_cd, RankVector(ranks.0), eps, arrows)
}
