use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::field::{Field, PrimeField, Rationals};
use super::linalg::{self, Mat};
use super::HmodError;
use crate::cartan::{CartanData, CartanFile, RankVector};

/// `(i, j, t)`: the `t`-th arrow `j -> i` for `(i, j) ∈ Ω`, 0-based.
pub type ArrowKey = (usize, usize, usize);

/// An explicit `H(C, D, Ω)`-module: per-vertex `ε_i` on `K^{c_i m_i}` and a
/// matrix `K^{c_j m_j} -> K^{c_i m_i}` per arrow.
#[derive(Clone, Debug, PartialEq)]
pub struct LfModuleRep<F: Field> {
    field: F,
    cd: CartanData,
    ranks: RankVector,
    eps: Vec<Mat<F::Elem>>,
    arrows: BTreeMap<ArrowKey, Mat<F::Elem>>,
}

/// `m` Jordan blocks of size `c`: basis index `j*c + a` stands for `ε^a e_j`.
pub fn jordan_eps<F: Field>(f: &F, c: usize, m: usize) -> Mat<F::Elem> {
    Mat::from_fn(c * m, c * m, |r, s| {
        if r == s + 1 && r % c != 0 {
            f.one()
        } else {
            f.zero()
        }
    })
}

/// Every arrow key of `cd`, in order.
pub fn arrow_keys(cd: &CartanData) -> Vec<ArrowKey> {
    cd.omega()
        .iter()
        .flat_map(|&(i, j)| (0..cd.g(i, j) as usize).map(move |t| (i, j, t)))
        .collect()
}

impl<F: Field> LfModuleRep<F> {
    /// Builds and validates a module; missing arrows are zero.
    pub fn new(
        field: F,
        cd: CartanData,
        ranks: RankVector,
        eps: Vec<Mat<F::Elem>>,
        mut arrows: BTreeMap<ArrowKey, Mat<F::Elem>>,
    ) -> Result<Self, HmodError> {
        let n = cd.n();
        if ranks.0.len() != n || !ranks.is_nonnegative() {
            return Err(HmodError::Shape(format!("bad rank vector {ranks}")));
        }
        if eps.len() != n {
            return Err(HmodError::Shape("one ε per vertex required".into()));
        }
        let dims: Vec<usize> = (0..n).map(|i| (cd.d(i) * ranks.0[i]) as usize).collect();
        for (i, e) in eps.iter().enumerate() {
            if e.shape() != (dims[i], dims[i]) {
                return Err(HmodError::Shape(format!("ε_{} has shape {:?}", i + 1, e.shape())));
            }
        }
        let keys = arrow_keys(&cd);
        if let Some(k) = arrows.keys().find(|k| !keys.contains(k)) {
            return Err(HmodError::Shape(format!(
                "no arrow ({},{},{}) in the orientation",
                k.0 + 1,
                k.1 + 1,
                k.2 + 1
            )));
        }
        for &(i, j, t) in &keys {
            let a = arrows
                .entry((i, j, t))
                .or_insert_with(|| linalg::zeros(&field, dims[i], dims[j]));
            if a.shape() != (dims[i], dims[j]) {
                return Err(HmodError::Shape(format!(
                    "arrow ({},{},{}) has shape {:?}, expected {:?}",
                    i + 1,
                    j + 1,
                    t + 1,
                    a.shape(),
                    (dims[i], dims[j])
                )));
            }
        }
        let m = LfModuleRep {
            field,
            cd,
            ranks,
            eps,
            arrows,
        };
        m.validate()?;
        Ok(m)
    }

    /// A module whose `ε_i` are in Jordan block form.
    pub fn with_block_eps(
        field: F,
        cd: CartanData,
        ranks: RankVector,
        arrows: BTreeMap<ArrowKey, Mat<F::Elem>>,
    ) -> Result<Self, HmodError> {
        let eps = (0..cd.n())
            .map(|i| jordan_eps(&field, cd.d(i) as usize, ranks.0[i] as usize))
            .collect();
        Self::new(field, cd, ranks, eps, arrows)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn cd(&self) -> &CartanData {
        &self.cd
    }

    pub fn ranks(&self) -> &RankVector {
        &self.ranks
    }

    pub fn dim(&self, i: usize) -> usize {
        (self.cd.d(i) * self.ranks.0[i]) as usize
    }

    pub fn total_dim(&self) -> usize {
        (0..self.cd.n()).map(|i| self.dim(i)).sum()
    }

    pub fn eps(&self, i: usize) -> &Mat<F::Elem> {
        &self.eps[i]
    }

    pub fn arrow(&self, i: usize, j: usize, t: usize) -> &Mat<F::Elem> {
        &self.arrows[&(i, j, t)]
    }

    pub fn arrows(&self) -> &BTreeMap<ArrowKey, Mat<F::Elem>> {
        &self.arrows
    }

    /// Checks `ε_i^{c_i} = 0`, freeness of every `M_i`, and the relations
    /// `ε_i^{f_ji} A = A ε_j^{f_ij}`.
    pub fn validate(&self) -> Result<(), HmodError> {
        let f = &self.field;
        for i in 0..self.cd.n() {
            let c = self.cd.d(i) as u32;
            if !linalg::is_zero(f, &linalg::pow(f, &self.eps[i], c)) {
                return Err(HmodError::RelationViolated(format!("ε_{}^{} ≠ 0", i + 1, c)));
            }
            let expected = self.dim(i) - self.ranks.0[i] as usize;
            if linalg::rank(f, &self.eps[i]) != expected {
                return Err(HmodError::NotLocallyFree(format!(
                    "M_{} is not free of rank {}",
                    i + 1,
                    self.ranks.0[i]
                )));
            }
        }
        for (&(i, j, t), a) in &self.arrows {
            let lhs = linalg::mul(f, &linalg::pow(f, &self.eps[i], self.cd.f(j, i) as u32), a);
            let rhs = linalg::mul(f, a, &linalg::pow(f, &self.eps[j], self.cd.f(i, j) as u32));
            if lhs != rhs {
                return Err(HmodError::RelationViolated(format!(
                    "commutation relation fails on arrow ({},{},{})",
                    i + 1,
                    j + 1,
                    t + 1
                )));
            }
        }
        Ok(())
    }

    pub fn is_block_form(&self) -> bool {
        (0..self.cd.n()).all(|i| {
            self.eps[i]
                == jordan_eps(&self.field, self.cd.d(i) as usize, self.ranks.0[i] as usize)
        })
    }

    /// An isomorphic module with every `ε_i` in Jordan block form.
    pub fn to_block_form(&self) -> Result<Self, HmodError> {
        let f = &self.field;
        let mut change = Vec::new();
        for i in 0..self.cd.n() {
            let basis = free_basis(
                f,
                &self.eps[i],
                &linalg::identity(f, self.dim(i)),
                self.cd.d(i) as usize,
            )?;
            let inv = linalg::inverse(f, &basis).expect("free basis is invertible");
            change.push((basis, inv));
        }
        let arrows = self
            .arrows
            .iter()
            .map(|(&(i, j, t), a)| {
                let m = linalg::mul(f, &change[i].1, &linalg::mul(f, a, &change[j].0));
                ((i, j, t), m)
            })
            .collect();
        Self::with_block_eps(f.clone(), self.cd.clone(), self.ranks.clone(), arrows)
    }

    /// Module file JSON: `cartan`, `field`, `ranks` and 1-based `arrows`.
    pub fn to_json(&self) -> Result<Value, HmodError> {
        let m = if self.is_block_form() {
            self.clone()
        } else {
            self.to_block_form()?
        };
        let mut arrows = Map::new();
        for (&(i, j, t), a) in &m.arrows {
            let rows: Vec<Value> = (0..a.rows())
                .map(|r| Value::Array(a.row(r).iter().map(|x| m.field.elem_to_json(x)).collect()))
                .collect();
            arrows.insert(format!("({},{},{})", i + 1, j + 1, t + 1), Value::Array(rows));
        }
        Ok(json!({
            "cartan": serde_json::to_value(m.cd.to_file()).expect("serializable"),
            "field": m.field.label(),
            "ranks": m.ranks.0,
            "arrows": Value::Object(arrows),
        }))
    }

    /// Reads a module file over `field`; the file's `field` entry is ignored.
    pub fn from_json_with(field: F, v: &Value) -> Result<Self, HmodError> {
        let bad = |msg: &str| HmodError::File(msg.to_string());
        let cartan: CartanFile = serde_json::from_value(v.get("cartan").ok_or_else(|| bad("missing cartan"))?.clone())
            .map_err(|e| HmodError::File(e.to_string()))?;
        let cd = cartan.into_cartan()?;
        let ranks: Vec<i64> = serde_json::from_value(v.get("ranks").ok_or_else(|| bad("missing ranks"))?.clone())
            .map_err(|e| HmodError::File(e.to_string()))?;
        let mut arrows = BTreeMap::new();
        if let Some(obj) = v.get("arrows") {
            let obj = obj.as_object().ok_or_else(|| bad("arrows must be an object"))?;
            for (key, val) in obj {
                let idx = parse_arrow_key(key).ok_or_else(|| HmodError::File(format!("bad arrow key {key}")))?;
                let rows = val.as_array().ok_or_else(|| bad("matrix must be a list of rows"))?;
                let mut data = Vec::new();
                let mut cols = None;
                for row in rows {
                    let row = row.as_array().ok_or_else(|| bad("matrix row must be a list"))?;
                    if *cols.get_or_insert(row.len()) != row.len() {
                        return Err(bad("ragged matrix"));
                    }
                    for x in row {
                        data.push(
                            field
                                .elem_from_json(x)
                                .ok_or_else(|| HmodError::File(format!("bad field element {x}")))?,
                        );
                    }
                }
                let (r, c) = (rows.len(), cols.unwrap_or(0));
                let c = if r == 0 {
                    let (_, j, _) = idx;
                    if j < cd.n() && j < ranks.len() {
                        (cd.d(j) * ranks[j]) as usize
                    } else {
                        0
                    }
                } else {
                    c
                };
                arrows.insert(idx, Mat::from_vec(r, c, data));
            }
        }
        Self::with_block_eps(field, cd, RankVector(ranks), arrows)
    }

    /// The direct sum of two modules over the same data.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, HmodError> {
        if self.cd != other.cd {
            return Err(HmodError::Shape("direct sum needs equal Cartan data".into()));
        }
        let f = &self.field;
        let block = |a: &Mat<F::Elem>, b: &Mat<F::Elem>| {
            Mat::from_fn(a.rows() + b.rows(), a.cols() + b.cols(), |r, c| {
                match (r < a.rows(), c < a.cols()) {
                    (true, true) => a.get(r, c).clone(),
                    (false, false) => b.get(r - a.rows(), c - a.cols()).clone(),
                    _ => f.zero(),
                }
            })
        };
        let ranks = RankVector(
            self.ranks.0.iter().zip(&other.ranks.0).map(|(a, b)| a + b).collect(),
        );
        let eps = (0..self.cd.n()).map(|i| block(&self.eps[i], &other.eps[i])).collect();
        let arrows = self
            .arrows
            .iter()
            .map(|(k, a)| (*k, block(a, &other.arrows[k])))
            .collect();
        Self::new(f.clone(), self.cd.clone(), ranks, eps, arrows)
    }
}

impl LfModuleRep<Rationals> {
    /// Reduction modulo `p`; `None` if `p` divides a denominator.
    pub fn reduce_mod(&self, pf: PrimeField) -> Option<LfModuleRep<PrimeField>> {
        let red = |a: &Mat<malachite::Rational>| -> Option<Mat<u64>> {
            let mut data = Vec::with_capacity(a.rows() * a.cols());
            for r in 0..a.rows() {
                for x in a.row(r) {
                    data.push(pf.reduce(x)?);
                }
            }
            Some(Mat::from_vec(a.rows(), a.cols(), data))
        };
        let eps = self.eps.iter().map(red).collect::<Option<Vec<_>>>()?;
        let arrows = self
            .arrows
            .iter()
            .map(|(k, a)| Some((*k, red(a)?)))
            .collect::<Option<BTreeMap<_, _>>>()?;
        LfModuleRep::new(pf, self.cd.clone(), self.ranks.clone(), eps, arrows).ok()
    }
}

fn parse_arrow_key(key: &str) -> Option<ArrowKey> {
    let inner = key.trim().strip_prefix('(')?.strip_suffix(')')?;
    let parts: Vec<usize> = inner
        .split(',')
        .map(|s| s.trim().parse().ok())
        .collect::<Option<Vec<_>>>()?;
    match parts[..] {
        [i, j, t] if i > 0 && j > 0 && t > 0 => Some((i - 1, j - 1, t - 1)),
        _ => None,
    }
}

/// The generalized simple module `E_i` with `ε_i` a single Jordan block.
pub fn make_e<F: Field>(cd: &CartanData, field: F, i: usize) -> LfModuleRep<F> {
    LfModuleRep::with_block_eps(field, cd.clone(), RankVector::simple(cd.n(), i), BTreeMap::new())
        .expect("E_i is a valid module")
}

/// A free `K[ε]/ε^c`-basis of the `ε`-stable span of `span`'s columns, laid
/// out generator-major (`g_1, ε g_1, …, g_2, …`).
pub fn free_basis<F: Field>(
    f: &F,
    eps: &Mat<F::Elem>,
    span: &Mat<F::Elem>,
    c: usize,
) -> Result<Mat<F::Elem>, HmodError> {
    let dim = span.cols();
    if dim % c != 0 {
        return Err(HmodError::NotLocallyFree(format!(
            "dimension {dim} is not a multiple of {c}"
        )));
    }
    let r = dim / c;
    let top = linalg::pow(f, eps, c as u32 - 1);
    let images = linalg::mul(f, &top, span);
    let chosen = linalg::independent_columns(f, &linalg::zeros(f, span.rows(), 0), &images);
    if chosen.len() != r {
        return Err(HmodError::NotLocallyFree(format!(
            "ε^{} has rank {} on a space of dimension {dim}",
            c - 1,
            chosen.len()
        )));
    }
    let mut cols = Vec::with_capacity(dim);
    for &g in &chosen {
        let mut v = span.col(g);
        for _ in 0..c {
            cols.push(v.clone());
            v = linalg::mul_vec(f, eps, &v);
        }
    }
    Ok(Mat::from_cols(span.rows(), &cols))
}
