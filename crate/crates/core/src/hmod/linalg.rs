//! Dense matrices over a [`Field`].

use super::field::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Mat<E> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Mat { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<E> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    /// Columns `cols` of `self`, in order.
    pub fn select_cols(&self, cols: &[usize]) -> Self {
        Mat::from_fn(self.rows, cols.len(), |r, c| self.get(r, cols[c]).clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Mat::from_fn(rows.len(), self.cols, |r, c| self.get(rows[r], c).clone())
    }

    pub fn from_cols(rows: usize, cols: &[Vec<E>]) -> Self {
        Mat::from_fn(rows, cols.len(), |r, c| cols[c][r].clone())
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Mat::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                other.get(r, c - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Mat::from_vec(self.rows + other.rows, self.cols, data)
    }
}

pub fn zeros<F: Field>(f: &F, rows: usize, cols: usize) -> Mat<F::Elem> {
    Mat::from_vec(rows, cols, vec![f.zero(); rows * cols])
}

pub fn identity<F: Field>(f: &F, n: usize) -> Mat<F::Elem> {
    Mat::from_fn(n, n, |r, c| if r == c { f.one() } else { f.zero() })
}

pub fn is_zero<F: Field>(f: &F, a: &Mat<F::Elem>) -> bool {
    a.data.iter().all(|x| f.is_zero(x))
}

pub fn mul<F: Field>(f: &F, a: &Mat<F::Elem>, b: &Mat<F::Elem>) -> Mat<F::Elem> {
    assert_eq!(a.cols, b.rows, "matrix product shape");
    let mut out = zeros(f, a.rows, b.cols);
    for r in 0..a.rows {
        for k in 0..a.cols {
            let x = a.get(r, k);
            if f.is_zero(x) {
                continue;
            }
            for c in 0..b.cols {
                let y = b.get(k, c);
                if !f.is_zero(y) {
                    let idx = r * b.cols + c;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(x, y));
                }
            }
        }
    }
    out
}

pub fn mul_vec<F: Field>(f: &F, a: &Mat<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    assert_eq!(a.cols, v.len());
    (0..a.rows)
        .map(|r| {
            a.row(r)
                .iter()
                .zip(v)
                .fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y)))
        })
        .collect()
}

pub fn sub<F: Field>(f: &F, a: &Mat<F::Elem>, b: &Mat<F::Elem>) -> Mat<F::Elem> {
    assert_eq!(a.shape(), b.shape());
    Mat::from_vec(
        a.rows,
        a.cols,
        a.data.iter().zip(&b.data).map(|(x, y)| f.sub(x, y)).collect(),
    )
}

pub fn add<F: Field>(f: &F, a: &Mat<F::Elem>, b: &Mat<F::Elem>) -> Mat<F::Elem> {
    assert_eq!(a.shape(), b.shape());
    Mat::from_vec(
        a.rows,
        a.cols,
        a.data.iter().zip(&b.data).map(|(x, y)| f.add(x, y)).collect(),
    )
}

pub fn scale<F: Field>(f: &F, s: &F::Elem, a: &Mat<F::Elem>) -> Mat<F::Elem> {
    Mat::from_vec(a.rows, a.cols, a.data.iter().map(|x| f.mul(s, x)).collect())
}

pub fn pow<F: Field>(f: &F, a: &Mat<F::Elem>, k: u32) -> Mat<F::Elem> {
    assert_eq!(a.rows, a.cols);
    let mut out = identity(f, a.rows);
    for _ in 0..k {
        out = mul(f, &out, a);
    }
    out
}

/// Reduced row echelon form and pivot columns.
pub fn rref<F: Field>(f: &F, a: &Mat<F::Elem>) -> (Mat<F::Elem>, Vec<usize>) {
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(p) = (row..m.rows).find(|&r| !f.is_zero(m.get(r, col))) else {
            continue;
        };
        if p != row {
            for c in 0..m.cols {
                m.data.swap(p * m.cols + c, row * m.cols + c);
            }
        }
        let inv = f.inv(m.get(row, col)).unwrap();
        for c in col..m.cols {
            let v = f.mul(m.get(row, c), &inv);
            m.set(row, c, v);
        }
        for r in 0..m.rows {
            if r == row || f.is_zero(m.get(r, col)) {
                continue;
            }
            let factor = m.get(r, col).clone();
            for c in col..m.cols {
                let v = f.sub(m.get(r, c), &f.mul(&factor, m.get(row, c)));
                m.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    (m, pivots)
}

pub fn rank<F: Field>(f: &F, a: &Mat<F::Elem>) -> usize {
    rref(f, a).1.len()
}

/// A basis of `{x : a x = 0}`, as the columns of the result.
pub fn kernel<F: Field>(f: &F, a: &Mat<F::Elem>) -> Mat<F::Elem> {
    let (r, pivots) = rref(f, a);
    let free: Vec<usize> = (0..a.cols).filter(|c| !pivots.contains(c)).collect();
    let mut out = zeros(f, a.cols, free.len());
    for (k, &fc) in free.iter().enumerate() {
        out.set(fc, k, f.one());
        for (row, &pc) in pivots.iter().enumerate() {
            out.set(pc, k, f.neg(r.get(row, fc)));
        }
    }
    out
}

/// Some `x` with `a x = b`, if one exists.
pub fn solve<F: Field>(f: &F, a: &Mat<F::Elem>, b: &Mat<F::Elem>) -> Option<Mat<F::Elem>> {
    assert_eq!(a.rows, b.rows);
    let (r, pivots) = rref(f, &a.hstack(b));
    if pivots.iter().any(|&p| p >= a.cols) {
        return None;
    }
    let mut x = zeros(f, a.cols, b.cols);
    for (row, &pc) in pivots.iter().enumerate() {
        for c in 0..b.cols {
            x.set(pc, c, r.get(row, a.cols + c).clone());
        }
    }
    Some(x)
}

pub fn inverse<F: Field>(f: &F, a: &Mat<F::Elem>) -> Option<Mat<F::Elem>> {
    if a.rows != a.cols {
        return None;
    }
    let n = a.rows;
    let (r, pivots) = rref(f, &a.hstack(&identity(f, n)));
    if pivots.len() < n || pivots.last().is_some_and(|&p| p != n - 1) {
        return None;
    }
    Some(Mat::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
}

/// Greedily picks columns of `a` that are independent of `base` and of each
/// other; returns their indices.
pub fn independent_columns<F: Field>(
    f: &F,
    base: &Mat<F::Elem>,
    a: &Mat<F::Elem>,
) -> Vec<usize> {
    let (_, pivots) = rref(f, &base.hstack(a));
    pivots
        .into_iter()
        .filter(|&p| p >= base.cols)
        .map(|p| p - base.cols)
        .collect()
}
