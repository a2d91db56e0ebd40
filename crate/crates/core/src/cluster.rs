//! Seed mutation for skew-symmetrizable exchange matrices.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::cartan::IntMatrix;
use crate::exec::Exec;
use crate::laurent::{LaurentError, LaurentPoly, Monomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClusterError {
    #[error("exchange matrix is not skew-symmetrizable")]
    NotSkewSymmetrizable,
    #[error("seed has {vars} variables but B is {n}x{n}")]
    ShapeMismatch { vars: usize, n: usize },
    #[error("direction {0} out of range")]
    IndexOutOfRange(usize),
    #[error("empty mutation path")]
    EmptyPath,
    #[error("seed enumeration exceeded the budget of {0} seeds")]
    EnumerationBudgetExceeded(usize),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// Default seed budget for [`enumerate_finite_type_variables`].
pub const DEFAULT_SEED_BUDGET: usize = 50_000;

/// Fomin–Zelevinsky matrix mutation in direction `k`.
pub fn mutate_matrix(b: &IntMatrix, k: usize) -> IntMatrix {
    let n = b.len();
    let mut out = b.clone();
    for i in 0..n {
        for j in 0..n {
            out[i][j] = if i == k || j == k {
                -b[i][j]
            } else {
                b[i][j] + b[i][k].signum() * (b[i][k] * b[k][j]).max(0)
            };
        }
    }
    out
}

/// A positive diagonal `D` with `DB` skew-symmetric, if one exists.
pub fn skew_symmetrizer(b: &IntMatrix) -> Option<Vec<i64>> {
    let n = b.len();
    if b.iter().any(|row| row.len() != n) {
        return None;
    }
    let mut c = vec![vec![0i64; n]; n];
    for i in 0..n {
        if b[i][i] != 0 {
            return None;
        }
        for j in 0..n {
            if i == j {
                c[i][j] = 2;
                continue;
            }
            if b[i][j].signum() != -b[j][i].signum() {
                return None;
            }
            c[i][j] = -b[i][j].abs();
        }
    }
    crate::cartan::minimal_symmetrizer(&c).ok()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Seed {
    b: IntMatrix,
    vars: Vec<LaurentPoly>,
}

impl Seed {
    pub fn new(b: IntMatrix, vars: Vec<LaurentPoly>) -> Result<Seed, ClusterError> {
        if vars.len() != b.len() {
            return Err(ClusterError::ShapeMismatch {
                vars: vars.len(),
                n: b.len(),
            });
        }
        if skew_symmetrizer(&b).is_none() {
            return Err(ClusterError::NotSkewSymmetrizable);
        }
        Ok(Seed { b, vars })
    }

    /// The seed `(B, (x_1, …, x_n))`.
    pub fn initial(b: IntMatrix) -> Result<Seed, ClusterError> {
        let n = b.len();
        Seed::new(b, (0..n).map(|i| LaurentPoly::var(n, i)).collect())
    }

    pub fn b(&self) -> &IntMatrix {
        &self.b
    }

    pub fn vars(&self) -> &[LaurentPoly] {
        &self.vars
    }

    pub fn mutate(&self, k: usize) -> Result<Seed, ClusterError> {
        let n = self.b.len();
        if k >= n {
            return Err(ClusterError::IndexOutOfRange(k));
        }
        let nv = self.vars[0].nvars();
        let mut plus = LaurentPoly::one(nv);
        let mut minus = LaurentPoly::one(nv);
        for i in 0..n {
            let e = self.b[i][k];
            if e > 0 {
                plus = &plus * &self.vars[i].pow(e as u32);
            } else if e < 0 {
                minus = &minus * &self.vars[i].pow((-e) as u32);
            }
        }
        let mut vars = self.vars.clone();
        vars[k] = (&plus + &minus).exact_div(&self.vars[k])?;
        Ok(Seed {
            b: mutate_matrix(&self.b, k),
            vars,
        })
    }
}

/// Mutates the initial seed along `path` and returns the last variable changed.
pub fn variable_along(b: &IntMatrix, path: &[usize]) -> Result<LaurentPoly, ClusterError> {
    let last = *path.last().ok_or(ClusterError::EmptyPath)?;
    let mut seed = Seed::initial(b.clone())?;
    for &k in path {
        seed = seed.mutate(k)?;
    }
    Ok(seed.vars[last].clone())
}

fn rank2_exponent(b: i64, c: i64, m: i64) -> u32 {
    (if m.rem_euclid(2) == 1 { b } else { c }) as u32
}

/// All `x_n` for `lo <= n <= hi` of the rank-2 recurrence
/// `x_{n-1} x_{n+1} = 1 + x_n^b` (n odd), `1 + x_n^c` (n even).
pub fn rank2_variables(
    b: i64,
    c: i64,
    lo: i64,
    hi: i64,
) -> Result<BTreeMap<i64, LaurentPoly>, ClusterError> {
    assert!(b >= 0 && c >= 0, "exponents must be nonnegative");
    let one = LaurentPoly::one(2);
    let mut xs: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
    xs.insert(1, LaurentPoly::var(2, 0));
    xs.insert(2, LaurentPoly::var(2, 1));
    for m in 2..hi {
        let num = &one + &xs[&m].pow(rank2_exponent(b, c, m));
        let next = num.exact_div(&xs[&(m - 1)])?;
        xs.insert(m + 1, next);
    }
    let mut m = 1;
    while m - 1 >= lo {
        let num = &one + &xs[&m].pow(rank2_exponent(b, c, m));
        let prev = num.exact_div(&xs[&(m + 1)])?;
        xs.insert(m - 1, prev);
        m -= 1;
    }
    Ok(xs.into_iter().filter(|(k, _)| (lo..=hi).contains(k)).collect())
}

pub fn rank2_variable(b: i64, c: i64, n: i64) -> Result<LaurentPoly, ClusterError> {
    Ok(rank2_variables(b, c, n, n)?.remove(&n).expect("computed index"))
}

/// All cluster variables reachable from the initial seed of `b`, initial ones
/// included, sorted by d-vector. Requires finite cluster type.
pub fn enumerate_finite_type_variables(
    b: &IntMatrix,
    budget: usize,
    exec: Exec,
) -> Result<Vec<LaurentPoly>, ClusterError> {
    let n = b.len();
    let start = Seed::initial(b.clone())?;
    let mut seen: HashSet<Seed> = HashSet::from([start.clone()]);
    let mut vars: HashSet<LaurentPoly> = start.vars.iter().cloned().collect();
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        let expanded = exec.map(&frontier, |s| {
            (0..n).map(|k| s.mutate(k)).collect::<Result<Vec<_>, _>>()
        });
        let mut next = Vec::new();
        for batch in expanded {
            for s in batch? {
                if seen.contains(&s) {
                    continue;
                }
                if seen.len() >= budget {
                    return Err(ClusterError::EnumerationBudgetExceeded(budget));
                }
                vars.extend(s.vars.iter().cloned());
                seen.insert(s.clone());
                next.push(s);
            }
        }
        frontier = next;
    }
    let mut out: Vec<LaurentPoly> = vars.into_iter().collect();
    out.sort_by_cached_key(|p| (p.d_vector(), p.to_string()));
    Ok(out)
}

/// Non-initial variables among `vars`: anything other than a single `x_i`.
pub fn non_initial(vars: &[LaurentPoly]) -> Vec<LaurentPoly> {
    vars.iter()
        .filter(|p| {
            !(p.is_monomial()
                && p.terms().all(|(e, c)| {
                    *c == 1 && Monomial::new(e.to_vec()).degree() == 1 && e.iter().all(|&x| x >= 0)
                }))
        })
        .cloned()
        .collect()
}
