//! Point counts of locally free quiver Grassmannians over prime fields and
//! Euler characteristics by interpolation at `q = 1`.

use malachite::num::basic::traits::Zero;
use malachite::{Integer, Rational};

use super::field::{primes, Field, PrimeField};
use super::linalg::{self, Mat};
use super::module::LfModuleRep;
use super::template::ModuleTemplate;
use super::HmodError;
use crate::cartan::RankVector;
use crate::exec::Exec;
use crate::laurent::LaurentPoly;

/// Largest `Σ c_i m_i` accepted by the counting routines.
pub const DIM_GUARD: usize = 10;
/// Largest number of candidate tuples examined for one prime.
pub const WORK_GUARD: u128 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrCount {
    pub q: u64,
    pub r: RankVector,
    pub count: u128,
}

/// `a * b` in `F_p[ε]/ε^len`.
fn rmul(p: u64, a: &[u64], b: &[u64], len: usize) -> Vec<u64> {
    let mut out = vec![0u64; len];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| **x != 0) {
        for (j, y) in b.iter().enumerate() {
            if i + j < len {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
    }
    out
}

/// Reduced row echelon `r x m` matrices over `F_p` of full rank `r`, with
/// their pivot columns.
pub fn rref_shapes(p: u64, r: usize, m: usize) -> Vec<(Vec<usize>, Vec<Vec<u64>>)> {
    let mut out = Vec::new();
    for pivots in combinations(m, r) {
        let free: Vec<(usize, usize)> = (0..r)
            .flat_map(|l| {
                let pv = pivots.clone();
                (pv[l] + 1..m)
                    .filter(move |c| !pv.contains(c))
                    .map(move |c| (l, c))
            })
            .collect();
        for vals in odometer(p, free.len()) {
            let mut mat = vec![vec![0u64; m]; r];
            for (l, &pc) in pivots.iter().enumerate() {
                mat[l][pc] = 1;
            }
            for (&(l, c), v) in free.iter().zip(vals) {
                mat[l][c] = v;
            }
            out.push((pivots.clone(), mat));
        }
    }
    out
}

fn combinations(m: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for x in start..m {
            cur.push(x);
            go(x + 1, m, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if r <= m {
        go(0, m, r, &mut Vec::new(), &mut out);
    }
    out
}

/// All vectors in `F_p^len`.
fn odometer(p: u64, len: usize) -> impl Iterator<Item = Vec<u64>> {
    let total = (p as u128).pow(len as u32);
    (0..total).map(move |mut idx| {
        (0..len)
            .map(|_| {
                let d = (idx % p as u128) as u64;
                idx /= p as u128;
                d
            })
            .collect()
    })
}

/// A free `R`-submodule of `R^m`, `R = F_p[ε]/ε^c`, in generator normal form:
/// identity in the pivot columns.
#[derive(Clone, Debug)]
pub struct FreeSubmodule {
    c: usize,
    m: usize,
    pivots: Vec<usize>,
    /// `gens[l][col]` is an element of `R` (length `c`).
    gens: Vec<Vec<Vec<u64>>>,
}

impl FreeSubmodule {
    /// `R^m` itself.
    pub fn whole(c: usize, m: usize) -> Self {
        let gens = (0..m)
            .map(|l| {
                (0..m)
                    .map(|col| {
                        let mut e = vec![0u64; c];
                        e[0] = u64::from(l == col);
                        e
                    })
                    .collect()
            })
            .collect();
        FreeSubmodule {
            c,
            m,
            pivots: (0..m).collect(),
            gens,
        }
    }

    /// The `F_p`-basis `ε^a g_l` in block coordinates (`col * c + a`).
    pub fn basis(&self, p: u64) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        for g in &self.gens {
            for a in 0..self.c {
                let mut v = vec![0u64; self.c * self.m];
                for (col, coeffs) in g.iter().enumerate() {
                    for (b, x) in coeffs.iter().enumerate() {
                        if a + b < self.c {
                            v[col * self.c + a + b] = (v[col * self.c + a + b] + x) % p;
                        }
                    }
                }
                out.push(v);
            }
        }
        out
    }

    pub fn contains(&self, p: u64, w: &[u64]) -> bool {
        let c = self.c;
        let lambda: Vec<&[u64]> = self.pivots.iter().map(|&pc| &w[pc * c..(pc + 1) * c]).collect();
        (0..self.m).filter(|col| !self.pivots.contains(col)).all(|col| {
            let mut expected = vec![0u64; c];
            for (l, lam) in lambda.iter().enumerate() {
                for (a, x) in rmul(p, lam, &self.gens[l][col], c).into_iter().enumerate() {
                    expected[a] = (expected[a] + x) % p;
                }
            }
            expected[..] == w[col * c..(col + 1) * c]
        })
    }
}

/// Number of free rank-`r` submodules of `R^m`, `R = F_p[ε]/ε^c`, from the
/// normal form: echelon shapes times free higher coefficients.
pub fn free_submodule_count(p: u64, c: usize, m: usize, r: usize) -> u128 {
    if r > m {
        return 0;
    }
    rref_shapes(p, r, m).len() as u128 * (p as u128).pow(((c - 1) * r * (m - r)) as u32)
}

/// Every free rank-`r` submodule of `R^m`, `R = F_p[ε]/ε^c`.
pub fn free_submodules(p: u64, c: usize, m: usize, r: usize) -> Vec<FreeSubmodule> {
    let mut out = Vec::new();
    for (pivots, consts) in rref_shapes(p, r, m) {
        let slots: Vec<(usize, usize)> = (0..r)
            .flat_map(|l| (0..m).filter(|col| !pivots.contains(col)).map(move |col| (l, col)))
            .collect();
        for vals in odometer(p, slots.len() * (c - 1)) {
            let mut gens: Vec<Vec<Vec<u64>>> = (0..r)
                .map(|l| (0..m).map(|col| {
                    let mut e = vec![0u64; c];
                    e[0] = consts[l][col];
                    e
                }).collect())
                .collect();
            for (s, &(l, col)) in slots.iter().enumerate() {
                for a in 1..c {
                    gens[l][col][a] = vals[s * (c - 1) + a - 1];
                }
            }
            out.push(FreeSubmodule {
                c,
                m,
                pivots: pivots.clone(),
                gens,
            });
        }
    }
    out
}

fn check_guard(ranks: &RankVector, d: &[i64]) -> Result<(), HmodError> {
    let total: i64 = ranks.0.iter().zip(d).map(|(m, c)| m * c).sum();
    if total as usize > DIM_GUARD {
        return Err(HmodError::GuardExceeded(format!(
            "total dimension {total} exceeds {DIM_GUARD}"
        )));
    }
    Ok(())
}

/// Number of locally free submodules of rank `r` of a module over `F_q`.
pub fn count_lf_submodules(
    m: &LfModuleRep<PrimeField>,
    r: &RankVector,
) -> Result<GrCount, HmodError> {
    let cd = m.cd();
    let n = cd.n();
    check_guard(m.ranks(), cd.symmetrizer())?;
    let p = m.field().p();
    let result = |count| GrCount {
        q: p,
        r: r.clone(),
        count,
    };
    if r.0.len() != n {
        return Err(HmodError::Shape(format!("rank vector {r} has wrong length")));
    }
    if (0..n).any(|i| r.0[i] < 0 || r.0[i] > m.ranks().0[i]) {
        return Ok(result(0));
    }
    let m = if m.is_block_form() {
        m.clone()
    } else {
        m.to_block_form()?
    };
    let f = *m.field();
    let involved: Vec<bool> = (0..n)
        .map(|v| {
            m.arrows()
                .iter()
                .any(|(&(i, j, _), a)| (i == v || j == v) && !linalg::is_zero(&f, a))
        })
        .collect();
    // a vertex no nonzero arrow touches contributes an independent factor
    let mut factor: u128 = 1;
    let cands: Vec<Vec<FreeSubmodule>> = (0..n)
        .map(|i| {
            let (c, mi, ri) = (cd.d(i) as usize, m.ranks().0[i] as usize, r.0[i] as usize);
            if involved[i] {
                free_submodules(p, c, mi, ri)
            } else {
                factor *= free_submodule_count(p, c, mi, ri);
                vec![FreeSubmodule::whole(c, 0)]
            }
        })
        .collect();
    let work: u128 = cands.iter().map(|c| c.len() as u128).product();
    if work > WORK_GUARD {
        return Err(HmodError::GuardExceeded(format!(
            "{work} candidate tuples over F_{p}"
        )));
    }
    let bases: Vec<Vec<Vec<Vec<u64>>>> = cands
        .iter()
        .map(|cs| cs.iter().map(|s| s.basis(p)).collect())
        .collect();
    // arrows checked once both endpoints are chosen
    let mut checks: Vec<Vec<(usize, usize, Mat<u64>)>> = vec![Vec::new(); n];
    for (&(i, j, _), a) in m.arrows() {
        if involved[i] && involved[j] {
            checks[i.max(j)].push((i, j, a.clone()));
        }
    }
    let mut choice = vec![0usize; n];
    Ok(result(factor * count_rec(&f, p, 0, &cands, &bases, &checks, &mut choice)))
}

fn count_rec(
    f: &PrimeField,
    p: u64,
    v: usize,
    cands: &[Vec<FreeSubmodule>],
    bases: &[Vec<Vec<Vec<u64>>>],
    checks: &[Vec<(usize, usize, Mat<u64>)>],
    choice: &mut Vec<usize>,
) -> u128 {
    if v == cands.len() {
        return 1;
    }
    let mut total = 0;
    for s in 0..cands[v].len() {
        choice[v] = s;
        let closed = checks[v].iter().all(|(i, j, a)| {
            let target = &cands[*i][choice[*i]];
            bases[*j][choice[*j]]
                .iter()
                .all(|b| target.contains(p, &linalg::mul_vec(f, a, b)))
        });
        if closed {
            total += count_rec(f, p, v + 1, cands, bases, checks, choice);
        }
    }
    total
}

/// Value at `x0` of the interpolating polynomial through `points`.
pub fn lagrange_at(points: &[(u64, Integer)], x0: i64) -> Rational {
    let mut total = Rational::ZERO;
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut term = Rational::from(yi.clone());
        for (j, (xj, _)) in points.iter().enumerate() {
            if i != j {
                term *= Rational::from(x0 - *xj as i64);
                term /= Rational::from(*xi as i64 - *xj as i64);
            }
        }
        total += term;
    }
    total
}

/// Fits the count polynomial of degree at most `degree` through
/// `degree + 1` primes, confirms it on one more prime, and evaluates it at 1.
pub fn interpolate_at_one(
    degree: usize,
    exec: Exec,
    count: impl Fn(u64) -> Result<Option<u128>, HmodError> + Sync + Send,
) -> Result<Integer, HmodError> {
    let need = degree + 2;
    let mut points: Vec<(u64, Integer)> = Vec::with_capacity(need);
    let mut candidates = primes();
    while points.len() < need {
        let batch: Vec<u64> = candidates.by_ref().take(need - points.len()).collect();
        for (p, c) in batch.iter().zip(exec.map(&batch, |&p| count(p))) {
            // primes where the data does not reduce are skipped
            if let Some(v) = c? {
                points.push((*p, Integer::from(v)));
            }
        }
    }
    let (fit, held) = points.split_at(degree + 1);
    let (hp, hv) = &held[0];
    if lagrange_at(fit, *hp as i64) != Rational::from(hv.clone()) {
        return Err(HmodError::NonPolynomialCount(format!(
            "counts at primes up to {} are not fit by a polynomial of degree {degree}",
            hp
        )));
    }
    let at_one = lagrange_at(fit, 1);
    Integer::try_from(&at_one).map_err(|_| {
        HmodError::NonPolynomialCount(format!("value at q = 1 is {at_one}, not an integer"))
    })
}

/// Degree bound `Σ c_i r_i (m_i - r_i)` for the count of rank-`r` submodules.
pub fn degree_bound(ranks: &RankVector, r: &RankVector, d: &[i64]) -> usize {
    (0..d.len())
        .map(|i| (d[i] * r.0[i] * (ranks.0[i] - r.0[i])).max(0) as usize)
        .sum()
}

/// `χ(Gr_lf(r, M))` by counting over prime fields.
pub fn euler_char_gr(
    template: &ModuleTemplate,
    r: &RankVector,
    exec: Exec,
) -> Result<Integer, HmodError> {
    let ranks = template.ranks()?;
    let cd = template.cd()?;
    check_guard(&ranks, cd.symmetrizer())?;
    if r.0.len() != ranks.0.len() {
        return Err(HmodError::Shape(format!("rank vector {r} has wrong length")));
    }
    if r.0.iter().zip(&ranks.0).any(|(a, m)| *a < 0 || a > m) {
        return Ok(Integer::ZERO);
    }
    let degree = degree_bound(&ranks, r, cd.symmetrizer());
    interpolate_at_one(degree, exec, |p| {
        Ok(match template.over_prime(p)? {
            Some(m) => Some(count_lf_submodules(&m, r)?.count),
            None => None,
        })
    })
}

/// The whole F-polynomial `Σ_r χ(Gr_lf(r, M)) y^r` by counting.
pub fn f_poly_by_counting(template: &ModuleTemplate, exec: Exec) -> Result<LaurentPoly, HmodError> {
    let ranks = template.ranks()?;
    let n = ranks.0.len();
    let mut points: Vec<Vec<i64>> = vec![Vec::new()];
    for i in 0..n {
        points = points
            .into_iter()
            .flat_map(|p| {
                (0..=ranks.0[i]).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    let mut terms = Vec::new();
    for r in points {
        let chi = euler_char_gr(template, &RankVector(r.clone()), exec)?;
        terms.push((r, chi));
    }
    Ok(LaurentPoly::from_terms(n, terms))
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `χ` of `{N free of rank e : L ⊂ N ⊂ M}` where `M` has maximal free
/// submodules of rank `m` and `L` has injective hull of rank `l`.
pub fn chi_fiber(m: u64, l: u64, e: u64) -> Result<u64, HmodError> {
    if !(l <= e && e <= m) {
        return Err(HmodError::Domain(format!("need l <= e <= m, got ({m},{l},{e})")));
    }
    Ok(binomial(m - l, e - l))
}

/// `χ` of `{N ⊂ M free of rank e}` where `M` has maximal free submodules of rank `m`.
pub fn chi_free(m: u64, e: u64) -> Result<u64, HmodError> {
    if e > m {
        return Err(HmodError::Domain(format!("need e <= m, got ({m},{e})")));
    }
    Ok(binomial(m, e))
}

/// `M = R^m ⊕ T` over `R = F_p[ε]/ε^n`, `T = ⊕ R/ε^{t_u}` with `t_u < n`,
/// together with generators `ε^{s}(u, τ)` of a submodule `L`.
#[derive(Clone, Debug)]
pub struct FiberInstance {
    pub n: usize,
    pub m: usize,
    pub torsion: Vec<usize>,
    pub l_gens: Vec<FiberGen>,
}

/// The generator `ε^shift (u, τ)` with `u ∈ Z^m` and `τ_u` a coefficient list.
#[derive(Clone, Debug)]
pub struct FiberGen {
    pub shift: usize,
    pub free: Vec<i64>,
    pub tors: Vec<Vec<i64>>,
}

impl FiberInstance {
    pub fn torsion_dim(&self) -> usize {
        self.torsion.iter().sum()
    }

    fn validate(&self) -> Result<(), HmodError> {
        let ok = self.torsion.iter().all(|&t| t < self.n)
            && self.l_gens.iter().all(|g| {
                g.shift < self.n
                    && g.free.len() == self.m
                    && g.tors.len() == self.torsion.len()
                    && g.tors.iter().zip(&self.torsion).all(|(v, &t)| v.len() <= t)
            });
        if ok {
            Ok(())
        } else {
            Err(HmodError::Domain("malformed fiber instance".into()))
        }
    }

    /// Number of free rank-`e` submodules `N` with `L ⊂ N ⊂ M` over `F_p`.
    ///
    /// `N` is the graph of an `R`-linear map `P -> T` on a free summand `P`
    /// of `R^m`; for each reduction of `P` mod `ε` the remaining parameters
    /// are cut out by an affine system.
    pub fn count(&self, e: usize, p: u64) -> Result<u128, HmodError> {
        self.validate()?;
        let f = PrimeField::new(p).ok_or_else(|| HmodError::Domain(format!("{p} is not prime")))?;
        let (n, m) = (self.n, self.m);
        if e > m {
            return Ok(0);
        }
        let gens: Vec<(Vec<Vec<u64>>, Vec<Vec<u64>>)> = self
            .l_gens
            .iter()
            .map(|g| {
                let free = g
                    .free
                    .iter()
                    .map(|&x| {
                        let mut v = vec![0u64; n];
                        v[g.shift] = f.from_i64(x);
                        v
                    })
                    .collect();
                let tors = g
                    .tors
                    .iter()
                    .zip(&self.torsion)
                    .map(|(coeffs, &t)| {
                        let mut v = vec![0u64; t];
                        for (a, &x) in coeffs.iter().enumerate() {
                            if a + g.shift < t {
                                v[a + g.shift] = f.from_i64(x);
                            }
                        }
                        v
                    })
                    .collect();
                (free, tors)
            })
            .collect();
        let mut total: u128 = 0;
        for (pivots, consts) in rref_shapes(p, e, m) {
            let nonpiv: Vec<usize> = (0..m).filter(|c| !pivots.contains(c)).collect();
            // unknowns: G[l][c]_a (a >= 1) then φ[l][u][b]
            let g_var = |l: usize, ci: usize, a: usize| (l * nonpiv.len() + ci) * (n - 1) + a - 1;
            let g_count = e * nonpiv.len() * (n - 1);
            let mut t_offsets = Vec::new();
            let mut acc = g_count;
            for _ in 0..e {
                let mut row = Vec::new();
                for &t in &self.torsion {
                    row.push(acc);
                    acc += t;
                }
                t_offsets.push(row);
            }
            let unknowns = acc;
            let mut eqs: Vec<(Vec<u64>, u64)> = Vec::new();
            for (x_free, x_tors) in &gens {
                let lambda: Vec<&Vec<u64>> = pivots.iter().map(|&pc| &x_free[pc]).collect();
                for (ci, &col) in nonpiv.iter().enumerate() {
                    for b in 0..n {
                        let mut row = vec![0u64; unknowns];
                        let mut rhs = x_free[col][b];
                        for (l, lam) in lambda.iter().enumerate() {
                            rhs = f.sub(&rhs, &f.mul(&lam[b], &consts[l][col]));
                            for a in 1..=b {
                                let v = g_var(l, ci, a);
                                row[v] = f.add(&row[v], &lam[b - a]);
                            }
                        }
                        eqs.push((row, rhs));
                    }
                }
                for (u, &t) in self.torsion.iter().enumerate() {
                    for b in 0..t {
                        let mut row = vec![0u64; unknowns];
                        for (l, lam) in lambda.iter().enumerate() {
                            for a in 0..=b {
                                let v = t_offsets[l][u] + b - a;
                                row[v] = f.add(&row[v], &lam[a]);
                            }
                        }
                        eqs.push((row, x_tors[u][b]));
                    }
                }
            }
            let a = Mat::from_vec(
                eqs.len(),
                unknowns,
                eqs.iter().flat_map(|(r, _)| r.iter().copied()).collect(),
            );
            let b = Mat::from_vec(eqs.len(), 1, eqs.iter().map(|(_, v)| *v).collect());
            let rank_a = linalg::rank(&f, &a);
            if linalg::rank(&f, &a.hstack(&b)) == rank_a {
                total += (p as u128).pow((unknowns - rank_a) as u32);
            }
        }
        Ok(total)
    }

    /// `χ` of the fiber variety by interpolating [`FiberInstance::count`].
    pub fn chi_by_counting(&self, e: usize, exec: Exec) -> Result<Integer, HmodError> {
        let degree = self.n * e * (self.m.saturating_sub(e)) + e * self.torsion_dim();
        interpolate_at_one(degree, exec, |p| Ok(Some(self.count(e, p)?)))
    }
}
