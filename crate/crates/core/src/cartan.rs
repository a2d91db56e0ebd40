//! Symmetrizable Cartan matrices with a symmetrizer and an acyclic orientation.
//!
//! Indices are 0-based in the API; files and displays use 1-based indices.
//! A pair `(i, j)` in the orientation means arrows `j -> i`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type IntMatrix = Vec<Vec<i64>>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CartanError {
    #[error("not a Cartan matrix: {0}")]
    NotCartan(String),
    #[error("D is not a symmetrizer of C")]
    NotSymmetrizer,
    #[error("C is not symmetrizable")]
    NotSymmetrizable,
    #[error("not an orientation: {0}")]
    NotOrientation(String),
    #[error("orientation has a directed cycle")]
    CyclicOrientation,
    #[error("root system exceeds the enumeration bound (infinite type?)")]
    InfiniteType,
    #[error("{0} is not a positive root")]
    NotAPositiveRoot(RankVector),
    #[error("no adapted sequence found for {0}")]
    NoAdaptedSequence(RankVector),
    #[error("unknown Dynkin type {0}{1}")]
    UnknownType(char, usize),
    #[error("invalid Cartan file: {0}")]
    File(String),
}

/// A dimension or rank vector, also used for (possibly negative) roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RankVector(pub Vec<i64>);

impl RankVector {
    pub fn zero(n: usize) -> Self {
        RankVector(vec![0; n])
    }

    pub fn simple(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        RankVector(v)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// The index `i` if this is the simple root `α_i`.
    pub fn simple_index(&self) -> Option<usize> {
        let mut found = None;
        for (i, &x) in self.0.iter().enumerate() {
            match x {
                0 => {}
                1 if found.is_none() => found = Some(i),
                _ => return None,
            }
        }
        found
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl fmt::Display for RankVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Vertex indices (0-based); displayed 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSequence(pub Vec<usize>);

impl fmt::Display for IndexSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| (x + 1).to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexKind {
    Sink,
    Source,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    c: IntMatrix,
    d: Vec<i64>,
    omega: BTreeSet<(usize, usize)>,
    g: IntMatrix,
    f: IntMatrix,
    b: IntMatrix,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn check_cartan(c: &IntMatrix) -> Result<usize, CartanError> {
    let n = c.len();
    if n == 0 {
        return Err(CartanError::NotCartan("empty matrix".into()));
    }
    for (i, row) in c.iter().enumerate() {
        if row.len() != n {
            return Err(CartanError::NotCartan("matrix is not square".into()));
        }
        if row[i] != 2 {
            return Err(CartanError::NotCartan(format!("c_{0}{0} != 2", i + 1)));
        }
        for (j, &x) in row.iter().enumerate() {
            if i != j && x > 0 {
                return Err(CartanError::NotCartan(format!(
                    "positive off-diagonal entry c_{}{}",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if (c[i][j] == 0) != (c[j][i] == 0) {
                return Err(CartanError::NotSymmetrizable);
            }
        }
    }
    Ok(n)
}

/// The componentwise-minimal positive integer symmetrizer of `c`.
pub fn minimal_symmetrizer(c: &IntMatrix) -> Result<Vec<i64>, CartanError> {
    let n = check_cartan(c)?;
    // d_i as reduced fractions num/den, assigned along a spanning forest
    let mut frac: Vec<Option<(i64, i64)>> = vec![None; n];
    let mut d = vec![0i64; n];
    for root in 0..n {
        if frac[root].is_some() {
            continue;
        }
        frac[root] = Some((1, 1));
        let mut component = vec![root];
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            let (pn, pd) = frac[i].unwrap();
            for j in 0..n {
                if j == i || c[i][j] == 0 {
                    continue;
                }
                // c_i c_ij = c_j c_ji  =>  c_j = c_i c_ij / c_ji
                let (mut qn, mut qd) = (pn * c[i][j], pd * c[j][i]);
                if qd < 0 {
                    qn = -qn;
                    qd = -qd;
                }
                let g = gcd(qn, qd);
                let (qn, qd) = (qn / g, qd / g);
                match frac[j] {
                    None => {
                        frac[j] = Some((qn, qd));
                        component.push(j);
                        queue.push_back(j);
                    }
                    Some(existing) if existing != (qn, qd) => {
                        return Err(CartanError::NotSymmetrizable);
                    }
                    Some(_) => {}
                }
            }
        }
        let lcm = component.iter().fold(1i64, |acc, &i| {
            let den = frac[i].unwrap().1;
            acc / gcd(acc, den) * den
        });
        let mut vals: Vec<i64> = component
            .iter()
            .map(|&i| {
                let (num, den) = frac[i].unwrap();
                num * (lcm / den)
            })
            .collect();
        let g = vals.iter().fold(0, |acc, &v| gcd(acc, v));
        for v in vals.iter_mut() {
            *v /= g;
        }
        for (&i, v) in component.iter().zip(vals) {
            d[i] = v;
        }
    }
    Ok(d)
}

/// Standard Cartan matrices `A_n, B_n, C_n, D_n, G_2`. In `B_n` the double
/// bond has `c_{n,n-1} = -2`; `C_n` is its transpose.
pub fn dynkin_cartan(kind: char, n: usize) -> Result<IntMatrix, CartanError> {
    let kind = kind.to_ascii_uppercase();
    let valid = match kind {
        'A' => n >= 1,
        'B' | 'C' => n >= 2,
        'D' => n >= 4,
        'G' => n == 2,
        _ => false,
    };
    if !valid {
        return Err(CartanError::UnknownType(kind, n));
    }
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let chain = if kind == 'D' { n - 1 } else { n };
    for i in 0..chain.saturating_sub(1) {
        c[i][i + 1] = -1;
        c[i + 1][i] = -1;
    }
    match kind {
        'B' => c[n - 1][n - 2] = -2,
        'C' => c[n - 2][n - 1] = -2,
        'D' => {
            c[n - 3][n - 1] = -1;
            c[n - 1][n - 3] = -1;
        }
        'G' => c[1][0] = -3,
        _ => {}
    }
    Ok(c)
}

/// Orientation presets for Cartan matrices whose graph is a forest.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrientationPreset {
    /// arrows `i -> j` for `i < j`
    Ascending,
    /// arrows `j -> i` for `i < j`
    Descending,
    /// every vertex a sink or a source
    Bipartite,
}

pub fn preset_orientation(c: &IntMatrix, preset: OrientationPreset) -> Vec<(usize, usize)> {
    let n = c.len();
    let mut color = vec![usize::MAX; n];
    for root in 0..n {
        if color[root] != usize::MAX {
            continue;
        }
        color[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if j != i && c[i][j] != 0 && color[j] == usize::MAX {
                    color[j] = 1 - color[i];
                    queue.push_back(j);
                }
            }
        }
    }
    let mut omega = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if c[i][j] == 0 {
                continue;
            }
            let arrow_up = match preset {
                OrientationPreset::Ascending => true,
                OrientationPreset::Descending => false,
                OrientationPreset::Bipartite => color[i] == 0,
            };
            omega.push(if arrow_up { (j, i) } else { (i, j) });
        }
    }
    omega
}

impl CartanData {
    /// Validates `(C, D, Ω)`; `omega` uses 0-based pairs.
    pub fn new(
        c: IntMatrix,
        d: Vec<i64>,
        omega: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, CartanError> {
        let n = check_cartan(&c)?;
        if d.len() != n || d.iter().any(|&x| x <= 0) {
            return Err(CartanError::NotSymmetrizer);
        }
        for i in 0..n {
            for j in 0..n {
                if d[i] * c[i][j] != d[j] * c[j][i] {
                    return Err(CartanError::NotSymmetrizer);
                }
            }
        }
        let omega: BTreeSet<(usize, usize)> = omega.into_iter().collect();
        for &(i, j) in &omega {
            if i >= n || j >= n || i == j {
                return Err(CartanError::NotOrientation(format!(
                    "invalid pair ({},{})",
                    i + 1,
                    j + 1
                )));
            }
            if omega.contains(&(j, i)) {
                return Err(CartanError::NotOrientation(format!(
                    "both ({0},{1}) and ({1},{0}) present",
                    i + 1,
                    j + 1
                )));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let oriented = omega.contains(&(i, j)) || omega.contains(&(j, i));
                if i != j && oriented != (c[i][j] < 0) {
                    return Err(CartanError::NotOrientation(format!(
                        "edge {{{},{}}} orientation does not match C",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        if has_cycle(n, &omega) {
            return Err(CartanError::CyclicOrientation);
        }
        Ok(Self::derive(c, d, omega))
    }

    /// Like [`CartanData::new`] with the minimal symmetrizer.
    pub fn with_minimal_symmetrizer(
        c: IntMatrix,
        omega: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, CartanError> {
        let d = minimal_symmetrizer(&c)?;
        Self::new(c, d, omega)
    }

    /// The rank-2 data with `C = [[2,-b],[-c,2]]`, `D = (c1, c2)` and arrow `1 -> 2`.
    pub fn rank2(b: i64, c: i64, c1: i64, c2: i64) -> Result<Self, CartanError> {
        Self::new(vec![vec![2, -b], vec![-c, 2]], vec![c1, c2], [(1, 0)])
    }

    fn derive(c: IntMatrix, d: Vec<i64>, omega: BTreeSet<(usize, usize)>) -> Self {
        let n = c.len();
        let mut g = vec![vec![0; n]; n];
        let mut f = vec![vec![0; n]; n];
        let mut b = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j || c[i][j] == 0 {
                    continue;
                }
                g[i][j] = gcd(c[i][j], c[j][i]);
                f[i][j] = -c[i][j] / g[i][j];
                if omega.contains(&(j, i)) {
                    b[i][j] = c[i][j];
                } else if omega.contains(&(i, j)) {
                    b[i][j] = -c[i][j];
                }
            }
        }
        CartanData {
            c,
            d,
            omega,
            g,
            f,
            b,
        }
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    pub fn c(&self, i: usize, j: usize) -> i64 {
        self.c[i][j]
    }

    pub fn c_matrix(&self) -> &IntMatrix {
        &self.c
    }

    /// The symmetrizer entry `c_i`.
    pub fn d(&self, i: usize) -> i64 {
        self.d[i]
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.d
    }

    pub fn omega(&self) -> &BTreeSet<(usize, usize)> {
        &self.omega
    }

    pub fn g(&self, i: usize, j: usize) -> i64 {
        self.g[i][j]
    }

    pub fn f(&self, i: usize, j: usize) -> i64 {
        self.f[i][j]
    }

    pub fn b(&self, i: usize, j: usize) -> i64 {
        self.b[i][j]
    }

    pub fn b_matrix(&self) -> &IntMatrix {
        &self.b
    }

    /// `Ω(k,-)`: tails of arrows ending at `k`.
    pub fn arrows_into(&self, k: usize) -> Vec<usize> {
        self.omega
            .iter()
            .filter(|&&(i, _)| i == k)
            .map(|&(_, j)| j)
            .collect()
    }

    /// `Ω(-,k)`: heads of arrows starting at `k`.
    pub fn arrows_out_of(&self, k: usize) -> Vec<usize> {
        self.omega
            .iter()
            .filter(|&&(_, j)| j == k)
            .map(|&(i, _)| i)
            .collect()
    }

    pub fn is_sink(&self, k: usize) -> bool {
        self.omega.iter().all(|&(_, j)| j != k)
    }

    pub fn is_source(&self, k: usize) -> bool {
        self.omega.iter().all(|&(i, _)| i != k)
    }

    /// Isolated vertices are reported as sinks.
    pub fn sink_source(&self, k: usize) -> VertexKind {
        if self.is_sink(k) {
            VertexKind::Sink
        } else if self.is_source(k) {
            VertexKind::Source
        } else {
            VertexKind::Neither
        }
    }

    /// Replaces `Ω` by `s_k(Ω)`. Fails only if `k` is neither a sink nor a
    /// source and the flipped orientation has a cycle.
    pub fn reflect_orientation(&self, k: usize) -> Result<CartanData, CartanError> {
        let omega: BTreeSet<(usize, usize)> = self
            .omega
            .iter()
            .map(|&(r, s)| if r == k || s == k { (s, r) } else { (r, s) })
            .collect();
        if has_cycle(self.n(), &omega) {
            return Err(CartanError::CyclicOrientation);
        }
        let out = Self::derive(self.c.clone(), self.d.clone(), omega);
        debug_assert!(
            self.sink_source(k) == VertexKind::Neither
                || out.b == crate::cluster::mutate_matrix(&self.b, k)
        );
        Ok(out)
    }

    /// `s_k(v) = v - (Σ_i c_ki v_i) α_k`.
    pub fn reflect_root(&self, k: usize, v: &RankVector) -> RankVector {
        let pairing: i64 = (0..self.n()).map(|i| self.c[k][i] * v.0[i]).sum();
        let mut out = v.clone();
        out.0[k] -= pairing;
        out
    }

    /// `⟨a, b⟩_H` with `⟨α_i, α_i⟩ = c_i` and `⟨α_i, α_j⟩ = c_i c_ij` for `(j,i) ∈ Ω`.
    pub fn bilinear_form_h(&self, a: &RankVector, b: &RankVector) -> i64 {
        let n = self.n();
        let mut total = 0;
        for i in 0..n {
            if a.0[i] == 0 {
                continue;
            }
            total += a.0[i] * b.0[i] * self.d[i];
            for j in 0..n {
                if self.omega.contains(&(j, i)) {
                    total += a.0[i] * b.0[j] * self.d[i] * self.c[i][j];
                }
            }
        }
        total
    }

    /// Positive roots reachable from simple roots by simple reflections,
    /// sorted by height then lexicographically.
    pub fn positive_roots(&self) -> Result<Vec<RankVector>, CartanError> {
        self.positive_roots_bounded(10_000, 1_000_000)
    }

    pub fn positive_roots_bounded(
        &self,
        max_roots: usize,
        max_entry: i64,
    ) -> Result<Vec<RankVector>, CartanError> {
        let n = self.n();
        let mut seen: HashSet<RankVector> = HashSet::new();
        let mut queue: VecDeque<RankVector> = VecDeque::new();
        for i in 0..n {
            let a = RankVector::simple(n, i);
            seen.insert(a.clone());
            queue.push_back(a);
        }
        while let Some(r) = queue.pop_front() {
            for k in 0..n {
                let s = self.reflect_root(k, &r);
                if !s.is_nonnegative() || s.is_zero() || seen.contains(&s) {
                    continue;
                }
                if s.0.iter().any(|&x| x > max_entry) || seen.len() >= max_roots {
                    return Err(CartanError::InfiniteType);
                }
                seen.insert(s.clone());
                queue.push_back(s);
            }
        }
        let mut roots: Vec<RankVector> = seen.into_iter().collect();
        roots.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| a.cmp(b)));
        Ok(roots)
    }

    /// Shortest adapted sequence `(i_1,…,i_k,i_{k+1})` with
    /// `β = s_{i_1}⋯s_{i_k}(α_{i_{k+1}})`, lexicographically smallest among
    /// the shortest.
    pub fn find_adapted_sequence(&self, beta: &RankVector) -> Result<IndexSequence, CartanError> {
        if !self.positive_roots()?.contains(beta) {
            return Err(CartanError::NotAPositiveRoot(beta.clone()));
        }
        if let Some(i) = beta.simple_index() {
            return Ok(IndexSequence(vec![i]));
        }
        let mut visited: HashSet<(BTreeSet<(usize, usize)>, RankVector)> = HashSet::new();
        let mut queue: VecDeque<(CartanData, RankVector, Vec<usize>)> = VecDeque::new();
        visited.insert((self.omega.clone(), beta.clone()));
        queue.push_back((self.clone(), beta.clone(), Vec::new()));
        while let Some((cd, gamma, path)) = queue.pop_front() {
            for k in 0..self.n() {
                if !cd.is_sink(k) {
                    continue;
                }
                let next = cd.reflect_root(k, &gamma);
                if !next.is_nonnegative() || next.is_zero() {
                    continue;
                }
                let mut p = path.clone();
                p.push(k);
                if let Some(i) = next.simple_index() {
                    p.push(i);
                    return Ok(IndexSequence(p));
                }
                let ncd = cd.reflect_orientation(k)?;
                if visited.insert((ncd.omega.clone(), next.clone())) {
                    queue.push_back((ncd, next, p));
                }
            }
        }
        Err(CartanError::NoAdaptedSequence(beta.clone()))
    }

    /// Each index but the last must be a sink of the orientation reached so far.
    pub fn is_adapted(&self, seq: &IndexSequence) -> bool {
        self.walk(seq, |cd, k| cd.is_sink(k))
    }

    /// Each index but the last must be a sink or a source of the orientation
    /// reached so far.
    pub fn is_admissible(&self, seq: &IndexSequence) -> bool {
        self.walk(seq, |cd, k| cd.is_sink(k) || cd.is_source(k))
    }

    fn walk(&self, seq: &IndexSequence, ok: impl Fn(&CartanData, usize) -> bool) -> bool {
        if seq.0.is_empty() || seq.0.iter().any(|&k| k >= self.n()) {
            return false;
        }
        let mut cd = self.clone();
        for &k in &seq.0[..seq.0.len() - 1] {
            if !ok(&cd, k) {
                return false;
            }
            cd = cd.reflect_orientation(k).expect("sink/source reflection is acyclic");
        }
        true
    }

    /// The orientation reached after reflecting at every index of `prefix`.
    pub fn reflect_along(&self, prefix: &[usize]) -> Result<CartanData, CartanError> {
        prefix
            .iter()
            .try_fold(self.clone(), |cd, &k| cd.reflect_orientation(k))
    }

    pub fn to_file(&self) -> CartanFile {
        CartanFile {
            c: self.c.clone(),
            d: Some(self.d.clone()),
            omega: self.omega.iter().map(|&(i, j)| [i + 1, j + 1]).collect(),
        }
    }
}

fn has_cycle(n: usize, omega: &BTreeSet<(usize, usize)>) -> bool {
    // Kahn's algorithm on arrows j -> i
    let mut indeg = vec![0usize; n];
    for &(i, _) in omega {
        indeg[i] += 1;
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut removed = 0;
    while let Some(v) = queue.pop_front() {
        removed += 1;
        for &(i, j) in omega {
            if j == v {
                indeg[i] -= 1;
                if indeg[i] == 0 {
                    queue.push_back(i);
                }
            }
        }
    }
    removed != n
}

/// JSON form: `{"C": [[..]], "D": [..] (optional), "Omega": [[i,j], ..]}`, 1-based.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CartanFile {
    #[serde(rename = "C")]
    pub c: IntMatrix,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<i64>>,
    #[serde(rename = "Omega")]
    pub omega: Vec<[usize; 2]>,
}

impl CartanFile {
    pub fn into_cartan(self) -> Result<CartanData, CartanError> {
        let mut omega = Vec::with_capacity(self.omega.len());
        for [i, j] in self.omega {
            if i == 0 || j == 0 {
                return Err(CartanError::File("Omega indices are 1-based".into()));
            }
            omega.push((i - 1, j - 1));
        }
        let d = match self.d {
            Some(d) => d,
            None => minimal_symmetrizer(&self.c)?,
        };
        CartanData::new(self.c, d, omega)
    }
}

pub fn cartan_from_json(text: &str) -> Result<CartanData, CartanError> {
    let file: CartanFile =
        serde_json::from_str(text).map_err(|e| CartanError::File(e.to_string()))?;
    file.into_cartan()
}
