//! Cross-checks between the reflection recursion, seed mutation and counting.
//!
//! Every sweep yields a [`Report`] of `CASE <id> <OK|FAIL|SKIP> <detail>` lines
//! and a summary `OK k/N` or `FAIL k/N` over the non-skipped cases.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::cartan::{CartanData, CartanError, IndexSequence, RankVector};
use crate::ccrec::{self, CCSymbol, CcError};
use crate::cluster::{self, ClusterError};
use crate::exec::Exec;
use crate::hmod::{self, HmodError, ModuleTemplate};
use crate::laurent::LaurentPoly;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Cc(#[from] CcError),
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Hmod(#[from] HmodError),
    #[error("{0}")]
    Domain(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Ok => "OK",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Case {
    pub id: String,
    pub status: Status,
    pub detail: String,
}

impl Case {
    fn new(id: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        Case {
            id: id.into(),
            status,
            detail: detail.into(),
        }
    }

    fn check(id: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Case::new(id, if ok { Status::Ok } else { Status::Fail }, detail)
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CASE {} {} {}", self.id, self.status, self.detail)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub cases: Vec<Case>,
}

impl Report {
    fn count(&self, s: Status) -> usize {
        self.cases.iter().filter(|c| c.status == s).count()
    }

    pub fn passed(&self) -> usize {
        self.count(Status::Ok)
    }

    pub fn failed(&self) -> usize {
        self.count(Status::Fail)
    }

    pub fn skipped(&self) -> usize {
        self.count(Status::Skip)
    }

    /// Number of cases that were actually checked.
    pub fn checked(&self) -> usize {
        self.cases.len() - self.skipped()
    }

    pub fn all_ok(&self) -> bool {
        self.failed() == 0 && self.checked() > 0
    }

    pub fn summary(&self) -> String {
        let head = if self.all_ok() { "OK" } else { "FAIL" };
        let mut s = format!("{head} {}/{}", self.passed(), self.checked());
        if self.skipped() > 0 {
            s.push_str(&format!(" ({} skipped)", self.skipped()));
        }
        s
    }

    pub fn extend(&mut self, other: Report) {
        self.cases.extend(other.cases);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cases {
            writeln!(f, "{c}")?;
        }
        write!(f, "{}", self.summary())
    }
}

fn fmt_vec(v: &[i64]) -> String {
    RankVector(v.to_vec()).to_string()
}

/// Compares the reflection tower with the rank-2 recurrence for every `n` in
/// the half-open range `from..to` other than 1 and 2.
pub fn verify_rank2(
    b: i64,
    c: i64,
    c1: i64,
    c2: i64,
    from: i64,
    to: i64,
    exec: Exec,
) -> Result<Report, VerifyError> {
    let ns: Vec<i64> = (from..to).filter(|n| *n != 1 && *n != 2).collect();
    if ns.is_empty() {
        return Err(VerifyError::Domain(format!(
            "range {from}..{to} contains no index outside {{1, 2}}"
        )));
    }
    let hi = to - 1;
    let tower = ccrec::rank2_tower(b, c, c1, c2, from, hi)?;
    let vars = cluster::rank2_variables(b, c, from.min(1), hi.max(2))?;
    let cases = exec.map(&ns, |n| {
        let id = format!("n={n}");
        match ccrec::cc_from_f(&tower[n]) {
            Ok(cc) if cc == vars[n] => Case::check(id, true, format!("d={}", fmt_vec(&cc.d_vector()))),
            Ok(cc) => Case::check(id, false, format!("cc={cc} x={}", vars[n])),
            Err(e) => Case::check(id, false, e.to_string()),
        }
    });
    Ok(Report { cases })
}

/// For each positive root `β`: the CC-formula of an adapted sequence is a
/// non-initial cluster variable with d-vector `β`, and equals the variable
/// reached by mutating along the same sequence. A last case checks that these
/// exhaust the non-initial variables.
pub fn verify_dynkin(cd: &CartanData, exec: Exec) -> Result<Report, VerifyError> {
    let roots = cd.positive_roots()?;
    let vars = cluster::enumerate_finite_type_variables(
        cd.b_matrix(),
        cluster::DEFAULT_SEED_BUDGET,
        exec,
    )?;
    let non_initial: HashSet<LaurentPoly> = cluster::non_initial(&vars).into_iter().collect();
    let results = exec.map(&roots, |beta| root_case(cd, beta, &non_initial));
    let mut cases = Vec::new();
    let mut found = HashSet::new();
    for (case, cc) in results {
        if let Some(cc) = cc {
            found.insert(cc);
        }
        cases.push(case);
    }
    let bijective = found.len() == roots.len() && found == non_initial;
    cases.push(Case::check(
        "bijection",
        bijective,
        format!("roots={} variables={}", roots.len(), non_initial.len()),
    ));
    Ok(Report { cases })
}

fn root_case(
    cd: &CartanData,
    beta: &RankVector,
    non_initial: &HashSet<LaurentPoly>,
) -> (Case, Option<LaurentPoly>) {
    let id = format!("beta={beta}");
    let run = || -> Result<(LaurentPoly, IndexSequence, LaurentPoly), VerifyError> {
        let seq = cd.find_adapted_sequence(beta)?;
        let cc = ccrec::cc_of_sequence(cd, &seq)?;
        let mutated = cluster::variable_along(cd.b_matrix(), &seq.0)?;
        Ok((cc, seq, mutated))
    };
    match run() {
        Ok((cc, seq, mutated)) => {
            let d = cc.d_vector();
            let mut problems = Vec::new();
            if d != beta.0 {
                problems.push(format!("d={}", fmt_vec(&d)));
            }
            if !non_initial.contains(&cc) {
                problems.push("not a cluster variable".to_string());
            }
            if mutated != cc {
                problems.push(format!("mutation gives {mutated}"));
            }
            let case = if problems.is_empty() {
                Case::check(id, true, format!("seq={seq}"))
            } else {
                Case::check(id, false, format!("seq={seq} {}", problems.join("; ")))
            };
            let ok = case.status == Status::Ok;
            (case, ok.then_some(cc))
        }
        Err(e) => (Case::check(id, false, e.to_string()), None),
    }
}

/// A module with a known symbolic F-polynomial.
#[derive(Clone, Debug)]
pub struct OracleCase {
    pub id: String,
    pub symbol: CCSymbol,
    pub template: ModuleTemplate,
}

impl OracleCase {
    pub fn rank2(b: i64, c: i64, c1: i64, c2: i64, n: i64) -> Result<Self, VerifyError> {
        Ok(OracleCase {
            id: format!("M({n})"),
            symbol: ccrec::rank2_symbol(b, c, c1, c2, n)?,
            template: ModuleTemplate::rank2(b, c, c1, c2, n)?,
        })
    }

    pub fn sequence(label: &str, cd: &CartanData, seq: &IndexSequence) -> Result<Self, VerifyError> {
        Ok(OracleCase {
            id: format!("{label}:{seq}"),
            symbol: ccrec::symbol_of_sequence(cd, seq)?,
            template: ModuleTemplate::from_sequence(cd, seq)?,
        })
    }
}

/// The default oracle suite: the `(2,3,3,2)` tower around the initial seed and
/// an adapted sequence for every positive root of `B2` and `G2`.
pub fn default_oracle_cases() -> Result<Vec<OracleCase>, VerifyError> {
    let mut out = Vec::new();
    for n in [3, 4, 5, 0, -1, -2] {
        out.push(OracleCase::rank2(2, 3, 3, 2, n)?);
    }
    for (label, kind) in [("B2", 'B'), ("G2", 'G')] {
        let c = crate::cartan::dynkin_cartan(kind, 2)?;
        let omega = crate::cartan::preset_orientation(&c, crate::cartan::OrientationPreset::Ascending);
        let cd = CartanData::with_minimal_symmetrizer(c, omega)?;
        for beta in cd.positive_roots()? {
            let seq = cd.find_adapted_sequence(&beta)?;
            out.push(OracleCase::sequence(label, &cd, &seq)?);
        }
    }
    Ok(out)
}

/// Compares each symbolic F-polynomial with the one obtained by counting
/// submodules over prime fields. Modules beyond the enumeration guard are
/// reported as skipped.
pub fn verify_oracle(cases: &[OracleCase], exec: Exec) -> Report {
    let cases = exec.map(cases, |case| {
        let expected = case
            .symbol
            .f_poly()
            .expect("oracle cases are module symbols")
            .poly()
            .clone();
        match hmod::f_poly_by_counting(&case.template, exec) {
            Ok(counted) if counted == expected => {
                Case::check(&case.id, true, format!("F={}", counted.to_string_with('y')))
            }
            Ok(counted) => Case::check(
                &case.id,
                false,
                format!(
                    "symbolic {} counted {}",
                    expected.to_string_with('y'),
                    counted.to_string_with('y')
                ),
            ),
            Err(HmodError::GuardExceeded(why)) => Case::new(&case.id, Status::Skip, why),
            Err(e) => Case::check(&case.id, false, e.to_string()),
        }
    });
    Report { cases }
}
