use super::field::{Field, PrimeField, Rationals};
use super::module::{make_e, LfModuleRep};
use super::reflect::reflect_module;
use super::HmodError;
use crate::cartan::{CartanData, IndexSequence, RankVector};
use crate::ccrec::Direction;

/// A module that can be rebuilt over any prime field.
#[derive(Clone, Debug)]
pub enum ModuleTemplate {
    /// Data over `Q`, reduced modulo each prime (primes dividing a
    /// denominator are skipped).
    Fixed(LfModuleRep<Rationals>),
    /// `E_start` over `cd`, followed by the listed reflections in order.
    Reflections {
        cd: CartanData,
        start: usize,
        steps: Vec<(usize, Direction)>,
    },
}

impl ModuleTemplate {
    /// The `M(n)` tower of the rank-2 data `(b, c, c1, c2)`.
    pub fn rank2(b: i64, c: i64, c1: i64, c2: i64, n: i64) -> Result<Self, HmodError> {
        if n == 1 || n == 2 {
            return Err(HmodError::Domain("M(n) is defined for n <= 0 or n >= 3".into()));
        }
        let h = CartanData::rank2(b, c, c1, c2)?;
        let (count, dir, start) = if n >= 3 {
            let s = n - 3;
            (s, Direction::Plus, if s % 2 == 0 { 0 } else { 1 })
        } else {
            let s = -n;
            (s, Direction::Minus, if s % 2 == 0 { 1 } else { 0 })
        };
        let cd = if count % 2 == 1 { h.reflect_orientation(0)? } else { h };
        let mut cur = cd.clone();
        let mut steps = Vec::new();
        for _ in 0..count {
            let k = (0..2)
                .find(|&k| match dir {
                    Direction::Plus => cur.is_sink(k),
                    Direction::Minus => cur.is_source(k),
                })
                .expect("rank-2 orientation has a sink and a source");
            steps.push((k, dir));
            cur = cur.reflect_orientation(k)?;
        }
        Ok(ModuleTemplate::Reflections { cd, start, steps })
    }

    /// `F_{i_1}^± ⋯ F_{i_k}^±(E_{i_{k+1}})` for an admissible sequence that
    /// never reflects `E_k` at `k`.
    pub fn from_sequence(cd: &CartanData, seq: &IndexSequence) -> Result<Self, HmodError> {
        if !cd.is_admissible(seq) {
            return Err(HmodError::Domain(format!("sequence {seq} is not admissible")));
        }
        let k = seq.0.len() - 1;
        let top = cd.reflect_along(&seq.0[..k])?;
        let mut cur = top.clone();
        let mut steps = Vec::new();
        for l in (0..k).rev() {
            let i = seq.0[l];
            let dir = if cur.is_sink(i) { Direction::Plus } else { Direction::Minus };
            steps.push((i, dir));
            cur = cur.reflect_orientation(i)?;
        }
        let t = ModuleTemplate::Reflections {
            cd: top,
            start: seq.0[k],
            steps,
        };
        t.ranks()?;
        Ok(t)
    }

    /// The final orientation.
    pub fn cd(&self) -> Result<CartanData, HmodError> {
        match self {
            ModuleTemplate::Fixed(m) => Ok(m.cd().clone()),
            ModuleTemplate::Reflections { cd, steps, .. } => {
                let ks: Vec<usize> = steps.iter().map(|s| s.0).collect();
                Ok(cd.reflect_along(&ks)?)
            }
        }
    }

    /// Rank vector, assuming each reflection transports ranks by `s_k`.
    pub fn ranks(&self) -> Result<RankVector, HmodError> {
        match self {
            ModuleTemplate::Fixed(m) => Ok(m.ranks().clone()),
            ModuleTemplate::Reflections { cd, start, steps } => {
                let mut r = RankVector::simple(cd.n(), *start);
                for &(k, _) in steps {
                    if r.simple_index() == Some(k) {
                        return Err(HmodError::Domain(format!(
                            "reflection at {} annihilates E_{}",
                            k + 1,
                            k + 1
                        )));
                    }
                    r = cd.reflect_root(k, &r);
                    if !r.is_nonnegative() {
                        return Err(HmodError::Domain(format!("negative rank {r}")));
                    }
                }
                Ok(r)
            }
        }
    }

    pub fn build<F: Field>(&self, field: F) -> Result<LfModuleRep<F>, HmodError> {
        match self {
            ModuleTemplate::Fixed(_) => Err(HmodError::Domain(
                "fixed templates are built by reduction".into(),
            )),
            ModuleTemplate::Reflections { cd, start, steps } => {
                let mut m = make_e(cd, field, *start);
                for &(k, dir) in steps {
                    m = reflect_module(&m, k, dir)?;
                }
                let expected = self.ranks()?;
                if *m.ranks() != expected {
                    return Err(HmodError::Domain(format!(
                        "reflections produced rank {} instead of {expected}",
                        m.ranks()
                    )));
                }
                Ok(m)
            }
        }
    }

    pub fn over_rationals(&self) -> Result<LfModuleRep<Rationals>, HmodError> {
        match self {
            ModuleTemplate::Fixed(m) => Ok(m.clone()),
            _ => self.build(Rationals),
        }
    }

    /// `None` when the data does not reduce modulo `p`.
    pub fn over_prime(&self, p: u64) -> Result<Option<LfModuleRep<PrimeField>>, HmodError> {
        let pf = PrimeField::new(p).ok_or_else(|| HmodError::Domain(format!("{p} is not prime")))?;
        match self {
            ModuleTemplate::Fixed(m) => Ok(m.reduce_mod(pf)),
            _ => self.build(pf).map(Some),
        }
    }
}
