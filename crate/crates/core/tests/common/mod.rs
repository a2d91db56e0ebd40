use std::collections::BTreeMap;

use lfcc_core::cartan::{CartanData, RankVector};
use lfcc_core::hmod::{LfModuleRep, Mat, Rationals};
use malachite::Rational;

/// `M(5)` for `(2,3,3,2)` typed in from the printed action of `α_21` on the
/// free `H_1`-basis `e_1..e_5` (rows `ε_2^a u_b` at `2b + a`, columns
/// `ε_1^k e_j` at `3(j-1) + k`).
pub fn printed_m5() -> LfModuleRep<Rationals> {
    let entries: [(usize, usize, usize, i64); 7] = [
        (1, 2, 0, 1),
        (2, 2, 2, 1),
        (3, 2, 4, 1),
        (4, 1, 1, -1),
        (4, 2, 3, 1),
        (5, 1, 3, -1),
        (5, 2, 5, 1),
    ];
    let mut a = Mat::from_fn(6, 15, |_, _| Rational::from(0));
    for (j, k, row, v) in entries {
        a.set(row, (j - 1) * 3 + k, Rational::from(v));
    }
    LfModuleRep::with_block_eps(Rationals, CartanData::rank2(2, 3, 3, 2).unwrap(), RankVector(vec![5, 3]), BTreeMap::from([((1, 0, 0), a)])).unwrap()
}
