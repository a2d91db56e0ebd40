//! Cluster variables of rank-2 and finite-type cluster algebras computed two
//! ways: by seed mutation and by reflecting locally free modules over the
//! algebras H(C, D, Ω).

pub mod laurent;

pub use laurent::{LaurentError, LaurentPoly, Monomial};
pub mod cartan;
pub mod ccrec;
pub mod cluster;
pub mod exec;
pub mod hmod;
pub mod verify;

pub use cartan::{CartanData, CartanError, IndexSequence, RankVector};
pub use ccrec::{CCSymbol, CcError, Direction, FPoly};
pub use exec::Exec;
