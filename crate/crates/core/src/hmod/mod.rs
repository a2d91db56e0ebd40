//! Explicit locally free `H(C, D, Ω)`-modules: reflection functors, Hom
//! spaces and finite-field counting of locally free quiver Grassmannians.

pub mod count;
pub mod field;
pub mod hom;
pub mod linalg;
pub mod module;
pub mod reflect;
pub mod template;

use thiserror::Error;

use crate::cartan::CartanError;

pub use count::{
    chi_fiber, chi_free, count_lf_submodules, euler_char_gr, f_poly_by_counting, FiberGen,
    FiberInstance, GrCount,
};
pub use field::{Field, PrimeField, Rationals};
pub use hom::{find_isomorphism, hom_space, is_isomorphic};
pub use linalg::Mat;
pub use module::{make_e, ArrowKey, LfModuleRep};
pub use reflect::{in_map_surjective, out_map_injective, reflect_module};
pub use template::ModuleTemplate;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HmodError {
    #[error("relation violated: {0}")]
    RelationViolated(String),
    #[error("not locally free: {0}")]
    NotLocallyFree(String),
    #[error("vertex {} is not a sink", .0 + 1)]
    NotSink(usize),
    #[error("vertex {} is not a source", .0 + 1)]
    NotSource(usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("enumeration guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("point count is not polynomial: {0}")]
    NonPolynomialCount(String),
    #[error("{0}")]
    Domain(String),
    #[error("invalid module file: {0}")]
    File(String),
    #[error(transparent)]
    Cartan(#[from] CartanError),
}
