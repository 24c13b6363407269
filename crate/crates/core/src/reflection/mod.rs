//! Reflection cosets `γG(r,p,n)` as monomial maps, their `ζ`-eigenspaces,
//! and the comparison with Dowling-lattice families.

mod coset;
mod eigen;
mod roots;
mod theorem;

pub use coset::{enumerate_coset, CosetKind, CosetParams, MonomialMap};
pub use eigen::{build_eigenposet, eigenspace, space_within, tau, EigenPoset};
pub use roots::RootExp;
pub use theorem::{
    classify_case, full_space_present, hat_tilde, intersections_closed, parameter_grid, twist_condition,
    verify_theorem, Case, Prediction, VerifyReport,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReflectionError {
    #[error("invalid coset parameters: {0}")]
    InvalidParams(String),
    #[error("root modulus {0} is incompatible with map modulus {1}")]
    IncompatibleModulus(u64, u64),
    #[error("eigenspace {0} is not evenly coloured")]
    ColouringViolation(String),
    #[error("exceptional reflection cosets are not supported")]
    ExceptionalCosetUnsupported,
    #[error("poset has no unique maximum")]
    NoUniqueMax,
}
