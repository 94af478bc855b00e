//! Rational tetra-inner functions: polynomial toolkit, tetrablock geometry,
//! spectral factorization, construction from zeros and royal nodes, and
//! extremality tools.

pub mod boundary;
pub mod construct;
pub mod error;
pub mod extremal;
pub mod fejriesz;
pub mod polycx;
pub mod tetrafun;

pub use boundary::{GammaPoint, GammaRegion, Matrix2, TetraPoint, TetraRegion};
pub use construct::{ConstructionSpec, RecoveredData};
pub use error::{Error, Result, Violation};
pub use extremal::{PerturbationMethod, PerturbationResult};
pub use fejriesz::TrigPolynomial;
pub use num_complex::Complex64;
pub use polycx::{Polynomial, Root, RootMultiset};
pub use tetrafun::{
    BlaschkeSpec, RoyalNode, SuperficialSpec, TetraRational, TetraRationalData, TypeNK, ValidationMode,
};
