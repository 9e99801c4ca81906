//! Exact-arithmetic machinery for real cyclic and Abelian coverings.
//!
//! The crate has three layers:
//!
//! * finite abelian group theory: groups in invariant-factor form,
//!   homomorphisms, subgroups, involution classification and the semidirect
//!   products they define ([`abelian`], [`involution`], [`semidirect`]);
//! * exact symbolic arithmetic over the Gaussian rationals: sparse
//!   multivariate polynomials, rational functions with the conjugation that
//!   fixes variables and conjugates coefficients, and quadratic extensions
//!   y^2 = Phi ([`gauss`], [`poly`], [`ratfunc`]);
//! * the covering calculus built on both: the four basic real cyclic
//!   extension types with their defining identities verified exactly
//!   ([`extension`]), and branch-divisor/character-class building data over
//!   an abstract finitely generated Picard group with reality verification
//!   ([`building`]).
//!
//! All arithmetic is exact; no floating point appears anywhere.

pub mod abelian;
pub mod building;
pub mod error;
pub mod extension;
pub mod gauss;
pub mod involution;
pub mod matrix;
pub mod poly;
pub mod ratfunc;
pub mod semidirect;

pub use abelian::{FinAbGroup, GroupElement, GroupHom, Subgroup};
pub use error::{Error, ErrorKind, Result};
pub use gauss::GaussRational;
pub use poly::MultiPoly;
pub use ratfunc::{QuadExtElement, RatFunc};
