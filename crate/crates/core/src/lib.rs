//! Exact computer algebra for non-commutative Poisson algebras (NCPAs).
//!
//! An NCPA is given by rational structure constants for an associative
//! product and a Lie bracket satisfying the Leibniz rule. From it this crate
//! builds
//!
//! - the universal enveloping algebra `U(A)` of the bracket, in PBW normal form ([`uea`]),
//! - the quasi-Poisson enveloping algebra `Q(A) = A^e # U(A)` ([`smash`]),
//! - degree-truncated probes of quotients of `Q(A)` such as the Poisson
//!   enveloping algebra `P(A) = Q(A)/J` ([`quotient`]),
//! - quasi-Poisson and Poisson modules with the functors between them and
//!   `Q(A)`-modules ([`module`]).
//!
//! All arithmetic is over the rationals; there is no floating point anywhere.

pub mod algebra;
pub mod catalog;
pub mod error;
pub mod io;
pub mod linalg;
pub mod module;
pub mod quotient;
pub mod rational;
pub mod report;
pub mod smash;
pub mod uea;
pub mod words;

pub use algebra::{AElement, AlgebraPresentation, Ncpa};
pub use error::{Error, Result};
pub use linalg::{Matrix, SparseVector, Subspace};
pub use module::{QAction, QuasiPoissonModule};
pub use quotient::{IdealGens, IdealLabel, TruncatedQuotient};
pub use rational::Rational;
pub use report::{Report, Status};
pub use smash::{QAlgebra, QElement, QMonomial};
pub use uea::{UElement, UMonomial, Uea};
pub use words::Word;
