//! Exact computer algebra for low-rank type-A flag varieties.
//!
//! The crate builds two models of the same algebra and checks that they
//! agree, with every computation done over the rationals:
//!
//! * the A-side: equivariant quantum cohomology of G/P with its quantum
//!   connection, assembled from the equivariant Chevalley rule;
//! * the B-side: the Landau-Ginzburg superpotential on a Bruhat stratum of
//!   the dual group, its Jacobi ring, and the ℏ-deformation carrying the
//!   Gauss-Manin connection.
//!
//! Everything downstream of [`poly`] is exact; there is no floating point
//! anywhere in the crate. Comparisons between the two sides go through
//! characteristic polynomials and scalar differential operators, never
//! through numerical eigenvalues.

pub mod brieskorn;
pub mod chart;
pub mod dual;
pub mod frac;
pub mod grobner;
pub mod jacobi;
pub mod matrix;
pub mod poly;
pub mod quantum;
pub mod report;
pub mod sample;
pub mod scalar;
pub mod verify;
pub mod weyl;

pub use scalar::Rat;
