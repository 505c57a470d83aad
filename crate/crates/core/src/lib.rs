//! Numerical analysis of rational inner functions on the bidisk.
//!
//! A rational inner function has the form `eta * z1^M * z2^N * ptilde / p`
//! where `p` has no zeros in the open bidisk and `ptilde` is its reflection.
//! The crate locates boundary singularities on the torus, traces unimodular
//! level curves, fits contact orders and orders of contact, counts
//! intersection multiplicities of `p` and `ptilde`, and builds new examples
//! from symmetric polynomials and transfer functions.

pub mod cli;
pub mod construct;
pub mod contact;
pub mod dd;
pub mod error;
pub mod intersect;
pub mod levelcurves;
pub mod poly2;
pub mod rif;
pub mod roots;

pub use error::{Result, RifError};
pub use poly2::{BiPoly, UniPoly, Var};
pub use rif::{Rif, RifRecord, SingularPoint};
