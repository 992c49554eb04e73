//! Exact-arithmetic workbench for bigraded commutative differential graded
//! algebras carrying a BV operator: homotopy transfer, trivialization
//! operators, hypercommutative products, and Hodge-filtration audits. All
//! coefficients live in Q(i); there is no floating point in this crate.

pub mod bv;
pub mod cdga;
pub mod error;
pub mod hodge;
pub mod hycom;
pub mod matrix;
pub mod mhc;
pub mod model;
pub mod models;
pub mod scalar;
pub mod subspace;

pub use cdga::{Derivation, Element, Generator, Mask, Presentation};
pub use error::Error;
pub use matrix::{Matrix, Vector};
pub use model::Model;
pub use scalar::Scalar;
pub use subspace::Subspace;
