//! Certified linear algebra for symmetric nonexpansive pairings.
//!
//! The objects: a space is `R^n` with a symmetric matrix `L`,
//! `|L| <= 1`, inducing the form `q(b) = <b, L b> / 2`; subspaces are
//! L-positive when `q >= 0` on them. When `L` is an involution the
//! pairing transports to the dual side and maximality questions reduce
//! to eigenvalue bounds on polars. Monotone linear relations are the
//! special case of the `(x, x*)` block-swap pairing, where `q` is the
//! monotonicity coupling `<x, x*>`.
//!
//! Checks return a [`CheckReport`] naming the decision rule applied, the
//! numeric evidence, and a witness for every failure. Rule identifiers
//! used by the reports:
//!
//! | id        | decides                                                        |
//! |-----------|----------------------------------------------------------------|
//! | `Def2.2`  | positivity/negativity via restricted-form eigenvalue bounds     |
//! | `Thm7.2a` | maximal positivity via negativity of the polar                  |
//! | `Cor5.5`  | maximal negativity via positivity of the polar                  |
//! | `eq28`    | double-polar consistency of a positive subspace                 |
//! | `Lem3.4`  | monotonicity of a relation via graph positivity                 |
//! | `Cor5.4`  | type NI via the four-way maximality pattern                     |
//! | `Cor7.3`  | constancy of the (maximal, adjoint-monotone, adjoint-maximal,   |
//! |           | type-NI) truth table                                            |
//!
//! Everything is deterministic: sampling procedures take explicit seeds
//! and identical inputs produce identical reports.

pub use nalgebra;

pub mod convex;
pub mod error;
pub mod fixtures;
pub mod instances;
mod linalg;
pub mod positivity;
pub mod relations;
pub mod report;
pub mod space;
pub mod subspace;

pub use error::{Result, SnlError};
pub use report::{CheckReport, ExtReal, Status, Witness};
pub use space::SnlSpace;
pub use subspace::{AffineSet, Subspace};
