//! Exact construction and verification of finite-dimensional modules for quantum
//! affine algebras `U_q(g)` and their Borel subalgebras, over the rationals.

pub mod bridge;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod module_store;
pub mod presentation;
pub mod scalar;
pub mod split;
pub mod weight;

pub use error::{Error, Result};
pub use linalg::{Matrix, Subspace};
pub use module_store::{Representation, Sign};
pub use presentation::{CartanData, Generator, PresentationId};
pub use scalar::{QProfile, Scalar};
