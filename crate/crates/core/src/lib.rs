//! Order-of-addition (OofA) mixture and component-amount designs in
//! orthogonal blocks.
//!
//! The crate is organised bottom-up:
//!
//! - [`design`]: runs, blocked designs, model specs and structural validation.
//! - [`pwo`]: pair-wise ordering (PWO) vectors and permutations.
//! - [`catalog`]: built-in blocked designs and the OofA expansion.
//! - [`family`]: the model-family registry (Scheffé, K-model, mixture-amount,
//!   component-amount), selected by name at runtime.
//! - [`modelmat`]: expansion of a design into a model matrix.
//! - [`linalg`]: small dense LU kernel.
//! - [`evaluate`]: blocking checks, optimality criteria, prediction variance,
//!   FDS curves, power and term R².
//! - [`fit`]: ordinary least squares.
//! - [`io`]: CSV design files and FDS plot output.

pub mod catalog;
pub mod design;
pub mod error;
pub mod evaluate;
pub mod family;
pub mod fit;
pub mod io;
pub mod linalg;
pub mod modelmat;
pub mod pwo;

pub use design::{BlockedDesign, DesignKind, Permutation, Pwo, Run, ValidationReport, Violation};
pub use error::{Error, Result};
pub use family::{FamilyRegistry, ModelFamily};
pub use linalg::Matrix;
pub use modelmat::{FactorCoding, InteractionTerm, ModelMatrix, ModelSpec};
