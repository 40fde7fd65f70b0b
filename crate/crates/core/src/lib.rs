//! Restricted numerical ranges of operators on tensor-product spaces.
//!
//! The crate computes the standard numerical range and its restrictions to
//! product, separable and k-entangled states, together with the
//! quantum-information decision problems built on them: positivity of maps
//! through their Choi matrices, distillability probes, minimum output
//! entropy, local discrimination of unitary gates, fidelity bounds, and
//! verification of local dark subspaces and error correction codes.
//!
//! Everything is deterministic given explicit seeds; see-saw optimizers
//! report achieved values with witness states, never claimed outer bounds.

pub mod apps;
pub mod channel;
pub mod eig;
pub mod error;
pub mod families;
pub mod geometry;
pub mod io;
pub mod matrix;
pub mod oracle;
pub mod range;
pub mod random;
pub mod seesaw;
pub mod space;
pub mod state;
pub mod tolerance;

pub use error::{RangeError, Result};
pub use matrix::{kron, kron_power, partial_transpose, ComplexMatrix, DensityMatrix, HermitianMatrix, Side};
pub use range::{numerical_radius, numerical_range, minkowski_product, minkowski_power, product_range_of_tensor, Interval, PlanarSet, SetKind};
pub use seesaw::{HermitianPnr, KRangeResult, SeesawConfig};
pub use space::TensorSpace;
pub use state::{schmidt, ProductState, PureState, SchmidtState};
pub use tolerance::Tolerances;
