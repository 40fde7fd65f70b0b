//! Quantum-information applications of the range engines: positivity of
//! maps, distillability probes, minimum output entropy, local discrimination,
//! fidelity bounds, geometric entanglement, and code verification.

pub mod codes;
pub mod discrim;
pub mod fidelity;
pub mod lp;
pub mod moe;
pub mod positivity;

pub use codes::{dark_subspace_check, ecc_check, CodeReport, CompressionEntry};
pub use discrim::{discrimination_vector, locally_distinguishable, v_is_distinguishable};
pub use fidelity::{diagonal_fidelity_lp, geometric_entanglement, pure_fidelity_bound};
pub use moe::{moe_is_zero, moe_qubit};
pub use positivity::{is_k_positive, n_copy_distillable_probe, witness_profile, WitnessProfile};

use crate::state::{ProductState, SchmidtState};

/// Three-valued decision record with an optional certificate.
///
/// `Violated` always carries a re-checked certificate; `Certified` is only
/// issued when a sound criterion applies (full spectrum, PPT, or an exact
/// short-circuit); everything else is `NoViolationFound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictStatus {
    Violated,
    Certified,
    NoViolationFound,
}

impl VerdictStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictStatus::Violated => "violated",
            VerdictStatus::Certified => "certified",
            VerdictStatus::NoViolationFound => "no-violation-found",
        }
    }
}

/// Witness payload attached to a verdict.
#[derive(Debug, Clone)]
pub enum Witness {
    Product(ProductState),
    Schmidt(SchmidtState),
}

#[derive(Debug, Clone)]
pub struct Certificate {
    /// Criterion value: a negative range value for positivity problems, a
    /// residual modulus for discrimination.
    pub value: f64,
    pub witness: Witness,
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub certificate: Option<Certificate>,
    pub restarts: usize,
}

impl Verdict {
    pub fn no_violation(restarts: usize) -> Self {
        Self {
            status: VerdictStatus::NoViolationFound,
            certificate: None,
            restarts,
        }
    }

    pub fn certified(restarts: usize) -> Self {
        Self {
            status: VerdictStatus::Certified,
            certificate: None,
            restarts,
        }
    }

    pub fn is_violated(&self) -> bool {
        self.status == VerdictStatus::Violated
    }
}
