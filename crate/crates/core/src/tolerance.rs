//! Centralized numerical tolerances.
//!
//! Every validation threshold used across the crate lives here so that no
//! module carries its own ad-hoc magic numbers. Defaults are chosen for
//! dense complex arithmetic in f64 on matrices of order up to a few hundred.

/// Tolerance configuration shared by constructors and decision procedures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Hermiticity: max |X_ij - conj(X_ji)| relative to the largest entry.
    pub hermiticity: f64,
    /// State normalization: allowed |<psi|psi> - 1|.
    pub normalization: f64,
    /// Orthonormality of Schmidt frames.
    pub frame_orthonormality: f64,
    /// Eigendecomposition reconstruction error, relative to the matrix norm.
    pub eig_reconstruction: f64,
    /// Unitarity: ||U U^dag - I|| (max entry).
    pub unitarity: f64,
    /// Positive semidefiniteness: eigenvalues may dip this far below zero.
    pub psd: f64,
    /// Allowed trace deviation for density and Choi matrices.
    pub trace: f64,
    /// Kraus identity resolution: ||sum Y^dag Y - I|| (max entry).
    pub kraus_identity: f64,
    /// Schmidt coefficients below this are truncated to zero.
    pub schmidt_truncation: f64,
    /// Witness edge reproduction: |<w|X|w> - reported edge|.
    pub witness_reproduction: f64,
    /// A range value below minus this counts as a positivity violation.
    pub violation: f64,
    /// Residual for scalar-compression checks (dark subspaces, ECC).
    pub compression_residual: f64,
    /// Residual at which a product expectation counts as zero.
    pub zero_expectation: f64,
    /// Residual for the analytic discrimination vectors.
    pub discrimination_residual: f64,
    /// Optimality residual demanded from the LP solver.
    pub lp_residual: f64,
    /// Slack used by spectral interlacing checks on see-saw edges.
    pub interlacing_slack: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermiticity: 1e-12,
        normalization: 1e-12,
        frame_orthonormality: 1e-10,
        eig_reconstruction: 1e-10,
        unitarity: 1e-12,
        psd: 1e-10,
        trace: 1e-10,
        kraus_identity: 1e-10,
        schmidt_truncation: 1e-12,
        witness_reproduction: 1e-9,
        violation: 1e-9,
        compression_residual: 1e-9,
        zero_expectation: 1e-9,
        discrimination_residual: 1e-10,
        lp_residual: 1e-9,
        interlacing_slack: 1e-8,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
