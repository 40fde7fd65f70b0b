//! Verification of local dark subspaces and error correction codes.
//!
//! A rank-l product projector P spanned by |b x b x ...> is a dark subspace
//! when every P Y_m^dag Y_m P is a scalar multiple of P, and an error
//! correction code when all M^2 cross compressions P Y_i^dag Y_j P are.

use num_complex::Complex64;

use crate::channel::QuantumChannel;
use crate::error::{RangeError, Result};
use crate::matrix::ComplexMatrix;
use crate::space::TensorSpace;
use crate::tolerance::Tolerances;

/// One compression P X P compared against lambda P.
#[derive(Debug, Clone)]
pub struct CompressionEntry {
    /// Kraus indices (m, m) for dark checks, (i, j) for code checks.
    pub indices: (usize, usize),
    pub lambda: Complex64,
    pub residual: f64,
    pub scalar: bool,
}

#[derive(Debug, Clone)]
pub struct CodeReport {
    pub entries: Vec<CompressionEntry>,
    pub passed: bool,
}

fn projector_flats(space: &TensorSpace, l: usize, basis: Option<&[usize]>) -> Result<Vec<usize>> {
    if space.factor_count() < 2 {
        return Err(RangeError::DimensionMismatch(
            "product projector needs at least two tensor factors".into(),
        ));
    }
    let min_dim = space.dims().iter().copied().min().unwrap();
    if l == 0 || l > min_dim {
        return Err(RangeError::InvalidParameter(format!(
            "l = {l} outside 1..={min_dim}"
        )));
    }
    let default: Vec<usize> = (0..l).collect();
    let basis = basis.unwrap_or(&default);
    if basis.len() != l {
        return Err(RangeError::InvalidParameter(
            "basis map must list exactly l indices".into(),
        ));
    }
    let mut seen = vec![false; min_dim];
    for &b in basis {
        if b >= min_dim || seen[b] {
            return Err(RangeError::InvalidParameter(
                "basis map must list distinct indices below every factor dimension".into(),
            ));
        }
        seen[b] = true;
    }
    Ok(basis
        .iter()
        .map(|&b| space.flatten(&vec![b; space.factor_count()]))
        .collect())
}

fn compression_entry(
    x: &ComplexMatrix,
    flats: &[usize],
    indices: (usize, usize),
) -> CompressionEntry {
    let l = flats.len();
    let mut comp = ComplexMatrix::zeros(l);
    for (r, &fr) in flats.iter().enumerate() {
        for (s, &fs) in flats.iter().enumerate() {
            comp[(r, s)] = x[(fr, fs)];
        }
    }
    let lambda = comp.trace() / l as f64;
    let residual = comp.shift(-lambda).frobenius_norm();
    CompressionEntry {
        indices,
        lambda,
        residual,
        scalar: residual <= Tolerances::DEFAULT.compression_residual,
    }
}

/// Dark-subspace check: compressions of X_m = Y_m^dag Y_m for every Kraus term.
pub fn dark_subspace_check(
    ch: &QuantumChannel,
    space: &TensorSpace,
    l: usize,
    basis: Option<&[usize]>,
) -> Result<CodeReport> {
    if space.total() != ch.dim_in() {
        return Err(RangeError::DimensionMismatch(
            "space does not match the channel dimension".into(),
        ));
    }
    let flats = projector_flats(space, l, basis)?;
    let mut entries = Vec::with_capacity(ch.kraus().len());
    for (m, y) in ch.kraus().iter().enumerate() {
        let x = y.adjoint().matmul(y)?;
        entries.push(compression_entry(&x, &flats, (m, m)));
    }
    let passed = entries.iter().all(|e| e.scalar);
    Ok(CodeReport { entries, passed })
}

/// Error-correction (Knill-Laflamme) check: all M^2 cross compressions
/// P Y_i^dag Y_j P must be scalar on the projector.
pub fn ecc_check(
    ch: &QuantumChannel,
    space: &TensorSpace,
    l: usize,
    basis: Option<&[usize]>,
) -> Result<CodeReport> {
    if space.total() != ch.dim_in() {
        return Err(RangeError::DimensionMismatch(
            "space does not match the channel dimension".into(),
        ));
    }
    let flats = projector_flats(space, l, basis)?;
    let count = ch.kraus().len();
    let mut entries = Vec::with_capacity(count * count);
    for (i, yi) in ch.kraus().iter().enumerate() {
        for (j, yj) in ch.kraus().iter().enumerate() {
            let x = yi.adjoint().matmul(yj)?;
            entries.push(compression_entry(&x, &flats, (i, j)));
        }
    }
    let passed = entries.iter().all(|e| e.scalar);
    Ok(CodeReport { entries, passed })
}
