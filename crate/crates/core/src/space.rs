//! Tensor-product structure of a Hilbert space.

use serde::{Deserialize, Serialize};

use crate::error::{RangeError, Result};

/// An ordered factorization H = H_{n1} x ... x H_{nm} of an N-dimensional space.
///
/// Flat indices are row-major: the last factor varies fastest, matching the
/// Kronecker-product layout used everywhere in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorSpace {
    dims: Vec<usize>,
}

impl TensorSpace {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(RangeError::InvalidParameter(
                "tensor space needs at least one factor".into(),
            ));
        }
        if dims.iter().any(|&d| d == 0) {
            return Err(RangeError::InvalidParameter(
                "tensor factor dimensions must be positive".into(),
            ));
        }
        Ok(Self { dims })
    }

    pub fn single(n: usize) -> Self {
        Self { dims: vec![n] }
    }

    pub fn bipartite(k: usize, m: usize) -> Self {
        Self { dims: vec![k, m] }
    }

    pub fn qubits(n: usize) -> Self {
        Self { dims: vec![2; n] }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn factor_count(&self) -> usize {
        self.dims.len()
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_bipartite(&self) -> bool {
        self.dims.len() == 2
    }

    /// Stride of factor `j` in the flat index.
    pub fn stride(&self, j: usize) -> usize {
        self.dims[j + 1..].iter().product()
    }

    /// Component of `flat` along factor `j`.
    pub fn index_of(&self, flat: usize, j: usize) -> usize {
        (flat / self.stride(j)) % self.dims[j]
    }

    pub fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut multi = vec![0; self.dims.len()];
        for j in (0..self.dims.len()).rev() {
            multi[j] = flat % self.dims[j];
            flat /= self.dims[j];
        }
        multi
    }

    pub fn flatten(&self, multi: &[usize]) -> usize {
        debug_assert_eq!(multi.len(), self.dims.len());
        let mut flat = 0;
        for (j, &i) in multi.iter().enumerate() {
            debug_assert!(i < self.dims[j]);
            flat = flat * self.dims[j] + i;
        }
        flat
    }

    /// Concatenation of two factorizations, the space of a Kronecker product.
    pub fn concat(&self, other: &TensorSpace) -> TensorSpace {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        TensorSpace { dims }
    }
}
