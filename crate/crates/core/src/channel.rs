//! Quantum channels in Kraus form and their Choi (dynamical) matrices.

use num_complex::Complex64;

use crate::eig::{eigh, psd_inv_sqrt};
use crate::error::{RangeError, Result};
use crate::matrix::{ComplexMatrix, HermitianMatrix, C_ONE, C_ZERO};
use crate::space::TensorSpace;
use crate::tolerance::Tolerances;

/// A trace-preserving quantum operation given by Kraus operators
/// (output-order x input-order; square in this crate).
#[derive(Debug, Clone)]
pub struct QuantumChannel {
    kraus: Vec<ComplexMatrix>,
    dim_in: usize,
    dim_out: usize,
}

impl QuantumChannel {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        Self::new_with(kraus, &Tolerances::DEFAULT)
    }

    pub fn new_with(kraus: Vec<ComplexMatrix>, tol: &Tolerances) -> Result<Self> {
        if kraus.is_empty() {
            return Err(RangeError::InvalidParameter(
                "channel needs at least one Kraus operator".into(),
            ));
        }
        let dim = kraus[0].order();
        if kraus.iter().any(|k| k.order() != dim) {
            return Err(RangeError::DimensionMismatch(
                "all Kraus operators must share the same order".into(),
            ));
        }
        let mut ident = ComplexMatrix::zeros(dim);
        for y in &kraus {
            ident = ident.add(&y.adjoint().matmul(y)?)?;
        }
        let mut dev: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                let want = if i == j { C_ONE } else { C_ZERO };
                dev = dev.max((ident[(i, j)] - want).norm());
            }
        }
        if dev > tol.kraus_identity {
            return Err(RangeError::InvalidParameter(format!(
                "Kraus operators do not resolve the identity (deviation {dev:.3e})"
            )));
        }
        Ok(Self {
            kraus,
            dim_in: dim,
            dim_out: dim,
        })
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.order() != self.dim_in {
            return Err(RangeError::DimensionMismatch(
                "state order does not match channel input".into(),
            ));
        }
        let mut out = ComplexMatrix::zeros(self.dim_out);
        for y in &self.kraus {
            out = out.add(&y.matmul(rho)?.matmul(&y.adjoint())?)?;
        }
        Ok(out)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            kraus: vec![ComplexMatrix::identity(dim)],
            dim_in: dim,
            dim_out: dim,
        }
    }

    /// The completely depolarizing qubit channel (four Pauli Kraus terms).
    pub fn depolarizing_qubit() -> Self {
        let half = Complex64::new(0.5, 0.0);
        let mut kraus = vec![ComplexMatrix::identity(2).scale(half)];
        for k in 1..=3 {
            kraus.push(crate::families::pauli(k).scale(half));
        }
        Self {
            kraus,
            dim_in: 2,
            dim_out: 2,
        }
    }

    pub fn amplitude_damping(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(RangeError::InvalidParameter("gamma must be in [0, 1]".into()));
        }
        let k0 = ComplexMatrix::from_rows(&[
            vec![C_ONE, C_ZERO],
            vec![C_ZERO, Complex64::new((1.0 - gamma).sqrt(), 0.0)],
        ])?;
        let k1 = ComplexMatrix::from_rows(&[
            vec![C_ZERO, Complex64::new(gamma.sqrt(), 0.0)],
            vec![C_ZERO, C_ZERO],
        ])?;
        Self::new(vec![k0, k1])
    }

    pub fn phase_damping(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(RangeError::InvalidParameter("gamma must be in [0, 1]".into()));
        }
        let k0 = ComplexMatrix::from_rows(&[
            vec![C_ONE, C_ZERO],
            vec![C_ZERO, Complex64::new((1.0 - gamma).sqrt(), 0.0)],
        ])?;
        let k1 = ComplexMatrix::from_rows(&[
            vec![C_ZERO, C_ZERO],
            vec![C_ZERO, Complex64::new(gamma.sqrt(), 0.0)],
        ])?;
        Self::new(vec![k0, k1])
    }

    pub fn bit_flip(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(RangeError::InvalidParameter("p must be in [0, 1]".into()));
        }
        let k0 = ComplexMatrix::identity(2).scale(Complex64::new((1.0 - p).sqrt(), 0.0));
        let k1 = crate::families::pauli(1).scale(Complex64::new(p.sqrt(), 0.0));
        Self::new(vec![k0, k1])
    }

    /// The Werner-Holevo qubit channel for p in [-1, 1/3], built from its
    /// dynamical matrix.
    pub fn werner_holevo(p: f64) -> Result<Self> {
        let choi = ChoiMatrix::werner_holevo(p)?;
        Self::from_choi(&choi)
    }

    /// Kraus operators from a Choi matrix by spectral decomposition.
    pub fn from_choi(choi: &ChoiMatrix) -> Result<Self> {
        let k = choi.dim_in();
        let m = choi.dim_out();
        if k != m {
            return Err(RangeError::DimensionMismatch(
                "square channels only".into(),
            ));
        }
        let unnorm = choi.unnormalized();
        let e = eigh(&unnorm);
        let mut kraus = Vec::new();
        for idx in 0..unnorm.order() {
            let lam = e.values[idx];
            if lam < -Tolerances::DEFAULT.psd * 10.0 {
                return Err(RangeError::InvalidParameter(format!(
                    "Choi matrix is not positive semidefinite (eigenvalue {lam})"
                )));
            }
            if lam <= 1e-12 {
                continue;
            }
            let v = e.vector(idx);
            let w = lam.sqrt();
            // D[(out, in)] ordering: vector component (o * K + i)
            let y = ComplexMatrix::from_fn(k, |o, i| w * v[o * k + i]);
            kraus.push(y);
        }
        Self::new(kraus)
    }

    /// Renormalizes near-trace-preserving Kraus sets (used by tests).
    pub fn normalize_trace_preserving(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = kraus[0].order();
        let mut s = ComplexMatrix::zeros(dim);
        for y in &kraus {
            s = s.add(&y.adjoint().matmul(y)?)?;
        }
        let sh = HermitianMatrix::new_with(
            s,
            &Tolerances {
                hermiticity: 1e-8,
                ..Tolerances::DEFAULT
            },
        )?;
        let corr = psd_inv_sqrt(&sh);
        let fixed: Vec<ComplexMatrix> = kraus
            .into_iter()
            .map(|y| y.matmul(&corr).unwrap())
            .collect();
        Self::new(fixed)
    }
}

/// The dynamical (Choi) matrix of a channel on H_M (x) H_K, stored with the
/// normalized maximally entangled projector so that its trace is one.
///
/// The unnormalized variant (trace K) is exposed separately; it satisfies the
/// element identity <k| Phi(|i><j|) |l> = <k x i| D |l x j> and is the
/// convention under which the minimum output entropy statement reads off an
/// output eigenvalue probability.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    matrix: HermitianMatrix,
    dim_in: usize,
    dim_out: usize,
}

impl ChoiMatrix {
    /// Wraps an already-normalized (trace one) dynamical matrix.
    pub fn new(matrix: HermitianMatrix, dim_out: usize, dim_in: usize) -> Result<Self> {
        Self::new_with(matrix, dim_out, dim_in, &Tolerances::DEFAULT)
    }

    pub fn new_with(
        matrix: HermitianMatrix,
        dim_out: usize,
        dim_in: usize,
        tol: &Tolerances,
    ) -> Result<Self> {
        if matrix.order() != dim_out * dim_in {
            return Err(RangeError::DimensionMismatch(format!(
                "Choi order {} does not equal out*in = {}",
                matrix.order(),
                dim_out * dim_in
            )));
        }
        let tr = matrix.real_trace();
        if (tr - 1.0).abs() > tol.trace {
            return Err(RangeError::InvalidState(format!(
                "normalized Choi matrix must have unit trace, got {tr}"
            )));
        }
        let spaced = matrix.with_space(TensorSpace::bipartite(dim_out, dim_in))?;
        Ok(Self {
            matrix: spaced,
            dim_in,
            dim_out,
        })
    }

    /// Wraps the unnormalized convention (trace = input dimension).
    pub fn from_unnormalized(matrix: HermitianMatrix, dim_out: usize, dim_in: usize) -> Result<Self> {
        let scaled = matrix.scale_real(1.0 / dim_in as f64);
        Self::new(scaled, dim_out, dim_in)
    }

    /// D = (Phi x 1)|Psi+><Psi+| with |Psi+> normalized.
    pub fn from_channel(ch: &QuantumChannel) -> Result<Self> {
        let k = ch.dim_in();
        let m = ch.dim_out();
        let n = m * k;
        let mut d = ComplexMatrix::zeros(n);
        for y in ch.kraus() {
            // |v> = (Y x I)|Psi+> has components v[(o, i)] = Y[o, i]/sqrt(K)
            for o1 in 0..m {
                for i1 in 0..k {
                    for o2 in 0..m {
                        for i2 in 0..k {
                            d[(o1 * k + i1, o2 * k + i2)] +=
                                y[(o1, i1)] * y[(o2, i2)].conj() / k as f64;
                        }
                    }
                }
            }
        }
        let h = HermitianMatrix::new_with(
            d,
            &Tolerances {
                hermiticity: 1e-10,
                ..Tolerances::DEFAULT
            },
        )?;
        Self::new(h, m, k)
    }

    /// The Werner-Holevo dynamical matrix at parameter p in [-1, 1/3].
    pub fn werner_holevo(p: f64) -> Result<Self> {
        if !(-1.0..=1.0 / 3.0 + 1e-12).contains(&p) {
            return Err(RangeError::InvalidParameter(format!(
                "Werner-Holevo parameter {p} outside [-1, 1/3]"
            )));
        }
        let hp = Complex64::new(0.5 * (p + 1.0), 0.0);
        let hm = Complex64::new(0.5 * (1.0 - p), 0.0);
        let pc = Complex64::new(p, 0.0);
        let m = ComplexMatrix::from_rows(&[
            vec![hp, C_ZERO, C_ZERO, C_ZERO],
            vec![C_ZERO, hm, pc, C_ZERO],
            vec![C_ZERO, pc, hm, C_ZERO],
            vec![C_ZERO, C_ZERO, C_ZERO, hp],
        ])?;
        let h = HermitianMatrix::new(m)?;
        Self::from_unnormalized(h, 2, 2)
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    /// The unnormalized dynamical matrix, trace = input dimension.
    pub fn unnormalized(&self) -> HermitianMatrix {
        self.matrix.scale_real(self.dim_in as f64)
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn space(&self) -> TensorSpace {
        TensorSpace::bipartite(self.dim_out, self.dim_in)
    }
}

/// Builds the Choi matrix of a channel (operation form of `from_channel`).
pub fn choi(ch: &QuantumChannel) -> Result<ChoiMatrix> {
    ChoiMatrix::from_channel(ch)
}
