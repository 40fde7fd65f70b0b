//! Pure states, product states and Schmidt decompositions.

use num_complex::Complex64;

use crate::error::{RangeError, Result};
use crate::matrix::{ComplexMatrix, HermitianMatrix, C_ZERO};
use crate::space::TensorSpace;
use crate::tolerance::Tolerances;

/// A normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::new_with(amplitudes, &Tolerances::DEFAULT)
    }

    pub fn new_with(amplitudes: Vec<Complex64>, tol: &Tolerances) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > tol.normalization {
            return Err(RangeError::InvalidState(format!(
                "state norm^2 deviates from 1 by {:.3e}",
                (norm_sqr - 1.0).abs()
            )));
        }
        Ok(Self { amplitudes })
    }

    /// For internal construction of vectors normalized by arithmetic.
    pub(crate) fn new_unchecked(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes }
    }

    /// Computational basis state |i> in dimension n.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut amplitudes = vec![C_ZERO; n];
        amplitudes[i] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-150 {
            return Err(RangeError::InvalidState("cannot normalize zero vector".into()));
        }
        for z in amplitudes.iter_mut() {
            *z /= norm;
        }
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// The rank-one projector |psi><psi|.
    pub fn projector(&self) -> HermitianMatrix {
        let n = self.dim();
        let m = ComplexMatrix::from_fn(n, |i, j| self.amplitudes[i] * self.amplitudes[j].conj());
        HermitianMatrix::new_with(
            m,
            &Tolerances {
                hermiticity: 1e-10,
                ..Tolerances::DEFAULT
            },
        )
        .expect("projector is Hermitian")
    }
}

/// A product state across the factors of a tensor space.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    factors: Vec<PureState>,
}

impl ProductState {
    pub fn new(factors: Vec<PureState>) -> Result<Self> {
        if factors.is_empty() {
            return Err(RangeError::InvalidState("product state needs factors".into()));
        }
        Ok(Self { factors })
    }

    pub(crate) fn new_unchecked(factors: Vec<PureState>) -> Self {
        Self { factors }
    }

    /// The basis product state |i1> x ... x |im>.
    pub fn basis(space: &TensorSpace, multi: &[usize]) -> Self {
        let factors = space
            .dims()
            .iter()
            .zip(multi)
            .map(|(&d, &i)| PureState::basis(d, i))
            .collect();
        Self { factors }
    }

    pub fn factors(&self) -> &[PureState] {
        &self.factors
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.dim()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim()).product()
    }

    /// Kronecker flattening into the full space.
    pub fn flatten(&self) -> PureState {
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for f in &self.factors {
            let mut next = Vec::with_capacity(amps.len() * f.dim());
            for a in &amps {
                for b in f.amplitudes() {
                    next.push(a * b);
                }
            }
            amps = next;
        }
        PureState::new_unchecked(amps)
    }

    pub fn matches_space(&self, space: &TensorSpace) -> bool {
        self.dims() == space.dims()
    }
}

/// Schmidt decomposition of a bipartite pure state.
///
/// Coefficients are the singular values (descending, squares sum to one).
/// When coefficients are degenerate the frame inside the degenerate block is
/// whatever the eigensolver returns after phase fixing; callers must not rely
/// on it.
#[derive(Debug, Clone)]
pub struct SchmidtState {
    coefficients: Vec<f64>,
    left: Vec<PureState>,
    right: Vec<PureState>,
}

impl SchmidtState {
    pub fn new(
        coefficients: Vec<f64>,
        left: Vec<PureState>,
        right: Vec<PureState>,
    ) -> Result<Self> {
        Self::new_with(coefficients, left, right, &Tolerances::DEFAULT)
    }

    pub fn new_with(
        coefficients: Vec<f64>,
        left: Vec<PureState>,
        right: Vec<PureState>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let k = coefficients.len();
        if k == 0 || left.len() != k || right.len() != k {
            return Err(RangeError::InvalidState(
                "coefficient and frame lengths must match and be nonzero".into(),
            ));
        }
        let (dk, dm) = (left[0].dim(), right[0].dim());
        if k > dk.min(dm) {
            return Err(RangeError::InvalidState(format!(
                "Schmidt rank {k} exceeds min dimension {}",
                dk.min(dm)
            )));
        }
        if coefficients.iter().any(|&c| c < -tol.normalization) {
            return Err(RangeError::InvalidState(
                "Schmidt coefficients must be nonnegative".into(),
            ));
        }
        let sum: f64 = coefficients.iter().map(|c| c * c).sum();
        if (sum - 1.0).abs() > tol.normalization {
            return Err(RangeError::InvalidState(format!(
                "squared Schmidt coefficients sum to {sum}, expected 1"
            )));
        }
        for frame in [&left, &right] {
            for a in 0..k {
                for b in 0..k {
                    let want = if a == b { 1.0 } else { 0.0 };
                    let overlap = frame[a].inner(&frame[b]).norm();
                    if (overlap - want).abs() > tol.frame_orthonormality {
                        return Err(RangeError::InvalidState(
                            "Schmidt frame is not orthonormal".into(),
                        ));
                    }
                }
            }
        }
        Ok(Self {
            coefficients,
            left,
            right,
        })
    }

    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Squared coefficients, the eigenvalues of the reduced state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c * c).collect()
    }

    pub fn left_frame(&self) -> &[PureState] {
        &self.left
    }

    pub fn right_frame(&self) -> &[PureState] {
        &self.right
    }

    /// Reassembles the full bipartite vector.
    pub fn assemble(&self) -> PureState {
        let (dk, dm) = (self.left[0].dim(), self.right[0].dim());
        let mut amps = vec![C_ZERO; dk * dm];
        for ((c, l), r) in self
            .coefficients
            .iter()
            .zip(&self.left)
            .zip(&self.right)
        {
            for i in 0..dk {
                for j in 0..dm {
                    amps[i * dm + j] += c * l.amplitudes()[i] * r.amplitudes()[j];
                }
            }
        }
        PureState::new_unchecked(amps)
    }
}

/// Schmidt decomposition of `psi` with respect to a bipartite space.
///
/// The squared coefficients are the eigenvalues of A A^dag for the reshaped
/// coefficient matrix A; coefficients below the truncation tolerance are
/// dropped, so a product state comes back with rank one.
pub fn schmidt(psi: &PureState, space: &TensorSpace) -> Result<SchmidtState> {
    schmidt_with(psi, space, &Tolerances::DEFAULT)
}

pub fn schmidt_with(psi: &PureState, space: &TensorSpace, tol: &Tolerances) -> Result<SchmidtState> {
    if !space.is_bipartite() {
        return Err(RangeError::DimensionMismatch(
            "Schmidt decomposition needs a bipartite space".into(),
        ));
    }
    if space.total() != psi.dim() {
        return Err(RangeError::DimensionMismatch(format!(
            "space total {} does not match state dimension {}",
            space.total(),
            psi.dim()
        )));
    }
    let (dk, dm) = (space.dims()[0], space.dims()[1]);
    let a = psi.amplitudes();
    // gram = A A^dag, a dk x dk positive matrix
    let gram = ComplexMatrix::from_fn(dk, |i, p| {
        let mut acc = C_ZERO;
        for j in 0..dm {
            acc += a[i * dm + j] * a[p * dm + j].conj();
        }
        acc
    });
    let gh = HermitianMatrix::new_with(
        gram,
        &Tolerances {
            hermiticity: 1e-9,
            ..*tol
        },
    )
    .expect("A A^dag is Hermitian");
    let eg = crate::eig::eigh(&gh);

    let mut coefficients = Vec::new();
    let mut left = Vec::new();
    let mut right: Vec<PureState> = Vec::new();
    for k in (0..dk).rev() {
        let mu = eg.values[k].max(0.0);
        let xi = mu.sqrt();
        if xi <= tol.schmidt_truncation {
            continue;
        }
        let lvec = eg.vector(k);
        // right vector: (A^dag u) / xi, re-orthogonalized against the frame
        // so that tiny coefficients cannot smuggle in rounding noise
        let mut rvec = vec![C_ZERO; dm];
        for j in 0..dm {
            let mut acc = C_ZERO;
            for i in 0..dk {
                acc += a[i * dm + j] * lvec[i].conj();
            }
            rvec[j] = acc / xi;
        }
        let before: f64 = rvec.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for prev in &right {
            let overlap: Complex64 = prev
                .amplitudes()
                .iter()
                .zip(&rvec)
                .map(|(p, r)| p.conj() * r)
                .sum();
            for (r, p) in rvec.iter_mut().zip(prev.amplitudes()) {
                *r -= overlap * p;
            }
        }
        let after: f64 = rvec.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if after < 0.5 * before.max(1e-300) {
            // the direction collapsed into the earlier frame: numerically zero
            continue;
        }
        crate::eig::normalize(&mut rvec);
        coefficients.push(xi);
        left.push(PureState::new_unchecked(lvec));
        right.push(PureState::new_unchecked(rvec));
    }
    // renormalize the coefficient vector after truncation
    let sum: f64 = coefficients.iter().map(|c| c * c).sum::<f64>().sqrt();
    for c in coefficients.iter_mut() {
        *c /= sum;
    }
    SchmidtState::new_with(coefficients, left, right, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    #[test]
    fn product_state_is_rank_one() {
        let sp = TensorSpace::bipartite(2, 2);
        let psi = ProductState::basis(&sp, &[0, 0]).flatten();
        let s = schmidt(&psi, &sp).unwrap();
        assert_eq!(s.rank(), 1);
        assert!((s.coefficients()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn maximally_entangled_coefficients() {
        let sp = TensorSpace::bipartite(2, 2);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let psi = PureState::new(vec![
            Complex64::new(r, 0.0),
            C_ZERO,
            C_ZERO,
            Complex64::new(r, 0.0),
        ])
        .unwrap();
        let s = schmidt(&psi, &sp).unwrap();
        assert_eq!(s.rank(), 2);
        for c in s.coefficients() {
            assert!((c - r).abs() < 1e-12);
        }
    }

    #[test]
    fn random_state_matches_reshape_oracle_and_reassembles() {
        let sp = TensorSpace::bipartite(3, 4);
        for rep in 0..20 {
            let psi = random::haar_state(12, &mut random::substream(31, rep));
            let s = schmidt(&psi, &sp).unwrap();
            // oracle: eigenvalues of A A^dag by direct reshape
            let mut mu_oracle = crate::oracle::reduced_spectrum(&psi, &sp);
            mu_oracle.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let probs = s.probabilities();
            for (got, want) in probs.iter().zip(&mu_oracle) {
                assert!((got - want).abs() < 1e-10);
            }
            let sum: f64 = probs.iter().sum();
            assert!((sum - 1.0).abs() < 1e-10);
            // reassembly up to nothing: the decomposition is exact
            let back = s.assemble();
            let overlap = back.inner(&psi).norm();
            assert!(overlap > 1.0 - 1e-10, "overlap {overlap}");
        }
    }

    #[test]
    fn schmidt_invariant_under_local_unitaries() {
        let sp = TensorSpace::bipartite(3, 3);
        for rep in 0..10 {
            let mut rng = random::substream(32, rep);
            let psi = random::haar_state(9, &mut rng);
            let u = random::haar_unitary(3, &mut rng);
            let v = random::haar_unitary(3, &mut rng);
            let uv = crate::matrix::kron(&u, &v);
            let rotated = PureState::new_unchecked(uv.apply(psi.amplitudes()));
            let s1 = schmidt(&psi, &sp).unwrap();
            let s2 = schmidt(&rotated, &sp).unwrap();
            let (p1, p2) = (s1.probabilities(), s2.probabilities());
            for i in 0..p1.len().max(p2.len()) {
                let a = p1.get(i).copied().unwrap_or(0.0);
                let b = p2.get(i).copied().unwrap_or(0.0);
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn schmidt_rejects_non_bipartite() {
        let sp = TensorSpace::new(vec![2, 2, 2]).unwrap();
        let psi = PureState::basis(8, 0);
        assert!(schmidt(&psi, &sp).is_err());
    }
}
