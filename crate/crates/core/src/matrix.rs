//! Dense complex matrices with an optional tensor-product structure.

use num_complex::Complex64;

use crate::error::{RangeError, Result};
use crate::space::TensorSpace;
use crate::tolerance::Tolerances;

pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Which tensor factor of a bipartite space an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

/// A square complex matrix in row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    order: usize,
    entries: Vec<Complex64>,
    space: Option<TensorSpace>,
}

impl ComplexMatrix {
    pub fn zeros(order: usize) -> Self {
        Self {
            order,
            entries: vec![C_ZERO; order * order],
            space: None,
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            m[(i, i)] = C_ONE;
        }
        m
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            for j in 0..order {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from rows of (re, im) pairs.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let order = rows.len();
        let mut entries = Vec::with_capacity(order * order);
        for row in rows {
            if row.len() != order {
                return Err(RangeError::DimensionMismatch(format!(
                    "expected square matrix of order {order}"
                )));
            }
            entries.extend_from_slice(row);
        }
        Ok(Self {
            order,
            entries,
            space: None,
        })
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn space(&self) -> Option<&TensorSpace> {
        self.space.as_ref()
    }

    /// Attaches a tensor factorization; its total must equal the order.
    pub fn with_space(mut self, space: TensorSpace) -> Result<Self> {
        if space.total() != self.order {
            return Err(RangeError::DimensionMismatch(format!(
                "space total {} does not match order {}",
                space.total(),
                self.order
            )));
        }
        self.space = Some(space);
        Ok(self)
    }

    /// The declared space, or the trivial single-factor space.
    pub fn space_or_single(&self) -> TensorSpace {
        self.space
            .clone()
            .unwrap_or_else(|| TensorSpace::single(self.order))
    }

    pub fn bipartite_dims(&self) -> Result<(usize, usize)> {
        match &self.space {
            Some(sp) if sp.is_bipartite() => Ok((sp.dims()[0], sp.dims()[1])),
            _ => Err(RangeError::DimensionMismatch(
                "operation requires a declared bipartite tensor space".into(),
            )),
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.order);
        for i in 0..self.order {
            for j in 0..self.order {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out.space = self.space.clone();
        out
    }

    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        for v in &mut out.entries {
            *v = v.conj();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.order);
        for i in 0..self.order {
            for j in 0..self.order {
                out[(j, i)] = self[(i, j)];
            }
        }
        out.space = self.space.clone();
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.order).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, a: Complex64) -> Self {
        let mut out = self.clone();
        for v in &mut out.entries {
            *v *= a;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let mut out = self.clone();
        for (v, w) in out.entries.iter_mut().zip(&other.entries) {
            *v += w;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let mut out = self.clone();
        for (v, w) in out.entries.iter_mut().zip(&other.entries) {
            *v -= w;
        }
        Ok(out)
    }

    /// Adds `a` times the identity.
    pub fn shift(&self, a: Complex64) -> Self {
        let mut out = self.clone();
        for i in 0..self.order {
            out[(i, i)] += a;
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let n = self.order;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C_ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out.space = self.space.clone().or_else(|| other.space.clone());
        Ok(out)
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(v.len(), self.order);
        let n = self.order;
        let mut out = vec![C_ZERO; n];
        for i in 0..n {
            let row = &self.entries[i * n..(i + 1) * n];
            let mut acc = C_ZERO;
            for (a, b) in row.iter().zip(v) {
                acc += a * b;
            }
            out[i] = acc;
        }
        out
    }

    /// Quadratic form <u|X|u>.
    pub fn expectation(&self, u: &[Complex64]) -> Complex64 {
        let xu = self.apply(u);
        u.iter().zip(&xu).map(|(a, b)| a.conj() * b).sum()
    }

    /// Sesquilinear form <u|X|v>.
    pub fn sandwich(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        let xv = self.apply(v);
        u.iter().zip(&xv).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest deviation from Hermiticity relative to the largest entry.
    pub fn hermiticity_deviation(&self) -> f64 {
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let mut dev: f64 = 0.0;
        for i in 0..self.order {
            for j in i..self.order {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev / scale
    }

    /// Hermitian part (X + X^dag)/2.
    pub fn hermitian_part(&self) -> Self {
        let mut out = Self::zeros(self.order);
        for i in 0..self.order {
            for j in 0..self.order {
                out[(i, j)] = 0.5 * (self[(i, j)] + self[(j, i)].conj());
            }
        }
        out.space = self.space.clone();
        out
    }

    /// Anti-Hermitian part divided by i, i.e. the Hermitian matrix (X - X^dag)/(2i).
    pub fn skew_part(&self) -> Self {
        let half_over_i = Complex64::new(0.0, -0.5);
        let mut out = Self::zeros(self.order);
        for i in 0..self.order {
            for j in 0..self.order {
                out[(i, j)] = half_over_i * (self[(i, j)] - self[(j, i)].conj());
            }
        }
        out.space = self.space.clone();
        out
    }

    pub fn unitarity_deviation(&self) -> f64 {
        let prod = self.matmul(&self.adjoint()).expect("square");
        let mut dev: f64 = 0.0;
        for i in 0..self.order {
            for j in 0..self.order {
                let target = if i == j { C_ONE } else { C_ZERO };
                dev = dev.max((prod[(i, j)] - target).norm());
            }
        }
        dev
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    fn check_same_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(RangeError::DimensionMismatch(format!(
                "orders {} and {} differ",
                self.order, other.order
            )));
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.order + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.order + j]
    }
}

/// Kronecker product with the standard row-major layout.
///
/// The output space is the concatenation of both factor spaces; a factor
/// without a declared space counts as a single tensor slot.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (a.order(), b.order());
    let mut out = ComplexMatrix::zeros(na * nb);
    for i in 0..na {
        for j in 0..na {
            let aij = a[(i, j)];
            if aij == C_ZERO {
                continue;
            }
            for k in 0..nb {
                for l in 0..nb {
                    out[(i * nb + k, j * nb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    let space = a.space_or_single().concat(&b.space_or_single());
    out.with_space(space).expect("dims consistent")
}

/// Kronecker power X^{tensor n}.
pub fn kron_power(x: &ComplexMatrix, n: usize) -> ComplexMatrix {
    assert!(n >= 1);
    let mut out = x.clone();
    for _ in 1..n {
        out = kron(&out, x);
    }
    out
}

/// Partial transpose over one factor of a bipartite space.
///
/// A pure entry permutation plus conjugation, so Hermiticity and trace are
/// preserved exactly and the map is an involution.
pub fn partial_transpose(rho: &ComplexMatrix, space: &TensorSpace, side: Side) -> Result<ComplexMatrix> {
    if !space.is_bipartite() {
        return Err(RangeError::DimensionMismatch(
            "partial transpose needs a bipartite space".into(),
        ));
    }
    if space.total() != rho.order() {
        return Err(RangeError::DimensionMismatch(format!(
            "space total {} does not match order {}",
            space.total(),
            rho.order()
        )));
    }
    let (k, m) = (space.dims()[0], space.dims()[1]);
    let mut out = ComplexMatrix::zeros(rho.order());
    for i in 0..k {
        for j in 0..m {
            for p in 0..k {
                for q in 0..m {
                    let (r, c) = (i * m + j, p * m + q);
                    let (sr, sc) = match side {
                        // transpose the first factor: (i,j),(p,q) <- (p,j),(i,q)
                        Side::First => (p * m + j, i * m + q),
                        // transpose the second factor: (i,j),(p,q) <- (i,q),(p,j)
                        Side::Second => (i * m + q, p * m + j),
                    };
                    out[(r, c)] = rho[(sr, sc)];
                }
            }
        }
    }
    out.with_space(space.clone())
}

/// Reorders the tensor factors of an operator.
///
/// `perm[k]` is the old position of the factor that lands at new position `k`.
pub fn permute_factors(x: &ComplexMatrix, perm: &[usize]) -> Result<ComplexMatrix> {
    let space = x.space().ok_or_else(|| {
        RangeError::DimensionMismatch("factor permutation needs a declared space".into())
    })?;
    let m = space.factor_count();
    if perm.len() != m {
        return Err(RangeError::DimensionMismatch(
            "permutation length does not match factor count".into(),
        ));
    }
    let mut seen = vec![false; m];
    for &p in perm {
        if p >= m || seen[p] {
            return Err(RangeError::InvalidParameter("invalid permutation".into()));
        }
        seen[p] = true;
    }
    let new_dims: Vec<usize> = perm.iter().map(|&p| space.dims()[p]).collect();
    let new_space = TensorSpace::new(new_dims)?;
    let n = x.order();
    // map: new flat index -> old flat index
    let mut index_map = vec![0usize; n];
    for (new_flat, item) in index_map.iter_mut().enumerate() {
        let new_multi = new_space.unflatten(new_flat);
        let mut old_multi = vec![0usize; m];
        for (k, &p) in perm.iter().enumerate() {
            old_multi[p] = new_multi[k];
        }
        *item = space.flatten(&old_multi);
    }
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = x[(index_map[i], index_map[j])];
        }
    }
    out.with_space(new_space)
}

/// A matrix certified Hermitian at construction; stores the symmetrized copy.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: ComplexMatrix,
}

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::new_with(m, &Tolerances::DEFAULT)
    }

    pub fn new_with(m: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let dev = m.hermiticity_deviation();
        if dev > tol.hermiticity {
            return Err(RangeError::NotHermitian {
                deviation: dev,
                tolerance: tol.hermiticity,
            });
        }
        Ok(Self {
            inner: m.hermitian_part(),
        })
    }

    /// Real diagonal matrix.
    pub fn diagonal(values: &[f64]) -> Self {
        let entries: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Self {
            inner: ComplexMatrix::diagonal(&entries),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.inner
    }

    pub fn order(&self) -> usize {
        self.inner.order()
    }

    pub fn with_space(self, space: TensorSpace) -> Result<Self> {
        Ok(Self {
            inner: self.inner.with_space(space)?,
        })
    }

    pub fn space(&self) -> Option<&TensorSpace> {
        self.inner.space()
    }

    pub fn real_trace(&self) -> f64 {
        self.inner.trace().re
    }

    pub fn scale_real(&self, a: f64) -> Self {
        Self {
            inner: self.inner.scale(Complex64::new(a, 0.0)),
        }
    }

    pub fn shift_real(&self, a: f64) -> Self {
        Self {
            inner: self.inner.shift(Complex64::new(a, 0.0)),
        }
    }

    pub fn real_expectation(&self, v: &[Complex64]) -> f64 {
        self.inner.expectation(v).re
    }
}

/// A normalized positive semidefinite Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    inner: HermitianMatrix,
}

impl DensityMatrix {
    pub fn new(h: HermitianMatrix) -> Result<Self> {
        Self::new_with(h, &Tolerances::DEFAULT)
    }

    pub fn new_with(h: HermitianMatrix, tol: &Tolerances) -> Result<Self> {
        let tr = h.real_trace();
        if (tr - 1.0).abs() > tol.trace {
            return Err(RangeError::InvalidState(format!(
                "density matrix trace {tr} is not 1"
            )));
        }
        let eig = crate::eig::eigh(&h);
        if eig.values[0] < -tol.psd {
            return Err(RangeError::InvalidState(format!(
                "density matrix has negative eigenvalue {}",
                eig.values[0]
            )));
        }
        Ok(Self { inner: h })
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.inner
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.inner.matrix()
    }

    pub fn order(&self) -> usize {
        self.inner.order()
    }

    pub fn with_space(self, space: TensorSpace) -> Result<Self> {
        Ok(Self {
            inner: self.inner.with_space(space)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kron_identity_case() {
        let i2 = ComplexMatrix::identity(2);
        let out = kron(&i2, &i2);
        assert_eq!(out.order(), 4);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { C_ONE } else { C_ZERO };
                assert_eq!(out[(i, j)], want);
            }
        }
        assert_eq!(out.space().unwrap().dims(), &[2, 2]);
    }

    #[test]
    fn kron_diagonal_phases() {
        let phi = 0.73;
        let e = Complex64::from_polar(1.0, phi);
        let u = ComplexMatrix::diagonal(&[C_ONE, e]);
        let out = kron(&u, &u);
        let want = [C_ONE, e, e, e * e];
        for (i, w) in want.iter().enumerate() {
            assert!((out[(i, i)] - w).norm() < 1e-15);
        }
    }

    #[test]
    fn kron_pauli_x_block() {
        // sigma_x (x) sigma_x expanded by hand: antidiagonal ones.
        let sx = ComplexMatrix::from_rows(&[vec![C_ZERO, C_ONE], vec![C_ONE, C_ZERO]]).unwrap();
        let out = kron(&sx, &sx);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i + j == 3 { C_ONE } else { C_ZERO };
                assert_eq!(out[(i, j)], want, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn partial_transpose_diagonal_unchanged() {
        let sp = TensorSpace::bipartite(2, 2);
        let d = ComplexMatrix::diagonal(&[c(0.1, 0.0), c(0.2, 0.0), c(0.3, 0.0), c(0.4, 0.0)]);
        let pt = partial_transpose(&d, &sp, Side::Second).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(pt[(i, j)], d[(i, j)]);
            }
        }
    }

    #[test]
    fn partial_transpose_involution_and_trace() {
        let sp = TensorSpace::bipartite(3, 3);
        for rep in 0..100 {
            let g = random::ginibre(9, 9, &mut random::substream(11, rep));
            let pt = partial_transpose(&g, &sp, Side::Second).unwrap();
            let back = partial_transpose(&pt, &sp, Side::Second).unwrap();
            for i in 0..9 {
                for j in 0..9 {
                    assert_eq!(back[(i, j)], g[(i, j)]);
                }
            }
            assert!((pt.trace() - g.trace()).norm() < 1e-15);
        }
    }

    #[test]
    fn partial_transpose_max_entangled_min_eigenvalue() {
        // |Psi+><Psi+| on 2x2: partial transpose is SWAP/2, minimum eigenvalue -1/2.
        let sp = TensorSpace::bipartite(2, 2);
        let psi = [c(1.0, 0.0), C_ZERO, C_ZERO, c(1.0, 0.0)];
        let mut proj = ComplexMatrix::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                proj[(i, j)] = 0.5 * psi[i] * psi[j].conj();
            }
        }
        let pt = partial_transpose(&proj, &sp, Side::Second).unwrap();
        let h = HermitianMatrix::new(pt).unwrap();
        let eig = crate::eig::eigh(&h);
        assert!((eig.values[0] + 0.5).abs() < 1e-12);
    }

    #[test]
    fn permute_factors_swaps_kron_order() {
        let mut rng = random::substream(5, 0);
        let a = random::ginibre(2, 2, &mut rng);
        let b = random::ginibre(3, 3, &mut rng);
        let ab = kron(&a, &b);
        let ba = kron(&b, &a);
        let perm = permute_factors(&ab, &[1, 0]).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                assert!((perm[(i, j)] - ba[(i, j)]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn hermitian_rejects_asymmetric() {
        let m = ComplexMatrix::from_rows(&[vec![C_ONE, c(1.0, 0.5)], vec![C_ZERO, C_ONE]]).unwrap();
        assert!(HermitianMatrix::new(m).is_err());
    }
}
