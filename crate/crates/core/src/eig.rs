//! Eigendecompositions and small matrix factorizations.
//!
//! The Hermitian solver is a cyclic complex Jacobi iteration. It is fully
//! deterministic: identical inputs produce identical rotations, which the
//! see-saw optimizer relies on for reproducible restart streams. Eigenvector
//! phases are fixed by making the largest-modulus component real positive.

use num_complex::Complex64;

use crate::error::{RangeError, Result};
use crate::matrix::{ComplexMatrix, HermitianMatrix, C_ONE, C_ZERO};

/// Result of a Hermitian eigendecomposition, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    /// Column k is the eigenvector of `values[k]`.
    pub vectors: ComplexMatrix,
}

impl Eigh {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        let n = self.vectors.order();
        (0..n).map(|i| self.vectors[(i, k)]).collect()
    }

    /// ||X - V diag(values) V^dag|| / ||X|| in Frobenius norm.
    pub fn reconstruction_error(&self, h: &HermitianMatrix) -> f64 {
        let n = h.order();
        let x = h.matrix();
        let mut err = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut rec = C_ZERO;
                for k in 0..n {
                    rec += self.vectors[(i, k)] * self.values[k] * self.vectors[(j, k)].conj();
                }
                err += (x[(i, j)] - rec).norm_sqr();
            }
        }
        let norm = x.frobenius_norm();
        if norm == 0.0 {
            err.sqrt()
        } else {
            err.sqrt() / norm
        }
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
pub fn eigh(h: &HermitianMatrix) -> Eigh {
    let n = h.order();
    let x = h.matrix();
    let mut a: Vec<Complex64> = x.entries().to_vec();
    let mut v = ComplexMatrix::identity(n);
    if n == 1 {
        return Eigh {
            values: vec![a[0].re],
            vectors: v,
        };
    }

    let scale = x.frobenius_norm();
    let stop = (scale * 1e-15).max(f64::MIN_POSITIVE);
    let idx = |i: usize, j: usize| i * n + j;

    for _sweep in 0..60 {
        let mut off = 0.0;
        for p in 0..n - 1 {
            for q in p + 1..n {
                off += a[idx(p, q)].norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= stop {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let gamma = a[idx(p, q)];
                let gnorm = gamma.norm();
                if gnorm <= stop * 1e-2 / (n as f64) {
                    continue;
                }
                let alpha = a[idx(p, p)].re;
                let beta = a[idx(q, q)].re;
                let phase = gamma / gnorm;
                let tau = (beta - alpha) / (2.0 * gnorm);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J_pp = c, J_pq = s, J_qp = -s e^{-i phi}, J_qq = c e^{-i phi}
                let jqp = -s * phase.conj();
                let jqq = c * phase.conj();

                // A <- A J (columns p, q)
                for k in 0..n {
                    let akp = a[idx(k, p)];
                    let akq = a[idx(k, q)];
                    a[idx(k, p)] = c * akp + jqp * akq;
                    a[idx(k, q)] = s * akp + jqq * akq;
                }
                // A <- J^dag A (rows p, q)
                for k in 0..n {
                    let apk = a[idx(p, k)];
                    let aqk = a[idx(q, k)];
                    a[idx(p, k)] = c * apk + jqp.conj() * aqk;
                    a[idx(q, k)] = s * apk + jqq.conj() * aqk;
                }
                // hygiene: the rotated block is exactly diagonal and real
                a[idx(p, q)] = C_ZERO;
                a[idx(q, p)] = C_ZERO;
                a[idx(p, p)] = Complex64::new(a[idx(p, p)].re, 0.0);
                a[idx(q, q)] = Complex64::new(a[idx(q, q)].re, 0.0);
                // V <- V J
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp + jqp * vkq;
                    v[(k, q)] = s * vkp + jqq * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[idx(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());

    let mut values = Vec::with_capacity(n);
    let mut vectors = ComplexMatrix::zeros(n);
    for (new_k, &old_k) in order.iter().enumerate() {
        values.push(diag[old_k]);
        let mut col: Vec<Complex64> = (0..n).map(|i| v[(i, old_k)]).collect();
        fix_phase(&mut col);
        for (i, val) in col.into_iter().enumerate() {
            vectors[(i, new_k)] = val;
        }
    }
    Eigh { values, vectors }
}

/// Rotates a vector so its largest-modulus component is real positive.
pub fn fix_phase(v: &mut [Complex64]) {
    let mut best = 0;
    let mut best_norm = 0.0;
    for (i, z) in v.iter().enumerate() {
        let nz = z.norm();
        if nz > best_norm {
            best_norm = nz;
            best = i;
        }
    }
    if best_norm == 0.0 {
        return;
    }
    let phase = v[best].conj() / best_norm;
    for z in v.iter_mut() {
        *z *= phase;
    }
}

pub fn normalize(v: &mut [Complex64]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for z in v.iter_mut() {
            *z /= norm;
        }
    }
}

/// Eigendecomposition of a normal matrix via its commuting Hermitian parts.
///
/// Diagonalizes (M+M^dag)/2, then rotates every (near-)degenerate eigenspace
/// so that (M-M^dag)/2i is diagonal on it. Exact for normal matrices; inputs
/// failing the normality test are rejected.
pub fn eig_normal(m: &ComplexMatrix) -> Result<(Vec<Complex64>, ComplexMatrix)> {
    let n = m.order();
    let prod1 = m.matmul(&m.adjoint())?;
    let prod2 = m.adjoint().matmul(m)?;
    let dev = prod1.sub(&prod2)?.frobenius_norm();
    let scale = m.frobenius_norm().powi(2).max(1.0);
    if dev > 1e-10 * scale {
        return Err(RangeError::InvalidParameter(format!(
            "matrix is not normal: commutator norm {dev:.3e}"
        )));
    }
    let a = HermitianMatrix::new_with(m.hermitian_part(), &crate::tolerance::Tolerances {
        hermiticity: 1e-9,
        ..crate::tolerance::Tolerances::DEFAULT
    })?;
    let ea = eigh(&a);
    let cluster_tol = 1e-8 * (m.max_abs().max(1.0));

    let mut vectors = ea.vectors.clone();
    let b = m.skew_part();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (ea.values[end] - ea.values[end - 1]).abs() <= cluster_tol {
            end += 1;
        }
        let d = end - start;
        if d > 1 {
            // compress B onto the cluster and diagonalize
            let cols: Vec<Vec<Complex64>> = (start..end)
                .map(|k| (0..n).map(|i| vectors[(i, k)]).collect())
                .collect();
            let mut bc = ComplexMatrix::zeros(d);
            for (r, cr) in cols.iter().enumerate() {
                for (s, cs) in cols.iter().enumerate() {
                    bc[(r, s)] = b.sandwich(cr, cs);
                }
            }
            let bch = HermitianMatrix::new_with(
                bc,
                &crate::tolerance::Tolerances {
                    hermiticity: 1e-8,
                    ..crate::tolerance::Tolerances::DEFAULT
                },
            )?;
            let eb = eigh(&bch);
            for k in 0..d {
                let mut newcol = vec![C_ZERO; n];
                for (r, cr) in cols.iter().enumerate() {
                    let w = eb.vectors[(r, k)];
                    for i in 0..n {
                        newcol[i] += w * cr[i];
                    }
                }
                fix_phase(&mut newcol);
                for i in 0..n {
                    vectors[(i, start + k)] = newcol[i];
                }
            }
        }
        start = end;
    }

    let values: Vec<Complex64> = (0..n)
        .map(|k| {
            let col: Vec<Complex64> = (0..n).map(|i| vectors[(i, k)]).collect();
            m.expectation(&col)
        })
        .collect();
    Ok((values, vectors))
}

/// Thin SVD, descending singular values, M = U diag(s) V^dag.
pub fn svd(m: &ComplexMatrix) -> (ComplexMatrix, Vec<f64>, ComplexMatrix) {
    let n = m.order();
    let gram = m.adjoint().matmul(m).expect("square");
    let gh = HermitianMatrix::new_with(
        gram,
        &crate::tolerance::Tolerances {
            hermiticity: 1e-8,
            ..crate::tolerance::Tolerances::DEFAULT
        },
    )
    .expect("gram matrix is Hermitian");
    let eg = eigh(&gh);
    let mut sigma = Vec::with_capacity(n);
    let mut v = ComplexMatrix::zeros(n);
    for k in 0..n {
        let src = n - 1 - k; // descending
        sigma.push(eg.values[src].max(0.0).sqrt());
        for i in 0..n {
            v[(i, k)] = eg.vectors[(i, src)];
        }
    }
    let smax = sigma.first().copied().unwrap_or(0.0);
    let mut ucols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for k in 0..n {
        if sigma[k] > smax * 1e-13 && sigma[k] > 0.0 {
            let vk: Vec<Complex64> = (0..n).map(|i| v[(i, k)]).collect();
            let mut uk = m.apply(&vk);
            for z in uk.iter_mut() {
                *z /= sigma[k];
            }
            // re-orthogonalize against earlier columns for tiny sigmas
            for prev in &ucols {
                let overlap: Complex64 = prev.iter().zip(&uk).map(|(a, b)| a.conj() * b).sum();
                for (z, p) in uk.iter_mut().zip(prev) {
                    *z -= overlap * p;
                }
            }
            normalize(&mut uk);
            ucols.push(uk);
        } else {
            break;
        }
    }
    complete_orthonormal(&mut ucols, n);
    let mut u = ComplexMatrix::zeros(n);
    for (k, col) in ucols.iter().enumerate() {
        for i in 0..n {
            u[(i, k)] = col[i];
        }
    }
    (u, sigma, v)
}

/// Extends a set of orthonormal columns to a full orthonormal basis.
pub fn complete_orthonormal(cols: &mut Vec<Vec<Complex64>>, dim: usize) {
    let mut cand = 0;
    while cols.len() < dim {
        assert!(cand < 2 * dim, "failed to complete orthonormal basis");
        let mut v = vec![C_ZERO; dim];
        v[cand % dim] = C_ONE;
        cand += 1;
        for prev in cols.iter() {
            let overlap: Complex64 = prev.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (z, p) in v.iter_mut().zip(prev) {
                *z -= overlap * p;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            for z in v.iter_mut() {
                *z /= norm;
            }
            cols.push(v);
        }
    }
}

/// The unitary maximizing Re tr(U Z).
pub fn maximizing_unitary(z: &ComplexMatrix) -> ComplexMatrix {
    let (p, _s, q) = svd(z);
    q.matmul(&p.adjoint()).expect("square")
}

/// exp(i H) for Hermitian H, by eigendecomposition.
pub fn unitary_exp_i(h: &HermitianMatrix) -> ComplexMatrix {
    let e = eigh(h);
    let n = h.order();
    let mut out = ComplexMatrix::zeros(n);
    for k in 0..n {
        let phase = Complex64::from_polar(1.0, e.values[k]);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += e.vectors[(i, k)] * phase * e.vectors[(j, k)].conj();
            }
        }
    }
    if let Some(sp) = h.space() {
        out = out.with_space(sp.clone()).expect("same order");
    }
    out
}

/// H^{-1/2} for positive semidefinite H, small eigenvalues clamped.
pub fn psd_inv_sqrt(h: &HermitianMatrix) -> ComplexMatrix {
    let e = eigh(h);
    let n = h.order();
    let clamp = e.values.last().copied().unwrap_or(0.0).max(0.0) * 1e-14;
    let mut out = ComplexMatrix::zeros(n);
    for k in 0..n {
        let lam = e.values[k];
        if lam <= clamp {
            continue;
        }
        let w = 1.0 / lam.sqrt();
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += e.vectors[(i, k)] * w * e.vectors[(j, k)].conj();
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    #[test]
    fn eigh_diagonal_sorted() {
        let h = HermitianMatrix::diagonal(&[3.0, 1.0, 2.0]);
        let e = eigh(&h);
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn eigh_xts_spectrum() {
        // family (2,0,0,t / 0,1,s,0 / 0,s,-1,0 / t,0,0,-2) at t=s=1:
        // spectrum {-sqrt5, -sqrt2, sqrt2, sqrt5} ascending
        let x = crate::families::x_ts(1.0, 1.0).unwrap();
        let e = eigh(&x);
        let want = [-(5f64.sqrt()), -(2f64.sqrt()), 2f64.sqrt(), 5f64.sqrt()];
        for (got, want) in e.values.iter().zip(want) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn eigh_random_reconstruction_and_orthonormality() {
        for rep in 0..20 {
            let mut rng = random::substream(42, rep);
            let g = random::ginibre(6, 6, &mut rng);
            let h = HermitianMatrix::new(g.hermitian_part()).unwrap();
            let e = eigh(&h);
            assert!(e.reconstruction_error(&h) < 1e-12);
            for a in 0..6 {
                for b in 0..6 {
                    let va = e.vector(a);
                    let vb = e.vector(b);
                    let ov: Complex64 = va.iter().zip(&vb).map(|(x, y)| x.conj() * y).sum();
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((ov.norm() - want).abs() < 1e-12);
                }
            }
            // ascending
            for k in 1..6 {
                assert!(e.values[k] >= e.values[k - 1]);
            }
        }
    }

    #[test]
    fn eigh_matches_characteristic_polynomial_roots() {
        let mut rng = random::substream(7, 0);
        let g = random::ginibre(6, 6, &mut rng);
        let h = HermitianMatrix::new(g.hermitian_part()).unwrap();
        let e = eigh(&h);
        let mut roots: Vec<f64> = crate::oracle::char_poly_roots(h.matrix())
            .into_iter()
            .map(|z| z.re)
            .collect();
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in e.values.iter().zip(roots) {
            assert!((got - want).abs() < 1e-8, "{got} vs {want}");
        }
    }

    #[test]
    fn eigh_invariant_under_unitary_conjugation() {
        for rep in 0..10 {
            let mut rng = random::substream(13, rep);
            let g = random::ginibre(5, 5, &mut rng);
            let h = HermitianMatrix::new(g.hermitian_part()).unwrap();
            let u = random::haar_unitary(5, &mut rng);
            let conj = u
                .matmul(h.matrix())
                .unwrap()
                .matmul(&u.adjoint())
                .unwrap();
            let hc = HermitianMatrix::new_with(
                conj,
                &crate::tolerance::Tolerances {
                    hermiticity: 1e-10,
                    ..Default::default()
                },
            )
            .unwrap();
            let e1 = eigh(&h);
            let e2 = eigh(&hc);
            for (a, b) in e1.values.iter().zip(&e2.values) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn eig_normal_unitary_diagonal() {
        let m = ComplexMatrix::diagonal(&[
            Complex64::from_polar(1.0, 0.3),
            Complex64::from_polar(1.0, 2.0),
            Complex64::from_polar(1.0, -1.1),
        ]);
        let (vals, _) = eig_normal(&m).unwrap();
        let mut args: Vec<f64> = vals.iter().map(|z| z.arg()).collect();
        args.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut want = [0.3f64, 2.0, -1.1];
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in args.iter().zip(want) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn eig_normal_random_unitary() {
        let mut rng = random::substream(3, 1);
        let u = random::haar_unitary(4, &mut rng);
        let (vals, vecs) = eig_normal(&u).unwrap();
        for k in 0..4 {
            assert!((vals[k].norm() - 1.0).abs() < 1e-10);
            let col: Vec<Complex64> = (0..4).map(|i| vecs[(i, k)]).collect();
            let uv = u.apply(&col);
            for i in 0..4 {
                assert!((uv[i] - vals[k] * col[i]).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn svd_reconstructs() {
        let mut rng = random::substream(9, 4);
        let m = random::ginibre(5, 5, &mut rng);
        let (u, s, v) = svd(&m);
        let mut rec = ComplexMatrix::zeros(5);
        for k in 0..5 {
            for i in 0..5 {
                for j in 0..5 {
                    rec[(i, j)] += u[(i, k)] * s[k] * v[(j, k)].conj();
                }
            }
        }
        assert!(rec.sub(&m).unwrap().frobenius_norm() < 1e-10 * m.frobenius_norm());
        assert!(u.is_unitary(1e-10));
        assert!(v.is_unitary(1e-10));
    }

    #[test]
    fn maximizing_unitary_beats_random() {
        let mut rng = random::substream(21, 0);
        let z = random::ginibre(4, 4, &mut rng);
        let best = maximizing_unitary(&z);
        let val = best.matmul(&z).unwrap().trace().re;
        for rep in 0..50 {
            let u = random::haar_unitary(4, &mut random::substream(22, rep));
            assert!(u.matmul(&z).unwrap().trace().re <= val + 1e-10);
        }
    }
}
