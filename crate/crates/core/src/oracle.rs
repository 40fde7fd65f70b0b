//! Brute-force reference computations used only by tests.
//!
//! Everything here is deliberately independent of the solvers it checks:
//! characteristic-polynomial roots instead of the Jacobi eigensolver, dense
//! grid and random-sampling searches instead of the see-saw optimizer.

use num_complex::Complex64;
use rand::Rng;

use crate::matrix::{ComplexMatrix, C_ONE, C_ZERO};
use crate::space::TensorSpace;
use crate::state::{ProductState, PureState};

/// Coefficients of det(tI - X) by the Faddeev-LeVerrier recursion,
/// highest power first (monic).
pub fn char_poly(x: &ComplexMatrix) -> Vec<Complex64> {
    let n = x.order();
    let mut coeffs = vec![C_ONE];
    let mut m = ComplexMatrix::zeros(n);
    for k in 1..=n {
        // M_k = X M_{k-1} + c_{k-1} I
        let mut xm = x.matmul(&m).expect("square");
        let c_prev = *coeffs.last().unwrap();
        for i in 0..n {
            xm[(i, i)] += c_prev;
        }
        m = xm;
        let c_k = -(x.matmul(&m).expect("square")).trace() / (k as f64);
        coeffs.push(c_k);
    }
    coeffs
}

/// All roots of a monic polynomial by Durand-Kerner iteration.
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return vec![];
    }
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = C_ZERO;
        for c in coeffs {
            acc = acc * z + c;
        }
        acc
    };
    // radius bound: 1 + max |c_k|
    let radius = 1.0
        + coeffs[1..]
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max);
    let seed = Complex64::from_polar(1.0, 0.7);
    let mut roots: Vec<Complex64> = (0..deg)
        .map(|k| seed * Complex64::from_polar(0.5 * radius, 2.0 * std::f64::consts::PI * k as f64 / deg as f64))
        .collect();
    for _ in 0..400 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let mut denom = C_ONE;
            for j in 0..deg {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() < 1e-300 {
                continue;
            }
            let delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            moved = moved.max(delta.norm());
        }
        if moved < 1e-13 * radius.max(1.0) {
            break;
        }
    }
    roots
}

/// Eigenvalues of a matrix via characteristic polynomial roots.
pub fn char_poly_roots(x: &ComplexMatrix) -> Vec<Complex64> {
    poly_roots(&char_poly(x))
}

/// Eigenvalues of the reduced left state of a bipartite vector (direct reshape).
pub fn reduced_spectrum(psi: &PureState, space: &TensorSpace) -> Vec<f64> {
    let (dk, dm) = (space.dims()[0], space.dims()[1]);
    let a = psi.amplitudes();
    let gram = ComplexMatrix::from_fn(dk, |i, p| {
        let mut acc = C_ZERO;
        for j in 0..dm {
            acc += a[i * dm + j] * a[p * dm + j].conj();
        }
        acc
    });
    char_poly_roots(&gram).into_iter().map(|z| z.re).collect()
}

/// Dense grid over product states of a 2 x 2 system, returning the extreme
/// real expectation values of a Hermitian operator.
///
/// States are parameterized as (cos a, sin a e^{i p}) x (cos b, sin b e^{i q}).
pub fn grid_pnr_2x2(x: &ComplexMatrix, steps: usize) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let pi = std::f64::consts::PI;
    for ia in 0..=steps {
        let a = 0.5 * pi * ia as f64 / steps as f64;
        for ip in 0..(2 * steps) {
            let p = 2.0 * pi * ip as f64 / (2 * steps) as f64;
            let left = [
                Complex64::new(a.cos(), 0.0),
                Complex64::from_polar(a.sin(), p),
            ];
            for ib in 0..=steps {
                let b = 0.5 * pi * ib as f64 / steps as f64;
                for iq in 0..(2 * steps) {
                    let q = 2.0 * pi * iq as f64 / (2 * steps) as f64;
                    let right = [
                        Complex64::new(b.cos(), 0.0),
                        Complex64::from_polar(b.sin(), q),
                    ];
                    let full = [
                        left[0] * right[0],
                        left[0] * right[1],
                        left[1] * right[0],
                        left[1] * right[1],
                    ];
                    let val = x.expectation(&full).re;
                    lo = lo.min(val);
                    hi = hi.max(val);
                }
            }
        }
    }
    (lo, hi)
}

/// Random product-state sampling of expectation values.
pub fn sample_product_expectations(
    x: &ComplexMatrix,
    space: &TensorSpace,
    samples: usize,
    rng: &mut impl Rng,
) -> Vec<Complex64> {
    (0..samples)
        .map(|_| {
            let s = crate::random::haar_product_state(space, rng);
            x.expectation(s.flatten().amplitudes())
        })
        .collect()
}

/// Best product expectation of a Hermitian operator over random samples.
pub fn sampled_pnr_edges(
    x: &ComplexMatrix,
    space: &TensorSpace,
    samples: usize,
    rng: &mut impl Rng,
) -> (f64, f64) {
    let vals = sample_product_expectations(x, space, samples, rng);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in vals {
        lo = lo.min(v.re);
        hi = hi.max(v.re);
    }
    (lo, hi)
}

/// Exhaustive mixture search over rank-2 states assembled from a parameter
/// grid of Schmidt frames, for small bipartite spaces. Returns the minimum
/// real expectation found.
pub fn grid_rank2_min(x: &ComplexMatrix, space: &TensorSpace, rng: &mut impl Rng, tries: usize) -> f64 {
    let mut best = f64::INFINITY;
    for _ in 0..tries {
        let psi = crate::random::haar_schmidt_bounded_state(2, space, rng).unwrap();
        let val = x.expectation(psi.amplitudes()).re;
        best = best.min(val);
    }
    best
}

/// Value of the product state |prod> under repeated local-unitary sampling of
/// a fidelity form <psi|(U x V)^dag rho (U x V)|psi>.
pub fn sampled_local_fidelity_max(
    rho_diag: &[f64],
    psi: &PureState,
    n: usize,
    samples: usize,
    rng: &mut impl Rng,
) -> f64 {
    let mut best: f64 = 0.0;
    for _ in 0..samples {
        let u = crate::random::haar_unitary(n, rng);
        let v = crate::random::haar_unitary(n, rng);
        let uv = crate::matrix::kron(&u, &v);
        let rotated = uv.apply(psi.amplitudes());
        let val: f64 = rotated
            .iter()
            .enumerate()
            .map(|(i, z)| rho_diag[i] * z.norm_sqr())
            .sum();
        best = best.max(val);
    }
    best
}

/// Haar-sampled numerical range points (not product-restricted).
pub fn sample_range_points(x: &ComplexMatrix, samples: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    (0..samples)
        .map(|_| {
            let s = crate::random::haar_state(x.order(), rng);
            x.expectation(s.amplitudes())
        })
        .collect()
}

pub use crate::matrix::kron as kron_for_tests;

#[allow(dead_code)]
fn product_state_value(x: &ComplexMatrix, s: &ProductState) -> Complex64 {
    x.expectation(s.flatten().amplitudes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char_poly_of_diagonal() {
        let x = ComplexMatrix::diagonal(&[
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(3.0, 0.0),
        ]);
        let mut roots: Vec<f64> = char_poly_roots(&x).into_iter().map(|z| z.re).collect();
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (r, want) in roots.iter().zip([1.0, 2.0, 3.0]) {
            assert!((r - want).abs() < 1e-10);
        }
    }

    #[test]
    fn poly_roots_complex_pair() {
        // t^2 + 1 -> +/- i
        let coeffs = vec![C_ONE, C_ZERO, C_ONE];
        let roots = poly_roots(&coeffs);
        let mut ims: Vec<f64> = roots.iter().map(|z| z.im).collect();
        ims.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ims[0] + 1.0).abs() < 1e-10);
        assert!((ims[1] - 1.0).abs() < 1e-10);
    }
}
