//! Analytic operator families with closed-form restricted ranges.
//!
//! These constructors and their exact range formulas double as ground-truth
//! oracles for the see-saw optimizer test suite.

use num_complex::Complex64;

use crate::error::{RangeError, Result};
use crate::matrix::{kron, ComplexMatrix, DensityMatrix, HermitianMatrix, C_ONE, C_ZERO};
use crate::range::{Interval, PlanarSet, SetKind};
use crate::space::TensorSpace;
use crate::tolerance::Tolerances;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn require_nonnegative(name: &str, v: f64) -> Result<()> {
    if v < 0.0 {
        return Err(RangeError::InvalidParameter(format!("{name} must be nonnegative, got {v}")));
    }
    Ok(())
}

/// Order-four Hermitian family with closed-form product numerical range:
/// diag(2, 1, -1, -2) plus an outer coupling t and an inner coupling s.
pub fn x_ts(t: f64, s: f64) -> Result<HermitianMatrix> {
    require_nonnegative("t", t)?;
    require_nonnegative("s", s)?;
    y_ts(2.0, 1.0, -1.0, -2.0, t, s)
}

/// The generalization of `x_ts` with free diagonal (a, b, c, d).
pub fn y_ts(a: f64, b: f64, cc: f64, d: f64, t: f64, s: f64) -> Result<HermitianMatrix> {
    require_nonnegative("t", t)?;
    require_nonnegative("s", s)?;
    let m = ComplexMatrix::from_rows(&[
        vec![c(a), C_ZERO, C_ZERO, c(t)],
        vec![C_ZERO, c(b), c(s), C_ZERO],
        vec![C_ZERO, c(s), c(cc), C_ZERO],
        vec![c(t), C_ZERO, C_ZERO, c(d)],
    ])?
    .with_space(TensorSpace::bipartite(2, 2))?;
    HermitianMatrix::new(m)
}

/// Tridiagonal family with constant diagonal 1/2 and couplings (a, b, c = x a).
pub fn d_family(a: Complex64, b: Complex64, x: f64) -> HermitianMatrix {
    let cc = a * x;
    let half = c(0.5);
    let m = ComplexMatrix::from_rows(&[
        vec![half, a, C_ZERO, C_ZERO],
        vec![a.conj(), half, b, C_ZERO],
        vec![C_ZERO, b.conj(), half, cc],
        vec![C_ZERO, C_ZERO, cc.conj(), half],
    ])
    .expect("square")
    .with_space(TensorSpace::bipartite(2, 2))
    .expect("dims");
    HermitianMatrix::new(m).expect("Hermitian by construction")
}

/// The Pauli matrices sigma_1, sigma_2, sigma_3.
pub fn pauli(k: usize) -> ComplexMatrix {
    match k {
        1 => ComplexMatrix::from_rows(&[vec![C_ZERO, C_ONE], vec![C_ONE, C_ZERO]]).unwrap(),
        2 => ComplexMatrix::from_rows(&[
            vec![C_ZERO, Complex64::new(0.0, -1.0)],
            vec![Complex64::new(0.0, 1.0), C_ZERO],
        ])
        .unwrap(),
        3 => ComplexMatrix::from_rows(&[vec![C_ONE, C_ZERO], vec![C_ZERO, -C_ONE]]).unwrap(),
        _ => panic!("Pauli index must be 1, 2 or 3"),
    }
}

/// Canonical nonlocal two-qubit unitary exp(i sum_k alpha_k sigma_k x sigma_k),
/// alphas restricted to [0, pi/4].
pub fn canonical_ud(alpha: [f64; 3]) -> Result<ComplexMatrix> {
    for (k, &a) in alpha.iter().enumerate() {
        if !(0.0..=std::f64::consts::FRAC_PI_4 + 1e-12).contains(&a) {
            return Err(RangeError::InvalidParameter(format!(
                "alpha_{} = {a} outside [0, pi/4]",
                k + 1
            )));
        }
    }
    let mut gen = ComplexMatrix::zeros(4);
    for k in 1..=3 {
        let sk = pauli(k);
        let term = kron(&sk, &sk).scale(c(alpha[k - 1]));
        gen = gen.add(&term)?;
    }
    let h = HermitianMatrix::new_with(
        gen,
        &Tolerances {
            hermiticity: 1e-10,
            ..Tolerances::DEFAULT
        },
    )?;
    let u = crate::eig::unitary_exp_i(&h);
    u.with_space(TensorSpace::bipartite(2, 2))
}

/// Diagonal two-qubit unitary diag(1, e^{i phi}, e^{i psi}, 1).
pub fn v_family(phi: f64, psi: f64) -> Result<ComplexMatrix> {
    for (name, v) in [("phi", phi), ("psi", psi)] {
        if !(0.0..=2.0 * std::f64::consts::PI + 1e-12).contains(&v) {
            return Err(RangeError::InvalidParameter(format!(
                "{name} = {v} outside [0, 2 pi]"
            )));
        }
    }
    ComplexMatrix::diagonal(&[
        C_ONE,
        Complex64::from_polar(1.0, phi),
        Complex64::from_polar(1.0, psi),
        C_ONE,
    ])
    .with_space(TensorSpace::bipartite(2, 2))
}

/// Single-qubit phase gate diag(1, e^{i phi}).
pub fn u_phase(phi: f64) -> ComplexMatrix {
    ComplexMatrix::diagonal(&[C_ONE, Complex64::from_polar(1.0, phi)])
}

/// Diagonal spectrum matrix diag(x1, x2, x3, 1 - x1 - x2 - x3).
pub fn diag_spectrum(x1: f64, x2: f64, x3: f64) -> Result<HermitianMatrix> {
    let x4 = 1.0 - x1 - x2 - x3;
    for v in [x1, x2, x3, x4] {
        if v < -1e-12 {
            return Err(RangeError::InvalidParameter(
                "spectrum entries must be nonnegative and sum to at most 1".into(),
            ));
        }
    }
    Ok(HermitianMatrix::diagonal(&[x1, x2, x3, x4]))
}

/// Isospectral density family: the diagonal spectrum rotated by the nonlocal
/// unitary U_d(alpha1, 0, 0).
pub fn rho_alpha(alpha1: f64, xs: [f64; 3]) -> Result<DensityMatrix> {
    let e = diag_spectrum(xs[0], xs[1], xs[2])?;
    let u = canonical_ud([alpha1, 0.0, 0.0])?;
    let rotated = u.matmul(e.matrix())?.matmul(&u.adjoint())?;
    let h = HermitianMatrix::new_with(
        rotated,
        &Tolerances {
            hermiticity: 1e-10,
            ..Tolerances::DEFAULT
        },
    )?
    .with_space(TensorSpace::bipartite(2, 2))?;
    DensityMatrix::new(h)
}

/// Closed-form product numerical range of `x_ts`: the symmetric interval
/// [-f(t+s), f(t+s)] with f = 2 below sqrt(3) and sqrt(u^4+10u^2+9)/(2u) above.
pub fn xts_exact_pnr(t: f64, s: f64) -> Interval {
    let u = t + s;
    let f = if u < 3f64.sqrt() {
        2.0
    } else {
        (u.powi(4) + 10.0 * u * u + 9.0).sqrt() / (2.0 * u)
    };
    Interval::new(-f, f)
}

/// Inner bound for the product numerical range of `y_ts`: the returned
/// interval is contained in the true range, never claimed exact.
pub fn yts_inner_bound(a: f64, b: f64, cc: f64, d: f64, t: f64, s: f64) -> Interval {
    let u = t + s;
    let quarter_trace = 0.25 * (a + b + cc + d);
    let lo = (a.min(b).min(cc).min(d)).min(quarter_trace - 0.5 * u);
    let hi = (a.max(b).max(cc).max(d)).max(quarter_trace + 0.5 * u);
    Interval::new(lo, hi)
}

/// Exact product numerical range of the tridiagonal family:
/// [1/2 - G, 1/2 + G] with G = (|a+c| + sqrt(|a-c|^2 + |b|^2)) / 2, c = x a.
///
/// The half-width follows from maximizing
/// |a p + c (1-p)| + |b| sqrt(p (1-p)) over p in [0, 1]: with t = 2p - 1 the
/// optimum is (|a+c| + sqrt(|a-c|^2 + |b|^2)) / 2, and the operator is block
/// positive exactly when G <= 1/2.
pub fn d_exact_pnr(a: Complex64, b: Complex64, x: f64) -> Interval {
    let g = d_family_g(a, b, x);
    Interval::new(0.5 - g, 0.5 + g)
}

pub fn d_family_g(a: Complex64, b: Complex64, x: f64) -> f64 {
    let cc = a * x;
    0.5 * ((a + cc).norm() + ((a - cc).norm_sqr() + b.norm_sqr()).sqrt())
}

/// Analytic boundary of the product numerical range of U^{x n} for the phase
/// gate U = diag(1, e^{i phi}).
///
/// The inner curve is alpha -> e^{i n alpha} (cos(phi/2)/cos(alpha - phi/2))^n
/// on [0, phi]; the outer border lies in the n unit-circle chords
/// [e^{i(k-1)phi}, e^{ik phi}]. The minimum modulus over the set is
/// cos(phi/2)^n, attained at alpha = phi/2.
pub fn u_tensor_boundary(phi: f64, n: usize, resolution: usize) -> Result<PlanarSet> {
    if n == 0 {
        return Err(RangeError::InvalidParameter("n must be at least 1".into()));
    }
    if !(0.0..2.0 * std::f64::consts::PI).contains(&phi) {
        return Err(RangeError::InvalidParameter(format!(
            "phi = {phi} outside [0, 2 pi)"
        )));
    }
    if phi == 0.0 {
        return Ok(PlanarSet::point(C_ONE));
    }
    let res = resolution.max(8);
    let steps = if res % 2 == 0 { res } else { res + 1 }; // keep the exact midpoint sample
    let half = 0.5 * phi;
    let mut boundary = Vec::with_capacity(steps + 1 + n * (steps / n + 1));
    for j in 0..=steps {
        let alpha = phi * j as f64 / steps as f64;
        let f = half.cos() / (alpha - half).cos();
        boundary.push(Complex64::from_polar(f.powi(n as i32), n as f64 * alpha));
    }
    let hole = if n as f64 * phi > 2.0 * std::f64::consts::PI {
        Some(boundary.clone())
    } else {
        None
    };
    let seg_steps = (steps / n).max(8);
    for k in 1..=n {
        let a = Complex64::from_polar(1.0, (k - 1) as f64 * phi);
        let b = Complex64::from_polar(1.0, k as f64 * phi);
        for j in 0..=seg_steps {
            let t = j as f64 / seg_steps as f64;
            boundary.push(a + (b - a) * t);
        }
    }
    Ok(PlanarSet {
        boundary,
        hole,
        interior: None,
        closed: false,
        kind: SetKind::Region,
        resolution: res,
    })
}

/// Exact border of the product numerical range of the diagonal family V:
/// the segments [e^{i phi}, 1] and [1, e^{i psi}] joined by the curve
/// gamma(t) = t^2 e^{i phi} + (1-t)^2 e^{i psi} + 2 t (1-t).
pub fn v_exact_pnr_border(phi: f64, psi: f64, resolution: usize) -> Result<PlanarSet> {
    for (name, v) in [("phi", phi), ("psi", psi)] {
        if !(0.0..=2.0 * std::f64::consts::PI + 1e-12).contains(&v) {
            return Err(RangeError::InvalidParameter(format!(
                "{name} = {v} outside [0, 2 pi]"
            )));
        }
    }
    if phi == 0.0 && psi == 0.0 {
        return Ok(PlanarSet::point(C_ONE));
    }
    let res = resolution.max(8);
    let ephi = Complex64::from_polar(1.0, phi);
    let epsi = Complex64::from_polar(1.0, psi);
    let mut boundary = Vec::with_capacity(3 * (res + 1));
    // e^{i phi} -> 1
    for j in 0..=res {
        let t = j as f64 / res as f64;
        boundary.push(ephi + (C_ONE - ephi) * t);
    }
    // 1 -> e^{i psi}
    for j in 1..=res {
        let t = j as f64 / res as f64;
        boundary.push(C_ONE + (epsi - C_ONE) * t);
    }
    // gamma: t = 0 gives e^{i psi}, t = 1 gives e^{i phi}
    for j in 1..res {
        let t = j as f64 / res as f64;
        let g = ephi * (t * t) + epsi * ((1.0 - t) * (1.0 - t)) + c(2.0 * t * (1.0 - t));
        boundary.push(g);
    }
    Ok(PlanarSet {
        boundary,
        hole: None,
        interior: None,
        closed: true,
        kind: SetKind::Region,
        resolution: res,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xts_entries_at_zero() {
        let x = x_ts(0.0, 0.0).unwrap();
        let want = [2.0, 1.0, -1.0, -2.0];
        for (i, w) in want.iter().enumerate() {
            assert_eq!(x.matrix()[(i, i)].re, *w);
        }
        assert_eq!(x.matrix().frobenius_norm(), (4.0f64 + 1.0 + 1.0 + 4.0).sqrt());
    }

    #[test]
    fn xts_exact_formula_branches() {
        let i0 = xts_exact_pnr(0.0, 0.0);
        assert_eq!((i0.lo, i0.hi), (-2.0, 2.0));
        // continuity at sqrt(3): both branches give 2
        let s3 = 3f64.sqrt();
        let below = xts_exact_pnr(s3 - 1e-9, 0.0);
        let above = xts_exact_pnr(s3 + 1e-9, 0.0);
        assert!((below.hi - 2.0).abs() < 1e-8);
        assert!((above.hi - 2.0).abs() < 1e-8);
        // t + s = 3 -> sqrt(180)/6 = sqrt(5)
        let i3 = xts_exact_pnr(1.0, 2.0);
        assert!((i3.hi - 5f64.sqrt()).abs() < 1e-12);
        // t + s = 2 -> sqrt(65)/4
        let i2 = xts_exact_pnr(2.0, 0.0);
        assert!((i2.hi - 65f64.sqrt() / 4.0).abs() < 1e-12);
    }

    #[test]
    fn yts_bound_examples() {
        let b = yts_inner_bound(2.0, 1.0, -1.0, -2.0, 0.0, 0.0);
        assert_eq!((b.lo, b.hi), (-2.0, 2.0));
        let m = yts_inner_bound(0.7, 0.7, 0.7, 0.7, 0.0, 0.0);
        assert!((m.lo - 0.7).abs() < 1e-15 && (m.hi - 0.7).abs() < 1e-15);
        let z = yts_inner_bound(0.0, 0.0, 0.0, 0.0, 4.0, 0.0);
        assert_eq!((z.lo, z.hi), (-2.0, 2.0));
    }

    #[test]
    fn d_family_examples() {
        let i = d_exact_pnr(C_ZERO, C_ZERO, 0.0);
        assert_eq!((i.lo, i.hi), (0.5, 0.5));
        // a = 1/2, b = 0, c = 0: expectation 1/2 + |x0|^2 Re(conj(y0) y1)
        // sweeps exactly [0, 1]
        let i2 = d_exact_pnr(c(0.5), C_ZERO, 0.0);
        assert!(i2.lo.abs() < 1e-15);
        assert!((i2.hi - 1.0).abs() < 1e-15);
        // cross-check the closed form against a dense product-state grid
        for (a, b, x) in [
            (Complex64::new(0.3, 0.1), Complex64::new(0.2, -0.4), 0.7),
            (Complex64::new(-0.2, 0.25), Complex64::new(0.1, 0.1), -1.3),
            (c(0.5), C_ZERO, 0.0),
        ] {
            let d = d_family(a, b, x);
            let (glo, ghi) = crate::oracle::grid_pnr_2x2(d.matrix(), 28);
            let exact = d_exact_pnr(a, b, x);
            assert!((glo - exact.lo).abs() < 2e-3, "grid {glo} vs {}", exact.lo);
            assert!((ghi - exact.hi).abs() < 2e-3, "grid {ghi} vs {}", exact.hi);
        }
    }

    #[test]
    fn ud_identity_and_generator() {
        let u = canonical_ud([0.0, 0.0, 0.0]).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { C_ONE } else { C_ZERO };
                assert!((u[(i, j)] - want).norm() < 1e-14);
            }
        }
        // exp(i a sx (x) sx) = cos(a) I + i sin(a) sx (x) sx
        let a = 0.3;
        let u = canonical_ud([a, 0.0, 0.0]).unwrap();
        let sxsx = kron(&pauli(1), &pauli(1));
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j {
                    Complex64::new(a.cos(), 0.0)
                } else {
                    Complex64::new(0.0, a.sin()) * sxsx[(i, j)]
                };
                assert!((u[(i, j)] - want).norm() < 1e-12);
            }
        }
        assert!(u.is_unitary(1e-12));
        assert!(canonical_ud([1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn v_family_identity() {
        let v = v_family(0.0, 0.0).unwrap();
        for i in 0..4 {
            assert!((v[(i, i)] - C_ONE).norm() < 1e-15);
        }
    }

    #[test]
    fn u_tensor_boundary_shapes() {
        let seg = u_tensor_boundary(1.0, 1, 720).unwrap();
        // n = 1: every point lies on the chord [1, e^{i phi}]
        let a = C_ONE;
        let b = Complex64::from_polar(1.0, 1.0);
        for z in seg.points() {
            assert!(crate::geometry::point_segment_distance(z, a, b) < 1e-9);
        }
        let phi = 3.0 * std::f64::consts::PI / 5.0;
        for n in 1..=8usize {
            let set = u_tensor_boundary(phi, n, 720).unwrap();
            let want = (phi / 2.0).cos().powi(n as i32);
            assert!(
                (set.min_modulus() - want).abs() < 1e-9,
                "n = {n}: min modulus {} vs {want}",
                set.min_modulus()
            );
        }
        assert_eq!(u_tensor_boundary(0.0, 3, 64).unwrap().kind, SetKind::Point);
    }

    #[test]
    fn v_border_endpoints() {
        let phi = 2.0 * std::f64::consts::PI / 3.0;
        let psi = 10.0 * std::f64::consts::PI / 7.0;
        let border = v_exact_pnr_border(phi, psi, 256).unwrap();
        // gamma(0) = e^{i psi} and gamma(1) = e^{i phi} are on the border
        let ephi = Complex64::from_polar(1.0, phi);
        let epsi = Complex64::from_polar(1.0, psi);
        let close = |target: Complex64| {
            border
                .boundary
                .iter()
                .any(|z| (z - target).norm() < 1e-12)
        };
        assert!(close(ephi));
        assert!(close(epsi));
        assert!(close(C_ONE));
    }

    #[test]
    fn rho_alpha_has_requested_spectrum() {
        let rho = rho_alpha(std::f64::consts::FRAC_PI_8, [0.0, 1.0 / 6.0, 1.0 / 3.0]).unwrap();
        let e = crate::eig::eigh(rho.hermitian());
        let want = [0.0, 1.0 / 6.0, 1.0 / 3.0, 0.5];
        for (got, want) in e.values.iter().zip(want) {
            assert!((got - want).abs() < 1e-12);
        }
    }
}
