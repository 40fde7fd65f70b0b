//! Positivity hierarchy of maps and distillability probes.

use crate::apps::{Certificate, Verdict, VerdictStatus, Witness};
use crate::channel::ChoiMatrix;
use crate::eig::eigh;
use crate::error::{RangeError, Result};
use crate::matrix::{kron_power, partial_transpose, permute_factors, DensityMatrix, HermitianMatrix, Side};
use crate::seesaw::{k_entangled_range, SeesawConfig};
use crate::space::TensorSpace;
use crate::state::{schmidt, PureState};
use crate::tolerance::Tolerances;

/// k-positivity of the map behind a Choi matrix.
///
/// A negative value of the k-entangled range of D is a violation certificate.
/// `Certified` is issued in exactly two sound situations: the full spectrum
/// of D is nonnegative (positive at every k), or k equals the Schmidt cap so
/// the k-entangled range is the full spectral interval.
pub fn is_k_positive(d: &ChoiMatrix, k: usize, cfg: &SeesawConfig) -> Result<Verdict> {
    let cap = d.dim_in().min(d.dim_out());
    if k == 0 || k > cap {
        return Err(RangeError::InvalidParameter(format!(
            "k = {k} outside 1..={cap}"
        )));
    }
    let tol = Tolerances::DEFAULT;
    let h = d.matrix();
    let full = eigh(h);
    let scale = h.matrix().frobenius_norm().max(1e-300);
    if full.values[0] >= -tol.psd * scale {
        return Ok(Verdict::certified(0));
    }
    if k == cap {
        // full numerical range: decided exactly by the minimum eigenvalue
        let lam = full.values[0];
        if lam < -tol.violation {
            let state = PureState::new_unchecked(full.vector(0));
            let witness = schmidt(&state, &d.space())?;
            return Ok(Verdict {
                status: VerdictStatus::Violated,
                certificate: Some(Certificate {
                    value: lam,
                    witness: Witness::Schmidt(witness),
                }),
                restarts: 0,
            });
        }
        return Ok(Verdict::certified(0));
    }
    let kr = k_entangled_range(h, k, cfg)?;
    if kr.lo < -tol.violation {
        // re-check the witness reproduces the violation
        let state = kr.witness_lo.assemble();
        let value = h.real_expectation(state.amplitudes());
        debug_assert!((value - kr.lo).abs() <= 1e-9 * scale.max(1.0));
        return Ok(Verdict {
            status: VerdictStatus::Violated,
            certificate: Some(Certificate {
                value,
                witness: Witness::Schmidt(kr.witness_lo),
            }),
            restarts: kr.stats.total,
        });
    }
    Ok(Verdict::no_violation(kr.stats.total))
}

/// Spectral profile of an entanglement-witness candidate.
#[derive(Debug, Clone)]
pub struct WitnessProfile {
    pub eigenvalues: Vec<f64>,
    pub negative_count: usize,
    /// (K-1)(M-1): the most negative eigenvalues a block-positive operator
    /// on a K x M space can have.
    pub max_negative_allowed: usize,
    pub within_bound: bool,
}

pub fn witness_profile(w: &HermitianMatrix) -> Result<WitnessProfile> {
    let space = w.space().cloned().ok_or_else(|| {
        RangeError::DimensionMismatch("witness profile needs a declared bipartite space".into())
    })?;
    if !space.is_bipartite() {
        return Err(RangeError::DimensionMismatch(
            "witness profile needs a bipartite space".into(),
        ));
    }
    let (k, m) = (space.dims()[0], space.dims()[1]);
    let e = eigh(w);
    let scale = e
        .values
        .iter()
        .map(|v| v.abs())
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let negative_count = e
        .values
        .iter()
        .filter(|&&v| v < -Tolerances::DEFAULT.psd * scale)
        .count();
    let max_negative_allowed = (k - 1) * (m - 1);
    Ok(WitnessProfile {
        eigenvalues: e.values,
        negative_count,
        max_negative_allowed,
        within_bound: negative_count <= max_negative_allowed,
    })
}

/// n-copy distillability probe.
///
/// Computes the lower edge of the 2-entangled range of (1 x T) rho^{x n}
/// under the regrouped splitting H_K^{x n} x H_M^{x n}. A negative value is a
/// distillability certificate; a PPT state is certified nonnegative at every
/// n; otherwise the outcome is `NoViolationFound` (undistillability is never
/// certified).
pub fn n_copy_distillable_probe(
    rho: &DensityMatrix,
    n: usize,
    cfg: &SeesawConfig,
) -> Result<Verdict> {
    if n == 0 {
        return Err(RangeError::InvalidParameter("n must be at least 1".into()));
    }
    let space = rho.matrix().space().cloned().ok_or_else(|| {
        RangeError::DimensionMismatch("distillability probe needs a bipartite space".into())
    })?;
    if !space.is_bipartite() {
        return Err(RangeError::DimensionMismatch(
            "distillability probe needs a bipartite space".into(),
        ));
    }
    let (k, m) = (space.dims()[0], space.dims()[1]);
    let total = (k * m).pow(n as u32);
    if total > 64 {
        return Err(RangeError::GuardExceeded(format!(
            "(K*M)^n = {total} exceeds the guard of 64"
        )));
    }
    let tol = Tolerances::DEFAULT;

    // single-copy PPT check decides every n
    let pt1 = partial_transpose(rho.matrix(), &space, Side::Second)?;
    let h1 = HermitianMatrix::new_with(
        pt1,
        &Tolerances {
            hermiticity: 1e-10,
            ..tol
        },
    )?;
    let e1 = eigh(&h1);
    if e1.values[0] >= -tol.psd {
        return Ok(Verdict::certified(0));
    }

    // regroup rho^{x n} to (K^n) x (M^n)
    let power = kron_power(rho.matrix(), n);
    let mut perm = Vec::with_capacity(2 * n);
    for copy in 0..n {
        perm.push(2 * copy); // K factors first
    }
    for copy in 0..n {
        perm.push(2 * copy + 1);
    }
    let regrouped = permute_factors(&power, &perm)?;
    let big_space = TensorSpace::bipartite(k.pow(n as u32), m.pow(n as u32));
    let regrouped = regrouped.with_space(big_space.clone())?;
    let pt = partial_transpose(&regrouped, &big_space, Side::Second)?;
    let h = HermitianMatrix::new_with(
        pt,
        &Tolerances {
            hermiticity: 1e-10,
            ..tol
        },
    )?
    .with_space(big_space)?;

    let kr = k_entangled_range(&h, 2, cfg)?;
    if kr.lo < -tol.violation {
        let state = kr.witness_lo.assemble();
        let value = h.real_expectation(state.amplitudes());
        return Ok(Verdict {
            status: VerdictStatus::Violated,
            certificate: Some(Certificate {
                value,
                witness: Witness::Schmidt(kr.witness_lo),
            }),
            restarts: kr.stats.total,
        });
    }
    Ok(Verdict::no_violation(kr.stats.total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{choi, ChoiMatrix, QuantumChannel};
    use crate::matrix::{ComplexMatrix, C_ONE, C_ZERO};
    use crate::random;
    use num_complex::Complex64;

    fn cfg(seed: u64) -> SeesawConfig {
        SeesawConfig {
            restarts: 12,
            ..SeesawConfig::with_seed(seed)
        }
    }

    fn transposition_choi() -> ChoiMatrix {
        // (T x 1)|Psi+><Psi+| = SWAP / 2
        let mut swap = ComplexMatrix::zeros(4);
        swap[(0, 0)] = C_ONE;
        swap[(1, 2)] = C_ONE;
        swap[(2, 1)] = C_ONE;
        swap[(3, 3)] = C_ONE;
        let h = HermitianMatrix::new(swap.scale(Complex64::new(0.5, 0.0))).unwrap();
        ChoiMatrix::new(h, 2, 2).unwrap()
    }

    #[test]
    fn psd_choi_certified_everywhere() {
        let d = choi(&QuantumChannel::amplitude_damping(0.4).unwrap()).unwrap();
        for k in 1..=2 {
            let v = is_k_positive(&d, k, &cfg(1)).unwrap();
            assert_eq!(v.status, VerdictStatus::Certified);
        }
    }

    #[test]
    fn transposition_map_hierarchy() {
        let d = transposition_choi();
        let v1 = is_k_positive(&d, 1, &SeesawConfig::with_seed(3)).unwrap();
        assert_eq!(v1.status, VerdictStatus::NoViolationFound);
        let v2 = is_k_positive(&d, 2, &SeesawConfig::with_seed(3)).unwrap();
        assert_eq!(v2.status, VerdictStatus::Violated);
        let cert = v2.certificate.unwrap();
        assert!(cert.value < -0.4, "value {}", cert.value);
    }

    #[test]
    fn d_family_block_positivity_threshold() {
        // G > 1/2 makes the map non-positive: violation at k = 1
        let a = Complex64::new(0.9, 0.2);
        let b = Complex64::new(0.4, -0.3);
        let x = 0.8;
        let g = crate::families::d_family_g(a, b, x);
        assert!(g > 0.5);
        let h = crate::families::d_family(a, b, x);
        let d = ChoiMatrix::from_unnormalized(h.scale_real(1.0), 2, 2);
        // trace of D is 2, matching the unnormalized convention
        let d = d.unwrap();
        let v = is_k_positive(&d, 1, &cfg(4)).unwrap();
        assert_eq!(v.status, VerdictStatus::Violated);

        // G <= 1/2 keeps the product range nonnegative
        let a2 = Complex64::new(0.3, 0.0);
        let h2 = crate::families::d_family(a2, C_ZERO, 0.5);
        let g2 = crate::families::d_family_g(a2, C_ZERO, 0.5);
        assert!(g2 <= 0.5);
        let d2 = ChoiMatrix::from_unnormalized(h2, 2, 2).unwrap();
        let v2 = is_k_positive(&d2, 1, &cfg(5)).unwrap();
        assert_ne!(v2.status, VerdictStatus::Violated);
    }

    #[test]
    fn witness_profile_counts() {
        // PSD operator: no negatives
        let mut rng = random::substream(60, 0);
        let g = random::ginibre(4, 4, &mut rng);
        let psd = g.matmul(&g.adjoint()).unwrap();
        let h = HermitianMatrix::new_with(
            psd,
            &Tolerances {
                hermiticity: 1e-10,
                ..Tolerances::DEFAULT
            },
        )
        .unwrap()
        .with_space(TensorSpace::bipartite(2, 2))
        .unwrap();
        let p = witness_profile(&h).unwrap();
        assert_eq!(p.negative_count, 0);
        assert!(p.within_bound);

        // partial transpose of |Psi+><Psi+| on 3x3: 3 negatives <= 4
        let sp = TensorSpace::bipartite(3, 3);
        let w = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
        let mut amps = vec![C_ZERO; 9];
        for i in 0..3 {
            amps[i * 3 + i] = w;
        }
        let psi = PureState::new(amps).unwrap();
        let pt = partial_transpose(psi.projector().matrix(), &sp, Side::Second).unwrap();
        let h = HermitianMatrix::new(pt).unwrap().with_space(sp).unwrap();
        let p = witness_profile(&h).unwrap();
        assert_eq!(p.negative_count, 3);
        assert_eq!(p.max_negative_allowed, 4);
        assert!(p.within_bound);
    }

    #[test]
    fn distill_probe_cases() {
        let sp = TensorSpace::bipartite(2, 2);
        // separable (maximally mixed) state: PPT, certified at n = 1
        let mixed = HermitianMatrix::diagonal(&[0.25; 4])
            .with_space(sp.clone())
            .unwrap();
        let rho = DensityMatrix::new(mixed).unwrap();
        let v = n_copy_distillable_probe(&rho, 1, &cfg(6)).unwrap();
        assert_eq!(v.status, VerdictStatus::Certified);

        // maximally entangled state: violated at n = 1
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let psi = PureState::new(vec![
            Complex64::new(r, 0.0),
            C_ZERO,
            C_ZERO,
            Complex64::new(r, 0.0),
        ])
        .unwrap();
        let proj = psi.projector().with_space(sp).unwrap();
        let rho = DensityMatrix::new(proj).unwrap();
        let v = n_copy_distillable_probe(&rho, 1, &cfg(7)).unwrap();
        assert_eq!(v.status, VerdictStatus::Violated);
        let cert = v.certificate.unwrap();
        assert!((cert.value + 0.5).abs() < 1e-6, "value {}", cert.value);

        // guard
        let sp3 = TensorSpace::bipartite(3, 3);
        let mixed9 = HermitianMatrix::diagonal(&[1.0 / 9.0; 9])
            .with_space(sp3)
            .unwrap();
        let rho9 = DensityMatrix::new(mixed9).unwrap();
        assert!(matches!(
            n_copy_distillable_probe(&rho9, 3, &cfg(8)),
            Err(RangeError::GuardExceeded(_))
        ));
    }

    #[test]
    fn verdict_monotone_in_k_for_transposition_two_copies() {
        // the two-copy regrouped probe is also violated (2-copy distillable)
        let sp = TensorSpace::bipartite(2, 2);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let psi = PureState::new(vec![
            Complex64::new(r, 0.0),
            C_ZERO,
            C_ZERO,
            Complex64::new(r, 0.0),
        ])
        .unwrap();
        let proj = psi.projector().with_space(sp).unwrap();
        let rho = DensityMatrix::new(proj).unwrap();
        let v = n_copy_distillable_probe(&rho, 2, &cfg(9)).unwrap();
        assert_eq!(v.status, VerdictStatus::Violated);
    }
}
