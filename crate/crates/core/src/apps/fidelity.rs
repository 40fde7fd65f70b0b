//! Local-fidelity bounds and the geometric measure of entanglement.

use crate::apps::lp::{solve, BoundedLp};
use crate::error::{RangeError, Result};
use crate::seesaw::{pnr_hermitian, SeesawConfig};
use crate::space::TensorSpace;
use crate::state::PureState;
use crate::tolerance::Tolerances;

fn check_probability_vector(name: &str, v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(RangeError::InvalidParameter(format!("{name} is empty")));
    }
    if v.iter().any(|&x| x < -1e-12) {
        return Err(RangeError::InvalidParameter(format!(
            "{name} has negative entries"
        )));
    }
    let sum: f64 = v.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(RangeError::InvalidParameter(format!(
            "{name} sums to {sum}, expected 1"
        )));
    }
    Ok(())
}

/// Upper bound on |<psi|U_A x U_B|phi>|^2 over local unitaries:
/// (sum_j sqrt(lambda_j mu_j))^2 with both Schmidt vectors sorted descending.
pub fn pure_fidelity_bound(mu: &[f64], lambda: &[f64]) -> Result<f64> {
    check_probability_vector("mu", mu)?;
    check_probability_vector("lambda", lambda)?;
    let mut m = mu.to_vec();
    let mut l = lambda.to_vec();
    m.sort_by(|a, b| b.partial_cmp(a).unwrap());
    l.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let n = m.len().max(l.len());
    m.resize(n, 0.0);
    l.resize(n, 0.0);
    let s: f64 = m
        .iter()
        .zip(&l)
        .map(|(a, b)| (a.max(0.0) * b.max(0.0)).sqrt())
        .sum();
    Ok((s * s).clamp(0.0, 1.0))
}

/// Geometric measure of entanglement in bits: minus the base-2 logarithm of
/// the largest product overlap, i.e. of the product numerical radius of the
/// state's projector.
pub fn geometric_entanglement(
    psi: &PureState,
    space: &TensorSpace,
    cfg: &SeesawConfig,
) -> Result<f64> {
    if space.total() != psi.dim() {
        return Err(RangeError::DimensionMismatch(format!(
            "space total {} does not match state dimension {}",
            space.total(),
            psi.dim()
        )));
    }
    if space.factor_count() < 2 {
        return Err(RangeError::DimensionMismatch(
            "geometric entanglement needs a multipartite space".into(),
        ));
    }
    let proj = psi.projector().with_space(space.clone())?;
    let pnr = pnr_hermitian(&proj, cfg)?;
    let overlap = pnr.hi.clamp(1e-300, 1.0);
    Ok(-overlap.log2())
}

/// The fidelity LP of the diagonal-state bound: decision variables B_ij >= 0
/// with row- and column-subset sums pinned between the ascending and
/// descending prefix sums of the Schmidt coefficients.
#[derive(Debug, Clone)]
pub struct FidelityLp {
    pub n: usize,
    pub weights: Vec<Vec<f64>>,
    pub lambda_ascending: Vec<f64>,
    pub lp: BoundedLp,
}

impl FidelityLp {
    /// Number of range rows: one per proper nonempty row/column subset, plus
    /// the shared total constraint.
    pub fn constraint_rows(n: usize) -> usize {
        2 * ((1usize << n) - 2) + 1
    }

    pub fn build(p: &[Vec<f64>], lambda: &[f64]) -> Result<Self> {
        let n = lambda.len();
        if n == 0 || p.len() != n || p.iter().any(|row| row.len() != n) {
            return Err(RangeError::DimensionMismatch(
                "weight matrix must be N x N matching the Schmidt vector".into(),
            ));
        }
        if n > 12 {
            return Err(RangeError::GuardExceeded(format!(
                "local dimension {n} exceeds the guard of 12"
            )));
        }
        let flat: Vec<f64> = p.iter().flatten().copied().collect();
        check_probability_vector("p", &flat)?;
        check_probability_vector("lambda", lambda)?;

        let mut lam = lambda.to_vec();
        lam.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut asc_prefix = vec![0.0f64; n + 1];
        let mut desc_prefix = vec![0.0f64; n + 1];
        for r in 0..n {
            asc_prefix[r + 1] = asc_prefix[r] + lam[r];
            desc_prefix[r + 1] = desc_prefix[r] + lam[n - 1 - r];
        }

        let nvars = n * n;
        let nrows = Self::constraint_rows(n);
        let nslack = nrows;
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(nrows);
        let mut rhs = Vec::with_capacity(nrows);
        let mut lower = vec![0.0f64; nvars + nslack];
        let mut upper = vec![1.0f64; nvars]; // B_ij <= total sum = 1
        upper.extend(std::iter::repeat(0.0).take(nslack));

        let full_mask = (1usize << n) - 1;
        let mut slack_idx = 0usize;
        let mut push_row = |coeffs: Vec<f64>, lo: f64, hi: f64, rows: &mut Vec<Vec<f64>>, rhs: &mut Vec<f64>, upper: &mut [f64]| {
            // coeffs . B + s = hi with s in [0, hi - lo]
            let mut row = coeffs;
            row.extend(std::iter::repeat(0.0).take(nslack));
            row[nvars + slack_idx] = 1.0;
            upper[nvars + slack_idx] = (hi - lo).max(0.0);
            rows.push(row);
            rhs.push(hi);
            slack_idx += 1;
        };

        // proper nonempty row subsets
        for mask in 1..full_mask {
            let size = (mask as u32).count_ones() as usize;
            let mut coeffs = vec![0.0f64; nvars];
            for i in 0..n {
                if mask & (1 << i) != 0 {
                    for j in 0..n {
                        coeffs[i * n + j] = 1.0;
                    }
                }
            }
            push_row(coeffs, asc_prefix[size], desc_prefix[size], &mut rows, &mut rhs, &mut upper);
        }
        // proper nonempty column subsets
        for mask in 1..full_mask {
            let size = (mask as u32).count_ones() as usize;
            let mut coeffs = vec![0.0f64; nvars];
            for j in 0..n {
                if mask & (1 << j) != 0 {
                    for i in 0..n {
                        coeffs[i * n + j] = 1.0;
                    }
                }
            }
            push_row(coeffs, asc_prefix[size], desc_prefix[size], &mut rows, &mut rhs, &mut upper);
        }
        // shared total constraint: sum B = 1 exactly
        push_row(vec![1.0; nvars], 1.0, 1.0, &mut rows, &mut rhs, &mut upper);

        let mut objective: Vec<f64> = flat;
        objective.extend(std::iter::repeat(0.0).take(nslack));

        Ok(Self {
            n,
            weights: p.to_vec(),
            lambda_ascending: lam,
            lp: BoundedLp {
                rows,
                rhs,
                lower: {
                    lower.truncate(nvars + nslack);
                    lower
                },
                upper,
                objective,
            },
        })
    }

    pub fn solve(&self) -> Result<f64> {
        let sol = solve(&self.lp)?;
        let tol = Tolerances::DEFAULT.lp_residual;
        if sol.feasibility_residual > tol || sol.optimality_residual > 10.0 * tol {
            return Err(RangeError::SolverFailure(format!(
                "simplex certificates too loose: feasibility {:.3e}, optimality {:.3e}",
                sol.feasibility_residual, sol.optimality_residual
            )));
        }
        Ok(sol.objective)
    }
}

/// Upper bound on the local fidelity between a pure state with Schmidt vector
/// `lambda` and the diagonal mixed state with weights `p`.
pub fn diagonal_fidelity_lp(p: &[Vec<f64>], lambda: &[f64]) -> Result<f64> {
    FidelityLp::build(p, lambda)?.solve()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use crate::state::schmidt;

    #[test]
    fn fidelity_bound_examples() {
        // equal vectors -> 1
        let mu = [0.4, 0.6];
        assert!((pure_fidelity_bound(&mu, &mu).unwrap() - 1.0).abs() < 1e-12);
        // product target -> largest coefficient
        let bound = pure_fidelity_bound(&[0.7, 0.3], &[1.0, 0.0]).unwrap();
        assert!((bound - 0.7).abs() < 1e-12);
        // worked example
        let bound = pure_fidelity_bound(&[0.7, 0.3], &[0.6, 0.4]).unwrap();
        let want = (0.42f64.sqrt() + 0.12f64.sqrt()).powi(2);
        assert!((bound - want).abs() < 1e-12);
        assert!(pure_fidelity_bound(&[0.5, 0.2], &[1.0, 0.0]).is_err());
    }

    #[test]
    fn fidelity_bound_dominates_random_unitaries() {
        let sp = TensorSpace::bipartite(2, 2);
        let mut rng = random::substream(81, 0);
        let psi = random::haar_state(4, &mut rng);
        let phi = random::haar_state(4, &mut rng);
        let mu = schmidt(&psi, &sp).unwrap().probabilities();
        let lam = schmidt(&phi, &sp).unwrap().probabilities();
        let mut mu2 = mu.clone();
        mu2.resize(2, 0.0);
        let mut lam2 = lam.clone();
        lam2.resize(2, 0.0);
        let bound = pure_fidelity_bound(&mu2, &lam2).unwrap();
        for _ in 0..300 {
            let u = random::haar_unitary(2, &mut rng);
            let v = random::haar_unitary(2, &mut rng);
            let uv = crate::matrix::kron(&u, &v);
            let rotated = uv.apply(phi.amplitudes());
            let overlap: num_complex::Complex64 = psi
                .amplitudes()
                .iter()
                .zip(&rotated)
                .map(|(a, b)| a.conj() * b)
                .sum();
            assert!(overlap.norm_sqr() <= bound + 1e-9);
        }
    }

    #[test]
    fn geometric_entanglement_examples() {
        let cfg = SeesawConfig {
            restarts: 10,
            ..SeesawConfig::with_seed(5)
        };
        // product state -> 0
        let sp = TensorSpace::bipartite(2, 2);
        let prod = crate::state::ProductState::basis(&sp, &[1, 0]).flatten();
        let e = geometric_entanglement(&prod, &sp, &cfg).unwrap();
        assert!(e.abs() < 1e-9);

        // two-qubit state: -log2 of the largest Schmidt coefficient
        let mut rng = random::substream(82, 0);
        let psi = random::haar_state(4, &mut rng);
        let probs = schmidt(&psi, &sp).unwrap().probabilities();
        let want = -probs[0].log2();
        let e = geometric_entanglement(&psi, &sp, &cfg).unwrap();
        assert!((e - want).abs() < 1e-7, "{e} vs {want}");
    }

    #[test]
    fn lp_uniform_weights_give_inverse_square() {
        for n in [2usize, 3, 4] {
            let p = vec![vec![1.0 / (n * n) as f64; n]; n];
            let mut lambda = vec![1.0 / n as f64; n];
            lambda[0] += 0.0;
            let bound = diagonal_fidelity_lp(&p, &lambda).unwrap();
            assert!(
                (bound - 1.0 / (n * n) as f64).abs() < 1e-10,
                "n = {n}: {bound}"
            );
        }
    }

    #[test]
    fn lp_singleton_weight_gives_lambda_max() {
        let lambda = vec![0.3, 0.7];
        let mut p = vec![vec![0.0; 2]; 2];
        p[0][0] = 1.0;
        let bound = diagonal_fidelity_lp(&p, &lambda).unwrap();
        assert!((bound - 0.7).abs() < 1e-10, "{bound}");
    }

    #[test]
    fn lp_constraint_count() {
        assert_eq!(FidelityLp::constraint_rows(2), 5);
        assert_eq!(FidelityLp::constraint_rows(4), 29);
        let p = vec![vec![0.25; 2]; 2];
        let built = FidelityLp::build(&p, &[0.5, 0.5]).unwrap();
        assert_eq!(built.lp.rows.len(), 5);
        assert!(FidelityLp::build(&vec![vec![1.0 / 169.0; 13]; 13], &[1.0 / 13.0; 13]).is_err());
    }

    #[test]
    fn lp_dominates_monte_carlo_fidelities() {
        let mut rng = random::substream(83, 0);
        for rep in 0..6 {
            let n = 2 + rep % 3;
            // random weights and Schmidt vector
            let mut p = vec![vec![0.0f64; n]; n];
            let mut total = 0.0;
            for row in p.iter_mut() {
                for v in row.iter_mut() {
                    *v = rand::Rng::gen_range(&mut rng, 0.0..1.0);
                    total += *v;
                }
            }
            for row in p.iter_mut() {
                for v in row.iter_mut() {
                    *v /= total;
                }
            }
            let psi = random::haar_state(n * n, &mut rng);
            let sp = TensorSpace::bipartite(n, n);
            let mut lam = schmidt(&psi, &sp).unwrap().probabilities();
            lam.resize(n, 0.0);
            let bound = diagonal_fidelity_lp(&p, &lam).unwrap();

            let rho_diag: Vec<f64> = p.iter().flatten().copied().collect();
            let sampled = crate::oracle::sampled_local_fidelity_max(
                &rho_diag, &psi, n, 400, &mut rng,
            );
            assert!(
                bound >= sampled - 1e-9,
                "n = {n}: LP {bound} below sampled {sampled}"
            );
        }
    }
}
