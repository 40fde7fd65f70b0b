//! Minimum output entropy through the product range of the dynamical matrix.

use crate::apps::{Certificate, Verdict, VerdictStatus, Witness};
use crate::channel::{choi, QuantumChannel};
use crate::error::{RangeError, Result};
use crate::seesaw::{pnr_hermitian, product_expectation, SeesawConfig};
use crate::tolerance::Tolerances;

/// Binary entropy in bits, with 0 log 0 = 0.
pub fn binary_entropy_bits(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}

/// Minimum output entropy of a qubit channel, in bits.
///
/// The smallest output eigenvalue over pure inputs equals the bottom edge of
/// the product numerical range of the unnormalized dynamical matrix, so the
/// MOE is the binary entropy of that edge.
pub fn moe_qubit(ch: &QuantumChannel, cfg: &SeesawConfig) -> Result<f64> {
    if ch.dim_in() != 2 || ch.dim_out() != 2 {
        return Err(RangeError::DimensionMismatch(
            "minimum output entropy formula applies to qubit channels".into(),
        ));
    }
    let d = choi(ch)?;
    let unnorm = d.unnormalized();
    let pnr = pnr_hermitian(&unnorm, cfg)?;
    let lambda = pnr.lo.clamp(0.0, 1.0);
    Ok(binary_entropy_bits(lambda))
}

/// Zero-MOE certificate: the MOE of a CP-TP map vanishes iff some product
/// expectation of the unnormalized dynamical matrix reaches one.
pub fn moe_is_zero(ch: &QuantumChannel, cfg: &SeesawConfig) -> Result<Verdict> {
    let d = choi(ch)?;
    let unnorm = d.unnormalized();
    let pnr = pnr_hermitian(&unnorm, cfg)?;
    let tol = Tolerances::DEFAULT;
    if pnr.hi >= 1.0 - tol.violation {
        let value = product_expectation(unnorm.matrix(), &pnr.witness_hi)?.re;
        debug_assert!((value - pnr.hi).abs() <= 1e-10 + 1e-10 * pnr.hi.abs());
        return Ok(Verdict {
            status: VerdictStatus::Certified,
            certificate: Some(Certificate {
                value,
                witness: Witness::Product(pnr.witness_hi),
            }),
            restarts: pnr.stats.total,
        });
    }
    Ok(Verdict::no_violation(pnr.stats.total))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(seed: u64) -> SeesawConfig {
        SeesawConfig {
            restarts: 10,
            ..SeesawConfig::with_seed(seed)
        }
    }

    fn wh_closed_form(p: f64) -> f64 {
        binary_entropy_bits(0.5 * (1.0 - p.abs()))
    }

    #[test]
    fn damping_channels_have_zero_moe() {
        for ch in [
            QuantumChannel::amplitude_damping(0.35).unwrap(),
            QuantumChannel::phase_damping(0.6).unwrap(),
            QuantumChannel::bit_flip(0.25).unwrap(),
        ] {
            let moe = moe_qubit(&ch, &cfg(1)).unwrap();
            assert!(moe.abs() < 1e-9, "moe = {moe}");
            let v = moe_is_zero(&ch, &cfg(1)).unwrap();
            assert_eq!(v.status, VerdictStatus::Certified);
        }
    }

    #[test]
    fn werner_holevo_matches_closed_form() {
        for p in [-1.0, -0.5, 0.0, 0.2, 1.0 / 3.0] {
            let ch = QuantumChannel::werner_holevo(p).unwrap();
            let moe = moe_qubit(&ch, &cfg(2)).unwrap();
            let want = wh_closed_form(p);
            assert!((moe - want).abs() < 1e-8, "p = {p}: {moe} vs {want}");
        }
        // p = 0 is the completely depolarizing channel: exactly one bit
        assert!((wh_closed_form(0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn depolarizing_has_no_zero_certificate() {
        let ch = QuantumChannel::depolarizing_qubit();
        let v = moe_is_zero(&ch, &cfg(3)).unwrap();
        assert_eq!(v.status, VerdictStatus::NoViolationFound);
        let moe = moe_qubit(&ch, &cfg(3)).unwrap();
        assert!((moe - 1.0).abs() < 1e-9);
    }

    #[test]
    fn identity_channel_certified_zero() {
        let ch = QuantumChannel::identity(2);
        let v = moe_is_zero(&ch, &cfg(4)).unwrap();
        assert_eq!(v.status, VerdictStatus::Certified);
        let cert = v.certificate.unwrap();
        assert!((cert.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn unitary_channel_moe_zero() {
        let u = crate::random::sample_haar_unitary(2, 9);
        let ch = QuantumChannel::new(vec![u]).unwrap();
        let moe = moe_qubit(&ch, &cfg(5)).unwrap();
        assert!(moe.abs() < 1e-9);
    }
}
