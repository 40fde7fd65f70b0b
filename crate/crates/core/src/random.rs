//! Seeded random generators for states, unitaries and density matrices.
//!
//! Randomness never comes from ambient global state: every sampler takes an
//! explicit RNG, and `substream` derives independent streams from a
//! (seed, stream) pair so parallel fans of restarts are thread-count
//! invariant.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::matrix::{ComplexMatrix, DensityMatrix, HermitianMatrix};
use crate::space::TensorSpace;
use crate::state::{ProductState, PureState};

/// An independent generator for stream `stream` of the given seed.
pub fn substream(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn standard_complex(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Matrix with independent standard complex Gaussian entries.
pub fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    assert_eq!(rows, cols, "square Ginibre only");
    ComplexMatrix::from_fn(rows, |_, _| standard_complex(rng))
}

/// Random density matrix under the flat Hilbert-Schmidt measure.
///
/// Constructed as G G^dag / tr(G G^dag) with square Ginibre G, which induces
/// the HS measure on the simplex of spectra.
pub fn hs_density(n: usize, rng: &mut impl Rng) -> DensityMatrix {
    let g = ginibre(n, n, rng);
    let gg = g.matmul(&g.adjoint()).expect("square");
    let tr = gg.trace().re;
    let rho = gg.scale(Complex64::new(1.0 / tr, 0.0));
    let h = HermitianMatrix::new_with(
        rho,
        &crate::tolerance::Tolerances {
            hermiticity: 1e-10,
            ..Default::default()
        },
    )
    .expect("G G^dag is Hermitian");
    DensityMatrix::new(h).expect("construction is positive and normalized")
}

/// Convenience wrapper seeding its own stream.
pub fn sample_hs_density(n: usize, seed: u64) -> DensityMatrix {
    hs_density(n, &mut substream(seed, 0))
}

/// Haar-random pure state: normalized complex Gaussian vector.
pub fn haar_state(n: usize, rng: &mut impl Rng) -> PureState {
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| standard_complex(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            let amps = v.into_iter().map(|z| z / norm).collect();
            return PureState::new_unchecked(amps);
        }
    }
}

pub fn sample_haar_state(n: usize, seed: u64) -> PureState {
    haar_state(n, &mut substream(seed, 0))
}

/// Haar-random unitary: modified Gram-Schmidt of a Ginibre matrix.
///
/// The R factor produced by MGS has a positive real diagonal, which makes the
/// resulting Q exactly Haar distributed.
pub fn haar_unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    loop {
        let g = ginibre(n, n, rng);
        let mut cols: Vec<Vec<Complex64>> = (0..n)
            .map(|k| (0..n).map(|i| g[(i, k)]).collect())
            .collect();
        let mut ok = true;
        for k in 0..n {
            for prev in 0..k {
                let overlap: Complex64 = {
                    let (a, b) = (&cols[prev], &cols[k]);
                    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
                };
                let prev_col = cols[prev].clone();
                for (z, p) in cols[k].iter_mut().zip(&prev_col) {
                    *z -= overlap * p;
                }
            }
            let norm = cols[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            for z in cols[k].iter_mut() {
                *z /= norm;
            }
        }
        if ok {
            return ComplexMatrix::from_fn(n, |i, j| cols[j][i]);
        }
    }
}

pub fn sample_haar_unitary(n: usize, seed: u64) -> ComplexMatrix {
    haar_unitary(n, &mut substream(seed, 0))
}

/// Independent Haar states on every factor of the space.
pub fn haar_product_state(space: &TensorSpace, rng: &mut impl Rng) -> ProductState {
    let factors = space.dims().iter().map(|&d| haar_state(d, rng)).collect();
    ProductState::new_unchecked(factors)
}

/// Random pure state of Schmidt rank at most `k` on a bipartite space.
pub fn haar_schmidt_bounded_state(
    k: usize,
    space: &TensorSpace,
    rng: &mut impl Rng,
) -> Result<PureState> {
    let (dk, dm) = (space.dims()[0], space.dims()[1]);
    let kk = k.min(dk).min(dm);
    let mut amps = vec![Complex64::new(0.0, 0.0); dk * dm];
    for _ in 0..kk {
        let left = haar_state(dk, rng);
        let right = haar_state(dm, rng);
        let w = standard_complex(rng);
        for i in 0..dk {
            for j in 0..dm {
                amps[i * dm + j] += w * left.amplitudes()[i] * right.amplitudes()[j];
            }
        }
    }
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return haar_schmidt_bounded_state(k, space, rng);
    }
    for z in amps.iter_mut() {
        *z /= norm;
    }
    Ok(PureState::new_unchecked(amps))
}

/// Random trace-preserving channel with `kraus_count` Ginibre Kraus operators,
/// normalized through S^{-1/2} with S the summed Gram matrix.
pub fn random_channel(
    dim: usize,
    kraus_count: usize,
    rng: &mut impl Rng,
) -> Vec<ComplexMatrix> {
    let gs: Vec<ComplexMatrix> = (0..kraus_count).map(|_| ginibre(dim, dim, rng)).collect();
    let mut s = ComplexMatrix::zeros(dim);
    for g in &gs {
        s = s.add(&g.adjoint().matmul(g).unwrap()).unwrap();
    }
    let sh = HermitianMatrix::new_with(
        s,
        &crate::tolerance::Tolerances {
            hermiticity: 1e-10,
            ..Default::default()
        },
    )
    .expect("sum of Gram matrices is Hermitian");
    let corr = crate::eig::psd_inv_sqrt(&sh);
    gs.into_iter().map(|g| g.matmul(&corr).unwrap()).collect()
}
