//! Python bindings for the restricted numerical range toolkit.
//!
//! Matrices cross the boundary as (re, im) nested lists with an optional
//! dims list declaring the tensor factorization; results come back as plain
//! dicts and lists so no numpy dependency is needed.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use restricted_range::apps;
use restricted_range::channel::{choi as choi_of, ChoiMatrix, QuantumChannel};
use restricted_range::matrix::{ComplexMatrix, DensityMatrix, HermitianMatrix};
use restricted_range::range::{minkowski_power, numerical_radius, numerical_range, PlanarSet};
use restricted_range::seesaw::{
    k_entangled_range, pnr_hermitian, product_c_radius, product_numerical_radius, SeesawConfig,
};
use restricted_range::state::PureState;
use restricted_range::{families, RangeError, TensorSpace};

fn err(e: RangeError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn matrix_from_py(
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
    dims: Option<Vec<usize>>,
) -> PyResult<ComplexMatrix> {
    let n = re.len();
    if im.len() != n || re.iter().any(|r| r.len() != n) || im.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("re and im must be square and equal"));
    }
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = Complex64::new(re[i][j], im[i][j]);
        }
    }
    match dims {
        Some(d) => {
            let space = TensorSpace::new(d).map_err(err)?;
            m.with_space(space).map_err(err)
        }
        None => Ok(m),
    }
}

fn hermitian_from_py(
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
    dims: Option<Vec<usize>>,
) -> PyResult<HermitianMatrix> {
    HermitianMatrix::new(matrix_from_py(re, im, dims)?).map_err(err)
}

fn cfg(seed: u64, restarts: usize) -> SeesawConfig {
    SeesawConfig {
        restarts: restarts.max(1),
        seed,
        ..SeesawConfig::default()
    }
}

fn set_to_py(py: Python<'_>, set: &PlanarSet) -> PyResult<PyObject> {
    let out = PyDict::new_bound(py);
    let pts: Vec<(f64, f64)> = set.boundary.iter().map(|z| (z.re, z.im)).collect();
    out.set_item("boundary", pts)?;
    if let Some(hole) = &set.hole {
        let pts: Vec<(f64, f64)> = hole.iter().map(|z| (z.re, z.im)).collect();
        out.set_item("hole", pts)?;
    }
    if let Some(interior) = &set.interior {
        let pts: Vec<(f64, f64)> = interior.iter().map(|z| (z.re, z.im)).collect();
        out.set_item("interior", pts)?;
    }
    out.set_item("closed", set.closed)?;
    out.set_item("min_modulus", set.min_modulus())?;
    out.set_item("max_modulus", set.max_modulus())?;
    Ok(out.into())
}

fn product_state_to_py(py: Python<'_>, s: &restricted_range::ProductState) -> PyResult<PyObject> {
    let factors = PyList::empty_bound(py);
    for f in s.factors() {
        let amps: Vec<(f64, f64)> = f.amplitudes().iter().map(|z| (z.re, z.im)).collect();
        factors.append(amps)?;
    }
    Ok(factors.into())
}

/// Boundary of the numerical range of a complex matrix.
#[pyfunction]
#[pyo3(signature = (re, im, angles = 720))]
fn range_boundary(
    py: Python<'_>,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
    angles: usize,
) -> PyResult<PyObject> {
    let m = matrix_from_py(re, im, None)?;
    let set = numerical_range(&m, angles).map_err(err)?;
    set_to_py(py, &set)
}

/// Numerical radius of a complex matrix.
#[pyfunction]
fn radius(re: Vec<Vec<f64>>, im: Vec<Vec<f64>>) -> PyResult<f64> {
    let m = matrix_from_py(re, im, None)?;
    Ok(numerical_radius(&m))
}

/// Product numerical range of a Hermitian operator on a tensor-product
/// space: returns {"lo", "hi", "witness_lo", "witness_hi", "converged"}.
#[pyfunction]
#[pyo3(signature = (re, im, dims, seed = 0, restarts = 20))]
fn pnr(
    py: Python<'_>,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
    dims: Vec<usize>,
    seed: u64,
    restarts: usize,
) -> PyResult<PyObject> {
    let h = hermitian_from_py(re, im, Some(dims))?;
    let result = pnr_hermitian(&h, &cfg(seed, restarts)).map_err(err)?;
    let out = PyDict::new_bound(py);
    out.set_item("lo", result.lo)?;
    out.set_item("hi", result.hi)?;
    out.set_item("witness_lo", product_state_to_py(py, &result.witness_lo)?)?;
    out.set_item("witness_hi", product_state_to_py(py, &result.witness_hi)?)?;
    out.set_item("converged", result.stats.converged)?;
    Ok(out.into())
}

/// k-entangled numerical range of a Hermitian operator on a bipartite space.
#[pyfunction]
#[pyo3(signature = (re, im, dims, k, seed = 0, restarts = 20))]
fn k_range(
    py: Python<'_>,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
    dims: Vec<usize>,
    k: usize,
    seed: u64,
    restarts: usize,
) -> PyResult<PyObject> {
    let h = hermitian_from_py(re, im, Some(dims))?;
    let result = k_entangled_range(&h, k, &cfg(seed, restarts)).map_err(err)?;
    let out = PyDict::new_bound(py);
    out.set_item("k", result.k)?;
    out.set_item("lo", result.lo)?;
    out.set_item("hi", result.hi)?;
    Ok(out.into())
}

/// Product numerical radius (largest achieved |<X>| over product states).
#[pyfunction]
#[pyo3(signature = (re, im, dims, seed = 0, restarts = 20))]
fn product_radius(
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
    dims: Vec<usize>,
    seed: u64,
    restarts: usize,
) -> PyResult<f64> {
    let m = matrix_from_py(re, im, Some(dims))?;
    product_numerical_radius(&m, &cfg(seed, restarts)).map_err(err)
}

/// Product C-numerical radius over sampled local-unitary orbits.
#[pyfunction]
#[pyo3(signature = (x_re, x_im, c_re, c_im, dims, seed = 0, restarts = 20))]
#[allow(clippy::too_many_arguments)]
fn product_c_radius_py(
    x_re: Vec<Vec<f64>>,
    x_im: Vec<Vec<f64>>,
    c_re: Vec<Vec<f64>>,
    c_im: Vec<Vec<f64>>,
    dims: Vec<usize>,
    seed: u64,
    restarts: usize,
) -> PyResult<f64> {
    let x = matrix_from_py(x_re, x_im, Some(dims))?;
    let c = matrix_from_py(c_re, c_im, None)?;
    product_c_radius(&x, &c, &cfg(seed, restarts)).map_err(err)
}

/// Kronecker product of two complex matrices.
#[pyfunction]
fn kron(
    py: Python<'_>,
    a_re: Vec<Vec<f64>>,
    a_im: Vec<Vec<f64>>,
    b_re: Vec<Vec<f64>>,
    b_im: Vec<Vec<f64>>,
) -> PyResult<PyObject> {
    let a = matrix_from_py(a_re, a_im, None)?;
    let b = matrix_from_py(b_re, b_im, None)?;
    let out = restricted_range::kron(&a, &b);
    let n = out.order();
    let re: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| out[(i, j)].re).collect()).collect();
    let im: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| out[(i, j)].im).collect()).collect();
    let d = PyDict::new_bound(py);
    d.set_item("re", re)?;
    d.set_item("im", im)?;
    Ok(d.into())
}

/// Ascending eigenvalues of a Hermitian matrix.
#[pyfunction]
fn eigvalsh(re: Vec<Vec<f64>>, im: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
    let h = hermitian_from_py(re, im, None)?;
    Ok(restricted_range::eig::eigh(&h).values)
}

/// Minimum modulus over the sampled product range of U(phi)^{x n}.
#[pyfunction]
#[pyo3(signature = (phi, n, resolution = 720))]
fn minkowski_power_min_modulus(phi: f64, n: usize, resolution: usize) -> PyResult<f64> {
    if n == 0 {
        return Err(PyValueError::new_err("n must be at least 1"));
    }
    let base = numerical_range(&families::u_phase(phi), resolution).map_err(err)?;
    Ok(minkowski_power(&base, n).min_modulus())
}

/// Closed-form product numerical range of the order-four family X_{t,s}.
#[pyfunction]
fn xts_exact(t: f64, s: f64) -> (f64, f64) {
    let i = families::xts_exact_pnr(t, s);
    (i.lo, i.hi)
}

/// Minimum output entropy (bits) of a qubit channel given by Kraus operators.
#[pyfunction]
#[pyo3(signature = (kraus, seed = 0, restarts = 20))]
fn moe_qubit(kraus: Vec<(Vec<Vec<f64>>, Vec<Vec<f64>>)>, seed: u64, restarts: usize) -> PyResult<f64> {
    let ops: PyResult<Vec<ComplexMatrix>> = kraus
        .into_iter()
        .map(|(re, im)| matrix_from_py(re, im, None))
        .collect();
    let ch = QuantumChannel::new(ops?).map_err(err)?;
    apps::moe_qubit(&ch, &cfg(seed, restarts)).map_err(err)
}

/// Minimum output entropy of the Werner-Holevo channel at parameter p.
#[pyfunction]
#[pyo3(signature = (p, seed = 0, restarts = 20))]
fn moe_werner_holevo(p: f64, seed: u64, restarts: usize) -> PyResult<f64> {
    let ch = QuantumChannel::werner_holevo(p).map_err(err)?;
    apps::moe_qubit(&ch, &cfg(seed, restarts)).map_err(err)
}

/// k-positivity verdict for a Choi matrix with dims [out, in]:
/// "violated", "certified" or "no-violation-found".
#[pyfunction]
#[pyo3(signature = (re, im, dims, k, seed = 0, restarts = 20))]
fn positivity(
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
    dims: Vec<usize>,
    k: usize,
    seed: u64,
    restarts: usize,
) -> PyResult<String> {
    if dims.len() != 2 {
        return Err(PyValueError::new_err("dims must be [out, in]"));
    }
    let h = hermitian_from_py(re, im, None)?;
    let d = ChoiMatrix::new(h, dims[0], dims[1]).map_err(err)?;
    let v = apps::is_k_positive(&d, k, &cfg(seed, restarts)).map_err(err)?;
    Ok(v.status.as_str().to_string())
}

/// Choi matrix (normalized, dims [out, in]) of a channel in Kraus form.
#[pyfunction]
fn choi(py: Python<'_>, kraus: Vec<(Vec<Vec<f64>>, Vec<Vec<f64>>)>) -> PyResult<PyObject> {
    let ops: PyResult<Vec<ComplexMatrix>> = kraus
        .into_iter()
        .map(|(re, im)| matrix_from_py(re, im, None))
        .collect();
    let ch = QuantumChannel::new(ops?).map_err(err)?;
    let d = choi_of(&ch).map_err(err)?;
    let m = d.matrix().matrix();
    let n = m.order();
    let re: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| m[(i, j)].re).collect()).collect();
    let im: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| m[(i, j)].im).collect()).collect();
    let out = PyDict::new_bound(py);
    out.set_item("re", re)?;
    out.set_item("im", im)?;
    out.set_item("dims", vec![d.dim_out(), d.dim_in()])?;
    Ok(out.into())
}

/// Local distinguishability of the diagonal two-qubit family V(phi, psi);
/// returns (distinguishable, t, s) with the annihilating amplitudes when
/// they exist.
#[pyfunction]
fn discriminate_v(phi: f64, psi: f64) -> PyResult<(bool, Option<f64>, Option<f64>)> {
    if !apps::v_is_distinguishable(phi, psi) {
        return Ok((false, None, None));
    }
    let (t, s) = apps::discrim::discrimination_amplitudes(phi, psi).map_err(err)?;
    Ok((true, Some(t), Some(s)))
}

/// Upper bound on local fidelity against a diagonal state (LP of the
/// subset-sum constraints).
#[pyfunction]
fn fidelity_lp(p: Vec<Vec<f64>>, lambda: Vec<f64>) -> PyResult<f64> {
    apps::diagonal_fidelity_lp(&p, &lambda).map_err(err)
}

/// Geometric measure of entanglement (bits) of a pure state on the given
/// tensor factorization; amplitudes as (re, im) pairs.
#[pyfunction]
#[pyo3(signature = (amplitudes, dims, seed = 0, restarts = 20))]
fn geometric_entanglement(
    amplitudes: Vec<(f64, f64)>,
    dims: Vec<usize>,
    seed: u64,
    restarts: usize,
) -> PyResult<f64> {
    let amps: Vec<Complex64> = amplitudes
        .into_iter()
        .map(|(re, im)| Complex64::new(re, im))
        .collect();
    let psi = PureState::new(amps).map_err(err)?;
    let space = TensorSpace::new(dims).map_err(err)?;
    apps::geometric_entanglement(&psi, &space, &cfg(seed, restarts)).map_err(err)
}

/// Random density matrix of order n under the Hilbert-Schmidt measure.
#[pyfunction]
fn hs_density(py: Python<'_>, n: usize, seed: u64) -> PyResult<PyObject> {
    let rho: DensityMatrix = restricted_range::random::sample_hs_density(n, seed);
    let m = rho.matrix();
    let re: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| m[(i, j)].re).collect()).collect();
    let im: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| m[(i, j)].im).collect()).collect();
    let out = PyDict::new_bound(py);
    out.set_item("re", re)?;
    out.set_item("im", im)?;
    Ok(out.into())
}

#[pymodule]
fn rrange(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(range_boundary, m)?)?;
    m.add_function(wrap_pyfunction!(radius, m)?)?;
    m.add_function(wrap_pyfunction!(pnr, m)?)?;
    m.add_function(wrap_pyfunction!(k_range, m)?)?;
    m.add_function(wrap_pyfunction!(product_radius, m)?)?;
    m.add_function(wrap_pyfunction!(product_c_radius_py, m)?)?;
    m.add_function(wrap_pyfunction!(kron, m)?)?;
    m.add_function(wrap_pyfunction!(eigvalsh, m)?)?;
    m.add_function(wrap_pyfunction!(minkowski_power_min_modulus, m)?)?;
    m.add_function(wrap_pyfunction!(xts_exact, m)?)?;
    m.add_function(wrap_pyfunction!(moe_qubit, m)?)?;
    m.add_function(wrap_pyfunction!(moe_werner_holevo, m)?)?;
    m.add_function(wrap_pyfunction!(positivity, m)?)?;
    m.add_function(wrap_pyfunction!(choi, m)?)?;
    m.add_function(wrap_pyfunction!(discriminate_v, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity_lp, m)?)?;
    m.add_function(wrap_pyfunction!(geometric_entanglement, m)?)?;
    m.add_function(wrap_pyfunction!(hs_density, m)?)?;
    Ok(())
}
