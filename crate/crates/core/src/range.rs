//! Numerical range, numerical radius, and the planar Minkowski-product engine.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eig::eigh;
use crate::error::{RangeError, Result};
use crate::geometry;
use crate::matrix::{ComplexMatrix, HermitianMatrix};
use crate::tolerance::Tolerances;

/// Default angular resolution for boundary sampling.
pub const DEFAULT_ANGLES: usize = 720;

/// A closed real interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        x >= self.lo - tol && x <= self.hi + tol
    }

    pub fn contains_interval(&self, other: &Interval, tol: f64) -> bool {
        other.lo >= self.lo - tol && other.hi <= self.hi + tol
    }
}

/// Degenerate shapes a planar set can collapse to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SetKind {
    /// A single point.
    Point,
    /// A segment along direction `angle` (flat range of a rotated Hermitian).
    Segment { angle: f64 },
    /// A two-dimensional region.
    Region,
}

/// A sampled region of the complex plane.
///
/// `boundary` is the outer boundary (a closed ring for regions). A set that
/// wraps around the origin without containing it additionally carries the
/// inner ring in `hole`. All stored points are achieved values of whatever
/// produced the set, never interpolations.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarSet {
    pub boundary: Vec<Complex64>,
    pub hole: Option<Vec<Complex64>>,
    pub interior: Option<Vec<Complex64>>,
    pub closed: bool,
    pub kind: SetKind,
    pub resolution: usize,
}

impl PlanarSet {
    pub fn point(z: Complex64) -> Self {
        Self {
            boundary: vec![z],
            hole: None,
            interior: None,
            closed: false,
            kind: SetKind::Point,
            resolution: 1,
        }
    }

    /// Every stored point, across boundary, hole ring and interior samples.
    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.boundary
            .iter()
            .copied()
            .chain(self.hole.iter().flatten().copied())
            .chain(self.interior.iter().flatten().copied())
    }

    pub fn min_modulus(&self) -> f64 {
        self.points().map(|z| z.norm()).fold(f64::INFINITY, f64::min)
    }

    pub fn max_modulus(&self) -> f64 {
        self.points().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn centroid(&self) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut count = 0usize;
        for z in self.points() {
            sum += z;
            count += 1;
        }
        sum / count.max(1) as f64
    }

    /// Convex hull of all stored points.
    pub fn hull(&self) -> Vec<Complex64> {
        geometry::convex_hull(&self.points().collect::<Vec<_>>())
    }

    /// Membership test with outward slack `tol`.
    ///
    /// For regions this is winding containment in the outer ring, minus the
    /// hole interior when present.
    pub fn contains(&self, p: Complex64, tol: f64) -> bool {
        match self.kind {
            SetKind::Point => (p - self.boundary[0]).norm() <= tol,
            SetKind::Segment { .. } => self
                .boundary
                .windows(2)
                .any(|w| geometry::point_segment_distance(p, w[0], w[1]) <= tol)
                || self.boundary.iter().any(|&b| (p - b).norm() <= tol),
            SetKind::Region => {
                let near_boundary = geometry::dist_to_polygon_boundary(p, &self.boundary) <= tol;
                let inside_outer = geometry::winding_contains(&self.boundary, p) || near_boundary;
                if !inside_outer {
                    return false;
                }
                if let Some(hole) = &self.hole {
                    let near_hole = geometry::dist_to_polygon_boundary(p, hole) <= tol;
                    if geometry::winding_contains(hole, p) && !near_hole {
                        return false;
                    }
                }
                true
            }
        }
    }

    /// Representative samples used when this set enters a Minkowski product.
    pub fn product_samples(&self) -> Vec<Complex64> {
        let mut pts: Vec<Complex64> = self.boundary.clone();
        if let Some(h) = &self.hole {
            pts.extend_from_slice(h);
        }
        if let Some(int) = &self.interior {
            pts.extend_from_slice(int);
        }
        pts
    }
}

/// Support data of the Hermitian part of e^{-i theta} X.
fn support_state(x: &ComplexMatrix, theta: f64) -> (Vec<Complex64>, f64) {
    let rot = x.scale(Complex64::from_polar(1.0, -theta));
    let h = HermitianMatrix::new_with(
        rot.hermitian_part(),
        &Tolerances {
            hermiticity: 1e-6,
            ..Tolerances::DEFAULT
        },
    )
    .expect("Hermitian part is Hermitian");
    let e = eigh(&h);
    let n = x.order();
    let top = e.vector(n - 1);
    (top, e.values[n - 1])
}

/// Numerical range by support-function sampling.
///
/// For each direction the boundary point is the expectation of X in the top
/// eigenvector of the Hermitian part of e^{-i theta} X. Flat ranges
/// (Hermitian up to rotation and shift) are detected and returned as
/// segments, single points as points.
pub fn numerical_range(x: &ComplexMatrix, angles: usize) -> Result<PlanarSet> {
    if angles < 8 {
        return Err(RangeError::InvalidParameter(
            "numerical range needs at least 8 angles".into(),
        ));
    }
    let n = x.order();
    let center = x.trace() / n as f64;
    let x0 = x.shift(-center);
    let a = x0.hermitian_part();
    let b = x0.skew_part();
    let na = a.frobenius_norm();
    let nb = b.frobenius_norm();
    let scale = x.frobenius_norm().max(1e-300);

    if (na * na + nb * nb).sqrt() <= 1e-14 * scale.max(1.0) {
        return Ok(PlanarSet::point(center));
    }

    // flatness: Hermitian parts of the centered matrix linearly dependent
    let dot = {
        let mut acc = 0.0;
        for (p, q) in a.entries().iter().zip(b.entries()) {
            acc += p.re * q.re + p.im * q.im;
        }
        acc
    };
    let gram_det = na * na * nb * nb - dot * dot;
    if gram_det <= (1e-13 * na.max(nb).max(1e-300)).powi(4).max(1e-26 * (na * nb).powi(2)) {
        // x0 = e^{i theta} H with Hermitian H
        let (theta, h) = if na >= nb {
            let k = dot / (na * na);
            let theta = k.atan();
            let scale_h = (1.0 + k * k).sqrt();
            (theta, a.scale(Complex64::new(scale_h, 0.0)))
        } else {
            let k = dot / (nb * nb);
            // x0 = (k + i) B = e^{i theta} sqrt(1+k^2) B
            let theta = 1.0f64.atan2(k);
            let scale_h = (1.0 + k * k).sqrt();
            (theta, b.scale(Complex64::new(scale_h, 0.0)))
        };
        let hh = HermitianMatrix::new_with(
            h,
            &Tolerances {
                hermiticity: 1e-6,
                ..Tolerances::DEFAULT
            },
        )
        .expect("Hermitian by construction");
        let e = eigh(&hh);
        let (lo, hi) = (e.values[0], e.values[n - 1]);
        if (hi - lo).abs() <= 1e-14 * scale {
            return Ok(PlanarSet::point(center + Complex64::from_polar(1.0, theta) * lo));
        }
        let dir = Complex64::from_polar(1.0, theta);
        let count = angles;
        let boundary: Vec<Complex64> = (0..=count)
            .map(|j| {
                let t = j as f64 / count as f64;
                center + dir * (lo + t * (hi - lo))
            })
            .collect();
        return Ok(PlanarSet {
            boundary,
            hole: None,
            interior: None,
            closed: false,
            kind: SetKind::Segment { angle: theta },
            resolution: angles,
        });
    }

    let boundary: Vec<Complex64> = (0..angles)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / angles as f64;
            let (state, _) = support_state(x, theta);
            x.expectation(&state)
        })
        .collect();
    Ok(PlanarSet {
        boundary,
        hole: None,
        interior: None,
        closed: true,
        kind: SetKind::Region,
        resolution: angles,
    })
}

/// Numerical range of a Hermitian operator: the full spectral interval.
pub fn numerical_range_hermitian(x: &HermitianMatrix) -> Interval {
    let e = eigh(x);
    Interval::new(e.values[0], *e.values.last().unwrap())
}

/// Numerical radius: the largest modulus over the numerical range.
///
/// Computed as the maximum over directions of the support function
/// lambda_max(Herm(e^{-i theta} X)), refined locally around the best
/// coarse-grid direction.
pub fn numerical_radius(x: &ComplexMatrix) -> f64 {
    let coarse = DEFAULT_ANGLES;
    let h = |theta: f64| support_state(x, theta).1;
    let mut best_theta = 0.0;
    let mut best = f64::NEG_INFINITY;
    for j in 0..coarse {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / coarse as f64;
        let v = h(theta);
        if v > best {
            best = v;
            best_theta = theta;
        }
    }
    let delta = 2.0 * std::f64::consts::PI / coarse as f64;
    let (mut lo, mut hi) = (best_theta - delta, best_theta + delta);
    for _ in 0..80 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if h(m1) < h(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    best.max(h(0.5 * (lo + hi))).max(0.0)
}

fn bin_extract<F>(pairs: &[Complex64], center: Complex64, bins: usize, keep_max: bool, key: F) -> Vec<Complex64>
where
    F: Fn(Complex64) -> f64,
{
    let mut best: Vec<Option<(f64, Complex64)>> = vec![None; bins];
    for &z in pairs {
        let d = z - center;
        if d.norm() == 0.0 {
            continue;
        }
        let mut angle = d.im.atan2(d.re);
        if angle < 0.0 {
            angle += 2.0 * std::f64::consts::PI;
        }
        let mut bin = ((angle / (2.0 * std::f64::consts::PI)) * bins as f64) as usize;
        if bin >= bins {
            bin = bins - 1;
        }
        let k = key(z);
        match &best[bin] {
            Some((kb, _)) if (keep_max && k <= *kb) || (!keep_max && k >= *kb) => {}
            _ => best[bin] = Some((k, z)),
        }
    }
    best.into_iter().flatten().map(|(_, z)| z).collect()
}

/// Minkowski product of two sampled planar sets.
///
/// All pairwise products of the stored samples are formed, then the outer
/// boundary is extracted by an angular sweep around the centroid (per-bin
/// farthest point) and, when the product wraps around an origin it does not
/// contain, the inner ring by a sweep around zero (per-bin smallest modulus).
/// Every emitted point is one of the sampled products.
pub fn minkowski_product(a: &PlanarSet, b: &PlanarSet) -> PlanarSet {
    // a single-point factor scales the other set exactly
    match (a.kind, b.kind) {
        (SetKind::Point, _) => return scale_set(b, a.boundary[0]),
        (_, SetKind::Point) => return scale_set(a, b.boundary[0]),
        _ => {}
    }
    let sa = a.product_samples();
    let sb = b.product_samples();
    let mut pairs = Vec::with_capacity(sa.len() * sb.len());
    for &za in &sa {
        for &zb in &sb {
            pairs.push(za * zb);
        }
    }
    minkowski_from_samples(pairs, a.resolution.max(b.resolution).max(64))
}

fn scale_set(s: &PlanarSet, z: Complex64) -> PlanarSet {
    if z.norm() == 0.0 {
        return PlanarSet::point(Complex64::new(0.0, 0.0));
    }
    let map = |pts: &Vec<Complex64>| pts.iter().map(|&p| p * z).collect::<Vec<_>>();
    PlanarSet {
        boundary: map(&s.boundary),
        hole: s.hole.as_ref().map(map),
        interior: s.interior.as_ref().map(map),
        closed: s.closed,
        kind: match s.kind {
            SetKind::Point => SetKind::Point,
            SetKind::Segment { angle } => SetKind::Segment {
                angle: angle + z.arg(),
            },
            SetKind::Region => SetKind::Region,
        },
        resolution: s.resolution,
    }
}

fn minkowski_from_samples(pairs: Vec<Complex64>, resolution: usize) -> PlanarSet {
    // degenerate cases: point or collinear cloud
    let diam_scale = {
        let centroid = pairs.iter().sum::<Complex64>() / pairs.len() as f64;
        pairs
            .iter()
            .map(|z| (z - centroid).norm())
            .fold(0.0f64, f64::max)
    };
    let modulus_scale = pairs.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    if diam_scale <= 1e-13 * modulus_scale.max(1e-300) {
        return PlanarSet::point(pairs[0]);
    }
    if let Some((base, dir, _, _)) = geometry::collinear_fit(&pairs, 1e-12) {
        let mut along: Vec<(f64, Complex64)> = pairs
            .iter()
            .map(|&z| {
                let d = z - base;
                (d.re * dir.re + d.im * dir.im, z)
            })
            .collect();
        along.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        // thin to about `resolution` actual samples, keeping the extremes
        let keep_every = (along.len() / resolution.max(2)).max(1);
        let mut boundary: Vec<Complex64> = Vec::new();
        for (i, (_, z)) in along.iter().enumerate() {
            if i % keep_every == 0 || i == along.len() - 1 {
                boundary.push(*z);
            }
        }
        let angle = dir.im.atan2(dir.re);
        return PlanarSet {
            boundary,
            hole: None,
            interior: None,
            closed: false,
            kind: SetKind::Segment { angle },
            resolution,
        };
    }

    let centroid = pairs.iter().sum::<Complex64>() / pairs.len() as f64;
    let boundary = bin_extract(&pairs, centroid, resolution, true, |z| (z - centroid).norm());

    // hole ring: products that wrap around zero without reaching it
    let min_mod = pairs.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    let hole_clearance = 4.0 * diam_scale / resolution as f64;
    let hole = if min_mod > hole_clearance && geometry::winding_contains(&boundary, Complex64::new(0.0, 0.0))
    {
        let ring = bin_extract(
            &pairs,
            Complex64::new(0.0, 0.0),
            resolution,
            false,
            |z| z.norm(),
        );
        Some(ring)
    } else {
        None
    };

    // interior: canonical samples independent of pair enumeration order --
    // the inner ring around the centroid plus the extremal-modulus points,
    // so min/max modulus survive iterated products exactly
    let mut interior = bin_extract(&pairs, centroid, resolution, false, |z| (z - centroid).norm());
    let min_pt = pairs
        .iter()
        .copied()
        .min_by(|x, y| x.norm().partial_cmp(&y.norm()).unwrap())
        .unwrap();
    let max_pt = pairs
        .iter()
        .copied()
        .max_by(|x, y| x.norm().partial_cmp(&y.norm()).unwrap())
        .unwrap();
    interior.push(min_pt);
    interior.push(max_pt);

    PlanarSet {
        boundary,
        hole,
        interior: Some(interior),
        closed: true,
        kind: SetKind::Region,
        resolution,
    }
}

/// n-fold Minkowski power.
pub fn minkowski_power(set: &PlanarSet, n: usize) -> PlanarSet {
    assert!(n >= 1);
    let mut out = set.clone();
    for _ in 1..n {
        out = minkowski_product(&out, set);
    }
    out
}

/// Product numerical range of a Kronecker product, as the Minkowski product
/// of the factors' numerical ranges.
pub fn product_range_of_tensor(factors: &[ComplexMatrix], angles: usize) -> Result<PlanarSet> {
    if factors.is_empty() {
        return Err(RangeError::InvalidParameter("no factors given".into()));
    }
    let mut out = numerical_range(&factors[0], angles)?;
    for f in &factors[1..] {
        let r = numerical_range(f, angles)?;
        out = minkowski_product(&out, &r);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{C_ONE, C_ZERO};
    use crate::random;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_is_a_point() {
        let r = numerical_range(&ComplexMatrix::identity(3), 64).unwrap();
        assert_eq!(r.kind, SetKind::Point);
        assert!((r.boundary[0] - C_ONE).norm() < 1e-14);
    }

    #[test]
    fn hermitian_range_is_real_segment() {
        let x = crate::families::x_ts(1.0, 1.0).unwrap();
        let r = numerical_range(x.matrix(), 720).unwrap();
        match r.kind {
            SetKind::Segment { angle } => {
                assert!(angle.abs() < 1e-9 || (angle - std::f64::consts::PI).abs() < 1e-9);
            }
            other => panic!("expected segment, got {other:?}"),
        }
        let lo = r.boundary.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
        let hi = r.boundary.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        assert!((lo + 5f64.sqrt()).abs() < 1e-10);
        assert!((hi - 5f64.sqrt()).abs() < 1e-10);
        assert!(r.boundary.iter().all(|z| z.im.abs() < 1e-10));
    }

    #[test]
    fn jordan_block_is_half_disk() {
        let x = ComplexMatrix::from_rows(&[vec![C_ZERO, C_ONE], vec![C_ZERO, C_ZERO]]).unwrap();
        let r = numerical_range(&x, 720).unwrap();
        assert_eq!(r.kind, SetKind::Region);
        for z in &r.boundary {
            assert!((z.norm() - 0.5).abs() < 1e-9, "boundary point off circle: {z}");
        }
        // compare against dense random-state sampling
        let mut rng = random::substream(100, 0);
        let cloud = crate::oracle::sample_range_points(&x, 20_000, &mut rng);
        let max_mod = cloud.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        assert!(max_mod <= 0.5 + 1e-12);
        assert!(max_mod >= 0.5 - 1e-3);
        // sampled points lie inside the polygon within the edge sagitta of
        // the 720-gon inscribed in the circle
        for z in cloud.iter().take(2000) {
            assert!(r.contains(*z, 1e-4), "point {z} not contained");
        }
    }

    #[test]
    fn range_is_convex_and_contains_eigenvalues() {
        for rep in 0..6 {
            let mut rng = random::substream(101, rep);
            let x = random::ginibre(5, 5, &mut rng);
            let r = numerical_range(&x, 720).unwrap();
            // convexity: one-signed cross products along the hull of the boundary
            let hull = geometry::convex_hull(&r.boundary);
            for &z in &r.boundary {
                assert!(geometry::convex_contains(&hull, z, 1e-8));
            }
            for ev in crate::oracle::char_poly_roots(&x) {
                assert!(r.contains(ev, 1e-6), "eigenvalue {ev} outside range");
            }
        }
    }

    #[test]
    fn radius_examples() {
        let phi = 1.1;
        let u = ComplexMatrix::diagonal(&[C_ONE, Complex64::from_polar(1.0, phi)]);
        assert!((numerical_radius(&u) - 1.0).abs() < 1e-10);

        let x = ComplexMatrix::from_rows(&[vec![C_ZERO, C_ONE], vec![C_ZERO, C_ZERO]]).unwrap();
        assert!((numerical_radius(&x) - 0.5).abs() < 1e-10);
    }

    #[test]
    fn radius_triangle_inequality_and_spectral_bound() {
        for rep in 0..5 {
            let mut rng = random::substream(102, rep);
            let x = random::ginibre(4, 4, &mut rng);
            let alpha = random::standard_complex(&mut rng);
            let r = numerical_radius(&x);
            let r_shift = numerical_radius(&x.shift(alpha));
            assert!(r_shift <= r + alpha.norm() + 1e-9);
            let spec_rad = crate::oracle::char_poly_roots(&x)
                .into_iter()
                .map(|z| z.norm())
                .fold(0.0f64, f64::max);
            assert!(r >= spec_rad - 1e-8);
        }
    }

    #[test]
    fn translation_and_scalar_covariance() {
        let mut rng = random::substream(103, 0);
        let x = random::ginibre(4, 4, &mut rng);
        let alpha = c(0.37, -1.2);
        let angles = 360usize;
        let r1 = numerical_range(&x, angles).unwrap();
        let r2 = numerical_range(&x.shift(alpha), angles).unwrap();
        for (p, q) in r1.boundary.iter().zip(&r2.boundary) {
            assert!((*p + alpha - *q).norm() < 1e-9);
        }
        // scaling by |beta| e^{i phase}: with the phase on the sampling grid,
        // support points match pointwise up to a grid rotation
        let shift_bins = 30usize;
        let phase = 2.0 * std::f64::consts::PI * shift_bins as f64 / angles as f64;
        let beta = Complex64::from_polar(1.3, phase);
        let r3 = numerical_range(&x.scale(beta), angles).unwrap();
        for j in 0..angles {
            let expect = r1.boundary[j] * beta;
            let got = r3.boundary[(j + shift_bins) % angles];
            assert!((expect - got).norm() < 1e-9, "angle bin {j}");
        }
    }

    #[test]
    fn unitary_invariance_within_resolution() {
        let mut rng = random::substream(104, 0);
        let x = random::ginibre(4, 4, &mut rng);
        let u = random::haar_unitary(4, &mut rng);
        let conj = u.matmul(&x).unwrap().matmul(&u.adjoint()).unwrap();
        let r1 = numerical_range(&x, 720).unwrap();
        let r2 = numerical_range(&conj, 720).unwrap();
        let d = geometry::convex_hausdorff(
            &geometry::convex_hull(&r1.boundary),
            &geometry::convex_hull(&r2.boundary),
        );
        let bound = 2.0 * (2.0 * std::f64::consts::PI / 720.0) * x.frobenius_norm();
        assert!(d <= bound, "hausdorff {d} above resolution bound {bound}");
    }

    #[test]
    fn minkowski_identity_element() {
        let one = PlanarSet::point(C_ONE);
        let mut rng = random::substream(105, 0);
        let x = random::ginibre(3, 3, &mut rng);
        let s = numerical_range(&x, 360).unwrap();
        let prod = minkowski_product(&one, &s);
        let d = geometry::convex_hausdorff(
            &geometry::convex_hull(&prod.points().collect::<Vec<_>>()),
            &geometry::convex_hull(&s.boundary),
        );
        assert!(d < 1e-10);
    }

    #[test]
    fn minkowski_real_intervals() {
        // [1,2] x [3,4] -> moduli within [3,8], endpoints attained
        let seg1: Vec<Complex64> = (0..=100).map(|k| c(1.0 + k as f64 / 100.0, 0.0)).collect();
        let seg2: Vec<Complex64> = (0..=100).map(|k| c(3.0 + k as f64 / 100.0, 0.0)).collect();
        let a = PlanarSet {
            boundary: seg1,
            hole: None,
            interior: None,
            closed: false,
            kind: SetKind::Segment { angle: 0.0 },
            resolution: 100,
        };
        let b = PlanarSet {
            boundary: seg2,
            hole: None,
            interior: None,
            closed: false,
            kind: SetKind::Segment { angle: 0.0 },
            resolution: 100,
        };
        let prod = minkowski_product(&a, &b);
        assert!(matches!(prod.kind, SetKind::Segment { .. }));
        let min = prod.min_modulus();
        let max = prod.max_modulus();
        assert!((min - 3.0).abs() < 1e-12);
        assert!((max - 8.0).abs() < 1e-12);
        for z in prod.points() {
            assert!(z.norm() >= 3.0 - 1e-12 && z.norm() <= 8.0 + 1e-12);
        }
    }

    #[test]
    fn minkowski_commutes() {
        let mut rng = random::substream(106, 0);
        let x = random::ginibre(3, 3, &mut rng);
        let y = random::ginibre(3, 3, &mut rng);
        let rx = numerical_range(&x, 180).unwrap();
        let ry = numerical_range(&y, 180).unwrap();
        let ab = minkowski_product(&rx, &ry);
        let ba = minkowski_product(&ry, &rx);
        let d = geometry::point_set_hausdorff(
            &ab.points().collect::<Vec<_>>(),
            &ba.points().collect::<Vec<_>>(),
        );
        assert!(d <= 1e-8, "commutator hausdorff {d}");
    }

    #[test]
    fn minkowski_contains_sampled_products()  {
        let mut rng = random::substream(107, 0);
        let x = random::ginibre(3, 3, &mut rng);
        let y = random::ginibre(3, 3, &mut rng);
        let rx = numerical_range(&x, 360).unwrap();
        let ry = numerical_range(&y, 360).unwrap();
        let prod = minkowski_product(&rx, &ry);
        let tol = 2e-2 * prod.max_modulus();
        for (i, &za) in rx.boundary.iter().enumerate().step_by(7) {
            for (j, &zb) in ry.boundary.iter().enumerate().step_by(11) {
                let _ = (i, j);
                assert!(prod.contains(za * zb, tol), "{} not contained", za * zb);
            }
        }
    }

    #[test]
    fn tensor_factor_with_identity_keeps_range() {
        let mut rng = random::substream(108, 0);
        let a = random::ginibre(2, 2, &mut rng);
        let sets = product_range_of_tensor(&[a.clone(), ComplexMatrix::identity(2)], 720).unwrap();
        let ra = numerical_range(&a, 720).unwrap();
        let d = geometry::convex_hausdorff(
            &geometry::convex_hull(&sets.points().collect::<Vec<_>>()),
            &geometry::convex_hull(&ra.boundary),
        );
        assert!(d < 1e-6, "hausdorff {d}");
    }

    #[test]
    fn tensor_barycenter_is_contained() {
        for rep in 0..10 {
            let mut rng = random::substream(109, rep);
            let a = random::ginibre(2, 2, &mut rng);
            let b = random::ginibre(2, 2, &mut rng);
            let prod = product_range_of_tensor(&[a.clone(), b.clone()], 360).unwrap();
            let bary = a.trace() * b.trace() / 4.0;
            let hull = geometry::convex_hull(&prod.points().collect::<Vec<_>>());
            assert!(
                geometry::convex_contains(&hull, bary, 1e-6 * (1.0 + prod.max_modulus())),
                "barycenter {bary} not in product range hull"
            );
        }
    }
}
