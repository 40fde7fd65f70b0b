//! Planar geometry helpers for numerical-range sets.

use num_complex::Complex64;

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Convex hull by monotone chain, counter-clockwise, no repeated last point.
/// Collinear input collapses to its two extreme points.
pub fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = points.to_vec();
    pts.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    pts.dedup_by(|a, b| (*a - *b).norm() == 0.0);
    let n = pts.len();
    if n <= 2 {
        return pts;
    }
    let mut hull: Vec<Complex64> = Vec::with_capacity(2 * n);
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev() {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    if hull.len() < 2 {
        // fully degenerate (all points equal)
        return vec![pts[0]];
    }
    hull
}

pub fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a).re * ab.re) + ((p - a).im * ab.im)) / len2;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Distance from a point to a closed polygon boundary.
pub fn dist_to_polygon_boundary(p: Complex64, poly: &[Complex64]) -> f64 {
    let n = poly.len();
    if n == 1 {
        return (p - poly[0]).norm();
    }
    let mut best = f64::INFINITY;
    for i in 0..n {
        best = best.min(point_segment_distance(p, poly[i], poly[(i + 1) % n]));
    }
    best
}

/// Is `p` inside a convex CCW polygon, with slack `tol` outward.
pub fn convex_contains(poly: &[Complex64], p: Complex64, tol: f64) -> bool {
    match poly.len() {
        0 => false,
        1 => (p - poly[0]).norm() <= tol,
        2 => point_segment_distance(p, poly[0], poly[1]) <= tol,
        n => {
            for i in 0..n {
                let a = poly[i];
                let b = poly[(i + 1) % n];
                let edge_len = (b - a).norm().max(1e-300);
                if cross(a, b, p) < -tol * edge_len {
                    return false;
                }
            }
            true
        }
    }
}

/// Winding-number containment for arbitrary closed polylines.
pub fn winding_contains(poly: &[Complex64], p: Complex64) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    let mut winding = 0i32;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if a.im <= p.im {
            if b.im > p.im && cross(a, b, p) > 0.0 {
                winding += 1;
            }
        } else if b.im <= p.im && cross(a, b, p) < 0.0 {
            winding -= 1;
        }
    }
    winding != 0
}

/// Distance from a point to a filled convex polygon (zero inside).
pub fn dist_to_convex(p: Complex64, poly: &[Complex64]) -> f64 {
    if convex_contains(poly, p, 0.0) {
        0.0
    } else {
        dist_to_polygon_boundary(p, poly)
    }
}

/// Hausdorff distance between two filled convex polygons (vertex lists, CCW).
pub fn convex_hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut d: f64 = 0.0;
    for &p in a {
        d = d.max(dist_to_convex(p, b));
    }
    for &p in b {
        d = d.max(dist_to_convex(p, a));
    }
    d
}

/// Hausdorff distance between two finite point sets (brute force).
pub fn point_set_hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let one_sided = |xs: &[Complex64], ys: &[Complex64]| {
        xs.iter()
            .map(|&x| {
                ys.iter()
                    .map(|&y| (x - y).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0f64, f64::max)
    };
    one_sided(a, b).max(one_sided(b, a))
}

/// Detects a collinear point cloud. Returns (base, direction, lo, hi):
/// every point is within `tol` of base + t*direction with t in [lo, hi].
pub fn collinear_fit(points: &[Complex64], tol: f64) -> Option<(Complex64, Complex64, f64, f64)> {
    if points.is_empty() {
        return None;
    }
    let n = points.len() as f64;
    let centroid = points.iter().sum::<Complex64>() / n;
    // principal axis of the 2x2 covariance
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in points {
        let d = p - centroid;
        sxx += d.re * d.re;
        sxy += d.re * d.im;
        syy += d.im * d.im;
    }
    let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let dir = Complex64::from_polar(1.0, theta);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut max_perp: f64 = 0.0;
    for p in points {
        let d = p - centroid;
        let along = d.re * dir.re + d.im * dir.im;
        let perp = (-d.re * dir.im + d.im * dir.re).abs();
        max_perp = max_perp.max(perp);
        lo = lo.min(along);
        hi = hi.max(along);
    }
    let scale = (hi - lo).abs().max(1.0);
    if max_perp <= tol * scale {
        Some((centroid, dir, lo, hi))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hull_of_square_with_interior() {
        let pts = vec![
            c(0.0, 0.0),
            c(1.0, 0.0),
            c(1.0, 1.0),
            c(0.0, 1.0),
            c(0.5, 0.5),
            c(0.2, 0.8),
        ];
        let hull = convex_hull(&pts);
        assert_eq!(hull.len(), 4);
        assert!(convex_contains(&hull, c(0.5, 0.5), 1e-12));
        assert!(!convex_contains(&hull, c(1.5, 0.5), 1e-12));
    }

    #[test]
    fn hull_of_collinear_points() {
        let pts = vec![c(0.0, 0.0), c(0.5, 0.5), c(1.0, 1.0)];
        let hull = convex_hull(&pts);
        assert_eq!(hull.len(), 2);
    }

    #[test]
    fn winding_of_annulus_like_polygon() {
        let square = vec![c(-1.0, -1.0), c(1.0, -1.0), c(1.0, 1.0), c(-1.0, 1.0)];
        assert!(winding_contains(&square, c(0.0, 0.0)));
        assert!(!winding_contains(&square, c(2.0, 0.0)));
    }

    #[test]
    fn collinear_detection() {
        let dir = Complex64::from_polar(1.0, 0.9);
        let pts: Vec<Complex64> = (0..50).map(|k| dir * (k as f64 / 10.0)).collect();
        let (_, d, lo, hi) = collinear_fit(&pts, 1e-10).unwrap();
        assert!((d.norm() - 1.0).abs() < 1e-12);
        assert!((hi - lo - 4.9).abs() < 1e-9);
        let mut pts2 = pts;
        pts2.push(c(0.3, 2.0));
        assert!(collinear_fit(&pts2, 1e-10).is_none());
    }

    #[test]
    fn hausdorff_of_shifted_squares() {
        let a = vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)];
        let b: Vec<Complex64> = a.iter().map(|&p| p + c(0.25, 0.0)).collect();
        let d = convex_hausdorff(&a, &b);
        assert!((d - 0.25).abs() < 1e-12);
    }
}
