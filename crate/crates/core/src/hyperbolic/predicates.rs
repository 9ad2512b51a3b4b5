use num_complex::Complex64;

use super::point::{minkowski, minkowski_cross, DiskPoint};
use crate::error::{Error, Result};

/// Where a query point lies relative to a circumscribed circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircleSide {
    Inside,
    Cocircular,
    Outside,
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Orientation of three points: positive when counterclockwise. Evaluated
/// in the Klein model, where geodesic triangles are straight.
pub fn orientation(p: DiskPoint, q: DiskPoint, r: DiskPoint) -> f64 {
    let (kp, kq, kr) = (p.to_klein(), q.to_klein(), r.to_klein());
    cross(kq - kp, kr - kp)
}

/// Orientation normalized by the longest squared side, i.e. roughly the sine
/// of the smallest angle of the Klein triangle.
pub fn relative_orientation(p: DiskPoint, q: DiskPoint, r: DiskPoint) -> f64 {
    let (kp, kq, kr) = (p.to_klein(), q.to_klein(), r.to_klein());
    let scale = (kq - kp).norm_sqr().max((kr - kq).norm_sqr()).max((kp - kr).norm_sqr());
    if scale == 0.0 {
        return 0.0;
    }
    cross(kq - kp, kr - kp) / scale
}

/// Euclidean in-circle determinant on disk coordinates. Positive iff `s` is
/// strictly inside the circle through the counterclockwise triple
/// `(p, q, r)`. Hyperbolic circles are Euclidean circles in this model, so
/// this is also the hyperbolic predicate.
pub fn in_circle_det(p: DiskPoint, q: DiskPoint, r: DiskPoint, s: DiskPoint) -> f64 {
    let row = |a: DiskPoint| {
        let d = a.z() - s.z();
        (d.re, d.im, d.norm_sqr())
    };
    let (ax, ay, a2) = row(p);
    let (bx, by, b2) = row(q);
    let (cx, cy, c2) = row(r);
    ax * (by * c2 - b2 * cy) - ay * (bx * c2 - b2 * cx) + a2 * (bx * cy - by * cx)
}

pub fn in_circle(p: DiskPoint, q: DiskPoint, r: DiskPoint, s: DiskPoint, tol: f64) -> CircleSide {
    let det = in_circle_det(p, q, r, s);
    if det > tol {
        CircleSide::Inside
    } else if det < -tol {
        CircleSide::Outside
    } else {
        CircleSide::Cocircular
    }
}

/// Whether the geodesic segments `ab` and `cd` cross at a point interior to
/// both.
pub fn segments_cross(a: DiskPoint, b: DiskPoint, c: DiskPoint, d: DiskPoint) -> bool {
    let (ka, kb, kc, kd) = (a.to_klein(), b.to_klein(), c.to_klein(), d.to_klein());
    let eps = 1e-14;
    let o1 = cross(kb - ka, kc - ka);
    let o2 = cross(kb - ka, kd - ka);
    let o3 = cross(kd - kc, ka - kc);
    let o4 = cross(kd - kc, kb - kc);
    ((o1 > eps && o2 < -eps) || (o1 < -eps && o2 > eps)) && ((o3 > eps && o4 < -eps) || (o3 < -eps && o4 > eps))
}

/// Hyperbolic circumcenter of a triangle.
///
/// The center is the timelike direction Minkowski-orthogonal to the
/// differences of the lifted vertices. When that direction is close to
/// lightlike the Euclidean circumcircle is used instead.
pub fn circumcenter(p: DiskPoint, q: DiskPoint, r: DiskPoint, tol: f64) -> Result<DiskPoint> {
    if relative_orientation(p, q, r).abs() <= tol {
        return Err(Error::Collinear);
    }
    let (hp, hq, hr) = (p.to_hyperboloid(), q.to_hyperboloid(), r.to_hyperboloid());
    let u = [hp[0] - hq[0], hp[1] - hq[1], hp[2] - hq[2]];
    let v = [hp[0] - hr[0], hp[1] - hr[1], hp[2] - hr[2]];
    let c = minkowski_cross(u, v);
    let euclid = c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
    let q2 = minkowski(c, c);
    if euclid > 0.0 && -q2 / euclid > 1e-8 {
        return DiskPoint::from_hyperboloid(c);
    }
    circumcenter_from_circle(p, q, r)
}

fn circumcenter_from_circle(p: DiskPoint, q: DiskPoint, r: DiskPoint) -> Result<DiskPoint> {
    let (a, b, c) = (p.z(), q.z(), r.z());
    let d = 2.0 * cross(b - a, c - a);
    if d == 0.0 {
        return Err(Error::Collinear);
    }
    let (b1, c1) = (b - a, c - a);
    let center = a + Complex64::new(
        (c1.im * b1.norm_sqr() - b1.im * c1.norm_sqr()) / d,
        (b1.re * c1.norm_sqr() - c1.re * b1.norm_sqr()) / d,
    );
    let radius = (a - center).norm();
    let m = center.norm();
    if m + radius >= 1.0 {
        return Err(Error::CenterAtInfinity);
    }
    if m == 0.0 {
        return DiskPoint::from_complex(center);
    }
    let u = center / m;
    let near = DiskPoint::from_complex(u * (m - radius))?;
    let far = DiskPoint::from_complex(u * (m + radius))?;
    Ok(near.midpoint(far))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pt(re: f64, im: f64) -> DiskPoint {
        DiskPoint::new(re, im).unwrap()
    }

    fn equilateral(w: f64) -> [DiskPoint; 3] {
        let z = |k: f64| DiskPoint::from_complex(Complex64::from_polar(w, 2.0 * PI * k / 3.0)).unwrap();
        [z(0.0), z(1.0), z(2.0)]
    }

    #[test]
    fn equilateral_circumcenter_is_origin() {
        let [p, q, r] = equilateral(0.5);
        let c = circumcenter(p, q, r, 1e-9).unwrap();
        assert!(c.z().norm() < 1e-12);
    }

    #[test]
    fn circumcenter_is_equidistant() {
        let (p, q, r) = (pt(0.3, 0.0), pt(0.0, 0.3), pt(-0.3, 0.0));
        let c = circumcenter(p, q, r, 1e-9).unwrap();
        let (dp, dq, dr) = (c.dist(p), c.dist(q), c.dist(r));
        assert!((dp - dq).abs() < 1e-12 && (dq - dr).abs() < 1e-12);
        assert!(c.re().abs() < 1e-15);
    }

    #[test]
    fn fallback_route_agrees() {
        let (p, q, r) = (pt(0.1, 0.2), pt(-0.3, 0.25), pt(0.05, -0.3));
        let a = circumcenter(p, q, r, 1e-9).unwrap();
        let b = circumcenter_from_circle(p, q, r).unwrap();
        assert!(a.dist(b) < 1e-10);
    }

    #[test]
    fn collinear_and_ideal_cases() {
        let (p, q, r) = (pt(-0.5, 0.0), pt(0.0, 0.0), pt(0.4, 0.0));
        assert!(matches!(circumcenter(p, q, r, 1e-9), Err(Error::Collinear)));
        // Three points on a horocycle-like arc near the boundary: the equidistant
        // curve is not a circle.
        let (p, q, r) = (pt(0.95, 0.0), pt(0.0, 0.95), pt(-0.95, 0.0));
        assert!(circumcenter(p, q, r, 1e-9).is_ok());
        let (p, q, r) = (pt(0.0, -0.9), pt(0.1, 0.0), pt(0.0, 0.9));
        assert!(matches!(circumcenter(p, q, r, 1e-9), Err(Error::CenterAtInfinity)));
    }

    #[test]
    fn in_circle_basic_cases() {
        let [p, q, r] = equilateral(0.5);
        assert_eq!(in_circle(p, q, r, p, 1e-12), CircleSide::Cocircular);
        assert_eq!(in_circle(p, q, r, DiskPoint::ORIGIN, 1e-12), CircleSide::Inside);
        assert_eq!(in_circle(p, q, r, pt(0.0, 0.9), 1e-12), CircleSide::Outside);
        let s = pt(0.1, 0.05);
        assert!(in_circle_det(p, q, r, s) > 0.0);
        assert!(in_circle_det(q, p, r, s) < 0.0);
    }

    #[test]
    fn orientation_sign() {
        let [p, q, r] = equilateral(0.5);
        assert!(orientation(p, q, r) > 0.0);
        assert!(orientation(q, p, r) < 0.0);
    }

    #[test]
    fn crossing_segments() {
        let (a, b) = (pt(-0.5, 0.0), pt(0.5, 0.0));
        let (c, d) = (pt(0.0, -0.5), pt(0.0, 0.5));
        assert!(segments_cross(a, b, c, d));
        assert!(!segments_cross(a, c, b, d));
        // shared endpoint is not a crossing
        assert!(!segments_cross(a, b, b, d));
    }
}
