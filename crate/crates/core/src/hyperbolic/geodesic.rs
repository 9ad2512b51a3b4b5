use num_complex::Complex64;

use super::isometry::Isometry;
use super::point::{minkowski, minkowski_cross, DiskPoint};
use crate::error::{Error, Result};

const ENDPOINT_TOL: f64 = 1e-12;

/// A complete geodesic, given by its two ideal endpoints on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geodesic {
    pub p: Complex64,
    pub q: Complex64,
}

impl Geodesic {
    pub fn new(p: Complex64, q: Complex64) -> Result<Self> {
        if (p.norm() - 1.0).abs() > 1e-9 || (q.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidPoint { re: p.re, im: p.im });
        }
        let (p, q) = (p / p.norm(), q / q.norm());
        if (p - q).norm() < ENDPOINT_TOL {
            return Err(Error::Identical);
        }
        Ok(Geodesic { p, q })
    }

    /// The geodesic through two distinct points, oriented from `x` to `y`.
    pub fn through(x: DiskPoint, y: DiskPoint) -> Result<Self> {
        let t = Isometry::to_origin(x);
        let w = t.apply_complex(y.z());
        if w.norm() == 0.0 {
            return Err(Error::Identical);
        }
        let u = w / w.norm();
        let back = t.inverse();
        Geodesic::new(back.apply_complex(-u), back.apply_complex(u))
    }

    pub fn same_endpoints(&self, other: &Geodesic, tol: f64) -> bool {
        let direct = (self.p - other.p).norm() < tol && (self.q - other.q).norm() < tol;
        let swapped = (self.p - other.q).norm() < tol && (self.q - other.p).norm() < tol;
        direct || swapped
    }

    /// Normal of the plane through the origin cutting the hyperboloid along
    /// this geodesic.
    fn normal(&self) -> [f64; 3] {
        let lift = |e: Complex64| [1.0, e.re, e.im];
        minkowski_cross(lift(self.p), lift(self.q))
    }

    /// Hyperbolic distance from a point to this geodesic.
    pub fn distance_to(&self, x: DiskPoint) -> f64 {
        let n = self.normal();
        let nn = minkowski(n, n).sqrt();
        (minkowski(x.to_hyperboloid(), n).abs() / nn).asinh()
    }

    /// Whether the endpoints of `other` separate the endpoints of `self`.
    pub fn crosses(&self, other: &Geodesic) -> bool {
        let side = |z: Complex64| {
            let d = self.q - self.p;
            let w = z - self.p;
            d.re * w.im - d.im * w.re
        };
        side(other.p) * side(other.q) < 0.0
    }

    /// Unique point where two crossing geodesics meet.
    pub fn intersection(&self, other: &Geodesic) -> Result<DiskPoint> {
        if self.same_endpoints(other, ENDPOINT_TOL) {
            return Err(Error::Identical);
        }
        if !self.crosses(other) {
            return Err(Error::Disjoint);
        }
        // Geodesics are straight chords in the Klein model, and ideal points
        // keep their coordinates there.
        let d1 = self.q - self.p;
        let d2 = other.q - other.p;
        let denom = d1.re * d2.im - d1.im * d2.re;
        if denom.abs() < 1e-300 {
            return Err(Error::Disjoint);
        }
        let w = other.p - self.p;
        let s = (w.re * d2.im - w.im * d2.re) / denom;
        DiskPoint::from_klein(self.p + d1 * s)
    }
}

/// Free-function form of [`Geodesic::intersection`].
pub fn geodesic_intersection(a: &Geodesic, b: &Geodesic) -> Result<DiskPoint> {
    a.intersection(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn diameter(theta: f64) -> Geodesic {
        Geodesic::new(Complex64::from_polar(1.0, theta + PI), Complex64::from_polar(1.0, theta)).unwrap()
    }

    #[test]
    fn diameters_meet_at_the_center() {
        let x = diameter(0.0).intersection(&diameter(PI / 2.0)).unwrap();
        assert!(x.z().norm() < 1e-15);
        let y = diameter(0.0).intersection(&diameter(PI / 3.0)).unwrap();
        assert!(y.z().norm() < 1e-15);
    }

    #[test]
    fn intersection_is_symmetric_and_on_both() {
        let a = Geodesic::new(Complex64::from_polar(1.0, 0.3), Complex64::from_polar(1.0, 2.5)).unwrap();
        let b = Geodesic::new(Complex64::from_polar(1.0, 1.1), Complex64::from_polar(1.0, 4.0)).unwrap();
        let x = a.intersection(&b).unwrap();
        let y = b.intersection(&a).unwrap();
        assert!((x.z() - y.z()).norm() < 1e-14);
        assert!(a.distance_to(x) < 1e-12);
        assert!(b.distance_to(x) < 1e-12);
    }

    #[test]
    fn disjoint_and_identical() {
        let a = Geodesic::new(Complex64::from_polar(1.0, 0.0), Complex64::from_polar(1.0, 1.0)).unwrap();
        let b = Geodesic::new(Complex64::from_polar(1.0, 2.0), Complex64::from_polar(1.0, 3.0)).unwrap();
        assert!(matches!(a.intersection(&b), Err(Error::Disjoint)));
        let rev = Geodesic::new(a.q, a.p).unwrap();
        assert!(matches!(a.intersection(&rev), Err(Error::Identical)));
    }

    #[test]
    fn geodesic_through_points_contains_them() {
        let x = DiskPoint::new(0.2, 0.5).unwrap();
        let y = DiskPoint::new(-0.6, 0.1).unwrap();
        let g = Geodesic::through(x, y).unwrap();
        assert!(g.distance_to(x) < 1e-12);
        assert!(g.distance_to(y) < 1e-12);
        assert!(g.distance_to(DiskPoint::ORIGIN) > 0.1);
    }

    #[test]
    fn distance_to_a_diameter() {
        // The point tanh(d/2) i is at distance d from the real diameter.
        let d: f64 = 0.8;
        let x = DiskPoint::new(0.0, (d / 2.0).tanh()).unwrap();
        assert!((diameter(0.0).distance_to(x) - d).abs() < 1e-12);
    }
}
