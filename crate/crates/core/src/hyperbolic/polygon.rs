use std::f64::consts::{PI, TAU};

use super::isometry::Isometry;
use super::point::DiskPoint;
use super::predicates::segments_cross;
use crate::error::{Error, Result};

/// Angle at `v` swept counterclockwise from the geodesic towards `next` to
/// the geodesic towards `prev`, in `(0, 2π)`.
pub fn corner_angle(prev: DiskPoint, v: DiskPoint, next: DiskPoint) -> f64 {
    // Moving `v` to the origin turns both geodesics into rays; the map has a
    // positive real derivative at `v`, so directions are preserved.
    let t = Isometry::to_origin(v);
    let a = t.apply_complex(prev.z());
    let b = t.apply_complex(next.z());
    let mut angle = (a * b.conj()).arg();
    if angle <= 0.0 {
        angle += TAU;
    }
    angle
}

/// Direction (argument) at `from` of the geodesic towards `to`.
pub fn direction(from: DiskPoint, to: DiskPoint) -> f64 {
    Isometry::to_origin(from).apply_complex(to.z()).arg()
}

/// A geodesic polygon, vertices in counterclockwise order.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicPolygon {
    vertices: Vec<DiskPoint>,
}

impl HyperbolicPolygon {
    pub fn new(vertices: Vec<DiskPoint>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::Degenerate { sides: n, reason: "fewer than three vertices".into() });
        }
        for i in 0..n {
            if vertices[i].dist(vertices[(i + 1) % n]) == 0.0 {
                return Err(Error::RepeatedVertex(i));
            }
        }
        let poly = HyperbolicPolygon { vertices };
        if poly.klein_signed_area() <= 0.0 {
            return Err(Error::NotCounterclockwise);
        }
        Ok(poly)
    }

    pub fn vertices(&self) -> &[DiskPoint] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn vertex(&self, i: usize) -> DiskPoint {
        self.vertices[i % self.vertices.len()]
    }

    /// Signed area of the straight polygon in the Klein model; its sign is
    /// the orientation of the hyperbolic polygon.
    pub fn klein_signed_area(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                let a = self.vertex(i).to_klein();
                let b = self.vertex(i + 1).to_klein();
                a.re * b.im - a.im * b.re
            })
            .sum::<f64>()
            / 2.0
    }

    pub fn side_lengths(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.vertex(i).dist(self.vertex(i + 1))).collect()
    }

    pub fn perimeter(&self) -> f64 {
        self.side_lengths().iter().sum()
    }

    /// Interior angles, clamped to `[tol, 2π - tol]`.
    pub fn interior_angles(&self, tol: f64) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let angle = corner_angle(self.vertex(i + n - 1), self.vertex(i), self.vertex(i + 1));
                angle.clamp(tol, TAU - tol)
            })
            .collect()
    }

    /// First pair of non-adjacent sides that cross, if any.
    pub fn find_crossing(&self) -> Option<(usize, usize)> {
        let n = self.len();
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                if segments_cross(self.vertex(i), self.vertex(i + 1), self.vertex(j), self.vertex(j + 1)) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Area by the angle defect `(n - 2)π - Σ angles`.
    pub fn area(&self, tol: f64) -> Result<f64> {
        if let Some((i, j)) = self.find_crossing() {
            return Err(Error::SelfIntersecting(i, j));
        }
        let sum: f64 = self.interior_angles(tol).iter().sum();
        Ok((self.len() as f64 - 2.0) * PI - sum)
    }

    pub fn is_convex(&self, tol: f64) -> bool {
        self.interior_angles(tol).iter().all(|&a| a < PI - tol)
    }

    /// Whether `x` lies in the closed polygon (convex polygons only).
    pub fn contains_convex(&self, x: DiskPoint, tol: f64) -> bool {
        let k = x.to_klein();
        (0..self.len()).all(|i| {
            let a = self.vertex(i).to_klein();
            let b = self.vertex(i + 1).to_klein();
            let d = b - a;
            let w = k - a;
            (d.re * w.im - d.im * w.re) / d.norm() >= -tol
        })
    }
}

/// Area of a polygon given by its vertices.
pub fn polygon_area(p: &HyperbolicPolygon, tol: f64) -> Result<f64> {
    p.area(tol)
}

/// Interior angles of a polygon given by its vertices.
pub fn interior_angles(p: &HyperbolicPolygon, tol: f64) -> Vec<f64> {
    p.interior_angles(tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn regular(n: usize, r: f64) -> HyperbolicPolygon {
        let v = (0..n)
            .map(|k| DiskPoint::from_complex(Complex64::from_polar(r, TAU * k as f64 / n as f64)).unwrap())
            .collect();
        HyperbolicPolygon::new(v).unwrap()
    }

    #[test]
    fn regular_octagon_with_eighth_pi_corners() {
        // cosh R = cot²(π/8) gives interior angle π/4; the Euclidean radius
        // is tanh(R/2) = 2^(-1/4).
        let oct = regular(8, 2f64.powf(-0.25));
        for a in oct.interior_angles(1e-9) {
            assert!((a - PI / 4.0).abs() < 1e-12, "angle {a}");
        }
        assert!((oct.area(1e-9).unwrap() - 4.0 * PI).abs() < 1e-11);
    }

    #[test]
    fn small_triangles_have_small_area() {
        let mut last = f64::INFINITY;
        for r in [0.1, 0.01, 0.001] {
            let a = regular(3, r).area(1e-15).unwrap();
            // Euclidean area in the metric 4|dz|²/(1-|z|²)² is ≈ 4 * (3√3/4) r².
            let euclid = 3.0 * 3f64.sqrt() * r * r;
            assert!(a < last && (a / euclid - 1.0).abs() < 0.05);
            last = a;
        }
    }

    #[test]
    fn chord_split_is_additive() {
        let hex = regular(6, 0.6);
        let v = hex.vertices();
        let left = HyperbolicPolygon::new(vec![v[0], v[1], v[2], v[3]]).unwrap();
        let right = HyperbolicPolygon::new(vec![v[3], v[4], v[5], v[0]]).unwrap();
        let total = hex.area(1e-12).unwrap();
        let sum = left.area(1e-12).unwrap() + right.area(1e-12).unwrap();
        assert!((total - sum).abs() < 1e-12);
    }

    #[test]
    fn detects_orientation_and_self_intersection() {
        let v: Vec<_> = regular(4, 0.5).vertices().iter().rev().copied().collect();
        assert!(matches!(HyperbolicPolygon::new(v), Err(Error::NotCounterclockwise)));
        let p = |re, im| DiskPoint::new(re, im).unwrap();
        // A bow-tie with positive net Klein area.
        let bow = HyperbolicPolygon::new(vec![p(-0.5, -0.5), p(0.5, -0.5), p(-0.2, 0.5), p(0.5, 0.3), p(-0.6, 0.4)]);
        if let Ok(bow) = bow {
            assert!(matches!(bow.area(1e-9), Err(Error::SelfIntersecting(..))));
        }
    }

    #[test]
    fn convex_containment() {
        let sq = regular(4, 0.5);
        assert!(sq.contains_convex(DiskPoint::ORIGIN, 0.0));
        assert!(!sq.contains_convex(DiskPoint::new(0.45, 0.45).unwrap(), 0.0));
        assert!(sq.is_convex(1e-9));
    }
}
