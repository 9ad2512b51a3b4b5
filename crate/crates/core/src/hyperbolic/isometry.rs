use num_complex::Complex64;

use super::geodesic::Geodesic;
use super::point::DiskPoint;
use crate::error::{Error, Result};

/// Orientation-preserving isometry of the disk,
/// `z -> (a z + b) / (conj(b) z + conj(a))` with `|a|^2 - |b|^2 = 1`.
///
/// The matrix `[[a, b], [conj b, conj a]]` and its negative define the same
/// map; comparisons therefore work up to sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    pub a: Complex64,
    pub b: Complex64,
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry { a: Complex64 { re: 1.0, im: 0.0 }, b: Complex64 { re: 0.0, im: 0.0 } };

    /// Builds and normalizes an isometry.
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        Isometry { a, b }.renormalized()
    }

    pub fn from_array(m: [f64; 4]) -> Result<Self> {
        Self::new(Complex64::new(m[0], m[1]), Complex64::new(m[2], m[3]))
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.a.re, self.a.im, self.b.re, self.b.im]
    }

    pub fn det(self) -> f64 {
        self.a.norm_sqr() - self.b.norm_sqr()
    }

    pub fn renormalized(self) -> Result<Self> {
        let det = self.det();
        if !(det > 0.0 && det.is_finite()) {
            return Err(Error::Renormalization { det });
        }
        let s = det.sqrt().recip();
        Ok(Isometry { a: self.a * s, b: self.b * s })
    }

    /// Rotation about the origin by `theta`.
    pub fn rotation(theta: f64) -> Self {
        Isometry { a: Complex64::from_polar(1.0, theta / 2.0), b: Complex64::new(0.0, 0.0) }
    }

    /// The isometry `u -> (u - z) / (1 - conj(z) u)` sending `z` to the origin.
    pub fn to_origin(z: DiskPoint) -> Self {
        let s = (1.0 - z.z().norm_sqr()).sqrt().recip();
        Isometry { a: Complex64::new(s, 0.0), b: -z.z() * s }
    }

    /// Translation of length `d` along the real diameter, towards `+1`.
    pub fn real_translation(d: f64) -> Self {
        Isometry { a: Complex64::new((d / 2.0).cosh(), 0.0), b: Complex64::new((d / 2.0).sinh(), 0.0) }
    }

    /// The unique isometry with `p0 -> q0` that sends the direction of `p1`
    /// (seen from `p0`) to the direction of `q1` (seen from `q0`). When the
    /// two segments have the same length it maps `p1` onto `q1`.
    pub fn mapping_segment(p0: DiskPoint, p1: DiskPoint, q0: DiskPoint, q1: DiskPoint) -> Self {
        let frame = |x: DiskPoint, y: DiskPoint| {
            let t = Isometry::to_origin(x);
            let dir = t.apply_complex(y.z()).arg();
            Isometry::rotation(-dir).compose(&t)
        };
        let fp = frame(p0, p1);
        let fq = frame(q0, q1);
        fq.inverse().compose(&fp)
    }

    /// `self ∘ other` as a raw matrix product, without renormalizing.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry { a: self.a * other.a + self.b * other.b.conj(), b: self.a * other.b + self.b * other.a.conj() }
    }

    pub fn inverse(&self) -> Isometry {
        Isometry { a: self.a.conj(), b: -self.b }
    }

    pub fn apply_complex(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.b.conj() * z + self.a.conj())
    }

    pub fn apply(&self, x: DiskPoint) -> DiskPoint {
        DiskPoint::from_complex_unchecked(self.apply_complex(x.z()))
    }

    /// Distance of the matrix to `+I` or `-I`, whichever is closer.
    pub fn distance_to_identity(&self) -> f64 {
        let plus = (self.a - 1.0).norm() + self.b.norm();
        let minus = (self.a + 1.0).norm() + self.b.norm();
        plus.min(minus)
    }

    /// Matrix comparison up to sign.
    pub fn approx_eq(&self, other: &Isometry, tol: f64) -> bool {
        self.compose(&other.inverse()).distance_to_identity() <= tol
    }

    pub fn is_hyperbolic(&self, tol: f64) -> bool {
        self.a.re.abs() > 1.0 + tol
    }

    /// Translation length, zero for elliptic and parabolic elements.
    pub fn translation_length(&self) -> f64 {
        2.0 * self.a.re.abs().max(1.0).acosh()
    }

    /// Axis of a hyperbolic isometry, oriented from the repelling to the
    /// attracting fixed point.
    pub fn axis(&self, tol: f64) -> Result<Geodesic> {
        let g = self.renormalized()?;
        if !g.is_hyperbolic(tol) {
            return Err(Error::EllipticOrParabolic { re_a: g.a.re });
        }
        // Roots of conj(b) z^2 + (conj(a) - a) z - b = 0.
        let s = (g.a.re * g.a.re - 1.0).sqrt() * g.a.re.signum();
        let bc = g.b.conj();
        let i_im = Complex64::new(0.0, g.a.im);
        let attracting = (i_im + s) / bc;
        let repelling = (i_im - s) / bc;
        Geodesic::new(repelling, attracting)
    }
}
