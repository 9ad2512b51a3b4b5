use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A point of the hyperbolic plane in the Poincaré disk model.
#[derive(Clone, Copy, PartialEq)]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    pub const ORIGIN: DiskPoint = DiskPoint(Complex64 { re: 0.0, im: 0.0 });

    pub fn new(re: f64, im: f64) -> Result<Self> {
        Self::from_complex(Complex64::new(re, im))
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        if z.re.is_finite() && z.im.is_finite() && z.norm_sqr() < 1.0 {
            Ok(DiskPoint(z))
        } else {
            Err(Error::InvalidPoint { re: z.re, im: z.im })
        }
    }

    /// Wraps a value produced by an isometry. Rounding can push points that
    /// are extremely far out onto the circle; those are pulled back inside.
    pub(crate) fn from_complex_unchecked(z: Complex64) -> Self {
        let n = z.norm_sqr();
        if n < 1.0 {
            DiskPoint(z)
        } else {
            DiskPoint(z * ((1.0 - f64::EPSILON) / n.sqrt()))
        }
    }

    pub fn re(self) -> f64 {
        self.0.re
    }

    pub fn im(self) -> f64 {
        self.0.im
    }

    pub fn z(self) -> Complex64 {
        self.0
    }

    pub fn to_array(self) -> [f64; 2] {
        [self.0.re, self.0.im]
    }

    /// Hyperbolic distance.
    pub fn dist(self, other: DiskPoint) -> f64 {
        let num = (self.0 - other.0).norm();
        if num == 0.0 {
            return 0.0;
        }
        let den = (Complex64::new(1.0, 0.0) - self.0.conj() * other.0).norm();
        2.0 * (num / den).min(1.0 - f64::EPSILON).atanh()
    }

    /// Coordinates in the Beltrami-Klein model, where geodesics are chords.
    pub fn to_klein(self) -> Complex64 {
        self.0 * (2.0 / (1.0 + self.0.norm_sqr()))
    }

    pub fn from_klein(k: Complex64) -> Result<Self> {
        let n = k.norm_sqr();
        if n >= 1.0 || n.is_nan() {
            return Err(Error::InvalidPoint { re: k.re, im: k.im });
        }
        Ok(Self::from_complex_unchecked(k / (1.0 + (1.0 - n).sqrt())))
    }

    /// Lift to the upper sheet of the hyperboloid `-t^2 + x^2 + y^2 = -1`.
    pub fn to_hyperboloid(self) -> [f64; 3] {
        let n = self.0.norm_sqr();
        let s = 1.0 / (1.0 - n);
        [(1.0 + n) * s, 2.0 * self.0.re * s, 2.0 * self.0.im * s]
    }

    /// Projects a timelike vector (either sheet) back to the disk.
    pub fn from_hyperboloid(v: [f64; 3]) -> Result<Self> {
        let q = minkowski(v, v);
        if q >= 0.0 || q.is_nan() {
            return Err(Error::CenterAtInfinity);
        }
        let s = (-q).sqrt() * v[0].signum();
        let (t, x, y) = (v[0] / s, v[1] / s, v[2] / s);
        Ok(Self::from_complex_unchecked(Complex64::new(x, y) / (1.0 + t)))
    }

    /// Hyperbolic midpoint of the segment to `other`.
    pub fn midpoint(self, other: DiskPoint) -> DiskPoint {
        let a = self.to_hyperboloid();
        let b = other.to_hyperboloid();
        let m = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
        // The sum of two future timelike vectors is future timelike.
        Self::from_hyperboloid(m).unwrap_or(self)
    }
}

impl serde::Serialize for DiskPoint {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_array().serialize(serializer)
    }
}

impl fmt::Debug for DiskPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiskPoint({}, {})", self.0.re, self.0.im)
    }
}

/// Minkowski bilinear form of signature (-, +, +).
pub fn minkowski(a: [f64; 3], b: [f64; 3]) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Vector `n` with `minkowski(n, a) = minkowski(n, b) = 0`.
pub fn minkowski_cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    let ja = [-a[0], a[1], a[2]];
    let jb = [-b[0], b[1], b[2]];
    [ja[1] * jb[2] - ja[2] * jb[1], ja[2] * jb[0] - ja[0] * jb[2], ja[0] * jb[1] - ja[1] * jb[0]]
}

/// Hyperbolic distance, free-function form.
pub fn dist(x: DiskPoint, y: DiskPoint) -> f64 {
    x.dist(y)
}
