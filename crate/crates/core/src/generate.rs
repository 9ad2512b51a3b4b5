//! Surface generators used as fixtures: the regular `4g`-gon with opposite
//! sides identified, random deformations of it, and side subdivisions that
//! add vertex orbits.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hyperbolic::{corner_angle, DiskPoint, Isometry};
use crate::input::{PairingSpec, PolygonInput};
use crate::map::FundamentalPolygon;
use crate::tolerance::Tolerances;

fn regular_vertices(sides: usize, r: f64) -> Vec<DiskPoint> {
    (0..sides)
        .map(|k| DiskPoint::from_complex(Complex64::from_polar(r, TAU * k as f64 / sides as f64)).expect("r < 1"))
        .collect()
}

/// Interior angle of the regular polygon with `sides` vertices at Euclidean
/// radius `r`.
pub fn regular_angle(sides: usize, r: f64) -> f64 {
    let v = regular_vertices(3.max(sides), r);
    corner_angle(v[sides - 1], v[0], v[1])
}

/// Euclidean circumradius of the regular `4g`-gon whose angles sum to `2π`.
pub fn regular_radius(genus: usize) -> Result<f64> {
    let sides = 4 * genus;
    let target = TAU / sides as f64;
    let (mut lo, mut hi) = (1e-6, 1.0 - 1e-12);
    if !(regular_angle(sides, lo) > target && regular_angle(sides, hi) < target) {
        return Err(Error::BisectionFailure);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if regular_angle(sides, mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn opposite_pairings(genus: usize) -> Vec<PairingSpec> {
    (0..2 * genus).map(|k| PairingSpec::Pair([k, k + 2 * genus])).collect()
}

fn with_generators(raw: PolygonInput) -> Result<PolygonInput> {
    Ok(FundamentalPolygon::build(&raw, &Tolerances::default())?.to_input())
}

/// The regular `4g`-gon with side `k` paired to side `k + 2g`.
pub fn regular(genus: usize) -> Result<PolygonInput> {
    if genus < 2 {
        return Err(Error::Degenerate { sides: 4 * genus, reason: "genus must be at least 2".into() });
    }
    let r = regular_radius(genus)?;
    let raw = PolygonInput {
        vertices: regular_vertices(4 * genus, r).iter().map(|v| v.to_array()).collect(),
        pairings: opposite_pairings(genus),
        generators: None,
    };
    with_generators(raw)
}

/// Paired side length differences and the angle sum defect of a `4g`-gon
/// with opposite sides paired; all zero exactly for valid polygons.
fn constraints(x: &[f64], genus: usize) -> Result<DVector<f64>> {
    let sides = 4 * genus;
    let pts = (0..sides).map(|k| DiskPoint::new(x[2 * k], x[2 * k + 1])).collect::<Result<Vec<_>>>()?;
    let len = |k: usize| pts[k].dist(pts[(k + 1) % sides]);
    let mut c = DVector::zeros(2 * genus + 1);
    for k in 0..2 * genus {
        c[k] = len(k) - len(k + 2 * genus);
    }
    let sum: f64 = (0..sides).map(|k| corner_angle(pts[(k + sides - 1) % sides], pts[k], pts[(k + 1) % sides])).sum();
    c[2 * genus] = sum - TAU;
    Ok(c)
}

/// A random deformation of the regular `4g`-gon, projected back onto the
/// polygons with equal paired lengths and angle sum `2π` by Gauss-Newton
/// steps of minimal norm.
pub fn perturbed(genus: usize, seed: u64) -> Result<PolygonInput> {
    let sides = 4 * genus;
    let radius = 2.0 * regular_radius(genus)?.atanh();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Jitter the hyperbolic radius and the polar angle of each vertex.
    let mut x = Vec::with_capacity(2 * sides);
    for k in 0..sides {
        let r = radius * (1.0 + rng.gen_range(-0.04..0.04));
        let theta = (k as f64 + rng.gen_range(-0.15..0.15)) * TAU / sides as f64;
        let z = Complex64::from_polar((r / 2.0).tanh(), theta);
        x.extend([z.re, z.im]);
    }
    let h = 1e-7;
    let mut converged = false;
    for _ in 0..60 {
        let c = constraints(&x, genus)?;
        if c.amax() < 1e-14 {
            converged = true;
            break;
        }
        let mut jac = DMatrix::zeros(c.len(), x.len());
        for j in 0..x.len() {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += h;
            xm[j] -= h;
            let d = (constraints(&xp, genus)? - constraints(&xm, genus)?) / (2.0 * h);
            jac.set_column(j, &d);
        }
        let normal = &jac * jac.transpose();
        let lambda = normal
            .lu()
            .solve(&c)
            .ok_or_else(|| Error::Degenerate { sides: 4 * genus, reason: "singular constraint Jacobian".into() })?;
        let step = jac.transpose() * lambda;
        // Halve the step until the polygon stays in the disk and the
        // residual shrinks.
        let mut scale = 1.0;
        loop {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(xi, s)| xi - scale * s).collect();
            match constraints(&trial, genus) {
                Ok(ct) if ct.amax() < c.amax() || scale < 1e-6 => {
                    x = trial;
                    break;
                }
                _ if scale < 1e-6 => {
                    return Err(Error::Degenerate { sides: 4 * genus, reason: "projection left the disk".into() })
                }
                _ => scale *= 0.5,
            }
        }
    }
    if !converged && constraints(&x, genus)?.amax() > 1e-12 {
        return Err(Error::Degenerate { sides: 4 * genus, reason: "projection did not converge".into() });
    }
    let raw = PolygonInput {
        vertices: x.chunks(2).map(|p| [p[0], p[1]]).collect(),
        pairings: opposite_pairings(genus),
        generators: None,
    };
    with_generators(raw)
}

/// Splits side `side` at fraction `t` and its partner at the corresponding
/// point. The two new vertices have angle `π` and form a new orbit, so the
/// result has one more pair and one more vertex orbit.
pub fn subdivide(raw: &PolygonInput, side: usize, t: f64) -> Result<PolygonInput> {
    let map = FundamentalPolygon::build(raw, &Tolerances::default())?;
    let sides = map.side_count();
    let (i, j) = {
        let p = map.edges()[side % sides].pair;
        (side % sides, p)
    };
    let onto_i = map.onto_self(i).resolved();
    let (a, b) = (map.vertex(i), map.vertex(i + 1));
    let to_a = Isometry::to_origin(a);
    let far = to_a.apply(b);
    let r = (t * far.dist(DiskPoint::ORIGIN) / 2.0).tanh();
    let p_i = to_a.inverse().apply(DiskPoint::from_complex(far.z() / far.z().norm() * r)?);
    let p_j = onto_i.inverse().apply(p_i);

    let mut vertices = Vec::with_capacity(sides + 2);
    let mut new_index = Vec::with_capacity(sides);
    for k in 0..sides {
        new_index.push(vertices.len());
        vertices.push(map.vertex(k).to_array());
        if k == i {
            vertices.push(p_i.to_array());
        } else if k == j {
            vertices.push(p_j.to_array());
        }
    }
    // Old side k starts at new vertex new_index[k]; split sides become two.
    let mut pairings = Vec::new();
    for &r in map.representatives() {
        let p = map.edges()[r].pair;
        if r == i.min(j) {
            let (lo, hi) = (new_index[r], new_index[p]);
            pairings.push(PairingSpec::Pair([lo, hi + 1]));
            pairings.push(PairingSpec::Pair([lo + 1, hi]));
        } else {
            pairings.push(PairingSpec::Pair([new_index[r], new_index[p]]));
        }
    }
    with_generators(PolygonInput { vertices, pairings, generators: None })
}
