//! Geodesic embedding of the system of loops: the basepoint is moved to the
//! intersection of the axes of two loops crossing once, after which the
//! loops become geodesic and cut out a convex fundamental polygon.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperbolic::{DiskPoint, Geodesic, HyperbolicPolygon, Isometry};
use crate::loops::{SidePairing, TopologicalPolygon};
use crate::map::{End, Gluing};
use crate::tolerance::Tolerances;
use crate::word::{same_element, Word};

/// Whether the two occurrences of `y` in the cyclic sequence are separated
/// by the two occurrences of `x`.
pub fn interleaves(seq: &[usize], x: usize, y: usize) -> bool {
    let xs: Vec<usize> = (0..seq.len()).filter(|&i| seq[i] == x).collect();
    if xs.len() != 2 {
        return false;
    }
    let between = seq[xs[0] + 1..xs[1]].iter().filter(|&&s| s == y).count();
    let total = seq.iter().filter(|&&s| s == y).count();
    total == 2 && between == 1
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossingPair {
    /// Pairing indices of the two loops.
    pub first: usize,
    pub second: usize,
    /// Loop labels (pairing indices) around the basepoint, counterclockwise.
    pub ends: Vec<usize>,
    /// Translations along the lifts through the basepoint.
    pub g0: Word,
    pub g1: Word,
}

fn pairing_of(p: &TopologicalPolygon) -> Vec<usize> {
    let mut of = vec![0; p.side_count()];
    for (i, pr) in p.pairings.iter().enumerate() {
        of[pr.side] = i;
        of[pr.partner] = i;
    }
    of
}

/// Picks the loop through side 0 and the first loop crossing it.
pub fn choose_crossing_pair(p: &TopologicalPolygon, tol: &Tolerances) -> Result<CrossingPair> {
    let of = pairing_of(p);
    let star = p.gluing.star(0, End::Source)?;
    let outgoing: Vec<_> = star.outgoing().collect();
    let ends: Vec<usize> = outgoing.iter().map(|s| of[s.edge]).collect();
    let first = of[0];
    let second = (0..p.pairings.len())
        .find(|&j| j != first && interleaves(&ends, first, j))
        .ok_or(Error::NoCrossingLoop(first))?;
    let n = p.side_count();
    let translation = |entry: &crate::map::StarEntry| -> Result<Word> {
        // The lift `u · side` starts at the basepoint, so `u · t_side = id`.
        let u = &entry.word;
        if u.resolved().apply(p.vertices[entry.edge]).dist(p.basepoint) > tol.geom {
            return Err(Error::WordMismatch(format!("star entry of side {} is not at the basepoint", entry.edge)));
        }
        Ok(u.compose(&p.table[(entry.edge + 1) % n]))
    };
    let g0 = translation(outgoing[0])?;
    let entry = outgoing.iter().find(|s| of[s.edge] == second).expect("interleaving loop occurs");
    let g1 = translation(entry)?;
    Ok(CrossingPair { first, second, ends, g0, g1 })
}

/// Intersection of the axes of `g0` and `g1`, and its distance to the old
/// basepoint.
pub fn relocate_basepoint(p: &TopologicalPolygon, pair: &CrossingPair, tol: &Tolerances) -> Result<(DiskPoint, f64)> {
    let a0 = pair.g0.resolved().axis(tol.norm)?;
    let a1 = pair.g1.resolved().axis(tol.norm)?;
    let b = a0.intersection(&a1)?;
    Ok((b, p.basepoint.dist(b)))
}

/// The convex polygon cut out by the geodesic loops at the new basepoint.
/// Vertex `k` is `table[k] · basepoint`.
#[derive(Debug, Clone, Serialize)]
pub struct ConvexPolygon {
    pub basepoint: DiskPoint,
    pub vertices: Vec<DiskPoint>,
    pub table: Vec<Word>,
    pub pairings: Vec<SidePairing>,
    #[serde(skip)]
    pub gluing: Gluing,
    #[serde(skip)]
    pub polygon: HyperbolicPolygon,
    pub crossing: (usize, usize),
    pub l0: f64,
    pub c_len: f64,
    /// Chord lengths of the topological polygon, per side.
    pub loop_lengths: Vec<f64>,
    pub side_lengths: Vec<f64>,
    pub angles: Vec<f64>,
    pub area: f64,
}

impl ConvexPolygon {
    pub fn side_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn genus(&self) -> usize {
        self.vertices.len() / 4
    }

    pub fn angle_sum(&self) -> f64 {
        self.angles.iter().sum()
    }

    /// `c_len / L0`; below 2 by the bound on the basepoint move.
    pub fn basepoint_ratio(&self) -> f64 {
        if self.l0 == 0.0 {
            0.0
        } else {
            self.c_len / self.l0
        }
    }

    /// Smallest slack in `length(side) <= loop length + 2 c_len`.
    pub fn length_bound_slack(&self) -> f64 {
        self.side_lengths
            .iter()
            .zip(&self.loop_lengths)
            .map(|(l, l0)| l0 + 2.0 * self.c_len - l)
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn build_convex_polygon(
    p: &TopologicalPolygon,
    pair: &CrossingPair,
    basepoint: DiskPoint,
    c_len: f64,
    tol: &Tolerances,
) -> Result<ConvexPolygon> {
    let loop_lengths: Vec<f64> = (0..p.side_count()).map(|k| p.chord_length(k)).collect();
    let side_of = |i: usize| p.pairings[i].side;
    let l0 = loop_lengths[side_of(pair.first)].max(loop_lengths[side_of(pair.second)]);
    if c_len >= 2.0 * l0 {
        return Err(Error::BasepointBound { c_len, bound: 2.0 * l0 });
    }
    let vertices: Vec<DiskPoint> = p.table.iter().map(|w| w.resolved().apply(basepoint)).collect();
    let polygon = HyperbolicPolygon::new(vertices.clone())?;
    let angles = polygon.interior_angles(0.0);
    for (k, &a) in angles.iter().enumerate() {
        if a >= PI - tol.angle {
            return Err(Error::NotConvex { vertex: k, angle: a });
        }
    }
    if let Some((i, j)) = polygon.find_crossing() {
        return Err(Error::SelfIntersecting(i, j));
    }
    let area = polygon.area(0.0)?;
    Ok(ConvexPolygon {
        basepoint,
        side_lengths: polygon.side_lengths(),
        vertices,
        table: p.table.clone(),
        pairings: p.pairings.clone(),
        gluing: p.gluing.clone(),
        polygon,
        crossing: (pair.first, pair.second),
        l0,
        c_len,
        loop_lengths,
        angles,
        area,
    })
}

/// Crossing pair, basepoint relocation and convex polygon in one call.
pub fn embed(p: &TopologicalPolygon, tol: &Tolerances) -> Result<ConvexPolygon> {
    let pair = choose_crossing_pair(p, tol)?;
    let (b, c_len) = relocate_basepoint(p, &pair, tol)?;
    build_convex_polygon(p, &pair, b, c_len, tol)
}

/// Finds words for group elements by walking through the tiling by copies
/// of a convex fundamental polygon.
#[derive(Debug, Clone)]
pub struct TilingReducer {
    klein: Vec<Complex64>,
    onto_self: Vec<Word>,
    generators: Vec<Isometry>,
    reference: DiskPoint,
    min_displacement: f64,
    cap: usize,
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

impl TilingReducer {
    pub fn new(polygon: &ConvexPolygon, generators: &[Isometry]) -> Self {
        let klein: Vec<Complex64> = polygon.vertices.iter().map(|v| v.to_klein()).collect();
        let n = klein.len();
        let centroid = klein.iter().sum::<Complex64>() / n as f64;
        let inradius = (0..n)
            .map(|i| {
                let d = klein[(i + 1) % n] - klein[i];
                cross(d, centroid - klein[i]) / d.norm()
            })
            .fold(f64::INFINITY, f64::min);
        // Off every symmetry line of the polygon, so walks avoid vertices.
        let nudge = Complex64::new(0.1377, 0.0613) * inradius;
        let reference = DiskPoint::from_klein(centroid + nudge).expect("interior point");
        // Any nontrivial element moves the reference out of the tile.
        let min_displacement = (0..n)
            .map(|i| {
                let (p, q) = (polygon.vertices[i], polygon.vertices[(i + 1) % n]);
                2.0 * Geodesic::through(p, q).map_or(f64::INFINITY, |g| g.distance_to(reference))
            })
            .fold(f64::INFINITY, f64::min);
        TilingReducer {
            klein,
            onto_self: polygon.gluing_words(),
            generators: generators.to_vec(),
            reference,
            min_displacement,
            cap: 100_000,
        }
    }

    pub fn reference(&self) -> DiskPoint {
        self.reference
    }

    /// Walks along the segment from the reference point to `target(g⁻¹)`,
    /// which must give the target in the frame of tile `g`.
    fn walk(&self, target: impl Fn(&Isometry) -> DiskPoint) -> Result<Word> {
        let n = self.klein.len();
        let mut g = Word::identity();
        for _ in 0..self.cap {
            let inv = g.resolved().inverse();
            let a = inv.apply(self.reference).to_klein();
            let b = target(&inv).to_klein();
            let mut exit = None;
            let mut t_exit = 1.0;
            for i in 0..n {
                let (p, q) = (self.klein[i], self.klein[(i + 1) % n]);
                let d = q - p;
                let fa = cross(d, a - p);
                let fb = cross(d, b - p);
                if fb < fa && fb < 0.0 {
                    let t = fa / (fa - fb);
                    if t < t_exit {
                        t_exit = t;
                        exit = Some(i);
                    }
                }
            }
            match exit {
                None => return Ok(g.refreshed(&self.generators)),
                Some(side) => g = g.compose(&self.onto_self[side]),
            }
        }
        Err(Error::TilingWalk(self.cap))
    }

    /// A word `g` whose tile `g · P` contains `y`.
    pub fn locate(&self, y: DiskPoint) -> Result<Word> {
        self.walk(|inv| inv.apply(y))
    }

    /// The canonical word of the group element `sigma`.
    ///
    /// Two words for one element differ by a conjugate of the relator error,
    /// which grows with the square of the matrix entries. The walk is
    /// accepted when the residual `w⁻¹ σ` moves the reference point far less
    /// than any nontrivial deck transformation does.
    pub fn reduce(&self, sigma: &Isometry, tol: &Tolerances) -> Result<Word> {
        let z = self.reference;
        let w = self.walk(|inv| inv.compose(sigma).apply(z))?;
        if same_element(w.resolved(), sigma, tol.norm.max(1e-10)) {
            return Ok(w);
        }
        let residual = w.resolved().inverse().compose(sigma);
        if residual.apply(z).dist(z) <= self.min_displacement * 1e-3 {
            return Ok(w);
        }
        Err(Error::WordMismatch(format!("tiling walk reached {w}, not the requested element")))
    }
}

impl ConvexPolygon {
    /// Per side, the word mapping the partner side onto it.
    pub fn gluing_words(&self) -> Vec<Word> {
        (0..self.side_count()).map(|k| self.gluing.onto_self(k).clone()).collect()
    }

    /// Sum of angles over the single vertex orbit, minus `2π`.
    pub fn angle_defect(&self) -> f64 {
        self.angle_sum() - TAU
    }
}
