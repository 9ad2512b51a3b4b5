//! One-vertex triangulations of the surface and the Delaunay flip
//! algorithm.
//!
//! Every triangle keeps a lift to the disk whose corners are `w · b`, for a
//! single basepoint `b` and canonical words `w`. The holonomy across an edge
//! is not stored: it is recovered from the corner words of the two lifts.

use std::collections::VecDeque;
use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::embed::{ConvexPolygon, TilingReducer};
use crate::error::{Error, Result};
use crate::hyperbolic::{corner_angle, in_circle_det, orientation, DiskPoint, HyperbolicPolygon, Isometry};
use crate::tolerance::Tolerances;
use crate::word::Word;

pub const DEFAULT_FLIP_CAP: usize = 10_000_000;

/// Half-edge `(triangle, index)`: from corner `index` to corner `index + 1`.
pub type HalfEdge = (usize, usize);

#[derive(Debug, Clone, Serialize)]
pub struct Triangle {
    pub corners: [Word; 3],
    pub points: [DiskPoint; 3],
    pub twins: [HalfEdge; 3],
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct FlipStats {
    pub flips: usize,
    pub max_queue: usize,
}

#[derive(Debug, Clone)]
pub struct SurfaceTriangulation {
    triangles: Vec<Triangle>,
    base: DiskPoint,
    reducer: TilingReducer,
    tol: Tolerances,
    flips: usize,
}

fn klein_centroid(p: &[DiskPoint; 3]) -> DiskPoint {
    let k: Complex64 = p.iter().map(|x| x.to_klein()).sum::<Complex64>() / 3.0;
    DiskPoint::from_klein(k).unwrap_or(p[0])
}

impl SurfaceTriangulation {
    /// Fan triangulation of the convex polygon from its vertex 0, with
    /// boundary edges glued by the side pairings.
    pub fn fan(polygon: &ConvexPolygon, generators: &[Isometry], tol: &Tolerances) -> Result<Self> {
        let n = polygon.side_count();
        let reducer = TilingReducer::new(polygon, generators);
        let words = polygon.table.iter().map(|w| reducer.reduce(w.resolved(), tol)).collect::<Result<Vec<_>>>()?;
        let f = n - 2;
        let boundary = |s: usize| -> HalfEdge {
            if s == 0 {
                (0, 0)
            } else if s == n - 1 {
                (f - 1, 2)
            } else {
                (s - 1, 1)
            }
        };
        let mut triangles = Vec::with_capacity(f);
        for k in 0..f {
            let idx = [0, k + 1, k + 2];
            let corners = idx.map(|i| words[i].clone());
            let points = idx.map(|i| words[i].resolved().apply(polygon.basepoint));
            let first = if k == 0 { boundary(polygon.gluing.pair(0)) } else { (k - 1, 2) };
            let last = if k == f - 1 { boundary(polygon.gluing.pair(n - 1)) } else { (k + 1, 0) };
            let twins = [first, boundary(polygon.gluing.pair(k + 1)), last];
            triangles.push(Triangle { corners, points, twins });
        }
        let t = SurfaceTriangulation { triangles, base: polygon.basepoint, reducer, tol: *tol, flips: 0 };
        for tri in &t.triangles {
            if orientation(tri.points[0], tri.points[1], tri.points[2]) <= 0.0 {
                return Err(Error::NotConvex { vertex: 0, angle: 0.0 });
            }
        }
        Ok(t)
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn basepoint(&self) -> DiskPoint {
        self.base
    }

    pub fn reducer(&self) -> &TilingReducer {
        &self.reducer
    }

    pub fn flip_count(&self) -> usize {
        self.flips
    }

    pub fn twin(&self, h: HalfEdge) -> HalfEdge {
        self.triangles[h.0].twins[h.1]
    }

    fn half_edge_id(h: HalfEdge) -> usize {
        3 * h.0 + h.1
    }

    /// Canonical id of the edge carrying `h`.
    pub fn edge_id(&self, h: HalfEdge) -> usize {
        Self::half_edge_id(h).min(Self::half_edge_id(self.twin(h)))
    }

    /// One half-edge per edge.
    pub fn edges(&self) -> Vec<HalfEdge> {
        (0..self.triangles.len())
            .flat_map(|t| (0..3).map(move |i| (t, i)))
            .filter(|&h| Self::half_edge_id(h) < Self::half_edge_id(self.twin(h)))
            .collect()
    }

    /// `(vertices, edges, triangles)`.
    pub fn counts(&self) -> (usize, usize, usize) {
        let f = self.triangles.len();
        (1, 3 * f / 2, f)
    }

    /// Deck transformation taking the lift of the twin triangle to its copy
    /// glued along `h` in the frame of `h`'s triangle.
    pub fn holonomy(&self, h: HalfEdge) -> Isometry {
        let (t, i) = h;
        let (u, j) = self.twin(h);
        let here = self.triangles[t].corners[(i + 1) % 3].resolved();
        let there = self.triangles[u].corners[j].resolved();
        here.compose(&there.inverse())
    }

    pub fn holonomy_word(&self, h: HalfEdge) -> Result<Word> {
        self.reducer.reduce(&self.holonomy(h), &self.tol)
    }

    /// The quadrilateral `A, D, B, C` around `h = A -> B`, in the frame of
    /// `h`'s triangle, where `C` is opposite in that triangle and `D` in the
    /// twin.
    fn quad(&self, h: HalfEdge) -> [DiskPoint; 4] {
        let (t, i) = h;
        let (u, j) = self.twin(h);
        let tri = &self.triangles[t];
        let d = self.holonomy(h).apply(self.triangles[u].points[(j + 2) % 3]);
        [tri.points[i], d, tri.points[(i + 1) % 3], tri.points[(i + 2) % 3]]
    }

    /// In-circle determinant of the far vertex of the twin against the
    /// circumcircle of `h`'s triangle; positive means the edge is illegal.
    pub fn violation(&self, h: HalfEdge) -> f64 {
        let [a, d, b, c] = self.quad(h);
        in_circle_det(a, b, c, d)
    }

    fn quad_is_convex(&self, h: HalfEdge) -> bool {
        let [a, d, b, c] = self.quad(h);
        orientation(a, d, c) > 0.0 && orientation(d, b, c) > 0.0
    }

    pub fn edge_length(&self, h: HalfEdge) -> f64 {
        let p = &self.triangles[h.0].points;
        p[h.1].dist(p[(h.1 + 1) % 3])
    }

    pub fn is_locally_delaunay(&self, h: HalfEdge) -> Result<bool> {
        if self.violation(h) <= self.tol.pred {
            return Ok(true);
        }
        if !self.quad_is_convex(h) {
            return Err(Error::DegenerateQuad(self.edge_id(h)));
        }
        Ok(false)
    }

    /// Replaces the diagonal of the quadrilateral around `h` by the other
    /// diagonal, whether or not the edge is Delaunay.
    pub fn flip(&mut self, h: HalfEdge) -> Result<()> {
        let (t, i) = h;
        let (u, j) = self.twin(h);
        if t == u || !self.quad_is_convex(h) {
            return Err(Error::DegenerateQuad(self.edge_id(h)));
        }
        let sigma_d = self.holonomy(h).compose(self.triangles[u].corners[(j + 2) % 3].resolved());
        let wd = self.reducer.reduce(&sigma_d, &self.tol)?;
        let tri = &self.triangles[t];
        let (wa, wb, wc) = (tri.corners[i].clone(), tri.corners[(i + 1) % 3].clone(), tri.corners[(i + 2) % 3].clone());

        let t1 = (t, (i + 1) % 3);
        let t2 = (t, (i + 2) % 3);
        let u1 = (u, (j + 1) % 3);
        let u2 = (u, (j + 2) % 3);
        let renamed = [(u1, (t, 0)), (t2, (t, 2)), (u2, (u, 0)), (t1, (u, 1))];
        let rename = |x: HalfEdge| renamed.iter().find(|(old, _)| *old == x).map(|&(_, new)| new);
        let outer_twins: Vec<(HalfEdge, HalfEdge)> = renamed
            .iter()
            .map(|&(old, new)| {
                let tw = self.twin(old);
                (new, rename(tw).unwrap_or(tw))
            })
            .collect();

        let (corners_t, points_t) = self.recentered([wa, wd.clone(), wc.clone()])?;
        let (corners_u, points_u) = self.recentered([wd, wb, wc])?;
        self.triangles[t] = Triangle { corners: corners_t, points: points_t, twins: [(0, 0), (u, 2), (0, 0)] };
        self.triangles[u] = Triangle { corners: corners_u, points: points_u, twins: [(0, 0), (0, 0), (t, 1)] };
        for (new, tw) in outer_twins {
            self.triangles[new.0].twins[new.1] = tw;
            self.triangles[tw.0].twins[tw.1] = new;
        }
        self.flips += 1;
        Ok(())
    }

    /// Moves a lift so that its centroid lies in the base tile.
    fn recentered(&self, corners: [Word; 3]) -> Result<([Word; 3], [DiskPoint; 3])> {
        let base = self.base;
        let points = corners.clone().map(|w| w.resolved().apply(base));
        let g = self.reducer.locate(klein_centroid(&points))?;
        if g.is_empty() {
            return Ok((corners, points));
        }
        let inv = g.resolved().inverse();
        let mut out = corners;
        for w in out.iter_mut() {
            *w = self.reducer.reduce(&inv.compose(w.resolved()), &self.tol)?;
        }
        let points = out.clone().map(|w| w.resolved().apply(base));
        Ok((out, points))
    }

    /// Flips illegal edges until every edge is locally Delaunay.
    pub fn run_flips(&mut self, cap: usize) -> Result<FlipStats> {
        let mut stats = FlipStats::default();
        let slots = 3 * self.triangles.len();
        let mut queued = vec![false; slots];
        let mut queue = VecDeque::new();
        for h in self.edges() {
            queued[Self::half_edge_id(h)] = true;
            queue.push_back(h);
        }
        stats.max_queue = queue.len();
        while let Some(h) = queue.pop_front() {
            queued[Self::half_edge_id(h)] = false;
            if self.is_locally_delaunay(h)? {
                continue;
            }
            if stats.flips == cap {
                return Err(Error::IterationLimit(cap));
            }
            let (t, u) = (h.0, self.twin(h).0);
            self.flip(h)?;
            stats.flips += 1;
            // The new triangles keep the quad's outer edges at these slots.
            for e in [(t, 0), (t, 2), (u, 0), (u, 1)] {
                let tw = self.twin(e);
                let canon = if Self::half_edge_id(e) < Self::half_edge_id(tw) { e } else { tw };
                let id = Self::half_edge_id(canon);
                if !queued[id] {
                    queued[id] = true;
                    queue.push_back(canon);
                }
            }
            stats.max_queue = stats.max_queue.max(queue.len());
        }
        Ok(stats)
    }

    /// Largest distance between the copy of a shared edge carried over by
    /// the holonomy and the edge itself.
    pub fn gluing_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for t in 0..self.triangles.len() {
            for i in 0..3 {
                let (u, j) = self.twin((t, i));
                let hol = self.holonomy((t, i));
                let there = &self.triangles[u].points;
                let here = &self.triangles[t].points;
                worst = worst
                    .max(hol.apply(there[j]).dist(here[(i + 1) % 3]))
                    .max(hol.apply(there[(j + 1) % 3]).dist(here[i]));
            }
        }
        worst
    }

    /// Whether twin links are involutive and never self-referential.
    pub fn links_consistent(&self) -> bool {
        (0..self.triangles.len()).all(|t| {
            (0..3).all(|i| {
                let tw = self.twin((t, i));
                tw != (t, i) && self.twin(tw) == (t, i)
            })
        })
    }

    pub fn total_area(&self) -> Result<f64> {
        self.triangles.iter().map(|t| HyperbolicPolygon::new(t.points.to_vec())?.area(0.0)).sum()
    }

    /// Sum of all corner angles; the single vertex has total angle `2π`.
    pub fn angle_sum(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                (0..3).map(|i| corner_angle(t.points[(i + 2) % 3], t.points[i], t.points[(i + 1) % 3])).sum::<f64>()
            })
            .sum()
    }

    pub fn angle_defect(&self) -> f64 {
        self.angle_sum() - TAU
    }

    /// Whether every lift is positively oriented.
    pub fn all_positive(&self) -> bool {
        self.triangles.iter().all(|t| orientation(t.points[0], t.points[1], t.points[2]) > 0.0)
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }
}

/// One edge of the triangulation as written to a stage file.
#[derive(Debug, Clone, Serialize)]
pub struct EdgeDump {
    pub half_edge: HalfEdge,
    pub twin: HalfEdge,
    pub from: DiskPoint,
    pub to: DiskPoint,
    /// Carries the twin's lift onto the copy glued along this edge.
    pub holonomy: Word,
}

#[derive(Debug, Clone, Serialize)]
pub struct TriangulationDump {
    pub basepoint: DiskPoint,
    pub triangles: Vec<Triangle>,
    pub edges: Vec<EdgeDump>,
    pub stats: FlipStats,
}

impl SurfaceTriangulation {
    pub fn dump(&self, stats: FlipStats) -> Result<TriangulationDump> {
        let edges = self
            .edges()
            .into_iter()
            .map(|h| {
                let p = &self.triangles[h.0].points;
                Ok(EdgeDump {
                    half_edge: h,
                    twin: self.twin(h),
                    from: p[h.1],
                    to: p[(h.1 + 1) % 3],
                    holonomy: self.holonomy_word(h)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TriangulationDump { basepoint: self.base, triangles: self.triangles.clone(), edges, stats })
    }
}

/// Fan triangulation followed by the flip algorithm.
pub fn delaunay(
    polygon: &ConvexPolygon,
    generators: &[Isometry],
    tol: &Tolerances,
    cap: usize,
) -> Result<(SurfaceTriangulation, FlipStats)> {
    let mut t = SurfaceTriangulation::fan(polygon, generators, tol)?;
    let stats = t.run_flips(cap)?;
    Ok((t, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::embed;
    use crate::generate::{perturbed, regular, subdivide};
    use crate::loops::reduce;
    use crate::map::FundamentalPolygon;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fan_of(raw: &crate::input::PolygonInput) -> SurfaceTriangulation {
        let tol = Tolerances::default();
        let map = FundamentalPolygon::build(raw, &tol).unwrap();
        let c = embed(&reduce(&map, &tol).unwrap(), &tol).unwrap();
        SurfaceTriangulation::fan(&c, map.generators(), &tol).unwrap()
    }

    fn check_invariants(t: &SurfaceTriangulation, g: usize) {
        check_invariants_within(t, g, 1e-9);
    }

    fn check_invariants_within(t: &SurfaceTriangulation, g: usize, gluing: f64) {
        assert_eq!(t.counts(), (1, 6 * g - 3, 4 * g - 2));
        assert_eq!(t.edges().len(), 6 * g - 3);
        assert!(t.links_consistent());
        assert!(t.all_positive());
        assert!(t.gluing_error() < gluing, "gluing {}", t.gluing_error());
        assert!((t.total_area().unwrap() - TAU * (2 * g - 2) as f64).abs() < 1e-8);
        assert!(t.angle_defect().abs() < 1e-8);
        for tri in t.triangles() {
            for (w, p) in tri.corners.iter().zip(&tri.points) {
                assert!(w.resolved().apply(t.basepoint()).dist(*p) < 1e-9);
            }
        }
    }

    #[test]
    fn fan_counts_and_gluing() {
        for g in 2..=4 {
            let t = fan_of(&regular(g).unwrap());
            check_invariants(&t, g);
        }
    }

    #[test]
    fn flips_reach_a_delaunay_triangulation() {
        let fixtures = [
            (2, regular(2).unwrap()),
            (3, regular(3).unwrap()),
            (2, perturbed(2, 4).unwrap()),
            (2, subdivide(&perturbed(2, 9).unwrap(), 3, 0.35).unwrap()),
        ];
        for (g, raw) in fixtures {
            let mut t = fan_of(&raw);
            let stats = t.run_flips(DEFAULT_FLIP_CAP).unwrap();
            check_invariants(&t, g);
            for h in t.edges() {
                assert!(t.is_locally_delaunay(h).unwrap());
            }
            assert_eq!(t.run_flips(DEFAULT_FLIP_CAP).unwrap().flips, 0);
            assert_eq!(t.flip_count(), stats.flips);
        }
    }

    #[test]
    fn flip_then_flip_back_restores_combinatorics() {
        let mut t = fan_of(&perturbed(2, 6).unwrap());
        let h = t.edges().into_iter().find(|&h| t.quad_is_convex(h)).unwrap();
        let before: Vec<Vec<String>> =
            t.triangles().iter().map(|x| x.corners.iter().map(|w| w.to_string()).collect()).collect();
        let area = t.total_area().unwrap();
        t.flip(h).unwrap();
        check_invariants(&t, 2);
        // The new diagonal is the half-edge (t, 1).
        t.flip((h.0, 1)).unwrap();
        check_invariants(&t, 2);
        assert!((t.total_area().unwrap() - area).abs() < 1e-10);
        let mut after: Vec<Vec<String>> =
            t.triangles().iter().map(|x| x.corners.iter().map(|w| w.to_string()).collect()).collect();
        let mut before = before;
        for v in before.iter_mut().chain(after.iter_mut()) {
            v.sort();
        }
        before.sort();
        after.sort();
        assert_eq!(before, after);
    }

    #[test]
    fn random_forced_flips_keep_the_gluing_consistent() {
        let mut t = fan_of(&perturbed(2, 8).unwrap());
        // Unbounded random flips act like Dehn twists and push edge lengths
        // past what double precision resolves, so the new diagonal is capped.
        let longest = |t: &SurfaceTriangulation| t.edges().into_iter().map(|h| t.edge_length(h)).fold(0.0, f64::max);
        let budget = 3.0 * longest(&t);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut done = 0;
        while done < 1000 {
            let edges = t.edges();
            let h = edges[rng.gen_range(0..edges.len())];
            let [_, d, _, c] = t.quad(h);
            if c.dist(d) <= budget && t.flip(h).is_ok() {
                done += 1;
            }
        }
        // Long lifts amplify the relator error quadratically in the entries.
        check_invariants_within(&t, 2, 1e-6);
        t.run_flips(DEFAULT_FLIP_CAP).unwrap();
        check_invariants(&t, 2);
        for h in t.edges() {
            assert!(t.is_locally_delaunay(h).unwrap());
        }
    }

    #[test]
    fn perturbing_a_delaunay_pair_makes_it_illegal() {
        let mut t = fan_of(&perturbed(2, 1).unwrap());
        t.run_flips(DEFAULT_FLIP_CAP).unwrap();
        let h = t.edges()[0];
        let [a, d, b, c] = t.quad(h);
        assert!(in_circle_det(a, b, c, d) <= 1e-12);
        // Pull D towards the circumcircle's interior along the segment to C.
        let moved = d.midpoint(c);
        assert!(in_circle_det(a, b, c, moved) > 0.0);
    }

    #[test]
    fn symmetric_quad_is_cocircular() {
        let p = |x: f64, y: f64| DiskPoint::new(x, y).unwrap();
        let (a, b, c, d) = (p(-0.4, 0.0), p(0.4, 0.0), p(0.0, 0.4), p(0.0, -0.4));
        assert!(in_circle_det(a, b, c, d).abs() < 1e-15);
    }
}
