//! The Dirichlet domain centered at the basepoint, read off as the Voronoi
//! cell dual to the star of the basepoint in the Delaunay triangulation.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::{Matrix3, RowVector3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flip::SurfaceTriangulation;
use crate::hyperbolic::{
    circumcenter, corner_angle, direction, minkowski, DiskPoint, Geodesic, HyperbolicPolygon, Isometry,
};
use crate::input::{PairingSpec, PolygonInput};
use crate::word::Word;

/// A triangle corner at the basepoint, with the triangle moved so that the
/// corner sits at the center.
#[derive(Debug, Clone)]
pub struct StarCorner {
    pub triangle: usize,
    pub corner: usize,
    /// Deck transformation carrying the stored lift into the common frame.
    pub frame: Word,
    /// Canonical word of the site across the edge leaving the corner
    /// clockwise-last, i.e. towards corner `corner + 2`.
    pub site: Word,
    pub angle: f64,
}

#[derive(Debug, Clone)]
pub struct BasepointStar {
    pub center: DiskPoint,
    pub corners: Vec<StarCorner>,
    /// Product of the holonomies met around the vertex.
    pub relator: Isometry,
}

impl BasepointStar {
    pub fn angle_sum(&self) -> f64 {
        self.corners.iter().map(|c| c.angle).sum()
    }

    /// Distance of the holonomy product from `±I`.
    pub fn relator_error(&self) -> f64 {
        identity_error(&self.relator)
    }
}

/// Entrywise distance of an `SU(1,1)` matrix from `±I`.
pub fn identity_error(m: &Isometry) -> f64 {
    let [ar, ai, br, bi] = m.to_array();
    let a = (ar - 1.0).hypot(ai).min((ar + 1.0).hypot(ai));
    a.max(br.hypot(bi))
}

/// Corners around the single vertex, counterclockwise, starting at corner
/// 0 of triangle 0.
pub fn star_of_basepoint(dt: &SurfaceTriangulation) -> Result<BasepointStar> {
    let tris = dt.triangles();
    let reducer = dt.reducer();
    let tol = dt.tolerances();
    let center = dt.basepoint();
    let cap = 3 * tris.len() + 1;
    let mut corners = Vec::new();
    let mut relator = Isometry::IDENTITY;
    let (mut t, mut c) = (0, 0);
    loop {
        let tri = &tris[t];
        let frame = tri.corners[c].inverse();
        let site = reducer.reduce(&frame.resolved().compose(tri.corners[(c + 2) % 3].resolved()), tol)?;
        let f = frame.resolved();
        let angle = corner_angle(f.apply(tri.points[(c + 2) % 3]), center, f.apply(tri.points[(c + 1) % 3]));
        corners.push(StarCorner { triangle: t, corner: c, frame, site, angle });
        let incoming = (t, (c + 2) % 3);
        relator = relator.compose(&dt.holonomy(incoming));
        let (u, j) = dt.twin(incoming);
        (t, c) = (u, j);
        if (t, c) == (0, 0) {
            break;
        }
        if corners.len() >= cap {
            return Err(Error::NonClosingStar { edge: 0, steps: corners.len() });
        }
    }
    Ok(BasepointStar { center, corners, relator })
}

#[derive(Debug, Clone, Serialize)]
pub struct DomainPairing {
    pub side: usize,
    pub partner: usize,
    /// Maps side `partner` onto side `side`.
    pub word: Word,
    pub matrix: [f64; 4],
}

#[derive(Debug, Clone, Serialize)]
pub struct DirichletDomain {
    pub genus: usize,
    pub center: DiskPoint,
    pub vertices: Vec<DiskPoint>,
    pub pairings: Vec<DomainPairing>,
    pub area: f64,
    pub perimeter: f64,
    /// Sides dropped because their two endpoints coincided.
    #[serde(skip)]
    pub merged: usize,
    /// The vertices with the center moved to the origin. Checks run on
    /// these, where coordinates are far from the boundary.
    #[serde(skip)]
    pub local: Vec<DiskPoint>,
    #[serde(skip)]
    to_center: Isometry,
}

impl DirichletDomain {
    pub fn side_count(&self) -> usize {
        self.vertices.len()
    }

    fn site_word(&self, k: usize) -> &Word {
        &self.pairings[k].word
    }

    /// The translate of the center across side `k`.
    pub fn site(&self, k: usize) -> DiskPoint {
        self.site_word(k).resolved().apply(self.center)
    }

    /// The site of side `k` with the center at the origin.
    pub fn local_site(&self, k: usize) -> DiskPoint {
        self.to_center.compose(self.site_word(k).resolved()).apply(self.center)
    }

    /// The pairing map of side `k` with the center at the origin.
    pub fn local_map(&self, k: usize) -> Isometry {
        self.to_center.compose(self.site_word(k).resolved()).compose(&self.to_center.inverse())
    }

    /// The isometry moving the center to the origin.
    pub fn to_center(&self) -> Isometry {
        self.to_center
    }

    fn side(&self, k: usize) -> (DiskPoint, DiskPoint) {
        let n = self.side_count();
        (self.local[k % n], self.local[(k + 1) % n])
    }

    pub fn polygon(&self) -> Result<HyperbolicPolygon> {
        HyperbolicPolygon::new(self.vertices.clone())
    }

    pub fn local_polygon(&self) -> Result<HyperbolicPolygon> {
        HyperbolicPolygon::new(self.local.clone())
    }

    /// Largest spread between the distances of a vertex to the center and
    /// to the sites of its two sides.
    pub fn equidistance_error(&self) -> f64 {
        let n = self.side_count();
        (0..n)
            .map(|k| {
                let v = self.local[k];
                let r = v.dist(DiskPoint::ORIGIN);
                let a = v.dist(self.local_site((k + n - 1) % n));
                let b = v.dist(self.local_site(k));
                (r - a).abs().max((r - b).abs())
            })
            .fold(0.0, f64::max)
    }

    /// Largest distance of `σ σ'` from `±I` over paired words.
    pub fn inverse_pair_error(&self) -> f64 {
        self.pairings
            .iter()
            .map(|p| identity_error(&p.word.resolved().compose(self.site_word(p.partner).resolved())))
            .fold(0.0, f64::max)
    }

    /// Largest endpoint error of the pairing maps, which send side
    /// `partner` onto side `side` with reversed orientation.
    pub fn pairing_error(&self) -> f64 {
        self.pairings
            .iter()
            .map(|p| {
                let g = self.local_map(p.side);
                let (a, b) = self.side(p.side);
                let (c, d) = self.side(p.partner);
                g.apply(c).dist(b).max(g.apply(d).dist(a))
            })
            .fold(0.0, f64::max)
    }

    /// Per side, the distance from the midpoint of center and site to the
    /// side's geodesic and the deviation from a right angle between that
    /// geodesic and the one through center and site. Both are invariant, so
    /// they are measured with the center moved to the origin.
    pub fn duality(&self) -> Result<Vec<(f64, f64)>> {
        (0..self.side_count())
            .map(|k| {
                let site = self.local_site(k);
                let mid = DiskPoint::ORIGIN.midpoint(site);
                let (a, b) = self.side(k);
                let side = Geodesic::through(a, b)?;
                let offset = side.distance_to(mid);
                let along = Isometry::to_origin(mid).apply_complex(side.q).arg();
                let across = direction(mid, site);
                let turn = (along - across).rem_euclid(PI);
                Ok((offset, (turn - FRAC_PI_2).abs()))
            })
            .collect()
    }

    pub fn interior_angles(&self) -> Result<Vec<f64>> {
        Ok(self.local_polygon()?.interior_angles(0.0))
    }

    pub fn is_convex(&self) -> Result<bool> {
        Ok(self.interior_angles()?.iter().all(|&a| a > 0.0 && a < PI))
    }

    pub fn contains_center(&self) -> Result<bool> {
        let inner = -1e-12;
        Ok(self.local_polygon()?.contains_convex(DiskPoint::ORIGIN, inner))
    }

    /// The domain as an input polygon whose pairings carry their matrices.
    pub fn to_input(&self) -> PolygonInput {
        PolygonInput {
            vertices: self.vertices.iter().map(|v| v.to_array()).collect(),
            pairings: self
                .pairings
                .iter()
                .map(|p| PairingSpec::Side { side: p.side, partner: p.partner, matrix: Some(p.matrix) })
                .collect(),
            generators: None,
        }
    }
}

/// One Newton step on the hyperboloid towards the point equidistant from
/// the origin and the sites `a` and `b`, starting from `v`.
fn polish(v: DiskPoint, a: DiskPoint, b: DiskPoint) -> DiskPoint {
    let x = v.to_hyperboloid();
    let (ha, hb) = (a.to_hyperboloid(), b.to_hyperboloid());
    let da = [1.0 - ha[0], -ha[1], -ha[2]];
    let db = [1.0 - hb[0], -hb[1], -hb[2]];
    let flip = |u: [f64; 3]| [-u[0], u[1], u[2]];
    let m = Matrix3::from_rows(&[RowVector3::from(flip(da)), RowVector3::from(flip(db)), RowVector3::from(flip(x))]);
    let rhs = Vector3::new(-minkowski(x, da), -minkowski(x, db), 0.0);
    match m.lu().solve(&rhs) {
        Some(d) => DiskPoint::from_hyperboloid([x[0] + d[0], x[1] + d[1], x[2] + d[2]]).unwrap_or(v),
        None => v,
    }
}

/// The Voronoi cell of the center: one vertex per star corner at the
/// circumcenter of the corner's triangle, and one side per edge leaving the
/// center.
pub fn dualize(dt: &SurfaceTriangulation, star: &BasepointStar) -> Result<DirichletDomain> {
    let tol = dt.tolerances();
    let reducer = dt.reducer();
    let center = star.center;
    let n = star.corners.len();
    // Circumcenters are computed with the center moved to the origin, where
    // hyperboloid coordinates of the sites stay small.
    let to_center = Isometry::to_origin(center);
    let back = to_center.inverse();
    let sites: Vec<DiskPoint> =
        star.corners.iter().map(|c| to_center.compose(c.site.resolved()).apply(center)).collect();
    // Corner k spans the sites of sides k - 1 and k.
    let centers = (0..n)
        .map(|k| {
            let (a, b) = (sites[(k + n - 1) % n], sites[k]);
            circumcenter(DiskPoint::ORIGIN, a, b, tol.pred).map(|c| polish(c, a, b))
        })
        .collect::<Result<Vec<_>>>()?;

    let kept: Vec<usize> = (0..n).filter(|&k| centers[k].dist(centers[(k + 1) % n]) >= tol.merge).collect();
    let genus = (n + 6) / 12;
    if kept.len() < 4 * genus {
        return Err(Error::DegenerateCell { sides: kept.len(), min: 4 * genus });
    }
    // A dropped side's end merges into its start, so each kept side keeps
    // its starting vertex.
    let start = (0..kept.len())
        .min_by(|&x, &y| star.corners[kept[x]].site.letters().cmp(star.corners[kept[y]].site.letters()))
        .unwrap_or(0);
    let order: Vec<usize> = (0..kept.len()).map(|i| kept[(start + i) % kept.len()]).collect();
    let local: Vec<DiskPoint> = order.iter().map(|&k| centers[k]).collect();
    let vertices: Vec<DiskPoint> = local.iter().map(|&v| back.apply(v)).collect();
    let words: Vec<Word> = order.iter().map(|&k| star.corners[k].site.clone()).collect();

    let mut pairings = Vec::with_capacity(words.len());
    for (side, word) in words.iter().enumerate() {
        let inverse = reducer.reduce(&word.resolved().inverse(), tol)?;
        let partner = words
            .iter()
            .position(|w| *w == inverse)
            .ok_or_else(|| Error::WordMismatch(format!("no side of the cell has the inverse of {word}")))?;
        if partner == side {
            return Err(Error::NotMatching(format!("side {side} of the cell is paired with itself")));
        }
        pairings.push(DomainPairing { side, partner, word: word.clone(), matrix: word.resolved().to_array() });
    }

    let polygon = HyperbolicPolygon::new(local.clone())?;
    let area = polygon.area(0.0)?;
    let perimeter = polygon.perimeter();
    Ok(DirichletDomain { genus, center, vertices, pairings, area, perimeter, merged: n - kept.len(), local, to_center })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct VerificationReport {
    pub samples: usize,
    pub words: usize,
    /// Largest `d(center, y) - d(γ center, y)` seen.
    pub max_violation: f64,
    pub violations: usize,
    pub tolerance: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Checks on random points of the domain that no translate of the center
/// by a pairing word or a product of two is closer than the center.
pub fn verify_fundamental(d: &DirichletDomain, samples: usize, seed: u64, tol: f64) -> Result<VerificationReport> {
    let polygon = d.local_polygon()?;
    let t = d.to_center();
    let mut sites: Vec<DiskPoint> = (0..d.side_count()).map(|k| d.local_site(k)).collect();
    for p in &d.pairings {
        for q in &d.pairings {
            if q.side == p.partner {
                continue;
            }
            sites.push(t.compose(p.word.resolved()).compose(q.word.resolved()).apply(d.center));
        }
    }
    sites.retain(|s| s.dist(DiskPoint::ORIGIN) > tol);

    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for v in &d.local {
        let a = v.to_array();
        for i in 0..2 {
            lo[i] = lo[i].min(a[i]);
            hi[i] = hi[i].max(a[i]);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerificationReport {
        samples,
        words: sites.len(),
        max_violation: f64::NEG_INFINITY,
        violations: 0,
        tolerance: tol,
    };
    let mut drawn = 0;
    while drawn < samples {
        let y = match DiskPoint::new(rng.gen_range(lo[0]..=hi[0]), rng.gen_range(lo[1]..=hi[1])) {
            Ok(y) if polygon.contains_convex(y, 0.0) => y,
            _ => continue,
        };
        drawn += 1;
        let own = y.dist(DiskPoint::ORIGIN);
        for s in &sites {
            let excess = own - y.dist(*s);
            report.max_violation = report.max_violation.max(excess);
            if excess > tol {
                report.violations += 1;
            }
        }
    }
    Ok(report)
}

/// Area minus the Gauss-Bonnet value `2π (2g - 2)`.
pub fn area_defect(d: &DirichletDomain) -> f64 {
    d.area - TAU * (2 * d.genus - 2) as f64
}
