//! The enriched combinatorial map of a fundamental polygon: a circular list
//! of sides with pairing pointers and letters, vertex orbits with
//! positioning words, and the walk around a vertex of the tiling.

use std::collections::VecDeque;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperbolic::{DiskPoint, HyperbolicPolygon, Isometry};
use crate::input::PolygonInput;
use crate::tolerance::Tolerances;
use crate::word::{Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Source,
    Target,
}

/// One edge-end at the centre of a vertex star: the lift `word · edge` of
/// a polygon side has its `end` at the centre.
#[derive(Debug, Clone)]
pub struct StarEntry {
    pub edge: usize,
    pub end: End,
    pub word: Word,
}

/// The counterclockwise sequence of edge-ends around a lifted vertex.
///
/// Every edge of the tiling around the centre shows up twice, once as a
/// side of each of the two tiles it separates.
#[derive(Debug, Clone)]
pub struct Star {
    pub entries: Vec<StarEntry>,
    /// Product of the letters collected along the full turn; a relator.
    pub relator: Word,
}

impl Star {
    /// Number of distinct tiling edges incident to the centre.
    pub fn degree(&self) -> usize {
        self.entries.len() / 2
    }

    /// The entries with `end == Source`, one per tiling edge.
    pub fn outgoing(&self) -> impl Iterator<Item = &StarEntry> {
        self.entries.iter().filter(|s| s.end == End::Source)
    }
}

/// Combinatorics of a polygon whose sides are glued in pairs, with the word
/// of the gluing of each side.
#[derive(Debug)]
pub struct Gluing {
    pair: Vec<usize>,
    onto_self: Vec<Word>,
    accesses: AtomicUsize,
}

impl Clone for Gluing {
    fn clone(&self) -> Self {
        Gluing { pair: self.pair.clone(), onto_self: self.onto_self.clone(), accesses: AtomicUsize::new(0) }
    }
}

impl Gluing {
    /// `onto_self[e]` maps side `pair[e]` onto side `e`.
    pub fn new(pair: Vec<usize>, onto_self: Vec<Word>) -> Self {
        Gluing { pair, onto_self, accesses: AtomicUsize::new(0) }
    }

    pub fn len(&self) -> usize {
        self.pair.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pair.is_empty()
    }

    fn touch(&self) {
        self.accesses.fetch_add(1, Ordering::Relaxed);
    }

    pub fn pair(&self, e: usize) -> usize {
        self.touch();
        self.pair[e]
    }

    pub fn onto_self(&self, e: usize) -> &Word {
        self.touch();
        &self.onto_self[e]
    }

    pub fn next(&self, e: usize) -> usize {
        self.touch();
        (e + 1) % self.len()
    }

    pub fn prev(&self, e: usize) -> usize {
        self.touch();
        (e + self.len() - 1) % self.len()
    }

    /// Number of elementary accesses since the last reset.
    pub fn accesses(&self) -> usize {
        self.accesses.load(Ordering::Relaxed)
    }

    pub fn reset_accesses(&self) {
        self.accesses.store(0, Ordering::Relaxed);
    }

    /// Turns around the chosen end of side `e`, collecting the positioning
    /// words of the tiles met on the way.
    pub fn star(&self, e: usize, end: End) -> Result<Star> {
        let cap = self.len() + 1;
        let mut entries = Vec::new();
        let mut word = Word::identity();
        let mut cur = e;
        let mut steps = 0;
        loop {
            if steps == cap {
                return Err(Error::NonClosingStar { edge: e, steps });
            }
            steps += 1;
            let x = match end {
                End::Source => self.prev(cur),
                End::Target => self.next(cur),
            };
            entries.push(StarEntry { edge: cur, end, word: word.clone() });
            let other = match end {
                End::Source => End::Target,
                End::Target => End::Source,
            };
            entries.push(StarEntry { edge: x, end: other, word: word.clone() });
            word = word.compose(self.onto_self(x));
            cur = self.pair(x);
            if cur == e {
                break;
            }
        }
        if end == End::Target {
            // The walk around a target runs clockwise.
            entries[1..].reverse();
        }
        Ok(Star { entries, relator: word })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeRecord {
    pub prev: usize,
    pub next: usize,
    pub source: usize,
    pub target: usize,
    pub pair: usize,
    /// `id` on the representative of the pair, `γ_i` on the other side.
    pub alpha: Letter,
    pub generator: usize,
}

impl EdgeRecord {
    pub fn is_representative(&self) -> bool {
        self.alpha == Letter::Id
    }

    /// Letter of the isometry mapping the paired side onto this one.
    pub fn onto_self(&self) -> Letter {
        match self.alpha {
            Letter::Id => Letter::Gen(self.generator),
            other => other.inverse(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VertexRecord {
    /// Polygon vertex index of the orbit representative.
    pub point: usize,
    pub orbit: usize,
    /// Places the representative at this vertex.
    pub word: Word,
    pub position: DiskPoint,
}

/// A fundamental polygon with its side pairings.
#[derive(Debug, Clone)]
pub struct FundamentalPolygon {
    polygon: HyperbolicPolygon,
    edges: Vec<EdgeRecord>,
    vertices: Vec<VertexRecord>,
    generators: Vec<Isometry>,
    representatives: Vec<usize>,
    orbit_reps: Vec<usize>,
    gluing: Gluing,
    genus: usize,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut root = x;
    while parent[root] != root {
        root = parent[root];
    }
    let mut y = x;
    while parent[y] != root {
        let up = parent[y];
        parent[y] = root;
        y = up;
    }
    root
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi] = lo;
    }
}

impl FundamentalPolygon {
    /// Builds the map and checks that paired sides have equal lengths,
    /// that given generators map sides correctly and that every vertex is
    /// the image of its orbit representative.
    pub fn build(raw: &PolygonInput, tol: &Tolerances) -> Result<Self> {
        let map = Self::assemble(raw)?;
        for (i, &r) in map.representatives.iter().enumerate() {
            let p = map.edges[r].pair;
            let delta = (map.side_length(r) - map.side_length(p)).abs();
            if delta > tol.geom {
                return Err(Error::LengthMismatch { side: r, partner: p, delta });
            }
            let g = &map.generators[i];
            let error =
                g.apply(map.vertex(p)).dist(map.vertex(r + 1)).max(g.apply(map.vertex(p + 1)).dist(map.vertex(r)));
            if error > tol.geom {
                return Err(Error::GeneratorMismatch { side: r, partner: p, error });
            }
        }
        for (k, v) in map.vertices.iter().enumerate() {
            let d = v.position.dist(map.vertex(k));
            if d > tol.geom {
                return Err(Error::OpenPolygon(format!(
                    "vertex {k} is {d:e} away from the image of its orbit representative"
                )));
            }
        }
        Ok(map)
    }

    /// Builds the map without the metric checks of [`build`](Self::build).
    /// Used to report on polygons that are not quite valid.
    pub fn assemble(raw: &PolygonInput) -> Result<Self> {
        let points = raw.vertices.iter().map(|&[re, im]| DiskPoint::new(re, im)).collect::<Result<Vec<_>>>()?;
        let sides = points.len();
        if sides < 8 || sides % 2 == 1 {
            return Err(Error::Degenerate {
                sides,
                reason: "a closed surface of genus >= 2 needs an even number of at least 8 sides".into(),
            });
        }
        let polygon = HyperbolicPolygon::new(points)?;
        if let Some((i, j)) = polygon.find_crossing() {
            return Err(Error::SelfIntersecting(i, j));
        }

        let normalized = raw.normalized_pairings()?;
        let mut pair = vec![usize::MAX; sides];
        for &(i, j) in &normalized.pairs {
            if i >= sides || j >= sides {
                return Err(Error::NotMatching(format!("side index in ({i}, {j}) out of range 0..{sides}")));
            }
            if i == j {
                return Err(Error::NotMatching(format!("side {i} is paired with itself")));
            }
            for s in [i, j] {
                if pair[s] != usize::MAX {
                    return Err(Error::NotMatching(format!("side {s} appears in two pairings")));
                }
            }
            pair[i] = j;
            pair[j] = i;
        }
        if let Some(s) = pair.iter().position(|&p| p == usize::MAX) {
            return Err(Error::NotMatching(format!("side {s} is not paired")));
        }

        let m = sides / 2;
        let representatives: Vec<usize> = (0..sides).filter(|&s| s < pair[s]).collect();
        let mut generator_of = vec![0; sides];
        for (i, &r) in representatives.iter().enumerate() {
            generator_of[r] = i;
            generator_of[pair[r]] = i;
        }
        let v = |k: usize| polygon.vertices()[k % sides];
        let generators = match &normalized.generators {
            Some(given) => {
                let mut out = vec![Isometry::IDENTITY; m];
                for (&(i, j), &matrix) in normalized.pairs.iter().zip(given) {
                    let g = Isometry::from_array(matrix)?;
                    out[generator_of[i]] = if i < j { g } else { g.inverse() };
                }
                out
            }
            None => representatives
                .iter()
                .map(|&r| {
                    let p = pair[r];
                    Isometry::mapping_segment(v(p), v(p + 1), v(r + 1), v(r))
                })
                .collect(),
        };

        let edges: Vec<EdgeRecord> = (0..sides)
            .map(|s| EdgeRecord {
                prev: (s + sides - 1) % sides,
                next: (s + 1) % sides,
                source: s,
                target: (s + 1) % sides,
                pair: pair[s],
                alpha: if s < pair[s] { Letter::Id } else { Letter::Gen(generator_of[s]) },
                generator: generator_of[s],
            })
            .collect();

        // Pairing side j onto side i identifies v_j with v_{i+1} and v_{j+1}
        // with v_i.
        let mut parent: Vec<usize> = (0..sides).collect();
        for &r in &representatives {
            let p = pair[r];
            union(&mut parent, p, (r + 1) % sides);
            union(&mut parent, (p + 1) % sides, r);
        }
        let mut orbit_of = vec![usize::MAX; sides];
        let mut orbit_reps = Vec::new();
        for k in 0..sides {
            let root = find(&mut parent, k);
            if orbit_of[root] == usize::MAX {
                orbit_of[root] = orbit_reps.len();
                orbit_reps.push(root);
            }
            orbit_of[k] = orbit_of[root];
        }
        let n = orbit_reps.len();
        if m + 1 < n || (m + 1 - n) % 2 == 1 {
            return Err(Error::EulerMismatch { n, m });
        }
        let genus = (m + 1 - n) / 2;
        if genus < 2 || 2 * m < 4 * genus || 2 * m > 12 * genus - 6 {
            return Err(Error::EulerMismatch { n, m });
        }

        // Positioning words by breadth-first search inside each orbit.
        let mut links: Vec<Vec<(usize, Letter)>> = vec![Vec::new(); sides];
        for (i, &r) in representatives.iter().enumerate() {
            let p = pair[r];
            for (from, to) in [(p, (r + 1) % sides), ((p + 1) % sides, r)] {
                links[from].push((to, Letter::Gen(i)));
                links[to].push((from, Letter::Inv(i)));
            }
        }
        let mut words: Vec<Option<Word>> = vec![None; sides];
        for &rep in &orbit_reps {
            words[rep] = Some(Word::identity());
            let mut queue = VecDeque::from([rep]);
            while let Some(x) = queue.pop_front() {
                let wx = words[x].clone().expect("visited");
                for &(y, letter) in &links[x] {
                    if words[y].is_none() {
                        words[y] = Some(Word::letter(letter, &generators).compose(&wx));
                        queue.push_back(y);
                    }
                }
            }
        }
        let vertices = (0..sides)
            .map(|k| {
                let point = orbit_reps[orbit_of[k]];
                let word = words[k].as_ref().expect("orbit closure reaches every vertex").refreshed(&generators);
                let position = word.resolved().apply(v(point));
                VertexRecord { point, orbit: orbit_of[k], word, position }
            })
            .collect();

        let onto_self = edges.iter().map(|e| Word::letter(e.onto_self(), &generators)).collect();
        let gluing = Gluing::new(pair, onto_self);
        Ok(FundamentalPolygon { polygon, edges, vertices, generators, representatives, orbit_reps, gluing, genus })
    }

    pub fn polygon(&self) -> &HyperbolicPolygon {
        &self.polygon
    }

    pub fn edges(&self) -> &[EdgeRecord] {
        &self.edges
    }

    pub fn vertices(&self) -> &[VertexRecord] {
        &self.vertices
    }

    pub fn generators(&self) -> &[Isometry] {
        &self.generators
    }

    /// Side index of the representative of each pair.
    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    /// Polygon vertex index representing each vertex orbit.
    pub fn orbit_reps(&self) -> &[usize] {
        &self.orbit_reps
    }

    pub fn gluing(&self) -> &Gluing {
        &self.gluing
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn side_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of pairs `m`.
    pub fn pair_count(&self) -> usize {
        self.representatives.len()
    }

    /// Number of vertex orbits `n`.
    pub fn orbit_count(&self) -> usize {
        self.orbit_reps.len()
    }

    /// Position of polygon vertex `k` (indices taken mod `2m`).
    pub fn vertex(&self, k: usize) -> DiskPoint {
        self.polygon.vertices()[k % self.side_count()]
    }

    pub fn orbit(&self, k: usize) -> usize {
        self.vertices[k % self.side_count()].orbit
    }

    pub fn side_length(&self, s: usize) -> f64 {
        self.vertex(s).dist(self.vertex(s + 1))
    }

    /// Letter of the isometry mapping `pair(e)` onto `e`.
    pub fn onto_self(&self, e: usize) -> &Word {
        self.gluing.onto_self(e)
    }

    pub fn incident_edges(&self, e: usize, end: End) -> Result<Star> {
        self.gluing.star(e, end)
    }

    pub fn validate(&self, tol: &Tolerances) -> ValidationReport {
        let angles = self.polygon.interior_angles(0.0);
        let mut orbits: Vec<OrbitReport> = self
            .orbit_reps
            .iter()
            .map(|&r| OrbitReport { representative: r, members: Vec::new(), angle_sum: 0.0, deviation: 0.0 })
            .collect();
        for (k, a) in angles.iter().enumerate() {
            let o = &mut orbits[self.vertices[k].orbit];
            o.members.push(k);
            o.angle_sum += a;
        }
        for o in &mut orbits {
            o.deviation = o.angle_sum - TAU;
        }
        let lengths = self
            .representatives
            .iter()
            .map(|&r| {
                let p = self.edges[r].pair;
                LengthReport { side: r, partner: p, delta: (self.side_length(r) - self.side_length(p)).abs() }
            })
            .collect::<Vec<LengthReport>>();
        let passed =
            orbits.iter().all(|o| o.deviation.abs() <= tol.angle) && lengths.iter().all(|l| l.delta <= tol.geom);
        ValidationReport {
            passed,
            n: self.orbit_count(),
            m: self.pair_count(),
            genus: self.genus,
            perimeter: self.polygon.perimeter(),
            orbits,
            lengths,
        }
    }

    /// Serializable form with generators.
    pub fn to_input(&self) -> PolygonInput {
        PolygonInput {
            vertices: self.polygon.vertices().iter().map(|v| v.to_array()).collect(),
            pairings: self
                .representatives
                .iter()
                .map(|&r| crate::input::PairingSpec::Pair([r, self.edges[r].pair]))
                .collect(),
            generators: Some(self.generators.iter().map(|g| g.to_array()).collect()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitReport {
    pub representative: usize,
    pub members: Vec<usize>,
    pub angle_sum: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LengthReport {
    pub side: usize,
    pub partner: usize,
    pub delta: f64,
}

/// Outcome of the Poincaré angle check plus Euler data.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub n: usize,
    pub m: usize,
    pub genus: usize,
    pub perimeter: f64,
    pub orbits: Vec<OrbitReport>,
    pub lengths: Vec<LengthReport>,
}

impl ValidationReport {
    pub fn max_length_delta(&self) -> f64 {
        self.lengths.iter().map(|l| l.delta).fold(0.0, f64::max)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertex orbits n = {}, pairs m = {}, genus g = {}", self.n, self.m, self.genus)?;
        writeln!(f, "perimeter {:.12}", self.perimeter)?;
        for (i, o) in self.orbits.iter().enumerate() {
            writeln!(
                f,
                "orbit {i} (rep {}, {} vertices): angle sum {:.15} (2pi {:+.3e})",
                o.representative,
                o.members.len(),
                o.angle_sum,
                o.deviation
            )?;
        }
        writeln!(f, "max paired length discrepancy {:.3e}", self.max_length_delta())?;
        write!(f, "{}", if self.passed { "PASS" } else { "FAIL" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::input::PairingSpec;
    use num_complex::Complex64;
    use std::collections::BTreeSet;

    pub(crate) fn octagon() -> PolygonInput {
        let r = 2f64.powf(-0.25);
        PolygonInput {
            vertices: (0..8).map(|k| Complex64::from_polar(r, TAU * k as f64 / 8.0)).map(|z| [z.re, z.im]).collect(),
            pairings: (0..4).map(|k| PairingSpec::Pair([k, k + 4])).collect(),
            generators: None,
        }
    }

    #[test]
    fn octagon_has_one_orbit_and_genus_two() {
        let map = FundamentalPolygon::build(&octagon(), &Tolerances::default()).unwrap();
        assert_eq!((map.orbit_count(), map.pair_count(), map.genus()), (1, 4, 2));
        let report = map.validate(&Tolerances::default());
        assert!(report.passed, "{report}");
        assert!((report.orbits[0].angle_sum - TAU).abs() < 1e-12);
        let half: f64 = map.representatives().iter().map(|&r| map.side_length(r)).sum();
        assert!((report.perimeter - 2.0 * half).abs() < 1e-12);
    }

    #[test]
    fn linkage_invariants() {
        let map = FundamentalPolygon::build(&octagon(), &Tolerances::default()).unwrap();
        for (k, e) in map.edges().iter().enumerate() {
            assert_eq!(map.edges()[e.prev].next, k);
            assert_eq!(map.edges()[e.next].prev, k);
            assert_eq!(map.edges()[e.pair].pair, k);
            assert_ne!(e.pair, k);
            assert_eq!(e.alpha == Letter::Id, k < e.pair);
            // onto_self(e) maps pair(e) onto e, endpoints reversed.
            let g = map.onto_self(k).resolved();
            assert!(g.apply(map.vertex(e.pair)).dist(map.vertex(k + 1)) < 1e-12);
            assert!(g.apply(map.vertex(e.pair + 1)).dist(map.vertex(k)) < 1e-12);
        }
    }

    #[test]
    fn octagon_star_counts_and_relator() {
        let map = FundamentalPolygon::build(&octagon(), &Tolerances::default()).unwrap();
        for end in [End::Source, End::Target] {
            let star = map.incident_edges(0, end).unwrap();
            assert_eq!(star.entries.len(), 16);
            assert_eq!(star.degree(), 8);
            assert!(star.relator.resolved().distance_to_identity() < 1e-12);
            let ends: BTreeSet<(usize, bool)> = star.entries.iter().map(|s| (s.edge, s.end == End::Source)).collect();
            assert_eq!(ends.len(), 16);
        }
    }

    #[test]
    fn star_entries_are_placed_at_the_centre() {
        let map = FundamentalPolygon::build(&octagon(), &Tolerances::default()).unwrap();
        for end in [End::Source, End::Target] {
            let star = map.incident_edges(3, end).unwrap();
            let centre = if end == End::Source { map.vertex(3) } else { map.vertex(4) };
            let mut last = f64::NEG_INFINITY;
            let mut turned = 0.0;
            for s in &star.entries {
                let at = if s.end == End::Source { s.edge } else { s.edge + 1 };
                let other = if s.end == End::Source { s.edge + 1 } else { s.edge };
                let g = s.word.resolved();
                assert!(g.apply(map.vertex(at)).dist(centre) < 1e-12);
                // Counterclockwise order: the direction of the far end grows.
                let dir = crate::hyperbolic::direction(centre, g.apply(map.vertex(other)));
                if last > f64::NEG_INFINITY {
                    let mut step = dir - last;
                    while step < -1e-9 {
                        step += TAU;
                    }
                    turned += step;
                }
                last = dir;
            }
            assert!(turned <= TAU + 1e-9 && turned > TAU * 0.8, "turned {turned}");
        }
    }

    #[test]
    fn rejects_bad_matchings_and_sizes() {
        let mut raw = octagon();
        raw.pairings[0] = PairingSpec::Pair([0, 0]);
        assert!(matches!(FundamentalPolygon::build(&raw, &Tolerances::default()), Err(Error::NotMatching(_))));
        let mut raw = octagon();
        raw.pairings[0] = PairingSpec::Pair([0, 5]);
        assert!(matches!(FundamentalPolygon::build(&raw, &Tolerances::default()), Err(Error::NotMatching(_))));
        let mut raw = octagon();
        raw.vertices.truncate(6);
        raw.pairings.truncate(3);
        assert!(matches!(FundamentalPolygon::build(&raw, &Tolerances::default()), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn perturbed_vertex_fails_angle_sum_and_lengths() {
        let mut raw = octagon();
        raw.vertices[3][0] += 1e-3;
        let map = FundamentalPolygon::assemble(&raw).unwrap();
        let report = map.validate(&Tolerances::default());
        assert!(!report.passed);
        // Independent recomputation of the angle sum from the raw vertices.
        let pts: Vec<DiskPoint> = raw.vertices.iter().map(|&[x, y]| DiskPoint::new(x, y).unwrap()).collect();
        let sum: f64 =
            (0..8).map(|k| crate::hyperbolic::corner_angle(pts[(k + 7) % 8], pts[k], pts[(k + 1) % 8])).sum();
        assert!((report.orbits[0].angle_sum - sum).abs() < 1e-12);
        assert!((sum - TAU).abs() > 1e-6);
        assert!(matches!(FundamentalPolygon::build(&raw, &Tolerances::default()), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn given_generators_are_checked() {
        let map = FundamentalPolygon::build(&octagon(), &Tolerances::default()).unwrap();
        let mut raw = map.to_input();
        let rebuilt = FundamentalPolygon::build(&raw, &Tolerances::default()).unwrap();
        for (a, b) in map.generators().iter().zip(rebuilt.generators()) {
            assert!(a.approx_eq(b, 1e-14));
        }
        // Swapping the pair orientation inverts the generator.
        raw.pairings[1] = PairingSpec::Pair([5, 1]);
        raw.generators.as_mut().unwrap()[1] = map.generators()[1].inverse().to_array();
        assert!(FundamentalPolygon::build(&raw, &Tolerances::default()).is_ok());
        raw.generators.as_mut().unwrap()[1] = map.generators()[1].to_array();
        assert!(matches!(
            FundamentalPolygon::build(&raw, &Tolerances::default()),
            Err(Error::GeneratorMismatch { .. })
        ));
    }
}
