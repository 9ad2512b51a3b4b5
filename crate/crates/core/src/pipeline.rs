//! End-to-end orchestration: validate, reduce, embed, flip, dualize.

use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::dual::{dualize, star_of_basepoint, verify_fundamental, BasepointStar, DirichletDomain, VerificationReport};
use crate::embed::{embed, ConvexPolygon};
use crate::error::{Error, Result};
use crate::flip::{delaunay, FlipStats, SurfaceTriangulation, DEFAULT_FLIP_CAP};
use crate::input::PolygonInput;
use crate::loops::{reduce, TopologicalPolygon};
use crate::map::{FundamentalPolygon, ValidationReport};
use crate::svg;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub tol: Tolerances,
    pub flip_cap: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig { tol: Tolerances::default(), flip_cap: DEFAULT_FLIP_CAP, samples: 10_000, seed: 0 }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        self.tol.validate()?;
        if self.flip_cap == 0 {
            return Err(Error::Schema("flip cap must be at least 1".into()));
        }
        Ok(())
    }
}

/// Outcome of validating an input polygon. The report is missing when the
/// polygon could not even be assembled.
#[derive(Debug)]
pub struct Validation {
    pub report: Option<ValidationReport>,
    pub map: Result<FundamentalPolygon>,
}

impl Validation {
    pub fn passed(&self) -> bool {
        self.map.is_ok() && self.report.as_ref().is_some_and(|r| r.passed)
    }
}

/// Runs the angle check on the leniently assembled polygon and the strict
/// build, so that a report is available even when the build fails.
pub fn validate(raw: &PolygonInput, tol: &Tolerances) -> Validation {
    let report = FundamentalPolygon::assemble(raw).ok().map(|m| m.validate(tol));
    let map = FundamentalPolygon::build(raw, tol).and_then(|m| {
        let r = m.validate(tol);
        if r.passed {
            Ok(m)
        } else {
            Err(Error::ValidationFailed(Box::new(r)))
        }
    });
    Validation { report, map }
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Timings {
    pub validate: Duration,
    pub reduce: Duration,
    pub embed: Duration,
    pub flip: Duration,
    pub dual: Duration,
}

/// Largest deviations of the dual cell from the Delaunay edges it crosses.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DualitySummary {
    pub max_midpoint_offset: f64,
    pub max_angle_error: f64,
}

#[derive(Debug)]
pub struct PipelineRun {
    pub map: FundamentalPolygon,
    pub report: ValidationReport,
    pub topological: TopologicalPolygon,
    pub convex: ConvexPolygon,
    pub triangulation: SurfaceTriangulation,
    pub flips: FlipStats,
    pub star: BasepointStar,
    pub domain: DirichletDomain,
    pub verification: VerificationReport,
    pub duality: DualitySummary,
    pub timings: Timings,
}

pub fn run(raw: &PolygonInput, config: &PipelineConfig) -> Result<PipelineRun> {
    config.validate()?;
    let tol = &config.tol;
    let mut timings = Timings::default();
    let clock = Instant::now();
    let validation = validate(raw, tol);
    let map = validation.map?;
    let report = validation.report.unwrap_or_else(|| map.validate(tol));
    timings.validate = clock.elapsed();

    let clock = Instant::now();
    let topological = reduce(&map, tol)?;
    timings.reduce = clock.elapsed();

    let clock = Instant::now();
    let convex = embed(&topological, tol)?;
    timings.embed = clock.elapsed();

    let clock = Instant::now();
    let (triangulation, flips) = delaunay(&convex, map.generators(), tol, config.flip_cap)?;
    timings.flip = clock.elapsed();

    let clock = Instant::now();
    let star = star_of_basepoint(&triangulation)?;
    let domain = dualize(&triangulation, &star)?;
    let verification = verify_fundamental(&domain, config.samples, config.seed, tol.geom)?;
    let duality = domain.duality()?.into_iter().fold(
        DualitySummary { max_midpoint_offset: 0.0, max_angle_error: 0.0 },
        |acc, (offset, angle)| DualitySummary {
            max_midpoint_offset: acc.max_midpoint_offset.max(offset),
            max_angle_error: acc.max_angle_error.max(angle),
        },
    );
    timings.dual = clock.elapsed();

    Ok(PipelineRun {
        map,
        report,
        topological,
        convex,
        triangulation,
        flips,
        star,
        domain,
        verification,
        duality,
        timings,
    })
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

impl PipelineRun {
    pub fn domain_json(&self) -> Result<String> {
        to_json(&self.domain)
    }

    /// Writes the intermediate polygons and the triangulation as JSON, and
    /// each stage as SVG, into `dir`.
    pub fn dump_stages(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("input.json"), to_json(&self.map.to_input())?)?;
        fs::write(dir.join("topological.json"), to_json(&self.topological)?)?;
        fs::write(dir.join("convex.json"), to_json(&self.convex)?)?;
        fs::write(dir.join("delaunay.json"), to_json(&self.triangulation.dump(self.flips)?)?)?;
        fs::write(dir.join("dirichlet.json"), self.domain_json()?)?;
        for (name, layer) in self.layers() {
            fs::write(dir.join(format!("{name}.svg")), svg::render(&[layer]))?;
        }
        Ok(())
    }

    pub fn layers(&self) -> Vec<(&'static str, svg::Layer)> {
        vec![
            ("input", svg::polygon_layer(self.map.polygon().vertices(), "#888888")),
            ("topological", svg::chain_layer(&self.topological, "#1f77b4")),
            ("convex", svg::polygon_layer(&self.convex.vertices, "#2ca02c")),
            ("delaunay", svg::triangulation_layer(&self.triangulation, "#ff7f0e")),
            ("dirichlet", svg::polygon_layer(&self.domain.vertices, "#d62728")),
        ]
    }

    pub fn render_svg(&self) -> String {
        let layers: Vec<svg::Layer> = self.layers().into_iter().map(|(_, l)| l).collect();
        svg::render(&layers)
    }

    pub fn summary(&self) -> String {
        let d = &self.domain;
        let mut s = String::new();
        let g = d.genus;
        s += &format!("genus {g}, input sides {}, vertex orbits {}\n", self.map.side_count(), self.map.orbit_count());
        s += &format!("basepoint moved {:.6} (bound 2 L0 = {:.6})\n", self.convex.c_len, 2.0 * self.convex.l0);
        s += &format!("flips {} (max queue {})\n", self.flips.flips, self.flips.max_queue);
        s += &format!(
            "dirichlet domain: {} sides ({} merged), area {:.12}, perimeter {:.12}\n",
            d.side_count(),
            d.merged,
            d.area,
            d.perimeter
        );
        s += &format!(
            "verification: {} samples, {} translates, max excess {:.3e}, {} violations\n",
            self.verification.samples,
            self.verification.words,
            self.verification.max_violation,
            self.verification.violations
        );
        s += &format!(
            "duality: midpoint offset {:.3e}, angle error {:.3e}\n",
            self.duality.max_midpoint_offset, self.duality.max_angle_error
        );
        let t = &self.timings;
        let ms = |d: Duration| d.as_secs_f64() * 1e3;
        s += &format!(
            "time (ms): validate {:.1}, reduce {:.1}, embed {:.1}, flip {:.1}, dual {:.1}\n",
            ms(t.validate),
            ms(t.reduce),
            ms(t.embed),
            ms(t.flip),
            ms(t.dual)
        );
        s += if self.verification.passed() { "PASS" } else { "FAIL" };
        s
    }
}
