//! SVG rendering of disk figures. The unit disk fills a 1000 x 1000
//! viewport and geodesic segments are drawn as circular arcs.

use std::fmt::Write;

use num_complex::Complex64;

use crate::flip::SurfaceTriangulation;
use crate::hyperbolic::DiskPoint;
use crate::loops::TopologicalPolygon;

const SIZE: f64 = 1000.0;
const SCALE: f64 = 480.0;

/// A `<g>` element.
pub type Layer = String;

fn screen(z: Complex64) -> (f64, f64) {
    (SIZE / 2.0 + SCALE * z.re, SIZE / 2.0 - SCALE * z.im)
}

/// Path commands continuing from `a` along the geodesic to `b`.
pub fn geodesic_arc(a: DiskPoint, b: DiskPoint) -> String {
    let (za, zb) = (a.z(), b.z());
    let (x, y) = screen(zb);
    let cross = za.re * zb.im - za.im * zb.re;
    if cross.abs() < 1e-12 || za.norm_sqr() < 1e-24 {
        return format!("L {x:.3} {y:.3}");
    }
    // The geodesic is the circle through a, b and the inversion of a.
    let inv = za / za.norm_sqr();
    let d = 2.0 * (za.re * (zb.im - inv.im) + zb.re * (inv.im - za.im) + inv.re * (za.im - zb.im));
    let (sa, sb, si) = (za.norm_sqr(), zb.norm_sqr(), inv.norm_sqr());
    let center = Complex64::new(
        (sa * (zb.im - inv.im) + sb * (inv.im - za.im) + si * (za.im - zb.im)) / d,
        (sa * (inv.re - zb.re) + sb * (za.re - inv.re) + si * (zb.re - za.re)) / d,
    );
    let r = SCALE * (za - center).norm();
    let turn = (za - center).re * (zb - center).im - (za - center).im * (zb - center).re;
    // Counterclockwise in the disk is clockwise on screen, where y points down.
    let sweep = if turn > 0.0 { 0 } else { 1 };
    format!("A {r:.3} {r:.3} 0 0 {sweep} {x:.3} {y:.3}")
}

fn path(points: &[DiskPoint], closed: bool) -> String {
    let Some(first) = points.first() else { return String::new() };
    let (x, y) = screen(first.z());
    let mut d = format!("M {x:.3} {y:.3}");
    for w in points.windows(2) {
        write!(d, " {}", geodesic_arc(w[0], w[1])).unwrap();
    }
    if closed && points.len() > 2 {
        write!(d, " {} Z", geodesic_arc(points[points.len() - 1], points[0])).unwrap();
    }
    d
}

fn dot(p: DiskPoint, color: &str) -> String {
    let (x, y) = screen(p.z());
    format!("<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"4\" fill=\"{color}\"/>")
}

pub fn polygon_layer(vertices: &[DiskPoint], color: &str) -> Layer {
    let mut g = format!("<g stroke=\"{color}\" fill=\"none\" stroke-width=\"2\">\n");
    writeln!(g, "<path d=\"{}\"/>", path(vertices, true)).unwrap();
    for v in vertices {
        writeln!(g, "{}", dot(*v, color)).unwrap();
    }
    g + "</g>\n"
}

/// Chains of the contracted spanning tree, solid, and their chords, dashed.
pub fn chain_layer(p: &TopologicalPolygon, color: &str) -> Layer {
    let mut g = format!("<g stroke=\"{color}\" fill=\"none\" stroke-width=\"2\">\n");
    for side in &p.sides {
        writeln!(g, "<path d=\"{}\"/>", path(&side.chain, false)).unwrap();
    }
    writeln!(g, "<path stroke-dasharray=\"8 6\" d=\"{}\"/>", path(&p.vertices, true)).unwrap();
    writeln!(g, "{}", dot(p.basepoint, color)).unwrap();
    g + "</g>\n"
}

pub fn triangulation_layer(t: &SurfaceTriangulation, color: &str) -> Layer {
    let mut g = format!("<g stroke=\"{color}\" fill=\"none\" stroke-width=\"1\">\n");
    for tri in t.triangles() {
        writeln!(g, "<path d=\"{}\"/>", path(&tri.points, true)).unwrap();
    }
    writeln!(g, "{}", dot(t.basepoint(), color)).unwrap();
    g + "</g>\n"
}

pub fn render(layers: &[Layer]) -> String {
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    );
    let c = SIZE / 2.0;
    writeln!(s, "<rect width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\"/>").unwrap();
    writeln!(s, "<circle cx=\"{c}\" cy=\"{c}\" r=\"{SCALE}\" fill=\"none\" stroke=\"black\"/>").unwrap();
    for layer in layers {
        s += layer;
    }
    s + "</svg>\n"
}
