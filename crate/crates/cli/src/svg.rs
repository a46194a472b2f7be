//! Plain SVG drawings of 2D lattice polygons: lattice points as dots,
//! barycenters as crosses, outlines of `P` and of its barycentric hull.

use std::fmt::Write;

use num_traits::ToPrimitive;
use toric_core::polytopes::{barycentric_hull, LatticePolytope};
use toric_core::QVector;

use crate::CliError;

const UNIT: f64 = 100.0;
const MARGIN: f64 = 0.5;

fn xy(v: &QVector) -> (f64, f64) {
    let c = v.coords();
    (c[0].to_f64().unwrap_or(0.0), c[1].to_f64().unwrap_or(0.0))
}

/// Vertices in counterclockwise order around their centroid.
fn cyclic(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let n = points.len() as f64;
    let cx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let cy = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut out = points.to_vec();
    out.sort_by(|a, b| {
        let ta = (a.1 - cy).atan2(a.0 - cx);
        let tb = (b.1 - cy).atan2(b.0 - cx);
        ta.total_cmp(&tb)
    });
    out
}

struct Frame {
    min_x: f64,
    max_y: f64,
}

impl Frame {
    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (
            (x - self.min_x + MARGIN) * UNIT,
            (self.max_y - y + MARGIN) * UNIT,
        )
    }
}

fn outline(out: &mut String, frame: &Frame, pts: &[(f64, f64)], style: &str) {
    let coords: Vec<String> = cyclic(pts)
        .into_iter()
        .map(|p| {
            let (x, y) = frame.map(p);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let _ = writeln!(out, r#"  <polygon points="{}" {style}/>"#, coords.join(" "));
}

/// Draws `P`; with `barycenters` also the barycentric hull.
pub fn render(p: &LatticePolytope, barycenters: bool) -> Result<String, CliError> {
    if p.ambient_dim() != 2 || !p.is_full_dimensional() {
        return Err(CliError::usage(
            "SVG output needs a full-dimensional polygon",
        ));
    }
    let verts: Vec<(f64, f64)> = p.vertices().iter().map(|v| xy(&v.to_q())).collect();
    let min_x = verts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let max_x = verts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let min_y = verts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let max_y = verts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let frame = Frame { min_x, max_y };
    let w = (max_x - min_x + 2.0 * MARGIN) * UNIT;
    let h = (max_y - min_y + 2.0 * MARGIN) * UNIT;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w:.3} {h:.3}" width="{w:.0}" height="{h:.0}">"#
    );
    outline(
        &mut out,
        &frame,
        &verts,
        r#"fill="none" stroke="black" stroke-width="2""#,
    );
    if barycenters {
        let bh = barycentric_hull(p)?;
        let hull: Vec<(f64, f64)> = bh.hull_vertices.iter().map(xy).collect();
        if hull.len() >= 3 {
            outline(
                &mut out,
                &frame,
                &hull,
                r#"fill="none" stroke="gray" stroke-width="1.5""#,
            );
        }
        let s = UNIT * 0.06;
        for b in &bh.barycenters {
            let (x, y) = frame.map(xy(b));
            let _ = writeln!(
                out,
                r#"  <path d="M{:.3},{:.3} L{:.3},{:.3} M{:.3},{:.3} L{:.3},{:.3}" stroke="red" stroke-width="1.5"/>"#,
                x - s,
                y - s,
                x + s,
                y + s,
                x - s,
                y + s,
                x + s,
                y - s
            );
        }
    }
    for m in p.lattice_points()? {
        let (x, y) = frame.map(xy(&m.to_q()));
        let _ = writeln!(
            out,
            r#"  <circle cx="{x:.3}" cy="{y:.3}" r="{:.3}" fill="black"/>"#,
            UNIT * 0.05
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}
