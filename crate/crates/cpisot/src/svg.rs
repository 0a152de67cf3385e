//! SVG cards for palettes: one Voronoi cell per protocell, with the cell
//! polygon, the center point and double-line edges to the neighbors.
//! Coordinates are plain decimals rounded to 1e-6; the exact data lives in
//! the JSON documents.

use std::fmt::Write as _;

use crate::field::BaseSpec;
use crate::voronoi::Protocell;

const CARD: f64 = 120.0;
const MARGIN: f64 = 10.0;

fn fmt_coord(x: f64) -> String {
    let mut s = format!("{x:.6}");
    while s.ends_with('0') {
        s.pop();
    }
    if s.ends_with('.') {
        s.pop();
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// One card per protocell, laid out on a horizontal strip. The first line
/// after the XML prolog is a version comment; everything below it is a
/// deterministic function of the input.
pub fn render_palette_svg(base: &BaseSpec, cells: &[Protocell]) -> String {
    // scale all cards uniformly so the largest cell fits
    let mut extent = 1e-9f64;
    for cell in cells {
        for v in &cell.vertices {
            extent = extent.max(v.approx.0.abs()).max(v.approx.1.abs());
        }
        for n in &cell.neighbors {
            let (x, y) = base.zgamma_complex_f64(n);
            extent = extent.max(x.abs()).max(y.abs());
        }
    }
    let scale = (CARD / 2.0 - MARGIN) / extent;

    let width = CARD * cells.len() as f64;
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<!-- cpisot {} palette rendering -->",
        env!("CARGO_PKG_VERSION")
    );
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{width}\" height=\"{CARD}\" viewBox=\"0 0 {width} {CARD}\">"
    );
    for (idx, cell) in cells.iter().enumerate() {
        let cx = CARD * idx as f64 + CARD / 2.0;
        let cy = CARD / 2.0;
        // SVG y grows downward
        let map = |x: f64, y: f64| (cx + scale * x, cy - scale * y);
        let _ = writeln!(out, "  <g>");

        let mut corners: Vec<(f64, f64)> = cell.vertices.iter().map(|v| v.approx).collect();
        corners.sort_by(|p, q| p.1.atan2(p.0).total_cmp(&q.1.atan2(q.0)));
        let pts: Vec<String> = corners
            .iter()
            .map(|&(x, y)| {
                let (px, py) = map(x, y);
                format!("{},{}", fmt_coord(px), fmt_coord(py))
            })
            .collect();
        let _ = writeln!(
            out,
            "    <polygon points=\"{}\" fill=\"#eef\" stroke=\"#336\" stroke-width=\"1\"/>",
            pts.join(" ")
        );

        for n in &cell.neighbors {
            let (nx, ny) = base.zgamma_complex_f64(n);
            // double line: two thin parallels offset orthogonally
            let len = (nx * nx + ny * ny).sqrt();
            let (ox, oy) = (-ny / len * 1.2 / scale, nx / len * 1.2 / scale);
            for s in [-1.0, 1.0] {
                let (x0, y0) = map(s * ox, s * oy);
                let (x1, y1) = map(nx + s * ox, ny + s * oy);
                let _ = writeln!(
                    out,
                    "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" \
                     stroke=\"#999\" stroke-width=\"0.5\"/>",
                    fmt_coord(x0),
                    fmt_coord(y0),
                    fmt_coord(x1),
                    fmt_coord(y1)
                );
            }
            let (px, py) = map(nx, ny);
            let _ = writeln!(
                out,
                "    <circle cx=\"{}\" cy=\"{}\" r=\"2\" fill=\"#633\"/>",
                fmt_coord(px),
                fmt_coord(py)
            );
        }
        let (px, py) = map(0.0, 0.0);
        let _ = writeln!(
            out,
            "    <circle cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"#000\"/>",
            fmt_coord(px),
            fmt_coord(py)
        );
        let _ = writeln!(out, "  </g>");
    }
    out.push_str("</svg>\n");
    out
}
