//! Floating-point oracles shared by the integration tests.

use cpisot::field::BaseSpec;
use cpisot::voronoi::Protocell;

/// Numeric Voronoi cell of the origin against the given planar points:
/// half-plane intersection by Sutherland-Hodgman clipping, starting from a
/// large box. Returns the polygon vertices.
pub fn clip_cell(points: &[(f64, f64)], start: f64) -> Vec<(f64, f64)> {
    let mut poly = vec![
        (-start, -start),
        (start, -start),
        (start, start),
        (-start, start),
    ];
    for &(px, py) in points {
        // keep the side with px*x + py*y <= (px^2+py^2)/2
        let rhs = (px * px + py * py) / 2.0;
        let inside = |&(x, y): &(f64, f64)| px * x + py * y <= rhs;
        let mut next = Vec::with_capacity(poly.len() + 1);
        for i in 0..poly.len() {
            let cur = poly[i];
            let nxt = poly[(i + 1) % poly.len()];
            let cur_in = inside(&cur);
            let nxt_in = inside(&nxt);
            if cur_in {
                next.push(cur);
            }
            if cur_in != nxt_in {
                let da = px * cur.0 + py * cur.1 - rhs;
                let db = px * nxt.0 + py * nxt.1 - rhs;
                let t = da / (da - db);
                next.push((cur.0 + t * (nxt.0 - cur.0), cur.1 + t * (nxt.1 - cur.1)));
            }
        }
        poly = next;
        if poly.is_empty() {
            break;
        }
    }
    poly
}

/// Brute-force `(delta^2, Delta^2)` of a protocell from its patch alone:
/// `delta` is twice the distance to the nearest bisector, `Delta` twice the
/// farthest cell corner.
pub fn brute_force_cell_stats(cell: &Protocell, base: &BaseSpec) -> (f64, f64) {
    let pts: Vec<(f64, f64)> = cell
        .patch
        .points
        .iter()
        .map(|z| base.zgamma_complex_f64(z))
        .collect();
    let min_norm_sq = pts
        .iter()
        .map(|&(x, y)| x * x + y * y)
        .fold(f64::INFINITY, f64::min);
    let poly = clip_cell(&pts, 1e3);
    assert!(poly.len() >= 3, "cell must be bounded by its patch");
    let max_r_sq = poly
        .iter()
        .map(|&(x, y)| x * x + y * y)
        .fold(0.0f64, f64::max);
    (min_norm_sq, 4.0 * max_r_sq)
}
