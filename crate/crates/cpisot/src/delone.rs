//! Delone (dual) tessellation data per protocell.
//!
//! Every merged Voronoi vertex is the circumcenter of one Delone tile whose
//! corners are the origin together with the patch points incident to that
//! vertex. Cocircularity is exact; only the circular ordering of the corners
//! is read off numerically.

use crate::error::{Error, Result};
use crate::field::{BaseSpec, QBeta, ZGamma};
use crate::voronoi::Protocell;

/// One Delone tile, dual to a merged Voronoi vertex of a protocell.
pub struct DualFace {
    /// The merged vertex key: indices of incident patch points.
    pub vertex: Vec<usize>,
    /// Corners in circular (counter-clockwise) order: the origin plus all
    /// incident points.
    pub cycle: Vec<ZGamma>,
    /// Squared circumradius, shared exactly by every corner.
    pub r_sq: QBeta,
    /// Numeric circumcenter, for rendering.
    pub center: (f64, f64),
}

impl DualFace {
    /// Sorted squared edge lengths; equal lists mean congruent tiles
    /// (corners on a common circle are determined by their chord lengths).
    pub fn edge_lengths_sq(&self, base: &BaseSpec) -> Vec<QBeta> {
        let n = self.cycle.len();
        let mut out: Vec<QBeta> = (0..n)
            .map(|i| base.norm_sq(&self.cycle[(i + 1) % n].sub(&self.cycle[i])))
            .collect();
        out.sort_by(|x, y| base.qbeta_cmp(x, y));
        out
    }

    /// Translation-class key: the cycle shifted so that its canonically
    /// smallest corner sits at the origin and starts the cycle. Two faces
    /// share a key iff one is a translate of the other.
    pub fn translation_class_key(&self) -> Vec<ZGamma> {
        let k = (0..self.cycle.len())
            .min_by(|&i, &j| self.cycle[i].canon_cmp(&self.cycle[j]))
            .unwrap();
        let base_pt = &self.cycle[k];
        let n = self.cycle.len();
        (0..n)
            .map(|i| self.cycle[(k + i) % n].sub(base_pt))
            .collect()
    }

    /// Numeric (positive) area via the shoelace formula.
    pub fn area_f64(&self, base: &BaseSpec) -> f64 {
        let pts: Vec<(f64, f64)> = self
            .cycle
            .iter()
            .map(|z| base.zgamma_complex_f64(z))
            .collect();
        let n = pts.len();
        let mut s = 0.0;
        for i in 0..n {
            let (x0, y0) = pts[i];
            let (x1, y1) = pts[(i + 1) % n];
            s += x0 * y1 - x1 * y0;
        }
        s / 2.0
    }
}

/// The dual faces of one protocell: one per merged vertex, corners ordered
/// by angle around the circumcenter. Cocircular quadruples stay single
/// faces because merging already collapsed their vertices.
pub fn delone_faces(cell: &Protocell, base: &BaseSpec) -> Result<Vec<DualFace>> {
    let pts = &cell.patch.points;
    let mut faces = Vec::with_capacity(cell.vertices.len());
    for v in &cell.vertices {
        // exact cocircularity: with (i, j) fixing the circle through the
        // origin, every further incident w must satisfy E_w = 0
        let i = v.incident[0];
        let j = v.incident[1];
        let n_i = base.norm_sq(&pts[i]);
        let n_j = base.norm_sq(&pts[j]);
        let t_ij = base.cross_decompose(&pts[i], &pts[j]).t;
        for &w in &v.incident[2..] {
            let n_w = base.norm_sq(&pts[w]);
            let t_jw = base.cross_decompose(&pts[j], &pts[w]).t;
            let t_iw = base.cross_decompose(&pts[i], &pts[w]).t;
            let e_w = base
                .qbeta_mul(&n_w, &t_ij)
                .add(&base.qbeta_mul(&n_i, &t_jw))
                .sub(&base.qbeta_mul(&n_j, &t_iw));
            if !e_w.is_zero() {
                return Err(Error::Precondition(format!(
                    "vertex {:?} is not exactly cocircular",
                    v.incident
                )));
            }
        }

        let mut corners: Vec<ZGamma> = vec![ZGamma::zero()];
        corners.extend(v.incident.iter().map(|&w| pts[w].clone()));
        let (cx, cy) = v.approx;
        let mut keyed: Vec<(f64, ZGamma)> = corners
            .into_iter()
            .map(|z| {
                let (x, y) = base.zgamma_complex_f64(&z);
                ((y - cy).atan2(x - cx), z)
            })
            .collect();
        keyed.sort_by(|p, q| p.0.total_cmp(&q.0));
        for w in keyed.windows(2) {
            // distinct points on one circle have distinct angles
            debug_assert!(w[1].0 - w[0].0 > 1e-9);
        }
        faces.push(DualFace {
            vertex: v.incident.clone(),
            cycle: keyed.into_iter().map(|p| p.1).collect(),
            r_sq: v.r_sq.clone(),
            center: v.approx,
        });
    }
    Ok(faces)
}

/// The maximal neighbor distance squared (`Delta*^2`), as stored by
/// protocell construction.
pub fn delta_star_sq(cell: &Protocell) -> QBeta {
    cell.delta_star_sq.clone()
}
