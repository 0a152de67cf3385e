//! L-patches, the Xi partition of the window, and exact protocells.
//!
//! Every Voronoi predicate reduces to a sign test in `Q(beta)` through the
//! identity `x_i x_j (conj(x_i) - conj(x_j)) = n_i x_j - n_j x_i` (with
//! `n_i = |x_i|^2`), which keeps all computations inside the cubic field:
//!
//! * vertex of the bisectors of `0,x_i` and `0,x_j`:
//!   `v_ij = i (n_i x_j - n_j x_i) / (2 Im(gamma) t_ij)` where
//!   `t_ij` is the t-component of `cross_decompose(x_i, x_j)`;
//! * `|v_ij|^2 = n_i n_j |x_i - x_j|^2 / (4 (Im gamma)^2 t_ij^2)`;
//! * the half-plane test `|v_ij| <= |v_ij - w|` has the sign of
//!   `E_w * sign(t_ij)` with `E_w = n_w t_ij + n_i t_jw - n_j t_iw`.
//!
//! `E_w` vanishes exactly when `w` lies on the circle through `0, x_i, x_j`,
//! so cocircular degeneracies are detected, not perturbed.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::cutproject::{enumerate_band, l_bound_sq, Window};
use crate::error::{Error, Result};
use crate::field::{BaseSpec, QBeta, ZGamma};
use crate::interval::rat_int;

/// Relative f64 guard below which predicate signs fall back to exact
/// arithmetic.
const PRED_GUARD: f64 = 1e-9;

/// The common local configuration of all points whose Galois image lies in
/// `[interval.0, interval.1) + [0,0]`… i.e. the L-patch valid on one Xi
/// interval. Excludes the origin.
#[derive(Clone, Debug)]
pub struct Patch {
    pub points: Vec<ZGamma>,
    pub interval: (QBeta, QBeta),
}

/// A merged Voronoi vertex of the protocell.
#[derive(Clone, Debug)]
pub struct Vertex {
    /// Indices into the patch points of every point on the circumcircle
    /// through the origin (at least two).
    pub incident: Vec<usize>,
    pub r_sq: QBeta,
    pub approx: (f64, f64),
}

/// The Voronoi cell of the origin with respect to `{0} ∪ patch`, translated
/// to the origin, with its exact size statistics.
#[derive(Clone, Debug)]
pub struct Protocell {
    pub patch: Patch,
    pub vertices: Vec<Vertex>,
    pub neighbors: Vec<ZGamma>,
    pub delta_sq: QBeta,
    pub big_delta_sq: QBeta,
    pub delta_star_sq: QBeta,
}

pub type CanonicalKey = Vec<[BigInt; 3]>;

impl Protocell {
    /// Sorted neighbor triples; neighbors determine the cell.
    pub fn canonical_key(&self) -> CanonicalKey {
        let mut key: CanonicalKey = self.neighbors.iter().map(|z| z.key()).collect();
        key.sort();
        key
    }
}

/// The finite set `Xi = {z' : z in P_L(0)} ∪ {c - z' : z in P_L(0)}`,
/// deduplicated and sorted; contains 0 and c since `0 in P_L(0)`.
pub fn xi_set(window: &Window, l_sq: &QBeta, base: &BaseSpec) -> Vec<QBeta> {
    let zero = QBeta::zero();
    let pts = enumerate_band(&zero, true, window.c(), false, l_sq, base);
    let mut xi: Vec<QBeta> = Vec::with_capacity(2 * pts.len());
    for z in &pts {
        let zp = base.galois_real(z);
        xi.push(window.c().sub(&zp));
        xi.push(zp);
    }
    xi.sort_by(|x, y| base.qbeta_cmp(x, y));
    xi.dedup();
    xi
}

/// The L-patch constant on `[xi_lo, xi_hi)`: points `z` with `|z|^2 <= L^2`
/// and `t + z' in [0,c)` for every `t` in the interval, which reduces to
/// `z' in [-xi_lo, c - xi_hi]`. Verified against the pointwise patch at
/// `t = xi_lo`; a mismatch means Xi was computed with a different L.
pub fn patch_for_interval(
    window: &Window,
    xi_lo: &QBeta,
    xi_hi: &QBeta,
    l_sq: &QBeta,
    base: &BaseSpec,
) -> Result<Patch> {
    let lo = xi_lo.neg();
    let hi = window.c().sub(xi_hi);
    let mut pts = enumerate_band(&lo, true, &hi, true, l_sq, base);
    // pointwise patch at t = xi_lo: z' in [-xi_lo, c - xi_lo)
    let pointwise = enumerate_band(&lo, true, &window.c().sub(xi_lo), false, l_sq, base);
    if pts != pointwise {
        return Err(Error::InconsistentPartition);
    }
    pts.retain(|z| !z.is_zero());
    Ok(Patch {
        points: pts,
        interval: (xi_lo.clone(), xi_hi.clone()),
    })
}

/// Exact squared circumradius of the circle through `0, x_i, x_j`.
pub fn circumradius_sq(xi: &ZGamma, xj: &ZGamma, base: &BaseSpec) -> Result<QBeta> {
    let t = base.cross_decompose(xi, xj).t;
    if t.is_zero() {
        return Err(Error::Collinear);
    }
    let ni = base.norm_sq(xi);
    let nj = base.norm_sq(xj);
    let diff = base.norm_sq(&xi.sub(xj));
    let num = base.qbeta_mul(&ni, &base.qbeta_mul(&nj, &diff));
    let den = base
        .qbeta_mul(base.im_gamma_sq(), &base.qbeta_mul(&t, &t))
        .scale(&rat_int(4));
    Ok(base.qbeta_mul(&num, &base.qbeta_inverse(&den)?))
}

/// Pairwise exact data of a patch, with f64 mirrors for the fast sign path.
struct PatchTables {
    n: Vec<QBeta>,
    n_f: Vec<f64>,
    t: Vec<Vec<QBeta>>,
    t_f: Vec<Vec<f64>>,
}

impl PatchTables {
    fn build(points: &[ZGamma], base: &BaseSpec) -> PatchTables {
        let n: Vec<QBeta> = points.iter().map(|z| base.norm_sq(z)).collect();
        let n_f: Vec<f64> = n.iter().map(|q| base.qbeta_f64(q)).collect();
        let len = points.len();
        let mut t = vec![vec![QBeta::zero(); len]; len];
        let mut t_f = vec![vec![0.0f64; len]; len];
        for i in 0..len {
            for j in 0..i {
                let tij = base.cross_decompose(&points[i], &points[j]).t;
                t_f[i][j] = base.qbeta_f64(&tij);
                t_f[j][i] = -t_f[i][j];
                t[j][i] = tij.neg();
                t[i][j] = tij;
            }
        }
        PatchTables { n, n_f, t, t_f }
    }

    /// Sign of `E_w = n_w t_ij + n_i t_jw - n_j t_iw`, f64-first.
    fn e_sign(&self, base: &BaseSpec, i: usize, j: usize, w: usize) -> i32 {
        let approx = self.n_f[w] * self.t_f[i][j] + self.n_f[i] * self.t_f[j][w]
            - self.n_f[j] * self.t_f[i][w];
        let scale = (self.n_f[w] * self.t_f[i][j]).abs()
            + (self.n_f[i] * self.t_f[j][w]).abs()
            + (self.n_f[j] * self.t_f[i][w]).abs();
        if approx.abs() > PRED_GUARD * scale {
            return if approx > 0.0 { 1 } else { -1 };
        }
        let exact = base
            .qbeta_mul(&self.n[w], &self.t[i][j])
            .add(&base.qbeta_mul(&self.n[i], &self.t[j][w]))
            .sub(&base.qbeta_mul(&self.n[j], &self.t[i][w]));
        base.qbeta_sign(&exact)
    }

    fn t_sign(&self, base: &BaseSpec, i: usize, j: usize) -> i32 {
        let approx = self.t_f[i][j];
        let scale = self.n_f[i].sqrt() * self.n_f[j].sqrt();
        if approx.abs() > PRED_GUARD * scale {
            return if approx > 0.0 { 1 } else { -1 };
        }
        base.qbeta_sign(&self.t[i][j])
    }
}

/// Construct the protocell of the origin from its L-patch.
pub fn protocell_from_patch(patch: &Patch, base: &BaseSpec) -> Result<Protocell> {
    let pts = &patch.points;
    let len = pts.len();
    if len < 3 {
        return Err(Error::UnboundedCell);
    }
    // Boundedness needs the patch directions to positively span the plane:
    // no angular gap of pi or more. The guaranteed triple keeps the gaps
    // far from pi, so an f64 check suffices.
    {
        let mut angles: Vec<f64> = pts
            .iter()
            .map(|z| {
                let (re, im) = base.zgamma_complex_f64(z);
                im.atan2(re)
            })
            .collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut max_gap: f64 = 2.0 * std::f64::consts::PI + angles[0] - angles[len - 1];
        for w in angles.windows(2) {
            max_gap = max_gap.max(w[1] - w[0]);
        }
        if max_gap >= std::f64::consts::PI - 1e-9 {
            return Err(Error::UnboundedCell);
        }
    }

    let tab = PatchTables::build(pts, base);
    let im_f = base.imgamma_f64();

    // incident-set -> (pair, r_sq, approx)
    let mut merged: HashMap<Vec<usize>, Vertex> = HashMap::new();
    for i in 0..len {
        'pair: for j in (i + 1)..len {
            let s_t = tab.t_sign(base, i, j);
            if s_t == 0 {
                continue; // collinear with the origin: no candidate vertex
            }
            let mut incident = vec![i, j];
            for w in 0..len {
                if w == i || w == j {
                    continue;
                }
                let s = tab.e_sign(base, i, j, w) * s_t;
                if s < 0 {
                    continue 'pair; // some w strictly beats the vertex
                }
                if s == 0 {
                    incident.push(w);
                }
            }
            incident.sort_unstable();
            if merged.contains_key(&incident) {
                continue; // cocircular pair already represented
            }
            let r_sq = circumradius_sq(&pts[i], &pts[j], base).expect("t != 0");
            // v = i (n_i x_j - n_j x_i) / (2 Im(gamma) t_ij), numerically
            let (xi_re, xi_im) = base.zgamma_complex_f64(&pts[i]);
            let (xj_re, xj_im) = base.zgamma_complex_f64(&pts[j]);
            let p_re = tab.n_f[i] * xj_re - tab.n_f[j] * xi_re;
            let p_im = tab.n_f[i] * xj_im - tab.n_f[j] * xi_im;
            let d = 2.0 * im_f * tab.t_f[i][j];
            let approx = (-p_im / d, p_re / d);
            merged.insert(incident.clone(), Vertex { incident, r_sq, approx });
        }
    }
    if merged.is_empty() {
        return Err(Error::UnboundedCell);
    }

    let mut vertices: Vec<Vertex> = merged.into_values().collect();
    vertices.sort_by(|a, b| a.incident.cmp(&b.incident));

    let mut appearances = vec![0usize; len];
    for v in &vertices {
        for &w in &v.incident {
            appearances[w] += 1;
        }
    }
    let neighbor_idx: Vec<usize> = (0..len).filter(|&w| appearances[w] >= 2).collect();
    if neighbor_idx.len() < 3 {
        return Err(Error::UnboundedCell);
    }
    let neighbors: Vec<ZGamma> = neighbor_idx.iter().map(|&w| pts[w].clone()).collect();

    let min_max = |vals: Vec<QBeta>| -> (QBeta, QBeta) {
        let mut min = vals[0].clone();
        let mut max = vals[0].clone();
        for v in &vals[1..] {
            if base.qbeta_sign(&v.sub(&min)) < 0 {
                min = v.clone();
            }
            if base.qbeta_sign(&v.sub(&max)) > 0 {
                max = v.clone();
            }
        }
        (min, max)
    };
    let (delta_sq, delta_star_sq) =
        min_max(neighbor_idx.iter().map(|&w| tab.n[w].clone()).collect());
    let (_, max_r) = min_max(vertices.iter().map(|v| v.r_sq.clone()).collect());
    let big_delta_sq = max_r.scale(&rat_int(4));

    Ok(Protocell {
        patch: patch.clone(),
        vertices,
        neighbors,
        delta_sq,
        big_delta_sq,
        delta_star_sq,
    })
}

/// Memoized patch -> protocell map, shared across palette runs of a sweep.
#[derive(Default)]
pub struct PatchMemo {
    cells: HashMap<CanonicalKey, Protocell>,
}

impl PatchMemo {
    pub fn new() -> Self {
        PatchMemo::default()
    }

    fn get_or_build(&mut self, patch: &Patch, base: &BaseSpec) -> Result<Protocell> {
        let mut key: CanonicalKey = patch.points.iter().map(|z| z.key()).collect();
        key.sort();
        if let Some(cell) = self.cells.get(&key) {
            let mut cell = cell.clone();
            cell.patch.interval = patch.interval.clone();
            return Ok(cell);
        }
        let cell = protocell_from_patch(patch, base)?;
        self.cells.insert(key, cell.clone());
        Ok(cell)
    }
}

/// Algorithm 1: the palette of `Sigma([0,c))` — all distinct protocells.
/// `l_sq` defaults to the a-priori bound.
pub fn palette(window: &Window, base: &BaseSpec, l_sq: Option<QBeta>) -> Result<Vec<Protocell>> {
    palette_with_memo(window, base, l_sq, &mut PatchMemo::new())
}

pub fn palette_with_memo(
    window: &Window,
    base: &BaseSpec,
    l_sq: Option<QBeta>,
    memo: &mut PatchMemo,
) -> Result<Vec<Protocell>> {
    let l_sq = l_sq.unwrap_or_else(|| l_bound_sq(window, base).0);
    let xi = xi_set(window, &l_sq, base);
    let mut cells: Vec<Protocell> = Vec::new();
    let mut seen: Vec<CanonicalKey> = Vec::new();
    for pair in xi.windows(2) {
        let patch = patch_for_interval(window, &pair[0], &pair[1], &l_sq, base)?;
        let cell = memo.get_or_build(&patch, base)?;
        let key = cell.canonical_key();
        if !seen.contains(&key) {
            seen.push(key);
            cells.push(cell);
        }
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutproject::DiskQuery;
    use crate::field::make_base;
    use crate::interval::Rat;
    use num_traits::Zero;

    fn tribonacci() -> BaseSpec {
        make_base(1, 1).unwrap()
    }

    fn window_m2(base: &BaseSpec) -> Window {
        Window::new(QBeta::new(rat_int(1), Rat::zero(), rat_int(1)), base).unwrap()
    }

    fn l_sq_m2(base: &BaseSpec) -> QBeta {
        l_bound_sq(&window_m2(base), base).0
    }

    #[test]
    fn xi_sizes_match_the_worked_examples() {
        let base = tribonacci();
        let w = window_m2(&base);
        // The union of the two 28-element mirror sets has exactly 22
        // coincidences, giving 34 distinct cut points.
        let xi = xi_set(&w, &l_sq_m2(&base), &base);
        assert_eq!(xi.len(), 34);
        assert!(xi[0].is_zero());
        assert_eq!(xi.last().unwrap(), w.c());

        let w2 = Window::new(QBeta::beta_sq(), &base).unwrap();
        let (l_sq2, _, _) = l_bound_sq(&w2, &base);
        assert_eq!(xi_set(&w2, &l_sq2, &base).len(), 40);
    }

    #[test]
    fn first_patch_of_the_m2_example() {
        let base = tribonacci();
        let w = window_m2(&base);
        let l_sq = l_sq_m2(&base);
        let xi = xi_set(&w, &l_sq, &base);
        let patch = patch_for_interval(&w, &xi[0], &xi[1], &l_sq, &base).unwrap();
        // known members: 1, gamma^-1 = 1+gamma+gamma^2, gamma^-2 = 2+2gamma+gamma^2,
        // 2+gamma+gamma^2
        for z in [
            ZGamma::one(),
            ZGamma::new(1, 1, 1),
            ZGamma::new(2, 2, 1),
            ZGamma::new(2, 1, 1),
        ] {
            assert!(patch.points.contains(&z), "missing {z:?}");
        }
        assert!(!patch.points.iter().any(|z| z.is_zero()));
    }

    #[test]
    fn mirror_interval_patch_is_the_negation() {
        let base = tribonacci();
        let w = window_m2(&base);
        let l_sq = l_sq_m2(&base);
        let xi = xi_set(&w, &l_sq, &base);
        let n = xi.len();
        let first = patch_for_interval(&w, &xi[0], &xi[1], &l_sq, &base).unwrap();
        let last = patch_for_interval(&w, &xi[n - 2], &xi[n - 1], &l_sq, &base).unwrap();
        let mut negated: Vec<ZGamma> = first.points.iter().map(|z| z.neg()).collect();
        negated.sort_by(|x, y| x.canon_cmp(y));
        assert_eq!(last.points, negated);
    }

    #[test]
    fn inconsistent_partition_is_detected() {
        let base = tribonacci();
        let w = window_m2(&base);
        let l_sq = l_sq_m2(&base);
        let xi = xi_set(&w, &l_sq, &base);
        // a patch over a non-interval of the partition straddles a cut point
        let res = patch_for_interval(&w, &xi[0], &xi[2], &l_sq, &base);
        assert!(matches!(res, Err(Error::InconsistentPartition)));
    }

    #[test]
    fn circumradius_examples() {
        let base = tribonacci();
        // (gamma^-2, gamma^-1): beta(beta^2-1)/(3beta^2-1)
        let gm1 = ZGamma::new(1, 1, 1);
        let gm2 = ZGamma::new(2, 2, 1);
        let r = circumradius_sq(&gm2, &gm1, &base).unwrap();
        let num = base.qbeta_mul(&QBeta::beta(), &QBeta::beta_sq().sub(&QBeta::one()));
        let den = QBeta::beta_sq().scale(&rat_int(3)).sub(&QBeta::one());
        let expected = base.qbeta_mul(&num, &base.qbeta_inverse(&den).unwrap());
        assert_eq!(r, expected);
        assert!((base.qbeta_f64(&r).sqrt() - 0.692).abs() < 1e-3);

        // (1, gamma^-2) lies on the same circle
        let r2 = circumradius_sq(&ZGamma::one(), &gm2, &base).unwrap();
        assert_eq!(r2, expected);

        // (gamma^-1, 1+gamma^-1) ~ 0.510
        let r3 = circumradius_sq(&gm1, &ZGamma::new(2, 1, 1), &base).unwrap();
        assert!((base.qbeta_f64(&r3).sqrt() - 0.510).abs() < 1e-3);

        // collinear with the origin: x and -x
        assert!(matches!(
            circumradius_sq(&ZGamma::one(), &ZGamma::new(-1, 0, 0), &base),
            Err(Error::Collinear)
        ));
    }

    #[test]
    fn first_protocell_statistics() {
        let base = tribonacci();
        let w = window_m2(&base);
        let l_sq = l_sq_m2(&base);
        let xi = xi_set(&w, &l_sq, &base);
        let patch = patch_for_interval(&w, &xi[0], &xi[1], &l_sq, &base).unwrap();
        let cell = protocell_from_patch(&patch, &base).unwrap();

        let mut names = cell.canonical_key();
        let mut expected: CanonicalKey = [
            ZGamma::one(),
            ZGamma::new(2, 1, 1),
            ZGamma::new(1, 1, 1),
            ZGamma::new(2, 2, 1),
        ]
        .iter()
        .map(|z| z.key())
        .collect();
        names.sort();
        expected.sort();
        assert_eq!(names, expected);

        // delta = |gamma^-2| = gamma', so delta^2 = gamma'^2
        assert_eq!(cell.delta_sq, *base.gamma_prime_sq());
        // Delta^2 = 4 beta(beta^2-1)/(3beta^2-1)
        let num = base.qbeta_mul(&QBeta::beta(), &QBeta::beta_sq().sub(&QBeta::one()));
        let den = QBeta::beta_sq().scale(&rat_int(3)).sub(&QBeta::one());
        let expected_d = base
            .qbeta_mul(&num, &base.qbeta_inverse(&den).unwrap())
            .scale(&rat_int(4));
        assert_eq!(cell.big_delta_sq, expected_d);
        assert!((base.qbeta_f64(&cell.big_delta_sq).sqrt() - 1.384).abs() < 1e-3);
        // Delta*^2 = max neighbor norm = |1|^2 (the other neighbors are
        // gamma^-1, 1+gamma^-1, gamma^-2, all inside the unit circle)
        assert_eq!(cell.delta_star_sq, QBeta::one());
    }

    #[test]
    fn hexagonal_cell_from_the_minimal_triple() {
        let base = tribonacci();
        let w = window_m2(&base);
        let triple = crate::cutproject::guaranteed_triple(&w, &base);
        let mut pts: Vec<ZGamma> = triple.to_vec();
        pts.extend(triple.iter().map(|z| z.neg()));
        pts.sort_by(|x, y| x.canon_cmp(y));
        let patch = Patch {
            points: pts,
            interval: (QBeta::zero(), QBeta::one()),
        };
        let cell = protocell_from_patch(&patch, &base).unwrap();
        assert_eq!(cell.neighbors.len(), 6);
        assert_eq!(cell.vertices.len(), 6);
        // delta = min of the three power moduli; Delta* = max
        let norms: Vec<QBeta> = triple.iter().map(|z| base.norm_sq(z)).collect();
        let mut min = norms[0].clone();
        let mut max = norms[0].clone();
        for v in &norms[1..] {
            if base.qbeta_sign(&v.sub(&min)) < 0 {
                min = v.clone();
            }
            if base.qbeta_sign(&v.sub(&max)) > 0 {
                max = v.clone();
            }
        }
        assert_eq!(cell.delta_sq, min);
        assert_eq!(cell.delta_star_sq, max);
    }

    #[test]
    fn unbounded_patch_is_rejected() {
        let base = tribonacci();
        // all points in a half-plane: 1, 2, 1+gamma with gamma in the upper
        // half... use 1, 2, 3 (collinear on the real axis)
        let patch = Patch {
            points: vec![ZGamma::one(), ZGamma::new(2, 0, 0), ZGamma::new(3, 0, 0)],
            interval: (QBeta::zero(), QBeta::one()),
        };
        assert!(matches!(
            protocell_from_patch(&patch, &base),
            Err(Error::UnboundedCell)
        ));
    }

    #[test]
    fn palette_sizes_for_the_worked_examples() {
        let base = tribonacci();
        let w = window_m2(&base);
        let pal = palette(&w, &base, None).unwrap();
        assert_eq!(pal.len(), 7);

        let w2 = Window::new(QBeta::beta_sq(), &base).unwrap();
        let pal2 = palette(&w2, &base, None).unwrap();
        assert_eq!(pal2.len(), 7);

        // improved bound: L^2 = max Delta^2 of the first run
        let mut improved = pal2[0].big_delta_sq.clone();
        for cell in &pal2[1..] {
            if base.qbeta_sign(&cell.big_delta_sq.sub(&improved)) > 0 {
                improved = cell.big_delta_sq.clone();
            }
        }
        let xi_small = xi_set(&w2, &improved, &base);
        assert_eq!(xi_small.len(), 8);
        let pal2b = palette(&w2, &base, Some(improved)).unwrap();
        let keys: Vec<_> = pal2.iter().map(|c| c.canonical_key()).collect();
        let keys_b: Vec<_> = pal2b.iter().map(|c| c.canonical_key()).collect();
        assert_eq!(keys, keys_b);
    }

    #[test]
    fn palette_is_rotation_symmetric() {
        let base = tribonacci();
        let pal = palette(&window_m2(&base), &base, None).unwrap();
        let keys: Vec<CanonicalKey> = pal.iter().map(|c| c.canonical_key()).collect();
        for cell in &pal {
            let mut neg: CanonicalKey = cell
                .neighbors
                .iter()
                .map(|z| z.neg().key())
                .collect();
            neg.sort();
            assert!(keys.contains(&neg));
        }
    }

    #[test]
    fn exact_stats_match_a_floating_voronoi_oracle() {
        // brute-force check on one patch: the kept vertices equal the
        // numeric ones and the statistics agree to 1e-9
        let base = tribonacci();
        let w = window_m2(&base);
        let l_sq = l_sq_m2(&base);
        let xi = xi_set(&w, &l_sq, &base);
        let patch = patch_for_interval(&w, &xi[3], &xi[4], &l_sq, &base).unwrap();
        let cell = protocell_from_patch(&patch, &base).unwrap();

        // numeric reconstruction
        let pts: Vec<(f64, f64)> = patch
            .points
            .iter()
            .map(|z| base.zgamma_complex_f64(z))
            .collect();
        let mut num_delta_sq = f64::INFINITY;
        let mut num_big_sq = 0.0f64;
        for (i, &(xa, ya)) in pts.iter().enumerate() {
            for (_j, &(xb, yb)) in pts.iter().enumerate().skip(i + 1) {
                let det = 2.0 * (xa * yb - ya * xb);
                if det.abs() < 1e-12 {
                    continue;
                }
                let na = xa * xa + ya * ya;
                let nb = xb * xb + yb * yb;
                let vx = (yb * na - ya * nb) / det;
                let vy = (xa * nb - xb * na) / det;
                let keep = pts.iter().all(|&(xw, yw)| {
                    2.0 * (vx * xw + vy * yw) <= xw * xw + yw * yw + 1e-9
                });
                if keep {
                    num_big_sq = num_big_sq.max(4.0 * (vx * vx + vy * vy));
                }
            }
            let _ = i;
        }
        for v in &cell.vertices {
            // each exact vertex is reproduced by its approx coordinates
            let (vx, vy) = v.approx;
            let r = vx * vx + vy * vy;
            assert!((r - base.qbeta_f64(&v.r_sq)).abs() < 1e-9);
        }
        for nb in &cell.neighbors {
            let (x, y) = base.zgamma_complex_f64(nb);
            num_delta_sq = num_delta_sq.min(x * x + y * y);
        }
        assert!((num_delta_sq - base.qbeta_f64(&cell.delta_sq)).abs() < 1e-9);
        assert!((num_big_sq - base.qbeta_f64(&cell.big_delta_sq)).abs() < 1e-9);
    }

    #[test]
    fn merged_vertices_are_exactly_coincident() {
        // verify the merge-by-incidence rule with the explicit distance
        // formula Re(v_ij conj(v_kl))
        let base = tribonacci();
        let w = window_m2(&base);
        let l_sq = l_sq_m2(&base);
        let xi = xi_set(&w, &l_sq, &base);
        let mut found_quad = false;
        for win in xi.windows(2) {
            let patch = patch_for_interval(&w, &win[0], &win[1], &l_sq, &base).unwrap();
            let cell = protocell_from_patch(&patch, &base).unwrap();
            for v in &cell.vertices {
                if v.incident.len() < 3 {
                    continue;
                }
                // incident set of size >= 3 plus the origin: four or more
                // points of the set on one circle
                found_quad = true;
                // all incident pairs give the same circumcircle
                let (i0, j0) = (v.incident[0], v.incident[1]);
                let r0 = circumradius_sq(&patch.points[i0], &patch.points[j0], &base)
                    .unwrap();
                for k in 1..v.incident.len() {
                    for l in (k + 1)..v.incident.len() {
                        let r = circumradius_sq(
                            &patch.points[v.incident[k]],
                            &patch.points[v.incident[l]],
                            &base,
                        )
                        .unwrap();
                        assert_eq!(r, r0);
                    }
                }
            }
        }
        // the m=2 example genuinely has a cocircular quadruple
        assert!(found_quad);
    }

    #[test]
    fn patch_points_respect_the_disk_bound() {
        let base = tribonacci();
        let w = window_m2(&base);
        let l_sq = l_sq_m2(&base);
        let xi = xi_set(&w, &l_sq, &base);
        let patch = patch_for_interval(&w, &xi[0], &xi[1], &l_sq, &base).unwrap();
        // every patch point also appears in the plain disk enumeration
        let all = crate::cutproject::enumerate_sigma(
            &w,
            &DiskQuery::origin(l_sq.clone(), &base).unwrap(),
            &base,
        );
        for z in &patch.points {
            assert!(all.contains(z));
        }
    }
}
