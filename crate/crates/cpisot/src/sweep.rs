//! The window sweep: all palettes of `Sigma([0,c))` for `c in [b0, c0)`.
//!
//! The palette is constant between consecutive points of
//! `Theta = (W - W) ∩ (b0, c0)` where `W` collects the Galois images of all
//! lattice points with `|z| <= L`, `z' in (-c0, c0)`. One palette run at
//! `b0`, one per cut point and one per open interval (at its midpoint)
//! captures every case.

use crate::cutproject::{enumerate_band, l_bound_sq, Window};
use crate::error::{Error, Result};
use crate::field::{BaseSpec, QBeta};
use crate::interval::rat;
use crate::voronoi::{palette_with_memo, CanonicalKey, PatchMemo, Protocell};

/// All palettes over one sweep range, with the breakpoint structure.
pub struct PaletteAtlas {
    /// `b0, theta_1, ..., theta_{N-1}, c0`.
    pub breakpoints: Vec<QBeta>,
    /// Index into `palettes` for the window `[0, breakpoints[i])`,
    /// for `i = 0..N` (every breakpoint except `c0`).
    pub cut_palettes: Vec<usize>,
    /// Index into `palettes` for every open interval
    /// `(breakpoints[i], breakpoints[i+1])`, sampled at the midpoint.
    pub interval_palettes: Vec<usize>,
    /// Distinct palettes in order of first appearance.
    pub palettes: Vec<Vec<Protocell>>,
    /// Number of palette computations performed (`2N - 1` for `N` intervals).
    pub palette_runs: usize,
    /// The bound used for every counted run: the maximal `Delta^2` of the
    /// palette of `[0, b0)`.
    pub l_sq: QBeta,
}

impl PaletteAtlas {
    /// The palette valid at window endpoint `c` (must lie in `[b0, c0)`).
    pub fn palette_at(&self, c: &QBeta, base: &BaseSpec) -> Option<&Vec<Protocell>> {
        let n = self.breakpoints.len() - 1;
        if base.qbeta_sign(&c.sub(&self.breakpoints[0])) < 0
            || base.qbeta_sign(&c.sub(&self.breakpoints[n])) >= 0
        {
            return None;
        }
        for i in 0..n {
            if base.qbeta_sign(&c.sub(&self.breakpoints[i])) == 0 {
                return Some(&self.palettes[self.cut_palettes[i]]);
            }
            if base.qbeta_sign(&c.sub(&self.breakpoints[i + 1])) < 0 {
                return Some(&self.palettes[self.interval_palettes[i]]);
            }
        }
        None
    }
}

fn palette_key(cells: &[Protocell]) -> Vec<CanonicalKey> {
    let mut keys: Vec<CanonicalKey> = cells.iter().map(|c| c.canonical_key()).collect();
    keys.sort();
    keys
}

/// The sorted set `W` of eq-(Pi) type: Galois images of all `z` with
/// `|z|^2 <= L^2` and `z' in (-c0, c0)`, without the sentinels.
pub fn w_set(c0: &QBeta, l_sq: &QBeta, base: &BaseSpec) -> Vec<QBeta> {
    let lo = c0.neg();
    let pts = enumerate_band(&lo, false, c0, false, l_sq, base);
    let mut w: Vec<QBeta> = pts.iter().map(|z| base.galois_real(z)).collect();
    w.sort_by(|x, y| base.qbeta_cmp(x, y));
    w.dedup();
    w
}

/// `Theta = (W - W) ∩ (b0, c0)`, deduplicated and sorted.
pub fn theta_set(b0: &QBeta, c0: &QBeta, l_sq: &QBeta, base: &BaseSpec) -> Vec<QBeta> {
    let w = w_set(c0, l_sq, base);
    let mut theta = Vec::new();
    for (i, wi) in w.iter().enumerate() {
        for wj in &w[..i] {
            let d = wi.sub(wj);
            if base.qbeta_sign(&d.sub(b0)) > 0 && base.qbeta_sign(&d.sub(c0)) < 0 {
                theta.push(d);
            }
        }
    }
    theta.sort_by(|x, y| base.qbeta_cmp(x, y));
    theta.dedup();
    theta
}

/// Algorithm 2: palettes for all `c in [b0, c0)`. The bound is bootstrapped:
/// the palette of `[0, b0)` under the a-priori bound gives `max Delta^2`,
/// which is a valid (much smaller) bound for every larger window.
pub fn sweep(b0: &QBeta, c0: &QBeta, base: &BaseSpec) -> Result<PaletteAtlas> {
    if base.qbeta_sign(b0) <= 0 || base.qbeta_sign(&c0.sub(b0)) <= 0 {
        return Err(Error::Precondition("need 0 < b0 < c0".into()));
    }
    let w_b0 = Window::new(b0.clone(), base)?;
    let (l0_sq, _, _) = l_bound_sq(&w_b0, base);
    let boot = crate::voronoi::palette(&w_b0, base, Some(l0_sq))?;
    let mut l_sq = boot[0].big_delta_sq.clone();
    for cell in &boot[1..] {
        if base.qbeta_sign(&cell.big_delta_sq.sub(&l_sq)) > 0 {
            l_sq = cell.big_delta_sq.clone();
        }
    }

    let theta = theta_set(b0, c0, &l_sq, base);
    let mut breakpoints = Vec::with_capacity(theta.len() + 2);
    breakpoints.push(b0.clone());
    breakpoints.extend(theta);
    breakpoints.push(c0.clone());

    let mut memo = PatchMemo::new();
    let mut palettes: Vec<Vec<Protocell>> = Vec::new();
    let mut keys: Vec<Vec<CanonicalKey>> = Vec::new();
    let mut palette_runs = 0usize;
    let mut run = |c: &QBeta, memo: &mut PatchMemo, runs: &mut usize| -> Result<usize> {
        let window = Window::new(c.clone(), base)?;
        let cells = palette_with_memo(&window, base, Some(l_sq.clone()), memo)?;
        *runs += 1;
        let key = palette_key(&cells);
        if let Some(idx) = keys.iter().position(|k| *k == key) {
            return Ok(idx);
        }
        keys.push(key);
        palettes.push(cells);
        Ok(palettes.len() - 1)
    };

    let n = breakpoints.len() - 1; // number of intervals
    let mut cut_palettes = Vec::with_capacity(n);
    let mut interval_palettes = Vec::with_capacity(n);
    for i in 0..n {
        cut_palettes.push(run(&breakpoints[i], &mut memo, &mut palette_runs)?);
        let mid = breakpoints[i].add(&breakpoints[i + 1]).scale(&rat(1, 2));
        interval_palettes.push(run(&mid, &mut memo, &mut palette_runs)?);
    }

    Ok(PaletteAtlas {
        breakpoints,
        cut_palettes,
        interval_palettes,
        palettes,
        palette_runs,
        l_sq,
    })
}

/// Lemma-(iii) occurrence interval: given the `W` list with sentinels
/// `-c0, ..., +c0` and indices `i <= k` of a contiguous range containing 0,
/// the patch occurs in `Sigma([0,c))` iff `c` lies in the open interval
/// `(w_k - w_i, w_{k+1} - w_{i-1})`.
pub fn patch_occurrence_interval(
    i: usize,
    k: usize,
    w: &[QBeta],
    base: &BaseSpec,
) -> Result<(QBeta, QBeta)> {
    if i == 0 || k + 1 >= w.len() || i > k {
        return Err(Error::InvalidRange { i, k });
    }
    if base.qbeta_sign(&w[i]) > 0 || base.qbeta_sign(&w[k]) < 0 {
        return Err(Error::InvalidRange { i, k });
    }
    Ok((w[k].sub(&w[i]), w[k + 1].sub(&w[i - 1])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_base;
    use crate::interval::rat_int;
    use num_traits::Zero;
    use std::sync::OnceLock;

    fn tribonacci() -> BaseSpec {
        make_base(1, 1).unwrap()
    }

    fn full_sweep() -> &'static PaletteAtlas {
        static ATLAS: OnceLock<PaletteAtlas> = OnceLock::new();
        ATLAS.get_or_init(|| {
            let base = tribonacci();
            sweep(&QBeta::beta_sq(), &base.beta_pow(3), &base).unwrap()
        })
    }

    #[test]
    fn theta_for_the_tribonacci_period() {
        let base = tribonacci();
        let atlas = full_sweep();
        let theta = &atlas.breakpoints[1..atlas.breakpoints.len() - 1];
        assert_eq!(theta.len(), 14);
        // known members
        for q in [
            QBeta::new(rat_int(1), crate::interval::Rat::zero(), rat_int(1)), // beta^2+1
            QBeta::new(rat_int(0), rat_int(2), rat_int(0)),                   // 2 beta
            QBeta::new(rat_int(2), rat_int(1), rat_int(0)),                   // beta+2
            QBeta::new(rat_int(1), rat_int(2), rat_int(0)),                   // 2 beta+1
            QBeta::new(rat_int(0), rat_int(1), rat_int(1)),                   // beta^2+beta
            QBeta::new(rat_int(2), rat_int(0), rat_int(1)),                   // beta^2+2
            QBeta::new(rat_int(2), rat_int(2), rat_int(0)),                   // 2 beta+2
        ] {
            assert!(theta.contains(&q), "missing {q:?}");
        }
        // L is the improved bound ~ 1.384^2
        assert!((base.qbeta_f64(&atlas.l_sq).sqrt() - 1.3843).abs() < 1e-3);
    }

    #[test]
    fn empty_theta_for_a_narrow_range() {
        let base = tribonacci();
        // a tiny slice just below beta^3 free of W-differences
        let c0 = base.beta_pow(3);
        let eps = QBeta::from_rat(rat(1, 1_000_000));
        let b0 = c0.sub(&eps);
        let (l_sq, _, _) = l_bound_sq(&Window::new(b0.clone(), &base).unwrap(), &base);
        let theta = theta_set(&b0, &c0, &l_sq, &base);
        assert!(theta.is_empty());
    }

    #[test]
    fn sweep_counts_match_the_period_analysis() {
        let atlas = full_sweep();
        assert_eq!(atlas.palette_runs, 30);
        assert_eq!(atlas.palettes.len(), 16);
        assert_eq!(atlas.interval_palettes.len(), 15);
        assert_eq!(atlas.cut_palettes.len(), 15);
    }

    #[test]
    fn open_interval_palettes_share_the_extremes() {
        let base = tribonacci();
        let atlas = full_sweep();
        // every open-interval palette: min delta = 1/beta, max Delta =
        // 2 sqrt(beta) sqrt((beta^2-1)/(3 beta^2-1))
        let inv_beta_sq = base.qbeta_mul(base.gamma_prime(), base.gamma_prime());
        let num = base.qbeta_mul(&QBeta::beta(), &QBeta::beta_sq().sub(&QBeta::one()));
        let den = QBeta::beta_sq().scale(&rat_int(3)).sub(&QBeta::one());
        let max_dd = base
            .qbeta_mul(&num, &base.qbeta_inverse(&den).unwrap())
            .scale(&rat_int(4));
        for &idx in &atlas.interval_palettes {
            let pal = &atlas.palettes[idx];
            let mut min_d = pal[0].delta_sq.clone();
            let mut max_d = pal[0].big_delta_sq.clone();
            for cell in &pal[1..] {
                if base.qbeta_sign(&cell.delta_sq.sub(&min_d)) < 0 {
                    min_d = cell.delta_sq.clone();
                }
                if base.qbeta_sign(&cell.big_delta_sq.sub(&max_d)) > 0 {
                    max_d = cell.big_delta_sq.clone();
                }
            }
            assert_eq!(min_d, inv_beta_sq);
            assert_eq!(max_d, max_dd);
        }
    }

    #[test]
    fn cut_point_palette_is_the_neighbor_intersection() {
        let atlas = full_sweep();
        // for every theta (cut points other than b0): palette = intersection
        // of the two adjacent interval palettes, as canonical-key sets
        for i in 1..atlas.cut_palettes.len() {
            let cut = palette_key(&atlas.palettes[atlas.cut_palettes[i]]);
            let left = palette_key(&atlas.palettes[atlas.interval_palettes[i - 1]]);
            let right = palette_key(&atlas.palettes[atlas.interval_palettes[i]]);
            let inter: Vec<_> = left
                .iter()
                .filter(|k| right.contains(k))
                .cloned()
                .collect();
            assert_eq!(cut, inter, "cut {i}");
        }
    }

    #[test]
    fn atlas_lookup_matches_a_fresh_palette() {
        let base = tribonacci();
        let atlas = full_sweep();
        // a handful of rational c values in [b0, c0)
        for c in [rat(7, 2), rat(18, 5), rat(4, 1), rat(9, 2), rat(5, 1), rat(6, 1)] {
            let cq = QBeta::from_rat(c);
            let expected = atlas.palette_at(&cq, &base).unwrap();
            let fresh = crate::voronoi::palette(
                &Window::new(cq.clone(), &base).unwrap(),
                &base,
                Some(atlas.l_sq.clone()),
            )
            .unwrap();
            assert_eq!(palette_key(expected), palette_key(&fresh));
        }
    }

    #[test]
    fn occurrence_interval_arithmetic() {
        let base = tribonacci();
        let atlas = full_sweep();
        let c0 = base.beta_pow(3);
        let mut w = vec![c0.neg()];
        w.extend(w_set(&c0, &atlas.l_sq, &base));
        w.push(c0.clone());
        let n = w.len() - 1;

        // full range: (w_{n-1} - w_1, 2 c0)
        let zero_idx = w.iter().position(|x| x.is_zero()).unwrap();
        assert!(zero_idx > 0 && zero_idx < n);
        let (lo, hi) = patch_occurrence_interval(1, n - 1, &w, &base).unwrap();
        assert_eq!(lo, w[n - 1].sub(&w[1]));
        assert_eq!(hi, c0.scale(&rat_int(2)));

        // reversed range gives identical bounds (central symmetry of W)
        let (i, k) = (zero_idx - 1, zero_idx + 2);
        let (lo1, hi1) = patch_occurrence_interval(i, k, &w, &base).unwrap();
        let (lo2, hi2) = patch_occurrence_interval(n - k, n - i, &w, &base).unwrap();
        assert_eq!(lo1, lo2);
        assert_eq!(hi1, hi2);

        // a range not containing zero is invalid
        assert!(matches!(
            patch_occurrence_interval(zero_idx + 1, zero_idx + 2, &w, &base),
            Err(Error::InvalidRange { .. })
        ));
        assert!(matches!(
            patch_occurrence_interval(0, n, &w, &base),
            Err(Error::InvalidRange { .. })
        ));
    }

    #[test]
    fn scaled_sweep_shrinks_statistics_by_beta() {
        let base = tribonacci();
        let atlas = full_sweep();
        // palette for [0, beta*c) equals the palette for [0, c) with
        // delta^2, Delta^2, Delta*^2 divided by beta (denser set)
        let c = QBeta::from_rat(rat(4, 1));
        let pal = atlas.palette_at(&c, &base).unwrap();
        let scaled_window =
            Window::new(base.qbeta_mul(&QBeta::beta(), &c), &base).unwrap();
        let scaled_l = base.qbeta_mul(&atlas.l_sq, base.gamma_prime());
        let scaled = crate::voronoi::palette(&scaled_window, &base, Some(scaled_l)).unwrap();
        assert_eq!(pal.len(), scaled.len());
        let stats = |p: &[Protocell]| {
            let mut v: Vec<QBeta> = p
                .iter()
                .flat_map(|c| {
                    [c.delta_sq.clone(), c.big_delta_sq.clone(), c.delta_star_sq.clone()]
                })
                .collect();
            v.sort_by(|x, y| base.qbeta_cmp(x, y));
            v
        };
        let lhs = stats(pal);
        let rhs: Vec<QBeta> = stats(&scaled)
            .iter()
            .map(|q| base.qbeta_mul(q, &QBeta::beta()))
            .collect();
        assert_eq!(lhs, rhs);
    }
}
