//! Top-level spectral quantities of `X^m`: the minimal cell size `l_m`, the
//! maximal cell size `L_m` and the maximal neighbor distance `L*_m`, plus
//! the density experiment for alphabets below the Delone threshold.

use std::collections::HashSet;

use crate::cutproject::{l_bound_sq, Window};
use crate::error::{Error, Result};
use crate::field::{BaseSpec, QBeta, ZGamma};
use crate::interval::rat;
use crate::voronoi::{palette, Protocell};

/// Certified accuracy of the numeric fields in [`SpectralReport`].
pub const REPORT_F64_ERR: f64 = 1e-10;

/// The three spectral quantities of `X^m`, squared and exact, with numeric
/// shadows.
pub struct SpectralReport {
    pub m: i64,
    /// The window endpoint `c = m/(1 - gamma')`.
    pub c: QBeta,
    /// Power `j` with `beta^-j c in [beta^2, beta^3)`.
    pub k_scale: i64,
    pub ell_sq: QBeta,
    pub l_sq: QBeta,
    pub l_star_sq: QBeta,
    pub ell_f64: f64,
    pub l_f64: f64,
    pub l_star_f64: f64,
}

/// The cut-and-project window of `X^m`: `[0, m/(1 - gamma'))`.
pub fn window_for_m(m: i64, base: &BaseSpec) -> Result<Window> {
    if !base.property_f() {
        return Err(Error::Precondition(
            "base must have the finiteness property".into(),
        ));
    }
    // m >= beta - 1, exactly
    let slack = QBeta::from_int(m + 1).sub(&QBeta::beta());
    if base.qbeta_sign(&slack) <= 0 {
        return Err(Error::AlphabetTooSmall { m });
    }
    let denom = QBeta::one().sub(base.gamma_prime());
    let c = base.qbeta_inverse(&denom)?.scale(&rat(m, 1));
    Window::new(c, base)
}

/// Greatest `k` with `m >= (1 - gamma') beta^k`, exact.
pub fn k_for_m(m: i64, base: &BaseSpec) -> i64 {
    let mq = QBeta::from_int(m);
    let denom = QBeta::one().sub(base.gamma_prime());
    let holds = |k: i64| {
        let rhs = base.qbeta_mul(&denom, &base.beta_pow(k));
        base.qbeta_sign(&mq.sub(&rhs)) >= 0
    };
    let mut k = 0i64;
    if holds(0) {
        while holds(k + 1) {
            k += 1;
        }
    } else {
        while !holds(k) {
            k -= 1;
        }
    }
    k
}

fn palette_extremes(pal: &[Protocell], base: &BaseSpec) -> (QBeta, QBeta, QBeta) {
    let mut min_d = pal[0].delta_sq.clone();
    let mut max_dd = pal[0].big_delta_sq.clone();
    let mut max_ds = pal[0].delta_star_sq.clone();
    for cell in &pal[1..] {
        if base.qbeta_sign(&cell.delta_sq.sub(&min_d)) < 0 {
            min_d = cell.delta_sq.clone();
        }
        if base.qbeta_sign(&cell.big_delta_sq.sub(&max_dd)) > 0 {
            max_dd = cell.big_delta_sq.clone();
        }
        if base.qbeta_sign(&cell.delta_star_sq.sub(&max_ds)) > 0 {
            max_ds = cell.delta_star_sq.clone();
        }
    }
    (min_d, max_dd, max_ds)
}

/// `l_m`, `L_m` and `L*_m` via the palette of the window normalized into
/// `[beta^2, beta^3)`. Scaling the window by `beta^j` scales the point set
/// by `gamma^-j`, so squared distances pick up the factor `beta^-j`.
pub fn spectra_for_m(m: i64, base: &BaseSpec) -> Result<SpectralReport> {
    let window = window_for_m(m, base)?;
    let c = window.c().clone();

    let mut j = 0i64;
    let above = |c_norm: &QBeta| base.qbeta_sign(&c_norm.sub(&QBeta::beta_sq())) >= 0;
    let below = |c_norm: &QBeta| base.qbeta_sign(&c_norm.sub(&base.beta_pow(3))) < 0;
    let mut c_norm = c.clone();
    while !above(&c_norm) {
        j -= 1;
        c_norm = base.qbeta_mul(&c, &base.beta_pow(-j));
    }
    while !below(&c_norm) {
        j += 1;
        c_norm = base.qbeta_mul(&c, &base.beta_pow(-j));
    }
    debug_assert!(above(&c_norm) && below(&c_norm));

    let norm_window = Window::new(c_norm, base)?;
    let (l_bound, _, _) = l_bound_sq(&norm_window, base);
    let pal = palette(&norm_window, base, Some(l_bound))?;
    let (min_d, max_dd, max_ds) = palette_extremes(&pal, base);
    let scale = base.beta_pow(-j);
    let ell_sq = base.qbeta_mul(&min_d, &scale);
    let l_sq = base.qbeta_mul(&max_dd, &scale);
    let l_star_sq = base.qbeta_mul(&max_ds, &scale);
    Ok(report(m, c, j, ell_sq, l_sq, l_star_sq, base))
}

fn report(
    m: i64,
    c: QBeta,
    k_scale: i64,
    ell_sq: QBeta,
    l_sq: QBeta,
    l_star_sq: QBeta,
    base: &BaseSpec,
) -> SpectralReport {
    let ell_f64 = base.qbeta_f64_certified(&ell_sq, REPORT_F64_ERR).sqrt();
    let l_f64 = base.qbeta_f64_certified(&l_sq, REPORT_F64_ERR).sqrt();
    let l_star_f64 = base.qbeta_f64_certified(&l_star_sq, REPORT_F64_ERR).sqrt();
    SpectralReport {
        m,
        c,
        k_scale,
        ell_sq,
        l_sq,
        l_star_sq,
        ell_f64,
        l_f64,
        l_star_f64,
    }
}

/// Closed forms in the Tribonacci base: `l_m^2 = beta^-k`,
/// `L_m^2 = 4 beta^{3-k} (1 - gamma'^2)/(3 - gamma'^2)`,
/// `L*_m^2 = beta^{3-k}` with `k` the scaling exponent of `m`.
pub fn tribo_closed_form(m: i64, base: &BaseSpec) -> Result<SpectralReport> {
    if (base.a(), base.b()) != (1, 1) {
        return Err(Error::WrongBase {
            a: base.a(),
            b: base.b(),
        });
    }
    let k = k_for_m(m, base);
    let ell_sq = base.beta_pow(-k);
    let l_star_sq = base.beta_pow(3 - k);
    let num = QBeta::one().sub(base.gamma_prime_sq());
    let den = QBeta::from_int(3).sub(base.gamma_prime_sq());
    let ratio = base.qbeta_mul(&num, &base.qbeta_inverse(&den)?);
    let l_sq = base
        .qbeta_mul(&ratio, &base.beta_pow(3 - k))
        .scale(&rat(4, 1));
    let denom = QBeta::one().sub(base.gamma_prime());
    let c = base.qbeta_inverse(&denom)?.scale(&rat(m, 1));
    Ok(report(m, c, 0, ell_sq, l_sq, l_star_sq, base))
}

/// One ring of the density experiment: points of `X^m` inside `B(0, r)`.
pub struct DensityLevel {
    pub r: f64,
    /// Points certainly inside (distance below `r` minus the slack band).
    pub count: usize,
    /// Points inside up to the slack band (distance below `r` plus slack).
    pub count_hi: usize,
    pub n: f64,
    pub n_hi: f64,
}

/// Half-width of the numeric boundary band; points this close to a ring
/// radius are counted both ways.
pub const DENSITY_SLACK: f64 = 1e-9;

/// Counts of `X^m` points in balls of the shrinking-density radii
/// `r_0 = |gamma|^2 + m/(|gamma| - 1)`, `r_{k+1} = |gamma| r_k - m`. The
/// point set is generated by a digit-tree walk (`v -> gamma v + digit`)
/// pruned outside the largest ball plus the tail bound `2m/(|gamma| - 1)`.
pub fn density_profile(
    base: &BaseSpec,
    m: i64,
    levels: usize,
    budget: usize,
) -> Result<Vec<DensityLevel>> {
    if m < 0 || levels == 0 {
        return Err(Error::Precondition("need m >= 0 and levels >= 1".into()));
    }
    let abs_gamma = base.beta_f64().sqrt();
    let tail = if m == 0 {
        0.0
    } else {
        m as f64 / (abs_gamma - 1.0)
    };
    let mut radii = Vec::with_capacity(levels);
    let mut r = base.beta_f64() + tail;
    for _ in 0..levels {
        radii.push(r);
        r = abs_gamma * r - m as f64;
    }
    let r_max = radii.iter().cloned().fold(0.0f64, f64::max);
    let prune_sq = (r_max + 2.0 * tail + DENSITY_SLACK).powi(2);

    let abs_sq = |z: &ZGamma| {
        let (x, y) = base.zgamma_complex_f64(z);
        x * x + y * y
    };
    let mut visited: HashSet<[num_bigint::BigInt; 3]> = HashSet::new();
    let mut points: Vec<ZGamma> = Vec::new();
    let mut frontier = vec![ZGamma::zero()];
    visited.insert(ZGamma::zero().key());
    points.push(ZGamma::zero());
    let mut expanded = 0usize;
    let gamma = ZGamma::gamma();
    while let Some(v) = frontier.pop() {
        expanded += 1;
        if expanded > budget {
            return Err(Error::BudgetExceeded { budget });
        }
        let shifted = base.zg_mul(&gamma, &v);
        for d in 0..=m {
            let next = shifted.add(&ZGamma::new(d, 0, 0));
            if abs_sq(&next) > prune_sq {
                continue;
            }
            if visited.insert(next.key()) {
                points.push(next.clone());
                frontier.push(next);
            }
        }
    }

    let dists: Vec<f64> = points.iter().map(|z| abs_sq(z).sqrt()).collect();
    Ok(radii
        .into_iter()
        .map(|r| {
            let count = dists.iter().filter(|&&d| d <= r - DENSITY_SLACK).count();
            let count_hi = dists.iter().filter(|&&d| d <= r + DENSITY_SLACK).count();
            DensityLevel {
                r,
                count,
                count_hi,
                n: count as f64 / (r * r),
                n_hi: count_hi as f64 / (r * r),
            }
        })
        .collect())
}

/// The digit-tree point set restricted to a disk, for cross-checks against
/// the cut-and-project enumeration.
pub fn xm_points_in_disk(
    base: &BaseSpec,
    m: i64,
    radius_sq: &QBeta,
    budget: usize,
) -> Result<Vec<ZGamma>> {
    let r = base.qbeta_f64(radius_sq).sqrt();
    let abs_gamma = base.beta_f64().sqrt();
    let tail = m as f64 / (abs_gamma - 1.0);
    let prune_sq = (r + 2.0 * tail + DENSITY_SLACK).powi(2);
    let abs_f64_sq = |z: &ZGamma| {
        let (x, y) = base.zgamma_complex_f64(z);
        x * x + y * y
    };
    let mut visited: HashSet<[num_bigint::BigInt; 3]> = HashSet::new();
    let mut keep: Vec<ZGamma> = Vec::new();
    let mut frontier = vec![ZGamma::zero()];
    visited.insert(ZGamma::zero().key());
    let mut expanded = 0usize;
    let gamma = ZGamma::gamma();
    while let Some(v) = frontier.pop() {
        expanded += 1;
        if expanded > budget {
            return Err(Error::BudgetExceeded { budget });
        }
        let shifted = base.zg_mul(&gamma, &v);
        for d in 0..=m {
            let next = shifted.add(&ZGamma::new(d, 0, 0));
            if abs_f64_sq(&next) > prune_sq {
                continue;
            }
            if visited.insert(next.key()) {
                frontier.push(next);
            }
        }
    }
    for key in visited {
        let z = ZGamma::from_bigints(key);
        // exact membership in the disk
        if base.qbeta_sign(&radius_sq.sub(&base.norm_sq(&z))) >= 0 {
            keep.push(z);
        }
    }
    keep.sort_by(|x, y| x.canon_cmp(y));
    Ok(keep)
}
