//! Cut-and-project enumeration: the sets `Sigma([0,c)) = {z in Z[gamma] :
//! z' in [0,c)}` restricted to disks, and the a-priori cell-diameter bound L.

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{BaseSpec, QBeta, ZGamma};
use crate::interval::{rat, rat_sqrt_interval, Rat, RatInterval};

/// Acceptance window `[0, c)` in the internal space.
#[derive(Clone, Debug, PartialEq)]
pub struct Window {
    c: QBeta,
}

impl Window {
    pub fn new(c: QBeta, base: &BaseSpec) -> Result<Window> {
        if base.qbeta_sign(&c) != 1 {
            return Err(Error::Precondition(
                "window endpoint c must be positive".into(),
            ));
        }
        Ok(Window { c })
    }

    pub fn c(&self) -> &QBeta {
        &self.c
    }

    /// Exact membership `x in [0, c)`.
    pub fn contains(&self, x: &QBeta, base: &BaseSpec) -> bool {
        base.qbeta_sign(x) >= 0 && base.qbeta_sign(&x.sub(&self.c)) < 0
    }
}

/// Closed disk `B(center, sqrt(radius_sq))` in the physical plane.
#[derive(Clone, Debug)]
pub struct DiskQuery {
    pub center: ZGamma,
    pub radius_sq: QBeta,
}

impl DiskQuery {
    pub fn new(center: ZGamma, radius_sq: QBeta, base: &BaseSpec) -> Result<DiskQuery> {
        if base.qbeta_sign(&radius_sq) < 0 {
            return Err(Error::Precondition("radius_sq must be nonnegative".into()));
        }
        Ok(DiskQuery { center, radius_sq })
    }

    pub fn origin(radius_sq: QBeta, base: &BaseSpec) -> Result<DiskQuery> {
        DiskQuery::new(ZGamma::zero(), radius_sq, base)
    }
}

/// All `z in Z[gamma]` with `z' in [0,c)` and `|z - center|^2 <= radius_sq`,
/// in canonical `(v2,v1,v0)`-lexicographic order. A certified interval
/// inversion of the embedding matrix yields a complete integer bounding box;
/// candidates are pre-filtered in f64 and confirmed exactly.
pub fn enumerate_sigma(window: &Window, disk: &DiskQuery, base: &BaseSpec) -> Vec<ZGamma> {
    let (re_row, im_row, _) = base.embedding_rows();
    let r_iv = {
        let bracket = base.beta_bracket_refined(&rat(1, 1i64 << 48));
        let sq = disk.radius_sq.eval_interval(&bracket);
        rat_sqrt_interval(&sq, &rat(1, 1i64 << 24))
    };
    let c_iv = {
        let bracket = base.beta_bracket_refined(&rat(1, 1i64 << 48));
        window.c.eval_interval(&bracket)
    };

    let dot = |row: &[RatInterval; 3], z: &ZGamma| -> RatInterval {
        let mut acc = RatInterval::point(Rat::zero());
        for j in 0..3 {
            acc = acc.add(&row[j].scale(&Rat::from_integer(z.v[j].clone())));
        }
        acc
    };
    let center_re = dot(&re_row, &disk.center);
    let center_im = dot(&im_row, &disk.center);

    let targets = [
        RatInterval::new(&center_re.lo - &r_iv.hi, &center_re.hi + &r_iv.hi),
        RatInterval::new(&center_im.lo - &r_iv.hi, &center_im.hi + &r_iv.hi),
        RatInterval::new(Rat::zero(), c_iv.hi.clone()),
    ];
    let inv = base.embedding_inverse();
    let mut range = [(0i64, 0i64); 3];
    for i in 0..3 {
        let mut acc = RatInterval::point(Rat::zero());
        for j in 0..3 {
            acc = acc.add(&inv[i][j].mul(&targets[j]));
        }
        range[i] = (
            acc.lo.floor().to_integer().to_i64().expect("box fits in i64"),
            acc.hi.ceil().to_integer().to_i64().expect("box fits in i64"),
        );
    }

    // f64 shadows for the pre-filter
    let gp = base.gammap_f64();
    let gp2 = gp * gp;
    let c_f = base.qbeta_f64(&window.c);
    let r_sq_f = base.qbeta_f64(&disk.radius_sq);
    let (cre, cim) = base.zgamma_complex_f64(&disk.center);

    let mut out = Vec::new();
    for v2 in range[2].0..=range[2].1 {
        for v1 in range[1].0..=range[1].1 {
            for v0 in range[0].0..=range[0].1 {
                let margin = 1e-6 * (1.0 + v0.abs() as f64 + v1.abs() as f64 + v2.abs() as f64);
                let gal_f = v0 as f64 + v1 as f64 * gp + v2 as f64 * gp2;
                if gal_f < -margin || gal_f >= c_f + margin {
                    continue;
                }
                let z = ZGamma::new(v0, v1, v2);
                let (re, im) = base.zgamma_complex_f64(&z);
                let d_sq = (re - cre) * (re - cre) + (im - cim) * (im - cim);
                if d_sq > r_sq_f + margin {
                    continue;
                }
                // exact confirmation
                if !window.contains(&base.galois_real(&z), base) {
                    continue;
                }
                let diff = z.sub(&disk.center);
                if base.qbeta_sign(&disk.radius_sq.sub(&base.norm_sq(&diff))) < 0 {
                    continue;
                }
                out.push(z);
            }
        }
    }
    out.sort_by(|x, y| x.canon_cmp(y));
    out
}

/// All `z in Z[gamma]` with `|z|^2 <= radius_sq` and `z'` in the band from
/// `lo` to `hi` (each endpoint open or closed), canonically ordered. This is
/// the generalized form behind L-patches, whose Galois constraint is a
/// two-sided band rather than `[0, c)`.
pub fn enumerate_band(
    lo: &QBeta,
    lo_closed: bool,
    hi: &QBeta,
    hi_closed: bool,
    radius_sq: &QBeta,
    base: &BaseSpec,
) -> Vec<ZGamma> {
    let bracket = base.beta_bracket_refined(&rat(1, 1i64 << 48));
    let r_iv = rat_sqrt_interval(&radius_sq.eval_interval(&bracket), &rat(1, 1i64 << 24));
    let lo_iv = lo.eval_interval(&bracket);
    let hi_iv = hi.eval_interval(&bracket);

    let targets = [
        RatInterval::new(-r_iv.hi.clone(), r_iv.hi.clone()),
        RatInterval::new(-r_iv.hi.clone(), r_iv.hi.clone()),
        RatInterval::new(lo_iv.lo.clone(), hi_iv.hi.clone()),
    ];
    let inv = base.embedding_inverse();
    let mut range = [(0i64, 0i64); 3];
    for i in 0..3 {
        let mut acc = RatInterval::point(Rat::zero());
        for j in 0..3 {
            acc = acc.add(&inv[i][j].mul(&targets[j]));
        }
        range[i] = (
            acc.lo.floor().to_integer().to_i64().expect("box fits in i64"),
            acc.hi.ceil().to_integer().to_i64().expect("box fits in i64"),
        );
    }

    let gp = base.gammap_f64();
    let gp2 = gp * gp;
    let lo_f = base.qbeta_f64(lo);
    let hi_f = base.qbeta_f64(hi);
    let r_sq_f = base.qbeta_f64(radius_sq);

    let keep_lo = |x: &QBeta, b: &BaseSpec| {
        let s = b.qbeta_sign(&x.sub(lo));
        if lo_closed { s >= 0 } else { s > 0 }
    };
    let keep_hi = |x: &QBeta, b: &BaseSpec| {
        let s = b.qbeta_sign(&x.sub(hi));
        if hi_closed { s <= 0 } else { s < 0 }
    };

    let mut out = Vec::new();
    for v2 in range[2].0..=range[2].1 {
        for v1 in range[1].0..=range[1].1 {
            for v0 in range[0].0..=range[0].1 {
                let margin = 1e-6 * (1.0 + v0.abs() as f64 + v1.abs() as f64 + v2.abs() as f64);
                let gal_f = v0 as f64 + v1 as f64 * gp + v2 as f64 * gp2;
                if gal_f < lo_f - margin || gal_f > hi_f + margin {
                    continue;
                }
                let z = ZGamma::new(v0, v1, v2);
                let (re, im) = base.zgamma_complex_f64(&z);
                if re * re + im * im > r_sq_f + margin {
                    continue;
                }
                let galois = base.galois_real(&z);
                if !keep_lo(&galois, base) || !keep_hi(&galois, base) {
                    continue;
                }
                if base.qbeta_sign(&radius_sq.sub(&base.norm_sq(&z))) < 0 {
                    continue;
                }
                out.push(z);
            }
        }
    }
    out.sort_by(|x, y| x.canon_cmp(y));
    out
}

/// The a-priori bound: `L^2 = beta^k * max |gamma^{i+j}(gamma^i - gamma^j)|^2
/// / (Im(gamma^i conj(gamma)^j))^2` over pairs `i<j` in `{0, p-1, p}`, where
/// `p` is the first positive integer with `Im(gamma^p)` and `Im(gamma)` of
/// opposite signs and `k` the smallest integer with `(gamma')^k < c/2`.
pub fn l_bound_sq(window: &Window, base: &BaseSpec) -> (QBeta, i64, i64) {
    // Im(gamma^d) = Im(gamma) * U_d with U_1 = 1 and the power-sum
    // recurrence, so p is the first d with U_d < 0.
    let mut u_prev = QBeta::zero(); // U_0
    let mut u_cur = QBeta::one(); // U_1
    let mut p = 1i64;
    while base.qbeta_sign(&u_cur) >= 0 {
        let next = base.qbeta_mul(base.e1(), &u_cur).sub(&base.qbeta_mul(&QBeta::beta(), &u_prev));
        u_prev = u_cur;
        u_cur = next;
        p += 1;
    }

    // smallest k with (gamma')^k < c/2, i.e., beta^{-k} - c/2 < 0
    let half_c = window.c.scale(&rat(1, 2));
    let below = |k: i64| base.qbeta_sign(&base.beta_pow(-k).sub(&half_c)) < 0;
    let mut k = 0i64;
    if below(k) {
        while below(k - 1) {
            k -= 1;
        }
    } else {
        while !below(k) {
            k += 1;
        }
    }

    let mut idx = vec![0, p - 1, p];
    idx.dedup();
    let im_sq = base.im_gamma_sq();
    let mut best: Option<QBeta> = None;
    for (n, &i) in idx.iter().enumerate() {
        for &j in &idx[n + 1..] {
            let gi = base.gamma_pow(i);
            let gj = base.gamma_pow(j);
            let t = base.cross_decompose(&gi, &gj).t;
            // i < j in {0,p-1,p} always has Im(gamma^i conj(gamma^j)) != 0
            let num = base.qbeta_mul(
                &base.beta_pow(i + j),
                &base.norm_sq(&gi.sub(&gj)),
            );
            let den = base.qbeta_mul(im_sq, &base.qbeta_mul(&t, &t));
            let val = base
                .qbeta_mul(&num, &base.qbeta_inverse(&den).expect("t is nonzero"));
            let better = match &best {
                None => true,
                Some(b) => base.qbeta_sign(&val.sub(b)) > 0,
            };
            if better {
                best = Some(val);
            }
        }
    }
    let l_sq = base.qbeta_mul(&base.beta_pow(k), &best.expect("at least one pair"));
    (l_sq, k, p)
}

/// The scaled window `[0, (gamma')^k * c)`; `Sigma((gamma')^k Omega) =
/// gamma^k Sigma(Omega)`.
pub fn scale_window(window: &Window, k: i64, base: &BaseSpec) -> Window {
    Window {
        c: base.qbeta_mul(&base.beta_pow(-k), &window.c),
    }
}

/// The three guaranteed patch points `gamma^k, gamma^{k+p-1}, gamma^{k+p}`
/// whose Galois images lie in `(0, c/2)`.
pub fn guaranteed_triple(window: &Window, base: &BaseSpec) -> [ZGamma; 3] {
    let (_, k, p) = l_bound_sq(window, base);
    [
        base.gamma_pow(k),
        base.gamma_pow(k + p - 1),
        base.gamma_pow(k + p),
    ]
}
