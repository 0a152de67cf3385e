//! Exact arithmetic in `Z[gamma]` and `Q(beta)` for a cubic complex Pisot
//! unit `gamma` with minimal polynomial `Y^3 + b Y^2 + a Y - 1`.
//!
//! The real Galois conjugate `gamma'` of `gamma` lies in `(0,1)` and
//! `beta = 1/gamma'` is a root of `Y^3 - a Y^2 - b Y - 1`. Elements of
//! `Z[gamma]` are integer triples, elements of `Q(beta)` rational triples in
//! the basis `{1, beta, beta^2}`. Every predicate the geometric layers need
//! reduces to the sign of a `Q(beta)` element, which is decided exactly by
//! refining a certified isolating bracket of `beta`.
//!
//! Swap-symmetric expressions in `gamma, conj(gamma)` are rewritten into
//! `Q(beta)` through the elementary symmetric functions
//! `e1 = gamma + conj(gamma) = -b - gamma'` and `e2 = gamma*conj(gamma) = beta`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::interval::{rat, rat_int, rat_sqrt_interval, Rat, RatInterval};

/// Relative threshold below which the f64 fast path defers to exact signs.
const F64_SIGN_GUARD: f64 = 1e-9;

/// An element `v0 + v1*gamma + v2*gamma^2` of `Z[gamma]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZGamma {
    pub v: [BigInt; 3],
}

impl ZGamma {
    pub fn new(v0: i64, v1: i64, v2: i64) -> Self {
        ZGamma {
            v: [BigInt::from(v0), BigInt::from(v1), BigInt::from(v2)],
        }
    }

    pub fn from_bigints(v: [BigInt; 3]) -> Self {
        ZGamma { v }
    }

    pub fn zero() -> Self {
        ZGamma::new(0, 0, 0)
    }

    pub fn one() -> Self {
        ZGamma::new(1, 0, 0)
    }

    pub fn gamma() -> Self {
        ZGamma::new(0, 1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.v.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &ZGamma) -> ZGamma {
        ZGamma {
            v: [
                &self.v[0] + &other.v[0],
                &self.v[1] + &other.v[1],
                &self.v[2] + &other.v[2],
            ],
        }
    }

    pub fn sub(&self, other: &ZGamma) -> ZGamma {
        ZGamma {
            v: [
                &self.v[0] - &other.v[0],
                &self.v[1] - &other.v[1],
                &self.v[2] - &other.v[2],
            ],
        }
    }

    pub fn neg(&self) -> ZGamma {
        ZGamma {
            v: [-self.v[0].clone(), -self.v[1].clone(), -self.v[2].clone()],
        }
    }

    pub fn scale(&self, k: &BigInt) -> ZGamma {
        ZGamma {
            v: [&self.v[0] * k, &self.v[1] * k, &self.v[2] * k],
        }
    }

    /// Canonical order: lexicographic on `(v2, v1, v0)`.
    pub fn canon_cmp(&self, other: &ZGamma) -> Ordering {
        self.v[2]
            .cmp(&other.v[2])
            .then_with(|| self.v[1].cmp(&other.v[1]))
            .then_with(|| self.v[0].cmp(&other.v[0]))
    }

    pub fn key(&self) -> [BigInt; 3] {
        self.v.clone()
    }
}

impl fmt::Debug for ZGamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.v[0], self.v[1], self.v[2])
    }
}

/// An element `q0 + q1*beta + q2*beta^2` of `Q(beta)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QBeta {
    pub c: [Rat; 3],
}

impl QBeta {
    pub fn new(c0: Rat, c1: Rat, c2: Rat) -> Self {
        QBeta { c: [c0, c1, c2] }
    }

    pub fn from_int(n: i64) -> Self {
        QBeta::new(rat_int(n), Rat::zero(), Rat::zero())
    }

    pub fn from_rat(r: Rat) -> Self {
        QBeta::new(r, Rat::zero(), Rat::zero())
    }

    pub fn zero() -> Self {
        QBeta::from_int(0)
    }

    pub fn one() -> Self {
        QBeta::from_int(1)
    }

    pub fn beta() -> Self {
        QBeta::new(Rat::zero(), Rat::one(), Rat::zero())
    }

    pub fn beta_sq() -> Self {
        QBeta::new(Rat::zero(), Rat::zero(), Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &QBeta) -> QBeta {
        QBeta {
            c: [
                &self.c[0] + &other.c[0],
                &self.c[1] + &other.c[1],
                &self.c[2] + &other.c[2],
            ],
        }
    }

    pub fn sub(&self, other: &QBeta) -> QBeta {
        QBeta {
            c: [
                &self.c[0] - &other.c[0],
                &self.c[1] - &other.c[1],
                &self.c[2] - &other.c[2],
            ],
        }
    }

    pub fn neg(&self) -> QBeta {
        QBeta {
            c: [-self.c[0].clone(), -self.c[1].clone(), -self.c[2].clone()],
        }
    }

    pub fn scale(&self, r: &Rat) -> QBeta {
        QBeta {
            c: [&self.c[0] * r, &self.c[1] * r, &self.c[2] * r],
        }
    }

    /// Interval evaluation at a bracket for `beta`.
    pub fn eval_interval(&self, bracket: &RatInterval) -> RatInterval {
        let b2 = bracket.mul(bracket);
        RatInterval::point(self.c[0].clone())
            .add(&bracket.scale(&self.c[1]))
            .add(&b2.scale(&self.c[2]))
    }
}

impl fmt::Debug for QBeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}*b + {}*b^2)", self.c[0], self.c[1], self.c[2])
    }
}

/// Exact carrier for the real and imaginary parts of `x * conj(y)`:
/// `p = x*conj(y) + conj(x)*y` and `t` with
/// `x*conj(y) - conj(x)*y = (gamma - conj(gamma)) * t`, so that
/// `Re(x*conj(y)) = p/2` and `Im(x*conj(y)) = Im(gamma) * t`.
#[derive(Clone, Debug)]
pub struct CrossPair {
    pub p: QBeta,
    pub t: QBeta,
}

/// Named roots of the base polynomials, for bracket refinement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootKind {
    Beta,
    GammaPrime,
    ReGamma,
    ImGamma,
}

/// A validated cubic complex Pisot unit determined by `(a, b)`:
/// `gamma` is the complex root of `Y^3 + b Y^2 + a Y - 1` with positive
/// imaginary part, `beta = 1/gamma'` the root `> 1` of `Y^3 - a Y^2 - b Y - 1`.
pub struct BaseSpec {
    a: i64,
    b: i64,
    property_f: bool,
    beta_bracket: RatInterval,
    gammap_bracket: RatInterval,
    regamma_bracket: RatInterval,
    imgamma_bracket: RatInterval,
    // constants in Q(beta)
    gamma_prime: QBeta,
    gamma_prime_sq: QBeta,
    e1: QBeta,
    im_gamma_sq: QBeta,
    cross_p: [[QBeta; 3]; 3],
    cross_t: [[QBeta; 3]; 3],
    // numeric shadows of the brackets
    beta_f64: f64,
    gammap_f64: f64,
    regamma_f64: f64,
    imgamma_f64: f64,
    // refinement caches; narrowing only, so concurrent use stays consistent
    beta_refined: Mutex<RatInterval>,
    embedding_inv: Mutex<Option<[[RatInterval; 3]; 3]>>,
}

impl fmt::Debug for BaseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BaseSpec")
            .field("a", &self.a)
            .field("b", &self.b)
            .field("property_f", &self.property_f)
            .field("beta", &self.beta_f64)
            .finish()
    }
}

fn poly_eval(coeffs: &[BigInt; 4], x: &Rat) -> Rat {
    // Horner, ascending coefficients.
    let mut acc = Rat::from_integer(coeffs[3].clone());
    for c in coeffs[..3].iter().rev() {
        acc = acc * x + Rat::from_integer(c.clone());
    }
    acc
}

/// Validate `(a, b)` and build the base. Errors: [`Error::NotComplex`] if the
/// discriminant is nonnegative, [`Error::NotPisotUnit`] if the polynomial
/// `Y^3 - a Y^2 - b Y - 1` has no root `> 1` with reciprocal in `(0,1)`.
pub fn make_base(a: i64, b: i64) -> Result<BaseSpec> {
    BaseSpec::new(a, b)
}

impl BaseSpec {
    pub fn new(a: i64, b: i64) -> Result<BaseSpec> {
        let (ab, bb) = (BigInt::from(a), BigInt::from(b));
        let disc: BigInt = -18 * &ab * &bb - 4 * &ab * &ab * &ab
            + &ab * &ab * &bb * &bb
            + 4 * &bb * &bb * &bb
            - 27;
        if !disc.is_negative() {
            return Err(Error::NotComplex { disc });
        }
        // beta_poly(1) = -(a+b); a root > 1 exists iff a + b > 0. Rational
        // roots of either cubic can only be +-1, and with disc < 0 the case
        // -1 is impossible, so a + b > 0 also certifies irreducibility.
        if a + b <= 0 {
            return Err(Error::NotPisotUnit {
                a,
                b,
                reason: "Y^3 - a Y^2 - b Y - 1 has no root greater than 1".into(),
            });
        }

        let beta_poly = Self::beta_poly_coeffs(a, b);
        // Integer scan for the sign change, then a few bisections.
        let ub = a.abs() + b.abs() + 2;
        let mut n = 1i64;
        while n < ub && !poly_eval(&beta_poly, &rat_int(n + 1)).is_positive() {
            n += 1;
        }
        let mut lo = rat_int(n);
        let mut hi = rat_int(n + 1);
        debug_assert!(poly_eval(&beta_poly, &lo).is_negative());
        debug_assert!(poly_eval(&beta_poly, &hi).is_positive());
        for _ in 0..80 {
            let mid = (&lo + &hi) / rat_int(2);
            if poly_eval(&beta_poly, &mid).is_negative() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let beta_bracket = RatInterval::new(lo, hi);
        let gammap_bracket =
            RatInterval::new(beta_bracket.hi.recip(), beta_bracket.lo.recip());

        // gamma' = beta^2 - a*beta - b in the beta basis.
        let gamma_prime = QBeta::new(rat_int(-b), rat_int(-a), Rat::one());
        // e1 = gamma + conj(gamma) = -b - gamma' = a*beta - beta^2.
        let e1 = QBeta::new(Rat::zero(), rat_int(a), -Rat::one());

        let regamma_bracket = {
            let iv = e1.eval_interval(&beta_bracket);
            iv.scale(&rat(1, 2))
        };
        // (Im gamma)^2 = e2 - e1^2/4 = beta - e1^2/4, positive by disc < 0.
        let im_gamma_sq = {
            let e1sq = mul_raw(a, b, &e1, &e1);
            QBeta::beta().sub(&e1sq.scale(&rat(1, 4)))
        };
        let imgamma_bracket = {
            let iv = im_gamma_sq.eval_interval(&beta_bracket);
            assert!(iv.lo.is_positive(), "complex root has nonzero imaginary part");
            rat_sqrt_interval(&iv, &rat(1, 1i64 << 48))
        };

        let gamma_prime_sq = mul_raw(a, b, &gamma_prime, &gamma_prime);

        // Power sums s_d = gamma^d + conj^d and U_d with
        // gamma^d - conj^d = (gamma - conj) U_d, for d = 0..2.
        let beta_pows = [QBeta::one(), QBeta::beta(), QBeta::beta_sq()];
        let s = [
            QBeta::from_int(2),
            e1.clone(),
            mul_raw(a, b, &e1, &e1).sub(&QBeta::beta().scale(&rat_int(2))),
        ];
        let u = [QBeta::zero(), QBeta::one(), e1.clone()];
        let mut cross_p: [[QBeta; 3]; 3] =
            std::array::from_fn(|_| std::array::from_fn(|_| QBeta::zero()));
        let mut cross_t: [[QBeta; 3]; 3] =
            std::array::from_fn(|_| std::array::from_fn(|_| QBeta::zero()));
        for i in 0usize..3 {
            for j in 0usize..3 {
                let m = i.min(j);
                let d = i.abs_diff(j);
                cross_p[i][j] = mul_raw(a, b, &beta_pows[m], &s[d]);
                let t = mul_raw(a, b, &beta_pows[m], &u[d]);
                cross_t[i][j] = match i.cmp(&j) {
                    Ordering::Greater => t,
                    Ordering::Less => t.neg(),
                    Ordering::Equal => QBeta::zero(),
                };
            }
        }

        let property_f = (b - 1).abs() <= a && b >= -1;

        let base = BaseSpec {
            a,
            b,
            property_f,
            beta_f64: beta_bracket.mid_f64(),
            gammap_f64: gammap_bracket.mid_f64(),
            regamma_f64: regamma_bracket.mid_f64(),
            imgamma_f64: imgamma_bracket.mid_f64(),
            beta_refined: Mutex::new(beta_bracket.clone()),
            embedding_inv: Mutex::new(None),
            beta_bracket,
            gammap_bracket,
            regamma_bracket,
            imgamma_bracket,
            gamma_prime,
            gamma_prime_sq,
            e1,
            im_gamma_sq,
            cross_p,
            cross_t,
        };
        Ok(base)
    }

    fn beta_poly_coeffs(a: i64, b: i64) -> [BigInt; 4] {
        [
            BigInt::from(-1),
            BigInt::from(-b),
            BigInt::from(-a),
            BigInt::from(1),
        ]
    }

    fn gamma_poly_coeffs(a: i64, b: i64) -> [BigInt; 4] {
        [
            BigInt::from(-1),
            BigInt::from(a),
            BigInt::from(b),
            BigInt::from(1),
        ]
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn property_f(&self) -> bool {
        self.property_f
    }

    /// Ascending coefficients of `Y^3 + b Y^2 + a Y - 1`.
    pub fn gamma_min_poly(&self) -> [BigInt; 4] {
        Self::gamma_poly_coeffs(self.a, self.b)
    }

    /// Ascending coefficients of `Y^3 - a Y^2 - b Y - 1`.
    pub fn beta_min_poly(&self) -> [BigInt; 4] {
        Self::beta_poly_coeffs(self.a, self.b)
    }

    pub fn beta_bracket(&self) -> &RatInterval {
        &self.beta_bracket
    }

    pub fn gammap_bracket(&self) -> &RatInterval {
        &self.gammap_bracket
    }

    pub fn regamma_bracket(&self) -> &RatInterval {
        &self.regamma_bracket
    }

    pub fn imgamma_bracket(&self) -> &RatInterval {
        &self.imgamma_bracket
    }

    /// `gamma'` in the beta basis: `beta^2 - a beta - b`.
    pub fn gamma_prime(&self) -> &QBeta {
        &self.gamma_prime
    }

    pub fn gamma_prime_sq(&self) -> &QBeta {
        &self.gamma_prime_sq
    }

    /// `gamma + conj(gamma)` in the beta basis.
    pub fn e1(&self) -> &QBeta {
        &self.e1
    }

    /// `(Im gamma)^2` in the beta basis.
    pub fn im_gamma_sq(&self) -> &QBeta {
        &self.im_gamma_sq
    }

    pub fn beta_f64(&self) -> f64 {
        self.beta_f64
    }

    pub fn gammap_f64(&self) -> f64 {
        self.gammap_f64
    }

    pub fn regamma_f64(&self) -> f64 {
        self.regamma_f64
    }

    pub fn imgamma_f64(&self) -> f64 {
        self.imgamma_f64
    }

    /// A bracket for `beta` of width at most `width`, from the shared cache.
    pub fn beta_bracket_refined(&self, width: &Rat) -> RatInterval {
        let mut guard = self.beta_refined.lock().unwrap();
        let poly = self.beta_min_poly();
        while guard.width() > *width {
            let mid = (&guard.lo + &guard.hi) / rat_int(2);
            if poly_eval(&poly, &mid).is_negative() {
                guard.lo = mid;
            } else {
                guard.hi = mid;
            }
        }
        guard.clone()
    }

    /// Isolating interval of length at most `width` for the requested root.
    pub fn refine(&self, root: RootKind, width: &Rat) -> RatInterval {
        assert!(width.is_positive());
        match root {
            RootKind::Beta => {
                if self.beta_bracket.width() <= *width {
                    return self.beta_bracket.clone();
                }
                self.beta_bracket_refined(width)
            }
            RootKind::GammaPrime => {
                if self.gammap_bracket.width() <= *width {
                    return self.gammap_bracket.clone();
                }
                let b = self.beta_bracket_refined(width);
                RatInterval::new(b.hi.recip(), b.lo.recip())
            }
            RootKind::ReGamma => {
                if self.regamma_bracket.width() <= *width {
                    return self.regamma_bracket.clone();
                }
                let mut w = width.clone();
                loop {
                    let b = self.beta_bracket_refined(&w);
                    let iv = self.e1.eval_interval(&b).scale(&rat(1, 2));
                    if iv.width() <= *width {
                        return iv;
                    }
                    w = w / rat_int(2);
                }
            }
            RootKind::ImGamma => {
                if self.imgamma_bracket.width() <= *width {
                    return self.imgamma_bracket.clone();
                }
                let mut w = width.clone();
                loop {
                    let b = self.beta_bracket_refined(&w);
                    let sq = self.im_gamma_sq.eval_interval(&b);
                    let iv = rat_sqrt_interval(&sq, &(width / rat_int(4)));
                    if iv.width() <= *width {
                        return iv;
                    }
                    w = w / rat_int(2);
                }
            }
        }
    }

    // ---- Z[gamma] ----

    /// Product in `Z[gamma]`, reduced by `gamma^3 = 1 - a*gamma - b*gamma^2`.
    pub fn zg_mul(&self, x: &ZGamma, y: &ZGamma) -> ZGamma {
        let mut d = [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()];
        for i in 0..3 {
            if x.v[i].is_zero() {
                continue;
            }
            for j in 0..3 {
                d[i + j] += &x.v[i] * &y.v[j];
            }
        }
        let (a, b) = (BigInt::from(self.a), BigInt::from(self.b));
        // gamma^3 = 1 - a g - b g^2; gamma^4 = -b + (1+ab) g + (b^2 - a) g^2
        let c0 = &d[0] + &d[3] - &b * &d[4];
        let c1 = &d[1] - &a * &d[3] + (BigInt::one() + &a * &b) * &d[4];
        let c2 = &d[2] - &b * &d[3] + (&b * &b - &a) * &d[4];
        ZGamma { v: [c0, c1, c2] }
    }

    /// `gamma^k` for any integer `k`; `gamma^-1 = a + b*gamma + gamma^2`.
    pub fn gamma_pow(&self, k: i64) -> ZGamma {
        let base = if k >= 0 {
            ZGamma::gamma()
        } else {
            ZGamma::new(self.a, self.b, 1)
        };
        let mut acc = ZGamma::one();
        for _ in 0..k.unsigned_abs() {
            acc = self.zg_mul(&acc, &base);
        }
        acc
    }

    /// `z^k` for `k >= 0`.
    pub fn zg_pow(&self, z: &ZGamma, k: u64) -> ZGamma {
        let mut acc = ZGamma::one();
        for _ in 0..k {
            acc = self.zg_mul(&acc, z);
        }
        acc
    }

    /// Galois image `v0 + v1*gamma' + v2*gamma'^2` written in the beta basis.
    pub fn galois_real(&self, z: &ZGamma) -> QBeta {
        QBeta::from_rat(Rat::from_integer(z.v[0].clone()))
            .add(&self.gamma_prime.scale(&Rat::from_integer(z.v[1].clone())))
            .add(&self.gamma_prime_sq.scale(&Rat::from_integer(z.v[2].clone())))
    }

    /// Exact `(p, t)` with `x*conj(y) + conj(x)*y = p` and
    /// `x*conj(y) - conj(x)*y = (gamma - conj(gamma)) * t`.
    pub fn cross_decompose(&self, x: &ZGamma, y: &ZGamma) -> CrossPair {
        let mut p = QBeta::zero();
        let mut t = QBeta::zero();
        for i in 0..3 {
            if x.v[i].is_zero() {
                continue;
            }
            for j in 0..3 {
                if y.v[j].is_zero() {
                    continue;
                }
                let coeff = Rat::from_integer(&x.v[i] * &y.v[j]);
                p = p.add(&self.cross_p[i][j].scale(&coeff));
                if i != j {
                    t = t.add(&self.cross_t[i][j].scale(&coeff));
                }
            }
        }
        CrossPair { p, t }
    }

    /// `|z|^2` as an exact element of `Q(beta)`.
    pub fn norm_sq(&self, z: &ZGamma) -> QBeta {
        self.cross_decompose(z, z).p.scale(&rat(1, 2))
    }

    // ---- Q(beta) ----

    pub fn qbeta_mul(&self, x: &QBeta, y: &QBeta) -> QBeta {
        mul_raw(self.a, self.b, x, y)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// the minimal polynomial of `beta`.
    pub fn qbeta_inverse(&self, q: &QBeta) -> Result<QBeta> {
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // r0 = minimal polynomial, r1 = q; keep s with s*q = r (mod M).
        let mut r0: Vec<Rat> = self
            .beta_min_poly()
            .iter()
            .map(|c| Rat::from_integer(c.clone()))
            .collect();
        let mut r1: Vec<Rat> = q.c.to_vec();
        trim(&mut r0);
        trim(&mut r1);
        let mut s0: Vec<Rat> = vec![];
        let mut s1: Vec<Rat> = vec![Rat::one()];
        while r1.len() > 1 {
            let (quot, rem) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&quot, &s1));
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s2;
            trim(&mut r1);
        }
        assert!(!r1.is_empty() && !r1[0].is_zero(), "minimal polynomial is irreducible");
        let inv_c = r1[0].recip();
        let mut s: Vec<Rat> = s1.iter().map(|c| c * &inv_c).collect();
        // s may have degree up to 2 already; reduce defensively.
        while s.len() > 3 {
            let top = s.pop().unwrap();
            let d = s.len();
            // beta^d = a beta^{d-1} + b beta^{d-2} + beta^{d-3}
            s[d - 1] = &s[d - 1] + rat_int(self.a) * &top;
            s[d - 2] = &s[d - 2] + rat_int(self.b) * &top;
            s[d - 3] = &s[d - 3] + top;
        }
        s.resize(3, Rat::zero());
        Ok(QBeta::new(s[0].clone(), s[1].clone(), s[2].clone()))
    }

    /// `q^k` for any integer `k` (inverse for negative exponents).
    pub fn qbeta_pow(&self, q: &QBeta, k: i64) -> Result<QBeta> {
        let base = if k >= 0 { q.clone() } else { self.qbeta_inverse(q)? };
        let mut acc = QBeta::one();
        for _ in 0..k.unsigned_abs() {
            acc = self.qbeta_mul(&acc, &base);
        }
        Ok(acc)
    }

    /// `beta^k` for any integer `k`; `1/beta = gamma'`.
    pub fn beta_pow(&self, k: i64) -> QBeta {
        let base = if k >= 0 {
            QBeta::beta()
        } else {
            self.gamma_prime.clone()
        };
        let mut acc = QBeta::one();
        for _ in 0..k.unsigned_abs() {
            acc = self.qbeta_mul(&acc, &base);
        }
        acc
    }

    /// Exact sign of `q` in `{-1, 0, +1}`. Zero iff the triple is zero; a
    /// nonzero value is separated from zero by refining the beta bracket,
    /// which terminates because `{1, beta, beta^2}` is a `Q`-basis.
    pub fn qbeta_sign(&self, q: &QBeta) -> i32 {
        if q.is_zero() {
            return 0;
        }
        // f64 fast path with a conservative relative guard.
        let (t0, t1, t2) = (
            q.c[0].to_f64(),
            q.c[1].to_f64(),
            q.c[2].to_f64(),
        );
        if let (Some(t0), Some(t1), Some(t2)) = (t0, t1, t2) {
            if t0.is_finite() && t1.is_finite() && t2.is_finite() {
                let b = self.beta_f64;
                let val = t0 + t1 * b + t2 * b * b;
                let scale = t0.abs() + t1.abs() * b + t2.abs() * b * b;
                if val.abs() > F64_SIGN_GUARD * scale {
                    return if val > 0.0 { 1 } else { -1 };
                }
            }
        }
        // Exact fallback.
        let mut width = self.beta_bracket_refined(&rat(1, 1i64 << 48)).width();
        loop {
            let bracket = self.beta_bracket_refined(&width);
            if let Some(s) = q.eval_interval(&bracket).sign() {
                return s;
            }
            width = width / rat_int(1 << 16);
        }
    }

    /// Exact comparison of two `Q(beta)` elements.
    pub fn qbeta_cmp(&self, x: &QBeta, y: &QBeta) -> Ordering {
        match self.qbeta_sign(&x.sub(y)) {
            s if s < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    /// The unique integer `n` with `n <= q < n+1`.
    pub fn qbeta_floor(&self, q: &QBeta) -> BigInt {
        let est = self.qbeta_f64(q);
        let mut n = BigInt::from(est.floor() as i64);
        // correct the estimate by exact sign tests
        while self.qbeta_sign(&q.sub(&QBeta::from_rat(Rat::from_integer(n.clone())))) < 0 {
            n -= 1;
        }
        loop {
            let next: BigInt = &n + 1;
            if self.qbeta_sign(&q.sub(&QBeta::from_rat(Rat::from_integer(next.clone())))) >= 0 {
                n = next;
            } else {
                break;
            }
        }
        n
    }

    /// Non-certified numeric value (for estimates and rendering only).
    pub fn qbeta_f64(&self, q: &QBeta) -> f64 {
        let b = self.beta_f64;
        q.c[0].to_f64().unwrap_or(f64::NAN)
            + q.c[1].to_f64().unwrap_or(f64::NAN) * b
            + q.c[2].to_f64().unwrap_or(f64::NAN) * b * b
    }

    /// Numeric value certified to absolute error at most `err`.
    pub fn qbeta_f64_certified(&self, q: &QBeta, err: f64) -> f64 {
        let target = Rat::from_float(err).expect("err must be finite");
        assert!(target.is_positive());
        let mut width = rat(1, 1i64 << 48);
        loop {
            let bracket = self.beta_bracket_refined(&width);
            let iv = q.eval_interval(&bracket);
            if iv.width() * rat_int(2) <= target {
                return iv.mid_f64();
            }
            width = width / rat_int(1 << 8);
        }
    }

    /// Numeric complex embedding of `z` (not certified; for rendering and
    /// pre-filters).
    pub fn zgamma_complex_f64(&self, z: &ZGamma) -> (f64, f64) {
        let (re_g, im_g) = (self.regamma_f64, self.imgamma_f64);
        let re_g2 = re_g * re_g - im_g * im_g;
        let im_g2 = 2.0 * re_g * im_g;
        let v0 = z.v[0].to_f64().unwrap_or(f64::NAN);
        let v1 = z.v[1].to_f64().unwrap_or(f64::NAN);
        let v2 = z.v[2].to_f64().unwrap_or(f64::NAN);
        (v0 + v1 * re_g + v2 * re_g2, v1 * im_g + v2 * im_g2)
    }

    /// Certified interval rows of the embedding matrix
    /// `(v0,v1,v2) -> (Re z, Im z, z')` at the internal working precision.
    pub fn embedding_rows(&self) -> ([RatInterval; 3], [RatInterval; 3], [RatInterval; 3]) {
        let w = rat(1, 1i64 << 48);
        let re_g = self.refine(RootKind::ReGamma, &w);
        let im_g = self.refine(RootKind::ImGamma, &w);
        let gp = self.refine(RootKind::GammaPrime, &w);
        let re_g2 = re_g.mul(&re_g).sub(&im_g.mul(&im_g));
        let im_g2 = re_g.mul(&im_g).scale(&rat_int(2));
        let gp2 = gp.mul(&gp);
        let one = RatInterval::point(Rat::one());
        let zero = RatInterval::point(Rat::zero());
        (
            [one.clone(), re_g, re_g2],
            [zero, im_g, im_g2],
            [one, gp, gp2],
        )
    }

    /// Certified interval inverse of the embedding matrix, cached.
    pub fn embedding_inverse(&self) -> [[RatInterval; 3]; 3] {
        let mut guard = self.embedding_inv.lock().unwrap();
        if let Some(inv) = guard.as_ref() {
            return inv.clone();
        }
        let (r0, r1, r2) = self.embedding_rows();
        let m = [r0, r1, r2];
        let minor = |i: usize, j: usize| -> RatInterval {
            let rows: Vec<usize> = (0..3).filter(|&r| r != i).collect();
            let cols: Vec<usize> = (0..3).filter(|&c| c != j).collect();
            m[rows[0]][cols[0]]
                .mul(&m[rows[1]][cols[1]])
                .sub(&m[rows[0]][cols[1]].mul(&m[rows[1]][cols[0]]))
        };
        let det = m[0][0]
            .mul(&minor(0, 0))
            .sub(&m[0][1].mul(&minor(0, 1)))
            .add(&m[0][2].mul(&minor(0, 2)));
        assert!(det.sign().is_some(), "embedding matrix is invertible");
        let det_inv = det.recip();
        let mut inv: [[RatInterval; 3]; 3] =
            std::array::from_fn(|_| std::array::from_fn(|_| RatInterval::point(Rat::zero())));
        for i in 0..3 {
            for j in 0..3 {
                // adjugate: cofactor of (j, i)
                let mut c = minor(j, i).mul(&det_inv);
                if (i + j) % 2 == 1 {
                    c = c.neg();
                }
                inv[i][j] = c;
            }
        }
        *guard = Some(inv.clone());
        inv
    }
}

/// Product in `Q(beta)` reduced by `beta^3 = a beta^2 + b beta + 1`, without
/// needing a full `BaseSpec` (used during construction).
fn mul_raw(a: i64, b: i64, x: &QBeta, y: &QBeta) -> QBeta {
    let mut d = [Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()];
    for i in 0..3 {
        if x.c[i].is_zero() {
            continue;
        }
        for j in 0..3 {
            d[i + j] = &d[i + j] + &x.c[i] * &y.c[j];
        }
    }
    let (ar, br) = (rat_int(a), rat_int(b));
    // beta^4 = (a^2+b) beta^2 + (ab+1) beta + a
    let c0 = &d[0] + &d[3] + &ar * &d[4];
    let c1 = &d[1] + &br * &d[3] + (&ar * &br + rat_int(1)) * &d[4];
    let c2 = &d[2] + &ar * &d[3] + (&ar * &ar + &br) * &d[4];
    QBeta::new(c0, c1, c2)
}

fn trim(p: &mut Vec<Rat>) {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    if p.len() == 1 && p[0].is_zero() {
        p.clear();
    }
}

fn poly_divmod(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = &den[dd];
    if rem.len() <= dd {
        return (vec![], rem);
    }
    let mut quot = vec![Rat::zero(); rem.len() - dd];
    for k in (dd..rem.len()).rev() {
        let coeff = &rem[k] / lead;
        if coeff.is_zero() {
            continue;
        }
        quot[k - dd] = coeff.clone();
        for (i, dc) in den.iter().enumerate() {
            rem[k - dd + i] = &rem[k - dd + i] - &coeff * dc;
        }
    }
    rem.truncate(dd);
    (quot, rem)
}

fn poly_mul(x: &[Rat], y: &[Rat]) -> Vec<Rat> {
    if x.is_empty() || y.is_empty() {
        return vec![];
    }
    let mut out = vec![Rat::zero(); x.len() + y.len() - 1];
    for (i, xi) in x.iter().enumerate() {
        for (j, yj) in y.iter().enumerate() {
            out[i + j] = &out[i + j] + xi * yj;
        }
    }
    out
}

fn poly_sub(x: &[Rat], y: &[Rat]) -> Vec<Rat> {
    let n = x.len().max(y.len());
    let mut out = vec![Rat::zero(); n];
    for (i, o) in out.iter_mut().enumerate() {
        let a = x.get(i).cloned().unwrap_or_else(Rat::zero);
        let b = y.get(i).cloned().unwrap_or_else(Rat::zero);
        *o = a - b;
    }
    out
}
