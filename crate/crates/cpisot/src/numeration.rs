//! Greedy beta-numeration: Renyi expansions, the constructive digit witness
//! showing `X^m(gamma)` equals the cut-and-project set, and reproducible
//! Property (F) evidence runs.

use std::fmt;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{BaseSpec, QBeta, ZGamma};
use crate::interval::{rat_int, Rat};

pub const DEFAULT_MAX_DIGITS: usize = 64;

/// Digits of a greedy expansion, most significant first. `digits[i]` is the
/// coefficient of `beta^(offset - i)` (equivalently of `gamma^(i - offset)`
/// under the Galois pullback). No leading or trailing zeros are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitString {
    pub digits: Vec<u32>,
    pub offset: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionStatus {
    Finite,
    Truncated,
}

impl DigitString {
    pub fn empty() -> Self {
        DigitString { digits: vec![], offset: 0 }
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Digit at exponent `e` of beta (zero outside the stored range).
    pub fn digit_at(&self, e: i64) -> u32 {
        if self.digits.is_empty() || e > self.offset {
            return 0;
        }
        let idx = self.offset - e;
        if idx < 0 {
            return 0;
        }
        *self.digits.get(idx as usize).unwrap_or(&0)
    }

    pub fn max_digit(&self) -> u32 {
        self.digits.iter().copied().max().unwrap_or(0)
    }

    /// Value as an element of `Q(beta)`: sum of `a_e * beta^e`.
    pub fn value_qbeta(&self, base: &BaseSpec) -> QBeta {
        let mut acc = QBeta::zero();
        for (i, &d) in self.digits.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let e = self.offset - i as i64;
            acc = acc.add(&base.beta_pow(e).scale(&rat_int(d as i64)));
        }
        acc
    }

    /// Galois pullback: sum of `a_e * gamma^e` where `beta^{-e}` digits map to
    /// `gamma^e` (since `gamma' = 1/beta`). Digits at beta-exponent `e`
    /// contribute at gamma-exponent `-e`.
    pub fn value_zgamma(&self, base: &BaseSpec) -> ZGamma {
        let mut acc = ZGamma::zero();
        for (i, &d) in self.digits.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let e = self.offset - i as i64;
            acc = acc.add(&base.gamma_pow(-e).scale(&num_bigint::BigInt::from(d)));
        }
        acc
    }

    fn strip(mut digits: Vec<u32>, mut offset: i64) -> DigitString {
        while digits.first() == Some(&0) {
            digits.remove(0);
            offset -= 1;
        }
        while digits.last() == Some(&0) {
            digits.pop();
        }
        if digits.is_empty() {
            return DigitString::empty();
        }
        DigitString { digits, offset }
    }
}

impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            return write!(f, "0.");
        }
        let top = self.offset.max(-1);
        let bottom = self.offset - self.digits.len() as i64 + 1;
        for e in (bottom.min(0)..=top).rev() {
            if e == -1 {
                write!(f, ".")?;
            }
            write!(f, "{}", self.digit_at(e))?;
        }
        if bottom >= 0 {
            write!(f, ".")?;
        }
        Ok(())
    }
}

/// Greedy Renyi expansion of `x` in base beta. Digits are produced at
/// exponents `-1, -2, ...`; stops when the remainder is exactly zero
/// (`Finite`) or the budget runs out (`Truncated`).
pub fn renyi_expand(
    x: &QBeta,
    base: &BaseSpec,
    max_digits: usize,
) -> Result<(DigitString, ExpansionStatus)> {
    if base.qbeta_sign(x) < 0 || base.qbeta_sign(&x.sub(&QBeta::one())) >= 0 {
        return Err(Error::OutOfRange);
    }
    let mut rem = x.clone();
    let mut digits = Vec::new();
    let mut status = ExpansionStatus::Truncated;
    for _ in 0..max_digits {
        if rem.is_zero() {
            status = ExpansionStatus::Finite;
            break;
        }
        let shifted = base.qbeta_mul(&QBeta::beta(), &rem);
        let a = base.qbeta_floor(&shifted);
        let a_u32 = a.to_u32().expect("greedy digit fits in u32");
        digits.push(a_u32);
        rem = shifted.sub(&QBeta::from_rat(Rat::from_integer(a)));
    }
    if rem.is_zero() {
        status = ExpansionStatus::Finite;
    }
    Ok((DigitString::strip(digits, -1), status))
}

/// Constructive digit witness: digits `a_0..a_n` in `{0..m}` with
/// `z = sum a_j gamma^j`, following the two-case finiteness argument
/// (`z' < 1`: pure greedy expansion of `z'`; `z' >= 1`: strip `k` leading
/// `m`-digits and one digit `b`, then expand the scaled remainder).
pub fn xm_witness(
    z: &ZGamma,
    m: i64,
    base: &BaseSpec,
    max_digits: usize,
) -> Result<DigitString> {
    if !base.property_f() {
        return Err(Error::Precondition(
            "xm_witness requires a base with Property (F)".into(),
        ));
    }
    // m >= beta - 1, i.e., m + 1 - beta > 0 (beta is irrational).
    if base.qbeta_sign(&QBeta::from_int(m + 1).sub(&QBeta::beta())) <= 0 {
        return Err(Error::AlphabetTooSmall { m });
    }
    let zp = base.galois_real(z);
    let c = base
        .qbeta_inverse(&QBeta::one().sub(base.gamma_prime()))
        .expect("1 - gamma' is nonzero")
        .scale(&rat_int(m));
    if base.qbeta_sign(&zp) < 0 || base.qbeta_sign(&zp.sub(&c)) >= 0 {
        return Err(Error::WindowViolation);
    }

    let expand_fractional = |u: &QBeta| -> Result<DigitString> {
        let (ds, status) = renyi_expand(u, base, max_digits)?;
        if status == ExpansionStatus::Truncated {
            return Err(Error::DigitBudgetExceeded { max_digits });
        }
        Ok(ds)
    };

    let digits = if base.qbeta_sign(&zp.sub(&QBeta::one())) < 0 {
        // Case 1: gamma-digit at j is the beta-digit at -j.
        expand_fractional(&zp)?
    } else {
        // Case 2: minimal k >= 0 with z' - sum_{j=0}^{k} m beta^{-j} < 0.
        let mut k: i64 = 0;
        let mut partial = QBeta::from_int(m); // sum_{j=0}^{k} m beta^{-j}
        while base.qbeta_sign(&zp.sub(&partial)) >= 0 {
            k += 1;
            partial = partial.add(&base.beta_pow(-k).scale(&rat_int(m)));
        }
        // b = floor(beta^k * (z' - sum_{j<k} m beta^{-j})) in {0..m}.
        let head = partial.sub(&base.beta_pow(-k).scale(&rat_int(m)));
        let scaled = base.qbeta_mul(&base.beta_pow(k), &zp.sub(&head));
        let b = base.qbeta_floor(&scaled);
        let b_i64 = b.to_i64().expect("digit fits in i64");
        debug_assert!((0..=m).contains(&b_i64));
        let u = scaled.sub(&QBeta::from_rat(Rat::from_integer(b)));
        let tail = expand_fractional(&u)?;
        // Assemble gamma-digits: m at j = 0..k-1, b at j = k, then the tail
        // shifted by k. In beta-exponents: m at 0..-(k-1), b at -k, tail
        // digits at -(k+j).
        let lowest = tail
            .digits
            .len()
            .checked_sub(1)
            .map(|l| tail.offset - l as i64)
            .unwrap_or(-1);
        let total_len = (-lowest + k + 1) as usize;
        let mut all = vec![0u32; total_len];
        for (idx, slot) in all.iter_mut().enumerate().take(k as usize) {
            debug_assert!(idx < total_len);
            *slot = m as u32;
        }
        all[k as usize] = b_i64 as u32;
        for (i, &d) in tail.digits.iter().enumerate() {
            let e = tail.offset - i as i64; // beta exponent in the tail
            all[(k - e) as usize] = d;
        }
        DigitString::strip(all, 0)
    };

    debug_assert_eq!(&digits.value_zgamma(base), z);
    Ok(digits)
}

/// Outcome counts of expanding pseudo-random elements of `Z[beta] ∩ [0,1)`.
#[derive(Clone, Debug)]
pub struct EvidenceReport {
    pub samples: usize,
    pub finite: usize,
    pub truncated: usize,
    pub akiyama_flag: bool,
    pub max_digits: usize,
    pub seed: u64,
}

impl EvidenceReport {
    /// Whether the sampled outcomes are consistent with the criterion flag.
    /// A truncated expansion under a true flag is a genuine contradiction; a
    /// finite-only run under a false flag is merely inconclusive.
    pub fn contradicts_criterion(&self) -> bool {
        self.akiyama_flag && self.truncated > 0
    }
}

/// Expand `samples` seeded pseudo-random elements of `Z[beta] ∩ [0,1)` and
/// count finite vs truncated outcomes. Evidence only: a finite-only report
/// does not prove Property (F).
pub fn property_f_evidence(
    base: &BaseSpec,
    samples: usize,
    max_digits: usize,
    seed: u64,
) -> EvidenceReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut finite = 0;
    let mut truncated = 0;
    let mut produced = 0;
    while produced < samples {
        let q = QBeta::new(
            rat_int(rng.gen_range(-30i64..=30)),
            rat_int(rng.gen_range(-30i64..=30)),
            rat_int(rng.gen_range(-30i64..=30)),
        );
        if base.qbeta_sign(&q) < 0 || base.qbeta_sign(&q.sub(&QBeta::one())) >= 0 {
            continue;
        }
        produced += 1;
        match renyi_expand(&q, base, max_digits) {
            Ok((_, ExpansionStatus::Finite)) => finite += 1,
            Ok((_, ExpansionStatus::Truncated)) => truncated += 1,
            Err(_) => unreachable!("range was checked"),
        }
    }
    EvidenceReport {
        samples,
        finite,
        truncated,
        akiyama_flag: base.property_f(),
        max_digits,
        seed,
    }
}
