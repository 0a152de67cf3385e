//! Rational interval arithmetic.
//!
//! Every numeric statement the library certifies goes through intervals with
//! exact rational endpoints: isolating brackets for the roots of the base
//! polynomials, interval evaluation of Q(beta) elements, and the certified
//! bounding boxes used by the cut-and-project enumeration.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// A closed interval with rational endpoints, `lo <= hi`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl RatInterval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        debug_assert!(lo <= hi);
        RatInterval { lo, hi }
    }

    pub fn point(r: Rat) -> Self {
        RatInterval { lo: r.clone(), hi: r }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn contains(&self, r: &Rat) -> bool {
        &self.lo <= r && r <= &self.hi
    }

    pub fn contains_interval(&self, other: &RatInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn add(&self, other: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn neg(&self) -> RatInterval {
        RatInterval::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn mul(&self, other: &RatInterval) -> RatInterval {
        let p1 = &self.lo * &other.lo;
        let p2 = &self.lo * &other.hi;
        let p3 = &self.hi * &other.lo;
        let p4 = &self.hi * &other.hi;
        let mut lo = p1.clone();
        let mut hi = p1;
        for p in [p2, p3, p4] {
            if p < lo {
                lo = p.clone();
            }
            if p > hi {
                hi = p;
            }
        }
        RatInterval { lo, hi }
    }

    pub fn scale(&self, r: &Rat) -> RatInterval {
        if r.is_negative() {
            RatInterval::new(&self.hi * r, &self.lo * r)
        } else {
            RatInterval::new(&self.lo * r, &self.hi * r)
        }
    }

    pub fn shift(&self, r: &Rat) -> RatInterval {
        RatInterval::new(&self.lo + r, &self.hi + r)
    }

    /// Reciprocal; the interval must not contain zero.
    pub fn recip(&self) -> RatInterval {
        assert!(self.lo.is_positive() || self.hi.is_negative());
        RatInterval::new(self.hi.recip(), self.lo.recip())
    }

    /// `Some(1)` if the interval is strictly positive, `Some(-1)` if strictly
    /// negative, `None` if it contains zero.
    pub fn sign(&self) -> Option<i32> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else {
            None
        }
    }

    pub fn mid_f64(&self) -> f64 {
        let mid = (&self.lo + &self.hi) / rat_int(2);
        mid.to_f64().unwrap_or(f64::NAN)
    }
}

/// Outer rational bounds for the square root of a nonnegative interval,
/// with endpoint slack at most `width` on each side. Bisection on dyadic
/// midpoints keeps the denominators small.
pub fn rat_sqrt_interval(x: &RatInterval, width: &Rat) -> RatInterval {
    assert!(!x.lo.is_negative());
    let one = Rat::one();
    let ub0 = if x.hi > one { x.hi.clone() } else { one };

    // Upper bound for sqrt(x.hi): invariant u*u >= x.hi.
    let mut lo = Rat::zero();
    let mut hi = ub0.clone();
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / rat_int(2);
        if &mid * &mid >= x.hi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let upper = hi;

    // Lower bound for sqrt(x.lo): invariant l*l <= x.lo.
    let mut lo = Rat::zero();
    let mut hi = ub0;
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / rat_int(2);
        if &mid * &mid <= x.lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lower = lo;

    RatInterval::new(lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_bounds_bracket_the_root() {
        let x = RatInterval::new(rat(2, 1), rat(2, 1));
        let w = rat(1, 1 << 20);
        let s = rat_sqrt_interval(&x, &w);
        assert!(&s.lo * &s.lo <= rat(2, 1));
        assert!(&s.hi * &s.hi >= rat(2, 1));
        assert!(s.width() <= rat(1, 1 << 18));
    }

    #[test]
    fn mul_handles_signs() {
        let a = RatInterval::new(rat(-2, 1), rat(3, 1));
        let b = RatInterval::new(rat(-1, 1), rat(4, 1));
        let c = a.mul(&b);
        assert_eq!(c.lo, rat(-8, 1));
        assert_eq!(c.hi, rat(12, 1));
    }
}
