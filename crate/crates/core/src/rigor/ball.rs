//! Midpoint–radius enclosures.

use core::cmp::Ordering;
use core::fmt;

use super::float::{Float, Prec};
use super::mag::Mag;
use crate::error::Error;

/// The closed interval `[mid - rad, mid + rad]`.
///
/// Operations guarantee that the output contains the exact image of every
/// point of the inputs; midpoint rounding error is folded into the radius.
#[derive(Clone, PartialEq, Default)]
pub struct Ball {
    mid: Float,
    rad: Mag,
}

/// Certified sign of a ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Positive,
    Indeterminate,
}

impl Sign {
    pub fn is_determinate(self) -> bool {
        self != Sign::Indeterminate
    }

    /// True for a `Positive`/`Negative` pair in either order.
    pub fn opposes(self, other: Sign) -> bool {
        matches!(
            (self, other),
            (Sign::Positive, Sign::Negative) | (Sign::Negative, Sign::Positive)
        )
    }
}

impl Ball {
    pub fn new(mid: Float, rad: Mag) -> Ball {
        Ball { mid, rad }
    }

    pub fn exact(mid: Float) -> Ball {
        Ball { mid, rad: Mag::ZERO }
    }

    pub fn zero() -> Ball {
        Ball::default()
    }

    pub fn one() -> Ball {
        Ball::exact(Float::one())
    }

    pub fn from_i64(x: i64) -> Ball {
        Ball::exact(Float::from_i64(x))
    }

    pub fn from_f64(x: f64) -> Ball {
        Ball::exact(Float::from_f64(x))
    }

    /// `m * 2^e`.
    pub fn from_dyadic(m: i128, e: i64) -> Ball {
        Ball::exact(Float::from_i128_exp(m, e))
    }

    /// Ball centred on `x` with radius `r`; for building operands in tests and
    /// for interval inputs.
    pub fn from_f64_rad(x: f64, r: f64) -> Ball {
        Ball::new(Float::from_f64(x), Mag::from_f64_up(r))
    }

    /// The rational `p/q` enclosed at `prec` bits.
    pub fn from_ratio(p: i64, q: u64, prec: Prec) -> Ball {
        let (m, e) = Float::from_i64(p).div_u64(q, prec);
        Ball::new(m, e)
    }

    /// A ball containing every real number.
    pub fn whole() -> Ball {
        Ball::new(Float::zero(), Mag::INFINITY)
    }

    #[inline]
    pub fn mid(&self) -> &Float {
        &self.mid
    }

    #[inline]
    pub fn rad(&self) -> Mag {
        self.rad
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.rad.is_finite()
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    /// Add `r` to the radius.
    pub fn add_error(&self, r: Mag) -> Ball {
        Ball::new(self.mid.clone(), self.rad.add(r))
    }

    /// Upper bound for `sup |x|` over the ball.
    pub fn mag_upper(&self) -> Mag {
        self.mid.mag_upper().add(self.rad)
    }

    /// Lower bound for `inf |x|` over the ball (zero when it touches 0).
    pub fn mag_lower(&self) -> f64 {
        let m = self.mid.mag_lower();
        let r = self.rad.get();
        if r == 0.0 {
            return m;
        }
        if m > r {
            // m - r rounded down.
            let d = m - r;
            if d > 0.0 {
                d.next_down().max(0.0)
            } else {
                0.0
            }
        } else {
            0.0
        }
    }

    /// Lower endpoint as an `f64` rounded down.
    pub fn lower_f64(&self) -> f64 {
        if self.mid.is_negative() {
            -(self.mag_upper().get())
        } else {
            self.mag_lower_signed()
        }
    }

    /// Upper endpoint as an `f64` rounded up.
    pub fn upper_f64(&self) -> f64 {
        if self.mid.is_negative() {
            -self.neg().mag_lower_signed()
        } else {
            self.mag_upper().get()
        }
    }

    // For non-negative midpoints: mid - rad rounded down (may be negative).
    fn mag_lower_signed(&self) -> f64 {
        let m = self.mid.mag_lower();
        let r = self.rad.get();
        if r == 0.0 {
            return m;
        }
        let d = m - r;
        if d == 0.0 {
            0.0
        } else {
            d.next_down()
        }
    }

    pub fn sign(&self) -> Sign {
        if self.mid.is_zero() || !self.rad.is_finite() {
            return Sign::Indeterminate;
        }
        if self.mid.mag_lower() > self.rad.get() {
            if self.mid.is_negative() {
                Sign::Negative
            } else {
                Sign::Positive
            }
        } else {
            Sign::Indeterminate
        }
    }

    /// Whether the ball (certainly) does not contain zero.
    pub fn excludes_zero(&self) -> bool {
        self.sign().is_determinate()
    }

    pub fn neg(&self) -> Ball {
        Ball::new(self.mid.neg(), self.rad)
    }

    pub fn abs(&self) -> Ball {
        if self.mid.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn mul_2exp(&self, k: i64) -> Ball {
        Ball::new(self.mid.mul_2exp(k), self.rad.scale2(k))
    }

    pub fn add(&self, other: &Ball, prec: Prec) -> Ball {
        let (m, e) = self.mid.add(&other.mid, prec);
        Ball::new(m, self.rad.add(other.rad).add(e))
    }

    pub fn sub(&self, other: &Ball, prec: Prec) -> Ball {
        let (m, e) = self.mid.sub(&other.mid, prec);
        Ball::new(m, self.rad.add(other.rad).add(e))
    }

    pub fn mul(&self, other: &Ball, prec: Prec) -> Ball {
        let (m, e) = self.mid.mul(&other.mid, prec);
        let mut rad = e;
        if !other.rad.is_zero() {
            rad = rad.add(self.mid.mag_upper().mul(other.rad));
        }
        if !self.rad.is_zero() {
            rad = rad.add(other.mid.mag_upper().mul(self.rad));
            rad = rad.add(self.rad.mul(other.rad));
        }
        Ball::new(m, rad)
    }

    pub fn sqr(&self, prec: Prec) -> Ball {
        self.mul(self, prec)
    }

    pub fn mul_i64(&self, k: i64, prec: Prec) -> Ball {
        let (m, e) = self.mid.mul_i64(k, prec);
        Ball::new(m, self.rad.mul(Mag::from_f64_up(k.unsigned_abs() as f64)).add(e))
    }

    pub fn div_u64(&self, d: u64, prec: Prec) -> Ball {
        let (m, e) = self.mid.div_u64(d, prec);
        // d is exact and at least 1, so rad/d <= rad rounded up.
        Ball::new(m, self.rad.div_lower(d as f64).add(e))
    }

    pub fn div(&self, other: &Ball, prec: Prec) -> Result<Ball, Error> {
        let b_lo = other.mid.mag_lower();
        if other.mid.is_zero() || !(b_lo > other.rad.get()) {
            return Err(Error::DivisorContainsZero);
        }
        let (m, e) = self.mid.div(&other.mid, prec);
        let mut rad = e;
        if !(self.rad.is_zero() && other.rad.is_zero()) {
            // (ra |mb| + |ma| rb) / (|mb| (|mb| - rb))
            let num = self.rad.mul(other.mid.mag_upper()).add(self.mid.mag_upper().mul(other.rad));
            let gap = b_lo - other.rad.get();
            let gap = if gap > 0.0 { gap.next_down() } else { 0.0 };
            let den = b_lo * gap;
            let den = if den > 0.0 { den.next_down() } else { 0.0 };
            rad = rad.add(num.div_lower(den));
        }
        Ok(Ball::new(m, rad))
    }

    pub fn inv(&self, prec: Prec) -> Result<Ball, Error> {
        Ball::one().div(self, prec)
    }

    /// Whether the exact value `x` lies in the ball (exact test).
    pub fn contains_float(&self, x: &Float) -> bool {
        if !self.rad.is_finite() {
            return true;
        }
        let d = x.sub_exact(&self.mid);
        d.cmp_abs(&Float::from_f64(self.rad.get())) != Ordering::Greater
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        self.contains_float(&Float::from_f64(x))
    }

    /// Whether `other` is a subset of `self` (exact test).
    pub fn contains(&self, other: &Ball) -> bool {
        if !self.rad.is_finite() {
            return true;
        }
        if !other.rad.is_finite() {
            return false;
        }
        let d = other.mid.sub_exact(&self.mid).abs();
        let slack = Float::from_f64(self.rad.get()).sub_exact(&Float::from_f64(other.rad.get()));
        !slack.is_negative() && d.cmp_value(&slack) != Ordering::Greater
    }

    /// Whether the two balls share a point (exact test).
    pub fn overlaps(&self, other: &Ball) -> bool {
        if !self.rad.is_finite() || !other.rad.is_finite() {
            return true;
        }
        let d = self.mid.sub_exact(&other.mid).abs();
        let reach = Float::from_f64(self.rad.get()).add_exact(&Float::from_f64(other.rad.get()));
        d.cmp_value(&reach) != Ordering::Greater
    }

    /// Smallest ball (up to rounding) containing both.
    pub fn union(&self, other: &Ball, prec: Prec) -> Ball {
        if !self.is_finite() || !other.is_finite() {
            return Ball::whole();
        }
        let lo_a = self.mid.sub_exact(&Float::from_f64(self.rad.get()));
        let lo_b = other.mid.sub_exact(&Float::from_f64(other.rad.get()));
        let hi_a = self.mid.add_exact(&Float::from_f64(self.rad.get()));
        let hi_b = other.mid.add_exact(&Float::from_f64(other.rad.get()));
        let lo = if lo_a.cmp_value(&lo_b) == Ordering::Less { lo_a } else { lo_b };
        let hi = if hi_a.cmp_value(&hi_b) == Ordering::Greater { hi_a } else { hi_b };
        Ball::from_endpoints(&lo, &hi, prec)
    }

    /// Ball enclosing `[lo, hi]`.
    pub fn from_endpoints(lo: &Float, hi: &Float, prec: Prec) -> Ball {
        let (m, e) = lo.add(hi, prec + 2);
        let m = m.mul_2exp(-1);
        let (half_w, e2) = hi.sub(lo, prec + 2);
        let rad = half_w.mag_upper().scale2(-1).add(e.scale2(-1)).add(e2.scale2(-1));
        let (m, e3) = m.round(prec);
        Ball::new(m, rad.add(e3))
    }

    /// Whether every point is strictly less than every point of `other`.
    pub fn lt(&self, other: &Ball) -> bool {
        other.sub(self, 64).sign() == Sign::Positive
    }

    /// Reduce the midpoint to `prec` bits, widening the radius.
    pub fn round(&self, prec: Prec) -> Ball {
        let (m, e) = self.mid.round(prec);
        Ball::new(m, self.rad.add(e))
    }
}

impl fmt::Debug for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?} +/- {:?}]", self.mid, self.rad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn additive_identity() {
        let r = Ball::from_i64(3).add(&Ball::zero(), 64);
        assert_eq!(r.mid().to_f64(), 3.0);
        assert!(r.rad().is_zero());
    }

    #[test]
    fn product_contains_endpoint_algebra() {
        let a = Ball::from_f64_rad(2.0, 0.1);
        let r = a.mul(&a, 64);
        assert!(r.contains_f64(3.61));
        assert!(r.contains_f64(4.41));
    }

    #[test]
    fn third_has_positive_radius() {
        let r = Ball::one().div(&Ball::from_i64(3), 53).unwrap();
        assert!(r.rad().get() > 0.0);
        assert!((r.mid_f64() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn divisor_straddling_zero_is_rejected() {
        let b = Ball::from_f64_rad(0.1, 0.2);
        assert_eq!(Ball::one().div(&b, 64), Err(Error::DivisorContainsZero));
    }

    #[test]
    fn sign_cases() {
        assert_eq!(Ball::from_f64_rad(-1.46, 0.01).sign(), Sign::Negative);
        assert_eq!(Ball::from_f64_rad(0.0, 0.5).sign(), Sign::Indeterminate);
        assert_eq!(Ball::from_f64_rad(1e-30, 1e-40).sign(), Sign::Positive);
        assert_eq!(Ball::whole().sign(), Sign::Indeterminate);
    }

    #[test]
    fn union_covers_both() {
        let a = Ball::from_f64_rad(1.0, 0.1);
        let b = Ball::from_f64_rad(3.0, 0.5);
        let u = a.union(&b, 64);
        assert!(u.contains(&a) && u.contains(&b));
    }
}
