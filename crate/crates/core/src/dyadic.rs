//! Exact dyadic rationals `m * 2^e` for lattice placement and certificates.

use core::cmp::Ordering;
use core::fmt;

use crate::error::Error;
use crate::rigor::{Ball, Float};

/// `mant * 2^exp`, normalized so that `mant` is odd (or zero with `exp = 0`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Dyadic {
    mant: i128,
    exp: i32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { mant: 0, exp: 0 };

    pub fn new(mant: i128, exp: i32) -> Dyadic {
        if mant == 0 {
            return Dyadic::ZERO;
        }
        let tz = mant.trailing_zeros().min(126);
        Dyadic { mant: mant >> tz, exp: exp + tz as i32 }
    }

    pub fn from_int(n: i64) -> Dyadic {
        Dyadic::new(i128::from(n), 0)
    }

    /// Largest multiple of `2^exp` not exceeding `x`.
    pub fn floor_f64(x: f64, exp: i32) -> Dyadic {
        let scaled = libm::floor(libm::ldexp(x, -exp));
        Dyadic::new(scaled as i128, exp)
    }

    /// Smallest multiple of `2^exp` not below `x`.
    pub fn ceil_f64(x: f64, exp: i32) -> Dyadic {
        let scaled = libm::ceil(libm::ldexp(x, -exp));
        Dyadic::new(scaled as i128, exp)
    }

    /// Exact value of a finite `f64`.
    pub fn from_f64(x: f64) -> Option<Dyadic> {
        let f = Float::from_f64(x);
        let (m, e) = f.to_i128_exp()?;
        Some(Dyadic::new(m, i32::try_from(e).ok()?))
    }

    pub fn mantissa(self) -> i128 {
        self.mant
    }

    pub fn exponent(self) -> i32 {
        self.exp
    }

    pub fn is_zero(self) -> bool {
        self.mant == 0
    }

    pub fn is_positive(self) -> bool {
        self.mant > 0
    }

    pub fn to_f64(self) -> f64 {
        libm::ldexp(self.mant as f64, self.exp)
    }

    pub fn to_float(self) -> Float {
        Float::from_i128_exp(self.mant, i64::from(self.exp))
    }

    pub fn to_ball(self) -> Ball {
        Ball::exact(self.to_float())
    }

    fn align(a: Dyadic, b: Dyadic) -> Result<(i128, i128, i32), Error> {
        let e = a.exp.min(b.exp);
        let sa = shl_checked(a.mant, (a.exp - e) as u32)?;
        let sb = shl_checked(b.mant, (b.exp - e) as u32)?;
        Ok((sa, sb, e))
    }

    pub fn checked_add(self, other: Dyadic) -> Result<Dyadic, Error> {
        if self.is_zero() {
            return Ok(other);
        }
        if other.is_zero() {
            return Ok(self);
        }
        let (a, b, e) = Dyadic::align(self, other)?;
        Ok(Dyadic::new(a.checked_add(b).ok_or(Error::DyadicOverflow)?, e))
    }

    pub fn checked_sub(self, other: Dyadic) -> Result<Dyadic, Error> {
        self.checked_add(other.neg())
    }

    pub fn checked_mul_int(self, k: i64) -> Result<Dyadic, Error> {
        Ok(Dyadic::new(self.mant.checked_mul(i128::from(k)).ok_or(Error::DyadicOverflow)?, self.exp))
    }

    pub fn checked_mul(self, other: Dyadic) -> Result<Dyadic, Error> {
        Ok(Dyadic::new(
            self.mant.checked_mul(other.mant).ok_or(Error::DyadicOverflow)?,
            self.exp + other.exp,
        ))
    }

    pub fn neg(self) -> Dyadic {
        Dyadic::new(-self.mant, self.exp)
    }

    pub fn mul_2exp(self, k: i32) -> Dyadic {
        Dyadic::new(self.mant, self.exp + k)
    }

    pub fn half(self) -> Dyadic {
        self.mul_2exp(-1)
    }

    /// `floor(self / step)` for a positive step.
    pub fn div_floor(self, step: Dyadic) -> Result<i64, Error> {
        let (a, b, _) = Dyadic::align(self, step)?;
        let q = a.div_euclid(b);
        i64::try_from(q).map_err(|_| Error::DyadicOverflow)
    }

    pub fn midpoint(self, other: Dyadic) -> Result<Dyadic, Error> {
        Ok(self.checked_add(other)?.half())
    }

    pub fn min(self, other: Dyadic) -> Dyadic {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Dyadic) -> Dyadic {
        if self >= other {
            self
        } else {
            other
        }
    }
}

fn shl_checked(m: i128, s: u32) -> Result<i128, Error> {
    if m == 0 {
        return Ok(0);
    }
    if s >= 127 || m.unsigned_abs().leading_zeros() <= s + 1 {
        return Err(Error::DyadicOverflow);
    }
    Ok(m << s)
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Dyadic) -> Ordering {
        match Dyadic::align(*self, *other) {
            Ok((a, b, _)) => a.cmp(&b),
            // Alignment overflow only happens for wildly different scales;
            // fall back to exact Float comparison.
            Err(_) => self.to_float().cmp_value(&other.to_float()),
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Dyadic) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp >= 0 && self.exp < 64 {
            if let Some(v) = self.mant.checked_mul(1i128 << self.exp) {
                return write!(f, "{v}");
            }
        }
        write!(f, "{}", self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_and_equality() {
        assert_eq!(Dyadic::new(4, 0), Dyadic::new(1, 2));
        assert_eq!(Dyadic::new(0, 7), Dyadic::ZERO);
        assert_eq!(Dyadic::new(3, -1).to_f64(), 1.5);
    }

    #[test]
    fn arithmetic() {
        let a = Dyadic::new(3, -2);
        let b = Dyadic::from_int(5);
        assert_eq!(a.checked_add(b).unwrap().to_f64(), 5.75);
        assert_eq!(b.checked_sub(a).unwrap().to_f64(), 4.25);
        assert_eq!(a.checked_mul_int(8).unwrap(), Dyadic::from_int(6));
        assert_eq!(b.div_floor(a).unwrap(), 6);
        assert!(a < b);
    }

    #[test]
    fn floor_ceil() {
        assert_eq!(Dyadic::floor_f64(0.3, -4).to_f64(), 0.25);
        assert_eq!(Dyadic::ceil_f64(0.3, -4).to_f64(), 0.3125);
        assert_eq!(Dyadic::from_f64(0.1).unwrap().to_f64(), 0.1);
    }
}
