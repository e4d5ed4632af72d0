//! Non-negative upper bounds stored as `f64` with outward rounding.

use core::cmp::Ordering;
use core::fmt;

/// A non-negative real used as a ball radius or error bound.
///
/// Every arithmetic operation rounds upward (result is `next_up` of the
/// round-to-nearest value), so a `Mag` produced from upper bounds is again an
/// upper bound. `+inf` is a legal (useless) bound.
#[derive(Clone, Copy, Default, PartialEq, PartialOrd)]
pub struct Mag(f64);

impl Mag {
    pub const ZERO: Mag = Mag(0.0);
    pub const INFINITY: Mag = Mag(f64::INFINITY);

    /// Upper bound from an `f64`; negative inputs and NaN are rejected by
    /// saturating to zero and infinity respectively.
    #[inline]
    pub fn from_f64_up(x: f64) -> Mag {
        if x.is_nan() {
            Mag::INFINITY
        } else if x <= 0.0 {
            Mag::ZERO
        } else {
            Mag(x)
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// `2^e`, rounded up when not representable.
    #[inline]
    pub fn pow2(e: i64) -> Mag {
        if (-1022..=1023).contains(&e) {
            return Mag(f64::from_bits(((e + 1023) as u64) << 52));
        }
        Mag(ldexp_up(1.0, e))
    }

    #[inline]
    pub fn add(self, other: Mag) -> Mag {
        if other.0 == 0.0 {
            return self;
        }
        if self.0 == 0.0 {
            return other;
        }
        Mag((self.0 + other.0).next_up())
    }

    #[inline]
    pub fn mul(self, other: Mag) -> Mag {
        if self.0 == 0.0 || other.0 == 0.0 {
            return Mag::ZERO;
        }
        Mag((self.0 * other.0).next_up())
    }

    /// Upper bound on `self / other`; `other` must be a *lower* bound of the
    /// true divisor for the result to be meaningful.
    #[inline]
    pub fn div_lower(self, lower: f64) -> Mag {
        if self.0 == 0.0 {
            return Mag::ZERO;
        }
        if lower <= 0.0 {
            return Mag::INFINITY;
        }
        Mag((self.0 / lower).next_up())
    }

    #[inline]
    pub fn mul_f64(self, x: f64) -> Mag {
        self.mul(Mag::from_f64_up(x))
    }

    #[inline]
    pub fn scale2(self, e: i64) -> Mag {
        Mag(ldexp_up(self.0, e))
    }

    #[inline]
    pub fn max(self, other: Mag) -> Mag {
        if self.0 >= other.0 {
            self
        } else {
            other
        }
    }
}

impl fmt::Debug for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.0)
    }
}

impl PartialEq<f64> for Mag {
    fn eq(&self, other: &f64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<f64> for Mag {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

/// `x * 2^e` for finite `x >= 0`, rounded up.
pub(crate) fn ldexp_up(x: f64, e: i64) -> f64 {
    ldexp_directed(x, e, true)
}

/// `x * 2^e` for finite `x >= 0`, rounded down.
pub(crate) fn ldexp_down(x: f64, e: i64) -> f64 {
    ldexp_directed(x, e, false)
}

fn ldexp_directed(x: f64, e: i64, up: bool) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let bits = x.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mut m, mut k) = if biased == 0 { (frac, -1074) } else { (frac | (1 << 52), biased - 1075) };
    let lz = m.leading_zeros() as i64 - 11;
    m <<= lz;
    k -= lz;
    let k = k.saturating_add(e);
    if k > 1023 - 52 {
        return if up { f64::INFINITY } else { f64::MAX };
    }
    if k >= -1074 {
        let b = (k + 1075) as u64;
        return f64::from_bits((b << 52) | (m & ((1u64 << 52) - 1)));
    }
    let s = -1074 - k;
    let (q, inexact) = if s >= 64 { (0, true) } else { (m >> s, m & ((1u64 << s) - 1) != 0) };
    let q = if inexact && up { q + 1 } else { q };
    f64::from_bits(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow2_roundtrip_and_extremes() {
        assert_eq!(Mag::pow2(0).get(), 1.0);
        assert_eq!(Mag::pow2(-3).get(), 0.125);
        assert_eq!(Mag::pow2(100).get(), 1.2676506002282294e30);
        assert!(Mag::pow2(-5000).get() > 0.0);
        assert!(Mag::pow2(5000).get().is_infinite());
    }

    #[test]
    fn ops_round_up() {
        let a = Mag::from_f64_up(0.1);
        let b = Mag::from_f64_up(0.2);
        assert!(a.add(b).get() > 0.1 + 0.2 - 1e-17);
        assert!(a.add(b).get() >= 0.30000000000000004);
        assert!(Mag::ZERO.mul(Mag::INFINITY).is_zero());
        assert_eq!(Mag::from_f64_up(-1.0), Mag::ZERO);
    }

    #[test]
    fn ldexp_down_never_exceeds() {
        let x = 1.5;
        assert_eq!(ldexp_down(x, -1), 0.75);
        assert!(ldexp_down(x, -1074) <= 1.5 * 2f64.powi(-1074));
        assert_eq!(ldexp_down(x, -2000), 0.0);
    }
}
