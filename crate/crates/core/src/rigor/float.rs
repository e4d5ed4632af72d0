//! Arbitrary-precision binary floating point with explicit rounding error.
//!
//! A [`Float`] is `(-1)^neg * mant * 2^exp` with an integer mantissa. Rounded
//! operations truncate toward zero to at most `prec` significant bits and
//! return a [`Mag`] bounding the absolute rounding error, which the ball layer
//! folds into the radius.

use core::cmp::Ordering;
use core::fmt;

use super::limbs::{self, Limbs};
use super::mag::{ldexp_down, ldexp_up, Mag};

/// Precision in bits.
pub type Prec = u32;

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Float {
    neg: bool,
    exp: i64,
    mant: Limbs,
}

impl Float {
    pub fn zero() -> Float {
        Float::default()
    }

    pub fn one() -> Float {
        Float::from_i64(1)
    }

    pub fn from_i64(x: i64) -> Float {
        Float::from_parts(x < 0, 0, limbs::from_u128(u128::from(x.unsigned_abs())))
    }

    pub fn from_u64(x: u64) -> Float {
        Float::from_parts(false, 0, limbs::from_u128(u128::from(x)))
    }

    pub fn from_i128(x: i128) -> Float {
        Float::from_parts(x < 0, 0, limbs::from_u128(x.unsigned_abs()))
    }

    /// `m * 2^e`, exact.
    pub fn from_i128_exp(m: i128, e: i64) -> Float {
        let mut f = Float::from_i128(m);
        if !f.is_zero() {
            f.exp = e;
        }
        f
    }

    /// Exact conversion; every finite `f64` is a dyadic rational.
    pub fn from_f64(x: f64) -> Float {
        assert!(x.is_finite(), "non-finite f64 has no Float value");
        if x == 0.0 {
            return Float::zero();
        }
        let bits = x.to_bits();
        let neg = (bits >> 63) != 0;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        Float::from_parts(neg, e, limbs::from_u128(u128::from(m)))
    }

    fn from_parts(neg: bool, exp: i64, mut mant: Limbs) -> Float {
        limbs::normalize(&mut mant);
        if mant.is_empty() {
            return Float::zero();
        }
        Float { neg, exp, mant }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.mant.is_empty()
    }

    #[inline]
    pub fn is_negative(&self) -> bool {
        self.neg
    }

    /// Exponent of the least significant mantissa bit.
    #[inline]
    pub fn lsb_exp(&self) -> i64 {
        self.exp
    }

    /// Number of significant mantissa bits.
    #[inline]
    pub fn bits(&self) -> u64 {
        limbs::bit_len(&self.mant)
    }

    /// `e` such that `2^(e-1) <= |x| < 2^e`; `i64::MIN` for zero.
    #[inline]
    pub fn mag_exp(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.bits() as i64
        }
    }

    pub fn neg(&self) -> Float {
        let mut r = self.clone();
        if !r.is_zero() {
            r.neg = !r.neg;
        }
        r
    }

    pub fn abs(&self) -> Float {
        let mut r = self.clone();
        r.neg = false;
        r
    }

    /// Exact multiplication by `2^k`.
    pub fn mul_2exp(&self, k: i64) -> Float {
        let mut r = self.clone();
        if !r.is_zero() {
            r.exp += k;
        }
        r
    }

    /// Round to at most `prec` bits (toward zero), with the error bound.
    pub fn round(&self, prec: Prec) -> (Float, Mag) {
        if self.mant.len() <= 2 {
            return Float::round_u128(self.neg, self.exp, limbs::to_u128(&self.mant), prec);
        }
        let bl = self.bits();
        if bl <= u64::from(prec) {
            return (self.clone(), Mag::ZERO);
        }
        let shift = bl - u64::from(prec);
        let (m, sticky) = limbs::shr_sticky(&self.mant, shift);
        let exp = self.exp + shift as i64;
        let err = if sticky { Mag::pow2(exp) } else { Mag::ZERO };
        (Float::from_parts(self.neg, exp, m), err)
    }

    #[inline]
    fn round_u128(neg: bool, exp: i64, v: u128, prec: Prec) -> (Float, Mag) {
        if v == 0 {
            return (Float::zero(), Mag::ZERO);
        }
        let bl = 128 - u64::from(v.leading_zeros());
        if bl <= u64::from(prec) {
            return (Float { neg, exp, mant: limbs::from_u128(v) }, Mag::ZERO);
        }
        let shift = (bl - u64::from(prec)) as u32;
        let q = v >> shift;
        let sticky = v & ((1u128 << shift) - 1) != 0;
        let exp = exp + i64::from(shift);
        let err = if sticky { Mag::pow2(exp) } else { Mag::ZERO };
        // q is nonzero because prec >= 1 bits survive.
        (Float { neg, exp, mant: limbs::from_u128(q) }, err)
    }

    /// Upper bound for `|self|`.
    pub fn mag_upper(&self) -> Mag {
        if self.is_zero() {
            return Mag::ZERO;
        }
        let bl = self.bits();
        let (top, sticky) = limbs::top64(&self.mant);
        let shift = if bl > 64 { bl as i64 - 64 } else { 0 };
        let mut f = top as f64;
        if sticky || (f as u128) < u128::from(top) || top >= (1u64 << 53) {
            f = f.next_up();
        }
        Mag::from_f64_up(ldexp_up(f, self.exp + shift))
    }

    /// Lower bound for `|self|` (possibly zero).
    pub fn mag_lower(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bl = self.bits();
        let (top, _) = limbs::top64(&self.mant);
        let shift = if bl > 64 { bl as i64 - 64 } else { 0 };
        let mut f = top as f64;
        if f >= 18446744073709551615.0 || (f as u128) > u128::from(top) {
            f = f.next_down();
        }
        ldexp_down(f, self.exp + shift)
    }

    /// Nearest-ish `f64`, for heuristics only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bl = self.bits();
        let (top, _) = limbs::top64(&self.mant);
        let shift = if bl > 64 { bl as i64 - 64 } else { 0 };
        let v = ldexp_down(top as f64, self.exp + shift);
        if self.neg {
            -v
        } else {
            v
        }
    }

    /// Exact sum when `prec` is `None`, otherwise rounded to `prec` bits.
    pub fn add(&self, other: &Float, prec: Prec) -> (Float, Mag) {
        self.add_impl(other, false, Some(prec))
    }

    pub fn sub(&self, other: &Float, prec: Prec) -> (Float, Mag) {
        self.add_impl(other, true, Some(prec))
    }

    pub fn add_exact(&self, other: &Float) -> Float {
        self.add_impl(other, false, None).0
    }

    pub fn sub_exact(&self, other: &Float) -> Float {
        self.add_impl(other, true, None).0
    }

    fn add_impl(&self, other: &Float, negate_other: bool, prec: Option<Prec>) -> (Float, Mag) {
        let other_neg = other.neg ^ negate_other;
        if other.is_zero() {
            return self.maybe_round(prec);
        }
        if self.is_zero() {
            let mut o = other.clone();
            o.neg = other_neg;
            return o.maybe_round(prec);
        }
        if let Some(p) = prec {
            if self.mant.len() == 1 && other.mant.len() == 1 {
                if let Some(r) = Float::add_small(self, other, other_neg, p) {
                    return r;
                }
            }
        }
        let mut err = Mag::ZERO;
        let (mut a_m, mut a_e) = (self.mant.clone(), self.exp);
        let (mut b_m, mut b_e) = (other.mant.clone(), other.exp);
        if let Some(p) = prec {
            // Bits far below the rounding window only matter through an
            // error term; truncate them before aligning.
            let top = self.mag_exp().max(other.mag_exp());
            let floor = top - i64::from(p) - 64;
            if a_e < floor {
                let (m, s) = limbs::shr_sticky(&a_m, (floor - a_e) as u64);
                if s {
                    err = err.add(Mag::pow2(floor));
                }
                a_m = m;
                a_e = floor;
            }
            if b_e < floor {
                let (m, s) = limbs::shr_sticky(&b_m, (floor - b_e) as u64);
                if s {
                    err = err.add(Mag::pow2(floor));
                }
                b_m = m;
                b_e = floor;
            }
        }
        let e = a_e.min(b_e);
        if a_e > e {
            a_m = limbs::shl(&a_m, (a_e - e) as u64);
        }
        if b_e > e {
            b_m = limbs::shl(&b_m, (b_e - e) as u64);
        }
        let (neg, m) = if self.neg == other_neg {
            (self.neg, limbs::add(&a_m, &b_m))
        } else {
            match limbs::cmp(&a_m, &b_m) {
                Ordering::Less => (other_neg, limbs::sub(&b_m, &a_m)),
                _ => (self.neg, limbs::sub(&a_m, &b_m)),
            }
        };
        let exact = Float::from_parts(neg, e, m);
        let (r, e2) = exact.maybe_round(prec);
        (r, err.add(e2))
    }

    // Single-limb operands whose aligned sum fits in a u128, or whose smaller
    // operand lies entirely below the rounding window.
    #[inline]
    fn add_small(a: &Float, b: &Float, b_neg: bool, prec: Prec) -> Option<(Float, Mag)> {
        let (hi, hi_neg, lo, lo_neg) = if a.exp >= b.exp { (a, a.neg, b, b_neg) } else { (b, b_neg, a, a.neg) };
        let d = (hi.exp - lo.exp) as u64;
        let hb = 64 - u64::from(hi.mant[0].leading_zeros());
        if hb + d <= 126 {
            let x = u128::from(hi.mant[0]) << d;
            let y = u128::from(lo.mant[0]);
            let (neg, v) = if hi_neg == lo_neg {
                (hi_neg, x + y)
            } else if x >= y {
                (hi_neg, x - y)
            } else {
                (lo_neg, y - x)
            };
            return Some(Float::round_u128(neg, lo.exp, v, prec));
        }
        // |lo| < 2^(lo.mag_exp) <= 2^(hi.mag_exp - prec - 2): fold it into
        // the error of rounding hi.
        if lo.mag_exp() + i64::from(prec) + 2 <= hi.mag_exp() {
            let mut h = hi.clone();
            h.neg = hi_neg;
            let (r, e) = h.round(prec);
            return Some((r, e.add(Mag::pow2(lo.mag_exp()))));
        }
        None
    }

    fn maybe_round(&self, prec: Option<Prec>) -> (Float, Mag) {
        match prec {
            Some(p) => self.round(p),
            None => (self.clone(), Mag::ZERO),
        }
    }

    pub fn mul_exact(&self, other: &Float) -> Float {
        if self.is_zero() || other.is_zero() {
            return Float::zero();
        }
        Float::from_parts(self.neg ^ other.neg, self.exp + other.exp, limbs::mul(&self.mant, &other.mant))
    }

    pub fn mul(&self, other: &Float, prec: Prec) -> (Float, Mag) {
        self.mul_exact(other).round(prec)
    }

    pub fn mul_i64(&self, k: i64, prec: Prec) -> (Float, Mag) {
        if k == 0 || self.is_zero() {
            return (Float::zero(), Mag::ZERO);
        }
        let m = limbs::mul_small(&self.mant, k.unsigned_abs());
        Float::from_parts(self.neg ^ (k < 0), self.exp, m).round(prec)
    }

    /// Division by a nonzero machine integer.
    pub fn div_u64(&self, d: u64, prec: Prec) -> (Float, Mag) {
        assert!(d != 0, "division by zero");
        if self.is_zero() {
            return (Float::zero(), Mag::ZERO);
        }
        if self.mant.len() == 1 && d < (1 << 32) && prec <= 94 {
            let pad = u64::from(self.mant[0].leading_zeros()) + 63;
            let num = u128::from(self.mant[0]) << pad;
            let q = num / u128::from(d);
            let rem = num % u128::from(d);
            let e = self.exp - pad as i64;
            let (res, err) = Float::round_u128(self.neg, e, q, prec);
            let frac_err = if rem != 0 { Mag::pow2(e) } else { Mag::ZERO };
            return (res, err.add(frac_err));
        }
        // Pad the dividend so the quotient carries prec + 1 bits.
        let want = u64::from(prec) + 65;
        let pad = want.saturating_sub(self.bits());
        let num = limbs::shl(&self.mant, pad);
        let (q, r) = limbs::divrem_small(&num, d);
        let e = self.exp - pad as i64;
        let (res, err) = Float::from_parts(self.neg, e, q).round(prec);
        let frac_err = if r != 0 { Mag::pow2(e) } else { Mag::ZERO };
        (res, err.add(frac_err))
    }

    /// `self / other`; panics on a zero divisor.
    pub fn div(&self, other: &Float, prec: Prec) -> (Float, Mag) {
        assert!(!other.is_zero(), "division by zero");
        if self.is_zero() {
            return (Float::zero(), Mag::ZERO);
        }
        let want = u64::from(prec) + 2 + other.bits();
        let pad = want.saturating_sub(self.bits());
        let num = limbs::shl(&self.mant, pad);
        let (q, inexact) = limbs::div_floor(&num, &other.mant);
        let e = self.exp - pad as i64 - other.exp;
        let (res, err) = Float::from_parts(self.neg ^ other.neg, e, q).round(prec);
        let frac_err = if inexact { Mag::pow2(e) } else { Mag::ZERO };
        (res, err.add(frac_err))
    }

    /// Square root of a non-negative value.
    pub fn sqrt(&self, prec: Prec) -> (Float, Mag) {
        assert!(!self.neg, "sqrt of negative Float");
        if self.is_zero() {
            return (Float::zero(), Mag::ZERO);
        }
        let want = 2 * u64::from(prec);
        let mut pad = want.saturating_sub(self.bits());
        if (self.exp - pad as i64) % 2 != 0 {
            if pad > 0 {
                pad -= 1;
            } else {
                pad += 1;
            }
        }
        let m = limbs::shl(&self.mant, pad);
        let (s, inexact) = limbs::isqrt(&m);
        let e = (self.exp - pad as i64) / 2;
        let (res, err) = Float::from_parts(false, e, s).round(prec);
        let frac_err = if inexact { Mag::pow2(e) } else { Mag::ZERO };
        (res, err.add(frac_err))
    }

    /// Exact comparison.
    pub fn cmp_value(&self, other: &Float) -> Ordering {
        let d = self.sub_exact(other);
        if d.is_zero() {
            Ordering::Equal
        } else if d.neg {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    /// Exact comparison of absolute values.
    pub fn cmp_abs(&self, other: &Float) -> Ordering {
        self.abs().cmp_value(&other.abs())
    }

    /// Nearest integer as `i64` (ties away from zero), or `None` when out of
    /// range.
    pub fn round_to_i64(&self) -> Option<i64> {
        if self.is_zero() {
            return Some(0);
        }
        if self.mag_exp() > 62 {
            return None;
        }
        let half = Float::from_i128_exp(1, -1);
        let shifted = self.abs().add_exact(&half);
        let v = shifted.floor_abs_u64()?;
        let v = i64::try_from(v).ok()?;
        Some(if self.neg { -v } else { v })
    }

    /// `floor(|self|)` as `u64`.
    pub fn floor_abs_u64(&self) -> Option<u64> {
        if self.is_zero() {
            return Some(0);
        }
        if self.mag_exp() > 64 {
            return None;
        }
        if self.exp >= 0 {
            let m = limbs::shl(&self.mant, self.exp as u64);
            return Some(limbs::to_u128(&m) as u64);
        }
        let (m, _) = limbs::shr_sticky(&self.mant, (-self.exp) as u64);
        Some(limbs::to_u128(&m) as u64)
    }

    /// Mantissa as `i128` and exponent, if the mantissa fits.
    pub fn to_i128_exp(&self) -> Option<(i128, i64)> {
        if self.bits() > 126 {
            return None;
        }
        let m = limbs::to_u128(&self.mant) as i128;
        Some((if self.neg { -m } else { m }, self.exp))
    }
}

impl fmt::Debug for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(x: f64) -> Float {
        Float::from_f64(x)
    }

    #[test]
    fn f64_roundtrip() {
        for x in [1.0, -2.5, 0.1, 1e-300, 5e-324, 1.7976931348623157e308, 3.0e12] {
            assert_eq!(f(x).to_f64(), x);
        }
    }

    #[test]
    fn add_cancellation_exact() {
        let (r, e) = f(1.0).add(&f(-1.0), 64);
        assert!(r.is_zero());
        assert!(e.is_zero());
        let (r, e) = f(1e30).add(&f(1e-30), 64);
        assert_eq!(r.to_f64(), 1e30);
        assert!(e.get() > 0.0 && e.get() < 1e12);
    }

    #[test]
    fn div_third() {
        let (q, e) = Float::one().div(&Float::from_i64(3), 53);
        assert!(e.get() > 0.0);
        assert!((q.to_f64() - 1.0 / 3.0).abs() <= e.get() + 1e-16);
        let (q, e) = Float::from_i64(12).div(&Float::from_i64(4), 53);
        assert_eq!(q.to_f64(), 3.0);
        assert!(e.is_zero());
    }

    #[test]
    fn sqrt_exact_and_inexact() {
        let (s, e) = f(16.0).sqrt(64);
        assert_eq!(s.to_f64(), 4.0);
        assert!(e.is_zero());
        let (s, e) = f(2.0).sqrt(64);
        assert!(e.get() > 0.0);
        assert!((s.to_f64() - core::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn magnitude_bounds_bracket() {
        for x in [0.1, 3.0, 1e-310, 123456789.123, (1u64 << 60) as f64 + 4096.0] {
            let v = f(x);
            assert!(v.mag_upper().get() >= x);
            assert!(v.mag_lower() <= x);
        }
        let big = Float::from_i128((1i128 << 100) + 1);
        assert!(big.mag_upper().get() >= 2f64.powi(100));
        assert!(big.mag_lower() <= 2f64.powi(100));
    }

    #[test]
    fn rounding_to_integer() {
        assert_eq!(f(2.5).round_to_i64(), Some(3));
        assert_eq!(f(-2.4).round_to_i64(), Some(-2));
        assert_eq!(f(7.0).floor_abs_u64(), Some(7));
        assert_eq!(f(1e30).round_to_i64(), None);
    }
}
