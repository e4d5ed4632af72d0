//! Elementary functions on balls.
//!
//! Each function evaluates at the (exact) midpoint with a truncated series
//! whose tail is bounded explicitly, then widens by the input radius times a
//! bound on the derivative over the ball. Arguments are reduced against small
//! tables of values at multiples of 1/64 built when the context is created.

use alloc::sync::Arc;
use alloc::vec::Vec;

use super::ball::Ball;
use super::float::{Float, Prec};
use super::mag::Mag;
use crate::error::Error;

/// Extra bits carried by cached constants so argument reduction of large
/// inputs stays accurate.
const CONST_GUARD: Prec = 128;

/// Extra bits for table entries.
const TABLE_GUARD: Prec = 32;

const SC_ENTRIES: usize = 53; // j/64 up to just past π/4
const EXP_HALF: i64 = 23; // |j| <= 23 covers |r| <= ln2/2
const LOG_LO: i64 = -19; // 1 + j/64 spans [1/√2, √2]
const LOG_HI: i64 = 27;
const ATAN_ENTRIES: usize = 65;

/// The functions exposed through [`Context::elem`].
#[derive(Clone, Debug)]
pub enum ElemFn {
    Sqrt,
    Exp,
    Log,
    Sin,
    Cos,
    Atan,
    /// `x^y` for `x > 0`.
    PowReal(Ball),
}

#[derive(Debug)]
struct Tables {
    sin: Vec<Ball>,
    cos: Vec<Ball>,
    exp: Vec<Ball>,
    log: Vec<Ball>,
    atan: Vec<Ball>,
}

/// Working precision plus constants cached at that precision.
#[derive(Clone, Debug)]
pub struct Context {
    prec: Prec,
    pi: Ball,
    ln2: Ball,
    tab: Arc<Tables>,
}

impl Context {
    pub fn new(prec: Prec) -> Context {
        let prec = prec.max(16);
        let cp = prec + CONST_GUARD;
        let pi = compute_pi(cp);
        let ln2 = compute_ln2(cp);
        let tab = Arc::new(build_tables(prec + TABLE_GUARD, &pi, &ln2, prec));
        Context { prec, pi, ln2, tab }
    }

    #[inline]
    pub fn prec(&self) -> Prec {
        self.prec
    }

    /// π at working precision.
    pub fn pi(&self) -> Ball {
        self.pi.round(self.prec)
    }

    /// π with the extra guard bits.
    pub fn pi_wide(&self) -> &Ball {
        &self.pi
    }

    pub fn ln2(&self) -> Ball {
        self.ln2.round(self.prec)
    }

    // Arithmetic shorthands at the context precision.

    #[inline]
    pub fn add(&self, a: &Ball, b: &Ball) -> Ball {
        a.add(b, self.prec)
    }

    #[inline]
    pub fn sub(&self, a: &Ball, b: &Ball) -> Ball {
        a.sub(b, self.prec)
    }

    #[inline]
    pub fn mul(&self, a: &Ball, b: &Ball) -> Ball {
        a.mul(b, self.prec)
    }

    #[inline]
    pub fn div(&self, a: &Ball, b: &Ball) -> Result<Ball, Error> {
        a.div(b, self.prec)
    }

    #[inline]
    pub fn ratio(&self, p: i64, q: u64) -> Ball {
        Ball::from_ratio(p, q, self.prec)
    }

    pub fn elem(&self, f: &ElemFn, a: &Ball) -> Result<Ball, Error> {
        match f {
            ElemFn::Sqrt => self.sqrt(a),
            ElemFn::Exp => Ok(self.exp(a)),
            ElemFn::Log => self.log(a),
            ElemFn::Sin => Ok(self.sin_cos(a).0),
            ElemFn::Cos => Ok(self.sin_cos(a).1),
            ElemFn::Atan => Ok(self.atan(a)),
            ElemFn::PowReal(y) => self.pow(a, y),
        }
    }

    pub fn sqrt(&self, a: &Ball) -> Result<Ball, Error> {
        let p = self.prec;
        let m = a.mid();
        let r = a.rad();
        if m.is_negative() || m.is_zero() {
            // Only [-(r - |m|), ...] touching zero from the right is legal.
            let hi = a.upper_f64();
            if hi < 0.0 || m.mag_lower() > r.get() {
                return Err(Error::DomainViolation("sqrt"));
            }
            let top = Ball::from_f64(hi.max(0.0));
            let s = self.sqrt(&top)?;
            let half = s.mag_upper().scale2(-1);
            let (mid, e) = Float::from_f64(half.get()).round(p);
            return Ok(Ball::new(mid, half.add(e)));
        }
        let (s, e) = m.sqrt(p);
        let mut rad = e;
        if !r.is_zero() {
            let lower = s.mag_lower() - e.get();
            if lower <= 0.0 {
                // Midpoint too close to zero for the derivative bound: hull.
                let lo = a.lower_f64();
                let hi = a.upper_f64();
                let sh = self.sqrt(&Ball::from_f64(hi))?;
                let lo_f = Float::from_f64(lo.max(0.0));
                let sl = if lo > 0.0 { self.sqrt(&Ball::exact(lo_f))? } else { Ball::zero() };
                return Ok(sl.union(&sh, p));
            }
            // |sqrt(x) - sqrt(m)| <= |x - m| / sqrt(m)
            rad = rad.add(r.div_lower(lower.next_down()));
        }
        Ok(Ball::new(s, rad))
    }

    pub fn exp(&self, a: &Ball) -> Ball {
        let base = self.exp_float(a.mid());
        let r = a.rad();
        if r.is_zero() {
            return base;
        }
        let growth = if r.get() <= 1.0 {
            // e^r - 1 <= r + r^2 for r <= 1
            r.add(r.mul(r))
        } else {
            self.exp_float(&Float::from_f64(r.get())).mag_upper()
        };
        base.add_error(base.mag_upper().mul(growth))
    }

    fn exp_float(&self, m: &Float) -> Ball {
        let p = self.prec;
        if m.is_zero() {
            return Ball::one();
        }
        let x = m.to_f64();
        if x > 4.0e9 {
            return Ball::whole();
        }
        if x < -4.0e9 {
            return Ball::new(Float::zero(), Mag::pow2(-(1 << 32)));
        }
        let k = libm::round(x / core::f64::consts::LN_2) as i64;
        let r = if k == 0 {
            Ball::exact(m.clone())
        } else {
            let wp = p + 8 + bit_width(k);
            Ball::exact(m.clone()).sub(&self.ln2.mul_i64(k, wp), wp).round(p)
        };
        let j = (libm::round(r.mid_f64() * 64.0) as i64).clamp(-EXP_HALF, EXP_HALF);
        let rr = r.sub(&Ball::from_dyadic(i128::from(j), -6), p);
        let e = exp_series(&rr, p);
        let t = &self.tab.exp[(j + EXP_HALF) as usize];
        t.mul(&e, p).mul_2exp(k)
    }

    pub fn log(&self, a: &Ball) -> Result<Ball, Error> {
        let m = a.mid();
        if m.is_negative() || m.is_zero() {
            return Err(Error::DomainViolation("log"));
        }
        let lower = a.mag_lower();
        if !(lower > 0.0) {
            return Err(Error::DomainViolation("log"));
        }
        let base = self.log_float(m);
        if a.rad().is_zero() {
            return Ok(base);
        }
        Ok(base.add_error(a.rad().div_lower(lower)))
    }

    fn log_float(&self, m: &Float) -> Ball {
        let p = self.prec;
        let (e, f) = split_log(m);
        if e == 0 && f.cmp_value(&Float::one()) == core::cmp::Ordering::Equal {
            return Ball::zero();
        }
        let j = (libm::round((f.to_f64() - 1.0) * 64.0) as i64).clamp(LOG_LO, LOG_HI);
        let c = Ball::from_dyadic(i128::from(64 + j), -6);
        let fb = Ball::exact(f);
        let u = fb.sub(&c, p).div(&fb.add(&c, p), p).expect("f + c > 1");
        let mut res = atanh_series(&u, p).mul_2exp(1);
        if j != 0 {
            res = res.add(&self.tab.log[(j - LOG_LO) as usize], p);
        }
        if e != 0 {
            res = self.ln2.mul_i64(e, p + 64).add(&res, p);
        }
        res
    }

    /// `(sin a, cos a)`.
    pub fn sin_cos(&self, a: &Ball) -> (Ball, Ball) {
        let (s, c) = self.sin_cos_float(a.mid());
        let r = a.rad();
        if r.is_zero() {
            return (s, c);
        }
        (clamp_unit(s.add_error(r)), clamp_unit(c.add_error(r)))
    }

    pub fn sin(&self, a: &Ball) -> Ball {
        self.sin_cos(a).0
    }

    pub fn cos(&self, a: &Ball) -> Ball {
        self.sin_cos(a).1
    }

    fn sin_cos_float(&self, m: &Float) -> (Ball, Ball) {
        let p = self.prec;
        if m.is_zero() {
            return (Ball::zero(), Ball::one());
        }
        let x = m.to_f64();
        if !(x.abs() < 1.0e15) {
            let unit = Ball::new(Float::zero(), Mag::from_f64_up(1.0));
            return (unit.clone(), unit);
        }
        let k = libm::round(x * core::f64::consts::FRAC_2_PI) as i64;
        let r = if k == 0 {
            Ball::exact(m.clone())
        } else {
            let wp = p + 8 + m.mag_exp().max(0) as Prec;
            let half_pi = self.pi.mul_2exp(-1);
            Ball::exact(m.clone()).sub(&half_pi.mul_i64(k, wp), wp).round(p)
        };
        let j = libm::round(r.mid_f64() * 64.0) as i64;
        let ja = (j.unsigned_abs() as usize).min(SC_ENTRIES - 1);
        let j = if j < 0 { -(ja as i64) } else { ja as i64 };
        let rr = r.sub(&Ball::from_dyadic(i128::from(j), -6), p);
        let (s1, c1) = sin_cos_series(&rr, p);
        let (sin_r, cos_r) = if ja == 0 {
            (s1, c1)
        } else {
            let mut sj = self.tab.sin[ja].clone();
            if j < 0 {
                sj = sj.neg();
            }
            let cj = &self.tab.cos[ja];
            (sj.mul(&c1, p).add(&cj.mul(&s1, p), p), cj.mul(&c1, p).sub(&sj.mul(&s1, p), p))
        };
        match k.rem_euclid(4) {
            0 => (sin_r, cos_r),
            1 => (cos_r, sin_r.neg()),
            2 => (sin_r.neg(), cos_r.neg()),
            _ => (cos_r.neg(), sin_r),
        }
    }

    pub fn atan(&self, a: &Ball) -> Ball {
        let base = self.atan_float(a.mid());
        base.add_error(a.rad())
    }

    fn atan_float(&self, m: &Float) -> Ball {
        let p = self.prec;
        if m.is_zero() {
            return Ball::zero();
        }
        let neg = m.is_negative();
        let x = Ball::exact(m.abs());
        let big = m.abs().cmp_value(&Float::one()) == core::cmp::Ordering::Greater;
        let y = if big { x.inv(p).expect("|x| > 1") } else { x };
        let j = (libm::round(y.mid_f64() * 64.0) as usize).min(ATAN_ENTRIES - 1);
        let mut res = if j == 0 {
            atan_series(&y, p)
        } else {
            let c = Ball::from_dyadic(j as i128, -6);
            let z = y.sub(&c, p).div(&Ball::one().add(&y.mul(&c, p), p), p).expect("1 + yc >= 1");
            self.tab.atan[j].add(&atan_series(&z, p), p)
        };
        if big {
            res = self.pi.mul_2exp(-1).sub(&res, p);
        }
        if neg {
            res = res.neg();
        }
        res
    }

    /// `log((n + 1)/n) = 2 atanh(1/(2n + 1))` for `n >= 1`.
    pub fn log_succ_ratio(&self, n: u64) -> Ball {
        assert!(n >= 1, "log_succ_ratio needs n >= 1");
        let u = Ball::from_ratio(1, 2 * n + 1, self.prec);
        atanh_series(&u, self.prec).mul_2exp(1)
    }

    pub fn pow(&self, x: &Ball, y: &Ball) -> Result<Ball, Error> {
        let l = self.log(x).map_err(|_| Error::DomainViolation("pow_real"))?;
        Ok(self.exp(&self.mul(&l, y)))
    }
}

// m = f * 2^e with f in [1/√2, √2).
fn split_log(m: &Float) -> (i64, Float) {
    let mut e = m.mag_exp();
    let mut f = m.mul_2exp(-e);
    if f.to_f64() < core::f64::consts::FRAC_1_SQRT_2 {
        f = f.mul_2exp(1);
        e -= 1;
    }
    (e, f)
}

fn target(wp: Prec) -> f64 {
    libm::ldexp(1.0, -(wp as i32) - 2)
}

// exp(r) by Taylor series; intended for small |r|.
fn exp_series(r: &Ball, wp: Prec) -> Ball {
    let rm = r.mag_upper().get();
    assert!(rm < 0.5, "exp_series argument too large");
    let mut n = 1u64;
    let mut term = rm;
    while term >= target(wp) {
        n += 1;
        term = term * rm / n as f64;
    }
    // Terms of degree >= n sum to at most 2 * term since rm < 1/2.
    let mut s = Ball::one();
    for i in (1..n).rev() {
        s = Ball::one().add(&r.mul(&s, wp).div_u64(i, wp), wp);
    }
    s.add_error(Mag::from_f64_up(term * 2.0))
}

// (sin r, cos r) by Taylor series.
fn sin_cos_series(r: &Ball, wp: Prec) -> (Ball, Ball) {
    let rm = r.mag_upper().get();
    let r2 = r.sqr(wp);
    let mut n = 1u64;
    let mut term = rm;
    while term >= target(wp) || (n as f64) < 2.0 * rm {
        n += 1;
        term = term * rm / n as f64;
    }
    // sin: odd terms up to degree n-1; cos: even terms up to degree n-1.
    let last_odd = if (n - 1) % 2 == 1 { n - 1 } else { n.saturating_sub(2) };
    let last_even = if (n - 1) % 2 == 0 { n - 1 } else { n.saturating_sub(2) };
    let mut s = Ball::one();
    let mut d = last_odd;
    while d >= 3 {
        s = Ball::one().sub(&r2.mul(&s, wp).div_u64(d * (d - 1), wp), wp);
        d -= 2;
    }
    let sin_r = r.mul(&s, wp).add_error(Mag::from_f64_up(term * 2.0));
    let mut c = Ball::one();
    let mut d = last_even;
    while d >= 2 {
        c = Ball::one().sub(&r2.mul(&c, wp).div_u64(d * (d - 1), wp), wp);
        d -= 2;
    }
    let cos_r = c.add_error(Mag::from_f64_up(term * 2.0));
    (sin_r, cos_r)
}

// Odd power series sum_{j} sign(j) u^(2j+1)/(2j+1); alternating signs give
// atan, constant signs atanh. Requires |u| <= 1/2.
fn odd_series(u: &Ball, wp: Prec, alternating: bool) -> Ball {
    let um = u.mag_upper().get();
    assert!(um <= 0.5, "odd_series argument too large");
    let u2 = u.sqr(wp);
    let u2m = um * um;
    let mut jn = 0u64;
    let mut pw = um * u2m;
    while pw / (2 * jn + 3) as f64 >= target(wp) {
        jn += 1;
        pw *= u2m;
    }
    let sign_of = |i: u64| if alternating && i % 2 == 1 { -1 } else { 1 };
    let mut s = Ball::from_ratio(sign_of(jn), 2 * jn + 1, wp);
    for i in (0..jn).rev() {
        s = Ball::from_ratio(sign_of(i), 2 * i + 1, wp).add(&u2.mul(&s, wp), wp);
    }
    // Remaining terms: geometric with ratio u^2 <= 1/4.
    let tail = Mag::from_f64_up(2.0 * pw / (2 * jn + 3) as f64);
    u.mul(&s, wp).add_error(tail)
}

fn atan_series(u: &Ball, wp: Prec) -> Ball {
    odd_series(u, wp, true)
}

fn atanh_series(u: &Ball, wp: Prec) -> Ball {
    odd_series(u, wp, false)
}

fn build_tables(tp: Prec, pi: &Ball, ln2: &Ball, prec: Prec) -> Tables {
    let mut sin = Vec::with_capacity(SC_ENTRIES);
    let mut cos = Vec::with_capacity(SC_ENTRIES);
    for j in 0..SC_ENTRIES {
        let (s, c) = sin_cos_series(&Ball::from_dyadic(j as i128, -6), tp);
        sin.push(s.round(prec));
        cos.push(c.round(prec));
    }
    let mut exp = Vec::new();
    let quarter = exp_series(&Ball::from_dyadic(1, -2), tp);
    for j in -EXP_HALF..=EXP_HALF {
        // exp(j/64) = exp(1/4)^q * exp(rem/64) with |rem| < 16.
        let q = j.div_euclid(16);
        let rem = j.rem_euclid(16);
        let mut v = exp_series(&Ball::from_dyadic(i128::from(rem), -6), tp);
        let base = if q < 0 { Ball::one().div(&quarter, tp).expect("exp > 0") } else { quarter.clone() };
        for _ in 0..q.unsigned_abs() {
            v = v.mul(&base, tp);
        }
        exp.push(v.round(prec));
    }
    let mut log = Vec::new();
    for j in LOG_LO..=LOG_HI {
        // log(1 + j/64) = 2 atanh(j / (128 + j))
        let u = Ball::from_ratio(j, (128 + j) as u64, tp);
        log.push(atanh_series(&u, tp).mul_2exp(1).round(prec));
    }
    let _ = ln2;
    let mut atan = Vec::with_capacity(ATAN_ENTRIES);
    for j in 0..ATAN_ENTRIES {
        // Two halvings: atan(y) = 2 atan(y / (1 + sqrt(1 + y^2))).
        let mut y = Ball::from_dyadic(j as i128, -6);
        for _ in 0..2 {
            let t = Ball::one().add(&y.sqr(tp), tp);
            let (s, e) = t.mid().sqrt(tp);
            // sqrt is 1/2-Lipschitz on [1, inf).
            let root = Ball::new(s, e.add(t.rad()));
            y = y.div(&Ball::one().add(&root, tp), tp).expect("denominator >= 1");
        }
        atan.push(atan_series(&y, tp).mul_2exp(2).round(prec));
    }
    let _ = pi;
    Tables { sin, cos, exp, log, atan }
}

fn bit_width(k: i64) -> Prec {
    64 - k.unsigned_abs().leading_zeros()
}

fn clamp_unit(b: Ball) -> Ball {
    if b.rad().get() > 1.0 && b.mag_upper().get() > 1.0 {
        Ball::new(Float::zero(), Mag::from_f64_up(1.0))
    } else {
        b
    }
}

fn compute_pi(prec: Prec) -> Ball {
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
    let wp = prec + 16;
    let a = atan_inv(5, wp).mul_2exp(4);
    let b = atan_inv(239, wp).mul_2exp(2);
    a.sub(&b, wp).round(prec)
}

fn compute_ln2(prec: Prec) -> Ball {
    // ln 2 = 2 atanh(1/3)
    let wp = prec + 16;
    atanh_series(&Ball::from_ratio(1, 3, wp), wp).mul_2exp(1).round(prec)
}

// atan(1/k) by its alternating series.
fn atan_inv(k: u64, wp: Prec) -> Ball {
    atan_series(&Ball::from_ratio(1, k, wp), wp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{E, LN_2, PI};

    fn ctx() -> Context {
        Context::new(64)
    }

    #[test]
    fn constants() {
        let c = ctx();
        assert!(c.pi().contains_f64(PI) || (c.pi().mid_f64() - PI).abs() < 1e-15);
        assert!((c.pi().mid_f64() - PI).abs() < 1e-15);
        assert!(c.pi().rad().get() < 1e-18);
        assert!((c.ln2().mid_f64() - LN_2).abs() < 1e-15);
    }

    #[test]
    fn exp_zero_is_one() {
        let r = ctx().exp(&Ball::zero());
        assert!(r.contains_f64(1.0));
    }

    #[test]
    fn exp_values() {
        let c = ctx();
        let r = c.exp(&Ball::one());
        assert!((r.mid_f64() - E).abs() < 1e-15);
        assert!(r.rad().get() < 1e-17);
        let r = c.exp(&Ball::from_f64(-30.5));
        assert!(((r.mid_f64() - (-30.5f64).exp()) / r.mid_f64()).abs() < 1e-14);
    }

    #[test]
    fn cos_pi_contains_minus_one() {
        let c = ctx();
        let r = c.cos(&c.pi());
        assert!(r.contains_f64(-1.0));
        assert!(r.rad().get() < 1e-15);
    }

    #[test]
    fn sin_cos_large_argument() {
        let c = ctx();
        let x = 123456.789;
        let (s, co) = c.sin_cos(&Ball::from_f64(x));
        assert!((s.mid_f64() - x.sin()).abs() < 1e-10);
        assert!((co.mid_f64() - x.cos()).abs() < 1e-10);
    }

    #[test]
    fn log_values_and_domain() {
        let c = ctx();
        let r = c.log(&Ball::from_f64(10.0)).unwrap();
        assert!((r.mid_f64() - 10f64.ln()).abs() < 1e-15);
        let r = c.log(&Ball::one()).unwrap();
        assert!(r.contains_f64(0.0));
        assert_eq!(c.log(&Ball::from_f64_rad(0.1, 0.2)), Err(Error::DomainViolation("log")));
        assert!(c.log(&Ball::from_f64(-3.0)).is_err());
    }

    #[test]
    fn atan_values() {
        let c = ctx();
        for x in [0.3, -0.9, 1.0, 7.5, -1234.0] {
            let r = c.atan(&Ball::from_f64(x));
            assert!((r.mid_f64() - x.atan()).abs() < 1e-15, "atan({x})");
        }
    }

    #[test]
    fn sqrt_values() {
        let c = ctx();
        let r = c.sqrt(&Ball::from_f64(2.0)).unwrap();
        assert!((r.mid_f64() - 2f64.sqrt()).abs() < 1e-15);
        let r = c.sqrt(&Ball::from_f64_rad(0.0, 1.0)).unwrap();
        assert!(r.contains_f64(0.0) && r.contains_f64(1.0));
        assert!(c.sqrt(&Ball::from_f64(-1.0)).is_err());
    }

    #[test]
    fn pow_real() {
        let c = ctx();
        let r = c.pow(&Ball::from_f64(2.0), &Ball::from_f64(0.5)).unwrap();
        assert!((r.mid_f64() - 2f64.sqrt()).abs() < 1e-15);
    }
}
