//! Asymptotic expansion of θ(t) for t > 2π.

use crate::error::Error;
use crate::rigor::{Ball, Context, Mag};

/// Default number of `1/t` correction terms.
pub const THETA_TERMS: usize = 3;

// Coefficients of t^{1-2k} in θ(t), k = 1..5.
const COEFFS: [(i64, u64); 5] = [(1, 48), (7, 5760), (31, 80640), (127, 430080), (511, 1216512)];

// Coefficients of t^{-2k} in θ'(t) (up to sign), k = 1..5.
const DERIV_COEFFS: [(i64, u64); 5] = [(1, 48), (7, 1920), (31, 16128), (127, 61440), (511, 135168)];

/// θ(t) from `terms` asymptotic corrections with the tail in the radius.
#[derive(Clone, Debug)]
pub struct ThetaExpansion {
    pub t: Ball,
    pub terms: usize,
    pub value: Ball,
}

// The tail is bounded by this multiple of the first omitted term. Close to
// 2π the series is not yet in its alternating regime, so be generous there.
fn tail_factor(t_lo: f64) -> f64 {
    if t_lo < 8.0 {
        4.0
    } else {
        2.0
    }
}

// factor * num/den * t_lo^(-power), rounded up.
fn tail_bound(t_lo: f64, power: i32, num: i64, den: u64, cx: &Context) -> Mag {
    let p = cx.prec().min(64);
    let tl = Ball::from_f64(t_lo);
    let mut pw = Ball::one();
    for _ in 0..power {
        pw = pw.mul(&tl, p);
    }
    let c = Ball::from_ratio(num, den, p);
    let v = c.div(&pw, p).expect("t_lo > 0");
    Mag::from_f64_up(v.upper_f64().next_up()).mul_f64(tail_factor(t_lo))
}

fn check_height(t: &Ball, cx: &Context) -> Result<f64, Error> {
    let two_pi = cx.pi().mul_2exp(1);
    if !t.is_finite() || !two_pi.lt(t) {
        return Err(Error::HeightTooLow);
    }
    Ok(t.lower_f64())
}

impl ThetaExpansion {
    pub fn new(t: &Ball, terms: usize, cx: &Context) -> Result<ThetaExpansion, Error> {
        if terms >= COEFFS.len() {
            return Err(Error::InvalidParameters("theta expansion supports at most 4 terms"));
        }
        let t_lo = check_height(t, cx)?;
        let p = cx.prec();
        let two_pi = cx.pi().mul_2exp(1);
        let l = cx.log(&cx.div(t, &two_pi)?)?;
        let half_t = t.mul_2exp(-1);
        let mut v = half_t.mul(&l, p).sub(&half_t, p).sub(&cx.pi().mul_2exp(-3), p);
        if terms > 0 {
            let inv = t.inv(p)?;
            let inv2 = inv.sqr(p);
            // Horner in 1/t^2.
            let mut s = Ball::zero();
            for k in (0..terms).rev() {
                let (a, b) = COEFFS[k];
                s = Ball::from_ratio(a, b, p).add(&inv2.mul(&s, p), p);
            }
            v = v.add(&s.mul(&inv, p), p);
        }
        let (a, b) = COEFFS[terms];
        let tail = tail_bound(t_lo, 2 * terms as i32 + 1, a, b, cx);
        Ok(ThetaExpansion { t: t.clone(), terms, value: v.add_error(tail) })
    }
}

/// Enclosure of θ(t) for `t > 2π`.
pub fn rs_theta(t: &Ball, cx: &Context) -> Result<Ball, Error> {
    Ok(ThetaExpansion::new(t, THETA_TERMS, cx)?.value)
}

/// Enclosure of θ'(t) for `t > 2π`.
pub fn rs_theta_deriv(t: &Ball, cx: &Context) -> Result<Ball, Error> {
    let t_lo = check_height(t, cx)?;
    let p = cx.prec();
    let two_pi = cx.pi().mul_2exp(1);
    let l = cx.log(&cx.div(t, &two_pi)?)?;
    let inv2 = t.inv(p)?.sqr(p);
    let mut s = Ball::zero();
    for k in (0..THETA_TERMS).rev() {
        let (a, b) = DERIV_COEFFS[k];
        s = Ball::from_ratio(a, b, p).add(&inv2.mul(&s, p), p);
    }
    let v = l.mul_2exp(-1).sub(&s.mul(&inv2, p), p);
    let (a, b) = DERIV_COEFFS[THETA_TERMS];
    Ok(v.add_error(tail_bound(t_lo, 2 * THETA_TERMS as i32 + 2, a, b, cx)))
}

/// Enclosure of `∫_{t1}^{t2} θ(t) dt` for `2π < t1 <= t2`.
pub fn rs_theta_integral(t1: &Ball, t2: &Ball, cx: &Context) -> Result<Ball, Error> {
    let t_lo = check_height(t1, cx)?;
    check_height(t2, cx)?;
    let p = cx.prec();
    let two_pi = cx.pi().mul_2exp(1);
    // F(t) = (t²/4) log(t/2π) - 3t²/8 - πt/8 + c_1 log t + Σ_{k≥2} c_k t^{2-2k}/(2-2k)
    let anti = |t: &Ball| -> Result<Ball, Error> {
        let l = cx.log(&cx.div(t, &two_pi)?)?;
        let t2 = t.sqr(p);
        let mut v = t2.mul_2exp(-2).mul(&l, p);
        v = v.sub(&t2.mul_i64(3, p).mul_2exp(-3), p);
        v = v.sub(&cx.pi().mul(t, p).mul_2exp(-3), p);
        let (a, b) = COEFFS[0];
        v = v.add(&Ball::from_ratio(a, b, p).mul(&cx.log(t)?, p), p);
        let inv2 = t.inv(p)?.sqr(p);
        let mut pw = Ball::one();
        for (k, &(a, b)) in COEFFS.iter().enumerate().take(THETA_TERMS).skip(1) {
            pw = pw.mul(&inv2, p);
            let e = 2 * k as u64; // 2k - 2 for the 1-based k
            v = v.sub(&Ball::from_ratio(a, b * e, p).mul(&pw, p), p);
        }
        Ok(v)
    };
    let len = t2.sub(t1, p);
    if len.upper_f64() < 0.0 {
        return Err(Error::InvalidParameters("integral bounds out of order"));
    }
    let (a, b) = COEFFS[THETA_TERMS];
    let tail = tail_bound(t_lo, 2 * THETA_TERMS as i32 + 1, a, b, cx);
    let v = anti(t2)?.sub(&anti(t1)?, p);
    Ok(v.add_error(tail.mul(len.mag_upper())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_low_heights() {
        let cx = Context::new(64);
        assert_eq!(rs_theta(&Ball::from_f64(6.28), &cx).unwrap_err(), Error::HeightTooLow);
        assert_eq!(rs_theta_deriv(&Ball::from_i64(1), &cx).unwrap_err(), Error::HeightTooLow);
        assert!(rs_theta(&Ball::from_f64(6.3), &cx).is_ok());
    }

    #[test]
    fn derivative_at_two_pi_e() {
        let cx = Context::new(64);
        let t = cx.pi().mul_2exp(1).mul(&cx.exp(&Ball::one()), 64);
        let d = rs_theta_deriv(&t, &cx).unwrap();
        assert!((d.mid_f64() - 0.5).abs() < 1e-3);
        assert!(d.rad().get() < 1e-3);
    }

    #[test]
    fn term_counts() {
        let cx = Context::new(64);
        let t = Ball::from_i64(50);
        for k in 0..=4 {
            assert!(ThetaExpansion::new(&t, k, &cx).is_ok());
        }
        assert!(ThetaExpansion::new(&t, 5, &cx).is_err());
    }

    #[test]
    fn integral_matches_quadrature() {
        let cx = Context::new(64);
        let v = rs_theta_integral(&Ball::from_i64(100), &Ball::from_i64(110), &cx).unwrap();
        // The oracle value is not an f64; compare within half an ulp.
        assert!((v.mid_f64() - 949.717176509229076).abs() < 1e-13 + v.rad().get(), "{v:?}");
        assert!(v.rad().get() < 1e-6);
        let w = rs_theta_integral(&Ball::from_i64(7), &Ball::from_i64(9), &cx).unwrap();
        assert!(w.contains_f64(-6.826775687448431), "{w:?}");
    }
}
