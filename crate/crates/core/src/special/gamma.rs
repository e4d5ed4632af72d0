//! `log Γ` on the right half plane by shifted Stirling series.

use crate::error::Error;
use crate::rigor::{Ball, CBall, Context, Mag};

/// `B_2, B_4, ..., B_32` as `(numerator, denominator)`.
pub const BERNOULLI: [(i64, u64); 16] = [
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
    (43867, 798),
    (-174611, 330),
    (854513, 138),
    (-236364091, 2730),
    (8553103, 6),
    (-23749461029, 870),
    (8615841276005, 14322),
    (-7709321041217, 510),
];

const MAX_TERMS: usize = 15;

// |B_{2n+2}| 2^{n+1} / ((2n+2)(2n+1)); the remainder after n Stirling terms
// is at most this over |w|^{2n+1} when |arg w| <= pi/2.
fn remainder_numer(n: usize) -> f64 {
    let (p, q) = BERNOULLI[n];
    let b = (p.unsigned_abs() as f64 / q as f64).next_up();
    let k = (2 * n + 2) as f64 * (2 * n + 1) as f64;
    (b * libm::ldexp(1.0, n as i32 + 1) / k).next_up()
}

// Pick (shift, terms) so the Stirling remainder at z + shift is below target.
fn plan(x_lo: f64, y_lo: f64, target: f64) -> (u64, usize) {
    let mut m = 0u64;
    loop {
        let xr = x_lo + m as f64;
        let r = libm::sqrt(xr * xr + y_lo * y_lo);
        if r > 1.0 {
            for n in 1..=MAX_TERMS {
                let b = remainder_numer(n) / libm::pow(r, (2 * n + 1) as f64);
                if b <= target {
                    return (m, n);
                }
            }
        }
        m += 1;
    }
}

// Principal argument for Re w >= 0, w away from 0.
fn arg(w: &CBall, cx: &Context) -> Result<Ball, Error> {
    let x = &w.re;
    let y = &w.im;
    if x.lower_f64() < 0.0 {
        return Err(Error::DomainViolation("log_gamma"));
    }
    if x.mag_lower() >= y.mag_upper().get() && x.excludes_zero() {
        Ok(cx.atan(&cx.div(y, x)?))
    } else {
        if !y.excludes_zero() {
            return Err(Error::DomainViolation("log_gamma"));
        }
        let half_pi = cx.pi().mul_2exp(-1);
        let base = if y.mid().is_negative() { half_pi.neg() } else { half_pi };
        Ok(cx.sub(&base, &cx.atan(&cx.div(x, y)?)))
    }
}

fn log_complex(w: &CBall, cx: &Context) -> Result<CBall, Error> {
    let re = cx.log(&w.norm_sqr(cx.prec()))?.mul_2exp(-1);
    Ok(CBall::new(re, arg(w, cx)?))
}

/// Enclosure of `log Γ(z)` (principal branch) for `Re z >= 0`, `z` not near 0.
pub fn log_gamma(z: &CBall, cx: &Context) -> Result<CBall, Error> {
    let p = cx.prec();
    let x_lo = z.re.lower_f64();
    if !(x_lo >= 0.0) || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::DomainViolation("log_gamma"));
    }
    let target = libm::ldexp(1.0, -(p as i32) - 4);
    let (m, n) = plan(x_lo, z.im.mag_lower(), target);

    let mut shift = CBall::real(Ball::zero());
    for k in 0..m {
        let zk = CBall::new(z.re.add(&Ball::from_i64(k as i64), p), z.im.clone());
        shift = shift.add(&log_complex(&zk, cx)?, p);
    }
    let w = CBall::new(z.re.add(&Ball::from_i64(m as i64), p), z.im.clone());

    // (w - 1/2) log w - w + log(2 pi)/2
    let lw = log_complex(&w, cx)?;
    let wh = CBall::new(w.re.sub(&cx.ratio(1, 2), p), w.im.clone());
    let two_pi = cx.pi().mul_2exp(1);
    let half_log_2pi = cx.log(&two_pi)?.mul_2exp(-1);
    let mut s = wh.mul(&lw, p).sub(&w, p);
    s.re = s.re.add(&half_log_2pi, p);

    let v = w.inv(p)?;
    let v2 = v.mul(&v, p);
    let mut pw = v;
    for j in 1..=n {
        let (bn, bd) = BERNOULLI[j - 1];
        let d = bd * (2 * j as u64) * (2 * j as u64 - 1);
        s = s.add(&pw.mul_real(&Ball::from_ratio(bn, d, p + 8), p), p);
        if j < n {
            pw = pw.mul(&v2, p);
        }
    }

    let rw2 = w.norm_sqr(p).lower_f64();
    if !(rw2 > 0.0) {
        return Err(Error::DomainViolation("log_gamma"));
    }
    let rw = libm::sqrt(rw2).next_down();
    let mut den = 1.0f64;
    for _ in 0..(2 * n + 1) {
        den *= rw;
    }
    let den = den * (1.0 - 64.0 * f64::EPSILON);
    let rem = Mag::from_f64_up(remainder_numer(n)).div_lower(den);
    Ok(s.sub(&shift, p).add_error(rem))
}

/// `θ(t) = Im log Γ(1/4 + it/2) - (t/2) log π`, valid for every `t >= 0`.
pub fn theta_stirling(t: &Ball, cx: &Context) -> Result<Ball, Error> {
    let p = cx.prec();
    if t.lower_f64() < 0.0 {
        return Err(Error::DomainViolation("theta"));
    }
    if t.mid().is_zero() && t.is_exact() {
        return Ok(Ball::zero());
    }
    let z = CBall::new(cx.ratio(1, 4), t.mul_2exp(-1));
    let lg = log_gamma(&z, cx)?;
    let lpi = cx.log(&cx.pi())?;
    Ok(lg.im.sub(&t.mul_2exp(-1).mul(&lpi, p), p))
}

/// Upper bound on `|Γ((σ + it)/2)| exp(πt/4)` for `0 <= σ <= 1`, `t >= 10`.
pub fn gamma_halfline_bound(sigma: &Ball, t: &Ball) -> Result<Mag, Error> {
    if !(sigma.lower_f64() >= 0.0 && sigma.upper_f64() <= 1.0) {
        return Err(Error::DomainViolation("gamma_halfline_bound: sigma"));
    }
    if !(t.lower_f64() >= 10.0) || !t.is_finite() {
        return Err(Error::DomainViolation("gamma_halfline_bound: t"));
    }
    let cx = Context::new(64);
    let p = cx.prec();
    let z = CBall::new(sigma.mul_2exp(-1), t.mul_2exp(-1));
    let lg = log_gamma(&z, &cx)?;
    let e = lg.re.add(&cx.pi().mul(t, p).mul_2exp(-2), p);
    Ok(Mag::from_f64_up(cx.exp(&e).upper_f64().next_up()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_gamma_small_integers() {
        let cx = Context::new(64);
        // Γ(5) = 24
        let lg = log_gamma(&CBall::real(Ball::from_i64(5)), &cx).unwrap();
        assert!(lg.re.contains_f64(libm::log(24.0)) || lg.re.overlaps(&Ball::from_f64_rad(libm::log(24.0), 1e-15)));
        assert!(lg.im.contains_f64(0.0));
        assert!(lg.re.rad().get() < 1e-15);
    }

    #[test]
    fn theta_small_heights() {
        let cx = Context::new(64);
        assert_eq!(theta_stirling(&Ball::zero(), &cx).unwrap(), Ball::zero());
        // θ(1) = -1.7675479528...
        let th = theta_stirling(&Ball::one(), &cx).unwrap();
        assert!(th.contains_f64(-1.767_547_952_812_290_4) || th.overlaps(&Ball::from_f64_rad(-1.767_547_952_812_290_4, 1e-15)));
        assert!(th.rad().get() < 1e-15);
    }

    #[test]
    fn gamma_bound_domain() {
        assert_eq!(
            gamma_halfline_bound(&Ball::from_i64(2), &Ball::from_i64(100)),
            Err(Error::DomainViolation("gamma_halfline_bound: sigma"))
        );
        assert!(gamma_halfline_bound(&Ball::from_ratio(1, 2, 64), &Ball::from_i64(5)).is_err());
        assert!(gamma_halfline_bound(&Ball::zero(), &Ball::from_i64(20)).unwrap().is_finite());
    }
}
