//! Z(t) by the Riemann–Siegel formula with up to three correction terms.

use alloc::vec::Vec;

use crate::error::Error;
use crate::rigor::{Ball, Context, Mag, Prec};
use crate::special::{rs_remainder_bound, rs_theta, RemainderTable};

const ORDER: usize = 7;

// Truncated Taylor series a_0 + a_1 δ + ... + a_6 δ^6.
#[derive(Clone, Debug)]
struct Jet([Ball; ORDER]);

impl Jet {
    fn zero() -> Jet {
        Jet(Default::default())
    }

    fn mul(&self, o: &Jet, p: Prec) -> Jet {
        let mut r = Jet::zero();
        for i in 0..ORDER {
            for j in 0..ORDER - i {
                r.0[i + j] = r.0[i + j].add(&self.0[i].mul(&o.0[j], p), p);
            }
        }
        r
    }

    fn div(&self, o: &Jet, p: Prec) -> Result<Jet, Error> {
        let mut q = Jet::zero();
        for k in 0..ORDER {
            let mut acc = self.0[k].clone();
            for j in 1..=k {
                acc = acc.sub(&o.0[j].mul(&q.0[k - j], p), p);
            }
            q.0[k] = acc.div(&o.0[0], p)?;
        }
        Ok(q)
    }
}

// Taylor coefficients of sinc at x0 (sinc x = sin x / x).
fn sinc_coeffs(x0: &Ball, p: Prec) -> [Ball; ORDER] {
    let xm = x0.mag_upper().get();
    let target = libm::ldexp(1.0, -(p as i32) - 8);
    let kmax = 64usize;
    // inv_fact[k] = 1/(2k+1)!, pows[i] = x0^i
    let mut inv_fact = Vec::with_capacity(kmax + 1);
    let mut f = Ball::one();
    inv_fact.push(f.clone());
    for k in 1..=kmax {
        f = f.div_u64((2 * k as u64) * (2 * k as u64 + 1), p);
        inv_fact.push(f.clone());
    }
    let mut pows = Vec::with_capacity(2 * kmax + 1);
    let mut pw = Ball::one();
    for _ in 0..=2 * kmax {
        pows.push(pw.clone());
        pw = pw.mul(x0, p);
    }
    let mut out: [Ball; ORDER] = Default::default();
    for (j, slot) in out.iter_mut().enumerate() {
        let mut s = Ball::zero();
        let mut k = (j + 1) / 2;
        loop {
            let bound = |k: usize| binom(2 * k, j) as f64 * libm::pow(xm, (2 * k - j) as f64) / factorial_f64(2 * k + 1);
            let ratio = bound(k + 1) / bound(k).max(f64::MIN_POSITIVE);
            if k > j + 1 && bound(k) < target && ratio <= 0.5 {
                // Geometric tail from k on.
                s = s.add_error(Mag::from_f64_up(2.0 * bound(k) * 1.001));
                break;
            }
            assert!(k < kmax, "sinc series did not converge");
            let mut term = pows[2 * k - j].mul(&inv_fact[k], p).mul_i64(binom(2 * k, j) as i64, p);
            if k % 2 == 1 {
                term = term.neg();
            }
            s = s.add(&term, p);
            k += 1;
        }
        *slot = s;
    }
    out
}

fn binom(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut r = 1u64;
    for i in 0..k {
        r = r * (n - i) as u64 / (i as u64 + 1);
    }
    r
}

fn factorial_f64(n: usize) -> f64 {
    (1..=n).fold(1.0, |a, i| a * i as f64)
}

// sinc(h(δ)) for a jet h.
fn sinc_jet(h: &Jet, p: Prec) -> Jet {
    let s = sinc_coeffs(&h.0[0], p);
    let mut d = h.clone();
    d.0[0] = Ball::zero();
    let mut r = Jet::zero();
    r.0[0] = s[0].clone();
    let mut pw = d.clone();
    for (j, sj) in s.iter().enumerate().skip(1) {
        for i in 0..ORDER {
            r.0[i] = r.0[i].add(&pw.0[i].mul(sj, p), p);
        }
        if j + 1 < ORDER {
            pw = pw.mul(&d, p);
        }
    }
    r
}

/// Ψ(p) = cos(2π(p² - p - 1/16)) / cos(2πp) and its first six derivatives.
pub(crate) fn psi_derivatives(pfrac: &Ball, cx: &Context) -> Result<[Ball; ORDER], Error> {
    let p = cx.prec() + 16;
    let pi = cx.pi_wide().round(p);
    let u = pfrac.sub(&Ball::from_ratio(1, 2, p), p);
    // Ψ is even in u; fold u < -1/8 onto the other side so the sinc
    // denominators stay away from their zeros.
    let flip = u.mid_f64() < -0.125;
    let u = if flip { u.neg() } else { u };
    let w0 = u.sub(&Ball::from_ratio(1, 4, p), p);
    // h1 = π w (2w + 1), h2 = 2π w as jets in δ = w - w0.
    let mut h1 = Jet::zero();
    let two_w0 = w0.mul_2exp(1);
    h1.0[0] = pi.mul(&w0.mul(&two_w0.add(&Ball::one(), p), p), p);
    h1.0[1] = pi.mul(&w0.mul_2exp(2).add(&Ball::one(), p), p);
    h1.0[2] = pi.mul_2exp(1);
    let mut h2 = Jet::zero();
    h2.0[0] = pi.mul(&two_w0, p);
    h2.0[1] = pi.mul_2exp(1);
    let mut lin = Jet::zero();
    lin.0[0] = w0.add(&Ball::from_ratio(1, 2, p), p);
    lin.0[1] = Ball::one();
    let f = lin.mul(&sinc_jet(&h1, p), p).div(&sinc_jet(&h2, p), p)?;
    let mut out: [Ball; ORDER] = Default::default();
    let mut fact = 1i64;
    for j in 0..ORDER {
        if j > 0 {
            fact *= j as i64;
        }
        let mut d = f.0[j].mul_i64(fact, p);
        if flip && j % 2 == 1 {
            d = d.neg();
        }
        out[j] = d;
    }
    Ok(out)
}

/// Cached `log n` and `n^{-1/2}` for the main sum.
#[derive(Clone, Debug, Default)]
pub struct RsCache {
    prec: Prec,
    logs: Vec<Ball>,
    rsqrt: Vec<Ball>,
}

impl RsCache {
    pub fn new() -> RsCache {
        RsCache::default()
    }

    fn ensure(&mut self, nu: usize, cx: &Context) -> Result<(), Error> {
        if self.prec != cx.prec() {
            self.logs.clear();
            self.rsqrt.clear();
            self.prec = cx.prec();
        }
        let p = cx.prec() + 8;
        while self.logs.len() < nu {
            let n = self.logs.len() as i64 + 1;
            let nb = Ball::from_i64(n);
            self.logs.push(cx.log(&nb)?);
            let r = cx.sqrt(&nb)?;
            self.rsqrt.push(Ball::one().div(&r, p)?);
        }
        Ok(())
    }
}

/// Main-sum length ⌊√(t/2π)⌋ and the fractional part, as a ball.
pub fn main_sum_length(t: &Ball, cx: &Context) -> Result<(u64, Ball), Error> {
    let p = cx.prec() + 8;
    let two_pi = cx.pi_wide().mul_2exp(1);
    let tau = t.div(&two_pi, p)?;
    let root = cx.sqrt(&tau)?;
    let lo = libm::floor(root.lower_f64());
    let hi = libm::floor(root.upper_f64());
    if lo != hi || lo < 1.0 {
        return Err(Error::AmbiguousMainSum);
    }
    let nu = lo as u64;
    Ok((nu, root.sub(&Ball::from_i64(nu as i64), p)))
}

/// Z(t) from the Riemann–Siegel formula with `correction_terms` terms.
pub fn z_riemann_siegel(
    t: &Ball,
    cx: &Context,
    correction_terms: usize,
    table: &RemainderTable,
) -> Result<Ball, Error> {
    z_riemann_siegel_cached(t, cx, correction_terms, table, &mut RsCache::new())
}

pub fn z_riemann_siegel_cached(
    t: &Ball,
    cx: &Context,
    correction_terms: usize,
    table: &RemainderTable,
    cache: &mut RsCache,
) -> Result<Ball, Error> {
    let rem = rs_remainder_bound(t, correction_terms, table)?;
    if correction_terms > 3 {
        return Err(Error::UnsupportedTermCount(correction_terms));
    }
    let p = cx.prec();
    let (nu, frac) = main_sum_length(t, cx)?;
    cache.ensure(nu as usize, cx)?;
    let th = rs_theta(t, cx)?;
    let mut sum = Ball::zero();
    for n in 0..nu as usize {
        let arg = th.sub(&t.mul(&cache.logs[n], p + 8), p + 8);
        sum = sum.add(&cx.cos(&arg).mul(&cache.rsqrt[n], p), p);
    }
    let mut z = sum.mul_2exp(1);

    let psi = psi_derivatives(&frac, cx)?;
    let pi = cx.pi();
    let pi2 = pi.sqr(p);
    let two_pi = pi.mul_2exp(1);
    let tau = t.div(&two_pi, p)?;
    let inv_sqrt_tau = Ball::one().div(&cx.sqrt(&tau)?, p)?;
    let mut corr = psi[0].clone();
    let mut scale = Ball::one();
    if correction_terms >= 2 {
        // C1 = -Ψ'''/(96π²)
        let c1 = psi[3].div(&pi2.mul_i64(96, p), p)?.neg();
        scale = scale.mul(&inv_sqrt_tau, p);
        corr = corr.add(&c1.mul(&scale, p), p);
    }
    if correction_terms >= 3 {
        // C2 = Ψ''/(64π²) + Ψ⁽⁶⁾/(18432π⁴)
        let c2 = psi[2]
            .div(&pi2.mul_i64(64, p), p)?
            .add(&psi[6].div(&pi2.sqr(p).mul_i64(18432, p), p)?, p);
        scale = scale.mul(&inv_sqrt_tau, p);
        corr = corr.add(&c2.mul(&scale, p), p);
    }
    // (-1)^{ν-1} τ^{-1/4}
    let quarter = cx.sqrt(&inv_sqrt_tau)?;
    let mut corr = corr.mul(&quarter, p);
    if nu % 2 == 0 {
        corr = corr.neg();
    }
    z = z.add(&corr, p);
    Ok(z.add_error(rem))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn main_sum_length_at_1000() {
        let cx = Context::new(64);
        let (nu, frac) = main_sum_length(&Ball::from_i64(1000), &cx).unwrap();
        assert_eq!(nu, 12);
        assert!(frac.lower_f64() > 0.0 && frac.upper_f64() < 1.0);
    }

    #[test]
    fn psi_at_half() {
        // Ψ(1/2) = cos(2π(-5/16))/cos(π) = -cos(5π/8) = 0.38268343236...
        let cx = Context::new(64);
        let d = psi_derivatives(&Ball::from_ratio(1, 2, 64), &cx).unwrap();
        assert!((d[0].mid_f64() - 0.382_683_432_365_089_8).abs() < 1e-15);
        // Ψ is even about 1/2.
        assert!(d[1].contains_f64(0.0) || d[1].mag_upper().get() < 1e-15);
    }

    #[test]
    fn psi_symmetry() {
        let cx = Context::new(64);
        let a = psi_derivatives(&Ball::from_f64(0.4375), &cx).unwrap();
        let b = psi_derivatives(&Ball::from_f64(0.5625), &cx).unwrap();
        for j in 0..ORDER {
            let bj = if j % 2 == 1 { b[j].neg() } else { b[j].clone() };
            assert!(a[j].overlaps(&bj), "{j}");
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(6, 2), 15);
        assert_eq!(binom(12, 6), 924);
        assert_eq!(binom(3, 4), 0);
    }
}
