//! ζ(1/2 + it) by Euler–Maclaurin summation, rotated into Z(t).

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::rigor::{Ball, CBall, Context, Mag, Prec};
use crate::special::{theta_stirling, BERNOULLI};

/// Default bound on the number of terms of the main sum.
pub const DEFAULT_COST_CAP: u64 = 20_000_000;

/// Summation length `n` and number of Bernoulli corrections `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EmPlan {
    pub n: u64,
    pub m: usize,
}

const MAX_CORRECTIONS: usize = 400;

// log |T_k| bound estimates for ζ(σ + it) with summation length n; returns
// the smallest m whose remainder estimate is below 2^-bits.
fn corrections_needed(t: f64, n: f64, bits: u32) -> Option<usize> {
    let sigma = 0.5;
    let target = -(bits as f64) * core::f64::consts::LN_2;
    let ln_n = libm::log(n);
    let ln_2pi = libm::log(2.0 * core::f64::consts::PI);
    // log |(s)_{2k-1}| accumulated incrementally.
    let mut lpoch = libm::log(libm::hypot(sigma, t));
    let mut prev = f64::INFINITY;
    for k in 1..=MAX_CORRECTIONS + 1 {
        if k > 1 {
            let a = (2 * k - 3) as f64;
            let b = (2 * k - 2) as f64;
            lpoch += libm::log(libm::hypot(sigma + a, t)) + libm::log(libm::hypot(sigma + b, t));
        }
        // |c_k| <= 2 ζ(2)/(2π)^{2k}; ζ(2) < 1.65
        let lt = libm::log(3.3) - 2.0 * k as f64 * ln_2pi + lpoch - (sigma + (2 * k - 1) as f64) * ln_n;
        if k >= 2 {
            let extra = libm::log(libm::hypot(sigma + (2 * k - 1) as f64, t) / (sigma + (2 * k - 1) as f64));
            if lt + extra <= target {
                return Some(k - 1);
            }
        }
        if lt > prev + 1e-9 && k > 2 {
            return None;
        }
        prev = lt;
    }
    None
}

/// Choose `(n, m)` minimising `n + 8m` for an absolute error near `2^-prec`.
pub fn em_plan(t: f64, prec: Prec) -> EmPlan {
    let bits = prec + 8;
    let base = (t / (2.0 * core::f64::consts::PI)).max(1.0);
    let mut best: Option<(f64, EmPlan)> = None;
    let mut f = 0.05f64;
    while f < 64.0 {
        let n = libm::ceil(base * f).max(2.0) + 1.0;
        if let Some(m) = corrections_needed(t, n, bits) {
            let cost = n + 8.0 * m as f64;
            if best.map_or(true, |(c, _)| cost < c) {
                best = Some((cost, EmPlan { n: n as u64, m: m.max(1) }));
            }
        }
        f *= 1.08;
    }
    best.map_or(EmPlan { n: (base * 64.0) as u64 + 2, m: MAX_CORRECTIONS }, |(_, p)| p)
}

// B_{2k} (2π)^{2k} / (2k)! = (-1)^{k+1} 2 ζ(2k) for k = 1..=m.
fn bernoulli_coeffs(m: usize, cx: &Context) -> Result<Vec<Ball>, Error> {
    let p = cx.prec() + 16;
    let mut out = Vec::with_capacity(m);
    let two_pi = cx.pi_wide().mul_2exp(1).round(p);
    let two_pi2 = two_pi.sqr(p);
    let mut scale = two_pi2.clone();
    for k in 1..=m.min(15) {
        let (a, b) = BERNOULLI[k - 1];
        let mut c = Ball::from_ratio(a, b, p).mul(&scale, p);
        for i in 1..=(2 * k as u64) {
            c = c.div_u64(i, p);
        }
        out.push(c);
        scale = scale.mul(&two_pi2, p);
    }
    if m > 15 {
        // ζ(2k) by a direct sum over j < J plus the tail bound
        // J^{1-2k}/(2k-1) + J^{-2k}, with j^{-2k} updated in place.
        let mut jmax = 2u64;
        while libm::pow(jmax as f64, -31.0) / 31.0 * 2.0 >= libm::ldexp(1.0, -(p as i32) - 4) {
            jmax += 1;
        }
        let inv_sq: Vec<Ball> = (2..jmax).map(|j| Ball::from_ratio(1, j * j, p)).collect();
        let mut pw: Vec<Ball> = inv_sq.clone();
        for _ in 1..16 {
            for (w, q) in pw.iter_mut().zip(&inv_sq) {
                *w = w.mul(q, p);
            }
        }
        for k in 16..=m {
            let e = 2.0 * k as f64;
            let tail = libm::pow(jmax as f64, 1.0 - e) / (e - 1.0) + libm::pow(jmax as f64, -e);
            let mut z = Ball::one();
            for w in &pw {
                z = z.add(w, p);
            }
            let z = z.add_error(Mag::from_f64_up(tail * 1.01));
            let c = if k % 2 == 0 { z.mul_2exp(1).neg() } else { z.mul_2exp(1) };
            out.push(c);
            for (w, q) in pw.iter_mut().zip(&inv_sq) {
                *w = w.mul(q, p);
            }
        }
    }
    Ok(out)
}

// Smallest-prime-factor sieve for 2..=n.
fn spf_sieve(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        for &q in &primes {
            let v = i * q as usize;
            if q > spf[i] || v > n {
                break;
            }
            spf[v] = q;
        }
    }
    spf
}

// p^{-1/2 - it} from log p.
fn prime_power(pr: u64, ln: &Ball, t: &Ball, cx: &Context) -> Result<CBall, Error> {
    let p = cx.prec();
    let amp = Ball::one().div(&cx.sqrt(&Ball::from_i64(pr as i64))?, p)?;
    let (s, c) = cx.sin_cos(&t.mul(ln, p + 32));
    Ok(CBall::new(c.mul(&amp, p), s.mul(&amp, p).neg()))
}

/// Enclosure of ζ(1/2 + it) for `t > 0`.
pub fn zeta_half_line(t: &Ball, cx: &Context, cost_cap: u64) -> Result<CBall, Error> {
    if !(t.lower_f64() > 0.0) || !t.is_finite() {
        return Err(Error::DomainViolation("zeta_half_line"));
    }
    let p = cx.prec();
    let plan = em_plan(t.upper_f64(), p);
    if plan.n > cost_cap {
        return Err(Error::PrecisionExhausted { needed: plan.n, cap: cost_cap });
    }
    let n = plan.n as usize;
    let spf = spf_sieve(n);
    let keep = n / 2;
    // n^{-s} and log n for n <= N/2; larger n are only summed.
    let mut table: Vec<CBall> = Vec::with_capacity(keep + 1);
    let mut logs: Vec<Ball> = Vec::with_capacity(keep + 1);
    table.push(CBall::default());
    table.push(CBall::one());
    logs.push(Ball::zero());
    logs.push(Ball::zero());
    let ln2 = cx.ln2();
    let mut sum = CBall::one();
    let mut last = CBall::one();
    for k in 2..=n {
        let q = spf[k] as usize;
        let (v, lk) = if q == k {
            // log k = log 2 + log((k-1)/2) + log(k/(k-1)) for odd primes.
            let lk = if k == 2 {
                ln2.clone()
            } else {
                ln2.add(&logs[(k - 1) / 2], p).add(&cx.log_succ_ratio(k as u64 - 1), p)
            };
            (prime_power(k as u64, &lk, t, cx)?, lk)
        } else {
            let lk = if k <= keep { logs[q].add(&logs[k / q], p) } else { Ball::zero() };
            (table[q].mul(&table[k / q], p), lk)
        };
        if k < n {
            sum = sum.add(&v, p);
        }
        if k <= keep {
            table.push(v.clone());
            logs.push(lk);
        }
        if k == n {
            last = v;
        }
    }
    drop(table);
    drop(logs);
    let n_pow = last; // N^{-s}
    let s = CBall::new(cx.ratio(1, 2), t.clone());
    let s_minus_1 = CBall::new(cx.ratio(-1, 2), t.clone());
    let nb = Ball::from_i64(n as i64);
    // N^{1-s}/(s-1)
    let head = n_pow.mul_real(&nb, p).mul(&s_minus_1.inv(p)?, p);
    sum = sum.add(&head, p).add(&n_pow.mul_2exp(-1), p);

    // T_k = c_k U_k with c_k = B_{2k}/(2k)!; we carry c_k (2π)^{2k} and
    // U_k/(2π)^{2k} so neither factor overflows.
    let coeffs = bernoulli_coeffs(plan.m + 1, cx)?;
    let two_pi_n = cx.pi().mul_2exp(1).mul(&nb, p);
    let inv_w = Ball::one().div(&two_pi_n.sqr(p), p)?;
    let mut u = s.mul(&n_pow, p).mul_real(&Ball::one().div(&nb, p)?, p).mul_real(&cx.pi().mul_2exp(1).sqr(p).inv(p)?, p);
    for k in 1..=plan.m + 1 {
        let term = u.mul_real(&coeffs[k - 1], p);
        if k <= plan.m {
            sum = sum.add(&term, p);
            let a = CBall::new(s.re.add(&Ball::from_i64(2 * k as i64 - 1), p), t.clone());
            let b = CBall::new(s.re.add(&Ball::from_i64(2 * k as i64), p), t.clone());
            u = u.mul(&a.mul(&b, p), p).mul_real(&inv_w, p);
        } else {
            // Backlund: |R_M| <= |s + 2M + 1| / (σ + 2M + 1) |T_{M+1}|
            let re = 0.5 + (2 * plan.m + 1) as f64;
            let im = t.mag_upper().get();
            let ratio = (libm::hypot(re, im) / re) * (1.0 + 8.0 * f64::EPSILON);
            let r = term.abs_upper().mul_f64(ratio);
            sum = sum.add_error(r);
        }
    }
    Ok(sum)
}

/// Enclosure of Z(t) via Euler–Maclaurin, for `t > 0`.
pub fn z_euler_maclaurin(t: &Ball, cx: &Context, cost_cap: u64) -> Result<Ball, Error> {
    let p = cx.prec();
    let zeta = zeta_half_line(t, cx, cost_cap)?;
    let th = theta_stirling(t, cx)?;
    let (s, c) = cx.sin_cos(&th);
    Ok(c.mul(&zeta.re, p).sub(&s.mul(&zeta.im, p), p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve() {
        let s = spf_sieve(30);
        assert_eq!(s[2], 2);
        assert_eq!(s[29], 29);
        assert_eq!(s[27], 3);
        assert_eq!(s[25], 5);
    }

    #[test]
    fn plan_is_finite() {
        for t in [0.5, 14.0, 1000.0, 1.0e6] {
            let pl = em_plan(t, 64);
            assert!(pl.n >= 2 && pl.m >= 1, "{t} {pl:?}");
        }
    }

    #[test]
    fn zeta_at_small_heights() {
        let cx = Context::new(64);
        // ζ(1/2 + i) = 0.14393642707719 - 0.72209974353167 i
        let z = zeta_half_line(&Ball::one(), &cx, DEFAULT_COST_CAP).unwrap();
        assert!((z.re.mid_f64() - 0.143_936_427_077_189_8).abs() < 1e-12);
        assert!(z.re.rad().get() < 1e-12);
    }

    #[test]
    fn cost_cap() {
        let cx = Context::new(64);
        assert!(matches!(
            z_euler_maclaurin(&Ball::from_i64(100_000), &cx, 10),
            Err(Error::PrecisionExhausted { .. })
        ));
    }
}
