//! Turing's method: pin N(T) from sign changes near T and a bound on ∫S.

use alloc::boxed::Box;
use alloc::string::String;

use crate::dyadic::Dyadic;
use crate::error::Error;
use crate::rigor::{Ball, Context};
use crate::special::{rs_theta, rs_theta_integral};
use crate::zcount::{mean_gap, SignSequence};

/// Constants in `|∫_{t1}^{t2} S(t) dt| <= a + b log(t2/2π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TuringConstants {
    pub a: f64,
    pub b: f64,
}

impl Default for TuringConstants {
    fn default() -> TuringConstants {
        TuringConstants::TURING
    }
}

impl TuringConstants {
    /// Turing's original constants.
    pub const TURING: TuringConstants = TuringConstants { a: 2.30, b: 0.128 };

    /// `a + b log(t2/2π)` as a ball.
    pub fn allowance(&self, t2: &Ball, cx: &Context) -> Result<Ball, Error> {
        let p = cx.prec();
        let two_pi = cx.pi().mul_2exp(1);
        let l = cx.log(&t2.div(&two_pi, p)?)?;
        // The f64 constants may sit just below their decimal values.
        let (a, b) = (Ball::from_f64(self.a.next_up()), Ball::from_f64(self.b.next_up()));
        Ok(a.add(&b.mul(&l, p), p))
    }

    /// Check the constants against windows of a reference zero list.
    ///
    /// `zeros` must hold every ordinate up to the largest `t2`, sorted.
    pub fn validate(
        &self,
        zeros: &[f64],
        windows: &[(f64, f64)],
        cx: &Context,
    ) -> Result<ValidatedConstants, Error> {
        if !(self.a >= 0.0 && self.b >= 0.0) {
            return Err(Error::InvalidParameters("Turing constants must be non-negative"));
        }
        if windows.is_empty() {
            return Err(Error::UnvalidatedConstants);
        }
        for &(t1, t2) in windows {
            let s = s_integral(zeros, t1, t2, cx)?;
            let allowed = self.allowance(&Ball::from_f64(t2), cx)?.lower_f64();
            let observed = libm::fabs(s);
            if !(observed <= allowed) {
                return Err(Error::ConstantsRejected { t1, t2, observed, allowed });
            }
        }
        Ok(ValidatedConstants { constants: *self, windows: windows.len() })
    }
}

/// Constants that passed [`TuringConstants::validate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidatedConstants {
    constants: TuringConstants,
    windows: usize,
}

impl ValidatedConstants {
    pub fn constants(&self) -> TuringConstants {
        self.constants
    }

    /// Number of windows the constants were checked on.
    pub fn windows(&self) -> usize {
        self.windows
    }
}

/// `∫_{t1}^{t2} S(t) dt` from a sorted list of zero ordinates (midpoint value).
pub fn s_integral(zeros: &[f64], t1: f64, t2: f64, cx: &Context) -> Result<f64, Error> {
    if !(t1 < t2) {
        return Err(Error::InvalidParameters("window must have t1 < t2"));
    }
    let n_int: f64 = zeros.iter().take_while(|&&g| g <= t2).map(|&g| t2 - g.max(t1)).sum();
    let m = main_term_integral(&Ball::from_f64(t1), &Ball::from_f64(t2), cx)?;
    Ok(n_int - m.mid_f64())
}

/// Enclosure of θ(T)/π + 1.
pub fn counting_main_term(t: &Ball, cx: &Context) -> Result<Ball, Error> {
    let p = cx.prec();
    Ok(rs_theta(t, cx)?.div(&cx.pi(), p)?.add(&Ball::one(), p))
}

// ∫_{t1}^{t2} (θ(t)/π + 1) dt
fn main_term_integral(t1: &Ball, t2: &Ball, cx: &Context) -> Result<Ball, Error> {
    let p = cx.prec();
    let th = rs_theta_integral(t1, t2, cx)?;
    Ok(th.div(&cx.pi(), p)?.add(&t2.sub(t1, p), p))
}

/// Outcome classification of a Turing check.
#[derive(Clone, Debug, PartialEq)]
pub enum VerdictStatus {
    CertifiedExact,
    /// This many more sign changes are needed below T + Δ.
    Deficit(u64),
    Failed(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TuringVerdict {
    pub t: Dyadic,
    pub observed: u64,
    pub main_term: Ball,
    /// Proven upper bound for N(T).
    pub upper: u64,
    pub status: VerdictStatus,
    pub window: (Dyadic, Dyadic),
}

impl core::fmt::Display for TuringVerdict {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let st = match &self.status {
            VerdictStatus::CertifiedExact => String::from("certified"),
            VerdictStatus::Deficit(k) => alloc::format!("deficit {k}"),
            VerdictStatus::Failed(r) => r.clone(),
        };
        write!(f, "T = {}: observed {}, bound {}, {}", self.t, self.observed, self.upper, st)
    }
}

impl TuringVerdict {
    pub fn is_certified(&self) -> bool {
        self.status == VerdictStatus::CertifiedExact
    }

    pub fn into_error(self) -> Error {
        Error::CertificationFailed(Box::new(self))
    }
}

/// Minimum window length in mean gaps: `2 ln T`, at least 8.
pub fn min_window_gaps(t: f64) -> f64 {
    (2.0 * libm::log(t.max(1.0))).max(8.0)
}

fn check_window(t: Dyadic, delta: Dyadic, seq: &SignSequence, lo: Dyadic, hi: Dyadic, cx: &Context) -> Result<(), Error> {
    if !delta.is_positive() {
        return Err(Error::InvalidParameters("window length must be positive"));
    }
    let gap = mean_gap(t, cx)?;
    let gaps = delta.to_f64() / gap;
    let required = min_window_gaps(t.to_f64());
    if gaps < required {
        return Err(Error::WindowTooShort { gaps, required });
    }
    let bad = seq.indeterminates_in(lo, hi);
    if bad > 0 {
        return Err(Error::IndeterminateSigns(bad));
    }
    Ok(())
}

fn dyadic_sum<I: Iterator<Item = Dyadic>>(mut it: I) -> Result<Dyadic, Error> {
    it.try_fold(Dyadic::ZERO, |acc, d| acc.checked_add(d))
}

/// Proven upper bound on N(T) from the signs on `[T, T + Δ]`.
///
/// A sign change between samples `x_i < x_{i+1}` gives a zero below
/// `x_{i+1}`, so `∫ N >= Δ N(T) + Σ (T + Δ - x_{i+1})`.
pub fn turing_upper_bound(
    t: Dyadic,
    delta: Dyadic,
    seq: &SignSequence,
    constants: &ValidatedConstants,
    cx: &Context,
) -> Result<Ball, Error> {
    let end = t.checked_add(delta)?;
    check_window(t, delta, seq, t, end, cx)?;
    let p = cx.prec();
    let lead = dyadic_sum(
        seq.transitions()
            .filter(|&(a, b)| a >= t && b <= end)
            .map(|(_, b)| end.checked_sub(b).unwrap_or(Dyadic::ZERO)),
    )?;
    let tb = t.to_ball();
    let eb = end.to_ball();
    let m = main_term_integral(&tb, &eb, cx)?;
    let allow = constants.constants.allowance(&eb, cx)?;
    let num = allow.add(&m, p).sub(&lead.to_ball(), p);
    num.div(&delta.to_ball(), p)
}

/// Proven lower bound on N(T) from the signs on `[T - Δ, T]`.
///
/// A sign change between `x_i < x_{i+1}` gives a zero above `x_i`, so
/// `∫ N <= Δ N(T) - Σ (x_i - (T - Δ))`.
pub fn turing_lower_bound(
    t: Dyadic,
    delta: Dyadic,
    seq: &SignSequence,
    constants: &ValidatedConstants,
    cx: &Context,
) -> Result<u64, Error> {
    let start = t.checked_sub(delta)?;
    check_window(t, delta, seq, start, t, cx)?;
    let p = cx.prec();
    let lag = dyadic_sum(
        seq.transitions()
            .filter(|&(a, b)| a >= start && b <= t)
            .map(|(a, _)| a.checked_sub(start).unwrap_or(Dyadic::ZERO)),
    )?;
    let sb = start.to_ball();
    let tb = t.to_ball();
    let m = main_term_integral(&sb, &tb, cx)?;
    let allow = constants.constants.allowance(&tb, cx)?;
    let l = m.sub(&allow, p).add(&lag.to_ball(), p).div(&delta.to_ball(), p)?;
    let lo = libm::ceil(l.lower_f64());
    Ok(if lo > 0.0 { lo as u64 } else { 0 })
}

/// Compare `observed_below` (a proven lower bound for N(T)) with the Turing
/// upper bound from the window `[T, T + Δ]`.
pub fn turing_certify(
    t: Dyadic,
    delta: Dyadic,
    window: &SignSequence,
    observed_below: u64,
    constants: &ValidatedConstants,
    cx: &Context,
) -> Result<TuringVerdict, Error> {
    let u = turing_upper_bound(t, delta, window, constants, cx)?;
    let main_term = counting_main_term(&t.to_ball(), cx)?;
    let hi = u.upper_f64();
    if !hi.is_finite() || hi < 0.0 {
        return Err(Error::InvalidParameters("Turing bound is not finite"));
    }
    let upper = libm::floor(hi) as u64;
    let status = if observed_below == upper {
        VerdictStatus::CertifiedExact
    } else if observed_below < upper {
        VerdictStatus::Deficit(upper - observed_below)
    } else {
        VerdictStatus::Failed(alloc::format!(
            "observed {observed_below} sign changes exceeds the proven bound {upper}"
        ))
    };
    Ok(TuringVerdict { t, observed: observed_below, main_term, upper, status, window: (t, t.checked_add(delta)?) })
}
