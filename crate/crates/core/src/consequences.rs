//! Explicit prime-counting ranges and the de Bruijn–Newman gate implied by a
//! verified height H.

use alloc::vec::Vec;

use crate::dyadic::Dyadic;
use crate::error::Error;
use crate::rigor::{Ball, Context};

/// Lower ends of the validity ranges for ψ, Chebyshev θ and π.
pub const PSI_FLOOR: u64 = 59;
pub const CHEB_THETA_FLOOR: u64 = 599;
pub const PI_FLOOR: u64 = 2657;

/// `H > threshold` gives `Λ <= bound`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DbnRow {
    pub threshold: f64,
    pub bound: f64,
}

/// The single attested row; callers may supply more.
pub const DBN_TABLE: [DbnRow; 1] = [DbnRow { threshold: 2.51e12, bound: 0.2 }];

/// Enclosure `[lo, hi]` of the Büthe threshold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ButheThreshold {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl ButheThreshold {
    /// The certified value: every `x <= lo` satisfies the criterion.
    pub fn value(&self) -> f64 {
        self.lo.to_f64()
    }
}

// Sign of 4.92 sqrt(x/log x) - H, or None if undecided at this precision.
fn compare(x: Dyadic, h: &Ball, cx: &Context) -> Result<Option<bool>, Error> {
    let p = cx.prec();
    let xb = x.to_ball();
    let q = xb.div(&cx.log(&xb)?, p)?;
    // 4.92 as 123/25 exactly.
    let lhs = cx.sqrt(&q)?.mul(&Ball::from_ratio(123, 25, p), p);
    let d = lhs.sub(h, p);
    Ok(if d.lower_f64() > 0.0 {
        Some(true)
    } else if d.upper_f64() < 0.0 {
        Some(false)
    } else {
        None
    })
}

/// The `x > e` solving `4.92 sqrt(x/log x) = H`, by bisection on dyadics.
pub fn buthe_threshold(h: f64) -> Result<ButheThreshold, Error> {
    if !(h > 100.0) || !h.is_finite() || h > 1e18 {
        return Err(Error::DomainViolation("buthe_threshold: need 100 < H <= 1e18"));
    }
    let cx = Context::new(128);
    let hb = Ball::from_f64(h);
    let mut lo = Dyadic::from_int(3);
    let mut hi = Dyadic::from_int(4);
    while compare(hi, &hb, &cx)? != Some(true) {
        lo = hi;
        hi = hi.mul_2exp(1);
    }
    loop {
        let width = hi.checked_sub(lo)?.to_f64();
        if width <= 1e-7 * lo.to_f64() {
            break;
        }
        let mid = lo.midpoint(hi)?;
        match compare(mid, &hb, &cx)? {
            Some(true) => hi = mid,
            Some(false) => lo = mid,
            None => break,
        }
    }
    Ok(ButheThreshold { lo, hi })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConsequenceReport {
    pub h: f64,
    pub x_max: f64,
    pub psi_range: (f64, f64),
    pub cheb_theta_range: (f64, f64),
    pub pi_range: (f64, f64),
    pub dbn_bound: Option<f64>,
}

/// Report with the default de Bruijn–Newman table.
pub fn consequence_report(h: f64) -> Result<ConsequenceReport, Error> {
    consequence_report_with(h, &DBN_TABLE)
}

pub fn consequence_report_with(h: f64, dbn: &[DbnRow]) -> Result<ConsequenceReport, Error> {
    let x_max = buthe_threshold(h)?.value();
    let dbn_bound = dbn
        .iter()
        .filter(|r| h > r.threshold)
        .map(|r| r.bound)
        .fold(None, |acc: Option<f64>, b| Some(acc.map_or(b, |a| a.min(b))));
    Ok(ConsequenceReport {
        h,
        x_max,
        psi_range: (PSI_FLOOR as f64, x_max),
        cheb_theta_range: (CHEB_THETA_FLOOR as f64, x_max),
        pi_range: (PI_FLOOR as f64, x_max),
        dbn_bound,
    })
}

/// Parse extra table rows `threshold bound` (one per line, `#` comments).
pub fn parse_dbn_table(text: &str) -> Result<Vec<DbnRow>, Error> {
    let mut rows = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let bad = Error::InvalidParameters("de Bruijn–Newman rows are `threshold bound`");
        let threshold: f64 = it.next().and_then(|s| s.parse().ok()).ok_or(bad.clone())?;
        let bound: f64 = it.next().and_then(|s| s.parse().ok()).ok_or(bad.clone())?;
        if it.next().is_some() {
            return Err(bad);
        }
        rows.push(DbnRow { threshold, bound });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain() {
        assert!(buthe_threshold(100.0).is_err());
        assert!(buthe_threshold(f64::NAN).is_err());
        assert!(buthe_threshold(101.0).is_ok());
    }

    #[test]
    fn monotone() {
        let a = buthe_threshold(1e6).unwrap().value();
        let b = buthe_threshold(2e6).unwrap().value();
        assert!(b > a);
    }

    #[test]
    fn gate() {
        assert_eq!(consequence_report(2.51e12).unwrap().dbn_bound, None);
        assert_eq!(consequence_report(1e11).unwrap().dbn_bound, None);
        assert_eq!(consequence_report(2.6e12).unwrap().dbn_bound, Some(0.2));
        let rows = parse_dbn_table("# extra\n1e13 0.19\n").unwrap();
        let r = consequence_report_with(2e13, &[DBN_TABLE[0], rows[0]]).unwrap();
        assert_eq!(r.dbn_bound, Some(0.19));
    }
}
