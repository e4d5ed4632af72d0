//! Truncation bounds for the Riemann–Siegel formula.
//!
//! With `k` correction terms the remainder is bounded by `c * t^(-(2k+1)/4)`
//! for `t` at or above a validity floor; `(c, floor)` come from a table.

use alloc::vec::Vec;

use crate::error::Error;
use crate::rigor::{Ball, Mag};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RemainderRow {
    pub terms: usize,
    pub coeff: f64,
    pub floor: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RemainderTable {
    rows: Vec<RemainderRow>,
}

impl Default for RemainderTable {
    fn default() -> Self {
        RemainderTable::gabcke()
    }
}

impl RemainderTable {
    /// Gabcke's constants for one to three correction terms.
    pub fn gabcke() -> RemainderTable {
        RemainderTable {
            rows: alloc::vec![
                RemainderRow { terms: 1, coeff: 0.127, floor: 200.0 },
                RemainderRow { terms: 2, coeff: 0.053, floor: 200.0 },
                RemainderRow { terms: 3, coeff: 0.011, floor: 200.0 },
            ],
        }
    }

    pub fn new(mut rows: Vec<RemainderRow>) -> Result<RemainderTable, Error> {
        rows.sort_by_key(|r| r.terms);
        for w in rows.windows(2) {
            if w[0].terms == w[1].terms {
                return Err(Error::InvalidParameters("duplicate remainder row"));
            }
        }
        for r in &rows {
            if r.terms == 0 || !(r.coeff > 0.0) || !(r.floor > 0.0) || !r.coeff.is_finite() || !r.floor.is_finite() {
                return Err(Error::InvalidParameters("remainder row"));
            }
        }
        Ok(RemainderTable { rows })
    }

    /// Parse whitespace-separated `terms coeff floor` rows; `#` starts a comment.
    pub fn parse(text: &str) -> Result<RemainderTable, Error> {
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let bad = Error::InvalidParameters("malformed remainder row");
            let terms = it.next().and_then(|s| s.parse().ok()).ok_or(bad.clone())?;
            let coeff = it.next().and_then(|s| s.parse().ok()).ok_or(bad.clone())?;
            let floor = it.next().and_then(|s| s.parse().ok()).ok_or(bad.clone())?;
            if it.next().is_some() {
                return Err(bad);
            }
            rows.push(RemainderRow { terms, coeff, floor });
        }
        RemainderTable::new(rows)
    }

    pub fn rows(&self) -> &[RemainderRow] {
        &self.rows
    }

    pub fn row(&self, terms: usize) -> Result<&RemainderRow, Error> {
        self.rows.iter().find(|r| r.terms == terms).ok_or(Error::UnsupportedTermCount(terms))
    }

    /// Largest supported term count.
    pub fn max_terms(&self) -> usize {
        self.rows.last().map_or(0, |r| r.terms)
    }
}

/// Upper bound on the Riemann–Siegel remainder after `correction_terms`
/// correction terms.
pub fn rs_remainder_bound(t: &Ball, correction_terms: usize, table: &RemainderTable) -> Result<Mag, Error> {
    let row = table.row(correction_terms)?;
    let t_lo = t.lower_f64();
    if !(t_lo >= row.floor) {
        return Err(Error::BelowValidityFloor { t: t_lo, floor: row.floor, terms: correction_terms });
    }
    // Lower bound for t_lo^{1/4}; libm's sqrt is correctly rounded, so one
    // step down per root stays below the true value.
    let q = libm::sqrt(libm::sqrt(t_lo).next_down()).next_down();
    let mut den = 1.0f64;
    for _ in 0..(2 * correction_terms + 1) {
        den = (den * q).next_down();
    }
    // The f64 coefficient may sit just below its decimal value.
    let c = Mag::from_f64_up(row.coeff.next_up());
    Ok(c.mul(Mag::from_f64_up((1.0 / den).next_up())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_and_term_count() {
        let tab = RemainderTable::gabcke();
        assert!(matches!(
            rs_remainder_bound(&Ball::from_i64(100), 3, &tab),
            Err(Error::BelowValidityFloor { .. })
        ));
        assert_eq!(rs_remainder_bound(&Ball::from_i64(300), 4, &tab), Err(Error::UnsupportedTermCount(4)));
    }

    #[test]
    fn decreasing_in_height() {
        let tab = RemainderTable::gabcke();
        let a = rs_remainder_bound(&Ball::from_i64(200), 1, &tab).unwrap();
        let b = rs_remainder_bound(&Ball::from_i64(1_000_000), 1, &tab).unwrap();
        assert!(a.get() < 0.02);
        assert!(b.get() < a.get());
    }

    #[test]
    fn parse_rows() {
        let tab = RemainderTable::parse("# k c floor\n1 0.127 200\n3 0.011 200 # tight\n").unwrap();
        assert_eq!(tab.rows().len(), 2);
        assert_eq!(tab.max_terms(), 3);
        assert!(RemainderTable::parse("1 0.1").is_err());
        assert!(RemainderTable::parse("1 0.1 200\n1 0.2 200").is_err());
    }
}
