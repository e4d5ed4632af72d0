//! Run configuration as `key = value` text.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::certify::{fnv1a64, TuringConstants};
use crate::error::Error;
use crate::rigor::Prec;
use crate::special::{RemainderRow, RemainderTable};
use crate::zcount::{EvalPolicy, DEFAULT_COST_CAP};

/// Everything that influences a certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub prec: Prec,
    /// Precisions tried: `prec, 2 prec, 4 prec, ...`.
    pub ladder_steps: u32,
    pub samples_per_gap: f64,
    pub max_step_fraction: f64,
    pub switch_height: f64,
    pub cross_check_every: u64,
    pub rs_terms: usize,
    pub remainder: Vec<RemainderRow>,
    pub em_cost_cap: u64,
    pub turing: TuringConstants,
    pub window_gaps: f64,
    pub refine_budget: u64,
    pub smallness: f64,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            prec: 64,
            ladder_steps: 3,
            samples_per_gap: 12.0,
            max_step_fraction: 0.5,
            switch_height: 500.0,
            cross_check_every: 1000,
            rs_terms: 3,
            remainder: RemainderTable::gabcke().rows().to_vec(),
            em_cost_cap: DEFAULT_COST_CAP,
            turing: TuringConstants::TURING,
            window_gaps: 60.0,
            refine_budget: 4096,
            smallness: 0.25,
        }
    }
}

fn bad(_: impl core::fmt::Debug) -> Error {
    Error::InvalidParameters("unparseable configuration value")
}

impl RunConfig {
    /// Parse `key = value` lines over the defaults. `#` starts a comment.
    pub fn parse(text: &str) -> Result<RunConfig, Error> {
        let mut c = RunConfig::default();
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(Error::InvalidParameters("expected key = value"))?;
            let v = v.trim();
            match k.trim() {
                "prec" => c.prec = v.parse().map_err(bad)?,
                "ladder_steps" => c.ladder_steps = v.parse().map_err(bad)?,
                "samples_per_gap" => c.samples_per_gap = v.parse().map_err(bad)?,
                "max_step_fraction" => c.max_step_fraction = v.parse().map_err(bad)?,
                "switch_height" => c.switch_height = v.parse().map_err(bad)?,
                "cross_check_every" => c.cross_check_every = v.parse().map_err(bad)?,
                "rs_terms" => c.rs_terms = v.parse().map_err(bad)?,
                "remainder" => c.remainder = parse_rows(v)?,
                "em_cost_cap" => c.em_cost_cap = v.parse().map_err(bad)?,
                "turing_a" => c.turing.a = v.parse().map_err(bad)?,
                "turing_b" => c.turing.b = v.parse().map_err(bad)?,
                "window_gaps" => c.window_gaps = v.parse().map_err(bad)?,
                "refine_budget" => c.refine_budget = v.parse().map_err(bad)?,
                "smallness" => c.smallness = v.parse().map_err(bad)?,
                _ => return Err(Error::InvalidParameters("unknown configuration key")),
            }
        }
        c.check()?;
        Ok(c)
    }

    fn check(&self) -> Result<(), Error> {
        if self.prec < 32 || self.ladder_steps == 0 || self.ladder_steps > 6 {
            return Err(Error::InvalidParameters("prec must be >= 32 and ladder_steps in 1..=6"));
        }
        if !(self.samples_per_gap >= 1.0 && self.max_step_fraction > 0.0 && self.window_gaps > 0.0) {
            return Err(Error::InvalidParameters("sampling parameters out of range"));
        }
        RemainderTable::new(self.remainder.clone())?.row(self.rs_terms)?;
        Ok(())
    }

    /// Canonical text: every key in fixed order, one per line.
    pub fn canonical(&self) -> String {
        let rows: Vec<String> =
            self.remainder.iter().map(|r| format!("{}:{}:{}", r.terms, r.coeff, r.floor)).collect();
        let mut s = String::new();
        let mut kv = |k: &str, v: String| s.push_str(&format!("{k} = {v}\n"));
        kv("prec", self.prec.to_string());
        kv("ladder_steps", self.ladder_steps.to_string());
        kv("samples_per_gap", self.samples_per_gap.to_string());
        kv("max_step_fraction", self.max_step_fraction.to_string());
        kv("switch_height", self.switch_height.to_string());
        kv("cross_check_every", self.cross_check_every.to_string());
        kv("rs_terms", self.rs_terms.to_string());
        kv("remainder", rows.join(", "));
        kv("em_cost_cap", self.em_cost_cap.to_string());
        kv("turing_a", self.turing.a.to_string());
        kv("turing_b", self.turing.b.to_string());
        kv("window_gaps", self.window_gaps.to_string());
        kv("refine_budget", self.refine_budget.to_string());
        kv("smallness", self.smallness.to_string());
        s
    }

    pub fn hash(&self) -> u64 {
        fnv1a64(self.canonical().as_bytes())
    }

    pub fn ladder(&self, base: Prec) -> Vec<Prec> {
        (0..self.ladder_steps).map(|i| base << i).collect()
    }

    pub fn policy(&self, base: Prec) -> Result<EvalPolicy, Error> {
        Ok(EvalPolicy {
            switch_height: self.switch_height,
            cross_check_every: self.cross_check_every,
            ladder: self.ladder(base),
            rs_terms: self.rs_terms,
            remainder: RemainderTable::new(self.remainder.clone())?,
            cost_cap: self.em_cost_cap,
            max_step_fraction: self.max_step_fraction,
            smallness: self.smallness,
        })
    }
}

// "terms:coeff:floor, ..."
fn parse_rows(v: &str) -> Result<Vec<RemainderRow>, Error> {
    let mut rows = Vec::new();
    for item in v.split(',') {
        let f: Vec<&str> = item.trim().split(':').collect();
        if f.len() != 3 {
            return Err(Error::InvalidParameters("remainder rows are terms:coeff:floor"));
        }
        rows.push(RemainderRow {
            terms: f[0].parse().map_err(bad)?,
            coeff: f[1].parse().map_err(bad)?,
            floor: f[2].parse().map_err(bad)?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_round_trip() {
        let c = RunConfig::default();
        let back = RunConfig::parse(&c.canonical()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.hash(), c.hash());
    }

    #[test]
    fn overrides_and_errors() {
        let c = RunConfig::parse("# comment\nprec = 128\nturing_a = 2.5 # inline\n").unwrap();
        assert_eq!((c.prec, c.turing.a), (128, 2.5));
        assert_ne!(c.hash(), RunConfig::default().hash());
        assert!(RunConfig::parse("bogus = 1").is_err());
        assert!(RunConfig::parse("rs_terms = 7").is_err());
        assert_eq!(c.ladder(64), vec![64, 128, 256]);
    }
}
