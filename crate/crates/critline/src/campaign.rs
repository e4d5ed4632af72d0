//! Running a campaign over a pool of worker threads.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;

use anyhow::{bail, Context as _, Result};
use critline_core::certify::{stitch, CertStatus, ChunkCertificate, GlobalCertificate, ValidatedConstants};
use critline_core::orchestra::{failed_certificate, plan_units_with, run_unit_with, RunConfig, WorkUnit};
use critline_core::zcount::Evaluator;
use critline_core::{Dyadic, Error};

use crate::journal::{Header, Journal};
use crate::oracle;

/// Environment variable holding the worker count.
pub const WORKERS_ENV: &str = "CRITLINE_WORKERS";

#[derive(Clone, Debug, PartialEq)]
pub struct Campaign {
    pub height: Dyadic,
    pub unit_length: Dyadic,
    pub config: RunConfig,
}

impl Campaign {
    pub fn units(&self) -> Result<Vec<WorkUnit>> {
        Ok(plan_units_with(self.height, self.unit_length, self.config.prec, self.config.samples_per_gap)?)
    }

    fn header(&self) -> Header {
        Header { height: self.height, unit_length: self.unit_length, config: self.config.clone() }
    }
}

/// Outcome of a journal: the stitched certificate if everything is certified.
#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub units: usize,
    pub recorded: usize,
    pub failed: Vec<u64>,
    pub global: Option<GlobalCertificate>,
    pub stitch_error: Option<Error>,
}

impl Summary {
    /// All units certified and the stitched height equals the target.
    pub fn is_complete(&self, height: Dyadic) -> bool {
        self.global.as_ref().is_some_and(|g| g.height == height) && self.failed.is_empty()
    }
}

/// Worker count from `CRITLINE_WORKERS`, else the number of logical CPUs.
pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or_else(|| thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Summarize a set of records against the campaign plan.
pub fn summarize(campaign: &Campaign, certs: &[ChunkCertificate]) -> Result<Summary> {
    let units = campaign.units()?;
    let mut sorted = certs.to_vec();
    sorted.sort_by_key(|c| c.id);
    let failed = sorted.iter().filter(|c| c.status != CertStatus::Certified).map(|c| c.id).collect();
    let (global, stitch_error) = match stitch(&sorted) {
        Ok(g) => (Some(g), None),
        Err(e) => (None, Some(e)),
    };
    Ok(Summary { units: units.len(), recorded: sorted.len(), failed, global, stitch_error })
}

/// Start a new campaign journal and run it to completion.
pub fn run(journal: &Path, campaign: &Campaign, workers: usize) -> Result<Summary> {
    let constants = oracle::validate(campaign.config.turing).context("Turing constants rejected")?;
    let mut j = Journal::create(journal, &campaign.header())
        .with_context(|| format!("creating {}", journal.display()))?;
    execute(&mut j, campaign, &constants, Vec::new(), workers)
}

/// Continue a campaign from its journal.
pub fn resume(journal: &Path, workers: usize) -> Result<Summary> {
    let (mut j, state) = Journal::recover(journal).with_context(|| format!("recovering {}", journal.display()))?;
    let campaign = Campaign {
        height: state.header.height,
        unit_length: state.header.unit_length,
        config: state.header.config,
    };
    let constants = oracle::validate(campaign.config.turing).context("Turing constants rejected")?;
    execute(&mut j, &campaign, &constants, state.certificates, workers)
}

fn execute(
    journal: &mut Journal,
    campaign: &Campaign,
    constants: &ValidatedConstants,
    done: Vec<ChunkCertificate>,
    workers: usize,
) -> Result<Summary> {
    let units = campaign.units()?;
    let have: BTreeMap<u64, ChunkCertificate> = done.iter().map(|c| (c.id, c.clone())).collect();
    for c in have.values() {
        if c.config_hash != campaign.config.hash() {
            bail!("record for unit {} was produced under a different configuration", c.id);
        }
    }
    let pending: Vec<&WorkUnit> = units.iter().filter(|u| !have.contains_key(&u.id)).collect();
    log::info!("{} units, {} already recorded, {} to run", units.len(), have.len(), pending.len());

    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<ChunkCertificate>();
    let config = &campaign.config;
    let mut written: Vec<ChunkCertificate> = have.values().cloned().collect();
    thread::scope(|s| -> Result<()> {
        for _ in 0..workers.max(1).min(pending.len().max(1)) {
            let tx = tx.clone();
            let (next, pending) = (&next, &pending);
            s.spawn(move || {
                let mut ev: Option<(u32, Evaluator)> = None;
                loop {
                    let i = next.fetch_add(1, Ordering::SeqCst);
                    let Some(unit) = pending.get(i) else { break };
                    if ev.as_ref().map(|e| e.0) != Some(unit.prec) {
                        let policy = config.policy(unit.prec).expect("config validated at parse time");
                        ev = Some((unit.prec, Evaluator::new(policy)));
                    }
                    let e = &mut ev.as_mut().expect("just set").1;
                    let cert = match run_unit_with(unit, config, constants, e) {
                        Ok(c) => c,
                        Err(err) => {
                            log::error!("unit {} [{}, {}]: {err}", unit.id, unit.t_lo, unit.t_hi);
                            failed_certificate(unit, config, constants)
                        }
                    };
                    if tx.send(cert).is_err() {
                        break;
                    }
                }
            });
        }
        drop(tx);
        // Single writer, records in unit order so the file is independent of
        // scheduling.
        let mut buffer: BTreeMap<u64, ChunkCertificate> = BTreeMap::new();
        let mut order = pending.iter().map(|u| u.id);
        let mut want = order.next();
        for cert in rx {
            buffer.insert(cert.id, cert);
            while let Some(id) = want {
                let Some(c) = buffer.remove(&id) else { break };
                journal.append(&c)?;
                log::info!("unit {id}: {} zeros in ({}, {}] {:?}", c.zero_count, c.t_lo, c.t_hi, c.status);
                written.push(c);
                want = order.next();
            }
        }
        Ok(())
    })?;
    summarize(campaign, &written)
}
