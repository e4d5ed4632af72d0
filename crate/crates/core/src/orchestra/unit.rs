//! Work units and the per-unit pipeline: scan, refine, certify.

use alloc::string::ToString;
use alloc::vec::Vec;

use super::config::RunConfig;
use crate::certify::{
    counting_main_term, turing_certify, turing_lower_bound, CertStatus, ChunkCertificate, TuringVerdict,
    ValidatedConstants, VerdictStatus,
};
use crate::dyadic::Dyadic;
use crate::error::Error;
use crate::rigor::Prec;
use crate::zcount::{refine, sample_exact, scan_lattice, Evaluator, Lattice, SignSequence};

/// Lower Turing windows must start at or above this height; below it the
/// count from 0 is used instead.
pub const LOWER_WINDOW_FLOOR: f64 = 50.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnitState {
    Pending,
    Running,
    Done,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorkUnit {
    /// 1-based sequence number.
    pub id: u64,
    pub t_lo: Dyadic,
    pub t_hi: Dyadic,
    pub step: Dyadic,
    pub prec: Prec,
    pub state: UnitState,
}

/// Approximate mean zero gap 2π/log(t/2π), taken at t >= 20.
fn rough_gap(t: f64) -> f64 {
    let t = t.max(20.0);
    2.0 * core::f64::consts::PI / libm::log(t / (2.0 * core::f64::consts::PI))
}

/// Step of about `samples_per_gap` samples per mean gap at the unit's
/// midpoint, rounded down onto the 2^-12 grid.
pub fn unit_step(t_lo: Dyadic, t_hi: Dyadic, samples_per_gap: f64) -> Dyadic {
    let mid = 0.5 * (t_lo.to_f64() + t_hi.to_f64());
    let s = Dyadic::floor_f64(rough_gap(mid) / samples_per_gap, -12);
    if s.is_positive() {
        s
    } else {
        Dyadic::new(1, -12)
    }
}

/// Abutting units covering `(0, t_max]`, the last one truncated.
pub fn plan_units(t_max: Dyadic, unit_length: Dyadic, prec: Prec) -> Result<Vec<WorkUnit>, Error> {
    plan_units_with(t_max, unit_length, prec, RunConfig::default().samples_per_gap)
}

pub fn plan_units_with(
    t_max: Dyadic,
    unit_length: Dyadic,
    prec: Prec,
    samples_per_gap: f64,
) -> Result<Vec<WorkUnit>, Error> {
    if !t_max.is_positive() || !unit_length.is_positive() {
        return Err(Error::InvalidParameters("T_max and unit_length must be positive"));
    }
    let mut units = Vec::new();
    let mut lo = Dyadic::ZERO;
    while lo < t_max {
        let hi = lo.checked_add(unit_length)?.min(t_max);
        units.push(WorkUnit {
            id: units.len() as u64 + 1,
            t_lo: lo,
            t_hi: hi,
            step: unit_step(lo, hi, samples_per_gap),
            prec,
            state: UnitState::Pending,
        });
        lo = hi;
    }
    Ok(units)
}

// Multiple of `step` covering `gaps` mean gaps at `t`.
fn window(t: Dyadic, step: Dyadic, gaps: f64) -> Result<Dyadic, Error> {
    let n = libm::ceil(gaps * rough_gap(t.to_f64()) / step.to_f64()) as i64;
    step.checked_mul_int(n.max(1))
}

fn failed(unit: &WorkUnit, reason: &Error, ev: &mut Evaluator) -> Error {
    let main_term = counting_main_term(&unit.t_hi.to_ball(), ev.context()).unwrap_or_default();
    TuringVerdict {
        t: unit.t_hi,
        observed: 0,
        main_term,
        upper: 0,
        status: VerdictStatus::Failed(reason.to_string()),
        window: (unit.t_hi, unit.t_hi),
    }
    .into_error()
}

/// How N(t_lo) is bounded from below.
enum Base {
    Zero,
    Window(Dyadic),
    Scan,
}

/// Run one unit to a certificate. Deterministic given `(unit, config)`.
///
/// Errors with `CertificationFailed` when Turing's method cannot confirm
/// the count within the refinement budget.
pub fn run_unit(
    unit: &WorkUnit,
    config: &RunConfig,
    constants: &ValidatedConstants,
) -> Result<ChunkCertificate, Error> {
    let mut ev = Evaluator::new(config.policy(unit.prec)?);
    run_unit_with(unit, config, constants, &mut ev)
}

/// As [`run_unit`], reusing an evaluator whose policy matches the unit.
pub fn run_unit_with(
    unit: &WorkUnit,
    config: &RunConfig,
    constants: &ValidatedConstants,
    ev: &mut Evaluator,
) -> Result<ChunkCertificate, Error> {
    ev.reset_stats();
    match certify_unit(unit, config, constants, ev) {
        Ok(c) => Ok(c),
        Err(e @ Error::CertificationFailed(_)) => Err(e),
        Err(e) => Err(failed(unit, &e, ev)),
    }
}

fn certify_unit(
    unit: &WorkUnit,
    config: &RunConfig,
    constants: &ValidatedConstants,
    ev: &mut Evaluator,
) -> Result<ChunkCertificate, Error> {
    let (t_lo, t_hi, step) = (unit.t_lo, unit.t_hi, unit.step);
    if t_lo >= t_hi || !step.is_positive() {
        return Err(Error::InvalidParameters("malformed work unit"));
    }
    let d_hi = window(t_hi, step, config.window_gaps)?;
    let d_lo = window(t_lo, step, config.window_gaps)?;
    let base = if t_lo.is_zero() {
        Base::Zero
    } else if t_lo.to_f64() - d_lo.to_f64() >= LOWER_WINDOW_FLOOR {
        Base::Window(d_lo)
    } else {
        Base::Scan
    };
    let start = match base {
        Base::Zero => Dyadic::ZERO,
        Base::Window(d) => t_lo.checked_sub(d)?,
        // Aligned with t_lo so that t_lo is itself a lattice point.
        Base::Scan => t_lo.checked_sub(step.checked_mul_int(t_lo.div_floor(step)?)?)?,
    };
    let end = t_hi.checked_add(d_hi)?.checked_add(step)?;
    let lattice = Lattice::new(start, end, step, Dyadic::ZERO)?;
    let mut seq: SignSequence = scan_lattice(&lattice, ev)?;
    for b in [t_lo, t_hi] {
        if b.is_positive() {
            let s = sample_exact(b, ev)?;
            if !s.sign.is_determinate() {
                return Err(Error::IndeterminateSigns(1));
            }
            seq.insert(s);
        }
    }

    let mut budget = config.refine_budget;
    if seq.indeterminates() > 0 {
        let before = ev.evaluations();
        refine(&mut seq, ev, budget, 0)?;
        budget = budget.saturating_sub(ev.evaluations() - before);
    }
    loop {
        let lower = match base {
            Base::Zero => 0,
            Base::Window(d) => turing_lower_bound(t_lo, d, &seq, constants, ev.context())?,
            Base::Scan => seq.changes_in(Dyadic::ZERO, t_lo) as u64,
        };
        let count = seq.changes_in(t_lo, t_hi) as u64;
        let verdict = turing_certify(t_hi, d_hi, &seq, lower + count, constants, ev.context())?;
        match verdict.status {
            VerdictStatus::CertifiedExact => {
                return Ok(ChunkCertificate {
                    id: unit.id,
                    t_lo,
                    t_hi,
                    step,
                    zero_count: count,
                    prec_bits: ev.max_prec(),
                    constants: constants.constants(),
                    config_hash: config.hash(),
                    status: CertStatus::Certified,
                });
            }
            VerdictStatus::Deficit(k) if budget > 0 => {
                let before = ev.evaluations();
                let r = refine(&mut seq, ev, budget, k as usize);
                budget = budget.saturating_sub(ev.evaluations() - before);
                if let Err(Error::BudgetExhausted(_)) = r {
                    return Err(verdict.into_error());
                }
                r?;
            }
            _ => return Err(verdict.into_error()),
        }
    }
}

/// A FAILED certificate recording what was observed for a unit.
pub fn failed_certificate(unit: &WorkUnit, config: &RunConfig, constants: &ValidatedConstants) -> ChunkCertificate {
    ChunkCertificate {
        id: unit.id,
        t_lo: unit.t_lo,
        t_hi: unit.t_hi,
        step: unit.step,
        zero_count: 0,
        prec_bits: unit.prec,
        constants: constants.constants(),
        config_hash: config.hash(),
        status: CertStatus::Failed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn units(t: i64, l: i64) -> Vec<(i64, i64)> {
        plan_units(Dyadic::from_int(t), Dyadic::from_int(l), 64)
            .unwrap()
            .iter()
            .map(|u| (u.t_lo.to_f64() as i64, u.t_hi.to_f64() as i64))
            .collect()
    }

    #[test]
    fn planning() {
        assert_eq!(units(100, 50), vec![(0, 50), (50, 100)]);
        assert_eq!(units(100, 40), vec![(0, 40), (40, 80), (80, 100)]);
        assert!(plan_units(Dyadic::ZERO, Dyadic::from_int(50), 64).is_err());
        let u = plan_units(Dyadic::from_int(100), Dyadic::from_int(40), 64).unwrap();
        assert_eq!(u.iter().map(|u| u.id).collect::<Vec<_>>(), vec![1, 2, 3]);
        assert!(u.iter().all(|u| u.state == UnitState::Pending && u.step.is_positive()));
    }
}
