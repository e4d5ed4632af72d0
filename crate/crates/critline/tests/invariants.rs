//! Properties checked against the reference zero table on [10, 5000].

use critline::campaign::{self, Campaign};
use critline::oracle::{count_below, reference_zeros};
use critline_core::certify::{counting_main_term, stitch, TuringConstants};
use critline_core::orchestra::{plan_units, run_unit, RunConfig, WorkUnit};
use critline_core::rigor::{Ball, Context};
use critline_core::zcount::{refine, scan_lattice, EvalPolicy, Evaluator, Lattice};
use critline_core::Dyadic;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn zeros_in(lo: f64, hi: f64) -> usize {
    count_below(hi) - count_below(lo)
}

// Random interval in [10, 5000] with a step between gap/40 and gap/4.
fn random_lattice(rng: &mut ChaCha8Rng) -> (Dyadic, Dyadic, Dyadic) {
    let lo = Dyadic::floor_f64(rng.gen_range(10.0..4900.0), -8);
    let len = rng.gen_range(5.0..80.0);
    let hi = Dyadic::floor_f64((lo.to_f64() + len).min(5000.0), -8);
    let gap = 2.0 * std::f64::consts::PI / (hi.to_f64() / (2.0 * std::f64::consts::PI)).ln().max(1.0);
    let step = Dyadic::floor_f64(gap / rng.gen_range(4.0..40.0), -14);
    (lo, hi, step)
}

#[test]
fn undercount_safety_and_jitter() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut ev = Evaluator::new(EvalPolicy::default());
    for _ in 0..40 {
        let (lo, hi, step) = random_lattice(&mut rng);
        let a = scan_lattice(&Lattice::new(lo, hi, step, Dyadic::ZERO).unwrap(), &mut ev).unwrap();
        let third = Dyadic::floor_f64(step.to_f64() / 3.0, -30);
        let b = scan_lattice(&Lattice::new(lo, hi, step, third).unwrap(), &mut ev).unwrap();
        let (l, h, s) = (lo.to_f64(), hi.to_f64(), step.to_f64());
        let truth = zeros_in(l, h);
        assert!(a.changes() <= truth, "[{l}, {h}) step {s}: {} > {truth}", a.changes());
        assert!(b.changes() <= truth);
        let edge = zeros_in(l, l + s) + zeros_in(h - s, h);
        assert!(a.changes().abs_diff(b.changes()) <= edge, "[{l}, {h}) step {s}: {} vs {}", a.changes(), b.changes());
    }
}

#[test]
fn refinement_never_loses_changes() {
    let mut ev = Evaluator::new(EvalPolicy::default());
    let step = Dyadic::new(3, -3);
    let l = Lattice::new(Dyadic::from_int(4000), Dyadic::from_int(4040), step, Dyadic::ZERO).unwrap();
    let mut seq = scan_lattice(&l, &mut ev).unwrap();
    let truth = zeros_in(4000.0, 4040.0);
    let mut last = seq.changes();
    for _ in 0..12 {
        let want = truth.saturating_sub(seq.changes());
        let _ = refine(&mut seq, &mut ev, 4, want);
        assert!(seq.changes() >= last);
        assert!(seq.changes() <= truth);
        last = seq.changes();
    }
}

#[test]
fn certified_counts_match_reference() {
    let constants = critline::oracle::validate(TuringConstants::TURING).unwrap();
    let cfg = RunConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for id in 1..=6 {
        let lo = Dyadic::from_int(rng.gen_range(60..4800));
        let hi = lo.checked_add(Dyadic::from_int(rng.gen_range(20..200))).unwrap().min(Dyadic::from_int(5000));
        let unit = WorkUnit {
            id,
            t_lo: lo,
            t_hi: hi,
            step: critline_core::orchestra::unit_step(lo, hi, cfg.samples_per_gap),
            prec: cfg.prec,
            state: critline_core::orchestra::UnitState::Pending,
        };
        let c = run_unit(&unit, &cfg, &constants).unwrap();
        assert_eq!(c.zero_count as usize, zeros_in(lo.to_f64(), hi.to_f64()), "[{lo}, {hi}]");
    }
}

#[test]
fn argument_term_is_small() {
    let cx = Context::new(64);
    let z = reference_zeros();
    let mut t = 10.0;
    while t < 5000.0 {
        // Skip heights within 1e-6 of a zero, where N jumps.
        if z.iter().all(|g| (g - t).abs() > 1e-6) {
            let s = count_below(t) as f64 - counting_main_term(&Ball::from_f64(t), &cx).unwrap().mid_f64();
            assert!(s.abs() < 3.0, "S({t}) = {s}");
        }
        t += 0.731;
    }
}

#[test]
fn order_and_concurrency_do_not_matter() {
    let dir = tempfile::tempdir().unwrap();
    let c = Campaign { height: Dyadic::from_int(1200), unit_length: Dyadic::from_int(150), config: RunConfig::default() };
    let one = campaign::run(&dir.path().join("one.rhc"), &c, 1).unwrap();
    let three = campaign::run(&dir.path().join("three.rhc"), &c, 3).unwrap();
    assert_eq!(one.global, three.global);
    assert_eq!(std::fs::read(dir.path().join("one.rhc")).unwrap(), std::fs::read(dir.path().join("three.rhc")).unwrap());
    assert_eq!(one.global.as_ref().unwrap().zeros as usize, count_below(1200.0));

    let constants = critline::oracle::validate(TuringConstants::TURING).unwrap();
    let mut units = plan_units(c.height, c.unit_length, 64).unwrap();
    units.reverse();
    let mut certs: Vec<_> = units.iter().map(|u| run_unit(u, &c.config, &constants).unwrap()).collect();
    certs.sort_by_key(|c| c.t_lo);
    assert_eq!(stitch(&certs).ok(), one.global);
}
