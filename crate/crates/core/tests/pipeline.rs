mod common;

use common::ZEROS_BELOW_200;
use critline_core::certify::*;
use critline_core::orchestra::*;
use critline_core::rigor::Context;
use critline_core::zcount::*;
use critline_core::{Dyadic, Error};

fn validated(cx: &Context) -> ValidatedConstants {
    let windows = [(50.0, 120.0), (60.0, 190.0), (100.0, 180.0), (140.0, 199.0), (55.0, 70.0)];
    TuringConstants::TURING.validate(&ZEROS_BELOW_200, &windows, cx).unwrap()
}

fn d(x: i64) -> Dyadic {
    Dyadic::from_int(x)
}

#[test]
fn turing_at_one_hundred() {
    let mut ev = Evaluator::new(EvalPolicy::default());
    let consts = validated(ev.context());
    let t = d(100);
    let delta = d(60);
    let l = Lattice::new(t, t.checked_add(delta).unwrap(), Dyadic::new(1, -4), Dyadic::ZERO).unwrap();
    let w = scan_lattice(&l, &mut ev).unwrap();
    let cx = Context::new(64);
    let v = turing_certify(t, delta, &w, 29, &consts, &cx).unwrap();
    assert_eq!(v.status, VerdictStatus::CertifiedExact, "{v}");
    assert!(v.main_term.contains_f64(29.0) || (v.main_term.mid_f64() - 29.0).abs() < 1.0);
    let v = turing_certify(t, delta, &w, 28, &consts, &cx).unwrap();
    assert_eq!(v.status, VerdictStatus::Deficit(1));
    let gap = mean_gap(t, &cx).unwrap();
    let one_gap = Dyadic::floor_f64(gap, -8);
    assert!(matches!(
        turing_certify(t, one_gap, &w, 29, &consts, &cx),
        Err(Error::WindowTooShort { .. })
    ));
}

#[test]
fn unit_ten_to_hundred() {
    let cx = Context::new(64);
    let consts = validated(&cx);
    let cfg = RunConfig::default();
    let unit = WorkUnit {
        id: 1,
        t_lo: d(10),
        t_hi: d(100),
        step: unit_step(d(10), d(100), 12.0),
        prec: 64,
        state: UnitState::Pending,
    };
    let a = run_unit(&unit, &cfg, &consts).unwrap();
    assert_eq!(a.zero_count, 29);
    assert_eq!(a.status, CertStatus::Certified);
    let b = run_unit(&unit, &cfg, &consts).unwrap();
    assert_eq!(a.to_line(), b.to_line());

    let mut coarse = unit.clone();
    coarse.step = d(8);
    match run_unit(&coarse, &cfg, &consts) {
        Err(Error::CertificationFailed(v)) => {
            assert!(matches!(v.status, VerdictStatus::Failed(ref r) if r.contains("step")), "{v}")
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn split_at_fifty_stitches() {
    let cx = Context::new(64);
    let consts = validated(&cx);
    let cfg = RunConfig::default();
    let units = plan_units(d(100), d(50), 64).unwrap();
    let certs: Vec<_> = units.iter().map(|u| run_unit(u, &cfg, &consts).unwrap()).collect();
    assert_eq!(certs[0].zero_count, 10);
    assert_eq!(certs[1].zero_count, 19);
    let g = stitch(&certs).unwrap();
    assert_eq!((g.height, g.zeros), (d(100), 29));
}
