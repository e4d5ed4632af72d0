//! Quick checks against the reference table and a random containment harness.

use std::fmt;

use critline_core::certify::TuringConstants;
use critline_core::orchestra::{plan_units_with, run_unit, RunConfig};
use critline_core::rigor::{Ball, Context, ElemFn, Float, Mag, Prec};
use critline_core::special::RemainderTable;
use critline_core::zcount::{z_euler_maclaurin, z_riemann_siegel, DEFAULT_COST_CAP};
use critline_core::Dyadic;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::oracle;

/// Working precisions exercised by the containment harness.
pub const CONTAINMENT_PRECS: [Prec; 4] = [53, 64, 96, 128];

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ContainmentReport {
    pub ops: u64,
    pub domain_skips: u64,
    pub violations: u64,
    pub first_violation: Option<String>,
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Sqrt,
    Exp,
    Log,
    Sin,
    Cos,
    Atan,
    Pow,
}

const OPS: [Op; 11] =
    [Op::Add, Op::Sub, Op::Mul, Op::Div, Op::Sqrt, Op::Exp, Op::Log, Op::Sin, Op::Cos, Op::Atan, Op::Pow];

// Midpoint with up to ~110 significant bits.
fn random_mid(rng: &mut ChaCha8Rng, lo_exp: i32, hi_exp: i32, positive: bool) -> Float {
    let e = rng.gen_range(lo_exp..=hi_exp);
    let mut x = rng.gen_range(0.5..1.0) * 2f64.powi(e);
    if !positive && rng.gen_bool(0.5) {
        x = -x;
    }
    let tail = rng.gen_range(-1.0..1.0) * 2f64.powi(e - 55);
    Float::from_f64(x).add_exact(&Float::from_f64(tail))
}

fn random_ball(rng: &mut ChaCha8Rng, lo_exp: i32, hi_exp: i32, positive: bool) -> Ball {
    let mid = random_mid(rng, lo_exp, hi_exp, positive);
    let rad = match rng.gen_range(0..3) {
        0 => 0.0,
        1 => mid.to_f64().abs() * 2f64.powi(-rng.gen_range(20..100)),
        _ => mid.to_f64().abs() * 2f64.powi(-rng.gen_range(3..20)),
    };
    Ball::new(mid, Mag::from_f64_up(rad))
}

// An exact point of `b`.
fn point_in(rng: &mut ChaCha8Rng, b: &Ball) -> Float {
    let r = b.rad().get();
    if r == 0.0 || !r.is_finite() {
        return b.mid().clone();
    }
    let u = rng.gen_range(-1.0..1.0) * (1.0 - 2f64.powi(-20));
    b.mid().add_exact(&Float::from_f64(u * r))
}

fn operands(rng: &mut ChaCha8Rng, op: Op) -> (Ball, Ball) {
    match op {
        Op::Add | Op::Sub | Op::Mul => (random_ball(rng, -40, 40, false), random_ball(rng, -40, 40, false)),
        Op::Div => (random_ball(rng, -30, 30, false), random_ball(rng, -30, 30, false)),
        Op::Sqrt | Op::Log => (random_ball(rng, -30, 30, true), Ball::zero()),
        Op::Exp => (random_ball(rng, -20, 5, false), Ball::zero()),
        Op::Sin | Op::Cos => (random_ball(rng, -20, 14, false), Ball::zero()),
        Op::Atan => (random_ball(rng, -20, 20, false), Ball::zero()),
        Op::Pow => (random_ball(rng, -10, 10, true), random_ball(rng, -6, 2, false)),
    }
}

fn apply(op: Op, cx: &Context, a: &Ball, b: &Ball) -> Option<Ball> {
    let r = match op {
        Op::Add => Ok(cx.add(a, b)),
        Op::Sub => Ok(cx.sub(a, b)),
        Op::Mul => Ok(cx.mul(a, b)),
        Op::Div => cx.div(a, b),
        Op::Sqrt => cx.elem(&ElemFn::Sqrt, a),
        Op::Exp => cx.elem(&ElemFn::Exp, a),
        Op::Log => cx.elem(&ElemFn::Log, a),
        Op::Sin => cx.elem(&ElemFn::Sin, a),
        Op::Cos => cx.elem(&ElemFn::Cos, a),
        Op::Atan => cx.elem(&ElemFn::Atan, a),
        Op::Pow => cx.elem(&ElemFn::PowReal(b.clone()), a),
    };
    r.ok()
}

/// Run `ops` random kernel operations; each output must contain the same
/// operation evaluated at four times the precision on a point of the inputs.
pub fn containment(ops: u64, seed: u64) -> ContainmentReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let work: Vec<Context> = CONTAINMENT_PRECS.iter().map(|&p| Context::new(p)).collect();
    let reference: Vec<Context> = CONTAINMENT_PRECS.iter().map(|&p| Context::new(4 * p)).collect();
    let mut rep = ContainmentReport::default();
    for _ in 0..ops {
        let op = OPS[rng.gen_range(0..OPS.len())];
        let k = rng.gen_range(0..CONTAINMENT_PRECS.len());
        let (a, b) = operands(&mut rng, op);
        rep.ops += 1;
        let Some(out) = apply(op, &work[k], &a, &b) else {
            rep.domain_skips += 1;
            continue;
        };
        let x = Ball::exact(point_in(&mut rng, &a));
        let y = Ball::exact(point_in(&mut rng, &b));
        let Some(fine) = apply(op, &reference[k], &x, &y) else {
            rep.domain_skips += 1;
            continue;
        };
        if !out.contains(&fine) {
            rep.violations += 1;
            if rep.first_violation.is_none() {
                rep.first_violation = Some(format!(
                    "{op:?} at {} bits: a={:?} b={:?} out={:?} ref={:?}",
                    CONTAINMENT_PRECS[k], a, b, out, fine
                ));
            }
        }
    }
    rep
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

/// Maximum |EM - RS| over `points` random heights in `[lo, hi]`, and whether
/// every pair of balls overlapped.
pub fn em_rs_agreement(points: usize, lo: f64, hi: f64, seed: u64) -> (bool, f64, usize) {
    let cx = Context::new(64);
    let table = RemainderTable::gabcke();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0f64;
    let mut disagreements = 0;
    for _ in 0..points {
        let t = Dyadic::floor_f64(rng.gen_range(lo..hi), -20).to_ball();
        let (Ok(em), Ok(rs)) = (z_euler_maclaurin(&t, &cx, DEFAULT_COST_CAP), z_riemann_siegel(&t, &cx, 3, &table))
        else {
            disagreements += 1;
            continue;
        };
        if !em.overlaps(&rs) {
            disagreements += 1;
        }
        worst = worst.max((em.mid_f64() - rs.mid_f64()).abs());
    }
    (disagreements == 0, worst, disagreements)
}

/// The quick suite behind `critline selftest`.
pub fn run_all() -> Vec<Check> {
    let mut out = Vec::new();

    let rep = containment(20_000, 0x5eed);
    out.push(check(
        "containment",
        rep.violations == 0,
        format!("{} ops, {} domain skips, {} violations", rep.ops, rep.domain_skips, rep.violations),
    ));

    let v = oracle::validate(TuringConstants::TURING);
    out.push(check(
        "turing-constants",
        v.is_ok(),
        match &v {
            Ok(c) => format!("a = {}, b = {} hold on {} windows", c.constants().a, c.constants().b, c.windows()),
            Err(e) => e.to_string(),
        },
    ));

    let (ok, worst, bad) = em_rs_agreement(20, 200.0, 5000.0, 0xa9);
    out.push(check("em-rs-agreement", ok, format!("20 heights, max |diff| {worst:.3e}, {bad} disagreements")));

    let counted = match &v {
        Ok(c) => {
            let cfg = RunConfig::default();
            let units = plan_units_with(Dyadic::from_int(200), Dyadic::from_int(100), cfg.prec, cfg.samples_per_gap);
            units.map_err(|e| e.to_string()).and_then(|us| {
                us.iter()
                    .map(|u| run_unit(u, &cfg, c).map(|c| c.zero_count).map_err(|e| e.to_string()))
                    .sum::<Result<u64, String>>()
            })
        }
        Err(e) => Err(e.to_string()),
    };
    let want = oracle::count_below(200.0) as u64;
    out.push(check(
        "count-to-200",
        counted.as_ref() == Ok(&want),
        match counted {
            Ok(n) => format!("certified {n}, reference {want}"),
            Err(e) => e,
        },
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn containment_small() {
        let r = containment(3000, 1);
        assert_eq!(r.violations, 0, "{:?}", r.first_violation);
        assert!(r.domain_skips < r.ops / 4);
    }
}
