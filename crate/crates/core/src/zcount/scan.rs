//! Sign certification on lattices and local refinement.

use alloc::vec::Vec;

use super::em::{z_euler_maclaurin, DEFAULT_COST_CAP};
use super::lattice::Lattice;
use super::rs::{z_riemann_siegel_cached, RsCache};
use crate::dyadic::Dyadic;
use crate::error::Error;
use crate::rigor::{Ball, Context, Prec, Sign};
use crate::special::{rs_theta_deriv, RemainderTable};

/// Which evaluator to use where, and how hard to try.
#[derive(Clone, Debug)]
pub struct EvalPolicy {
    /// Euler–Maclaurin strictly below this height, Riemann–Siegel above.
    pub switch_height: f64,
    /// Every this many lattice points (by index) are evaluated both ways.
    pub cross_check_every: u64,
    /// Precision ladder tried in order while a sign is indeterminate.
    pub ladder: Vec<Prec>,
    pub rs_terms: usize,
    pub remainder: RemainderTable,
    pub cost_cap: u64,
    /// A lattice step may not exceed this fraction of the mean zero gap.
    pub max_step_fraction: f64,
    /// Same-sign pairs with both |Z| below this are refined first.
    pub smallness: f64,
}

impl Default for EvalPolicy {
    fn default() -> EvalPolicy {
        EvalPolicy {
            switch_height: 500.0,
            cross_check_every: 1000,
            ladder: alloc::vec![64, 128, 256],
            rs_terms: 3,
            remainder: RemainderTable::gabcke(),
            cost_cap: DEFAULT_COST_CAP,
            max_step_fraction: 0.5,
            smallness: 0.25,
        }
    }
}

/// A certified sign at one point with a coarse summary of the enclosure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub t: Dyadic,
    pub sign: Sign,
    pub mid: f64,
    pub rad: f64,
}

impl Sample {
    /// Upper bound on |Z| used only for refinement ordering.
    pub fn abs_hint(&self) -> f64 {
        libm::fabs(self.mid) + self.rad
    }
}

/// Z evaluation under a policy, with per-precision contexts kept warm.
pub struct Evaluator {
    policy: EvalPolicy,
    contexts: Vec<(Prec, Context, RsCache)>,
    max_prec: Prec,
    evaluations: u64,
}

impl Evaluator {
    pub fn new(policy: EvalPolicy) -> Evaluator {
        Evaluator { policy, contexts: Vec::new(), max_prec: 0, evaluations: 0 }
    }

    pub fn policy(&self) -> &EvalPolicy {
        &self.policy
    }

    /// Highest precision any evaluation needed so far.
    pub fn max_prec(&self) -> Prec {
        self.max_prec
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn reset_stats(&mut self) {
        self.max_prec = 0;
        self.evaluations = 0;
    }

    fn slot(&mut self, prec: Prec) -> usize {
        if let Some(i) = self.contexts.iter().position(|c| c.0 == prec) {
            return i;
        }
        self.contexts.push((prec, Context::new(prec), RsCache::new()));
        self.contexts.len() - 1
    }

    /// Context at the base precision of the ladder.
    pub fn context(&mut self) -> &Context {
        let p = self.policy.ladder.first().copied().unwrap_or(64);
        let i = self.slot(p);
        &self.contexts[i].1
    }

    fn euler_maclaurin(&mut self, t: &Ball, prec: Prec) -> Result<Ball, Error> {
        let i = self.slot(prec);
        self.evaluations += 1;
        z_euler_maclaurin(t, &self.contexts[i].1, self.policy.cost_cap)
    }

    fn riemann_siegel(&mut self, t: &Ball, prec: Prec) -> Result<Ball, Error> {
        let i = self.slot(prec);
        self.evaluations += 1;
        let (_, cx, cache) = &mut self.contexts[i];
        z_riemann_siegel_cached(t, cx, self.policy.rs_terms, &self.policy.remainder, cache)
    }

    /// Z(t) by the policy's evaluator, and whether that was Riemann–Siegel.
    fn z_policy(&mut self, t: &Ball, prec: Prec) -> Result<(Ball, bool), Error> {
        if t.lower_f64() >= self.policy.switch_height {
            match self.riemann_siegel(t, prec) {
                Ok(z) => return Ok((z, true)),
                Err(Error::AmbiguousMainSum | Error::BelowValidityFloor { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        Ok((self.euler_maclaurin(t, prec)?, false))
    }

    /// Both evaluators at `t`; errors if their enclosures are disjoint.
    pub fn cross_check(&mut self, t: Dyadic) -> Result<(), Error> {
        let prec = self.policy.ladder.first().copied().unwrap_or(64);
        let tb = t.to_ball();
        let rs = match self.riemann_siegel(&tb, prec) {
            Ok(z) => z,
            Err(Error::AmbiguousMainSum | Error::BelowValidityFloor { .. }) => return Ok(()),
            Err(e) => return Err(e),
        };
        let em = self.euler_maclaurin(&tb, prec)?;
        if rs.overlaps(&em) {
            Ok(())
        } else {
            Err(Error::EvaluatorDisagreement(t))
        }
    }

    fn ladder_at(&mut self, t: Dyadic) -> Result<Sample, Error> {
        let tb = t.to_ball();
        let ladder = self.policy.ladder.clone();
        let mut last = None;
        for prec in ladder {
            self.max_prec = self.max_prec.max(prec);
            let (z, was_rs) = self.z_policy(&tb, prec)?;
            let mut best = z;
            if !best.sign().is_determinate() && was_rs {
                // The RS radius is mostly truncation; more bits will not help.
                best = self.euler_maclaurin(&tb, prec)?;
            }
            let s = Sample { t, sign: best.sign(), mid: best.mid_f64(), rad: best.rad().get() };
            if s.sign.is_determinate() {
                return Ok(s);
            }
            last = Some(s);
        }
        Ok(last.unwrap_or(Sample { t, sign: Sign::Indeterminate, mid: 0.0, rad: f64::INFINITY }))
    }

    /// Certified sign at `t`, dodging to `t + jitter` if the ladder fails.
    pub fn sample(&mut self, t: Dyadic, jitter: Dyadic) -> Result<Sample, Error> {
        let s = self.ladder_at(t)?;
        if s.sign.is_determinate() || jitter.is_zero() {
            return Ok(s);
        }
        self.ladder_at(t.checked_add(jitter)?)
    }

    /// Largest admissible lattice step at height `t`.
    pub fn step_limit(&mut self, t: Dyadic) -> Result<f64, Error> {
        let frac = self.policy.max_step_fraction;
        let gap = mean_gap(t, self.context())?;
        Ok(frac * gap)
    }
}

/// Mean zero spacing π/θ'(t), evaluated no lower than t = 20.
pub fn mean_gap(t: Dyadic, cx: &Context) -> Result<f64, Error> {
    let t = t.max(Dyadic::from_int(20));
    let d = rs_theta_deriv(&t.to_ball(), cx)?;
    let g = cx.pi().div(&d, cx.prec())?;
    Ok(g.lower_f64())
}

/// Default step: about 12 samples per mean gap at the midpoint, on a 2^-12 grid.
pub fn default_step(t_lo: Dyadic, t_hi: Dyadic, cx: &Context) -> Result<Dyadic, Error> {
    let mid = t_lo.midpoint(t_hi)?;
    let target = mean_gap(mid, cx)? / 12.0;
    let s = Dyadic::floor_f64(target, -12);
    Ok(if s.is_positive() { s } else { Dyadic::new(1, -12) })
}

// Jitter applied to a point whose sign stays indeterminate: 9/64 of a step.
fn jitter_for(step: Dyadic) -> Dyadic {
    step.checked_mul_int(9).map(|d| d.mul_2exp(-6)).unwrap_or(Dyadic::ZERO)
}

/// Ordered certified signs over a lattice, plus any points inserted later.
#[derive(Clone, Debug, PartialEq)]
pub struct SignSequence {
    pub lattice: Lattice,
    samples: Vec<Sample>,
}

impl SignSequence {
    pub fn new(lattice: Lattice) -> SignSequence {
        SignSequence { lattice, samples: Vec::new() }
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn signs(&self) -> impl Iterator<Item = Sign> + '_ {
        self.samples.iter().map(|s| s.sign)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Insert keeping `t` sorted. A determinate sample replaces an
    /// indeterminate one at the same point; nothing else is overwritten.
    pub fn insert(&mut self, s: Sample) {
        match self.samples.binary_search_by(|x| x.t.cmp(&s.t)) {
            Ok(i) => {
                if !self.samples[i].sign.is_determinate() && s.sign.is_determinate() {
                    self.samples[i] = s;
                }
            }
            Err(i) => self.samples.insert(i, s),
        }
    }

    /// Append a sample beyond the current last point.
    pub fn push(&mut self, s: Sample) {
        debug_assert!(self.samples.last().map_or(true, |l| l.t < s.t));
        self.samples.push(s);
    }

    fn remove_indeterminate(&mut self, i: usize) {
        if !self.samples[i].sign.is_determinate() {
            self.samples.remove(i);
        }
    }

    /// Adjacent sample pairs whose certified signs differ.
    pub fn transitions(&self) -> impl Iterator<Item = (Dyadic, Dyadic)> + '_ {
        self.samples
            .windows(2)
            .filter(|w| w[0].sign.opposes(w[1].sign))
            .map(|w| (w[0].t, w[1].t))
    }

    pub fn changes(&self) -> usize {
        self.transitions().count()
    }

    /// Transitions with both samples in `[lo, hi]`.
    pub fn changes_in(&self, lo: Dyadic, hi: Dyadic) -> usize {
        self.transitions().filter(|&(a, b)| a >= lo && b <= hi).count()
    }

    pub fn indeterminates(&self) -> usize {
        self.samples.iter().filter(|s| !s.sign.is_determinate()).count()
    }

    pub fn indeterminates_in(&self, lo: Dyadic, hi: Dyadic) -> usize {
        self.samples.iter().filter(|s| !s.sign.is_determinate() && s.t >= lo && s.t <= hi).count()
    }

    /// Sub-sequence of samples in `[lo, hi]`, keeping the lattice.
    pub fn restrict(&self, lo: Dyadic, hi: Dyadic) -> SignSequence {
        SignSequence {
            lattice: self.lattice,
            samples: self.samples.iter().filter(|s| s.t >= lo && s.t <= hi).copied().collect(),
        }
    }
}

/// Certified signs of Z at every lattice point.
pub fn scan_lattice(lattice: &Lattice, ev: &mut Evaluator) -> Result<SignSequence, Error> {
    let mut seq = SignSequence::new(*lattice);
    if lattice.is_empty() {
        return Ok(seq);
    }
    let limit = ev.step_limit(lattice.t_hi())?;
    let step = lattice.step().to_f64();
    if step > limit {
        return Err(Error::StepTooCoarse { step, limit });
    }
    let jitter = jitter_for(lattice.step());
    let every = ev.policy().cross_check_every.max(1);
    let rs_floor = ev.policy().remainder.rows().first().map_or(f64::INFINITY, |r| r.floor);
    for (k, t) in lattice.points().enumerate() {
        if k as u64 % every == every - 1 && t.to_f64() >= rs_floor {
            ev.cross_check(t)?;
        }
        if !t.is_positive() {
            continue;
        }
        seq.push(ev.sample(t, jitter)?);
    }
    Ok(seq)
}

/// Sample at a point `t` given its own value; used for chunk endpoints.
pub fn sample_exact(t: Dyadic, ev: &mut Evaluator) -> Result<Sample, Error> {
    ev.sample(t, Dyadic::ZERO)
}

// Same-sign pairs (by index) ordered by how likely they hide a zero pair:
// pairs with both ends small come first, then by |Z| per unit width.
fn candidates(seq: &SignSequence, smallness: f64, min_width: Dyadic) -> Vec<usize> {
    let s = &seq.samples;
    let mut c: Vec<(bool, f64, usize)> = Vec::new();
    for i in 0..s.len().saturating_sub(1) {
        let (a, b) = (&s[i], &s[i + 1]);
        if a.sign != b.sign || !a.sign.is_determinate() {
            continue;
        }
        let w = b.t.checked_sub(a.t).map(Dyadic::to_f64).unwrap_or(0.0);
        if w <= min_width.to_f64() {
            continue;
        }
        let m = a.abs_hint().max(b.abs_hint());
        c.push((m >= smallness, m / w, i));
    }
    c.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)).then(x.2.cmp(&y.2)));
    c.into_iter().map(|x| x.2).collect()
}

/// Resolve indeterminate samples and hunt for `target` extra sign changes.
///
/// Spends at most `budget` evaluations; certified samples are never removed.
/// On failure the sequence keeps whatever progress was made.
pub fn refine(seq: &mut SignSequence, ev: &mut Evaluator, budget: u64, target: usize) -> Result<(), Error> {
    let start = seq.changes();
    let mut spent = 0u64;
    let min_width = seq.lattice.step().mul_2exp(-8);

    // Indeterminate points: try nearby points inside the neighbouring gaps.
    let mut i = 0;
    while i < seq.samples.len() {
        if seq.samples[i].sign.is_determinate() {
            i += 1;
            continue;
        }
        let t = seq.samples[i].t;
        let prev = if i > 0 { seq.samples[i - 1].t } else { t.checked_sub(seq.lattice.step())? };
        let next = seq.samples.get(i + 1).map_or(t.checked_add(seq.lattice.step())?, |s| s.t);
        let gap = t.checked_sub(prev)?.min(next.checked_sub(t)?);
        let mut resolved = false;
        for k in 2..6 {
            let d = gap.mul_2exp(-k);
            for cand in [t.checked_sub(d)?, t.checked_add(d)?] {
                if spent >= budget {
                    return Err(Error::BudgetExhausted(alloc::vec![(prev, next)]));
                }
                spent += 1;
                let s = ev.sample(cand, Dyadic::ZERO)?;
                if s.sign.is_determinate() {
                    seq.remove_indeterminate(i);
                    seq.insert(s);
                    resolved = true;
                    break;
                }
            }
            if resolved {
                break;
            }
        }
        if !resolved {
            i += 1;
        }
    }
    if seq.indeterminates() > 0 {
        let left: Vec<(Dyadic, Dyadic)> =
            seq.samples.iter().filter(|s| !s.sign.is_determinate()).map(|s| (s.t, s.t)).collect();
        return Err(Error::BudgetExhausted(left));
    }

    let smallness = ev.policy().smallness;
    while seq.changes() < start + target {
        let cand = candidates(seq, smallness, min_width);
        let Some(&i) = cand.first() else {
            return Err(Error::BudgetExhausted(Vec::new()));
        };
        if spent >= budget {
            let open = cand.iter().take(16).map(|&j| (seq.samples[j].t, seq.samples[j + 1].t)).collect();
            return Err(Error::BudgetExhausted(open));
        }
        spent += 1;
        let m = seq.samples[i].t.midpoint(seq.samples[i + 1].t)?;
        let s = ev.sample(m, Dyadic::ZERO)?;
        if s.sign.is_determinate() {
            seq.insert(s);
        } else {
            // Leave the point out; its neighbours stay as they were.
            let q = seq.samples[i].t.midpoint(m)?;
            spent += 1;
            let s = ev.sample(q, Dyadic::ZERO)?;
            if s.sign.is_determinate() {
                seq.insert(s);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(x: f64) -> Dyadic {
        Dyadic::from_f64(x).unwrap()
    }

    #[test]
    fn first_zeros() {
        let mut ev = Evaluator::new(EvalPolicy::default());
        let l = Lattice::new(d(10.0), d(30.0), d(0.0625), Dyadic::ZERO).unwrap();
        let seq = scan_lattice(&l, &mut ev).unwrap();
        assert_eq!(seq.len(), 320);
        assert_eq!(seq.changes(), 3);
        assert_eq!(seq.indeterminates(), 0);
        let l = Lattice::new(d(0.5), d(5.0), d(0.125), Dyadic::ZERO).unwrap();
        assert_eq!(scan_lattice(&l, &mut ev).unwrap().changes(), 0);
    }

    #[test]
    fn coarse_step_rejected() {
        let mut ev = Evaluator::new(EvalPolicy::default());
        let l = Lattice::new(d(1000.0), d(1010.0), d(4.0), Dyadic::ZERO).unwrap();
        assert!(matches!(scan_lattice(&l, &mut ev), Err(Error::StepTooCoarse { .. })));
    }

    #[test]
    fn indeterminate_is_replaced() {
        let mut ev = Evaluator::new(EvalPolicy::default());
        let l = Lattice::new(d(15.0), d(16.0), d(0.25), Dyadic::ZERO).unwrap();
        let mut seq = scan_lattice(&l, &mut ev).unwrap();
        let before = seq.changes();
        seq.samples[2].sign = Sign::Indeterminate;
        refine(&mut seq, &mut ev, 16, 0).unwrap();
        assert_eq!(seq.indeterminates(), 0);
        assert!(seq.changes() == before || seq.changes() == before + 2);
    }

    #[test]
    fn lehmer_pair_found() {
        let mut ev = Evaluator::new(EvalPolicy::default());
        let l = Lattice::new(d(7004.9), d(7005.3), d(0.25), Dyadic::ZERO).unwrap();
        let mut seq = scan_lattice(&l, &mut ev).unwrap();
        assert_eq!(seq.changes(), 0);
        refine(&mut seq, &mut ev, 64, 2).unwrap();
        assert_eq!(seq.changes(), 2);
    }

    #[test]
    fn zero_budget() {
        let mut ev = Evaluator::new(EvalPolicy::default());
        let l = Lattice::new(d(7004.9), d(7005.3), d(0.25), Dyadic::ZERO).unwrap();
        let mut seq = scan_lattice(&l, &mut ev).unwrap();
        let copy = seq.clone();
        assert!(matches!(refine(&mut seq, &mut ev, 0, 2), Err(Error::BudgetExhausted(_))));
        assert_eq!(seq, copy);
    }
}
