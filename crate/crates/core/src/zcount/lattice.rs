//! Exact sample placement.

use crate::dyadic::Dyadic;
use crate::error::Error;

/// Points `t_lo + offset + k*step` lying in `[t_lo, t_hi)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    t_lo: Dyadic,
    t_hi: Dyadic,
    step: Dyadic,
    offset: Dyadic,
}

impl Lattice {
    pub fn new(t_lo: Dyadic, t_hi: Dyadic, step: Dyadic, offset: Dyadic) -> Result<Lattice, Error> {
        if t_lo >= t_hi {
            return Err(Error::InvalidLattice("t_lo must be below t_hi"));
        }
        if !step.is_positive() {
            return Err(Error::InvalidLattice("step must be positive"));
        }
        if offset < Dyadic::ZERO || offset >= step {
            return Err(Error::InvalidLattice("offset must lie in [0, step)"));
        }
        let l = Lattice { t_lo, t_hi, step, offset };
        // Indices must fit comfortably in i64 arithmetic.
        t_hi.checked_sub(t_lo)?.div_floor(step)?;
        Ok(l)
    }

    pub fn t_lo(&self) -> Dyadic {
        self.t_lo
    }

    pub fn t_hi(&self) -> Dyadic {
        self.t_hi
    }

    pub fn step(&self) -> Dyadic {
        self.step
    }

    pub fn offset(&self) -> Dyadic {
        self.offset
    }

    fn first(&self) -> Dyadic {
        self.t_lo.checked_add(self.offset).expect("validated in new")
    }

    pub fn len(&self) -> usize {
        let first = self.first();
        if first >= self.t_hi {
            return 0;
        }
        // ceil((t_hi - first)/step)
        let span = self.t_hi.checked_sub(first).expect("validated in new");
        let q = span.neg().div_floor(self.step).expect("validated in new");
        (-q) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, k: usize) -> Dyadic {
        self.step
            .checked_mul_int(k as i64)
            .and_then(|d| d.checked_add(self.first()))
            .expect("index within the lattice")
    }

    pub fn points(&self) -> impl Iterator<Item = Dyadic> + '_ {
        (0..self.len()).map(move |k| self.point(k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(x: f64) -> Dyadic {
        Dyadic::from_f64(x).unwrap()
    }

    #[test]
    fn points_stay_in_range() {
        let l = Lattice::new(d(10.0), d(11.0), d(0.25), d(0.125)).unwrap();
        let pts: Vec<f64> = l.points().map(Dyadic::to_f64).collect();
        assert_eq!(pts, vec![10.125, 10.375, 10.625, 10.875]);
        let l = Lattice::new(d(10.0), d(11.0), d(0.25), Dyadic::ZERO).unwrap();
        assert_eq!(l.len(), 4);
        assert_eq!(l.point(3).to_f64(), 10.75);
    }

    #[test]
    fn empty_and_invalid() {
        let l = Lattice::new(d(1.0), d(1.5), d(1.0), d(0.5)).unwrap();
        assert!(l.is_empty());
        assert!(Lattice::new(d(2.0), d(1.0), d(0.5), Dyadic::ZERO).is_err());
        assert!(Lattice::new(d(1.0), d(2.0), Dyadic::ZERO, Dyadic::ZERO).is_err());
        assert!(Lattice::new(d(1.0), d(2.0), d(0.5), d(0.5)).is_err());
    }
}
