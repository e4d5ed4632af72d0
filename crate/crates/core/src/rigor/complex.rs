//! Rectangular pairs of balls, only as far as the zeta and gamma formulas
//! need them.

use super::ball::Ball;
use super::float::Prec;
use super::mag::Mag;
use crate::error::Error;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CBall {
    pub re: Ball,
    pub im: Ball,
}

impl CBall {
    pub fn new(re: Ball, im: Ball) -> CBall {
        CBall { re, im }
    }

    pub fn real(re: Ball) -> CBall {
        CBall { re, im: Ball::zero() }
    }

    pub fn one() -> CBall {
        CBall::real(Ball::one())
    }

    pub fn add(&self, o: &CBall, p: Prec) -> CBall {
        CBall::new(self.re.add(&o.re, p), self.im.add(&o.im, p))
    }

    pub fn sub(&self, o: &CBall, p: Prec) -> CBall {
        CBall::new(self.re.sub(&o.re, p), self.im.sub(&o.im, p))
    }

    pub fn mul(&self, o: &CBall, p: Prec) -> CBall {
        let re = self.re.mul(&o.re, p).sub(&self.im.mul(&o.im, p), p);
        let im = self.re.mul(&o.im, p).add(&self.im.mul(&o.re, p), p);
        CBall::new(re, im)
    }

    pub fn mul_real(&self, x: &Ball, p: Prec) -> CBall {
        CBall::new(self.re.mul(x, p), self.im.mul(x, p))
    }

    pub fn mul_2exp(&self, k: i64) -> CBall {
        CBall::new(self.re.mul_2exp(k), self.im.mul_2exp(k))
    }

    pub fn conj(&self) -> CBall {
        CBall::new(self.re.clone(), self.im.neg())
    }

    /// `|z|^2` as a ball.
    pub fn norm_sqr(&self, p: Prec) -> Ball {
        self.re.sqr(p).add(&self.im.sqr(p), p)
    }

    pub fn inv(&self, p: Prec) -> Result<CBall, Error> {
        let n = self.norm_sqr(p + 8);
        let c = self.conj();
        Ok(CBall::new(c.re.div(&n, p)?, c.im.div(&n, p)?))
    }

    /// Upper bound for `|z|` over the enclosure.
    pub fn abs_upper(&self) -> Mag {
        let a = self.re.mag_upper().get();
        let b = self.im.mag_upper().get();
        // hypot computed in f64 then inflated; relative error of libm's
        // hypot is below one ulp.
        Mag::from_f64_up(libm::hypot(a, b) * (1.0 + 4.0 * f64::EPSILON))
    }

    pub fn add_error(&self, r: Mag) -> CBall {
        CBall::new(self.re.add_error(r), self.im.add_error(r))
    }
}
