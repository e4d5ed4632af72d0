//! Ball arithmetic kernel.

mod ball;
mod complex;
mod elem;
mod float;
pub(crate) mod limbs;
mod mag;

pub use ball::{Ball, Sign};
pub use complex::CBall;
pub use elem::{Context, ElemFn};
pub use float::{Float, Prec};
pub use mag::Mag;

/// Binary operations of the kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Apply `op` to two balls at `prec` bits.
pub fn ball_arith(op: ArithOp, a: &Ball, b: &Ball, prec: Prec) -> Result<Ball, crate::Error> {
    Ok(match op {
        ArithOp::Add => a.add(b, prec),
        ArithOp::Sub => a.sub(b, prec),
        ArithOp::Mul => a.mul(b, prec),
        ArithOp::Div => a.div(b, prec)?,
    })
}

/// Certified sign of `a`.
pub fn ball_sign(a: &Ball) -> Sign {
    a.sign()
}
