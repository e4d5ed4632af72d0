//! Rigorous verification that the zeros of the Riemann zeta function up to a
//! given height lie on the critical line.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the journal, the
//! worker pool and the command line live in the `critline` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod certify;
pub mod consequences;
pub mod dyadic;
pub mod orchestra;
mod error;
pub mod rigor;
pub mod special;
pub mod zcount;

pub use dyadic::Dyadic;
pub use error::Error;
