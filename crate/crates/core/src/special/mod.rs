//! The Riemann–Siegel theta function, truncation bounds for the
//! Riemann–Siegel formula and Stirling-based Gamma enclosures.

mod gamma;
mod remainder;
mod theta;

pub use gamma::{gamma_halfline_bound, log_gamma, theta_stirling, BERNOULLI};
pub use remainder::{rs_remainder_bound, RemainderRow, RemainderTable};
pub use theta::{rs_theta, rs_theta_deriv, rs_theta_integral, ThetaExpansion, THETA_TERMS};
