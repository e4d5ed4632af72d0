//! Hardy Z evaluators and certified sign-change counting.

mod em;
mod lattice;
mod rs;
mod scan;

pub use em::{em_plan, z_euler_maclaurin, zeta_half_line, EmPlan, DEFAULT_COST_CAP};
pub use lattice::Lattice;
pub use rs::{main_sum_length, z_riemann_siegel, z_riemann_siegel_cached, RsCache};
pub use scan::{
    default_step, mean_gap, refine, sample_exact, scan_lattice, EvalPolicy, Evaluator, Sample, SignSequence,
};
