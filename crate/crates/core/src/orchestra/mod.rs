//! Work planning and the per-unit pipeline. Persistence and threads are in
//! the `critline` crate.

mod config;
mod unit;

pub use config::RunConfig;
pub use unit::{
    failed_certificate, plan_units, plan_units_with, run_unit, run_unit_with, unit_step, UnitState, WorkUnit,
    LOWER_WINDOW_FLOOR,
};
