//! Campaign execution on top of `critline-core`: the reference zero table,
//! the certificate journal, the worker pool and the command line.

pub mod campaign;
pub mod journal;
pub mod oracle;
pub mod selftest;

pub use campaign::{Campaign, Summary};
pub use journal::{Journal, JournalError, Recovered};
