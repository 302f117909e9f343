//! Command line front end for `posetrace` and the results catalog it writes.

pub mod catalog;
pub mod cli;
mod output;

pub use output::Format;
