//! Command line and file formats for `lexmetric-core`.

pub mod cli;
pub mod io;

pub use cli::run;
