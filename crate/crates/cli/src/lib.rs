//! Command-line front end: argument parsing, dispatch and emitters.

pub mod query;
pub mod run;
pub mod verify;

pub use query::Query;
pub use run::{run, Outcome};
