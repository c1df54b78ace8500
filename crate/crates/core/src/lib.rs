// Errors carry exact rationals and offending vertex sets for diagnosis.
#![allow(clippy::result_large_err)]

pub mod cli;
pub mod colorer;
pub mod colouring;
pub mod decomposition;
pub mod generators;
pub mod graph;
pub mod io;
pub mod rational;
pub mod reductions;
pub mod rerouting;
