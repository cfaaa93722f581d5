//! Library side of the `clustagree` binary: input parsing, report
//! assembly and the subcommands.

pub mod commands;
pub mod error;
pub mod input;
pub mod report;
