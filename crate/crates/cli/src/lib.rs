//! Library side of the `cquant` command-line tool: input parsing, the
//! JSON region document and the command implementations.

pub mod commands;
pub mod document;
pub mod input;
