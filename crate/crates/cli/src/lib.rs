//! Machine documents and command implementations behind the `qtm` binary.

pub mod commands;
pub mod document;
pub mod initial;
