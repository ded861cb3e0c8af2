//! Command implementations behind the `fuzzylex` binary.

pub mod demo;
pub mod repl;
pub mod simulate;
