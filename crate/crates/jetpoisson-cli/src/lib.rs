//! Support library for the `jetpoisson` command-line tool: JSON document
//! schemas, text/LaTeX renderers, deterministic samplers, and the named
//! verification suites. The binary in `main.rs` wires these to `clap`.

pub mod json;
pub mod render;
pub mod sampling;
pub mod verify;
