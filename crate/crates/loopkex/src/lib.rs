//! File formats, transcripts and the command-line front end for
//! [`loopkex_core`].

pub mod cli;
pub mod formats;
pub mod parallel;
pub mod transcript;

pub use loopkex_core as core;
