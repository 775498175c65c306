//! Right loops, c-groupoids and their general extensions, and a
//! Diffie–Hellman-style key exchange built on powers in the extension.
//!
//! Everything here is pure computation over small finite structures and runs
//! without `std`; file formats and the command-line tool live in the
//! `loopkex` crate.
#![no_std]

extern crate alloc;

pub mod attack;
pub mod c_groupoid;
pub mod general_extension;
pub mod permutation;
pub mod protocol;
pub mod right_loop;

pub use attack::{AttackResult, CycleLength};
pub use c_groupoid::{AxiomConfig, AxiomReport, CGroupoid, GroupPresentation, RoundTripConfig};
pub use general_extension::{ExtElement, PowerSequence};
pub use permutation::{bsgs_contains, bsgs_order, Bsgs, Domain, Perm, PermError};
pub use protocol::{Party, ProtocolError, PublicParams, Transcript};
pub use right_loop::{ClassifyConfig, LoopClass, LoopError, LoopKind, RightLoop};
