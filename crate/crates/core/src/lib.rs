//! Exact analysis of CHSH-game strategies built from a shared hidden
//! variable plus one-way classical communication.
//!
//! The crate is `no_std` (it needs `alloc`). It provides:
//!
//! - [`info`]: finite joint distributions, Shannon entropies, mutual
//!   information, Fano bounds and binary-entropy inversion;
//! - [`bell`]: the eight CHSH-type scores, the β functional, the
//!   information-causality functional and transmitted-information deltas;
//! - [`bounds`]: the Fano-bound surfaces over `(P1, P2)` and the
//!   information-level bound on β;
//! - [`protocol`]: protocol definitions, exact enumeration, seeded Monte
//!   Carlo sampling and a library of named constructions.
//!
//! IO, file formats and the command-line front end live in the `bellbound`
//! crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bell;
pub mod bounds;
mod error;
pub mod info;
pub mod protocol;

pub use error::{Error, Result};

/// Variable names used in joints exported by [`protocol::Protocol::exact_joint`].
pub mod var {
    /// Alice's measurement setting.
    pub const A_SETTING: &str = "a";
    /// Bob's measurement setting.
    pub const B_SETTING: &str = "b";
    /// Alice's outcome.
    pub const A_OUTCOME: &str = "A";
    /// Bob's outcome.
    pub const B_OUTCOME: &str = "B";
    /// Shared hidden variable.
    pub const LAMBDA: &str = "lambda";
    /// Message sent from Bob to Alice.
    pub const CHI: &str = "chi";
    /// Derived variable `B xor b`.
    pub const B_XOR_B: &str = "B^b";
}
