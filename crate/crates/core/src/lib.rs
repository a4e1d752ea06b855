//! Single-mode bosonic channels with arbitrary environments, simulated in a
//! truncated Fock basis.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod capacity;
pub mod channel;
pub mod classical;
pub mod entropy;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod linalg;
pub mod moe;
pub mod quadrature;
pub mod scan;
pub mod wigner;

pub use error::{Error, Result};
