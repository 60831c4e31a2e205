//! Exact Chen–Ruan orbifold cohomology rings of `[A^n / S_n]` and
//! `[A_0^{n+1} / S_{n+1}]` for an abelian surface `A`, with and without
//! discrete torsion.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod combinatorics;
pub mod error;
pub mod linalg;
pub mod oracles;
pub mod poincare;
pub mod ring;
pub mod sector;

pub use error::{Error, Result};
