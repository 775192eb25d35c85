//! Deligne-Lusztig pairings for the Gross-Prasad restriction problem over
//! finite fields.
//!
//! Tori are indexed by F-conjugacy classes of Weyl group elements, semisimple
//! elements of dual tori by exponents of eigenvalues in the multiplicative
//! group of an algebraic closure of F_q. Three independent routes compute the
//! restricted inner product of two Deligne-Lusztig characters: a direct sum
//! over Weyl group actions, a closed product over Frobenius orbits, and a
//! factorization through centralizers of the semisimple parts.

#![no_std]

extern crate alloc;

pub mod eigenvalue_orbits;
pub mod error;
pub mod lusztig_decomposition;
pub mod partitions;
pub mod reeder_engine;
pub mod tori;
pub mod unipotent_reps;
pub mod weyl;

pub use error::{Error, Result};
