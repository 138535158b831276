//! Code-based public-key encryption over quasi-cyclic codes, in two
//! metrics: a Hamming-metric scheme decoded by a BCH (x) repetition tensor
//! code, and a rank-metric scheme decoded by a Gabidulin code. A numeric
//! analysis module reproduces the decryption-failure bounds.
//!
//! Everything is deterministic: all randomness expands from caller-supplied
//! 32-byte seeds.

pub mod analysis;
pub mod bch;
pub mod cyclic_ring;
pub mod error;
pub mod gabidulin;
pub mod hqc;
pub mod kat;
pub mod rank_field;
pub mod rng;
pub mod rqc;
pub mod tensor_code;

pub use error::{Error, Result};
pub use rng::{derive_seed, expander, seed_from_hex, Expander, Seed};
