//! Research implementation of a public-key toolkit built on the window
//! function `F(x) = (a*x mod 2^p) div 2^q`.
//!
//! The crate provides:
//!
//! - [`arith`]: the window primitive and exact-width random sampling,
//! - [`params`]: validated domain parameters and key pairs,
//! - [`kex`]: the two-message key exchange and its agreement experiment,
//! - [`pke`]: hybrid encryption over an ephemeral exchange share,
//! - [`sig`]: ephemeral-masked signatures with a two-window check,
//! - [`hardness`]: reductions of concrete inversion instances to DIMACS
//!   CNF and to polynomial systems over F(2), with a brute-force oracle,
//! - [`keyfile`]: the line-oriented text formats for keys, ciphertexts
//!   and signatures.
//!
//! This is research software: no constant-time guarantees, no
//! authenticated encryption, no protection against active attackers.

pub mod arith;
pub mod error;
pub mod hardness;
pub mod kex;
pub mod keyfile;
pub mod params;
pub mod pke;
pub mod sig;

pub use error::{Error, Result};
pub use params::{KeyPair, ParamSet, PublicKey, Variant};
