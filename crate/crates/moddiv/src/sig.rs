//! Ephemeral-masked signatures with a two-sided window check.
//!
//! Signing masks the private key with a fresh ephemeral value:
//!
//! ```text
//! S1 = (Y*Z mod 2^p) div 2^q
//! S2 = (H*(X+Y) mod 2^p) div 2^q
//! ```
//!
//! Verification compares two windows computed from public values only:
//! `Wa = (H*(S1+U) mod 2^(p-q)) div 2^(l+r)` against
//! `Wb = (Z*S2 mod 2^(p-q)) div 2^(l+r)`, accepting on strict equality.
//! As in the key exchange, small `r` lets genuine signatures miss by a
//! carry; `r >= 128` makes that negligible.

use num_bigint::BigUint;
use rand::{CryptoRng, RngCore};
use sha2::{Digest, Sha256};

use crate::arith::{bit_length, low_bits, moddiv, random_nbit};
use crate::error::{Error, Result};
use crate::params::{KeyPair, ParamSet, PublicKey, Variant};

/// A detached signature pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    pub s1: BigUint,
    pub s2: BigUint,
}

/// Why a signature was not accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    /// S1 or S2 does not fit in `p - q` bits.
    OutOfRange(&'static str),
    /// The two verification windows disagree.
    Mismatch,
}

impl std::fmt::Display for Rejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rejection::OutOfRange(name) => write!(f, "signature rejected: {name} out of range"),
            Rejection::Mismatch => write!(f, "signature rejected: window mismatch"),
        }
    }
}

fn require_sig(params: &ParamSet) -> Result<()> {
    params.validate()?;
    if params.variant != Variant::Sig {
        return Err(Error::WrongVariant { expected: "sig" });
    }
    Ok(())
}

/// Digest of exactly `l` bits: the leading bits of the stream
/// SHA-256(msg || counter), counter = 0, 1, ... as big-endian u64, with
/// the top bit forced to 1.
pub fn hash_to_bits(message: &[u8], l: u32) -> Result<BigUint> {
    if l < 2 {
        return Err(Error::DigestWidth(l));
    }
    let nbytes = l.div_ceil(8) as usize;
    let mut stream = Vec::with_capacity(nbytes);
    let mut counter = 0u64;
    while stream.len() < nbytes {
        let mut hasher = Sha256::new();
        hasher.update(message);
        hasher.update(counter.to_be_bytes());
        stream.extend_from_slice(&hasher.finalize());
        counter += 1;
    }
    stream.truncate(nbytes);
    let mut h = BigUint::from_bytes_be(&stream) >> (8 * nbytes as u32 - l);
    h |= BigUint::from(1u8) << (l - 1);
    Ok(h)
}

/// Core signing formula over an explicit digest and ephemeral value.
pub fn sign_digest(keypair: &KeyPair, digest: &BigUint, ephemeral: &BigUint) -> Result<Signature> {
    let params = &keypair.params;
    require_sig(params)?;
    if bit_length(digest) != u64::from(params.l) {
        return Err(Error::WidthMismatch {
            name: "H",
            expected: params.l,
            actual: bit_length(digest),
        });
    }
    let s1 = moddiv(&(ephemeral * &params.z), params.p, params.q)?;
    let sum = keypair.x() + ephemeral;
    let s2 = moddiv(&(digest * sum), params.p, params.q)?;
    Ok(Signature { s1, s2 })
}

/// Signs `message` with a fresh ephemeral value.
pub fn sign<R: RngCore + CryptoRng + ?Sized>(
    keypair: &KeyPair,
    message: &[u8],
    rng: &mut R,
) -> Result<Signature> {
    require_sig(&keypair.params)?;
    let digest = hash_to_bits(message, keypair.params.l)?;
    let ephemeral = random_nbit(keypair.params.m, rng)?;
    sign_digest(keypair, &digest, &ephemeral)
}

/// The two verification windows for an explicit digest.
pub fn verification_windows(
    public: &PublicKey,
    digest: &BigUint,
    sig: &Signature,
) -> Result<(BigUint, BigUint)> {
    let params = &public.params;
    require_sig(params)?;
    let pq = params.share_width();
    let cut = params.derive_cut();
    let wa = moddiv(&(digest * (&sig.s1 + &public.u)), pq, cut)?;
    let wb = moddiv(&(&params.z * &sig.s2), pq, cut)?;
    Ok((wa, wb))
}

fn range_check(public: &PublicKey, sig: &Signature) -> std::result::Result<(), Rejection> {
    let width = u64::from(public.params.share_width());
    if bit_length(&sig.s1) > width {
        return Err(Rejection::OutOfRange("S1"));
    }
    if bit_length(&sig.s2) > width {
        return Err(Rejection::OutOfRange("S2"));
    }
    Ok(())
}

/// Verifies a pre-hashed digest, accepting when the windows differ by
/// at most `tolerance`.
pub fn verify_digest_with_tolerance(
    public: &PublicKey,
    digest: &BigUint,
    sig: &Signature,
    tolerance: u64,
) -> Result<std::result::Result<(), Rejection>> {
    require_sig(&public.params)?;
    if let Err(reject) = range_check(public, sig) {
        return Ok(Err(reject));
    }
    let (wa, wb) = verification_windows(public, digest, sig)?;
    let diff = if wa > wb { &wa - &wb } else { &wb - &wa };
    if diff <= BigUint::from(tolerance) {
        Ok(Ok(()))
    } else {
        Ok(Err(Rejection::Mismatch))
    }
}

/// Strict verification of `message`: accept only when the two windows
/// are equal. Uses public values exclusively.
pub fn verify(
    public: &PublicKey,
    message: &[u8],
    sig: &Signature,
) -> Result<std::result::Result<(), Rejection>> {
    verify_with_tolerance(public, message, sig, 0)
}

/// Verification with an explicit window tolerance, for experiments at
/// small `r` where genuine signatures can miss by one.
pub fn verify_with_tolerance(
    public: &PublicKey,
    message: &[u8],
    sig: &Signature,
    tolerance: u64,
) -> Result<std::result::Result<(), Rejection>> {
    let digest = hash_to_bits(message, public.params.l)?;
    verify_digest_with_tolerance(public, &digest, sig, tolerance)
}

/// Flips bit `bit` of `v` (used by tamper experiments).
pub fn flip_bit(v: &BigUint, bit: u32) -> BigUint {
    let mask = BigUint::from(1u8) << bit;
    let flipped = low_bits(v, bit) | ((v >> (bit + 1)) << (bit + 1));
    if (v >> bit) & BigUint::from(1u8) == BigUint::from(1u8) {
        flipped
    } else {
        flipped | mask
    }
}
