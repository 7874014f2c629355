//! Hybrid public-key encryption: an ephemeral exchange share plus a
//! stream body.
//!
//! Encryption runs one side of the key exchange against the recipient's
//! public share, expands the derived window into a keystream with
//! SHA-256 in counter mode, and XORs the plaintext. There is no
//! integrity tag: flipping a ciphertext bit flips the same plaintext
//! bit, and decrypting with the wrong key yields noise rather than an
//! error.

use num_bigint::BigUint;
use rand::{CryptoRng, RngCore};
use sha2::{Digest, Sha256};

use crate::arith::{bit_length, moddiv, random_nbit};
use crate::error::{Error, Result};
use crate::kex::secret_bytes;
use crate::params::{KeyPair, ParamSet, PublicKey, Variant};

/// Minimum derived-secret width accepted for encryption.
pub const MIN_SECRET_BITS: u32 = 128;

/// An ephemeral share `V` plus the stream-encrypted body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ciphertext {
    pub v: BigUint,
    pub body: Vec<u8>,
}

/// Deterministic keystream: SHA-256(secret || counter) blocks,
/// concatenated and truncated to `len` bytes.
pub fn keystream(secret: &[u8], len: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(len);
    let mut counter = 0u64;
    while out.len() < len {
        let mut hasher = Sha256::new();
        hasher.update(secret);
        hasher.update(counter.to_be_bytes());
        let block = hasher.finalize();
        let take = (len - out.len()).min(block.len());
        out.extend_from_slice(&block[..take]);
        counter += 1;
    }
    out
}

fn check_encryption_grade(params: &ParamSet) -> Result<()> {
    params.validate()?;
    if params.variant != Variant::KexEnc {
        return Err(Error::WrongVariant { expected: "kexenc" });
    }
    if params.secret_width() < MIN_SECRET_BITS {
        return Err(Error::SecretTooNarrow {
            width: params.secret_width(),
            min: MIN_SECRET_BITS,
        });
    }
    Ok(())
}

/// Encrypts `plaintext` to the holder of `public`, using a fresh
/// ephemeral secret per call.
pub fn encrypt<R: RngCore + CryptoRng + ?Sized>(
    public: &PublicKey,
    plaintext: &[u8],
    rng: &mut R,
) -> Result<Ciphertext> {
    let params = &public.params;
    check_encryption_grade(params)?;
    let y = random_nbit(params.m, rng)?;
    let v = moddiv(&(&y * &params.z), params.p, params.q)?;
    let w = moddiv(
        &(&y * &public.u),
        params.share_width(),
        params.derive_cut(),
    )?;
    let ks = keystream(&secret_bytes(params, &w), plaintext.len());
    let body = plaintext.iter().zip(&ks).map(|(a, b)| a ^ b).collect();
    Ok(Ciphertext { v, body })
}

/// Recovers the plaintext with the recipient's private key.
pub fn decrypt(keypair: &KeyPair, ct: &Ciphertext) -> Result<Vec<u8>> {
    let params = &keypair.params;
    check_encryption_grade(params)?;
    if bit_length(&ct.v) > u64::from(params.share_width()) {
        return Err(Error::OutOfRange {
            name: "V",
            width: params.share_width(),
        });
    }
    let w = moddiv(
        &(keypair.x() * &ct.v),
        params.share_width(),
        params.derive_cut(),
    )?;
    let ks = keystream(&secret_bytes(params, &w), ct.body.len());
    Ok(ct.body.iter().zip(&ks).map(|(a, b)| a ^ b).collect())
}
