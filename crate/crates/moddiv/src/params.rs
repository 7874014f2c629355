//! Public domain parameters and key material.
//!
//! A parameter set fixes the bit counts `(l, m, p, q, r)`, the public
//! constant `Z`, and the protocol variant it was generated for. The two
//! variants share the relation `q = l + m - p` but differ in the slack
//! condition: key exchange and encryption need `p > m + q + r`, signing
//! needs `p > l + q + r`.

use num_bigint::BigUint;
use rand::{CryptoRng, RngCore};

use crate::arith::{bit_length, moddiv, random_nbit};
use crate::error::{Error, Result};

/// Which slack condition a parameter set satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Key exchange and public-key encryption: `p > m + q + r`.
    KexEnc,
    /// Digital signature: `p > l + q + r`.
    Sig,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::KexEnc => "kexenc",
            Variant::Sig => "sig",
        }
    }

    pub fn parse(s: &str) -> Option<Variant> {
        match s {
            "kexenc" => Some(Variant::KexEnc),
            "sig" => Some(Variant::Sig),
            _ => None,
        }
    }
}

/// Validated public parameters `(l, m, p, q, r, Z)` plus the variant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamSet {
    pub l: u32,
    pub m: u32,
    pub p: u32,
    pub q: u32,
    pub r: u32,
    pub z: BigUint,
    pub variant: Variant,
}

impl ParamSet {
    /// Builds and validates a parameter set from explicit fields.
    pub fn new(
        l: u32,
        m: u32,
        p: u32,
        q: u32,
        r: u32,
        z: BigUint,
        variant: Variant,
    ) -> Result<ParamSet> {
        let params = ParamSet {
            l,
            m,
            p,
            q,
            r,
            z,
            variant,
        };
        params.validate()?;
        Ok(params)
    }

    /// Samples a fresh `Z` of exactly `l` bits and validates the rest.
    pub fn generate<R: RngCore + CryptoRng + ?Sized>(
        l: u32,
        m: u32,
        p: u32,
        q: u32,
        r: u32,
        variant: Variant,
        rng: &mut R,
    ) -> Result<ParamSet> {
        if l == 0 {
            return Err(Error::Condition("l, m, p, q > 0"));
        }
        let z = random_nbit(l, rng)?;
        ParamSet::new(l, m, p, q, r, z, variant)
    }

    /// Checks every invariant, reporting the first violated condition by
    /// name.
    pub fn validate(&self) -> Result<()> {
        if self.l == 0 || self.m == 0 || self.p == 0 || self.q == 0 {
            return Err(Error::Condition("l, m, p, q > 0"));
        }
        if u64::from(self.l) + u64::from(self.m) != u64::from(self.p) + u64::from(self.q) {
            return Err(Error::Condition("q = l + m - p"));
        }
        match self.variant {
            Variant::KexEnc => {
                if u64::from(self.p) <= u64::from(self.m) + u64::from(self.q) + u64::from(self.r) {
                    return Err(Error::Condition("p > m + q + r"));
                }
            }
            Variant::Sig => {
                if u64::from(self.p) <= u64::from(self.l) + u64::from(self.q) + u64::from(self.r) {
                    return Err(Error::Condition("p > l + q + r"));
                }
            }
        }
        if bit_length(&self.z) != u64::from(self.l) {
            return Err(Error::WidthMismatch {
                name: "Z",
                expected: self.l,
                actual: bit_length(&self.z),
            });
        }
        Ok(())
    }

    /// Width of a transmitted share: `p - q` bits.
    pub fn share_width(&self) -> u32 {
        self.p - self.q
    }

    /// Width of the derived secret window: `p - q - m - r` for key
    /// exchange, `p - q - l - r` for signatures. At least 1 for any
    /// valid set.
    pub fn secret_width(&self) -> u32 {
        match self.variant {
            Variant::KexEnc => self.p - self.q - self.m - self.r,
            Variant::Sig => self.p - self.q - self.l - self.r,
        }
    }

    /// Low cutoff of the derived window: `m + r` or `l + r` by variant.
    pub(crate) fn derive_cut(&self) -> u32 {
        match self.variant {
            Variant::KexEnc => self.m + self.r,
            Variant::Sig => self.l + self.r,
        }
    }
}

/// The public half of a key: parameters plus the share `U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    pub params: ParamSet,
    pub u: BigUint,
}

impl PublicKey {
    pub fn new(params: ParamSet, u: BigUint) -> Result<PublicKey> {
        params.validate()?;
        if bit_length(&u) > u64::from(params.share_width()) {
            return Err(Error::OutOfRange {
                name: "U",
                width: params.share_width(),
            });
        }
        Ok(PublicKey { params, u })
    }
}

/// A private key `X` of exactly `m` bits with its public share
/// `U = (X*Z mod 2^p) div 2^q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyPair {
    pub params: ParamSet,
    x: BigUint,
    pub u: BigUint,
}

impl KeyPair {
    /// Samples a fresh private key under `params`.
    pub fn generate<R: RngCore + CryptoRng + ?Sized>(
        params: &ParamSet,
        rng: &mut R,
    ) -> Result<KeyPair> {
        params.validate()?;
        let x = random_nbit(params.m, rng)?;
        KeyPair::from_private(params.clone(), x)
    }

    /// Rebuilds a key pair from a stored private value, recomputing `U`.
    pub fn from_private(params: ParamSet, x: BigUint) -> Result<KeyPair> {
        params.validate()?;
        if bit_length(&x) != u64::from(params.m) {
            return Err(Error::WidthMismatch {
                name: "X",
                expected: params.m,
                actual: bit_length(&x),
            });
        }
        let u = moddiv(&(&x * &params.z), params.p, params.q)?;
        Ok(KeyPair { params, x, u })
    }

    /// The private value. Never serialized by public-key exports.
    pub fn x(&self) -> &BigUint {
        &self.x
    }

    pub fn public_key(&self) -> PublicKey {
        PublicKey {
            params: self.params.clone(),
            u: self.u.clone(),
        }
    }
}
