//! The key-exchange protocol and its agreement experiment.
//!
//! Each party samples an m-bit secret, publishes the window of its
//! product with `Z`, and derives the shared value from the peer's share:
//!
//! ```text
//! U  = (X*Z mod 2^p) div 2^q            (transmitted)
//! Wa = (X*V mod 2^(p-q)) div 2^(m+r)    (kept)
//! ```
//!
//! The two derivations agree up to a single carry: raising `r` halves
//! the residual mismatch probability per bit of slack, so `r >= 128`
//! makes disagreement negligible.

use num_bigint::BigUint;
use rand::{CryptoRng, RngCore};

use crate::arith::{bit_length, moddiv, random_nbit};
use crate::error::{Error, Result};
use crate::params::{ParamSet, Variant};

fn require_kexenc(params: &ParamSet) -> Result<()> {
    params.validate()?;
    if params.variant != Variant::KexEnc {
        return Err(Error::WrongVariant { expected: "kexenc" });
    }
    Ok(())
}

/// Samples a fresh m-bit private value for one side of the exchange.
pub fn gen_private<R: RngCore + CryptoRng + ?Sized>(
    params: &ParamSet,
    rng: &mut R,
) -> Result<BigUint> {
    require_kexenc(params)?;
    random_nbit(params.m, rng)
}

/// The transmitted share `(x*Z mod 2^p) div 2^q`.
pub fn share(params: &ParamSet, x: &BigUint) -> Result<BigUint> {
    require_kexenc(params)?;
    if bit_length(x) != u64::from(params.m) {
        return Err(Error::WidthMismatch {
            name: "X",
            expected: params.m,
            actual: bit_length(x),
        });
    }
    moddiv(&(x * &params.z), params.p, params.q)
}

/// Derives the shared secret from the local private value and the
/// peer's share: `(x*other mod 2^(p-q)) div 2^(m+r)`.
pub fn derive(params: &ParamSet, x: &BigUint, other_share: &BigUint) -> Result<BigUint> {
    require_kexenc(params)?;
    if bit_length(other_share) > u64::from(params.share_width()) {
        return Err(Error::OutOfRange {
            name: "share",
            width: params.share_width(),
        });
    }
    moddiv(
        &(x * other_share),
        params.share_width(),
        params.derive_cut(),
    )
}

/// Exports a derived secret as big-endian bytes, left-padded to the
/// byte length of the secret window.
pub fn secret_bytes(params: &ParamSet, w: &BigUint) -> Vec<u8> {
    let len = (params.secret_width() as usize).div_ceil(8);
    let raw = w.to_bytes_be();
    let mut out = vec![0u8; len];
    if raw.len() <= len {
        out[len - raw.len()..].copy_from_slice(&raw);
    } else {
        // Cannot happen for in-range secrets; keep the low bytes.
        out.copy_from_slice(&raw[raw.len() - len..]);
    }
    out
}

/// Outcome of repeated full exchanges with fresh secrets per trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgreementReport {
    pub trials: u64,
    pub mismatches: u64,
    /// Largest `|Wa - Wb|` seen over all trials.
    pub max_abs_diff: BigUint,
}

impl AgreementReport {
    pub fn mismatch_rate(&self) -> f64 {
        self.mismatches as f64 / self.trials as f64
    }
}

/// Runs the full six-step exchange `trials` times under `params`,
/// resampling both private values each trial, and reports how often the
/// two derived secrets disagree.
pub fn agreement_experiment<R: RngCore + CryptoRng + ?Sized>(
    params: &ParamSet,
    trials: u64,
    rng: &mut R,
) -> Result<AgreementReport> {
    require_kexenc(params)?;
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let mut mismatches = 0u64;
    let mut max_abs_diff = BigUint::from(0u8);
    for _ in 0..trials {
        let x = random_nbit(params.m, rng)?;
        let y = random_nbit(params.m, rng)?;
        let u = share(params, &x)?;
        let v = share(params, &y)?;
        let wa = derive(params, &x, &v)?;
        let wb = derive(params, &y, &u)?;
        if wa != wb {
            mismatches += 1;
            let diff = if wa > wb { &wa - &wb } else { &wb - &wa };
            if diff > max_abs_diff {
                max_abs_diff = diff;
            }
        }
    }
    Ok(AgreementReport {
        trials,
        mismatches,
        max_abs_diff,
    })
}
