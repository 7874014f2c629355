//! Timing harness: the window operations against a square-and-multiply
//! modular-exponentiation baseline at matched widths.
//!
//! For bit width `w` the exchange runs over `p = w` (modulus `2^w`)
//! with `m = w/2`, `q = w/8`, `l = 5w/8`, while the baseline
//! exponentiates a random w-bit base to a w-bit exponent modulo a
//! random odd w-bit modulus. Each measurement repeats the operation
//! until a span is long enough to time reliably and reports the median
//! of several spans in nanoseconds per operation.

use std::time::Instant;

use num_bigint::BigUint;
use num_traits::One;
use rand::{CryptoRng, RngCore};
use thiserror::Error;

use moddiv::arith::{moddiv as window, random_nbit};
use moddiv::kex;
use moddiv::params::{ParamSet, Variant};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("modulus must be at least 2")]
    ModulusTooSmall,
    #[error("bench width must be at least 256 bits and divisible by 8, got {0}")]
    BadWidth(u32),
    #[error("bench needs at least 5 repeats, got {0}")]
    TooFewRepeats(u32),
    #[error(transparent)]
    Params(#[from] moddiv::Error),
}

/// `base^exp mod modulus` by square-and-multiply, scanning the exponent
/// from its most significant bit.
pub fn modexp(base: &BigUint, exp: &BigUint, modulus: &BigUint) -> Result<BigUint, BenchError> {
    if *modulus < BigUint::from(2u8) {
        return Err(BenchError::ModulusTooSmall);
    }
    let mut acc = BigUint::one();
    let mut first = true;
    for i in (0..exp.bits()).rev() {
        if first {
            // Top bit of a nonzero exponent: start from the base.
            acc = base % modulus;
            first = false;
            continue;
        }
        acc = &acc * &acc % modulus;
        if exp.bit(i) {
            acc = &acc * base % modulus;
        }
    }
    if first {
        // Zero exponent.
        acc = BigUint::one() % modulus;
    }
    Ok(acc)
}

/// Multiplication count of [`modexp`]: one per squaring step plus one
/// per set bit below the top.
pub fn modexp_mult_count(exp: &BigUint) -> u64 {
    if exp.bits() == 0 {
        return 0;
    }
    let squarings = exp.bits() - 1;
    let multiplies = (0..exp.bits() - 1).filter(|&i| exp.bit(i)).count() as u64;
    squarings + multiplies
}

/// Per-width medians in nanoseconds and the derived speedup ratio.
#[derive(Debug, Clone)]
pub struct BenchEntry {
    pub width: u32,
    pub share_ns: f64,
    pub derive_ns: f64,
    pub modexp_ns: f64,
    /// Big-integer multiplications one baseline exponentiation costs;
    /// the exchange costs one per share and one per derive.
    pub modexp_mults: u64,
    /// modexp_ns / derive_ns.
    pub ratio: f64,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub repeats: u32,
    pub entries: Vec<BenchEntry>,
}

impl BenchReport {
    /// True when the speedup ratio strictly grows with width.
    pub fn ratio_strictly_increasing(&self) -> bool {
        self.entries.windows(2).all(|w| w[0].ratio < w[1].ratio)
    }
}

/// KexEnc parameters used for the exchange side at a given width.
pub fn bench_params<R: RngCore + CryptoRng + ?Sized>(
    width: u32,
    rng: &mut R,
) -> Result<ParamSet, BenchError> {
    if width < 256 || !width.is_multiple_of(8) {
        return Err(BenchError::BadWidth(width));
    }
    let p = width;
    let m = width / 2;
    let q = width / 8;
    let l = p + q - m;
    Ok(ParamSet::generate(l, m, p, q, 0, Variant::KexEnc, rng)?)
}

/// Median nanoseconds per call, timing batches long enough to trust.
fn time_ns<F: FnMut()>(repeats: u32, mut op: F) -> f64 {
    // Calibrate the batch size to roughly two milliseconds.
    let probe = Instant::now();
    op();
    let once = probe.elapsed().as_nanos().max(1);
    let batch = (2_000_000u128 / once).clamp(1, 100_000) as u32;
    let mut spans: Vec<f64> = (0..repeats)
        .map(|_| {
            let start = Instant::now();
            for _ in 0..batch {
                op();
            }
            start.elapsed().as_nanos() as f64 / f64::from(batch)
        })
        .collect();
    spans.sort_by(|a, b| a.total_cmp(b));
    spans[spans.len() / 2]
}

/// Times share, derive and the baseline at each width.
pub fn bench_run<R: RngCore + CryptoRng + ?Sized>(
    widths: &[u32],
    repeats: u32,
    rng: &mut R,
) -> Result<BenchReport, BenchError> {
    if repeats < 5 {
        return Err(BenchError::TooFewRepeats(repeats));
    }
    let mut entries = Vec::with_capacity(widths.len());
    for &width in widths {
        let params = bench_params(width, rng)?;
        let x = random_nbit(params.m, rng)?;
        let v = kex::share(&params, &random_nbit(params.m, rng)?)?;

        let share_ns = time_ns(repeats, || {
            std::hint::black_box(kex::share(&params, std::hint::black_box(&x)).unwrap());
        });
        let derive_ns = time_ns(repeats, || {
            std::hint::black_box(
                kex::derive(&params, std::hint::black_box(&x), std::hint::black_box(&v)).unwrap(),
            );
        });

        let modulus = random_nbit(width, rng)? | BigUint::one();
        let base = window(&random_nbit(width, rng)?, width, 0).unwrap() % &modulus;
        let exp = random_nbit(width, rng)?;
        let modexp_ns = time_ns(repeats, || {
            std::hint::black_box(
                modexp(
                    std::hint::black_box(&base),
                    std::hint::black_box(&exp),
                    std::hint::black_box(&modulus),
                )
                .unwrap(),
            );
        });

        entries.push(BenchEntry {
            width,
            share_ns,
            derive_ns,
            modexp_ns,
            modexp_mults: modexp_mult_count(&exp),
            ratio: modexp_ns / derive_ns,
        });
    }
    Ok(BenchReport { repeats, entries })
}
