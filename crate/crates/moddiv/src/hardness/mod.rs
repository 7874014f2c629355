//! Concrete inversion instances and their exported encodings.
//!
//! An instance asks: for known `a` and an observed window
//! `u = (a*x mod 2^p) div 2^q`, which m-bit values `x` (top bit set)
//! fit? The module exports the question as Tseitin-encoded DIMACS CNF
//! and as a multivariate polynomial system over F(2), and provides a
//! brute-force oracle to cross-check both at toy sizes.

mod anf;
mod circuit;
mod cnf;

pub use anf::{export_anf, export_anf_with_limit, parse_anf, AnfSystem, Poly, ANF_VAR_LIMIT};
pub use circuit::{Gate, GateKind, MultiplierCircuit, Wire};
pub use cnf::{export_cnf, parse_dimacs, CnfInstance, DimacsFile, InstanceStats};

use num_bigint::BigUint;

use crate::arith::{bit_length, moddiv};
use crate::error::{Error, Result};

/// Largest unknown width the brute-force oracle will enumerate.
pub const BRUTE_FORCE_LIMIT: u32 = 28;

/// One inversion question: known multiplier, unknown width, window
/// bounds, and the observed window value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InversionInstance {
    pub a: BigUint,
    /// Bit length of `a`.
    pub n: u32,
    /// Bit length of the unknown `x` (top bit set).
    pub m: u32,
    pub p: u32,
    pub q: u32,
    /// Observed window value, below `2^(p-q)`.
    pub u: BigUint,
}

impl InversionInstance {
    pub fn new(a: BigUint, m: u32, p: u32, q: u32, u: BigUint) -> Result<InversionInstance> {
        let n = bit_length(&a) as u32;
        if n == 0 {
            return Err(Error::InvalidInstance("multiplier a must be nonzero"));
        }
        if m == 0 {
            return Err(Error::InvalidInstance("unknown width m must be positive"));
        }
        if q >= p {
            return Err(Error::InvalidInstance("window needs q < p"));
        }
        if p > n + m {
            return Err(Error::InvalidInstance("window top p must not exceed n+m"));
        }
        if bit_length(&u) > u64::from(p - q) {
            return Err(Error::InvalidInstance("u must fit in p-q bits"));
        }
        Ok(InversionInstance { a, n, m, p, q, u })
    }
}

/// All m-bit solutions (top bit set) with
/// `(a*x mod 2^p) div 2^q == u`, in increasing order.
pub fn brute_force_invert(inst: &InversionInstance) -> Result<Vec<BigUint>> {
    if inst.m > BRUTE_FORCE_LIMIT {
        return Err(Error::EnumerationGuard {
            m: inst.m,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut solutions = Vec::new();
    // Fast path entirely in machine words when the product fits.
    if inst.n + inst.m <= 127 {
        let a = to_u128(&inst.a);
        let u = to_u128(&inst.u);
        let mask_p: u128 = if inst.p == 127 {
            u128::MAX >> 1
        } else {
            (1u128 << inst.p) - 1
        };
        for x in (1u128 << (inst.m - 1))..(1u128 << inst.m) {
            if ((a * x) & mask_p) >> inst.q == u {
                solutions.push(BigUint::from(x));
            }
        }
        return Ok(solutions);
    }
    let lo = BigUint::from(1u8) << (inst.m - 1);
    let hi = BigUint::from(1u8) << inst.m;
    let mut x = lo;
    while x < hi {
        if moddiv(&(&inst.a * &x), inst.p, inst.q)? == inst.u {
            solutions.push(x.clone());
        }
        x += 1u8;
    }
    Ok(solutions)
}

fn to_u128(v: &BigUint) -> u128 {
    let mut out = 0u128;
    for (i, digit) in v.iter_u64_digits().enumerate().take(2) {
        out |= u128::from(digit) << (64 * i);
    }
    out
}
