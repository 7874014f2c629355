//! Arbitrary-precision helpers: the moddiv window primitive and n-bit
//! random sampling.
//!
//! The whole cryptosystem reduces to one operation on natural numbers,
//! `(a mod 2^p) div 2^q`, i.e. reading bits `q..p` of `a` as an integer.
//! It is implemented as pure wire selection on the limb representation —
//! a shift plus a limb mask — never as general division.

use num_bigint::BigUint;
use rand::{CryptoRng, RngCore};

use crate::error::{Error, Result};

/// Number of bits in `x`; zero has bit length 0.
pub fn bit_length(x: &BigUint) -> u64 {
    x.bits()
}

/// Keeps the low `n` bits of `a` by truncating and masking limbs.
pub(crate) fn low_bits(a: &BigUint, n: u32) -> BigUint {
    if bit_length(a) <= u64::from(n) {
        return a.clone();
    }
    let mut digits: Vec<u32> = a.iter_u32_digits().collect();
    digits.truncate(n.div_ceil(32) as usize);
    let rem = n % 32;
    if rem != 0 {
        if let Some(top) = digits.last_mut() {
            *top &= (1u32 << rem) - 1;
        }
    }
    BigUint::new(digits)
}

/// The window `(a mod 2^p) div 2^q`: bits `q..p` of `a` as an integer.
///
/// The result is always below `2^(p-q)`; it may legitimately be zero.
pub fn moddiv(a: &BigUint, p: u32, q: u32) -> Result<BigUint> {
    if p <= q {
        return Err(Error::WindowBounds { p, q });
    }
    Ok(low_bits(&(a >> q), p - q))
}

/// Uniformly random integer of exactly `n` bits: the top bit is forced
/// to 1, so the value lies in `[2^(n-1), 2^n)`.
pub fn random_nbit<R: RngCore + CryptoRng + ?Sized>(n: u32, rng: &mut R) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::ZeroWidth);
    }
    let mut buf = vec![0u8; n.div_ceil(8) as usize];
    rng.fill_bytes(&mut buf);
    let mut v = low_bits(&BigUint::from_bytes_be(&buf), n);
    v |= BigUint::from(1u8) << (n - 1);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    /// Independent oracle: literal modulo-then-divide on big integers.
    fn oracle_moddiv(a: &BigUint, p: u32, q: u32) -> BigUint {
        let modulus = BigUint::from(1u8) << p;
        let divisor = BigUint::from(1u8) << q;
        (a % modulus) / divisor
    }

    #[test]
    fn window_examples() {
        let cases = [(120u32, 7, 3, 15u32), (300, 8, 3, 5), (0, 10, 2, 0)];
        for (a, p, q, want) in cases {
            let a = BigUint::from(a);
            assert_eq!(moddiv(&a, p, q).unwrap(), BigUint::from(want));
            assert_eq!(oracle_moddiv(&a, p, q), BigUint::from(want));
        }
    }

    #[test]
    fn window_bounds_rejected() {
        let a = BigUint::from(5u8);
        assert!(matches!(
            moddiv(&a, 3, 3),
            Err(Error::WindowBounds { p: 3, q: 3 })
        ));
        assert!(moddiv(&a, 2, 7).is_err());
    }

    #[test]
    fn window_identity_against_oracle() {
        let mut rng = ChaCha20Rng::seed_from_u64(0xA117);
        for _ in 0..100_000 {
            let width = 1 + (rng.next_u32() % 192);
            let a = random_nbit(width, &mut rng).unwrap();
            let p = 1 + (rng.next_u32() % 200);
            let q = rng.next_u32() % p;
            assert_eq!(moddiv(&a, p, q).unwrap(), oracle_moddiv(&a, p, q));
        }
    }

    #[test]
    fn window_shift_consistency() {
        // moddiv(A*2^q, p+q, q) * 2^q never exceeds A*2^q mod 2^(p+q).
        for a in 0u32..1024 {
            let a = BigUint::from(a);
            for q in 0..6u32 {
                for p in 1..10u32 {
                    let shifted = &a << q;
                    let lhs = moddiv(&shifted, p + q, q).unwrap() << q;
                    let rhs = &shifted % (BigUint::from(1u8) << (p + q));
                    assert!(lhs <= rhs);
                }
            }
        }
    }

    #[test]
    fn random_nbit_width() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        assert_eq!(random_nbit(1, &mut rng).unwrap(), BigUint::from(1u8));
        for _ in 0..1000 {
            let v = random_nbit(8, &mut rng).unwrap();
            assert!(BigUint::from(128u8) <= v && v <= BigUint::from(255u8));
        }
        for _ in 0..10_000 {
            let v = random_nbit(16, &mut rng).unwrap();
            assert_eq!(bit_length(&v), 16);
        }
        assert!(matches!(random_nbit(0, &mut rng), Err(Error::ZeroWidth)));
    }

    #[test]
    fn low_bits_truncates() {
        let v = (BigUint::from(1u8) << 100) + BigUint::from(0b1011u8);
        assert_eq!(low_bits(&v, 4), BigUint::from(0b1011u8));
        assert_eq!(low_bits(&v, 101), v);
        assert_eq!(low_bits(&BigUint::from(0u8), 32), BigUint::from(0u8));
    }
}
