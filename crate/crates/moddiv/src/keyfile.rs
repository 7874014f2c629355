//! Line-oriented text serialization for keys, ciphertexts and signatures.
//!
//! Key files carry one `field=value` pair per line: decimal bit counts,
//! the variant, and big integers as lowercase hex with an `0x` prefix.
//! `U` and `X` are optional; a file containing `X` is a private key and
//! is never produced by public-key exports.

use base64::engine::general_purpose::STANDARD as BASE64;
use base64::Engine;
use num_bigint::BigUint;
use num_traits::Num;

use crate::error::{Error, Result};
use crate::params::{KeyPair, ParamSet, PublicKey, Variant};
use crate::pke::Ciphertext;
use crate::sig::Signature;

fn hex(v: &BigUint) -> String {
    format!("0x{:x}", v)
}

fn parse_hex(s: &str, line: usize) -> Result<BigUint> {
    let body = s.strip_prefix("0x").ok_or_else(|| Error::Parse {
        line,
        msg: format!("expected 0x-prefixed hex value, got `{s}`"),
    })?;
    if body.is_empty() {
        return Err(Error::Parse {
            line,
            msg: "empty hex value".into(),
        });
    }
    BigUint::from_str_radix(body, 16).map_err(|_| Error::Parse {
        line,
        msg: format!("invalid hex digits in `{s}`"),
    })
}

fn parse_dec_u32(s: &str, line: usize) -> Result<u32> {
    s.parse::<u32>().map_err(|_| Error::Parse {
        line,
        msg: format!("expected a decimal integer, got `{s}`"),
    })
}

/// Raw fields of a parsed key file before cross-field validation.
struct KeyFields {
    l: Option<u32>,
    m: Option<u32>,
    p: Option<u32>,
    q: Option<u32>,
    r: Option<u32>,
    variant: Option<Variant>,
    z: Option<BigUint>,
    u: Option<BigUint>,
    x: Option<BigUint>,
}

fn parse_key_fields(text: &str) -> Result<KeyFields> {
    let mut f = KeyFields {
        l: None,
        m: None,
        p: None,
        q: None,
        r: None,
        variant: None,
        z: None,
        u: None,
        x: None,
    };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed.split_once('=').ok_or_else(|| Error::Parse {
            line,
            msg: format!("expected `field=value`, got `{trimmed}`"),
        })?;
        match key {
            "l" => f.l = Some(parse_dec_u32(value, line)?),
            "m" => f.m = Some(parse_dec_u32(value, line)?),
            "p" => f.p = Some(parse_dec_u32(value, line)?),
            "q" => f.q = Some(parse_dec_u32(value, line)?),
            "r" => f.r = Some(parse_dec_u32(value, line)?),
            "variant" => {
                f.variant = Some(Variant::parse(value).ok_or_else(|| Error::Parse {
                    line,
                    msg: format!("unknown variant `{value}` (expected kexenc or sig)"),
                })?)
            }
            "Z" => f.z = Some(parse_hex(value, line)?),
            "U" => f.u = Some(parse_hex(value, line)?),
            "X" => f.x = Some(parse_hex(value, line)?),
            other => {
                return Err(Error::Parse {
                    line,
                    msg: format!("unknown field `{other}`"),
                })
            }
        }
    }
    Ok(f)
}

fn params_from_fields(f: &KeyFields) -> Result<ParamSet> {
    ParamSet::new(
        f.l.ok_or(Error::MissingField("l"))?,
        f.m.ok_or(Error::MissingField("m"))?,
        f.p.ok_or(Error::MissingField("p"))?,
        f.q.ok_or(Error::MissingField("q"))?,
        f.r.ok_or(Error::MissingField("r"))?,
        f.z.clone().ok_or(Error::MissingField("Z"))?,
        f.variant.ok_or(Error::MissingField("variant"))?,
    )
}

fn write_common(params: &ParamSet, out: &mut String) {
    use std::fmt::Write;
    let _ = writeln!(out, "l={}", params.l);
    let _ = writeln!(out, "m={}", params.m);
    let _ = writeln!(out, "p={}", params.p);
    let _ = writeln!(out, "q={}", params.q);
    let _ = writeln!(out, "r={}", params.r);
    let _ = writeln!(out, "variant={}", params.variant.as_str());
    let _ = writeln!(out, "Z={}", hex(&params.z));
}

/// Serializes bare parameters (no key material).
pub fn write_params(params: &ParamSet) -> String {
    let mut out = String::new();
    write_common(params, &mut out);
    out
}

/// Serializes a public key: parameters plus `U`.
pub fn write_public(key: &PublicKey) -> String {
    let mut out = String::new();
    write_common(&key.params, &mut out);
    out.push_str(&format!("U={}\n", hex(&key.u)));
    out
}

/// Serializes a private key file: parameters, `U`, and `X`.
pub fn write_keypair(key: &KeyPair) -> String {
    let mut out = String::new();
    write_common(&key.params, &mut out);
    out.push_str(&format!("U={}\n", hex(&key.u)));
    out.push_str(&format!("X={}\n", hex(key.x())));
    out
}

/// Parses a parameter file. `U`/`X` may be present and are ignored.
pub fn parse_params(text: &str) -> Result<ParamSet> {
    params_from_fields(&parse_key_fields(text)?)
}

/// Parses a public key file; requires `U`.
pub fn parse_public(text: &str) -> Result<PublicKey> {
    let f = parse_key_fields(text)?;
    let params = params_from_fields(&f)?;
    let u = f.u.ok_or(Error::MissingField("U"))?;
    PublicKey::new(params, u)
}

/// Parses a private key file; requires `X`. When `U` is present it must
/// match the value recomputed from `X`.
pub fn parse_keypair(text: &str) -> Result<KeyPair> {
    let f = parse_key_fields(text)?;
    let params = params_from_fields(&f)?;
    let x = f.x.clone().ok_or(Error::MissingField("X"))?;
    let pair = KeyPair::from_private(params, x)?;
    if let Some(u) = f.u {
        if u != pair.u {
            return Err(Error::Parse {
                line: 0,
                msg: "U does not match the share recomputed from X".into(),
            });
        }
    }
    Ok(pair)
}

/// Serializes a ciphertext: the ephemeral share and the base64 body.
pub fn write_ciphertext(ct: &Ciphertext) -> String {
    format!("V={}\nbody={}\n", hex(&ct.v), BASE64.encode(&ct.body))
}

/// Parses a ciphertext file.
pub fn parse_ciphertext(text: &str) -> Result<Ciphertext> {
    let mut v = None;
    let mut body = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let (key, value) = trimmed.split_once('=').ok_or_else(|| Error::Parse {
            line,
            msg: format!("expected `field=value`, got `{trimmed}`"),
        })?;
        match key {
            "V" => v = Some(parse_hex(value, line)?),
            "body" => {
                body = Some(BASE64.decode(value).map_err(|e| Error::Parse {
                    line,
                    msg: format!("invalid base64 body: {e}"),
                })?)
            }
            other => {
                return Err(Error::Parse {
                    line,
                    msg: format!("unknown field `{other}`"),
                })
            }
        }
    }
    Ok(Ciphertext {
        v: v.ok_or(Error::MissingField("V"))?,
        body: body.ok_or(Error::MissingField("body"))?,
    })
}

/// Serializes a detached signature.
pub fn write_signature(sig: &Signature) -> String {
    format!("S1={}\nS2={}\n", hex(&sig.s1), hex(&sig.s2))
}

/// Parses a detached signature file.
pub fn parse_signature(text: &str) -> Result<Signature> {
    let mut s1 = None;
    let mut s2 = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let (key, value) = trimmed.split_once('=').ok_or_else(|| Error::Parse {
            line,
            msg: format!("expected `field=value`, got `{trimmed}`"),
        })?;
        match key {
            "S1" => s1 = Some(parse_hex(value, line)?),
            "S2" => s2 = Some(parse_hex(value, line)?),
            other => {
                return Err(Error::Parse {
                    line,
                    msg: format!("unknown field `{other}`"),
                })
            }
        }
    }
    Ok(Signature {
        s1: s1.ok_or(Error::MissingField("S1"))?,
        s2: s2.ok_or(Error::MissingField("S2"))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn sample_keypair() -> KeyPair {
        let mut rng = ChaCha20Rng::seed_from_u64(21);
        let params = ParamSet::generate(16, 10, 20, 6, 1, Variant::KexEnc, &mut rng).unwrap();
        KeyPair::generate(&params, &mut rng).unwrap()
    }

    #[test]
    fn keypair_roundtrip() {
        let kp = sample_keypair();
        let text = write_keypair(&kp);
        let back = parse_keypair(&text).unwrap();
        assert_eq!(back, kp);
    }

    #[test]
    fn public_roundtrip_has_no_x() {
        let kp = sample_keypair();
        let text = write_public(&kp.public_key());
        assert!(!text.contains("X="));
        let back = parse_public(&text).unwrap();
        assert_eq!(back, kp.public_key());
    }

    #[test]
    fn params_roundtrip() {
        let kp = sample_keypair();
        let text = write_params(&kp.params);
        assert_eq!(parse_params(&text).unwrap(), kp.params);
    }

    #[test]
    fn invariant_violation_detected_on_parse() {
        let text = "l=8\nm=5\np=10\nq=4\nr=0\nvariant=kexenc\nZ=0xc9\n";
        let err = parse_params(text).unwrap_err();
        assert_eq!(err.to_string(), "Condition (q = l + m - p) is not fulfilled !");
    }

    #[test]
    fn bad_hex_is_a_format_error() {
        let text = "l=8\nm=5\np=10\nq=3\nr=0\nvariant=kexenc\nZ=0xZZ\n";
        assert!(matches!(parse_params(text), Err(Error::Parse { .. })));
        let no_prefix = "l=8\nm=5\np=10\nq=3\nr=0\nvariant=kexenc\nZ=c9\n";
        assert!(matches!(parse_params(no_prefix), Err(Error::Parse { .. })));
    }

    #[test]
    fn missing_field_reported() {
        let text = "l=8\nm=5\np=10\nq=3\nr=0\nvariant=kexenc\n";
        assert!(matches!(parse_params(text), Err(Error::MissingField("Z"))));
    }

    #[test]
    fn keypair_with_inconsistent_u_rejected() {
        let kp = sample_keypair();
        let mut text = write_params(&kp.params);
        text.push_str("U=0x1\n");
        text.push_str(&format!("X=0x{:x}\n", kp.x()));
        // A forged U that cannot come from this X.
        if kp.u != BigUint::from(1u8) {
            assert!(parse_keypair(&text).is_err());
        }
    }

    #[test]
    fn signature_roundtrip() {
        let sig = Signature {
            s1: BigUint::from(231u8),
            s2: BigUint::from(194u8),
        };
        let text = write_signature(&sig);
        assert_eq!(parse_signature(&text).unwrap(), sig);
    }
}
