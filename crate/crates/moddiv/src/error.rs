use thiserror::Error;

/// Errors shared by every module in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// The window bounds of a moddiv extraction are inverted or empty.
    #[error("moddiv window needs p > q, got p={p}, q={q}")]
    WindowBounds { p: u32, q: u32 },

    /// Asked for a random integer of zero bits.
    #[error("random integer width must be at least 1 bit")]
    ZeroWidth,

    /// A parameter-set condition does not hold. The message names the
    /// violated condition in the style of the reference implementation.
    #[error("Condition ({0}) is not fulfilled !")]
    Condition(&'static str),

    /// A value does not have the exact bit length its role requires.
    #[error("{name} must be exactly {expected} bits long, got {actual}")]
    WidthMismatch {
        name: &'static str,
        expected: u32,
        actual: u64,
    },

    /// A transmitted share or signature component exceeds 2^(p-q).
    #[error("{name} out of range: must be below 2^{width}")]
    OutOfRange { name: &'static str, width: u32 },

    /// Operation requires the other parameter-set variant.
    #[error("parameter set has the wrong variant: expected {expected}")]
    WrongVariant { expected: &'static str },

    /// Derived secret is too narrow to be used as a symmetric key.
    #[error("parameters too small for encryption: secret width {width} < {min} bits")]
    SecretTooNarrow { width: u32, min: u32 },

    /// Digest width below the minimum the extractor supports.
    #[error("digest width must be at least 2 bits, got {0}")]
    DigestWidth(u32),

    /// Malformed text in a serialized key, ciphertext, signature, CNF or
    /// ANF file.
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A required field is absent from a serialized file.
    #[error("missing field: {0}")]
    MissingField(&'static str),

    /// An inversion instance violates its own shape constraints.
    #[error("invalid inversion instance: {0}")]
    InvalidInstance(&'static str),

    /// Exhaustive enumeration refused because the search space is too large.
    #[error("enumeration guard exceeded: m={m} > {limit}")]
    EnumerationGuard { m: u32, limit: u32 },

    /// Symbolic polynomial expansion refused; the CNF export scales where
    /// the ANF export does not.
    #[error("ANF expansion guard exceeded: m={m} > {limit}; use the CNF export instead")]
    AnfGuard { m: u32, limit: u32 },

    /// Experiment misuse.
    #[error("experiment needs at least one trial")]
    NoTrials,
}

pub type Result<T> = std::result::Result<T, Error>;
