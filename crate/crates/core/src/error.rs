use crate::designs::{Triple, VerificationReport};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid order {value}: {reason}")]
    InvalidOrder { value: u64, reason: &'static str },

    #[error("point {point} out of range for order {v}")]
    PointOutOfRange { point: u32, v: u32 },

    #[error("duplicate triple {0}")]
    DuplicateTriple(Triple),

    #[error("residue {generator} is not a unit modulo {modulus}")]
    NotAUnit { generator: i64, modulus: u64 },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid Latin square: {0}")]
    LatinSquare(String),

    #[error("invalid 1-factorisation: {0}")]
    Factorisation(String),

    #[error("construction did not yield a Steiner triple system: {0}")]
    NotSteiner(VerificationReport),

    #[error("certificate refused: {0}")]
    CertificateRefused(VerificationReport),

    #[error("invalid weighting: {0}")]
    Weighting(String),

    #[error("invalid colouring: {0}")]
    Colouring(VerificationReport),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("generator exceeded {steps} steps for order {v}")]
    StepLimit { v: u32, steps: u64 },
}
