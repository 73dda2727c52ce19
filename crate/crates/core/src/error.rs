use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("k = 6 is a pole of the coefficient k^2/(36-k^2)")]
    PoleAtSix,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("evaluation point is within {distance:e} of the pole")]
    PoleHit { distance: f64 },

    #[error("residue {0} is not admissible for this parameter")]
    InadmissibleResidue(String),

    #[error("branch collision at x = {x}: roots {gap:e} apart")]
    BranchCollision { x: f64, gap: f64 },

    #[error("degenerate input: {denominator} vanishes ({modulus:e})")]
    DegenerateInput {
        denominator: &'static str,
        modulus: f64,
    },

    #[error("root is inconsistent with the defining relation (residual {0:e})")]
    InconsistentRoot(f64),

    #[error("root is not simple (|dF/droot| = {0:e})")]
    MultipleRoot(f64),

    #[error("cannot chain {from} into {to}: target k={target} but next source k={source_k}")]
    ParameterMismatch {
        from: String,
        to: String,
        target: String,
        source_k: String,
    },

    #[error("x = {x} lies outside [{start}, {end}]")]
    OutOfRange { x: f64, start: f64, end: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
