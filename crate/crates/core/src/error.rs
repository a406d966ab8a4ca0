use thiserror::Error;

use crate::abasis::ATerm;
use crate::coeff::RingError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("not a basis element: A[{s},{d},{q}]")]
    NotABasisElement { s: i32, d: i32, q: i32 },
    #[error("structure constant of [{left}, {right}] has a nonzero factor on the invalid index A[{s},{d},{q}]")]
    InvalidStructureConstant { left: ATerm, right: ATerm, s: i32, d: i32, q: i32 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("linear part is zero")]
    ZeroLinearPart,
    #[error("field has terms of degree -1 (constant terms)")]
    ConstantTerms,
    #[error("non-semisimple linear part unsupported (kernel and image of ad meet in degree {degree})")]
    NonSemisimple { degree: i32 },
    #[error("linear part does not commute with its residue; its lambda-layers must lie in the kernel of ad")]
    IncompatibleLinearPart,
    #[error("transformation generator has a degree-0 component")]
    DegreeZeroGenerator,
    #[error("linear part must be a unit multiple of A[0,0,1]")]
    WrongLinearPart,
    #[error("invalid truncation: {0}")]
    InvalidTruncation(String),
    #[error("no unit coefficient to scale")]
    NoUnitToScale,
    #[error("scaling needs a {root}-th root of {value}, which is not rational")]
    NoExactRoot { root: u32, value: String },
    #[error("invalid case parameters: {0}")]
    InvalidCase(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Ring(RingError::SpecMismatch(..)) => "ring_mismatch",
            Error::Ring(RingError::NotInvertible(_)) => "not_invertible",
            Error::Ring(RingError::ZeroOrder) => "zero_order",
            Error::Ring(RingError::Parse { .. }) => "bad_coefficient",
            Error::NotABasisElement { .. } => "not_a_basis_element",
            Error::InvalidStructureConstant { .. } => "invalid_structure_constant",
            Error::Parse(_) => "parse",
            Error::ZeroLinearPart => "zero_linear_part",
            Error::ConstantTerms => "constant_terms",
            Error::NonSemisimple { .. } => "non_semisimple",
            Error::IncompatibleLinearPart => "incompatible_linear_part",
            Error::DegreeZeroGenerator => "degree_zero_generator",
            Error::WrongLinearPart => "wrong_linear_part",
            Error::InvalidTruncation(_) => "invalid_truncation",
            Error::NoUnitToScale => "no_unit_to_scale",
            Error::NoExactRoot { .. } => "no_exact_root",
            Error::InvalidCase(_) => "invalid_case",
            Error::Invariant(_) => "invariant",
        }
    }
}
