use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::field::FieldSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: FieldSpec, right: FieldSpec },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("modulus {0} is below 2^31")]
    ModulusTooSmall(u64),
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PencilError {
    #[error("pencil size must be at least 1")]
    Empty,
    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("constant part is invertible: the determinant has a nonzero constant term")]
    ConstantPartInvertible,
    #[error("constant part is not in normal form diag(0,..,0,1,..,1)")]
    NotNormalForm,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbpError {
    #[error("layer {layer}: expected a {rows}x{cols} transition matrix")]
    Shape { layer: usize, rows: usize, cols: usize },
    #[error("layer widths must be positive")]
    EmptyLayer,
    #[error("outer program has {got} variables, expected {expected} for an {m}x{m} substitution")]
    VariableCountMismatch { expected: usize, got: usize, m: usize },
    #[error("program computes a polynomial with nonzero constant term {0}")]
    NonzeroConstantTerm(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConvertError {
    #[error("pencil is not regular: corank {r}")]
    NotRegular { r: usize },
    #[error("degree {0} is too small for this construction")]
    DegreeTooSmall(usize),
    #[error("determinant is not homogeneous of degree {expected}: components of degree {witness:?}")]
    NotHomogeneous { expected: usize, witness: Vec<usize> },
    #[error("constant part is zero but size {s} differs from degree {d}")]
    SizeDegreeMismatch { s: usize, d: usize },
    #[error(transparent)]
    Pencil(#[from] PencilError),
    #[error(transparent)]
    Abp(#[from] AbpError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("operands differ: {0}")]
    Incompatible(String),
    #[error("coefficients cannot be reduced modulo either built-in prime")]
    Unreducible,
    #[error("invalid block sizes k={k}, m={m}")]
    BlockSizes { k: usize, m: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
