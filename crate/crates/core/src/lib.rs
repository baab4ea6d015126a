//! Exact conversion of determinantal representations (matrices of affine
//! linear forms) into layered algebraic branching programs, with the
//! oracles needed to check every step.
//!
//! The crate is `no_std` and only needs an allocator. File formats and the
//! command-line front end live in the companion `detabp` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod abp;
pub mod convert;
pub mod error;
pub mod field;
pub mod instgen;
pub mod linear;
pub mod matrix;
pub mod pencil;
pub mod poly;
pub mod rng;
pub mod verify;

pub use abp::{Abp, AbpSum, HomComponent, ScalarAbp, Transition};
pub use error::{AbpError, AlgebraError, ConvertError, PencilError, VerifyError};
pub use field::{FieldSpec, Modulus, Scalar};
pub use linear::{FormMatrix, LinearForm};
pub use matrix::Matrix;
pub use pencil::{Blocks, NormalFormPencil, Pencil, RRegularityReport};
pub use poly::{Degree, Homogeneity, Monomial, Poly};
