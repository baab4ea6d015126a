//! Seeded sampling. Every random choice in the crate flows from a single
//! 64-bit seed through a ChaCha8 stream, so results replay exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{FieldSpec, Scalar};

pub type DetRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> DetRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform residue over a prime field; over the rationals an integer in
/// `[-2^20, 2^20]`.
pub fn uniform(rng: &mut DetRng, field: FieldSpec) -> Scalar {
    match field.modulus() {
        Some(m) => field.residue(rng.gen_range(0..m.get())),
        None => field.from_i64(rng.gen_range(-(1 << 20)..=(1 << 20))),
    }
}

/// A nonzero element: uniform over a prime field, a small integer in
/// `[-5, 5] \ {0}` over the rationals.
pub fn nonzero(rng: &mut DetRng, field: FieldSpec) -> Scalar {
    match field.modulus() {
        Some(m) => field.residue(rng.gen_range(1..m.get())),
        None => {
            let v = rng.gen_range(1..=5i64);
            field.from_i64(if rng.gen::<bool>() { v } else { -v })
        }
    }
}

/// An integer in `[-bound, bound]` mapped into the field.
pub fn small(rng: &mut DetRng, field: FieldSpec, bound: i64) -> Scalar {
    field.from_i64(rng.gen_range(-bound..=bound))
}
