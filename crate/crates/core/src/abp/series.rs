//! Truncated geometric series `I + D + ... + D^T` through the block power
//! `G^(T+1)` of `G = [[I, I], [0, D]]`, whose top-right block is exactly the
//! truncated series.
//!
//! For row vector `u` and column vector `v`, `u (I + ... + D^T) v` is
//! `(u, 0) G^(T+1) (0, v)^T = (u, u) G^T (0, v)^T`, an ABP of width `2m`
//! with `T` transition matrices.

use alloc::vec;
use alloc::vec::Vec;

use super::{Abp, Transition};
use crate::field::FieldSpec;
use crate::linear::{FormMatrix, LinearForm};

fn block_step(d: &FormMatrix, nvars: usize, field: FieldSpec) -> Transition {
    let m = d.rows();
    let mut g = Transition::new(2 * m, 2 * m);
    let one = LinearForm::one(nvars, field);
    for i in 0..m {
        g.set(i, i, one.clone());
        g.set(i, m + i, one.clone());
        for j in 0..m {
            g.set(m + i, m + j, d.get(i, j).clone());
        }
    }
    g
}

/// ABP computing `u (I + D + ... + D^terms) v` (before pruning: width `2m`,
/// `terms` transition matrices). `u` and `v` have length `m`.
pub fn series_entry_abp(
    u: &[LinearForm],
    d: &FormMatrix,
    v: &[LinearForm],
    terms: usize,
    nvars: usize,
    field: FieldSpec,
) -> Abp {
    let m = d.rows();
    assert!(d.cols() == m && u.len() == m && v.len() == m, "series operand shapes");
    if m == 0 {
        return Abp::zero(nvars, field);
    }
    let zero = LinearForm::zero(nvars, field);
    let b: Vec<LinearForm> = u.iter().chain(u.iter()).cloned().collect();
    let c: Vec<LinearForm> = core::iter::repeat_n(zero, m).chain(v.iter().cloned()).collect();
    let g = block_step(d, nvars, field);
    Abp::from_parts(nvars, field, b, vec![g; terms], c)
}

/// Grid of ABPs whose `(i, j)` entry computes `(I + D + ... + D^(deg-2))_{ij}`
/// with `deg - 2` transition matrices (at most `deg` layers, width `2m`).
pub fn geometric_series_block(d: &FormMatrix, deg: usize, nvars: usize, field: FieldSpec) -> Vec<Vec<Abp>> {
    assert!(deg >= 2, "series block needs degree at least 2");
    let m = d.rows();
    let unit = |i: usize| -> Vec<LinearForm> {
        (0..m)
            .map(|t| if t == i { LinearForm::one(nvars, field) } else { LinearForm::zero(nvars, field) })
            .collect()
    };
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| series_entry_abp(&unit(i), d, &unit(j), deg - 2, nvars, field).prune())
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    const Q: FieldSpec = FieldSpec::Rational;

    #[test]
    fn zero_matrix_gives_identity() {
        let d = FormMatrix::zeros(1, 1, 1, Q);
        let g = geometric_series_block(&d, 4, 1, Q);
        assert_eq!(g[0][0].to_poly(), Poly::one(1, Q));
    }

    #[test]
    fn scalar_series() {
        let d = FormMatrix::from_fn(1, 1, |_, _| LinearForm::var(1, 0, Q));
        let g = geometric_series_block(&d, 3, 1, Q);
        assert_eq!(g[0][0].to_poly(), Poly::one(1, Q).add(&Poly::var(1, 0, Q)));
        assert!(g[0][0].layers() <= 3);
    }

    #[test]
    fn nilpotent_block() {
        let d = FormMatrix::from_fn(2, 2, |i, j| {
            if (i, j) == (0, 1) { LinearForm::var(1, 0, Q) } else { LinearForm::zero(1, Q) }
        });
        let g = geometric_series_block(&d, 3, 1, Q);
        let one = Poly::one(1, Q);
        let y = Poly::var(1, 0, Q);
        assert_eq!(g[0][0].to_poly(), one);
        assert_eq!(g[0][1].to_poly(), y);
        assert!(g[1][0].to_poly().is_zero());
        assert_eq!(g[1][1].to_poly(), one);
        for row in &g {
            for a in row {
                assert!(a.width() <= 4);
            }
        }
    }
}
