//! The clow-sequence ABP for the symbolic determinant.
//!
//! Variable `x_{i,j}` of the `n x n` matrix has index `i * n + j`. A state
//! `(h, v)` with `h <= v` records the head `h` of the clow being walked and
//! its current vertex `v`. Every edge read consumes one matrix entry; after
//! `n` entries the walk must have just closed a clow. Closing a clow
//! contributes a factor `-1`, and the leftover global sign `(-1)^n` is folded
//! into `c`, so that a clow sequence with `m` clows is weighted by
//! `(-1)^(n+m)`, which is the sign of a permutation with `m` cycles.

use alloc::vec;
use alloc::vec::Vec;

use super::{Abp, Transition};
use crate::field::FieldSpec;
use crate::linear::LinearForm;

/// Determinant of the `n x n` symbolic matrix as an ABP over `n^2`
/// variables with `n - 1` transition matrices (`n + 1` layers) and width at
/// most `n(n+1)/2`.
pub fn mv97_det_abp(n: usize, field: FieldSpec) -> Abp {
    assert!(n >= 1, "determinant size must be positive");
    let nvars = n * n;
    let var = |i: usize, j: usize| LinearForm::var(nvars, i * n + j, field);
    let states: Vec<(usize, usize)> = (0..n).flat_map(|h| (h..n).map(move |v| (h, v))).collect();
    let index = |h: usize, v: usize| states.iter().position(|&s| s == (h, v)).expect("state");
    let w = states.len();

    let mut b = vec![LinearForm::zero(nvars, field); w];
    for h in 0..n {
        b[index(h, h)] = LinearForm::one(nvars, field);
    }

    let mut step = Transition::new(w, w);
    for (from, &(h, v)) in states.iter().enumerate() {
        for u in h + 1..n {
            step.set(from, index(h, u), var(v, u));
        }
        for h2 in h + 1..n {
            step.set(from, index(h2, h2), var(v, h).neg());
        }
    }

    let sign_even = n.is_multiple_of(2);
    let c = states
        .iter()
        .map(|&(h, v)| {
            // (-1)^n * (-x_{v,h})
            let closing = var(v, h);
            if sign_even { closing.neg() } else { closing }
        })
        .collect();

    Abp::from_parts(nvars, field, b, vec![step; n - 1], c).prune()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    const Q: FieldSpec = FieldSpec::Rational;

    /// Laplace expansion along the first row.
    fn laplace(n: usize) -> Poly {
        fn go(rows: &[usize], cols: &[usize], n: usize) -> Poly {
            let nvars = n * n;
            if rows.is_empty() {
                return Poly::one(nvars, Q);
            }
            let mut acc = Poly::zero(nvars, Q);
            for (k, &col) in cols.iter().enumerate() {
                let rest: Vec<usize> = cols.iter().copied().filter(|&c| c != col).collect();
                let term = Poly::var(nvars, rows[0] * n + col, Q).mul(&go(&rows[1..], &rest, n));
                acc = if k % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
        let idx: Vec<usize> = (0..n).collect();
        go(&idx, &idx, n)
    }

    #[test]
    fn small_determinants() {
        for n in 1..=4 {
            let a = mv97_det_abp(n, Q);
            assert_eq!(a.to_poly(), laplace(n), "n = {n}");
            assert_eq!(a.layers(), n + 1);
            assert!(a.width() <= n * n);
        }
    }

    #[test]
    fn two_by_two_explicit() {
        let a = mv97_det_abp(2, Q);
        let x = |i| Poly::var(4, i, Q);
        assert_eq!(a.to_poly(), x(0).mul(&x(3)).sub(&x(1).mul(&x(2))));
    }

    #[test]
    fn one_by_one() {
        assert_eq!(mv97_det_abp(1, Q).to_poly(), Poly::var(1, 0, Q));
    }
}
