//! Instance families: classical homogeneous polynomials as ABPs, random
//! programs and pencils, and block-diagonal pencils of controlled corank.
//! Every generator is deterministic in its seed.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::abp::{Abp, Transition};
use crate::convert::abp_to_pencil;
use crate::error::ConvertError;
use crate::field::FieldSpec;
use crate::linear::{FormMatrix, LinearForm};
use crate::matrix::Matrix;
use crate::pencil::Pencil;
use crate::rng::{self, DetRng};

/// `x_1^d + ... + x_n^d`: `b = c = (x_1, .., x_n)` and `d - 2` copies of
/// `diag(x_1, .., x_n)`; width `n`, size `(d - 1) n`.
pub fn power_sum_abp(n: usize, d: usize, field: FieldSpec) -> Abp {
    assert!(n >= 1 && d >= 2, "power sums need n >= 1 and d >= 2");
    let vars: Vec<LinearForm> = (0..n).map(|i| LinearForm::var(n, i, field)).collect();
    let mut diag = Transition::new(n, n);
    for (i, x) in vars.iter().enumerate() {
        diag.set(i, i, x.clone());
    }
    Abp::from_parts(n, field, vars.clone(), vec![diag; d - 2], vars)
}

/// The elementary symmetric polynomial `e_k(x_1, .., x_n)`.
///
/// For `k >= 2` the program is homogeneous: a vertex of layer `t` is the
/// index of the `(t+1)`-th chosen variable, indices strictly increase, and
/// `c` sums the variables that may still come last. Layer `t` keeps indices
/// `t ..= n - k + t`, so the width is `n - k + 1`. For `k = 1` the result is
/// the single vertex `b = (x_1 + .. + x_n)`, `c = (1)`, since no homogeneous
/// layered program has degree 1.
pub fn elem_sym_abp(n: usize, k: usize, field: FieldSpec) -> Abp {
    assert!(1 <= k && k <= n, "need 1 <= k <= n");
    let var = |i: usize| LinearForm::var(n, i, field);
    if k == 1 {
        let sum = (0..n).fold(LinearForm::zero(n, field), |acc, i| acc.add(&var(i)));
        return Abp::from_linear(sum);
    }
    let span = n - k + 1;
    // vertex j of layer t is variable index t + j
    let b: Vec<LinearForm> = (0..span).map(var).collect();
    let mats = (1..k - 1)
        .map(|t| {
            let mut m = Transition::new(span, span);
            for j in 0..span {
                for j2 in j..span {
                    m.set(j, j2, var(t + j2));
                }
            }
            m
        })
        .collect();
    let last = k - 2;
    let c = (0..span)
        .map(|j| (last + j + 1..n).fold(LinearForm::zero(n, field), |acc, i| acc.add(&var(i))))
        .collect();
    Abp::from_parts(n, field, b, mats, c)
}

/// A homogeneous linear form with each variable present with probability
/// 1/2 and nonzero coefficients.
fn random_hom_form(rng: &mut DetRng, n: usize, field: FieldSpec) -> LinearForm {
    let mut coeffs = Vec::new();
    for i in 0..n {
        if rng.gen::<bool>() {
            coeffs.push((i, rng::nonzero(rng, field)));
        }
    }
    LinearForm::new(n, field.zero(), coeffs).expect("indices in range")
}

fn random_affine_form(rng: &mut DetRng, n: usize, field: FieldSpec) -> LinearForm {
    let h = random_hom_form(rng, n, field);
    if rng.gen::<bool>() {
        h.add(&LinearForm::constant_form(n, rng::nonzero(rng, field)))
    } else {
        h
    }
}

/// Homogeneous ABP of degree `d` with all `d - 1` vertex layers of width
/// `w` and random sparse homogeneous labels.
pub fn random_hom_abp(n: usize, d: usize, w: usize, seed: u64, field: FieldSpec) -> Abp {
    assert!(d >= 2 && w >= 1 && n >= 1, "need d >= 2, w >= 1, n >= 1");
    let mut rng = rng::rng_from_seed(seed);
    let b = (0..w).map(|_| random_hom_form(&mut rng, n, field)).collect();
    let mats = (0..d - 2)
        .map(|_| {
            let mut m = Transition::new(w, w);
            for i in 0..w {
                for j in 0..w {
                    m.set(i, j, random_hom_form(&mut rng, n, field));
                }
            }
            m
        })
        .collect();
    let c = (0..w).map(|_| random_hom_form(&mut rng, n, field)).collect();
    Abp::from_parts(n, field, b, mats, c)
}

/// ABP with `k` transition matrices, layer widths in `1..=max_width` and
/// random sparse affine labels (generally not homogeneous).
pub fn random_abp(n: usize, k: usize, max_width: usize, seed: u64, field: FieldSpec) -> Abp {
    assert!(max_width >= 1 && n >= 1);
    let mut rng = rng::rng_from_seed(seed);
    let widths: Vec<usize> = (0..=k).map(|_| rng.gen_range(1..=max_width)).collect();
    let b = (0..widths[0]).map(|_| random_affine_form(&mut rng, n, field)).collect();
    let mats = (0..k)
        .map(|t| {
            let mut m = Transition::new(widths[t], widths[t + 1]);
            for i in 0..widths[t] {
                for j in 0..widths[t + 1] {
                    m.set(i, j, random_affine_form(&mut rng, n, field));
                }
            }
            m
        })
        .collect();
    let c = (0..widths[k]).map(|_| random_affine_form(&mut rng, n, field)).collect();
    Abp::from_parts(n, field, b, mats, c)
}

/// Block-diagonal pencil of regular blocks; its corank equals the number of
/// blocks and its determinant is the product of theirs.
pub fn synth_r_regular_pencil(base: &[Pencil]) -> Result<Pencil, ConvertError> {
    for p in base {
        let r = p.constant_rank().r;
        if r != 1 {
            return Err(ConvertError::NotRegular { r });
        }
    }
    Ok(Pencil::direct_sum(base)?)
}

/// `P M Q` for random unimodular constant `P`, `Q` (products of elementary
/// row and column additions), which keeps the determinant and the corank.
pub fn scramble_pencil(p: &Pencil, seed: u64) -> Pencil {
    let s = p.size();
    let field = p.field();
    let mut rng = rng::rng_from_seed(seed);
    let mut m = p.matrix().clone();
    if s >= 2 {
        for _ in 0..2 * s {
            let i = rng.gen_range(0..s);
            let j = (i + rng.gen_range(1..s)) % s;
            m.add_row_multiple(i, j, &rng::nonzero(&mut rng, field));
            let i = rng.gen_range(0..s);
            let j = (i + rng.gen_range(1..s)) % s;
            m.add_col_multiple(i, j, &rng::nonzero(&mut rng, field));
        }
    }
    Pencil::from_matrix(p.nvars(), field, m).expect("square")
}

/// A regular pencil with homogeneous determinant of degree `d`: the reverse
/// reduction of a random homogeneous ABP, scrambled.
pub fn random_regular_pencil(n: usize, d: usize, w: usize, seed: u64, field: FieldSpec) -> Pencil {
    let abp = random_hom_abp(n, d, w, seed, field);
    let p = abp_to_pencil(&abp).expect("homogeneous programs vanish at the origin");
    scramble_pencil(&p, seed.wrapping_add(1))
}

/// A random `s x s` pencil whose constant part has rank exactly `rank0`
/// (`rank0 < s`), with random sparse linear parts.
pub fn random_pencil(s: usize, n: usize, rank0: usize, seed: u64, field: FieldSpec) -> Pencil {
    assert!(s >= 1 && rank0 <= s);
    let mut rng = rng::rng_from_seed(seed);
    let constant = loop {
        let left = Matrix::from_fn(s, rank0, field, |_, _| rng::small(&mut rng, field, 3));
        let right = Matrix::from_fn(rank0, s, field, |_, _| rng::small(&mut rng, field, 3));
        let c = if rank0 == 0 { Matrix::zeros(s, s, field) } else { left.mul(&right) };
        if c.rank() == rank0 {
            break c;
        }
    };
    let m = FormMatrix::from_fn(s, s, |i, j| {
        random_hom_form(&mut rng, n, field).add(&LinearForm::constant_form(n, constant.get(i, j).clone()))
    });
    Pencil::from_matrix(n, field, m).expect("square")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;
    use crate::verify::symbolic_det;

    const Q: FieldSpec = FieldSpec::Rational;

    fn power_sum_poly(n: usize, d: u32) -> Poly {
        (0..n).fold(Poly::zero(n, Q), |acc, i| acc.add(&Poly::var(n, i, Q).pow(d)))
    }

    fn elem_sym_poly(n: usize, k: usize) -> Poly {
        fn go(start: usize, left: usize, n: usize) -> Poly {
            if left == 0 {
                return Poly::one(n, Q);
            }
            (start..n).fold(Poly::zero(n, Q), |acc, i| acc.add(&Poly::var(n, i, Q).mul(&go(i + 1, left - 1, n))))
        }
        go(0, k, n)
    }

    #[test]
    fn power_sums() {
        assert_eq!(power_sum_abp(2, 2, Q).to_poly(), power_sum_poly(2, 2));
        assert_eq!(power_sum_abp(1, 5, Q).to_poly(), power_sum_poly(1, 5));
        let a = power_sum_abp(3, 3, Q);
        let pt = [Q.from_i64(1), Q.from_i64(2), Q.from_i64(3)];
        assert_eq!(a.eval(&pt).unwrap(), Q.from_i64(36));
        let a = power_sum_abp(4, 3, Q);
        assert_eq!((a.widths(), a.size(), a.width()), (vec![4, 4], 8, 4));
    }

    #[test]
    fn elementary_symmetric() {
        for n in 1..=5 {
            for k in 1..=n {
                let a = elem_sym_abp(n, k, Q);
                assert_eq!(a.to_poly(), elem_sym_poly(n, k), "n={n} k={k}");
                if k >= 2 {
                    assert!(a.is_homogeneous());
                    assert!(a.width() <= n - k + 1);
                }
            }
        }
    }

    #[test]
    fn random_programs_are_deterministic() {
        let a = random_hom_abp(3, 3, 2, 42, Q);
        assert_eq!(a, random_hom_abp(3, 3, 2, 42, Q));
        assert!(a.is_homogeneous());
        assert!(a.to_poly().homogeneity_degree().admits(3));
        let w1 = random_hom_abp(3, 4, 1, 9, Q);
        assert_eq!(w1.width(), 1);
        assert_eq!(random_abp(3, 2, 3, 5, Q), random_abp(3, 2, 3, 5, Q));
    }

    #[test]
    fn synthetic_coranks() {
        let block = abp_to_pencil(&power_sum_abp(2, 2, Q)).unwrap();
        let one = synth_r_regular_pencil(core::slice::from_ref(&block)).unwrap();
        assert_eq!(one, block);
        let cube = abp_to_pencil(&power_sum_abp(2, 3, Q)).unwrap();
        let two = synth_r_regular_pencil(&[block.clone(), cube]).unwrap();
        assert_eq!(two.constant_rank().r, 2);
        assert!(symbolic_det(&two).homogeneity_degree().admits(5));
        let not_regular = synth_r_regular_pencil(core::slice::from_ref(&two));
        assert_eq!(not_regular, Err(ConvertError::NotRegular { r: 2 }));
    }

    #[test]
    fn scrambling_keeps_determinant_and_corank() {
        let p = random_regular_pencil(2, 3, 2, 3, Q);
        let base = abp_to_pencil(&random_hom_abp(2, 3, 2, 3, Q)).unwrap();
        assert_eq!(symbolic_det(&p), symbolic_det(&base));
        assert!(p.constant_rank().is_regular());
    }

    #[test]
    fn random_pencil_rank() {
        for rank0 in 0..4 {
            let p = random_pencil(4, 3, rank0, rank0 as u64, Q);
            assert_eq!(p.constant_rank().rank0, rank0);
        }
    }
}
