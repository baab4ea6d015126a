//! Substituting programs for the variables of an outer program.
//!
//! The outer program is read as a sequence of steps: source to layer 0,
//! layer `t-1` to layer `t`, and layer `k` to sink. Every edge `u -> v` of a
//! step with label `c0 + sum c_i y_i` becomes a bundle of parallel chains
//! from `u` to `v`: one constant chain carrying `c0` and, for each nonzero
//! `c_i`, a copy of `inner[i]` whose `b` is scaled by `c_i`. All chains of a
//! step are padded to a common number of transition matrices, so each step
//! turns into a fixed number of new layers while the outer vertices stay in
//! place as layers of their own.

use alloc::vec;
use alloc::vec::Vec;

use super::{Abp, Transition};
use crate::error::{AbpError, AlgebraError};
use crate::linear::LinearForm;

/// A chain inside one step, with its endpoints in the neighbouring outer
/// layers (`None` is the implied source or sink).
struct Chain {
    from: Option<usize>,
    to: Option<usize>,
    abp: Abp,
}

impl Abp {
    /// Replaces every variable `y_i` of `self` by the polynomial computed by
    /// `inner[i]`. All inner programs must share a field and variable count.
    pub fn substitute(&self, inner: &[Abp]) -> Result<Abp, AbpError> {
        let m = (0..=inner.len()).find(|m| m * m >= inner.len()).unwrap_or(0);
        if inner.len() != self.nvars {
            return Err(AbpError::VariableCountMismatch { expected: inner.len(), got: self.nvars, m });
        }
        let Some(first) = inner.first() else {
            return Ok(self.clone());
        };
        let (nvars, field) = (first.nvars, first.field);
        for a in inner {
            if a.field != field {
                return Err(AlgebraError::FieldMismatch { left: field, right: a.field }.into());
            }
            if a.nvars != nvars {
                return Err(AlgebraError::DimensionMismatch { expected: nvars, got: a.nvars }.into());
            }
        }
        if self.field != field {
            return Err(AlgebraError::FieldMismatch { left: field, right: self.field }.into());
        }

        let chains_for = |from: Option<usize>, to: Option<usize>, label: &LinearForm, out: &mut Vec<Chain>| {
            if !label.constant().is_zero() {
                let c0 = LinearForm::constant_form(nvars, label.constant().clone());
                out.push(Chain { from, to, abp: Abp::from_linear(c0) });
            }
            for (&i, coeff) in label.coeffs() {
                let mut abp = inner[i].clone();
                abp.b = abp.b.iter().map(|l| l.scale(coeff)).collect();
                out.push(Chain { from, to, abp });
            }
        };

        let k = self.mats.len();
        let mut steps: Vec<Vec<Chain>> = Vec::with_capacity(k + 2);
        let mut first_step = Vec::new();
        for (v, l) in self.b.iter().enumerate() {
            chains_for(None, Some(v), l, &mut first_step);
        }
        steps.push(first_step);
        for m in &self.mats {
            let mut step = Vec::new();
            for (u, v, l) in m.iter() {
                chains_for(Some(u), Some(v), l, &mut step);
            }
            steps.push(step);
        }
        let mut last_step = Vec::new();
        for (u, l) in self.c.iter().enumerate() {
            chains_for(Some(u), None, l, &mut last_step);
        }
        steps.push(last_step);

        if steps.iter().any(Vec::is_empty) {
            return Ok(Abp::zero(nvars, field));
        }

        let widths = self.widths();
        let mut b = Vec::new();
        let mut c = Vec::new();
        let mut mats: Vec<Transition> = Vec::new();
        for (s, step) in steps.into_iter().enumerate() {
            let depth = step.iter().map(|ch| ch.abp.mats.len()).max().unwrap_or(0);
            let chains: Vec<Chain> = step
                .into_iter()
                .map(|ch| Chain { abp: ch.abp.pad_to(depth), ..ch })
                .collect();
            // offsets[t][idx]: position of chain idx inside internal layer t
            let mut layer_widths = vec![0usize; depth + 1];
            let mut offsets = vec![Vec::with_capacity(chains.len()); depth + 1];
            for ch in &chains {
                for (t, w) in ch.abp.widths().into_iter().enumerate() {
                    offsets[t].push(layer_widths[t]);
                    layer_widths[t] += w;
                }
            }

            // entry into the step
            if s == 0 {
                b = vec![LinearForm::zero(nvars, field); layer_widths[0]];
                for (idx, ch) in chains.iter().enumerate() {
                    for (i, l) in ch.abp.b.iter().enumerate() {
                        b[offsets[0][idx] + i] = l.clone();
                    }
                }
            } else {
                let mut t = Transition::new(widths[s - 1], layer_widths[0]);
                for (idx, ch) in chains.iter().enumerate() {
                    let u = ch.from.expect("interior chain has a start");
                    for (i, l) in ch.abp.b.iter().enumerate() {
                        t.set(u, offsets[0][idx] + i, l.clone());
                    }
                }
                mats.push(t);
            }

            // block-diagonal interior
            for layer in 0..depth {
                let mut t = Transition::new(layer_widths[layer], layer_widths[layer + 1]);
                for (idx, ch) in chains.iter().enumerate() {
                    for (i, j, l) in ch.abp.mats[layer].iter() {
                        t.set(offsets[layer][idx] + i, offsets[layer + 1][idx] + j, l.clone());
                    }
                }
                mats.push(t);
            }

            // exit from the step
            if s == k + 1 {
                c = vec![LinearForm::zero(nvars, field); layer_widths[depth]];
                for (idx, ch) in chains.iter().enumerate() {
                    for (i, l) in ch.abp.c.iter().enumerate() {
                        c[offsets[depth][idx] + i] = l.clone();
                    }
                }
            } else {
                let mut t = Transition::new(layer_widths[depth], widths[s]);
                for (idx, ch) in chains.iter().enumerate() {
                    let v = ch.to.expect("interior chain has an end");
                    for (i, l) in ch.abp.c.iter().enumerate() {
                        t.set(offsets[depth][idx] + i, v, l.clone());
                    }
                }
                mats.push(t);
            }
        }
        Ok(Abp::from_parts(nvars, field, b, mats, c).prune())
    }
}

/// Grid form of [`Abp::substitute`]: `outer` is over the `m^2` variables
/// `y_{ij}` (index `i * m + j`) and `inner[i][j]` replaces `y_{ij}`.
pub fn abp_substitute(outer: &Abp, inner: &[Vec<Abp>]) -> Result<Abp, AbpError> {
    let m = inner.len();
    if inner.iter().any(|row| row.len() != m) || outer.nvars != m * m {
        return Err(AbpError::VariableCountMismatch { expected: m * m, got: outer.nvars, m });
    }
    let flat: Vec<Abp> = inner.iter().flatten().cloned().collect();
    outer.substitute(&flat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abp::mv97_det_abp;
    use crate::field::FieldSpec;
    use crate::poly::Poly;

    const Q: FieldSpec = FieldSpec::Rational;

    fn x(n: usize, i: usize) -> LinearForm {
        LinearForm::var(n, i, Q)
    }

    fn product(n: usize, i: usize, j: usize) -> Abp {
        Abp::new(n, Q, vec![x(n, i)], vec![], vec![x(n, j)]).unwrap()
    }

    #[test]
    fn identity_substitution() {
        let outer = Abp::from_linear(x(1, 0));
        let got = outer.substitute(&[product(2, 0, 1)]).unwrap();
        assert_eq!(got.to_poly(), product(2, 0, 1).to_poly());
    }

    #[test]
    fn affine_label() {
        let label = LinearForm::new(1, Q.from_i64(3), [(0, Q.from_i64(2))]).unwrap();
        let outer = Abp::from_linear(label);
        let got = outer.substitute(&[Abp::from_linear(x(1, 0))]).unwrap();
        let expected = Poly::var(1, 0, Q).scale(&Q.from_i64(2)).add(&Poly::constant(1, Q.from_i64(3)));
        assert_eq!(got.to_poly(), expected);
    }

    #[test]
    fn determinant_of_diagonal_entries() {
        let n = 2;
        let zero = Abp::zero(n, Q);
        let grid = vec![
            vec![Abp::from_linear(x(n, 0)), zero.clone()],
            vec![zero, Abp::from_linear(x(n, 1))],
        ];
        let got = abp_substitute(&mv97_det_abp(2, Q), &grid).unwrap();
        assert_eq!(got.to_poly(), Poly::var(n, 0, Q).mul(&Poly::var(n, 1, Q)));
    }

    #[test]
    fn composes_with_deeper_inner_programs() {
        // det [[x0 x1, 1], [x2, x0 + 2]] = x0 x1 (x0 + 2) - x2
        let n = 3;
        let two = LinearForm::constant_form(n, Q.from_i64(2));
        let grid = vec![
            vec![product(n, 0, 1), Abp::from_linear(LinearForm::one(n, Q))],
            vec![Abp::from_linear(x(n, 2)), Abp::from_linear(x(n, 0).add(&two))],
        ];
        let got = abp_substitute(&mv97_det_abp(2, Q), &grid).unwrap();
        let p = |i| Poly::var(n, i, Q);
        let expected = p(0).mul(&p(1)).mul(&p(0).add(&Poly::constant(n, Q.from_i64(2)))).sub(&p(2));
        assert_eq!(got.to_poly(), expected);
    }

    #[test]
    fn count_mismatch() {
        let outer = mv97_det_abp(2, Q);
        assert!(matches!(
            outer.substitute(&[Abp::zero(1, Q)]),
            Err(AbpError::VariableCountMismatch { .. })
        ));
    }
}
