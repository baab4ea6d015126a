//! Determinantal representations: square matrices of affine linear forms.

use alloc::vec::Vec;

use crate::error::{AlgebraError, PencilError};
use crate::field::{FieldSpec, Modulus, Scalar};
use crate::linear::{FormMatrix, LinearForm};
use crate::matrix::Matrix;

/// An `s x s` matrix of affine linear forms `M = M0 + M'(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pencil {
    nvars: usize,
    field: FieldSpec,
    matrix: FormMatrix,
}

/// Rank of the constant part and the corank `r = s - rank0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RRegularityReport {
    pub s: usize,
    pub rank0: usize,
    pub r: usize,
}

impl RRegularityReport {
    pub fn is_regular(&self) -> bool {
        self.r == 1
    }
}

impl Pencil {
    /// Builds a pencil from `s * s` row-major entries.
    pub fn new(s: usize, nvars: usize, field: FieldSpec, entries: Vec<LinearForm>) -> Result<Self, PencilError> {
        if s == 0 {
            return Err(PencilError::Empty);
        }
        if entries.len() != s * s {
            return Err(PencilError::EntryCount { expected: s * s, got: entries.len() });
        }
        for e in &entries {
            if e.field() != field {
                return Err(AlgebraError::FieldMismatch { left: field, right: e.field() }.into());
            }
            if e.nvars() != nvars {
                return Err(AlgebraError::DimensionMismatch { expected: nvars, got: e.nvars() }.into());
            }
        }
        let matrix = FormMatrix::new(s, s, entries)?;
        Ok(Pencil { nvars, field, matrix })
    }

    pub fn from_matrix(nvars: usize, field: FieldSpec, matrix: FormMatrix) -> Result<Self, PencilError> {
        if matrix.rows() != matrix.cols() {
            return Err(PencilError::EntryCount {
                expected: matrix.rows() * matrix.rows(),
                got: matrix.rows() * matrix.cols(),
            });
        }
        Pencil::new(matrix.rows(), nvars, field, matrix.entries().to_vec())
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn entry(&self, i: usize, j: usize) -> &LinearForm {
        self.matrix.get(i, j)
    }

    pub fn matrix(&self) -> &FormMatrix {
        &self.matrix
    }

    pub fn constant_part(&self) -> Matrix {
        let s = self.size();
        Matrix::from_fn(s, s, self.field, |i, j| self.entry(i, j).constant().clone())
    }

    pub fn constant_rank(&self) -> RRegularityReport {
        let s = self.size();
        let rank0 = self.constant_part().rank();
        RRegularityReport { s, rank0, r: s - rank0 }
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Result<Matrix, AlgebraError> {
        if point.len() != self.nvars {
            return Err(AlgebraError::DimensionMismatch { expected: self.nvars, got: point.len() });
        }
        if let Some(x) = point.iter().find(|x| x.field() != self.field) {
            return Err(AlgebraError::FieldMismatch { left: self.field, right: x.field() });
        }
        let s = self.size();
        Ok(Matrix::from_fn(s, s, self.field, |i, j| self.entry(i, j).eval_unchecked(point)))
    }

    /// Determinant at a point.
    pub fn eval_det(&self, point: &[Scalar]) -> Result<Scalar, AlgebraError> {
        Ok(self.evaluate(point)?.det())
    }

    pub fn is_homogeneous(&self) -> bool {
        self.matrix.is_homogeneous()
    }

    pub fn reduce_mod(&self, m: Modulus) -> Option<Pencil> {
        let entries = self
            .matrix
            .entries()
            .iter()
            .map(|e| e.reduce_mod(m))
            .collect::<Option<Vec<_>>>()?;
        Some(Pencil {
            nvars: self.nvars,
            field: FieldSpec::Prime(m),
            matrix: FormMatrix::new(self.size(), self.size(), entries).expect("same shape"),
        })
    }

    /// Block-diagonal direct sum; the determinant is the product.
    pub fn direct_sum(blocks: &[Pencil]) -> Result<Pencil, PencilError> {
        let first = blocks.first().ok_or(PencilError::Empty)?;
        let (nvars, field) = (first.nvars, first.field);
        let s: usize = blocks.iter().map(Pencil::size).sum();
        let mut m = FormMatrix::zeros(s, s, nvars, field);
        let mut off = 0;
        for b in blocks {
            if b.field != field {
                return Err(AlgebraError::FieldMismatch { left: field, right: b.field }.into());
            }
            if b.nvars != nvars {
                return Err(AlgebraError::DimensionMismatch { expected: nvars, got: b.nvars }.into());
            }
            for i in 0..b.size() {
                for j in 0..b.size() {
                    *m.get_mut(off + i, off + j) = b.entry(i, j).clone();
                }
            }
            off += b.size();
        }
        Pencil::from_matrix(nvars, field, m)
    }

    /// Equivalent pencil with constant part `diag(0,..,0,1,..,1)` and the
    /// same determinant.
    ///
    /// Pivots are taken at the first nonzero constant in row-major order of
    /// the unreduced block, scaled to 1 and cleared along their row and
    /// column. The pivot block is then rotated to the bottom right with the
    /// same permutation on rows and columns (determinant unchanged), and the
    /// accumulated factor of the row/column operations is divided out of
    /// row 0, whose constant part is zero.
    pub fn normal_form(&self) -> Result<NormalFormPencil, PencilError> {
        let s = self.size();
        let field = self.field;
        let mut m = self.matrix.clone();
        // det(m) = factor * det(self) throughout.
        let mut factor = field.one();
        let mut rank = 0;
        while rank < s {
            let pivot = (rank..s)
                .flat_map(|i| (rank..s).map(move |j| (i, j)))
                .find(|&(i, j)| !m.get(i, j).constant().is_zero());
            let Some((pi, pj)) = pivot else { break };
            let k = rank;
            if pi != k {
                m.swap_rows(pi, k);
                factor = -factor;
            }
            if pj != k {
                m.swap_cols(pj, k);
                factor = -factor;
            }
            let inv = m.get(k, k).constant().inv()?;
            m.scale_row(k, &inv);
            factor = factor * &inv;
            for i in 0..s {
                if i == k {
                    continue;
                }
                let c = m.get(i, k).constant().clone();
                if !c.is_zero() {
                    m.add_row_multiple(i, k, &-c);
                }
            }
            for j in 0..s {
                if j == k {
                    continue;
                }
                let c = m.get(k, j).constant().clone();
                if !c.is_zero() {
                    m.add_col_multiple(j, k, &-c);
                }
            }
            rank += 1;
        }
        let r = s - rank;
        if r == 0 {
            return Err(PencilError::ConstantPartInvertible);
        }
        // Pivots sit at (0..rank); move them behind the r zero rows/columns.
        let order: Vec<usize> = (rank..s).chain(0..rank).collect();
        let mut out = FormMatrix::from_fn(s, s, |i, j| m.get(order[i], order[j]).clone());
        if !factor.is_one() {
            out.scale_row(0, &factor.inv()?);
        }
        let pencil = Pencil { nvars: self.nvars, field, matrix: out };
        Ok(NormalFormPencil { pencil, r })
    }
}

/// A pencil whose constant part is `diag(0,..,0,1,..,1)` with `r` zeros,
/// viewed in blocks as `[[A, B], [C, I - D]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalFormPencil {
    pencil: Pencil,
    r: usize,
}

/// The blocks `A` (r x r), `B` (r x (s-r)), `C` ((s-r) x r) and
/// `D = I - (bottom-right block)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blocks {
    pub a: FormMatrix,
    pub b: FormMatrix,
    pub c: FormMatrix,
    pub d: FormMatrix,
}

impl NormalFormPencil {
    /// Accepts a pencil that is already in normal form.
    pub fn new(pencil: Pencil) -> Result<Self, PencilError> {
        let s = pencil.size();
        let c0 = pencil.constant_part();
        let zeros = (0..s).take_while(|&i| c0.get(i, i).is_zero()).count();
        let ok = zeros > 0
            && (0..s).all(|i| {
            (0..s).all(|j| {
                let v = c0.get(i, j);
                if i == j && i >= zeros { v.is_one() } else { v.is_zero() }
            })
        });
        if !ok {
            return Err(PencilError::NotNormalForm);
        }
        Ok(NormalFormPencil { pencil, r: zeros })
    }

    pub fn pencil(&self) -> &Pencil {
        &self.pencil
    }

    pub fn into_pencil(self) -> Pencil {
        self.pencil
    }

    /// Corank of the constant part.
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn size(&self) -> usize {
        self.pencil.size()
    }

    pub fn blocks(&self) -> Blocks {
        let s = self.size();
        let r = self.r;
        let m = self.pencil.matrix();
        let one = LinearForm::one(self.pencil.nvars, self.pencil.field);
        let bottom = m.submatrix(r..s, r..s);
        let d = FormMatrix::from_fn(s - r, s - r, |i, j| {
            if i == j {
                one.sub(bottom.get(i, j))
            } else {
                bottom.get(i, j).neg()
            }
        });
        Blocks {
            a: m.submatrix(0..r, 0..r),
            b: m.submatrix(0..r, r..s),
            c: m.submatrix(r..s, 0..r),
            d,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    const Q: FieldSpec = FieldSpec::Rational;

    fn lf(n: usize, c: i64, coeffs: &[(usize, i64)]) -> LinearForm {
        LinearForm::new(n, Q.from_i64(c), coeffs.iter().map(|&(i, a)| (i, Q.from_i64(a)))).unwrap()
    }

    fn pencil(s: usize, n: usize, entries: Vec<LinearForm>) -> Pencil {
        Pencil::new(s, n, Q, entries).unwrap()
    }

    /// [[x, 0], [0, 1 + y]]
    fn diag_example() -> Pencil {
        pencil(2, 2, vec![lf(2, 0, &[(0, 1)]), lf(2, 0, &[]), lf(2, 0, &[]), lf(2, 1, &[(1, 1)])])
    }

    /// [[0, x, 0], [0, 1, -y], [-z, 0, 1]]
    fn xyz() -> Pencil {
        let z = |c| lf(3, c, &[]);
        pencil(3, 3, vec![
            z(0), lf(3, 0, &[(0, 1)]), z(0),
            z(0), z(1), lf(3, 0, &[(1, -1)]),
            lf(3, 0, &[(2, -1)]), z(0), z(1),
        ])
    }

    #[test]
    fn constant_rank_examples() {
        assert_eq!(diag_example().constant_rank(), RRegularityReport { s: 2, rank0: 1, r: 1 });
        let hom = pencil(2, 4, (0..4).map(|i| lf(4, 0, &[(i, 1)])).collect());
        assert_eq!(hom.constant_rank(), RRegularityReport { s: 2, rank0: 0, r: 2 });
        // [[1 + x, y], [1, z]]: constant part [[1, 0], [1, 0]]
        let p = pencil(2, 3, vec![lf(3, 1, &[(0, 1)]), lf(3, 0, &[(1, 1)]), lf(3, 1, &[]), lf(3, 0, &[(2, 1)])]);
        assert_eq!(p.constant_rank().r, 1);
    }

    #[test]
    fn normal_form_keeps_normal_input() {
        let p = diag_example();
        let nf = p.normal_form().unwrap();
        assert_eq!(nf.r(), 1);
        assert_eq!(nf.pencil(), &p);
    }

    #[test]
    fn normal_form_rejects_invertible_constant() {
        // [[1 + x, y], [y, 1 + x]]
        let p = pencil(2, 2, vec![lf(2, 1, &[(0, 1)]), lf(2, 0, &[(1, 1)]), lf(2, 0, &[(1, 1)]), lf(2, 1, &[(0, 1)])]);
        assert_eq!(p.normal_form(), Err(PencilError::ConstantPartInvertible));
    }

    #[test]
    fn normal_form_of_mixed_pencil_preserves_det_at_points() {
        // [[1 + x, y], [1, z]] has det (1 + x) z - y.
        let p = pencil(2, 3, vec![lf(3, 1, &[(0, 1)]), lf(3, 0, &[(1, 1)]), lf(3, 1, &[]), lf(3, 0, &[(2, 1)])]);
        let nf = p.normal_form().unwrap();
        let c0 = nf.pencil().constant_part();
        assert!(c0.get(0, 0).is_zero() && c0.get(1, 1).is_one());
        assert!(c0.get(0, 1).is_zero() && c0.get(1, 0).is_zero());
        for pt in [[2, 3, 5], [-1, 4, 7], [0, 0, 1]] {
            let pt: Vec<Scalar> = pt.iter().map(|&v| Q.from_i64(v)).collect();
            let expected = (Q.one() + &pt[0]) * &pt[2] - &pt[1];
            assert_eq!(nf.pencil().eval_det(&pt).unwrap(), expected);
            assert_eq!(p.eval_det(&pt).unwrap(), expected);
        }
    }

    #[test]
    fn blocks_of_xyz_pencil() {
        let nf = NormalFormPencil::new(xyz()).unwrap();
        assert_eq!(nf.r(), 1);
        let Blocks { a, b, c, d } = nf.blocks();
        assert_eq!(a.entries(), &[lf(3, 0, &[])]);
        assert_eq!(b.entries(), &[lf(3, 0, &[(0, 1)]), lf(3, 0, &[])]);
        assert_eq!(c.entries(), &[lf(3, 0, &[]), lf(3, 0, &[(2, -1)])]);
        assert_eq!(d.entries(), &[lf(3, 0, &[]), lf(3, 0, &[(1, 1)]), lf(3, 0, &[]), lf(3, 0, &[])]);
    }

    #[test]
    fn blocks_of_small_pencils() {
        let p = pencil(2, 1, vec![lf(1, 0, &[(0, 1)]), lf(1, 0, &[]), lf(1, 0, &[]), lf(1, 1, &[])]);
        let Blocks { a, b, c, d } = NormalFormPencil::new(p).unwrap().blocks();
        assert_eq!(a.entries(), &[lf(1, 0, &[(0, 1)])]);
        assert!(b.entries()[0].is_zero() && c.entries()[0].is_zero() && d.entries()[0].is_zero());

        let p = pencil(2, 2, vec![lf(2, 0, &[]), lf(2, 0, &[(0, 1)]), lf(2, 0, &[(1, -1)]), lf(2, 1, &[])]);
        let Blocks { a, b, c, d } = NormalFormPencil::new(p).unwrap().blocks();
        assert!(a.entries()[0].is_zero());
        assert_eq!(b.entries(), &[lf(2, 0, &[(0, 1)])]);
        assert_eq!(c.entries(), &[lf(2, 0, &[(1, -1)])]);
        assert!(d.entries()[0].is_zero());
    }

    #[test]
    fn eval_det_examples() {
        let pt = [Q.from_i64(2), Q.from_i64(3)];
        assert_eq!(diag_example().eval_det(&pt).unwrap(), Q.from_i64(8));
        let ones = [Q.one(), Q.one(), Q.one()];
        assert_eq!(xyz().eval_det(&ones).unwrap(), Q.one());
        let zero = [Q.zero(), Q.zero(), Q.zero()];
        assert_eq!(xyz().eval_det(&zero).unwrap(), xyz().constant_part().det());
        assert!(xyz().eval_det(&pt).is_err());
    }

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(Pencil::new(0, 1, Q, vec![]), Err(PencilError::Empty));
        assert!(matches!(
            Pencil::new(2, 1, Q, vec![lf(1, 0, &[])]),
            Err(PencilError::EntryCount { expected: 4, got: 1 })
        ));
        assert!(NormalFormPencil::new(pencil(1, 1, vec![lf(1, 1, &[])])).is_err());
        let swapped = pencil(2, 1, vec![lf(1, 1, &[]), lf(1, 0, &[]), lf(1, 0, &[]), lf(1, 0, &[(0, 1)])]);
        assert_eq!(NormalFormPencil::new(swapped), Err(PencilError::NotNormalForm));
    }
}
