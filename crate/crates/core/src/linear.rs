//! Affine linear forms and dense matrices of them.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::error::AlgebraError;
use crate::field::{FieldSpec, Modulus, Scalar};
use crate::poly::{Monomial, Poly};

/// `constant + sum coeffs[i] * x_i` over `nvars` variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    nvars: usize,
    constant: Scalar,
    coeffs: BTreeMap<usize, Scalar>,
}

impl LinearForm {
    pub fn zero(nvars: usize, field: FieldSpec) -> Self {
        LinearForm { nvars, constant: field.zero(), coeffs: BTreeMap::new() }
    }

    pub fn constant_form(nvars: usize, c: Scalar) -> Self {
        LinearForm { nvars, constant: c, coeffs: BTreeMap::new() }
    }

    pub fn one(nvars: usize, field: FieldSpec) -> Self {
        LinearForm::constant_form(nvars, field.one())
    }

    /// The variable `x_index`.
    pub fn var(nvars: usize, index: usize, field: FieldSpec) -> Self {
        assert!(index < nvars, "variable index out of range");
        let mut coeffs = BTreeMap::new();
        coeffs.insert(index, field.one());
        LinearForm { nvars, constant: field.zero(), coeffs }
    }

    /// Builds a form from its constant and `(index, coefficient)` pairs.
    /// Repeated indices are summed; zero coefficients dropped.
    pub fn new<I>(nvars: usize, constant: Scalar, coeffs: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (usize, Scalar)>,
    {
        let field = constant.field();
        let mut out = LinearForm::constant_form(nvars, constant);
        for (i, c) in coeffs {
            if i >= nvars {
                return Err(AlgebraError::VariableOutOfRange { index: i, nvars });
            }
            if c.field() != field {
                return Err(AlgebraError::FieldMismatch { left: field, right: c.field() });
            }
            out.add_coeff(i, c);
        }
        Ok(out)
    }

    fn add_coeff(&mut self, i: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let sum = match self.coeffs.get(&i) {
            Some(a) => a + &c,
            None => c,
        };
        if sum.is_zero() {
            self.coeffs.remove(&i);
        } else {
            self.coeffs.insert(i, sum);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> FieldSpec {
        self.constant.field()
    }

    pub fn constant(&self) -> &Scalar {
        &self.constant
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, Scalar> {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(&i).cloned().unwrap_or_else(|| self.field().zero())
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.is_empty()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.constant.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The form with its constant dropped.
    pub fn homogeneous_part(&self) -> LinearForm {
        LinearForm {
            nvars: self.nvars,
            constant: self.field().zero(),
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn add(&self, other: &LinearForm) -> LinearForm {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        out.constant = &out.constant + &other.constant;
        for (&i, c) in &other.coeffs {
            out.add_coeff(i, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LinearForm) -> LinearForm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LinearForm {
        self.scale(&-self.field().one())
    }

    pub fn scale(&self, c: &Scalar) -> LinearForm {
        if c.is_zero() {
            return LinearForm::zero(self.nvars, self.field());
        }
        LinearForm {
            nvars: self.nvars,
            constant: &self.constant * c,
            coeffs: self.coeffs.iter().map(|(&i, a)| (i, a * c)).collect(),
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&mut self, other: &LinearForm, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        self.constant = &self.constant + &(&other.constant * c);
        for (&i, a) in &other.coeffs {
            self.add_coeff(i, a * c);
        }
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar, AlgebraError> {
        if point.len() != self.nvars {
            return Err(AlgebraError::DimensionMismatch { expected: self.nvars, got: point.len() });
        }
        let mut acc = self.constant.clone();
        for (&i, c) in &self.coeffs {
            acc = acc.checked_add(&c.checked_mul(&point[i])?)?;
        }
        Ok(acc)
    }

    /// Evaluation without the length check; the caller guarantees it.
    pub(crate) fn eval_unchecked(&self, point: &[Scalar]) -> Scalar {
        let mut acc = self.constant.clone();
        for (&i, c) in &self.coeffs {
            acc = acc + c * &point[i];
        }
        acc
    }

    pub fn to_poly(&self) -> Poly {
        let field = self.field();
        let mut terms = Vec::with_capacity(self.coeffs.len() + 1);
        terms.push((Monomial::one(self.nvars).exponents().to_vec(), self.constant.clone()));
        for (&i, c) in &self.coeffs {
            terms.push((Monomial::var(self.nvars, i).exponents().to_vec(), c.clone()));
        }
        Poly::from_terms(self.nvars, field, terms).expect("well-formed linear form")
    }

    /// Replaces `x_i` by `forms[i]`; all forms share a variable count.
    pub fn compose(&self, forms: &[LinearForm]) -> LinearForm {
        assert_eq!(forms.len(), self.nvars);
        let nvars = forms.first().map_or(0, |f| f.nvars);
        let mut out = LinearForm::constant_form(nvars, self.constant.clone());
        for (&i, c) in &self.coeffs {
            out.add_scaled(&forms[i], c);
        }
        out
    }

    pub fn reduce_mod(&self, m: Modulus) -> Option<LinearForm> {
        let mut out = LinearForm::constant_form(self.nvars, self.constant.reduce_mod(m)?);
        for (&i, c) in &self.coeffs {
            out.add_coeff(i, c.reduce_mod(m)?);
        }
        Some(out)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

/// A dense `rows x cols` matrix of linear forms, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LinearForm>,
}

impl FormMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<LinearForm>) -> Result<Self, AlgebraError> {
        if entries.len() != rows * cols {
            return Err(AlgebraError::DimensionMismatch { expected: rows * cols, got: entries.len() });
        }
        Ok(FormMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize, nvars: usize, field: FieldSpec) -> Self {
        FormMatrix {
            rows,
            cols,
            entries: alloc::vec![LinearForm::zero(nvars, field); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> LinearForm) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        FormMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LinearForm {
        &self.entries[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut LinearForm {
        &mut self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[LinearForm] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[LinearForm] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<LinearForm> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn submatrix(&self, rows: core::ops::Range<usize>, cols: core::ops::Range<usize>) -> FormMatrix {
        let c0 = cols.start;
        let r0 = rows.start;
        FormMatrix::from_fn(rows.len(), cols.len(), |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn is_homogeneous(&self) -> bool {
        self.entries.iter().all(LinearForm::is_homogeneous)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn scale_row(&mut self, i: usize, c: &Scalar) {
        for j in 0..self.cols {
            let e = self.get(i, j).scale(c);
            *self.get_mut(i, j) = e;
        }
    }

    /// `row[target] += c * row[source]`.
    pub fn add_row_multiple(&mut self, target: usize, source: usize, c: &Scalar) {
        for j in 0..self.cols {
            let src = self.get(source, j).clone();
            self.get_mut(target, j).add_scaled(&src, c);
        }
    }

    /// `col[target] += c * col[source]`.
    pub fn add_col_multiple(&mut self, target: usize, source: usize, c: &Scalar) {
        for i in 0..self.rows {
            let src = self.get(i, source).clone();
            self.get_mut(i, target).add_scaled(&src, c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rational;

    #[test]
    fn homogeneity_tracks_constant() {
        let l = LinearForm::new(3, Q.zero(), [(0, Q.from_i64(2)), (2, Q.from_i64(-1))]).unwrap();
        assert!(l.is_homogeneous());
        let a = l.add(&LinearForm::one(3, Q));
        assert!(!a.is_homogeneous());
        assert_eq!(a.homogeneous_part(), l);
    }

    #[test]
    fn eval_at_origin_is_constant() {
        let l = LinearForm::new(2, Q.from_i64(5), [(1, Q.from_i64(7))]).unwrap();
        assert_eq!(l.eval(&[Q.zero(), Q.zero()]).unwrap(), Q.from_i64(5));
        assert_eq!(l.eval(&[Q.zero(), Q.one()]).unwrap(), Q.from_i64(12));
        assert!(l.eval(&[Q.zero()]).is_err());
    }

    #[test]
    fn cancellation_drops_coefficients() {
        let x = LinearForm::var(2, 0, Q);
        let z = x.sub(&x);
        assert!(z.is_zero());
        assert!(z.coeffs().is_empty());
        assert!(LinearForm::new(2, Q.zero(), [(2, Q.one())]).is_err());
    }

    #[test]
    fn composition_substitutes_forms() {
        // 2*y0 + 3 with y0 := x0 + x1 gives 2*x0 + 2*x1 + 3
        let outer = LinearForm::new(1, Q.from_i64(3), [(0, Q.from_i64(2))]).unwrap();
        let inner = LinearForm::var(2, 0, Q).add(&LinearForm::var(2, 1, Q));
        let got = outer.compose(&[inner]);
        let expected =
            LinearForm::new(2, Q.from_i64(3), [(0, Q.from_i64(2)), (1, Q.from_i64(2))]).unwrap();
        assert_eq!(got, expected);
    }
}
