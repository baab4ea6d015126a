//! Layered algebraic branching programs `f = b^T M_1 ... M_k c`.
//!
//! Size counts vertices: `w_0 + ... + w_k`, one per entry of `b`, of each
//! intermediate layer and of `c`. The implied source and sink that the two
//! boundary contractions stand for are not counted. Transition matrices are
//! stored sparsely; absent entries are the zero form.

mod homogenize;
mod mv97;
mod series;
mod substitute;

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

pub use homogenize::{
    homogenize_component, homogenize_with_report, split_by_degree, HomComponent, HomogenizeReport, ScalarAbp,
};
pub use mv97::mv97_det_abp;
pub use series::{geometric_series_block, series_entry_abp};
pub use substitute::abp_substitute;

use crate::error::{AbpError, AlgebraError};
use crate::field::{FieldSpec, Modulus, Scalar};
use crate::linear::{FormMatrix, LinearForm};
use crate::poly::Poly;

/// Sparse `rows x cols` transition matrix of linear forms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, LinearForm>>,
}

impl Transition {
    pub fn new(rows: usize, cols: usize) -> Self {
        Transition { rows, cols, data: vec![BTreeMap::new(); rows] }
    }

    pub fn from_dense(m: &FormMatrix) -> Self {
        let mut t = Transition::new(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                t.set(i, j, m.get(i, j).clone());
            }
        }
        t
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Overwrites entry `(i, j)`; zero forms are not stored.
    pub fn set(&mut self, i: usize, j: usize, form: LinearForm) {
        assert!(i < self.rows && j < self.cols, "transition index out of range");
        if form.is_zero() {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, form);
        }
    }

    /// Adds `form` to entry `(i, j)`.
    pub fn accumulate(&mut self, i: usize, j: usize, form: &LinearForm) {
        if form.is_zero() {
            return;
        }
        let merged = match self.data[i].get(&j) {
            Some(old) => old.add(form),
            None => form.clone(),
        };
        self.set(i, j, merged);
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&LinearForm> {
        self.data[i].get(&j)
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, &LinearForm)> {
        self.data[i].iter().map(|(&j, f)| (j, f))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &LinearForm)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |(&j, f)| (i, j, f)))
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn to_dense(&self, nvars: usize, field: FieldSpec) -> FormMatrix {
        FormMatrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).cloned().unwrap_or_else(|| LinearForm::zero(nvars, field))
        })
    }

    fn map_forms(&self, mut f: impl FnMut(&LinearForm) -> LinearForm) -> Transition {
        let mut t = Transition::new(self.rows, self.cols);
        for (i, j, form) in self.iter() {
            t.set(i, j, f(form));
        }
        t
    }
}

/// A layered ABP over `nvars` variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Abp {
    nvars: usize,
    field: FieldSpec,
    b: Vec<LinearForm>,
    mats: Vec<Transition>,
    c: Vec<LinearForm>,
}

/// Result of [`Abp::sum`]: the program and the number of width-1 padding
/// layers that had to be inserted (non-zero padding breaks homogeneity).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbpSum {
    pub abp: Abp,
    pub padding: usize,
}

impl Abp {
    pub fn new(
        nvars: usize,
        field: FieldSpec,
        b: Vec<LinearForm>,
        mats: Vec<Transition>,
        c: Vec<LinearForm>,
    ) -> Result<Self, AbpError> {
        if b.is_empty() || c.is_empty() {
            return Err(AbpError::EmptyLayer);
        }
        let mut width = b.len();
        for (idx, m) in mats.iter().enumerate() {
            if m.rows != width || m.cols == 0 {
                return Err(AbpError::Shape { layer: idx + 1, rows: width, cols: m.cols });
            }
            width = m.cols;
        }
        if c.len() != width {
            return Err(AbpError::Shape { layer: mats.len() + 1, rows: width, cols: 1 });
        }
        let forms = b.iter().chain(c.iter()).chain(mats.iter().flat_map(|m| m.iter().map(|(_, _, f)| f)));
        for f in forms {
            if f.field() != field {
                return Err(AlgebraError::FieldMismatch { left: field, right: f.field() }.into());
            }
            if f.nvars() != nvars {
                return Err(AlgebraError::DimensionMismatch { expected: nvars, got: f.nvars() }.into());
            }
        }
        Ok(Abp { nvars, field, b, mats, c })
    }

    /// Builds from dense transition matrices.
    pub fn from_dense(
        nvars: usize,
        field: FieldSpec,
        b: Vec<LinearForm>,
        mats: &[FormMatrix],
        c: Vec<LinearForm>,
    ) -> Result<Self, AbpError> {
        Abp::new(nvars, field, b, mats.iter().map(Transition::from_dense).collect(), c)
    }

    pub(crate) fn from_parts(nvars: usize, field: FieldSpec, b: Vec<LinearForm>, mats: Vec<Transition>, c: Vec<LinearForm>) -> Self {
        debug_assert!(Abp::new(nvars, field, b.clone(), mats.clone(), c.clone()).is_ok());
        Abp { nvars, field, b, mats, c }
    }

    /// The program `0`, a single vertex with zero boundary labels.
    pub fn zero(nvars: usize, field: FieldSpec) -> Self {
        let z = LinearForm::zero(nvars, field);
        Abp { nvars, field, b: vec![z.clone()], mats: Vec::new(), c: vec![z] }
    }

    /// A single vertex computing the affine form `l` (`b = (l)`, `c = (1)`).
    pub fn from_linear(l: LinearForm) -> Self {
        let (nvars, field) = (l.nvars(), l.field());
        Abp { nvars, field, b: vec![l], mats: Vec::new(), c: vec![LinearForm::one(nvars, field)] }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn b(&self) -> &[LinearForm] {
        &self.b
    }

    pub fn c(&self) -> &[LinearForm] {
        &self.c
    }

    pub fn mats(&self) -> &[Transition] {
        &self.mats
    }

    /// Number of transition matrices `k`.
    pub fn num_mats(&self) -> usize {
        self.mats.len()
    }

    pub fn widths(&self) -> Vec<usize> {
        core::iter::once(self.b.len()).chain(self.mats.iter().map(|m| m.cols)).collect()
    }

    pub fn size(&self) -> usize {
        self.widths().iter().sum()
    }

    pub fn width(&self) -> usize {
        self.widths().into_iter().max().unwrap_or(0)
    }

    /// Layer count: the `k + 1` vertex layers plus one for the boundary
    /// contraction, i.e. `k + 2`.
    pub fn layers(&self) -> usize {
        self.mats.len() + 2
    }

    /// Upper bound on the degree of the computed polynomial.
    pub fn degree_bound(&self) -> usize {
        self.mats.len() + 2
    }

    pub fn is_homogeneous(&self) -> bool {
        self.all_forms().all(LinearForm::is_homogeneous)
    }

    pub fn is_zero_program(&self) -> bool {
        self.b.iter().all(LinearForm::is_zero) || self.c.iter().all(LinearForm::is_zero)
    }

    fn all_forms(&self) -> impl Iterator<Item = &LinearForm> {
        self.b
            .iter()
            .chain(self.c.iter())
            .chain(self.mats.iter().flat_map(|m| m.iter().map(|(_, _, f)| f)))
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar, AlgebraError> {
        if point.len() != self.nvars {
            return Err(AlgebraError::DimensionMismatch { expected: self.nvars, got: point.len() });
        }
        if let Some(x) = point.iter().find(|x| x.field() != self.field) {
            return Err(AlgebraError::FieldMismatch { left: self.field, right: x.field() });
        }
        let zero = self.field.zero();
        let mut v: Vec<Scalar> = self.b.iter().map(|l| l.eval_unchecked(point)).collect();
        for m in &self.mats {
            let mut next = vec![zero.clone(); m.cols];
            for (i, vi) in v.iter().enumerate() {
                if vi.is_zero() {
                    continue;
                }
                for (j, form) in m.row(i) {
                    next[j] = &next[j] + &(vi * &form.eval_unchecked(point));
                }
            }
            v = next;
        }
        let mut acc = zero;
        for (vi, ci) in v.iter().zip(&self.c) {
            if !vi.is_zero() {
                acc = acc + vi * &ci.eval_unchecked(point);
            }
        }
        Ok(acc)
    }

    /// Symbolic expansion of `b^T M_1 ... M_k c`.
    pub fn to_poly(&self) -> Poly {
        let zero = Poly::zero(self.nvars, self.field);
        let mut v: Vec<Poly> = self.b.iter().map(LinearForm::to_poly).collect();
        for m in &self.mats {
            let mut next = vec![zero.clone(); m.cols];
            for (i, vi) in v.iter().enumerate() {
                if vi.is_zero() {
                    continue;
                }
                for (j, form) in m.row(i) {
                    next[j] = next[j].add(&vi.mul_linear(form));
                }
            }
            v = next;
        }
        v.iter().zip(&self.c).fold(zero, |acc, (vi, ci)| acc.add(&vi.mul_linear(ci)))
    }

    /// Multiplies the computed polynomial by `s` (folded into `c`).
    pub fn scale(&self, s: &Scalar) -> Abp {
        let mut out = self.clone();
        out.c = out.c.iter().map(|l| l.scale(s)).collect();
        out
    }

    /// Appends width-1 layers labelled by the constant 1 until there are
    /// `k` transition matrices. The old `c` becomes the first appended
    /// matrix.
    pub fn pad_to(&self, k: usize) -> Abp {
        let mut out = self.clone();
        let one = LinearForm::one(self.nvars, self.field);
        while out.mats.len() < k {
            let mut t = Transition::new(out.c.len(), 1);
            for (i, l) in out.c.iter().enumerate() {
                t.set(i, 0, l.clone());
            }
            out.mats.push(t);
            out.c = vec![one.clone()];
        }
        out
    }

    /// Parallel composition computing `poly(self) + poly(other)`.
    pub fn sum(&self, other: &Abp) -> Result<AbpSum, AbpError> {
        if self.field != other.field {
            return Err(AlgebraError::FieldMismatch { left: self.field, right: other.field }.into());
        }
        if self.nvars != other.nvars {
            return Err(AlgebraError::DimensionMismatch { expected: self.nvars, got: other.nvars }.into());
        }
        let k = self.num_mats().max(other.num_mats());
        let padding = (k - self.num_mats()) + (k - other.num_mats());
        let (x, y) = (self.pad_to(k), other.pad_to(k));
        let b: Vec<LinearForm> = x.b.iter().chain(&y.b).cloned().collect();
        let c: Vec<LinearForm> = x.c.iter().chain(&y.c).cloned().collect();
        let mats = x
            .mats
            .iter()
            .zip(&y.mats)
            .map(|(m1, m2)| {
                let mut t = Transition::new(m1.rows + m2.rows, m1.cols + m2.cols);
                for (i, j, f) in m1.iter() {
                    t.set(i, j, f.clone());
                }
                for (i, j, f) in m2.iter() {
                    t.set(m1.rows + i, m1.cols + j, f.clone());
                }
                t
            })
            .collect();
        Ok(AbpSum { abp: Abp::from_parts(self.nvars, self.field, b, mats, c), padding })
    }

    /// Removes vertices that no source-to-sink path with nonzero labels
    /// passes through. Returns the zero program if nothing survives.
    pub fn prune(&self) -> Abp {
        let k = self.mats.len();
        let widths = self.widths();
        let mut fwd: Vec<Vec<bool>> = Vec::with_capacity(k + 1);
        fwd.push(self.b.iter().map(|l| !l.is_zero()).collect());
        for (t, m) in self.mats.iter().enumerate() {
            let mut next = vec![false; widths[t + 1]];
            for (i, j, _) in m.iter() {
                if fwd[t][i] {
                    next[j] = true;
                }
            }
            fwd.push(next);
        }
        let mut bwd: Vec<Vec<bool>> = vec![Vec::new(); k + 1];
        bwd[k] = self.c.iter().map(|l| !l.is_zero()).collect();
        for t in (0..k).rev() {
            let m = &self.mats[t];
            let mut cur = vec![false; widths[t]];
            for (i, j, _) in m.iter() {
                if bwd[t + 1][j] {
                    cur[i] = true;
                }
            }
            bwd[t] = cur;
        }
        let mut index: Vec<Vec<Option<usize>>> = Vec::with_capacity(k + 1);
        for t in 0..=k {
            let mut next_id = 0;
            let ids: Vec<Option<usize>> = (0..widths[t])
                .map(|v| {
                    (fwd[t][v] && bwd[t][v]).then(|| {
                        next_id += 1;
                        next_id - 1
                    })
                })
                .collect();
            if next_id == 0 {
                return Abp::zero(self.nvars, self.field);
            }
            index.push(ids);
        }
        let count = |t: usize| index[t].iter().flatten().count();
        let b = (0..widths[0]).filter(|&v| index[0][v].is_some()).map(|v| self.b[v].clone()).collect();
        let c = (0..widths[k]).filter(|&v| index[k][v].is_some()).map(|v| self.c[v].clone()).collect();
        let mats = self
            .mats
            .iter()
            .enumerate()
            .map(|(t, m)| {
                let mut out = Transition::new(count(t), count(t + 1));
                for (i, j, f) in m.iter() {
                    if let (Some(ni), Some(nj)) = (index[t][i], index[t + 1][j]) {
                        out.set(ni, nj, f.clone());
                    }
                }
                out
            })
            .collect();
        Abp::from_parts(self.nvars, self.field, b, mats, c)
    }

    /// Replaces every variable `y_i` by the affine form `forms[i]`.
    pub fn substitute_linear(&self, forms: &[LinearForm]) -> Result<Abp, AbpError> {
        if forms.len() != self.nvars {
            return Err(AbpError::VariableCountMismatch { expected: forms.len(), got: self.nvars, m: 0 });
        }
        let Some(first) = forms.first() else {
            return Ok(self.clone());
        };
        let (nvars, field) = (first.nvars(), first.field());
        if let Some(f) = forms.iter().find(|f| f.nvars() != nvars || f.field() != field) {
            return Err(AlgebraError::DimensionMismatch { expected: nvars, got: f.nvars() }.into());
        }
        let b = self.b.iter().map(|l| l.compose(forms)).collect();
        let c = self.c.iter().map(|l| l.compose(forms)).collect();
        let mats = self.mats.iter().map(|m| m.map_forms(|l| l.compose(forms))).collect();
        Ok(Abp { nvars, field, b, mats, c })
    }

    pub fn reduce_mod(&self, m: Modulus) -> Option<Abp> {
        let b = self.b.iter().map(|l| l.reduce_mod(m)).collect::<Option<Vec<_>>>()?;
        let c = self.c.iter().map(|l| l.reduce_mod(m)).collect::<Option<Vec<_>>>()?;
        let mut mats = Vec::with_capacity(self.mats.len());
        for t in &self.mats {
            let mut out = Transition::new(t.rows, t.cols);
            for (i, j, f) in t.iter() {
                out.set(i, j, f.reduce_mod(m)?);
            }
            mats.push(out);
        }
        Some(Abp { nvars: self.nvars, field: FieldSpec::Prime(m), b, mats, c })
    }
}
