//! Pencils to homogeneous ABPs, and the reverse reduction.
//!
//! Three constructions are dispatched on the corank `r` of the constant
//! part:
//!
//! * `r = 1` (regular): after normal form `[[a, b^T], [c, I - D]]`, the
//!   determinant is `-b^T D^(d-2) c`, an ABP of width exactly `s - 1`.
//! * `1 < r < s`: the truncated Schur complement
//!   `W = A - B (I + D + ... + D^T) C` is built entrywise as ABPs, fed into
//!   the clow-sequence determinant ABP of size `r`, and the degree-`d`
//!   component of the result is extracted.
//! * `r = s` (zero constant part): the entries go straight into the
//!   determinant ABP of size `s`.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::abp::{homogenize_with_report, mv97_det_abp, series_entry_abp, Abp, HomogenizeReport, Transition};
use crate::error::{AbpError, ConvertError};
use crate::field::Scalar;
use crate::linear::{FormMatrix, LinearForm};
use crate::pencil::{NormalFormPencil, Pencil};
use crate::poly::Poly;
use crate::verify::{certify_homogeneous, CertifyMethod};

/// Which construction produced the ABP.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Path {
    Regular,
    General,
    FullyHomogeneousDirect,
    /// `d = 1`: the determinant is a single linear form.
    DegreeOne,
}

impl Path {
    pub fn as_str(self) -> &'static str {
        match self {
            Path::Regular => "Regular",
            Path::General => "General",
            Path::FullyHomogeneousDirect => "FullyHomogeneousDirect",
            Path::DegreeOne => "DegreeOne",
        }
    }
}

/// Requested construction; `Auto` dispatches on the corank.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    #[default]
    Auto,
    Regular,
    General,
}

/// Where the series `I + D + D^2 + ...` inside `W` is cut off.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Truncation {
    /// Up to `D^(d-2)`.
    #[default]
    Standard,
    /// Up to `D^(d-r-1)`, the smallest index for which every product of `r`
    /// entries of `W` still agrees with the exact Schur complement in
    /// degree `d`; no series at all when `d < r + 1`.
    Tight,
    /// Up to `D^t`.
    Index(usize),
}

impl Truncation {
    /// Highest power of `D` kept, or `None` when the series is dropped.
    pub fn last_power(self, d: usize, r: usize) -> Option<usize> {
        match self {
            Truncation::Standard => d.checked_sub(2),
            Truncation::Tight => d.checked_sub(r + 1),
            Truncation::Index(t) => Some(t),
        }
    }
}

/// Conversion settings. `c` and `c_prime` are the constants in the size
/// bounds `c * d^5 * s` and `c_prime * r^3 * d^2 * s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ConvertOptions {
    pub mode: Mode,
    pub truncation: Truncation,
    pub c: u64,
    pub c_prime: u64,
    /// Homogeneity check run before converting; `None` trusts the caller.
    pub certify: Option<CertifyMethod>,
}

impl Default for ConvertOptions {
    fn default() -> Self {
        ConvertOptions {
            mode: Mode::Auto,
            truncation: Truncation::Standard,
            c: 64,
            c_prime: 64,
            certify: Some(CertifyMethod::Auto { trials: 64, seed: 0 }),
        }
    }
}

/// Measured resources of a conversion next to the applicable bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConversionReport {
    pub s: usize,
    pub d: usize,
    pub r: usize,
    pub path: Path,
    pub out_size: usize,
    pub out_width: usize,
    pub out_layers: usize,
    /// Regular path: exactly `(d-1)(s-1)`; otherwise `c * d^5 * s`.
    pub bound_size: u128,
    /// Regular path: exactly `s - 1`; no width bound otherwise.
    pub bound_width: Option<usize>,
    /// `c_prime * r^3 * d^2 * s`.
    pub bound_size_r: u128,
    pub c: u64,
    pub c_prime: u64,
    /// Highest power of `D` kept in `W` (general path).
    pub truncation: Option<usize>,
    /// Size and width of the program before homogenization.
    pub substituted_size: Option<usize>,
    pub substituted_width: Option<usize>,
    pub homogenization: Option<HomogenizeReport>,
}

impl ConversionReport {
    /// Whether the measured size and width respect every applicable bound.
    pub fn within_bounds(&self) -> bool {
        let size_ok = match self.path {
            Path::Regular => self.out_size as u128 == self.bound_size,
            _ => self.out_size as u128 <= self.bound_size && self.out_size as u128 <= self.bound_size_r,
        };
        let width_ok = self.bound_width.is_none_or(|w| self.out_width == w);
        size_ok && width_ok
    }

    /// `out_size / (d^5 s)` in millionths, the measured constant of the
    /// `d^5 s` bound (compare with `c`).
    pub fn ratio_micros(&self) -> u128 {
        let denom = (self.d as u128).pow(5) * self.s as u128;
        if denom == 0 {
            return 0;
        }
        self.out_size as u128 * 1_000_000 / denom
    }

    /// [`ConversionReport::ratio_micros`] as a fixed-point decimal string.
    pub fn ratio_string(&self) -> alloc::string::String {
        let m = self.ratio_micros();
        alloc::format!("{}.{:06}", m / 1_000_000, m % 1_000_000)
    }
}

fn size_bounds(opts: &ConvertOptions, s: usize, d: usize, r: usize) -> (u128, u128) {
    let (s, d, r) = (s as u128, d as u128, r as u128);
    (opts.c as u128 * d.pow(5) * s, opts.c_prime as u128 * r.pow(3) * d.pow(2) * s)
}

fn require_regular(nf: &NormalFormPencil) -> Result<(), ConvertError> {
    if nf.r() != 1 {
        return Err(ConvertError::NotRegular { r: nf.r() });
    }
    Ok(())
}

/// The width-`(s-1)` homogeneous ABP `-b^T D^(d-2) c` of a regular pencil
/// in normal form: `b` is the top row of the `B` block, `c` the negated
/// `C` column, and all `d - 2` transition matrices equal `D`.
pub fn regular_to_abp(nf: &NormalFormPencil, d: usize) -> Result<Abp, ConvertError> {
    require_regular(nf)?;
    if d < 2 {
        return Err(ConvertError::DegreeTooSmall(d));
    }
    let p = nf.pencil();
    if nf.size() == 1 {
        return Ok(Abp::zero(p.nvars(), p.field()));
    }
    let blocks = nf.blocks();
    let b = blocks.b.row(0).to_vec();
    let c = blocks.c.column(0).iter().map(LinearForm::neg).collect();
    let step = Transition::from_dense(&blocks.d);
    Ok(Abp::new(p.nvars(), p.field(), b, vec![step; d - 2], c)?)
}

/// Outcome of [`check_regular_vanishing`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingReport {
    /// `a = 0`.
    pub a_zero: bool,
    /// Entry `i` is `b^T D^i c = 0`, for `0 <= i <= d - 3`.
    pub equations: Vec<bool>,
}

impl VanishingReport {
    pub fn passed(&self) -> bool {
        self.a_zero && self.equations.iter().all(|&ok| ok)
    }
}

/// Symbolically checks the identities a regular pencil with a homogeneous
/// degree-`d` determinant must satisfy: `a = 0` and `b^T D^i c = 0` for
/// `0 <= i <= d - 3`.
pub fn check_regular_vanishing(nf: &NormalFormPencil, d: usize) -> Result<VanishingReport, ConvertError> {
    require_regular(nf)?;
    if d < 2 {
        return Err(ConvertError::DegreeTooSmall(d));
    }
    let blocks = nf.blocks();
    let a_zero = blocks.a.get(0, 0).is_zero();
    let m = blocks.d.rows();
    let b: Vec<Poly> = blocks.b.row(0).iter().map(LinearForm::to_poly).collect();
    let dm: Vec<Vec<Poly>> = (0..m).map(|i| (0..m).map(|j| blocks.d.get(i, j).to_poly()).collect()).collect();
    let (nvars, field) = (nf.pencil().nvars(), nf.pencil().field());
    let mut v: Vec<Poly> = blocks.c.column(0).iter().map(LinearForm::to_poly).collect();
    let mut equations = Vec::new();
    for i in 0..d.saturating_sub(2) {
        let value = b.iter().zip(&v).fold(Poly::zero(nvars, field), |acc, (x, y)| acc.add(&x.mul(y)));
        equations.push(value.is_zero());
        if i + 1 < d - 2 {
            v = (0..m)
                .map(|r| (0..m).fold(Poly::zero(nvars, field), |acc, t| acc.add(&dm[r][t].mul(&v[t]))))
                .collect();
        }
    }
    Ok(VanishingReport { a_zero, equations })
}

/// The `r x r` grid of ABPs for `W = A - B (I + D + ... + D^T) C` with `T`
/// chosen by `truncation`.
pub fn build_w(nf: &NormalFormPencil, d: usize, truncation: Truncation) -> Result<Vec<Vec<Abp>>, ConvertError> {
    if d < 2 {
        return Err(ConvertError::DegreeTooSmall(d));
    }
    let p = nf.pencil();
    let (nvars, field) = (p.nvars(), p.field());
    let r = nf.r();
    let blocks = nf.blocks();
    let last = truncation.last_power(d, r);
    let minus_one = -field.one();
    let entry = |i: usize, j: usize| -> Result<Abp, ConvertError> {
        let a_term = Abp::from_linear(blocks.a.get(i, j).clone());
        let series = match last {
            Some(t) if blocks.d.rows() > 0 => {
                let u = blocks.b.row(i).to_vec();
                let v = blocks.c.column(j);
                series_entry_abp(&u, &blocks.d, &v, t, nvars, field).prune()
            }
            _ => return Ok(a_term),
        };
        if series.is_zero_program() {
            return Ok(a_term);
        }
        let series = series.scale(&minus_one);
        if blocks.a.get(i, j).is_zero() {
            return Ok(series);
        }
        Ok(a_term.sum(&series)?.abp.prune())
    };
    (0..r).map(|i| (0..r).map(|j| entry(i, j)).collect()).collect()
}

/// Symbolic `W` (for oracle checks on small instances).
pub fn w_polys(nf: &NormalFormPencil, d: usize, truncation: Truncation) -> Result<Vec<Vec<Poly>>, ConvertError> {
    Ok(build_w(nf, d, truncation)?
        .iter()
        .map(|row| row.iter().map(Abp::to_poly).collect())
        .collect())
}

/// Converts a pencil whose determinant is homogeneous of degree `d` into an
/// ABP computing exactly that determinant.
pub fn general_to_abp(p: &Pencil, d: usize, opts: &ConvertOptions) -> Result<(Abp, ConversionReport), ConvertError> {
    if d == 0 {
        return Err(ConvertError::DegreeTooSmall(0));
    }
    if let Some(method) = opts.certify {
        let verdict = certify_homogeneous(p, d, method)?;
        if !verdict.is_success() {
            return Err(ConvertError::NotHomogeneous { expected: d, witness: verdict.degrees });
        }
    }
    let s = p.size();
    let r = p.constant_rank().r;
    let path = match (opts.mode, d) {
        (Mode::Regular, _) => Path::Regular,
        (_, 1) => Path::DegreeOne,
        (Mode::General, _) => Path::General,
        (Mode::Auto, _) if r == s => Path::FullyHomogeneousDirect,
        (Mode::Auto, _) if r == 1 => Path::Regular,
        (Mode::Auto, _) => Path::General,
    };
    let (bound_general, bound_size_r) = size_bounds(opts, s, d, r);
    let mut report = ConversionReport {
        s,
        d,
        r,
        path,
        out_size: 0,
        out_width: 0,
        out_layers: 0,
        bound_size: bound_general,
        bound_width: None,
        bound_size_r,
        c: opts.c,
        c_prime: opts.c_prime,
        truncation: None,
        substituted_size: None,
        substituted_width: None,
        homogenization: None,
    };
    let abp = match path {
        Path::Regular => {
            let nf = p.normal_form()?;
            let abp = regular_to_abp(&nf, d)?;
            report.bound_size = ((d - 1) * (s - 1)) as u128;
            report.bound_width = Some(s - 1);
            abp
        }
        Path::DegreeOne => {
            // With r = 1 the linear component of the determinant is the
            // top-left entry of the normal form; with r > 1 every term has
            // degree at least r.
            let nf = p.normal_form()?;
            let form = if nf.r() == 1 {
                nf.pencil().entry(0, 0).clone()
            } else {
                LinearForm::zero(p.nvars(), p.field())
            };
            Abp::from_linear(form)
        }
        Path::FullyHomogeneousDirect => {
            if s != d {
                return Err(ConvertError::SizeDegreeMismatch { s, d });
            }
            let outer = mv97_det_abp(s, p.field());
            let substituted = outer.substitute_linear(p.matrix().entries())?;
            finish_general(&substituted, d, &mut report)
        }
        Path::General => {
            let nf = p.normal_form()?;
            report.truncation = opts.truncation.last_power(d, nf.r());
            let w = build_w(&nf, d, opts.truncation)?;
            let flat: Vec<Abp> = w.into_iter().flatten().collect();
            let outer = mv97_det_abp(nf.r(), p.field());
            let substituted = outer.substitute(&flat)?;
            finish_general(&substituted, d, &mut report)
        }
    };
    report.out_size = abp.size();
    report.out_width = abp.width();
    report.out_layers = abp.layers();
    Ok((abp, report))
}

fn finish_general(substituted: &Abp, d: usize, report: &mut ConversionReport) -> Abp {
    report.substituted_size = Some(substituted.size());
    report.substituted_width = Some(substituted.width());
    let (component, hrep) = homogenize_with_report(substituted, d);
    report.homogenization = Some(hrep);
    component.into_abp()
}

/// A pencil whose determinant is the polynomial computed by `a`.
///
/// With source `S`, sink `T` and the `m` vertices of `a` in between, the
/// weighted adjacency matrix `A` of the layered graph is nilpotent, so the
/// path sum `f` is the `(S, T)` entry of `(I - A)^-1`, i.e. the cofactor
/// `(-1)^(m+1) det N` where `N` is `I - A` without row `T` and column `S`.
/// Rows of `N` are `[S, vertices]` and columns `[vertices, T]`, so the unit
/// diagonal of `I - A` lands on the subdiagonal and the constant part of a
/// homogeneous program has rank exactly `m`. The sign is folded into row
/// `S`. Rows or columns whose entries are all constant are then eliminated
/// against a nonzero pivot, which keeps the corank and the determinant.
pub fn abp_to_pencil(a: &Abp) -> Result<Pencil, AbpError> {
    let pencil = abp_to_pencil_uncompressed(a)?;
    Ok(compress_constant_lines(pencil))
}

/// [`abp_to_pencil`] without eliminating constant rows and columns; the
/// pencil has size exactly `size(a) + 1`.
pub fn abp_to_pencil_uncompressed(a: &Abp) -> Result<Pencil, AbpError> {
    let (nvars, field) = (a.nvars(), a.field());
    let origin = vec![field.zero(); nvars];
    let at_zero = a.eval(&origin)?;
    if !at_zero.is_zero() {
        return Err(AbpError::NonzeroConstantTerm(at_zero.to_string()));
    }
    let widths = a.widths();
    let m: usize = widths.iter().sum();
    let mut offset = vec![0usize; widths.len()];
    for t in 1..widths.len() {
        offset[t] = offset[t - 1] + widths[t - 1];
    }
    let mut n = FormMatrix::zeros(m + 1, m + 1, nvars, field);
    for g in 0..m {
        *n.get_mut(1 + g, g) = LinearForm::one(nvars, field);
    }
    for (v, l) in a.b().iter().enumerate() {
        *n.get_mut(0, v) = l.neg();
    }
    for (t, mat) in a.mats().iter().enumerate() {
        for (u, v, l) in mat.iter() {
            *n.get_mut(1 + offset[t] + u, offset[t + 1] + v) = l.neg();
        }
    }
    let last = widths.len() - 1;
    for (v, l) in a.c().iter().enumerate() {
        *n.get_mut(1 + offset[last] + v, m) = l.neg();
    }
    if m.is_multiple_of(2) {
        n.scale_row(0, &-field.one());
    }
    Ok(Pencil::from_matrix(nvars, field, n).expect("square by construction"))
}

/// Repeatedly removes a row (or column) whose entries are all constant,
/// expanding the determinant along it after clearing it against its first
/// nonzero entry.
fn compress_constant_lines(p: Pencil) -> Pencil {
    let (nvars, field) = (p.nvars(), p.field());
    let mut m = p.matrix().clone();
    loop {
        let s = m.rows();
        if s <= 1 {
            break;
        }
        let constant_row = (0..s).find_map(|i| {
            if m.row(i).iter().all(LinearForm::is_constant) {
                (0..s).find(|&j| !m.get(i, j).constant().is_zero()).map(|j| (i, j, true))
            } else {
                None
            }
        });
        let constant_col = || {
            (0..s).find_map(|j| {
                if (0..s).all(|i| m.get(i, j).is_constant()) {
                    (0..s).find(|&i| !m.get(i, j).constant().is_zero()).map(|i| (i, j, false))
                } else {
                    None
                }
            })
        };
        let Some((pi, pj, by_row)) = constant_row.or_else(constant_col) else { break };
        let pivot = m.get(pi, pj).constant().clone();
        let inv = pivot.inv().expect("nonzero pivot");
        if by_row {
            for j in 0..s {
                let c = m.get(pi, j).constant().clone();
                if j != pj && !c.is_zero() {
                    m.add_col_multiple(j, pj, &-(&c * &inv));
                }
            }
        } else {
            for i in 0..s {
                let c = m.get(i, pj).constant().clone();
                if i != pi && !c.is_zero() {
                    m.add_row_multiple(i, pi, &-(&c * &inv));
                }
            }
        }
        // det = (-1)^(pi+pj) * pivot * det(minor)
        let sign: Scalar = if (pi + pj) % 2 == 0 { field.one() } else { -field.one() };
        let factor = sign * &pivot;
        let rows: Vec<usize> = (0..s).filter(|&i| i != pi).collect();
        let cols: Vec<usize> = (0..s).filter(|&j| j != pj).collect();
        let mut minor = FormMatrix::from_fn(s - 1, s - 1, |i, j| m.get(rows[i], cols[j]).clone());
        if !factor.is_one() {
            minor.scale_row(0, &factor);
        }
        m = minor;
    }
    Pencil::from_matrix(nvars, field, m).expect("square by construction")
}
