//! Oracles: symbolic determinants, randomized identity testing,
//! homogeneity certification and the Schur-complement self-test.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use rand::Rng;

use crate::abp::Abp;
use crate::error::{AlgebraError, VerifyError};
use crate::field::{FieldSpec, Modulus, Scalar};
use crate::matrix::Matrix;
use crate::pencil::Pencil;
use crate::poly::{Homogeneity, Poly};
use crate::rng::{self, DetRng};

/// Anything that computes a polynomial and can be evaluated pointwise.
pub trait Evaluable: Sized {
    fn num_vars(&self) -> usize;
    fn field_spec(&self) -> FieldSpec;
    /// An upper bound on the total degree.
    fn degree_bound(&self) -> usize;
    fn evaluate_at(&self, point: &[Scalar]) -> Result<Scalar, AlgebraError>;
    fn reduced(&self, m: Modulus) -> Option<Self>;
    fn expand(&self) -> Poly;
    /// Whether [`Evaluable::expand`] is cheap enough for exact checks.
    fn symbolic_feasible(&self) -> bool;
}

impl Evaluable for Pencil {
    fn num_vars(&self) -> usize {
        self.nvars()
    }
    fn field_spec(&self) -> FieldSpec {
        self.field()
    }
    fn degree_bound(&self) -> usize {
        self.size()
    }
    fn evaluate_at(&self, point: &[Scalar]) -> Result<Scalar, AlgebraError> {
        self.eval_det(point)
    }
    fn reduced(&self, m: Modulus) -> Option<Self> {
        self.reduce_mod(m)
    }
    fn expand(&self) -> Poly {
        symbolic_det(self)
    }
    fn symbolic_feasible(&self) -> bool {
        self.size() <= 6
    }
}

impl Evaluable for Abp {
    fn num_vars(&self) -> usize {
        self.nvars()
    }
    fn field_spec(&self) -> FieldSpec {
        self.field()
    }
    fn degree_bound(&self) -> usize {
        Abp::degree_bound(self)
    }
    fn evaluate_at(&self, point: &[Scalar]) -> Result<Scalar, AlgebraError> {
        self.eval(point)
    }
    fn reduced(&self, m: Modulus) -> Option<Self> {
        self.reduce_mod(m)
    }
    fn expand(&self) -> Poly {
        self.to_poly()
    }
    fn symbolic_feasible(&self) -> bool {
        self.size() <= 64 && Abp::degree_bound(self) <= 6
    }
}

impl Evaluable for Poly {
    fn num_vars(&self) -> usize {
        self.nvars()
    }
    fn field_spec(&self) -> FieldSpec {
        self.field()
    }
    fn degree_bound(&self) -> usize {
        match self.degree() {
            crate::poly::Degree::Finite(d) => d,
            crate::poly::Degree::MinusInfinity => 0,
        }
    }
    fn evaluate_at(&self, point: &[Scalar]) -> Result<Scalar, AlgebraError> {
        self.eval(point)
    }
    fn reduced(&self, m: Modulus) -> Option<Self> {
        self.reduce_mod(m)
    }
    fn expand(&self) -> Poly {
        self.clone()
    }
    fn symbolic_feasible(&self) -> bool {
        true
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    Equal,
    NotEqual,
    Certified,
    Refuted,
    Pass,
    Fail,
}

impl VerdictKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictKind::Equal => "equal",
            VerdictKind::NotEqual => "not-equal",
            VerdictKind::Certified => "certified",
            VerdictKind::Refuted => "refuted",
            VerdictKind::Pass => "pass",
            VerdictKind::Fail => "fail",
        }
    }

    pub fn is_success(self) -> bool {
        matches!(self, VerdictKind::Equal | VerdictKind::Certified | VerdictKind::Pass)
    }
}

/// Per-trial probability that a randomized check misses a difference:
/// at most `degree / modulus`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ErrorBound {
    pub degree: usize,
    pub modulus: Modulus,
}

impl fmt::Display for ErrorBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.degree, self.modulus.get())
    }
}

/// Outcome of a check, reproducible from `(seed, trials)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub kind: VerdictKind,
    /// First failing point, if any.
    pub witness: Option<Vec<Scalar>>,
    /// Degrees of the homogeneous components found when refuting
    /// homogeneity.
    pub degrees: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// `None` for exact (symbolic) verdicts.
    pub error_bound: Option<ErrorBound>,
}

impl Verdict {
    fn exact(kind: VerdictKind) -> Self {
        Verdict { kind, witness: None, degrees: Vec::new(), trials: 0, seed: 0, error_bound: None }
    }

    pub fn is_success(&self) -> bool {
        self.kind.is_success()
    }
}

/// Determinant of a square matrix of polynomials by expansion over column
/// subsets: `dp[S]` is the signed sum over injections of the first `|S|`
/// rows onto `S`.
pub fn poly_det(entries: &[Vec<Poly>], nvars: usize, field: FieldSpec) -> Poly {
    let s = entries.len();
    assert!(entries.iter().all(|r| r.len() == s), "square matrix expected");
    assert!(s < usize::BITS as usize, "matrix too large for subset expansion");
    let mut dp: Vec<Option<Poly>> = vec![None; 1 << s];
    dp[0] = Some(Poly::one(nvars, field));
    for mask in 0usize..(1 << s) {
        let Some(cur) = dp[mask].take() else { continue };
        let row = mask.count_ones() as usize;
        if row == s {
            dp[mask] = Some(cur);
            continue;
        }
        for (j, entry) in entries[row].iter().enumerate() {
            if mask & (1 << j) != 0 || entry.is_zero() {
                continue;
            }
            // inversions with the columns already used by earlier rows
            let above = (mask >> (j + 1)).count_ones();
            let term = cur.mul(entry);
            let next = mask | (1 << j);
            let slot = dp[next].get_or_insert_with(|| Poly::zero(nvars, field));
            *slot = if above % 2 == 0 { slot.add(&term) } else { slot.sub(&term) };
        }
    }
    dp[(1 << s) - 1].take().unwrap_or_else(|| Poly::zero(nvars, field))
}

/// Exact determinant of a pencil as a polynomial.
pub fn symbolic_det(p: &Pencil) -> Poly {
    let s = p.size();
    let entries: Vec<Vec<Poly>> = (0..s).map(|i| (0..s).map(|j| p.entry(i, j).to_poly()).collect()).collect();
    poly_det(&entries, p.nvars(), p.field())
}

/// Maps a pair of operands into a common prime field: rationals go to
/// `2^61 - 1`, or to the fallback prime if a denominator vanishes there.
fn to_prime_field<A: Evaluable, B: Evaluable>(a: &A, b: &B) -> Result<(A, B, Modulus), VerifyError> {
    if a.num_vars() != b.num_vars() {
        return Err(VerifyError::Incompatible(format!(
            "{} variables vs {} variables",
            a.num_vars(),
            b.num_vars()
        )));
    }
    if a.field_spec() != b.field_spec() {
        return Err(AlgebraError::FieldMismatch { left: a.field_spec(), right: b.field_spec() }.into());
    }
    let candidates = match a.field_spec() {
        FieldSpec::Prime(m) => vec![m],
        FieldSpec::Rational => vec![Modulus::mersenne61(), Modulus::fallback()],
    };
    for m in candidates {
        if let (Some(x), Some(y)) = (a.reduced(m), b.reduced(m)) {
            return Ok((x, y, m));
        }
    }
    Err(VerifyError::Unreducible)
}

fn random_point(rng: &mut DetRng, nvars: usize, m: Modulus) -> Vec<Scalar> {
    let field = FieldSpec::Prime(m);
    (0..nvars).map(|_| rng::uniform(rng, field)).collect()
}

/// Schwartz-Zippel equality test at `trials` uniform points.
pub fn pit_equal<A: Evaluable, B: Evaluable>(lhs: &A, rhs: &B, trials: usize, seed: u64) -> Result<Verdict, VerifyError> {
    let (a, b, m) = to_prime_field(lhs, rhs)?;
    let mut rng = rng::rng_from_seed(seed);
    let degree = a.degree_bound().max(b.degree_bound());
    let mut verdict = Verdict {
        kind: VerdictKind::Equal,
        witness: None,
        degrees: Vec::new(),
        trials,
        seed,
        error_bound: Some(ErrorBound { degree, modulus: m }),
    };
    for _ in 0..trials {
        let point = random_point(&mut rng, a.num_vars(), m);
        if a.evaluate_at(&point)? != b.evaluate_at(&point)? {
            verdict.kind = VerdictKind::NotEqual;
            verdict.witness = Some(point);
            break;
        }
    }
    Ok(verdict)
}

/// Exact equality of the expanded polynomials.
pub fn symbolic_equal<A: Evaluable, B: Evaluable>(lhs: &A, rhs: &B) -> Result<Verdict, VerifyError> {
    if lhs.num_vars() != rhs.num_vars() {
        return Err(VerifyError::Incompatible(format!(
            "{} variables vs {} variables",
            lhs.num_vars(),
            rhs.num_vars()
        )));
    }
    if lhs.field_spec() != rhs.field_spec() {
        return Err(AlgebraError::FieldMismatch { left: lhs.field_spec(), right: rhs.field_spec() }.into());
    }
    let kind = if lhs.expand() == rhs.expand() { VerdictKind::Equal } else { VerdictKind::NotEqual };
    Ok(Verdict::exact(kind))
}

/// How homogeneity is to be established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CertifyMethod {
    Symbolic,
    Randomized { trials: usize, seed: u64 },
    /// Symbolic when the object is small, randomized otherwise.
    Auto { trials: usize, seed: u64 },
}

/// Coefficients of the univariate polynomial through `(ts[i], ys[i])`,
/// lowest degree first (Newton divided differences).
fn interpolate(ts: &[Scalar], ys: &[Scalar], field: FieldSpec) -> Vec<Scalar> {
    let n = ts.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = &coef[i] - &coef[i - 1];
            let den = &ts[i] - &ts[i - j];
            coef[i] = num.checked_div(&den).expect("interpolation nodes are distinct");
        }
    }
    let mut out = vec![field.zero(); n];
    for i in (0..n).rev() {
        let mut next = vec![field.zero(); n];
        for (k, c) in out.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k + 1 < n {
                next[k + 1] = &next[k + 1] + c;
            }
            next[k] = &next[k] - &(c * &ts[i]);
        }
        next[0] = &next[0] + &coef[i];
        out = next;
    }
    out
}

/// Degrees `e` for which `t^e` has a nonzero coefficient in `f(t * a)`.
/// These are degrees of nonzero homogeneous components of `f`.
fn ray_degrees<E: Evaluable>(f: &E, a: &[Scalar]) -> Result<Vec<usize>, AlgebraError> {
    let field = f.field_spec();
    let bound = f.degree_bound();
    let ts: Vec<Scalar> = (0..=bound).map(|t| field.from_i64(t as i64)).collect();
    let mut ys = Vec::with_capacity(ts.len());
    for t in &ts {
        let p: Vec<Scalar> = a.iter().map(|x| x * t).collect();
        ys.push(f.evaluate_at(&p)?);
    }
    Ok(interpolate(&ts, &ys, field)
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, _)| e)
        .collect())
}

fn reduce_one<E: Evaluable>(obj: &E) -> Result<(E, Modulus), VerifyError> {
    let candidates = match obj.field_spec() {
        FieldSpec::Prime(m) => vec![m],
        FieldSpec::Rational => vec![Modulus::mersenne61(), Modulus::fallback()],
    };
    for m in candidates {
        if let Some(x) = obj.reduced(m) {
            return Ok((x, m));
        }
    }
    Err(VerifyError::Unreducible)
}

/// Checks that `obj` computes a polynomial that is homogeneous of degree
/// `d` (the zero polynomial qualifies for every `d`). The randomized test
/// checks `f(t a) = t^d f(a)`; on failure the witnessing component degrees
/// are recovered by interpolation along the failing ray.
pub fn certify_homogeneous<E: Evaluable>(obj: &E, d: usize, method: CertifyMethod) -> Result<Verdict, VerifyError> {
    let (trials, seed) = match method {
        CertifyMethod::Symbolic => return Ok(certify_symbolic(obj, d)),
        CertifyMethod::Auto { .. } if obj.symbolic_feasible() => return Ok(certify_symbolic(obj, d)),
        CertifyMethod::Auto { trials, seed } | CertifyMethod::Randomized { trials, seed } => (trials, seed),
    };
    let (f, m) = reduce_one(obj)?;
    let field = FieldSpec::Prime(m);
    let mut rng = rng::rng_from_seed(seed);
    let mut verdict = Verdict {
        kind: VerdictKind::Certified,
        witness: None,
        degrees: Vec::new(),
        trials,
        seed,
        error_bound: Some(ErrorBound { degree: f.degree_bound(), modulus: m }),
    };
    for _ in 0..trials {
        let a = random_point(&mut rng, f.num_vars(), m);
        let t = field.residue(rng.gen_range(1..m.get()));
        let scaled: Vec<Scalar> = a.iter().map(|x| x * &t).collect();
        if f.evaluate_at(&scaled)? != t.pow(d as u64) * f.evaluate_at(&a)? {
            verdict.kind = VerdictKind::Refuted;
            verdict.degrees = ray_degrees(&f, &a)?;
            verdict.witness = Some(a);
            break;
        }
    }
    Ok(verdict)
}

fn certify_symbolic<E: Evaluable>(obj: &E, d: usize) -> Verdict {
    let p = obj.expand();
    if p.homogeneity_degree().admits(d) {
        Verdict::exact(VerdictKind::Certified)
    } else {
        Verdict { degrees: p.component_degrees(), ..Verdict::exact(VerdictKind::Refuted) }
    }
}

/// Determines the homogeneity of the computed polynomial: exactly when
/// expansion is feasible, otherwise from the component degrees seen along
/// `trials` random rays (confirmed by the scaling test).
pub fn infer_degree<E: Evaluable>(obj: &E, trials: usize, seed: u64) -> Result<Homogeneity, VerifyError> {
    if obj.symbolic_feasible() {
        return Ok(obj.expand().homogeneity_degree());
    }
    let (f, m) = reduce_one(obj)?;
    let mut rng = rng::rng_from_seed(seed);
    let mut seen: Vec<usize> = Vec::new();
    for _ in 0..trials.max(1) {
        let a = random_point(&mut rng, f.num_vars(), m);
        for e in ray_degrees(&f, &a)? {
            if !seen.contains(&e) {
                seen.push(e);
            }
        }
    }
    seen.sort_unstable();
    Ok(match seen.as_slice() {
        [] => Homogeneity::EveryDegree,
        [e] => {
            let check = certify_homogeneous(&f, *e, CertifyMethod::Randomized { trials, seed: seed ^ 0x5eed })?;
            if check.is_success() {
                Homogeneity::Degree(*e)
            } else {
                let low = check.degrees.first().copied().unwrap_or(*e).min(*e);
                let high = check.degrees.last().copied().unwrap_or(*e).max(*e);
                Homogeneity::Mixed { low, high }
            }
        }
        [low, .., high] => Homogeneity::Mixed { low: *low, high: *high },
    })
}

/// Both sides of `det M = det(A - B D^-1 C) det D` for the `k x k` top-left
/// block `A`; `None` when `D` is singular.
pub fn schur_sides(m: &Matrix, k: usize) -> Option<(Scalar, Scalar)> {
    let n = m.rows();
    let a = m.submatrix(0..k, 0..k);
    let b = m.submatrix(0..k, k..n);
    let c = m.submatrix(k..n, 0..k);
    let d = m.submatrix(k..n, k..n);
    let d_inv = d.inverse()?;
    let schur = a.sub(&b.mul(&d_inv).mul(&c));
    Some((m.det(), schur.det() * d.det()))
}

/// Random exact-rational trials of the Schur-complement identity on
/// `m x m` matrices split at `k`.
pub fn schur_self_test(k: usize, m: usize, trials: usize, seed: u64) -> Result<Verdict, VerifyError> {
    if k == 0 || k >= m {
        return Err(VerifyError::BlockSizes { k, m });
    }
    let field = FieldSpec::Rational;
    let mut rng = rng::rng_from_seed(seed);
    let mut verdict = Verdict { trials, seed, ..Verdict::exact(VerdictKind::Pass) };
    for _ in 0..trials {
        let (mat, sides) = loop {
            let mat = Matrix::from_fn(m, m, field, |_, _| {
                let num = rng.gen_range(-9..=9i64);
                let den = rng.gen_range(1..=4i64);
                field.ratio(BigInt::from(num), BigInt::from(den)).expect("nonzero denominator")
            });
            if let Some(sides) = schur_sides(&mat, k) {
                break (mat, sides);
            }
        };
        if sides.0 != sides.1 {
            verdict.kind = VerdictKind::Fail;
            verdict.witness = Some((0..m * m).map(|i| mat.get(i / m, i % m).clone()).collect());
            break;
        }
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::LinearForm;

    const Q: FieldSpec = FieldSpec::Rational;

    fn lf(n: usize, c: i64, coeffs: &[(usize, i64)]) -> LinearForm {
        LinearForm::new(n, Q.from_i64(c), coeffs.iter().map(|&(i, a)| (i, Q.from_i64(a)))).unwrap()
    }

    fn pencil(s: usize, n: usize, entries: Vec<LinearForm>) -> Pencil {
        Pencil::new(s, n, Q, entries).unwrap()
    }

    fn x1x2() -> Pencil {
        pencil(2, 2, vec![lf(2, 0, &[]), lf(2, 0, &[(0, 1)]), lf(2, 0, &[(1, -1)]), lf(2, 1, &[])])
    }

    #[test]
    fn symbolic_det_examples() {
        let p = pencil(1, 1, vec![lf(1, 0, &[(0, 1)])]);
        assert_eq!(symbolic_det(&p), Poly::var(1, 0, Q));
        let v = |i| Poly::var(2, i, Q);
        assert_eq!(symbolic_det(&x1x2()), v(0).mul(&v(1)));
        let g = pencil(2, 4, (0..4).map(|i| lf(4, 0, &[(i, 1)])).collect());
        let w = |i| Poly::var(4, i, Q);
        assert_eq!(symbolic_det(&g), w(0).mul(&w(3)).sub(&w(1).mul(&w(2))));
    }

    #[test]
    fn symbolic_det_matches_evaluation() {
        let mut r = rng::rng_from_seed(7);
        let n = 3;
        let entries = (0..16)
            .map(|_| {
                let c: Vec<(usize, i64)> = (0..n).map(|i| (i, r.gen_range(-3..=3))).collect();
                lf(n, r.gen_range(-2..=2), &c)
            })
            .collect();
        let p = pencil(4, n, entries);
        let sym = symbolic_det(&p);
        for _ in 0..20 {
            let pt: Vec<Scalar> = (0..n).map(|_| rng::small(&mut r, Q, 10)).collect();
            assert_eq!(sym.eval(&pt).unwrap(), p.eval_det(&pt).unwrap());
        }
    }

    #[test]
    fn pit_examples() {
        let abp = Abp::new(2, Q, vec![lf(2, 0, &[(0, 1)])], vec![], vec![lf(2, 0, &[(1, 1)])]).unwrap();
        let v = pit_equal(&abp, &x1x2(), 200, 1).unwrap();
        assert_eq!(v.kind, VerdictKind::Equal);
        assert_eq!(v.error_bound.unwrap().modulus, Modulus::mersenne61());

        let ax = Abp::from_linear(lf(2, 0, &[(0, 1)]));
        let ay = Abp::from_linear(lf(2, 0, &[(1, 1)]));
        let v = pit_equal(&ax, &ay, 200, 1).unwrap();
        assert_eq!(v.kind, VerdictKind::NotEqual);
        let w = v.witness.unwrap();
        assert_ne!(w[0], w[1]);
        assert!(pit_equal(&ax, &ax, 50, 3).unwrap().is_success());
    }

    #[test]
    fn pit_rejects_mismatched_operands() {
        let a = Abp::from_linear(lf(2, 0, &[(0, 1)]));
        let b = Abp::from_linear(lf(3, 0, &[(0, 1)]));
        assert!(matches!(pit_equal(&a, &b, 5, 0), Err(VerifyError::Incompatible(_))));
        let fp = FieldSpec::default_prime();
        let c = Abp::from_linear(LinearForm::var(2, 0, fp));
        assert!(matches!(pit_equal(&a, &c, 5, 0), Err(VerifyError::Algebra(AlgebraError::FieldMismatch { .. }))));
    }

    #[test]
    fn pit_falls_back_when_denominator_vanishes() {
        let p = Modulus::mersenne61().get();
        let inv_p = Q.ratio(BigInt::from(1), BigInt::from(p)).unwrap();
        let f = Poly::constant(1, inv_p);
        let v = pit_equal(&f, &f, 3, 0).unwrap();
        assert_eq!(v.error_bound.unwrap().modulus, Modulus::fallback());
    }

    #[test]
    fn certify_examples() {
        for method in [CertifyMethod::Symbolic, CertifyMethod::Randomized { trials: 30, seed: 5 }] {
            assert!(certify_homogeneous(&x1x2(), 2, method).unwrap().is_success());
            let bad = pencil(2, 3, vec![lf(3, 1, &[(0, 1)]), lf(3, 0, &[(1, 1)]), lf(3, 1, &[]), lf(3, 0, &[(2, 1)])]);
            let v = certify_homogeneous(&bad, 2, method).unwrap();
            assert_eq!(v.kind, VerdictKind::Refuted);
            assert_eq!(v.degrees, vec![1, 2]);
            assert!(certify_homogeneous(&Poly::zero(2, Q), 7, method).unwrap().is_success());
        }
    }

    #[test]
    fn inference() {
        assert_eq!(infer_degree(&x1x2(), 10, 0).unwrap(), Homogeneity::Degree(2));
        // randomized path through a pencil too large for expansion
        let blocks: Vec<Pencil> = (0..4).map(|_| x1x2()).collect();
        let big = Pencil::direct_sum(&blocks).unwrap();
        assert!(!big.symbolic_feasible());
        assert_eq!(infer_degree(&big, 5, 0).unwrap(), Homogeneity::Degree(8));
    }

    #[test]
    fn interpolation_recovers_coefficients() {
        let f = FieldSpec::default_prime();
        let ts: Vec<Scalar> = (0..4).map(|t| f.from_i64(t)).collect();
        // 3 - t + 2 t^3
        let ys: Vec<Scalar> = ts.iter().map(|t| f.from_i64(3) - t + f.from_i64(2) * t.pow(3)).collect();
        assert_eq!(interpolate(&ts, &ys, f), vec![f.from_i64(3), f.from_i64(-1), f.zero(), f.from_i64(2)]);
    }

    #[test]
    fn schur_examples() {
        let m = Matrix::new(2, 2, Q, vec![Q.from_i64(3), Q.from_i64(4), Q.from_i64(5), Q.from_i64(2)]).unwrap();
        let (lhs, rhs) = schur_sides(&m, 1).unwrap();
        assert_eq!(lhs, Q.from_i64(-14));
        assert_eq!(rhs, Q.from_i64(-14));
        assert!(schur_self_test(2, 5, 20, 11).unwrap().is_success());
        assert!(matches!(schur_self_test(0, 3, 1, 0), Err(VerifyError::BlockSizes { .. })));
    }
}
