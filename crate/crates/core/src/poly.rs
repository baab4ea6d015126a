//! Sparse multivariate polynomials with dense exponent vectors.

use alloc::collections::btree_map::{BTreeMap, Entry};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::AlgebraError;
use crate::field::{FieldSpec, Modulus, Scalar};
use crate::linear::LinearForm;

/// Exponent vector of a single term, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn eval(&self, point: &[Scalar]) -> Scalar {
        let mut acc = point[0].field().one();
        for (x, &e) in point.iter().zip(&self.0) {
            if e > 0 {
                acc = acc * x.pow(e as u64);
            }
        }
        acc
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total degree, with the zero polynomial at minus infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(usize),
}

/// Answer to "is this polynomial homogeneous, and of which degree?".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Homogeneity {
    /// The zero polynomial, homogeneous of every degree.
    EveryDegree,
    Degree(usize),
    /// Not homogeneous; `low` and `high` are the extreme term degrees.
    Mixed { low: usize, high: usize },
}

impl Homogeneity {
    pub fn degree(self) -> Option<usize> {
        match self {
            Homogeneity::Degree(d) => Some(d),
            _ => None,
        }
    }

    /// Whether a polynomial with this homogeneity is homogeneous of degree `d`.
    pub fn admits(self, d: usize) -> bool {
        match self {
            Homogeneity::EveryDegree => true,
            Homogeneity::Degree(e) => e == d,
            Homogeneity::Mixed { .. } => false,
        }
    }
}

/// A polynomial in `nvars` variables. No stored coefficient is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    field: FieldSpec,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero(nvars: usize, field: FieldSpec) -> Self {
        Poly { nvars, field, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = Poly::zero(nvars, c.field());
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize, field: FieldSpec) -> Self {
        Poly::constant(nvars, field.one())
    }

    pub fn var(nvars: usize, index: usize, field: FieldSpec) -> Self {
        let mut p = Poly::zero(nvars, field);
        p.add_term(Monomial::var(nvars, index), field.one());
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; like terms
    /// are combined and zeros dropped.
    pub fn from_terms<I>(nvars: usize, field: FieldSpec, terms: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (Vec<u32>, Scalar)>,
    {
        let mut p = Poly::zero(nvars, field);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(AlgebraError::DimensionMismatch { expected: nvars, got: exps.len() });
            }
            if c.field() != field {
                return Err(AlgebraError::FieldMismatch { left: field, right: c.field() });
            }
            p.add_term(Monomial(exps), c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Scalar {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&vec![0; self.nvars])
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Poly) -> Result<(), AlgebraError> {
        if self.field != other.field {
            return Err(AlgebraError::FieldMismatch { left: self.field, right: other.field });
        }
        if self.nvars != other.nvars {
            return Err(AlgebraError::DimensionMismatch { expected: self.nvars, got: other.nvars });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, AlgebraError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, AlgebraError> {
        self.check_compatible(other)?;
        let mut out = Poly::zero(self.nvars, self.field);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.checked_add(other).expect("compatible polynomials")
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.checked_mul(other).expect("compatible polynomials")
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            field: self.field,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars, self.field);
        }
        Poly {
            nvars: self.nvars,
            field: self.field,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Product with an affine linear form.
    pub fn mul_linear(&self, l: &LinearForm) -> Poly {
        let mut out = self.scale(l.constant());
        for (&i, a) in l.coeffs() {
            for (m, c) in &self.terms {
                let mut e = m.0.clone();
                e[i] += 1;
                out.add_term(Monomial(e), c * a);
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut acc = Poly::one(self.nvars, self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar, AlgebraError> {
        if point.len() != self.nvars {
            return Err(AlgebraError::DimensionMismatch { expected: self.nvars, got: point.len() });
        }
        if let Some(x) = point.iter().find(|x| x.field() != self.field) {
            return Err(AlgebraError::FieldMismatch { left: self.field, right: x.field() });
        }
        if self.nvars == 0 {
            return Ok(self.constant_term());
        }
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            acc = acc + c * &m.eval(point);
        }
        Ok(acc)
    }

    pub fn degree(&self) -> Degree {
        match self.terms.keys().next_back() {
            None => Degree::MinusInfinity,
            Some(m) => Degree::Finite(m.degree()),
        }
    }

    /// Lowest total degree among the terms.
    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().next().map(Monomial::degree)
    }

    /// The degree-`d` homogeneous component.
    pub fn hom_component(&self, d: usize) -> Poly {
        Poly {
            nvars: self.nvars,
            field: self.field,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Degrees of all nonzero homogeneous components, ascending.
    pub fn component_degrees(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for m in self.terms.keys() {
            let d = m.degree();
            if out.last() != Some(&d) {
                out.push(d);
            }
        }
        out
    }

    pub fn homogeneity_degree(&self) -> Homogeneity {
        match (self.min_degree(), self.degree()) {
            (None, _) => Homogeneity::EveryDegree,
            (Some(low), Degree::Finite(high)) if low == high => Homogeneity::Degree(low),
            (Some(low), Degree::Finite(high)) => Homogeneity::Mixed { low, high },
            (Some(_), Degree::MinusInfinity) => unreachable!(),
        }
    }

    /// Image modulo `m`; `None` if a denominator vanishes.
    pub fn reduce_mod(&self, m: Modulus) -> Option<Poly> {
        let mut out = Poly::zero(self.nvars, FieldSpec::Prime(m));
        for (mono, c) in &self.terms {
            out.add_term(mono.clone(), c.reduce_mod(m)?);
        }
        Some(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative_rational();
            let mag = if negative { -c } else { c.clone() };
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let is_const = m.degree() == 0;
            if !mag.is_one() || is_const {
                write!(f, "{mag}")?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut first = true;
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                if e == 1 {
                    write!(f, "x{i}")?;
                } else {
                    write!(f, "x{i}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    const Q: FieldSpec = FieldSpec::Rational;

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i, Q)
    }

    fn c(n: usize, v: i64) -> Poly {
        Poly::constant(n, Q.from_i64(v))
    }

    #[test]
    fn difference_of_squares() {
        let (a, b) = (x(2, 0), x(2, 1));
        let p = a.add(&b).mul(&a.sub(&b));
        let expected = a.mul(&a).sub(&b.mul(&b));
        assert_eq!(p, expected);
        assert_eq!(p.num_terms(), 2);
    }

    #[test]
    fn additive_inverse_is_empty() {
        let p = x(3, 0).mul(&x(3, 2)).add(&c(3, 7));
        let z = p.add(&p.neg());
        assert!(z.is_zero());
        assert_eq!(z.degree(), Degree::MinusInfinity);
        assert_eq!(z.num_terms(), 0);
    }

    #[test]
    fn binomial_cube_by_repeated_multiplication() {
        let s = x(2, 0).add(&x(2, 1));
        let mut cube = Poly::one(2, Q);
        for _ in 0..3 {
            cube = cube.mul(&s);
        }
        assert_eq!(cube, s.pow(3));
        assert_eq!(cube.coefficient(&[3, 0]), Q.from_i64(1));
        assert_eq!(cube.coefficient(&[2, 1]), Q.from_i64(3));
        assert_eq!(cube.coefficient(&[1, 2]), Q.from_i64(3));
        assert_eq!(cube.coefficient(&[0, 3]), Q.from_i64(1));
        assert_eq!(cube.num_terms(), 4);
    }

    #[test]
    fn evaluation_examples() {
        let p = x(2, 0).mul(&x(2, 0)).mul(&x(2, 1));
        assert_eq!(p.eval(&[Q.from_i64(2), Q.from_i64(3)]).unwrap(), Q.from_i64(12));
        let z = Poly::zero(2, Q);
        assert!(z.eval(&[Q.from_i64(9), Q.from_i64(-4)]).unwrap().is_zero());
        assert!(matches!(
            p.eval(&[Q.one()]),
            Err(AlgebraError::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn evaluation_mod_five() {
        // 1*1 + 1 = 2 in every field of characteristic > 2, GF(5) included;
        // moduli below 2^31 are rejected, so check it in the default field.
        let f = FieldSpec::default_prime();
        let p = Poly::var(3, 0, f).mul(&Poly::var(3, 1, f)).add(&Poly::var(3, 2, f));
        let one = f.one();
        assert_eq!(p.eval(&[one.clone(), one.clone(), one]).unwrap(), f.from_i64(2));
    }

    #[test]
    fn hom_component_examples() {
        let n = 2;
        let p = c(n, 1).add(&x(n, 0).scale(&Q.from_i64(2))).add(&x(n, 0).mul(&x(n, 0)));
        assert_eq!(p.hom_component(1), x(n, 0).scale(&Q.from_i64(2)));
        let q = x(n, 0).mul(&x(n, 0)).add(&x(n, 0).mul(&x(n, 1)));
        assert_eq!(q.hom_component(2), q);
        let r = c(n, 1).add(&x(n, 0)).mul(&c(n, 1).add(&x(n, 1)));
        assert_eq!(r.hom_component(2), x(n, 0).mul(&x(n, 1)));
    }

    #[test]
    fn homogeneity_examples() {
        assert_eq!(x(2, 0).mul(&x(2, 1)).homogeneity_degree(), Homogeneity::Degree(2));
        assert_eq!(
            x(1, 0).add(&x(1, 0).mul(&x(1, 0))).homogeneity_degree(),
            Homogeneity::Mixed { low: 1, high: 2 }
        );
        assert_eq!(Poly::zero(3, Q).homogeneity_degree(), Homogeneity::EveryDegree);
        assert!(Homogeneity::EveryDegree.admits(7));
    }

    #[test]
    fn field_mismatch_is_reported() {
        let p = Poly::var(1, 0, Q);
        let q = Poly::var(1, 0, FieldSpec::default_prime());
        assert!(matches!(p.checked_add(&q), Err(AlgebraError::FieldMismatch { .. })));
        assert!(matches!(
            p.checked_mul(&Poly::var(2, 0, Q)),
            Err(AlgebraError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn display_is_readable() {
        let p = x(2, 0).mul(&x(2, 0)).sub(&x(2, 1).scale(&Q.from_i64(3))).add(&c(2, 1));
        assert_eq!(p.to_string(), "x0^2 - 3*x1 + 1");
    }
}
