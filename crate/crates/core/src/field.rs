//! Exact scalar fields: arbitrary-precision rationals and prime fields of
//! word-sized modulus.

use alloc::string::ToString;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::AlgebraError;

/// The Mersenne prime 2^61 - 1, default field for identity testing.
pub const MERSENNE_61: u64 = (1 << 61) - 1;

/// 2^64 - 59, the largest prime below 2^64. Used when a rational input has a
/// denominator divisible by [`MERSENNE_61`].
pub const FALLBACK_PRIME: u64 = 0xFFFF_FFFF_FFFF_FFC5;

/// Smallest modulus accepted for a prime field.
pub const MIN_MODULUS: u64 = 1 << 31;

/// A validated prime modulus in `[2^31, 2^64)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(p: u64) -> Result<Self, AlgebraError> {
        if p < MIN_MODULUS {
            return Err(AlgebraError::ModulusTooSmall(p));
        }
        if !is_prime_u64(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        Ok(Modulus(p))
    }

    pub const fn mersenne61() -> Self {
        Modulus(MERSENNE_61)
    }

    pub const fn fallback() -> Self {
        Modulus(FALLBACK_PRIME)
    }

    #[inline]
    pub const fn get(self) -> u64 {
        self.0
    }

    #[inline]
    fn add(self, a: u64, b: u64) -> u64 {
        let (s, carry) = a.overflowing_add(b);
        if carry || s >= self.0 {
            s.wrapping_sub(self.0)
        } else {
            s
        }
    }

    #[inline]
    fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a.wrapping_sub(b).wrapping_add(self.0)
        }
    }

    #[inline]
    fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse by Fermat's little theorem; `a` must be nonzero.
    fn inv(self, a: u64) -> u64 {
        self.pow(a, self.0 - 2)
    }

    fn reduce_bigint(self, n: &BigInt) -> u64 {
        let m = BigInt::from(self.0);
        let r = n.mod_floor(&m);
        r.to_u64().expect("residue fits in u64")
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Which field a scalar lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rational,
    Prime(Modulus),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, AlgebraError> {
        Modulus::new(p).map(FieldSpec::Prime)
    }

    pub const fn default_prime() -> Self {
        FieldSpec::Prime(Modulus::mersenne61())
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Prime(m) => Scalar::Residue {
                value: m.reduce_bigint(&BigInt::from(n)),
                modulus: m,
            },
        }
    }

    pub fn from_bigint(self, n: BigInt) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(n)),
            FieldSpec::Prime(m) => Scalar::Residue {
                value: m.reduce_bigint(&n),
                modulus: m,
            },
        }
    }

    /// `num / den` in this field.
    pub fn ratio(self, num: BigInt, den: BigInt) -> Result<Scalar, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        match self {
            FieldSpec::Rational => Ok(Scalar::Rational(BigRational::new(num, den))),
            FieldSpec::Prime(m) => {
                let d = m.reduce_bigint(&den);
                if d == 0 {
                    return Err(AlgebraError::DivisionByZero);
                }
                Ok(Scalar::Residue {
                    value: m.mul(m.reduce_bigint(&num), m.inv(d)),
                    modulus: m,
                })
            }
        }
    }

    /// Residue in `[0, p)`; `value` is reduced first.
    pub fn residue(self, value: u64) -> Scalar {
        match self {
            FieldSpec::Rational => self.from_bigint(BigInt::from(value)),
            FieldSpec::Prime(m) => Scalar::Residue {
                value: value % m.get(),
                modulus: m,
            },
        }
    }

    /// Parses `"n"` or `"n/d"` into this field.
    pub fn parse(self, s: &str) -> Result<Scalar, AlgebraError> {
        let s = s.trim();
        let bad = || AlgebraError::Parse(s.to_string());
        match s.split_once('/') {
            None => {
                let n = BigInt::from_str(s).map_err(|_| bad())?;
                Ok(self.from_bigint(n))
            }
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
                let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
                self.ratio(n, d)
            }
        }
    }

    pub fn modulus(self) -> Option<Modulus> {
        match self {
            FieldSpec::Rational => None,
            FieldSpec::Prime(m) => Some(m),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Prime(m) => write!(f, "GF({})", m.get()),
        }
    }
}

/// An exact field element. Rationals are kept in lowest terms with a positive
/// denominator; residues are canonical in `[0, p)`.
///
/// The arithmetic operators panic when the operands live in different
/// fields; use the `checked_*` methods at API boundaries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: Modulus },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rational,
            Scalar::Residue { modulus, .. } => FieldSpec::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    pub fn checked_add(&self, rhs: &Scalar) -> Result<Scalar, AlgebraError> {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a + b)),
            (Scalar::Residue { value: a, modulus: m }, Scalar::Residue { value: b, modulus: n })
                if m == n =>
            {
                Ok(Scalar::Residue { value: m.add(*a, *b), modulus: *m })
            }
            _ => Err(self.mismatch(rhs)),
        }
    }

    pub fn checked_sub(&self, rhs: &Scalar) -> Result<Scalar, AlgebraError> {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a - b)),
            (Scalar::Residue { value: a, modulus: m }, Scalar::Residue { value: b, modulus: n })
                if m == n =>
            {
                Ok(Scalar::Residue { value: m.sub(*a, *b), modulus: *m })
            }
            _ => Err(self.mismatch(rhs)),
        }
    }

    pub fn checked_mul(&self, rhs: &Scalar) -> Result<Scalar, AlgebraError> {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a * b)),
            (Scalar::Residue { value: a, modulus: m }, Scalar::Residue { value: b, modulus: n })
                if m == n =>
            {
                Ok(Scalar::Residue { value: m.mul(*a, *b), modulus: *m })
            }
            _ => Err(self.mismatch(rhs)),
        }
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, AlgebraError> {
        if self.field() != rhs.field() {
            return Err(self.mismatch(rhs));
        }
        let inv = rhs.inv()?;
        self.checked_mul(&inv)
    }

    pub fn inv(&self) -> Result<Scalar, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: modulus.inv(*value),
                modulus: *modulus,
            },
        })
    }

    pub fn pow(&self, exp: u64) -> Scalar {
        match self {
            Scalar::Rational(q) => {
                let mut acc = BigRational::one();
                let mut base = q.clone();
                let mut e = exp;
                while e > 0 {
                    if e & 1 == 1 {
                        acc *= &base;
                    }
                    base = &base * &base;
                    e >>= 1;
                }
                Scalar::Rational(acc)
            }
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: modulus.pow(*value, exp),
                modulus: *modulus,
            },
        }
    }

    /// Image of this scalar in `GF(p)`; `None` when it is a rational whose
    /// denominator vanishes mod `p`. Residues must already live mod `p`.
    pub fn reduce_mod(&self, m: Modulus) -> Option<Scalar> {
        match self {
            Scalar::Rational(q) => {
                let den = m.reduce_bigint(q.denom());
                if den == 0 {
                    return None;
                }
                Some(Scalar::Residue {
                    value: m.mul(m.reduce_bigint(q.numer()), m.inv(den)),
                    modulus: m,
                })
            }
            Scalar::Residue { modulus, .. } if *modulus == m => Some(self.clone()),
            Scalar::Residue { .. } => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Residue { .. } => None,
        }
    }

    pub fn as_residue(&self) -> Option<u64> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Residue { value, .. } => Some(*value),
        }
    }

    /// Sign-aware check used for pretty printing.
    pub(crate) fn is_negative_rational(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_negative())
    }

    fn mismatch(&self, rhs: &Scalar) -> AlgebraError {
        AlgebraError::FieldMismatch {
            left: self.field(),
            right: rhs.field(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{}", e),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: modulus.sub(0, *value),
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        FieldSpec::Rational
            .ratio(BigInt::from(n), BigInt::from(d))
            .unwrap()
    }

    fn small_field(p: u64) -> FieldSpec {
        // Tiny moduli bypass the size check; only for hand-checkable examples.
        FieldSpec::Prime(Modulus(p))
    }

    /// Extended Euclid, independent of the Fermat inverse used above.
    fn egcd_inverse(a: i128, p: i128) -> i128 {
        let (mut r0, mut r1) = (p, a.rem_euclid(p));
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let qt = r0 / r1;
            (r0, r1) = (r1, r0 - qt * r1);
            (t0, t1) = (t1, t0 - qt * t1);
        }
        assert_eq!(r0, 1);
        t0.rem_euclid(p)
    }

    #[test]
    fn rational_sum_is_reduced() {
        assert_eq!(q(1, 3) + q(1, 6), q(1, 2));
        assert_eq!((q(1, 3) + q(1, 6)).to_string(), "1/2");
    }

    #[test]
    fn small_prime_examples() {
        let f = small_field(7);
        assert_eq!(f.from_i64(3) * f.from_i64(5), f.from_i64(1));
        let expected = egcd_inverse(3, 7);
        assert_eq!(expected, 5);
        assert_eq!(f.from_i64(1) / f.from_i64(3), f.from_i64(expected as i64));
    }

    #[test]
    fn fermat_inverse_matches_extended_euclid() {
        let m = Modulus::mersenne61();
        for a in [2u64, 3, 12345, MERSENNE_61 - 1, 1 << 40] {
            let ours = m.inv(a);
            let oracle = egcd_inverse(a as i128, MERSENNE_61 as i128) as u64;
            assert_eq!(ours, oracle);
        }
    }

    #[test]
    fn division_by_zero_and_mismatch() {
        assert_eq!(q(1, 2).checked_div(&q(0, 1)), Err(AlgebraError::DivisionByZero));
        let p = FieldSpec::default_prime().one();
        assert!(matches!(
            q(1, 2).checked_add(&p),
            Err(AlgebraError::FieldMismatch { .. })
        ));
        let a = FieldSpec::prime(FALLBACK_PRIME).unwrap().one();
        assert!(p.checked_mul(&a).is_err());
    }

    #[test]
    fn modulus_validation() {
        assert!(Modulus::new(MERSENNE_61).is_ok());
        assert!(Modulus::new(FALLBACK_PRIME).is_ok());
        assert_eq!(Modulus::new(7), Err(AlgebraError::ModulusTooSmall(7)));
        assert_eq!(
            Modulus::new(MERSENNE_61 - 2),
            Err(AlgebraError::NotPrime(MERSENNE_61 - 2))
        );
        // 2^31 - 1 is prime but below the floor.
        assert!(Modulus::new((1 << 31) - 1).is_err());
        assert!(Modulus::new(2147483659).is_ok());
    }

    #[test]
    fn parse_and_reduce() {
        let f = FieldSpec::default_prime();
        let half = f.parse("1/2").unwrap();
        assert_eq!(&half + &half, f.one());
        assert_eq!(f.parse("-1").unwrap(), f.residue(MERSENNE_61 - 1));
        assert_eq!(FieldSpec::Rational.parse(" -6/4 ").unwrap(), q(-3, 2));
        assert!(FieldSpec::Rational.parse("x").is_err());
        assert!(FieldSpec::Rational.parse("1/0").is_err());
        assert_eq!(q(1, 2).reduce_mod(Modulus::mersenne61()), Some(half));
        let bad = FieldSpec::Rational.ratio(BigInt::from(1), BigInt::from(MERSENNE_61)).unwrap();
        assert_eq!(bad.reduce_mod(Modulus::mersenne61()), None);
        assert!(bad.reduce_mod(Modulus::fallback()).is_some());
    }

    #[test]
    fn residues_are_canonical() {
        let f = FieldSpec::default_prime();
        let a = f.residue(MERSENNE_61 - 1);
        let b = f.residue(5);
        assert_eq!((&a + &b).as_residue(), Some(4));
        assert_eq!((&b - &a).as_residue(), Some(6));
        assert_eq!((-f.zero()).as_residue(), Some(0));
        let big = f.from_bigint(BigInt::from(MERSENNE_61) * BigInt::from(3u8) + 2);
        assert_eq!(big.as_residue(), Some(2));
    }
}
