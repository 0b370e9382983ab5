//! Exact rational scalars and the q-combinatorial quantities built on them.
//!
//! Everything here is exact: a [`Scalar`] is a reduced fraction of
//! arbitrary-precision integers, and [`QProfile`] bundles the base parameter
//! `q` with the symmetrizers `s_i` so that `q_i = q^{s_i}`, q-integers and
//! q-binomials can be evaluated per node.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number, always in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den`; panics on a zero denominator (use [`Scalar::from_str`] for untrusted input).
    pub fn frac(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Scalar(BigRational::new(num, den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Scalar(self.0.abs())
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Scalar(self.0.recip()))
        }
    }

    /// Integer power; negative exponents invert. Panics on `0^{-m}`.
    pub fn pow(&self, exp: i64) -> Self {
        let mag = exp.unsigned_abs();
        let mut base = self.0.clone();
        let mut acc = BigRational::one();
        let mut e = mag;
        while e > 0 {
            if e & 1 == 1 {
                acc *= &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        if exp < 0 {
            assert!(!acc.is_zero(), "zero raised to a negative power");
            acc = acc.recip();
        }
        Scalar(acc)
    }

    /// The integer `m` with `base^m == self`, if one exists. Requires `|base| != 1`
    /// and `base != 0`.
    pub fn log_base(&self, base: &Scalar) -> Option<i64> {
        if self.is_zero() || base.is_zero() || base.abs().is_one() {
            return None;
        }
        let (b, inverted) = if base.abs() > Scalar::one() {
            (base.clone(), false)
        } else {
            (base.inv().expect("nonzero"), true)
        };
        let target = self.abs();
        let babs = b.abs();
        // walk outwards from exponent 0 in the direction of |target|
        let mut m: i64 = 0;
        let mut p = Scalar::one();
        if target >= Scalar::one() {
            while p < target {
                p = &p * &babs;
                m += 1;
            }
        } else {
            while p > target {
                p = &p / &babs;
                m -= 1;
            }
        }
        if p != target {
            return None;
        }
        if &b.pow(m) != self {
            return None;
        }
        Some(if inverted { -m } else { m })
    }

    /// Exact square root when `self` is the square of a rational.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Some(Scalar(BigRational::new(n, d)))
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> Option<f64> {
        self.0.to_f64()
    }

    pub fn as_bigrational(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar(r)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts `p`, `p/q`, with an optional leading sign on either part.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid rational {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        if num.is_empty() || den.is_empty() {
            return Err(bad());
        }
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        Scalar::from_bigints(num, den)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Int(i64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Int(n) => Ok(Scalar::from_int(n)),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        self.0 *= &rhs.0;
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |acc, x| acc * x)
    }
}

/// The base parameter `q` together with the symmetrizers `s_i`.
///
/// `q` must be a nonzero rational with `|q| != 1`; for rational `q` this is
/// exactly the condition that no positive power of `q` equals one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QProfile {
    q: Scalar,
    s: Vec<u32>,
}

impl QProfile {
    pub fn new(q: Scalar, s: Vec<u32>) -> Result<Self> {
        if q.is_zero() || q.abs().is_one() {
            return Err(Error::Domain(format!(
                "q = {q} is not allowed: need q nonzero and |q| != 1"
            )));
        }
        if s.contains(&0) {
            return Err(Error::Domain("symmetrizers must be positive".into()));
        }
        Ok(QProfile { q, s })
    }

    pub fn q(&self) -> &Scalar {
        &self.q
    }

    pub fn symmetrizers(&self) -> &[u32] {
        &self.s
    }

    pub fn rank(&self) -> usize {
        self.s.len()
    }

    /// `q_i = q^{s_i}`.
    pub fn q_i(&self, i: usize) -> Scalar {
        self.q.pow(self.s[i] as i64)
    }

    /// `q_i^m`.
    pub fn q_pow(&self, i: usize, m: i64) -> Scalar {
        self.q.pow(self.s[i] as i64 * m)
    }

    /// `q_i - q_i^{-1}`, never zero under the profile invariant.
    pub fn q_diff(&self, i: usize) -> Scalar {
        self.q_pow(i, 1) - self.q_pow(i, -1)
    }

    /// The q-integer `[m]_i = (q_i^m - q_i^{-m}) / (q_i - q_i^{-1})`.
    pub fn q_int(&self, m: i64, i: usize) -> Scalar {
        (self.q_pow(i, m) - self.q_pow(i, -m)) / self.q_diff(i)
    }

    /// `[m]_i^! = [m]_i [m-1]_i ... [1]_i`, with `[0]^! = 1`.
    pub fn q_factorial(&self, m: u32, i: usize) -> Scalar {
        (1..=m as i64).map(|k| self.q_int(k, i)).product()
    }

    /// The q-binomial coefficient `[m choose r]_i`.
    pub fn q_binom(&self, m: i64, r: i64, i: usize) -> Result<Scalar> {
        if m < 0 || r < 0 || r > m {
            return Err(Error::Domain(format!(
                "q-binomial [{m} choose {r}] needs 0 <= r <= m"
            )));
        }
        let (m, r) = (m as u32, r as u32);
        Ok(self.q_factorial(m, i) / (self.q_factorial(r, i) * self.q_factorial(m - r, i)))
    }

    /// `[m,r] + q_i^{-m-1} [m,r-1] == q_i^{-r} [m+1,r]` for `m >= r >= 1`.
    pub fn check_pascal_identity(&self, m: i64, r: i64, i: usize) -> bool {
        if r < 1 || m < r {
            return false;
        }
        let b = |mm, rr| self.q_binom(mm, rr, i).expect("range checked");
        let lhs = b(m, r) + self.q_pow(i, -m - 1) * b(m, r - 1);
        let rhs = self.q_pow(i, -r) * b(m + 1, r);
        lhs == rhs
    }

    /// `sum_r (-1)^r [m,r] lam^{m-r} == prod_{r<m} (lam q_i^{m-1-2r} - 1)`.
    pub fn check_qbinomial_theorem(&self, m: i64, i: usize, lam: &Scalar) -> bool {
        if m < 0 {
            return false;
        }
        let lhs: Scalar = (0..=m)
            .map(|r| {
                let c = self.q_binom(m, r, i).expect("range checked") * lam.pow(m - r);
                if r % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .sum();
        let rhs: Scalar = (0..m)
            .map(|r| lam * self.q_pow(i, m - 1 - 2 * r) - Scalar::one())
            .product();
        lhs == rhs
    }
}

/// Shorthand used throughout the tests and factories.
pub fn s(num: i64, den: i64) -> Scalar {
    Scalar::frac(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(q: Scalar) -> QProfile {
        QProfile::new(q, vec![1, 2]).unwrap()
    }

    // geometric-sum evaluation of [m] for positive m: q^{m-1} + q^{m-3} + ... + q^{1-m}
    fn q_int_geometric(q: &Scalar, m: i64) -> Scalar {
        (0..m).map(|k| q.pow(m - 1 - 2 * k)).sum()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("6/4".parse::<Scalar>().unwrap().to_string(), "3/2");
        assert_eq!("-3".parse::<Scalar>().unwrap().to_string(), "-3");
        assert_eq!("+3/-6".parse::<Scalar>().unwrap().to_string(), "-1/2");
        assert_eq!("4/2".parse::<Scalar>().unwrap().to_string(), "2");
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
        assert!("1/".parse::<Scalar>().is_err());
    }

    #[test]
    fn serde_as_strings() {
        let x = s(-7, 3);
        let j = serde_json::to_string(&x).unwrap();
        assert_eq!(j, "\"-7/3\"");
        let back: Scalar = serde_json::from_str(&j).unwrap();
        assert_eq!(back, x);
        let from_int: Scalar = serde_json::from_str("5").unwrap();
        assert_eq!(from_int, Scalar::from_int(5));
    }

    #[test]
    fn profile_rejects_bad_q() {
        assert!(QProfile::new(Scalar::zero(), vec![1]).is_err());
        assert!(QProfile::new(Scalar::one(), vec![1]).is_err());
        assert!(QProfile::new(Scalar::from_int(-1), vec![1]).is_err());
        assert!(QProfile::new(Scalar::from_int(2), vec![0]).is_err());
        assert!(QProfile::new(Scalar::from_int(-3), vec![1]).is_ok());
    }

    #[test]
    fn q_int_examples() {
        let p = qp(Scalar::from_int(2));
        assert_eq!(p.q_int(0, 0), Scalar::zero());
        assert_eq!(p.q_int(1, 0), Scalar::one());
        let oracle = q_int_geometric(&Scalar::from_int(2), 3);
        assert_eq!(oracle, s(21, 4));
        assert_eq!(p.q_int(3, 0), oracle);
        // node with s_i = 2 uses q_i = 4
        assert_eq!(p.q_int(2, 1), s(17, 4));
    }

    #[test]
    fn q_int_matches_geometric_sum() {
        for q in [s(2, 1), s(3, 2), s(-3, 1)] {
            let p = qp(q.clone());
            for m in 1..8 {
                assert_eq!(p.q_int(m, 0), q_int_geometric(&q, m));
            }
        }
    }

    #[test]
    fn q_int_is_odd() {
        let p = qp(s(3, 2));
        for m in -10..=10 {
            assert_eq!(p.q_int(-m, 0), -p.q_int(m, 0));
            assert_eq!(p.q_int(-m, 1), -p.q_int(m, 1));
        }
    }

    #[test]
    fn q_binom_examples() {
        let p = qp(Scalar::from_int(2));
        assert_eq!(p.q_binom(5, 0, 0).unwrap(), Scalar::one());
        assert_eq!(p.q_binom(2, 1, 0).unwrap(), s(5, 2));
        let oracle = p.q_int(4, 0) * p.q_int(3, 0) / p.q_int(2, 0);
        assert_eq!(oracle, s(357, 16));
        assert_eq!(p.q_binom(4, 2, 0).unwrap(), oracle);
        assert!(p.q_binom(3, 4, 0).is_err());
        assert!(p.q_binom(3, -1, 0).is_err());
    }

    #[test]
    fn q_binom_symmetry() {
        let p = qp(s(3, 2));
        for m in 0..=10 {
            for r in 0..=m {
                assert_eq!(p.q_binom(m, r, 0).unwrap(), p.q_binom(m, m - r, 0).unwrap());
            }
        }
    }

    #[test]
    fn pascal_and_binomial_theorem() {
        for q in [s(2, 1), s(3, 2), s(-3, 1)] {
            let p = qp(q);
            assert!(p.check_pascal_identity(1, 1, 0));
            for m in 1..=8 {
                for r in 1..=m {
                    assert!(p.check_pascal_identity(m, r, 0));
                    assert!(p.check_pascal_identity(m, r, 1));
                }
            }
            for m in 0..=8 {
                for lam in [s(-2, 1), s(1, 3), s(5, 1), s(5, 3), s(7, 1)] {
                    assert!(p.check_qbinomial_theorem(m, 0, &lam));
                    assert!(p.check_qbinomial_theorem(m, 1, &lam));
                }
            }
        }
    }

    #[test]
    fn identity_checks_detect_wrong_inputs() {
        let p = qp(s(2, 1));
        assert!(!p.check_pascal_identity(2, 0, 0));
        assert!(!p.check_pascal_identity(2, 3, 0));
        assert!(!p.check_qbinomial_theorem(-1, 0, &s(1, 1)));
    }

    #[test]
    fn log_base_and_sqrt() {
        let q = s(3, 2);
        for m in -6..=6 {
            assert_eq!(q.pow(m).log_base(&q), Some(m));
            assert_eq!((-q.pow(m)).log_base(&q), None);
        }
        let nq = s(-3, 1);
        assert_eq!(s(-27, 1).log_base(&nq), Some(3));
        assert_eq!(s(27, 1).log_base(&nq), None);
        assert_eq!(s(5, 1).log_base(&q), None);
        assert_eq!(s(9, 4).sqrt_exact(), Some(s(3, 2)));
        assert_eq!(s(2, 1).sqrt_exact(), None);
    }
}
