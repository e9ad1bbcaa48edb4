//! Dense integer-coefficient polynomials in the Lefschetz symbol `L`.
//!
//! Coefficients are arbitrary-precision integers and the representation is
//! normalized (no trailing zero coefficients), so `==` is structural equality
//! of polynomials. Degrees in this crate stay below ~10, so a dense `Vec` is
//! the right shape.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::de::Error as DeError;
use serde::ser::Error as SerError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Polynomial in `L` with `BigInt` coefficients, little-endian by degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LPoly {
    coeffs: Vec<BigInt>,
}

impl LPoly {
    pub fn zero() -> Self {
        LPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        LPoly::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        LPoly::from_coeffs(vec![c.into()])
    }

    /// The monomial `L^deg`.
    pub fn monomial(deg: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        coeffs[deg] = BigInt::one();
        LPoly { coeffs }
    }

    /// `1 + L + ... + L^n`.
    pub fn geometric(n: usize) -> Self {
        LPoly {
            coeffs: vec![BigInt::one(); n + 1],
        }
    }

    pub fn from_coeffs(coeffs: Vec<impl Into<BigInt>>) -> Self {
        let mut p = LPoly {
            coeffs: coeffs.into_iter().map(Into::into).collect(),
        };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, deg: usize) -> BigInt {
        self.coeffs.get(deg).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Evaluate at `L = q` by Horner's rule.
    pub fn eval(&self, q: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * q + c;
        }
        acc
    }

    pub fn eval_u64(&self, q: u64) -> BigInt {
        self.eval(&BigInt::from(q))
    }

    /// Coefficient sequence reads the same in both directions.
    pub fn is_palindromic(&self) -> bool {
        let n = self.coeffs.len();
        (0..n / 2).all(|i| self.coeffs[i] == self.coeffs[n - 1 - i])
    }

    pub fn all_coeffs_positive(&self) -> bool {
        !self.is_zero() && self.coeffs.iter().all(|c| c > &BigInt::zero())
    }
}

impl Add for &LPoly {
    type Output = LPoly;
    fn add(self, rhs: &LPoly) -> LPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + rhs.coeff(i));
        }
        let mut p = LPoly { coeffs };
        p.normalize();
        p
    }
}

impl Sub for &LPoly {
    type Output = LPoly;
    fn sub(self, rhs: &LPoly) -> LPoly {
        self + &(-rhs)
    }
}

impl Neg for &LPoly {
    type Output = LPoly;
    fn neg(self) -> LPoly {
        LPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &LPoly {
    type Output = LPoly;
    fn mul(self, rhs: &LPoly) -> LPoly {
        if self.is_zero() || rhs.is_zero() {
            return LPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        let mut p = LPoly { coeffs };
        p.normalize();
        p
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for LPoly {
            type Output = LPoly;
            fn $method(self, rhs: LPoly) -> LPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&LPoly> for LPoly {
            type Output = LPoly;
            fn $method(self, rhs: &LPoly) -> LPoly {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for LPoly {
    type Output = LPoly;
    fn neg(self) -> LPoly {
        -&self
    }
}

impl fmt::Display for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c < &BigInt::zero() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            let coeff_is_one = mag.is_one();
            match (deg, coeff_is_one) {
                (0, _) => write!(f, "{}", mag)?,
                (1, true) => write!(f, "L")?,
                (1, false) => write!(f, "{}L", mag)?,
                (_, true) => write!(f, "L^{}", deg)?,
                (_, false) => write!(f, "{}L^{}", mag, deg)?,
            }
        }
        Ok(())
    }
}

// Wire format: little-endian array of plain JSON integers. Every coefficient
// arising here fits i64 by a huge margin; refuse to emit anything that would
// not round-trip.
impl Serialize for LPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let ints: Result<Vec<i64>, _> = self
            .coeffs
            .iter()
            .map(|c| i64::try_from(c.clone()).map_err(|_| S::Error::custom("coefficient exceeds i64 wire range")))
            .collect();
        ints?.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let ints = Vec::<i64>::deserialize(deserializer)?;
        if ints.last() == Some(&0) {
            return Err(D::Error::custom("polynomial has trailing zero coefficients"));
        }
        Ok(LPoly::from_coeffs(ints))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(coeffs: &[i64]) -> LPoly {
        LPoly::from_coeffs(coeffs.to_vec())
    }

    #[test]
    fn normalization_strips_trailing_zeros() {
        assert_eq!(p(&[1, 2, 0, 0]), p(&[1, 2]));
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[0]).degree(), None);
    }

    #[test]
    fn geometric_series() {
        assert_eq!(LPoly::geometric(3), p(&[1, 1, 1, 1]));
        assert_eq!(LPoly::geometric(0), LPoly::one());
    }

    #[test]
    fn eval_horner() {
        // 1 + 2L + 3L^2 at L=10
        assert_eq!(p(&[1, 2, 3]).eval_u64(10), BigInt::from(321));
        assert_eq!(LPoly::zero().eval_u64(7), BigInt::zero());
    }

    #[test]
    fn display_format() {
        assert_eq!(p(&[1, 1, 2, 0, -1]).to_string(), "1 + L + 2L^2 - L^4");
        assert_eq!(LPoly::zero().to_string(), "0");
        assert_eq!(p(&[-3]).to_string(), "-3");
    }

    #[test]
    fn json_round_trip() {
        let q = p(&[1, 0, 2, 5]);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, "[1,0,2,5]");
        assert_eq!(serde_json::from_str::<LPoly>(&s).unwrap(), q);
        assert!(serde_json::from_str::<LPoly>("[1,0]").is_err());
    }

    proptest! {
        #[test]
        fn ring_laws(a in proptest::collection::vec(-20i64..20, 0..6),
                     b in proptest::collection::vec(-20i64..20, 0..6),
                     c in proptest::collection::vec(-20i64..20, 0..6)) {
            let (a, b, c) = (p(&a), p(&b), p(&c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&a - &a, LPoly::zero());
        }

        #[test]
        fn eval_is_multiplicative(a in proptest::collection::vec(-9i64..9, 0..5),
                                  b in proptest::collection::vec(-9i64..9, 0..5),
                                  q in 0u64..7) {
            let (a, b) = (p(&a), p(&b));
            prop_assert_eq!((&a * &b).eval_u64(q), a.eval_u64(q) * b.eval_u64(q));
        }
    }
}
