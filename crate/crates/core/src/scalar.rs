//! Exact arithmetic in Z_(2), the integers localized at 2.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::AlgebraError;

/// An element of Z_(2): a reduced fraction whose denominator is odd and positive.
///
/// Odd integers are units, so the only arithmetic invariant that matters is the
/// 2-adic valuation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TwoLocalScalar(BigRational);

impl TwoLocalScalar {
    pub fn zero() -> Self {
        TwoLocalScalar(BigRational::zero())
    }

    pub fn one() -> Self {
        TwoLocalScalar(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        TwoLocalScalar(BigRational::from_integer(BigInt::from(n)))
    }

    /// `2^k`.
    pub fn pow2(k: u32) -> Self {
        TwoLocalScalar(BigRational::from_integer(BigInt::one() << k))
    }

    pub fn from_fraction(num: i64, den: i64) -> Result<Self, AlgebraError> {
        if den == 0 || den % 2 == 0 {
            return Err(AlgebraError::EvenDenominator);
        }
        Ok(TwoLocalScalar(BigRational::new(num.into(), den.into())))
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    /// 2-adic valuation; `None` stands for +∞ (the zero element).
    pub fn valuation(&self) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        Some(self.0.numer().trailing_zeros().unwrap_or(0) as u32)
    }

    /// Splits `self = 2^v · u` with `u` a unit. `None` for zero.
    pub fn split(&self) -> Option<(u32, TwoLocalScalar)> {
        let v = self.valuation()?;
        let unit = TwoLocalScalar(BigRational::new(self.0.numer() >> v, self.0.denom().clone()));
        Some((v, unit))
    }

    /// True when `self` lies in `2^k Z_(2)`; everything is divisible by `2^0`.
    pub fn divisible_by_pow2(&self, k: u32) -> bool {
        self.valuation().is_none_or(|v| v >= k)
    }

    /// Exact quotient `self / rhs` in Z_(2); `None` when it is not 2-integral.
    pub fn checked_div(&self, rhs: &TwoLocalScalar) -> Option<TwoLocalScalar> {
        let rv = rhs.valuation()?;
        if !self.divisible_by_pow2(rv) {
            return None;
        }
        Some(TwoLocalScalar(&self.0 / &rhs.0))
    }

    /// Inverse of a unit.
    pub fn inverse(&self) -> Option<TwoLocalScalar> {
        if self.is_unit() {
            Some(TwoLocalScalar(self.0.recip()))
        } else {
            None
        }
    }

    /// Representative of the class modulo `2^k` in `[0, 2^k)`, as an integer.
    pub fn residue_mod_pow2(&self, k: u32) -> u64 {
        assert!(k < 64);
        let modulus = BigInt::one() << k;
        // n / d ≡ n · d^{-1} (mod 2^k); d is odd so the inverse exists.
        let d = self.0.denom().mod_floor(&modulus);
        let inv = mod_inverse_pow2(&d, &modulus);
        let r = (self.0.numer().mod_floor(&modulus) * inv).mod_floor(&modulus);
        r.to_u64().expect("residue fits")
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.0.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    pub fn abs(&self) -> Self {
        TwoLocalScalar(self.0.abs())
    }
}

fn mod_inverse_pow2(d: &BigInt, modulus: &BigInt) -> BigInt {
    // Newton iteration x <- x(2 - dx) doubles the number of correct bits.
    let mut x = BigInt::one();
    let two = BigInt::from(2);
    for _ in 0..7 {
        x = (&x * (&two - d * &x)).mod_floor(modulus);
    }
    x
}

impl fmt::Debug for TwoLocalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for TwoLocalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl From<i64> for TwoLocalScalar {
    fn from(n: i64) -> Self {
        TwoLocalScalar::from_int(n)
    }
}

impl Add for &TwoLocalScalar {
    type Output = TwoLocalScalar;
    fn add(self, rhs: &TwoLocalScalar) -> TwoLocalScalar {
        TwoLocalScalar(&self.0 + &rhs.0)
    }
}

impl Sub for &TwoLocalScalar {
    type Output = TwoLocalScalar;
    fn sub(self, rhs: &TwoLocalScalar) -> TwoLocalScalar {
        TwoLocalScalar(&self.0 - &rhs.0)
    }
}

impl Mul for &TwoLocalScalar {
    type Output = TwoLocalScalar;
    fn mul(self, rhs: &TwoLocalScalar) -> TwoLocalScalar {
        TwoLocalScalar(&self.0 * &rhs.0)
    }
}

impl Add for TwoLocalScalar {
    type Output = TwoLocalScalar;
    fn add(self, rhs: TwoLocalScalar) -> TwoLocalScalar {
        TwoLocalScalar(self.0 + rhs.0)
    }
}

impl Sub for TwoLocalScalar {
    type Output = TwoLocalScalar;
    fn sub(self, rhs: TwoLocalScalar) -> TwoLocalScalar {
        TwoLocalScalar(self.0 - rhs.0)
    }
}

impl Mul for TwoLocalScalar {
    type Output = TwoLocalScalar;
    fn mul(self, rhs: TwoLocalScalar) -> TwoLocalScalar {
        TwoLocalScalar(self.0 * rhs.0)
    }
}

impl AddAssign<&TwoLocalScalar> for TwoLocalScalar {
    fn add_assign(&mut self, rhs: &TwoLocalScalar) {
        self.0 += &rhs.0;
    }
}

impl Neg for TwoLocalScalar {
    type Output = TwoLocalScalar;
    fn neg(self) -> TwoLocalScalar {
        TwoLocalScalar(-self.0)
    }
}

impl Neg for &TwoLocalScalar {
    type Output = TwoLocalScalar;
    fn neg(self) -> TwoLocalScalar {
        TwoLocalScalar(-&self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn valuations() {
        assert_eq!(TwoLocalScalar::zero().valuation(), None);
        assert_eq!(TwoLocalScalar::from_int(12).valuation(), Some(2));
        assert_eq!(TwoLocalScalar::from_fraction(8, 3).unwrap().valuation(), Some(3));
        assert_eq!(TwoLocalScalar::from_int(-7).valuation(), Some(0));
        assert!(TwoLocalScalar::from_int(3).is_unit());
    }

    #[test]
    fn even_denominator_rejected() {
        assert_eq!(TwoLocalScalar::from_fraction(1, 2), Err(AlgebraError::EvenDenominator));
        assert!(TwoLocalScalar::from_int(3).checked_div(&TwoLocalScalar::from_int(2)).is_none());
    }

    #[test]
    fn odd_division_is_exact() {
        let q = TwoLocalScalar::from_int(4).checked_div(&TwoLocalScalar::from_int(3)).unwrap();
        assert_eq!(&q * &TwoLocalScalar::from_int(3), TwoLocalScalar::from_int(4));
        assert_eq!(q.valuation(), Some(2));
    }

    #[test]
    fn residues() {
        // 1/3 ≡ 3 (mod 4) since 3·3 = 9 ≡ 1
        assert_eq!(TwoLocalScalar::from_fraction(1, 3).unwrap().residue_mod_pow2(2), 3);
        assert_eq!(TwoLocalScalar::from_int(-1).residue_mod_pow2(3), 7);
        assert_eq!(TwoLocalScalar::from_int(6).residue_mod_pow2(1), 0);
    }

    proptest! {
        #[test]
        fn valuation_is_additive(a in -500i64..500, b in -500i64..500, d in 0i64..20) {
            let x = TwoLocalScalar::from_fraction(a, 2 * d + 1).unwrap();
            let y = TwoLocalScalar::from_int(b);
            let prod = &x * &y;
            match (x.valuation(), y.valuation()) {
                (Some(u), Some(v)) => prop_assert_eq!(prod.valuation(), Some(u + v)),
                _ => prop_assert!(prod.is_zero()),
            }
        }

        #[test]
        fn split_recombines(a in -1000i64..1000, d in 0i64..20) {
            let x = TwoLocalScalar::from_fraction(a, 2 * d + 1).unwrap();
            if let Some((v, u)) = x.split() {
                prop_assert!(u.is_unit());
                prop_assert_eq!(&TwoLocalScalar::pow2(v) * &u, x);
            }
        }
    }
}
