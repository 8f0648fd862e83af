//! Coefficient field abstraction.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Exact coefficient field. Every identity checked by this crate is an exact
/// polynomial identity, so only exact fields implement this trait.
pub trait Scalar: Clone + PartialEq + Debug + Display + Signed + FromPrimitive + Send + Sync + 'static {
    /// Builds `num/den`. Returns `None` when `den` is zero or the value does
    /// not fit the representation.
    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self>;

    /// Numerator and (positive) denominator in lowest terms.
    fn to_ratio(&self) -> (BigInt, BigInt);

    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("small integer fits every scalar type")
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        if den == &BigInt::from(0) {
            return None;
        }
        Some(BigRational::new(num.clone(), den.clone()))
    }

    fn to_ratio(&self) -> (BigInt, BigInt) {
        (self.numer().clone(), self.denom().clone())
    }
}

impl Scalar for Rational64 {
    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        let n = num.to_i64()?;
        let d = den.to_i64()?;
        if d == 0 {
            return None;
        }
        Some(Rational64::new(n, d))
    }

    fn to_ratio(&self) -> (BigInt, BigInt) {
        (BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_round_trip() {
        let q = BigRational::from_ratio(&BigInt::from(6), &BigInt::from(-4)).unwrap();
        assert_eq!(q.to_ratio(), (BigInt::from(-3), BigInt::from(2)));
        let r = Rational64::from_ratio(&BigInt::from(6), &BigInt::from(-4)).unwrap();
        assert_eq!(r.to_ratio(), (BigInt::from(-3), BigInt::from(2)));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(BigRational::from_ratio(&BigInt::from(1), &BigInt::from(0)).is_none());
        assert!(Rational64::from_ratio(&BigInt::from(1), &BigInt::from(0)).is_none());
    }
}
