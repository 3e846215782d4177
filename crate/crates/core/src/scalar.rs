//! Exact-when-possible scalars.
//!
//! Permutation-side quantities are 64-bit rationals; matrix-side quantities
//! are doubles. [`Scalar`] carries either and degrades to a double as soon
//! as an operand is inexact or a rational operation would overflow.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Signed, ToPrimitive, Zero};

pub type Ratio = num_rational::Rational64;

pub fn ratio(num: i64, den: i64) -> Ratio {
    Ratio::new(num, den)
}

pub fn ratio_to_f64(r: &Ratio) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Integer power with overflow detection.
pub fn checked_pow(base: Ratio, exp: u32) -> Option<Ratio> {
    let mut acc = Ratio::from_integer(1);
    for _ in 0..exp {
        acc = acc.checked_mul(&base)?;
    }
    Some(acc)
}

#[derive(Debug, Clone, Copy)]
pub enum Scalar {
    Exact(Ratio),
    Approx(f64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(Ratio::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(Ratio::from_integer(1))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => ratio_to_f64(r),
            Scalar::Approx(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_ratio(&self) -> Option<Ratio> {
        match self {
            Scalar::Exact(r) => Some(*r),
            Scalar::Approx(_) => None,
        }
    }

    fn combine(
        self,
        other: Self,
        exact: impl Fn(&Ratio, &Ratio) -> Option<Ratio>,
        approx: impl Fn(f64, f64) -> f64,
    ) -> Self {
        if let (Scalar::Exact(a), Scalar::Exact(b)) = (self, other) {
            if let Some(r) = exact(&a, &b) {
                return Scalar::Exact(r);
            }
        }
        Scalar::Approx(approx(self.to_f64(), other.to_f64()))
    }

    pub fn add(self, other: Self) -> Self {
        self.combine(other, |a, b| a.checked_add(b), |a, b| a + b)
    }

    pub fn sub(self, other: Self) -> Self {
        self.combine(other, |a, b| a.checked_sub(b), |a, b| a - b)
    }

    pub fn mul(self, other: Self) -> Self {
        self.combine(other, |a, b| a.checked_mul(b), |a, b| a * b)
    }

    pub fn abs(self) -> Self {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Approx(x) => Scalar::Approx(x.abs()),
        }
    }

    pub fn clamp01(self) -> Self {
        if self.total_cmp(&Scalar::zero()) == Ordering::Less {
            Scalar::zero()
        } else if self.total_cmp(&Scalar::one()) == Ordering::Greater {
            Scalar::one()
        } else {
            self
        }
    }

    /// Total order; exact pairs compare exactly, otherwise by `f64::total_cmp`.
    pub fn total_cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            _ => self.to_f64().total_cmp(&other.to_f64()),
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other.total_cmp(&self) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other.total_cmp(&self) == Ordering::Less {
            other
        } else {
            self
        }
    }
}

impl From<Ratio> for Scalar {
    fn from(r: Ratio) -> Self {
        Scalar::Exact(r)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Approx(x)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.total_cmp(other) == Ordering::Equal
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Approx(x) => write!(f, "{x}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_stays_exact() {
        let a = Scalar::from(ratio(1, 3));
        let b = Scalar::from(ratio(1, 6));
        assert_eq!(a.add(b).as_ratio(), Some(ratio(1, 2)));
        assert_eq!(a.sub(b).as_ratio(), Some(ratio(1, 6)));
    }

    #[test]
    fn overflow_degrades_to_double() {
        let big = Scalar::from(Ratio::new(i64::MAX - 1, 1));
        let s = big.add(big);
        assert!(!s.is_exact());
        assert!(s.to_f64() > 1e18);
    }

    #[test]
    fn mixed_is_approx() {
        let s = Scalar::from(ratio(1, 2)).add(Scalar::from(0.25));
        assert!(!s.is_exact());
        assert_eq!(s.to_f64(), 0.75);
    }

    #[test]
    fn clamp() {
        assert_eq!(Scalar::from(ratio(3, 2)).clamp01(), Scalar::one());
        assert_eq!(Scalar::from(-0.5).clamp01(), Scalar::zero());
    }
}
