//! Numeric scalars for the pair-system auditors: floats with a comparison
//! tolerance, and exact rationals with none.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub trait Scalar: Clone + Debug + PartialOrd + Num + FromPrimitive + Signed {
    /// Slack allowed when comparing against a bound.
    fn tolerance() -> Self;

    fn to_f64(&self) -> f64;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("scalar from integer") / Self::from_i64(den).expect("scalar from integer")
    }

    fn pow_u(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }

    /// `self <= bound` up to the type's tolerance.
    fn le_tol(&self, bound: &Self) -> bool {
        *self <= bound.clone() + Self::tolerance()
    }
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-12
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn pow_u(&self, exp: u32) -> Self {
        self.powi(exp as i32)
    }
}

impl Scalar for f32 {
    fn tolerance() -> Self {
        1e-6
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }

    fn pow_u(&self, exp: u32) -> Self {
        self.powi(exp as i32)
    }
}

impl Scalar for Rational {
    fn tolerance() -> Self {
        Rational::zero()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }
}

/// `"p/q"` in lowest terms.
pub fn rational_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"` or an integer.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn is_one<T: Scalar>(x: &T) -> bool {
    let diff = x.clone() - T::one();
    diff.abs() <= T::tolerance() * T::from_u32(8).expect("small constant")
}
