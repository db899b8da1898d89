//! Scalar abstraction shared by the algebraic layers.
//!
//! Weil algebras, power series and the lifting functor only need ring
//! operations plus inversion of nonzero elements. Q_p elements carry their
//! prime and precision at runtime, so constants are built from an explicit
//! [`Scalar::Context`] rather than through `num_traits::Zero`/`One`.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    type Context: Clone + Debug + PartialEq + Send + Sync;

    fn context(&self) -> Self::Context;
    fn zero_in(ctx: &Self::Context) -> Self;
    fn one_in(ctx: &Self::Context) -> Self;
    fn from_ratio(ctx: &Self::Context, num: &BigInt, den: &BigInt) -> Result<Self>;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse, `None` for zero.
    fn checked_inv(&self) -> Option<Self>;

    /// Whether two contexts describe the same field (precision may differ).
    fn same_field(a: &Self::Context, b: &Self::Context) -> bool {
        a == b
    }

    fn from_int(ctx: &Self::Context, n: i64) -> Self {
        Self::from_ratio(ctx, &BigInt::from(n), &BigInt::one())
            .expect("integer constants have denominator one")
    }

    fn from_bigint(ctx: &Self::Context, n: &BigInt) -> Self {
        Self::from_ratio(ctx, n, &BigInt::one()).expect("integer constants have denominator one")
    }
}

impl Scalar for BigRational {
    type Context = ();

    fn context(&self) {}

    fn zero_in(_: &()) -> Self {
        BigRational::zero()
    }

    fn one_in(_: &()) -> Self {
        BigRational::one()
    }

    fn from_ratio(_: &(), num: &BigInt, den: &BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(BigRational::new(num.clone(), den.clone()))
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn checked_inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Scalar for f64 {
    type Context = ();

    fn context(&self) {}

    fn zero_in(_: &()) -> Self {
        0.0
    }

    fn one_in(_: &()) -> Self {
        1.0
    }

    fn from_ratio(_: &(), num: &BigInt, den: &BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let n = num.to_f64().unwrap_or(f64::NAN);
        let d = den.to_f64().unwrap_or(f64::NAN);
        Ok(n / d)
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn checked_inv(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
}
