//! Coefficient ring contract shared by every series in the crate.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Commutative ring with unit. Elements carry a context (generator layout,
/// truncation cap, ...) so that zero and one can be built without a sample.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    type Ctx: Clone + PartialEq + Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    /// Human readable ring identifier, used in mismatch errors and JSON.
    fn tag(ctx: &Self::Ctx) -> String;

    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Result<Self>;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Result<Self>;
    fn is_unit(&self) -> bool;
    fn inv(&self) -> Result<Self>;

    fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// `self += a * b`. Rings with expensive allocation override this.
    fn add_mul_assign(&mut self, a: &Self, b: &Self) -> Result<()> {
        *self = self.add(&a.mul(b)?)?;
        Ok(())
    }

    fn to_json(&self) -> serde_json::Value;
}

/// Rings that are algebras over the rationals.
pub trait Algebra: Ring {
    fn scale(&self, c: &Rat) -> Self;
    fn from_rat(ctx: &Self::Ctx, c: &Rat) -> Self {
        Self::one(ctx).scale(c)
    }
}

impl Ring for Rat {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero(_: &()) -> Self {
        <Rat as Zero>::zero()
    }
    fn one(_: &()) -> Self {
        <Rat as One>::one()
    }
    fn tag(_: &()) -> String {
        "Q".to_string()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Result<Self> {
        Ok(self + other)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        Ok(self * other)
    }
    fn is_unit(&self) -> bool {
        !Zero::is_zero(self)
    }
    fn inv(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::NonUnit)
        } else {
            Ok(self.recip())
        }
    }
    fn add_mul_assign(&mut self, a: &Self, b: &Self) -> Result<()> {
        *self += a * b;
        Ok(())
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
}

impl Algebra for Rat {
    fn scale(&self, c: &Rat) -> Self {
        self * c
    }
}

/// Integer view of a rational, if it has one.
pub fn as_integer(r: &Rat) -> Option<BigInt> {
    r.is_integer().then(|| r.to_integer())
}

/// `a / b` for integers, `None` unless exact.
pub fn divides(m: &BigInt, n: &BigInt) -> bool {
    !m.is_zero() && (n % m).is_zero()
}

pub fn abs_rat(r: &Rat) -> Rat {
    r.abs()
}
