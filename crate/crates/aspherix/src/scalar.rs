//! Exact coefficient scalars for group-ring arithmetic.
//!
//! Two instantiations are supported: arbitrary-precision integers and
//! Gaussian rationals (a + bi with exact rational a, b). Floating point is
//! deliberately absent; every positivity and equality check in this crate
//! is exact.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision integer coefficients (the ring Z).
pub type Int = BigInt;

/// Exact Gaussian rationals a + bi, the computable stand-in for C.
pub type Gaussian = Complex<BigRational>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarKind {
    Int,
    Gaussian,
}

impl ScalarKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScalarKind::Int => "int",
            ScalarKind::Gaussian => "gaussian",
        }
    }
}

/// A scalar written over a common denominator: (num + im*i) / den.
///
/// Canonical form: den >= 1 and no prime divides all three parts.
/// This is the wire representation used by the matrix JSON format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarParts {
    pub num: BigInt,
    pub den: BigInt,
    pub im: BigInt,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScalarError {
    #[error("denominator must be a positive integer")]
    BadDenominator,
    #[error("integer scalar cannot hold {0}")]
    NotAnInteger(String),
}

/// Coefficient ring for group-ring elements.
///
/// Conjugation is the identity on integers and complex conjugation on
/// Gaussian rationals. `to_int` succeeds exactly when the scalar is a
/// (rational) integer with zero imaginary part, which is what the
/// augmentation-level integer linear algebra consumes.
pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const KIND: ScalarKind;

    fn conjugate(&self) -> Self;
    fn from_int(n: i64) -> Self;
    fn to_int(&self) -> Option<BigInt>;
    fn to_parts(&self) -> ScalarParts;
    fn from_parts(parts: ScalarParts) -> Result<Self, ScalarError>;
}

impl Scalar for Int {
    const KIND: ScalarKind = ScalarKind::Int;

    fn conjugate(&self) -> Self {
        self.clone()
    }

    fn from_int(n: i64) -> Self {
        BigInt::from(n)
    }

    fn to_int(&self) -> Option<BigInt> {
        Some(self.clone())
    }

    fn to_parts(&self) -> ScalarParts {
        ScalarParts {
            num: self.clone(),
            den: BigInt::one(),
            im: BigInt::zero(),
        }
    }

    fn from_parts(parts: ScalarParts) -> Result<Self, ScalarError> {
        if parts.den <= BigInt::zero() {
            return Err(ScalarError::BadDenominator);
        }
        if !parts.im.is_zero() {
            return Err(ScalarError::NotAnInteger(format!(
                "{}i/{}",
                parts.im, parts.den
            )));
        }
        let (q, r) = parts.num.div_rem(&parts.den);
        if !r.is_zero() {
            return Err(ScalarError::NotAnInteger(format!(
                "{}/{}",
                parts.num, parts.den
            )));
        }
        Ok(q)
    }
}

impl Scalar for Gaussian {
    const KIND: ScalarKind = ScalarKind::Gaussian;

    fn conjugate(&self) -> Self {
        self.conj()
    }

    fn from_int(n: i64) -> Self {
        Complex::new(BigRational::from(BigInt::from(n)), BigRational::zero())
    }

    fn to_int(&self) -> Option<BigInt> {
        if self.im.is_zero() && self.re.is_integer() {
            Some(self.re.to_integer())
        } else {
            None
        }
    }

    fn to_parts(&self) -> ScalarParts {
        let den = self.re.denom().lcm(self.im.denom());
        let num = self.re.numer() * (&den / self.re.denom());
        let im = self.im.numer() * (&den / self.im.denom());
        ScalarParts { num, den, im }
    }

    fn from_parts(parts: ScalarParts) -> Result<Self, ScalarError> {
        if parts.den <= BigInt::zero() {
            return Err(ScalarError::BadDenominator);
        }
        Ok(Complex::new(
            BigRational::new(parts.num, parts.den.clone()),
            BigRational::new(parts.im, parts.den),
        ))
    }
}

/// Convenience constructor for Gaussian rationals from integer parts.
pub fn gaussian(re: i64, im: i64) -> Gaussian {
    Complex::new(
        BigRational::from(BigInt::from(re)),
        BigRational::from(BigInt::from(im)),
    )
}

/// Gaussian rational from two exact fractions.
pub fn gaussian_ratio(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Gaussian {
    Complex::new(
        BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
        BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
    )
}

/// True when a Gaussian value is real and nonnegative. Used by the
/// positivity checks on traces and Hermitian pairings.
pub fn is_real_nonnegative(z: &Gaussian) -> bool {
    z.im.is_zero() && !z.re.is_negative()
}
