//! Arithmetic-mode abstraction: every operator computation in this crate is
//! generic over [`Scalar`], instantiated with [`BigRational`] (exact) or `f64`.

use std::fmt::{Debug, Display};

use num::bigint::BigInt;
use num::complex::Complex;
use num::traits::{Num, NumAssign, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

pub use num::rational::BigRational;

use crate::error::{Error, Result};

/// Arithmetic mode tag, carried into reports and sidecar metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Arithmetic {
    ExactRational,
    Float64,
}

impl Display for Arithmetic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Arithmetic::ExactRational => write!(f, "exact-rational"),
            Arithmetic::Float64 => write!(f, "float64"),
        }
    }
}

/// Real scalar field the operator entries are built over.
///
/// Exact mode uses `BigRational`; complex entries are then Gaussian rationals
/// (`Complex<BigRational>`), so Hermiticity and commutator identities can be
/// asserted with `==` instead of tolerances.
pub trait Scalar:
    Clone + PartialEq + PartialOrd + Debug + Display + Num + NumAssign + Signed + Send + Sync + 'static
{
    const ARITHMETIC: Arithmetic;

    fn from_u64(n: u64) -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn to_f64_lossy(&self) -> f64;

    /// `base^p` for rational exponent `p`. `None` when the value is not
    /// representable in this scalar type (fractional exponents in exact mode).
    fn try_pow(base: &Self, p: &BigRational) -> Option<Self>;
}

impl Scalar for f64 {
    const ARITHMETIC: Arithmetic = Arithmetic::Float64;

    fn from_u64(n: u64) -> Self {
        n as f64
    }

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn from_rational(q: &BigRational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }

    fn try_pow(base: &Self, p: &BigRational) -> Option<Self> {
        Some(base.powf(p.to_f64()?))
    }
}

impl Scalar for BigRational {
    const ARITHMETIC: Arithmetic = Arithmetic::ExactRational;

    fn from_u64(n: u64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn try_pow(base: &Self, p: &BigRational) -> Option<Self> {
        if !p.is_integer() {
            return None;
        }
        let e = p.numer().to_i64()?;
        if e == 0 {
            return Some(BigRational::one());
        }
        let mag = u32::try_from(e.unsigned_abs()).ok()?;
        let powed = BigRational::new(base.numer().pow(mag), base.denom().pow(mag));
        if e < 0 {
            if powed.is_zero() {
                return None;
            }
            Some(powed.recip())
        } else {
            Some(powed)
        }
    }
}

/// `|z|^2`, exact in both modes.
pub fn norm_sqr<S: Scalar>(z: &Complex<S>) -> S {
    z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone()
}

/// Lower bound on `|z|`: `max(|Re z|, |Im z|)`. Exact in both modes; used to
/// certify inequalities whose right-hand side carries a modulus that is not
/// rational for general Gaussian rationals.
pub fn abs_lower<S: Scalar>(z: &Complex<S>) -> S {
    let re = z.re.abs();
    let im = z.im.abs();
    if re >= im {
        re
    } else {
        im
    }
}

/// Parse a scalar literal: integer (`-3`), fraction (`5/2`), or decimal with
/// optional exponent (`0.25`, `1.5e-3`). Every accepted literal is an exact
/// rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::InvalidParameter("empty numeric literal".into()));
    }
    if let Some((num, den)) = t.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| bad_literal(text, "numerator is not an integer"))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| bad_literal(text, "denominator is not an integer"))?;
        if d.is_zero() {
            return Err(bad_literal(text, "zero denominator"));
        }
        return Ok(BigRational::new(n, d));
    }

    let (mantissa, exponent) = match t.split_once(['e', 'E']) {
        Some((m, e)) => {
            let exp: i32 = e.parse().map_err(|_| bad_literal(text, "bad exponent"))?;
            (m, exp)
        }
        None => (t, 0),
    };

    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad_literal(text, "no digits"));
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad_literal(text, "non-digit in mantissa"));
    }

    let joined = format!("{int_part}{frac_part}");
    let mut numer: BigInt = if joined.is_empty() {
        BigInt::zero()
    } else {
        joined
            .parse()
            .map_err(|_| bad_literal(text, "mantissa overflow"))?
    };
    numer *= sign;
    let mut denom = BigInt::one();
    let shift = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    if shift >= 0 {
        numer *= ten.pow(shift as u32);
    } else {
        denom = ten.pow(shift.unsigned_abs());
    }
    Ok(BigRational::new(numer, denom))
}

fn bad_literal(text: &str, why: &str) -> Error {
    Error::InvalidParameter(format!("cannot parse {text:?} as a rational: {why}"))
}

/// Rational shorthand used throughout tests and builders.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
