//! Exact arbitrary-precision rational scalars.
//!
//! [`Rational`] is the coefficient domain for everything in this crate:
//! polynomial coefficients, series coefficients in exact mode, evaluation
//! points, plot coordinates. It is a thin wrapper over
//! [`num_rational::BigRational`] that adds the domain operations the rest of
//! the crate needs (exact roots, dyadic decomposition, decimal formatting)
//! and keeps values canonical: reduced to lowest terms, denominator
//! positive, zero stored as 0/1.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign as IntSign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Sign of an exact quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of_bigint(n: &BigInt) -> Sign {
        match n.sign() {
            IntSign::Minus => Sign::Negative,
            IntSign::NoSign => Sign::Zero,
            IntSign::Plus => Sign::Positive,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }

}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (Sign::Positive, s) => s,
            (Sign::Negative, s) => s.flip(),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Negative => write!(f, "Negative"),
            Sign::Zero => write!(f, "Zero"),
            Sign::Positive => write!(f, "Positive"),
        }
    }
}

/// Exact rational number with arbitrary-precision numerator and denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Rational {
        Rational(BigRational::zero())
    }

    pub fn one() -> Rational {
        Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Rational {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Rational {
        Rational(BigRational::from_integer(n))
    }

    /// `numer / denom`, reduced. Errors on a zero denominator.
    pub fn new(numer: BigInt, denom: BigInt) -> Result<Rational> {
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    pub fn ratio(n: i64, d: i64) -> Rational {
        Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
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

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn sign(&self) -> Sign {
        Sign::of_bigint(self.numer())
    }

    pub fn abs(&self) -> Rational {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Rational> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Fractional part in `[0, 1)`.
    pub fn fract(&self) -> Rational {
        self - &Rational::from_bigint(self.floor())
    }

    pub fn min(self, other: Rational) -> Rational {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Rational) -> Rational {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Integer power with exact result; negative exponents invert.
    pub fn pow_int(&self, e: i64) -> Result<Rational> {
        if e == 0 {
            return Ok(Rational::one());
        }
        if self.is_zero() && e < 0 {
            return Err(Error::DivisionByZero);
        }
        if e.unsigned_abs() > 1_000_000 {
            return Err(Error::DomainError(format!("exponent {e} too large")));
        }
        let mag = self.0.pow(e.unsigned_abs() as i32);
        Ok(Rational(if e < 0 { mag.recip() } else { mag }))
    }

    /// Exact `q`-th root when both numerator and denominator are perfect
    /// `q`-th powers; otherwise `None`. For even `q` the value must be
    /// non-negative.
    pub fn nth_root_exact(&self, q: u32) -> Option<Rational> {
        assert!(q >= 1);
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.is_negative() {
            if q % 2 == 0 {
                return None;
            }
            return self.neg().nth_root_exact(q).map(|r| -&r);
        }
        let rn = exact_root_uint(self.numer().magnitude(), q)?;
        let rd = exact_root_uint(self.denom().magnitude(), q)?;
        Some(Rational(BigRational::new(
            BigInt::from(rn),
            BigInt::from(rd),
        )))
    }

    /// Exact square root, if the value is a perfect square of a rational.
    pub fn sqrt_exact(&self) -> Option<Rational> {
        self.nth_root_exact(2)
    }

    /// Exact rational power `self^(p/q)` when it exists.
    pub fn pow_rational_exact(&self, e: &Rational) -> Option<Rational> {
        let q = e.denom().to_u32()?;
        let p = e.numer().to_i64()?;
        let root = self.nth_root_exact(q)?;
        root.pow_int(p).ok()
    }

    /// Writes the value as `p / 2^k` when the denominator is a power of two.
    pub fn dyadic(&self) -> Option<(BigInt, u32)> {
        let d = self.denom().magnitude();
        let k = d.trailing_zeros().unwrap_or(0);
        if &(BigUint::one() << k) == d {
            Some((self.numer().clone(), k as u32))
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn into_inner(self) -> BigRational {
        self.0
    }

    pub fn as_inner(&self) -> &BigRational {
        &self.0
    }

    /// Parses an integer, a decimal (`3.25`, `-0.5`), or a ratio (`p/q`).
    pub fn parse(text: &str) -> Result<Rational> {
        let s = text.trim();
        if let Some((p, q)) = s.rsplit_once('/') {
            let num = Rational::parse(p)?;
            let den = Rational::parse(q)?;
            return (&num / &den).map_err(|_| Error::Parse(format!("zero denominator in `{s}`")));
        }
        if let Some((int_part, frac_part)) = s.split_once('.') {
            let digits = frac_part.len() as u32;
            if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Parse(format!("bad decimal `{s}`")));
            }
            let negative = int_part.starts_with('-');
            let whole = if int_part == "-" || int_part.is_empty() {
                BigInt::zero()
            } else {
                BigInt::from_str(int_part)
                    .map_err(|_| Error::Parse(format!("bad number `{s}`")))?
            };
            let frac = BigInt::from_str(frac_part)
                .map_err(|_| Error::Parse(format!("bad number `{s}`")))?;
            let scale = BigInt::from(10u32).pow(digits);
            let mag = whole.abs() * &scale + frac;
            let signed = if negative { -mag } else { mag };
            return Rational::new(signed, scale);
        }
        BigInt::from_str(s)
            .map(Rational::from_bigint)
            .map_err(|_| Error::Parse(format!("bad number `{s}`")))
    }
}

fn exact_root_uint(n: &BigUint, q: u32) -> Option<BigUint> {
    let r = n.nth_root(q);
    if r.pow(q) == *n {
        Some(r)
    } else {
        None
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for &Rational {
    type Output = Result<Rational>;
    fn div(self, rhs: &Rational) -> Result<Rational> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Rational {
        Rational::from_int(n)
    }
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

/// Generalized binomial coefficient `binom(r, k)` for rational `r`.
pub fn binomial_rational(r: &Rational, k: u64) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        let term = r - &Rational::from_int(i as i64);
        acc = &acc * &term;
    }
    let fact = Rational::from_bigint(factorial(k));
    (&acc / &fact).expect("factorial is nonzero")
}
