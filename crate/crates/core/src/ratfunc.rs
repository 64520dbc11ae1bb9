//! The ordered field of rational functions in one indeterminate `x`,
//! ordered so that `x` is a positive infinitesimal.
//!
//! An element is a reduced fraction of polynomials. The order is decided by
//! the sign the element takes on some interval `(0, a)`: since a nonzero
//! rational function has finitely many roots, that eventual sign is the sign
//! of the lowest-order nonzero coefficient of numerator times denominator,
//! which is computable exactly. Under this order `0 < x^2 < x < k` holds for
//! every positive rational constant `k`, so the field violates the
//! Archimedean axiom and carries genuine infinitesimal and infinite
//! elements. `1/x` exceeds every constant; it doubles as the element `ω`
//! when sequences `a(n)` are read as germs at infinity via `n = 1/x`.
//!
//! Canonical form: `gcd(num, den) = 1` and the lowest-order nonzero
//! coefficient of the denominator is positive, so structural equality is
//! field equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::{Rational, Sign};

/// Position of an element relative to the embedded rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Zero,
    PositiveInfinitesimal,
    NegativeInfinitesimal,
    FiniteNonInfinitesimal,
    PositiveInfinite,
    NegativeInfinite,
}

impl Classification {
    pub fn is_finite(self) -> bool {
        !matches!(
            self,
            Classification::PositiveInfinite | Classification::NegativeInfinite
        )
    }

    pub fn is_infinitesimal_or_zero(self) -> bool {
        matches!(
            self,
            Classification::Zero
                | Classification::PositiveInfinitesimal
                | Classification::NegativeInfinitesimal
        )
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Classification::Zero => "Zero",
            Classification::PositiveInfinitesimal => "PositiveInfinitesimal",
            Classification::NegativeInfinitesimal => "NegativeInfinitesimal",
            Classification::FiniteNonInfinitesimal => "FiniteNonInfinitesimal",
            Classification::PositiveInfinite => "PositiveInfinite",
            Classification::NegativeInfinite => "NegativeInfinite",
        };
        write!(f, "{s}")
    }
}

/// Reduced, sign-normalized quotient of two polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Builds `num / den` in canonical form. Errors if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc {
                num: Poly::zero(),
                den: Poly::one(),
            });
        }
        let g = num.gcd(&den);
        let (num, r1) = num.div_rem(&g).expect("gcd nonzero");
        debug_assert!(r1.is_zero());
        let (den, r2) = den.div_rem(&g).expect("gcd nonzero");
        debug_assert!(r2.is_zero());
        // Unit normalization: scalars are units in the polynomial ring, so
        // the reduced pair is only determined up to one. Pinning the
        // denominator's lowest-order nonzero coefficient to exactly 1 makes
        // the representation unique (and in particular positive).
        let low = den.ord_at_zero().expect("den nonzero");
        let unit = den.coeff(low).recip().expect("lowest coefficient nonzero");
        let num = num.scale(&unit);
        let den = den.scale(&unit);
        Ok(RatFunc { num, den })
    }

    pub fn zero() -> RatFunc {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> RatFunc {
        RatFunc::from_rational(Rational::one())
    }

    pub fn from_rational(c: Rational) -> RatFunc {
        RatFunc {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn from_int(n: i64) -> RatFunc {
        RatFunc::from_rational(Rational::from_int(n))
    }

    /// The positive infinitesimal generator `x`.
    pub fn x() -> RatFunc {
        RatFunc {
            num: Poly::x(),
            den: Poly::one(),
        }
    }

    /// The infinite element `1/x`; also plays the role of `ω`.
    pub fn omega() -> RatFunc {
        RatFunc {
            num: Poly::one(),
            den: Poly::x(),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Exact rational value if the element is a constant.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.num.degree().unwrap_or(0) == 0 && self.den.degree() == Some(0) {
            Some((&self.num.coeff(0) / &self.den.coeff(0)).expect("den nonzero"))
        } else {
            None
        }
    }

    /// Order at zero: `ord0(num) - ord0(den)`. Positive order means the
    /// element vanishes at 0 (infinitesimal); negative order means a pole
    /// (infinite element). `None` for the zero element.
    pub fn order(&self) -> Option<i64> {
        let n = self.num.ord_at_zero()? as i64;
        let d = self.den.ord_at_zero().expect("den nonzero") as i64;
        Some(n - d)
    }

    /// Sign of the element on some interval `(0, a)` with `a > 0`.
    pub fn low_order_sign(&self) -> Sign {
        self.num.low_coeff_sign() * self.den.low_coeff_sign()
    }

    /// Total order with `x` infinitesimal: `f < g` iff `g - f` is eventually
    /// positive near `0+`.
    pub fn compare(&self, rhs: &RatFunc) -> Ordering {
        match (self - rhs).low_order_sign() {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }

    pub fn classify(&self) -> Classification {
        let Some(ord) = self.order() else {
            return Classification::Zero;
        };
        let sign = self.low_order_sign();
        debug_assert!(sign != Sign::Zero);
        match (ord.cmp(&0), sign) {
            (Ordering::Greater, Sign::Positive) => Classification::PositiveInfinitesimal,
            (Ordering::Greater, _) => Classification::NegativeInfinitesimal,
            (Ordering::Equal, _) => Classification::FiniteNonInfinitesimal,
            (Ordering::Less, Sign::Positive) => Classification::PositiveInfinite,
            (Ordering::Less, _) => Classification::NegativeInfinite,
        }
    }

    /// The unique rational `c` at infinitesimal distance from a finite
    /// element. Infinite elements have none.
    pub fn standard_part(&self) -> Result<Rational> {
        match self.order() {
            None => Ok(Rational::zero()),
            Some(o) if o > 0 => Ok(Rational::zero()),
            Some(0) => {
                // Reduced form: x divides neither num nor den, so both have
                // nonzero constant terms.
                Ok((&self.num.coeff(0) / &self.den.coeff(0)).expect("den(0) != 0"))
            }
            Some(_) => Err(Error::NotFinite(self.to_string())),
        }
    }

    /// Splits a finite element as `standard part + infinitesimal part`.
    pub fn decompose_finite(&self) -> Result<(Rational, RatFunc)> {
        let c = self.standard_part()?;
        let eps = self - &RatFunc::from_rational(c.clone());
        debug_assert!(eps.classify().is_infinitesimal_or_zero());
        Ok((c, eps))
    }

    /// One-dimensional magnification about `c`: `(f - c) / x`. Maps `c` to 0
    /// and `c + x` to 1, separating points at infinitesimal distance.
    pub fn magnify1d(&self, c: &Rational) -> RatFunc {
        let shifted = self - &RatFunc::from_rational(c.clone());
        shifted.div(&RatFunc::x()).expect("x is nonzero")
    }

    /// Exact evaluation at a rational point.
    pub fn eval_at(&self, v: &Rational) -> Result<Rational> {
        let den = self.den.eval(v);
        if den.is_zero() {
            return Err(Error::PoleAtPoint(v.to_string()));
        }
        Ok((&self.num.eval(v) / &den).expect("checked nonzero"))
    }

    pub fn div(&self, rhs: &RatFunc) -> Result<RatFunc> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn recip(&self) -> Result<RatFunc> {
        RatFunc::one().div(self)
    }

    pub fn pow_int(&self, e: i64) -> Result<RatFunc> {
        if e == 0 {
            return Ok(RatFunc::one());
        }
        if self.is_zero() && e < 0 {
            return Err(Error::DivisionByZero);
        }
        let mut base = if e < 0 { self.recip()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = RatFunc::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Substitutes `x -> 1/x`, exactly. Conjugates the germ at `0+` with the
    /// germ at infinity; `substitute_reciprocal` is an involution.
    pub fn substitute_reciprocal(&self) -> RatFunc {
        if self.is_zero() {
            return RatFunc::zero();
        }
        let dn = self.num.degree().expect("nonzero") as i64;
        let dd = self.den.degree().expect("den nonzero") as i64;
        let rn = self.num.reversed();
        let rd = self.den.reversed();
        // num(1/x)/den(1/x) = x^(dd-dn) * rev(num)/rev(den)
        let shift = dd - dn;
        let (num, den) = if shift >= 0 {
            (rn.shift_up(shift as usize), rd)
        } else {
            (rn, rd.shift_up((-shift) as usize))
        };
        RatFunc::new(num, den).expect("reversed denominator nonzero")
    }

    /// Renders the element as a polynomial fraction in `ω = 1/x`, the way
    /// germs at infinity are usually written.
    pub fn to_omega_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let in_omega = self.substitute_reciprocal();
        let num = poly_string_in(&in_omega.num, "ω");
        if in_omega.den.degree() == Some(0) && in_omega.den.coeff(0).is_one() {
            return num;
        }
        let den = poly_string_in(&in_omega.den, "ω");
        let num_paren = if needs_parens_as_numerator(&in_omega.num) {
            format!("({num})")
        } else {
            num
        };
        // A lone power of ω needs no parentheses after the slash; anything
        // with several terms or a non-unit coefficient does.
        let den_single_power = !multi_term(&in_omega.den)
            && in_omega
                .den
                .leading_coeff()
                .is_some_and(|c| c.is_one());
        let den_paren = if den_single_power {
            den
        } else {
            format!("({den})")
        };
        format!("{num_paren}/{den_paren}")
    }
}

fn multi_term(p: &Poly) -> bool {
    p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1
}

/// A numerator needs parentheses before a slash when it has several terms
/// or its sole coefficient already prints as a fraction.
fn needs_parens_as_numerator(p: &Poly) -> bool {
    if multi_term(p) {
        return true;
    }
    p.coeffs()
        .iter()
        .find(|c| !c.is_zero())
        .is_some_and(|c| !c.is_integer())
}

fn poly_string_in(p: &Poly, var: &str) -> String {
    p.to_string().replace('x', var)
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::new(num, &self.den * &rhs.den).expect("product of nonzero denominators")
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("product of nonzero denominators")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RatFunc {
    /// `num/den` in ascending powers, parseable by the expression language,
    /// e.g. `(2 + x)/(1 + x)` or `1/x`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) && self.den.coeff(0).is_one() {
            return write!(f, "{}", self.num);
        }
        if needs_parens_as_numerator(&self.num) {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        let den_single_power =
            !multi_term(&self.den) && self.den.leading_coeff().is_some_and(|c| c.is_one());
        if den_single_power {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}
