//! Dense univariate polynomials with exact rational coefficients.
//!
//! Coefficients are stored by ascending power with trailing zeros trimmed,
//! so the zero polynomial is the empty list and the highest stored
//! coefficient is always nonzero. These are the numerators and denominators
//! of the ordered rational-function field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::rational::{Rational, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Poly {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Poly {
        Poly::new(vec![c])
    }

    /// The generator `x`.
    pub fn x() -> Poly {
        Poly::monomial(1, Rational::one())
    }

    /// `c * x^k`.
    pub fn monomial(k: usize, c: Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Index of the lowest nonzero coefficient (order at zero), or `None`
    /// for the zero polynomial.
    pub fn ord_at_zero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Sign of the lowest nonzero coefficient; `Zero` for the zero polynomial.
    pub fn low_coeff_sign(&self) -> Sign {
        match self.ord_at_zero() {
            Some(k) => self.coeffs[k].sign(),
            None => Sign::Zero,
        }
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplication by `x^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Exact division by `x^k`; requires `ord_at_zero >= k`.
    pub fn shift_down(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        assert!(
            self.ord_at_zero().is_some_and(|o| o >= k),
            "shift_down would drop nonzero terms"
        );
        Poly::new(self.coeffs[k..].to_vec())
    }

    pub fn eval(&self, v: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * v) + c;
        }
        acc
    }

    /// Euclidean division: `self = q * rhs + r` with `deg r < deg rhs`.
    pub fn div_rem(&self, rhs: &Poly) -> Result<(Poly, Poly)> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = rhs.degree().expect("nonzero");
        let lead = rhs.leading_coeff().expect("nonzero").clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let factor = (&rem[rem.len() - 1] / &lead).expect("leading coeff nonzero");
            if !factor.is_zero() {
                for (i, c) in rhs.coeffs.iter().enumerate() {
                    let sub = c * &factor;
                    rem[k + i] -= &sub;
                }
                quot[k] = factor;
            }
            // The top coefficient cancels exactly.
            debug_assert!(rem.last().unwrap().is_zero());
            rem.pop();
        }
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Monic greatest common divisor via the Euclidean algorithm.
    /// `gcd(0, 0) = 0`; otherwise the result is monic.
    pub fn gcd(&self, rhs: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("b nonzero");
            a = b;
            b = r;
        }
        a.into_monic()
    }

    /// Scales so the leading coefficient is 1 (zero stays zero).
    pub fn into_monic(self) -> Poly {
        match self.leading_coeff() {
            None => self,
            Some(lead) => {
                let inv = lead.recip().expect("leading coeff nonzero");
                self.scale(&inv)
            }
        }
    }

    /// Coefficient-reversed polynomial `x^deg * p(1/x)`; used to rewrite
    /// rational functions of `x` in terms of `1/x`.
    pub fn reversed(&self) -> Poly {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Poly::new(coeffs)
    }

    /// All integer roots, found exactly via the rational root bound.
    pub fn integer_roots(&self) -> Vec<i64> {
        use num_traits::ToPrimitive;
        let Some(ord) = self.ord_at_zero() else {
            return Vec::new(); // zero polynomial: callers treat separately
        };
        let reduced = self.shift_down(ord);
        let mut roots = Vec::new();
        if ord > 0 {
            roots.push(0);
        }
        // Integer roots of `reduced` divide its constant term once it is
        // scaled to integer coefficients.
        let mut denom_lcm = num_bigint::BigInt::from(1);
        for c in reduced.coeffs() {
            denom_lcm = num_integer::Integer::lcm(&denom_lcm, c.denom());
        }
        let scaled: Vec<num_bigint::BigInt> = reduced
            .coeffs()
            .iter()
            .map(|c| c.numer() * (&denom_lcm / c.denom()))
            .collect();
        let constant = scaled[0].clone();
        debug_assert!(!constant.is_zero());
        // Trial division is capped; callers that must be complete over a
        // bounded index range scan that range directly as well.
        let limit = constant.magnitude().to_u64().unwrap_or(u64::MAX);
        let mut d = 1u64;
        while d.saturating_mul(d) <= limit && d <= 1_000_000 {
            if limit % d == 0 {
                for cand in [d, limit / d] {
                    if let Some(c) = cand.to_i64() {
                        for r in [c, -c] {
                            if reduced.eval(&Rational::from_int(r)).is_zero()
                                && !roots.contains(&r)
                            {
                                roots.push(r);
                            }
                        }
                    }
                }
            }
            d += 1;
        }
        roots.sort_unstable();
        roots
    }
}

use num_traits::Zero as _;

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(&self.coeff(k) + &rhs.coeff(k));
        }
        Poly::new(coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(&self.coeff(k) - &rhs.coeff(k));
        }
        Poly::new(coeffs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let prod = a * b;
                coeffs[i + j] += &prod;
            }
        }
        Poly::new(coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for Poly {
    /// Ascending powers, e.g. `2 + x - 3*x^2`. Parseable by the expression
    /// language.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit = mag.is_one() && k > 0;
            if !unit {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "{}x", if unit { "" } else { "*" })?,
                _ => write!(f, "{}x^{k}", if unit { "" } else { "*" })?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Poly {
        Poly::new(cs.iter().map(|&c| Rational::from_int(c)).collect())
    }

    #[test]
    fn construction_trims_trailing_zeros() {
        assert_eq!(p(&[1, 2, 0, 0]), p(&[1, 2]));
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[0, 0]).degree(), None);
    }

    #[test]
    fn arithmetic() {
        let a = p(&[1, 1]); // 1 + x
        let b = p(&[-1, 1]); // -1 + x
        assert_eq!(&a * &b, p(&[-1, 0, 1])); // x^2 - 1
        assert_eq!(&a + &b, p(&[0, 2]));
        assert_eq!(&a - &a, Poly::zero());
    }

    #[test]
    fn div_rem_exact_and_with_remainder() {
        let num = p(&[-1, 0, 1]); // x^2 - 1
        let den = p(&[1, 1]); // x + 1
        let (q, r) = num.div_rem(&den).unwrap();
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_zero());

        let (q2, r2) = p(&[1, 0, 1]).div_rem(&p(&[1, 1])).unwrap();
        assert_eq!(&(&q2 * &p(&[1, 1])) + &r2, p(&[1, 0, 1]));
        assert!(r2.degree() < p(&[1, 1]).degree());
    }

    #[test]
    fn gcd_is_monic() {
        let a = p(&[0, 0, 2]); // 2x^2
        let b = p(&[0, 4]); // 4x
        assert_eq!(a.gcd(&b), p(&[0, 1]));
        assert_eq!(p(&[2]).gcd(&Poly::zero()), p(&[1]));
        assert!(Poly::zero().gcd(&Poly::zero()).is_zero());
    }

    #[test]
    fn order_at_zero_and_sign() {
        let f = p(&[0, 1, -1]); // x - x^2
        assert_eq!(f.ord_at_zero(), Some(1));
        assert_eq!(f.low_coeff_sign(), Sign::Positive);
        assert_eq!(Poly::zero().low_coeff_sign(), Sign::Zero);
    }

    #[test]
    fn integer_roots_found_exactly() {
        // (x - 2)(x + 3)x = x^3 + x^2 - 6x
        let f = p(&[0, -6, 1, 1]);
        assert_eq!(f.integer_roots(), vec![-3, 0, 2]);
        assert_eq!(p(&[1]).integer_roots(), Vec::<i64>::new());
        // 2x - 1 has no integer root
        assert_eq!(p(&[-1, 2]).integer_roots(), Vec::<i64>::new());
    }

    #[test]
    fn display_forms() {
        assert_eq!(p(&[2, 1]).to_string(), "2 + x");
        assert_eq!(p(&[0, -1, 3]).to_string(), "-x + 3*x^2");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(
            Poly::new(vec![Rational::ratio(1, 2)]).to_string(),
            "1/2"
        );
    }
}
