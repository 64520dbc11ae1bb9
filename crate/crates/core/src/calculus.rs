//! Differentiation, Taylor extraction and one-sided limits by infinitesimal
//! increments: evaluate at `x0 + ε`, form the difference quotient, take the
//! standard part.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::expr::{eval_series, Expr, SeriesBackend};
use crate::rational::{Rational, Sign};
use crate::series::{Coeff, Mode, SeriesCtx, SeriesElem};

/// A derivative value together with the full difference quotient it was
/// read from.
#[derive(Debug, Clone)]
pub struct DerivativeResult {
    pub value: Coeff,
    /// `(f(x0 + ε) - f(x0)) / ε` before the standard part is taken.
    pub witness: SeriesElem,
}

/// Evaluation point for the calculus operations.
#[derive(Debug, Clone)]
pub enum Point {
    Exact(Rational),
    Approx(Coeff),
}

impl Point {
    fn coeff(&self, mode: Mode, ctx: &SeriesCtx) -> Coeff {
        match self {
            Point::Exact(r) => Coeff::of_rational(r, mode, ctx.work()),
            Point::Approx(c) => c.clone(),
        }
    }
}

fn eval_at_displacement(
    f: &Expr,
    var: &str,
    x0: &Point,
    shift: &SeriesElem,
    mode: Mode,
    ctx: &SeriesCtx,
) -> Result<SeriesElem> {
    let backend = SeriesBackend::new(mode, *ctx);
    let center = SeriesElem::constant(x0.coeff(mode, ctx));
    let arg = center.add(shift, ctx)?;
    let mut bindings = BTreeMap::new();
    bindings.insert(var.to_string(), arg);
    eval_series(f, &backend, &bindings)
}

fn difference_quotient(value: &SeriesElem, ctx: &SeriesCtx) -> Result<SeriesElem> {
    let mode = value.mode();
    let head = value
        .coeff_at(0)
        .ok_or(Error::EmptyWindow)?;
    let shifted = value.sub(&SeriesElem::constant(head), ctx)?;
    shifted.div(&SeriesElem::epsilon(mode), ctx)
}

/// `f'(x0) = st((f(x0 + ε) - f(x0)) / ε)`, with the quotient returned as a
/// witness. The standard part is recomputed with `ε` replaced by `2ε` and
/// must agree, which certifies that the result does not depend on the
/// choice of infinitesimal.
pub fn derivative(
    f: &Expr,
    var: &str,
    x0: &Point,
    mode: Mode,
    ctx: &SeriesCtx,
) -> Result<DerivativeResult> {
    let value = eval_at_displacement(f, var, x0, &SeriesElem::epsilon(mode), mode, ctx)?;
    if value
        .lead_exponent()
        .is_some_and(|lead| lead < 0)
    {
        return Err(Error::NotDifferentiableHere);
    }
    let witness = difference_quotient(&value, ctx)?;
    if witness.lead_exponent().is_some_and(|lead| lead < 0) {
        return Err(Error::NotDifferentiableHere);
    }
    let out = witness.standard_part()?;

    // Independence check: the same computation through 2ε.
    let scaled = value.scale_epsilon(&Rational::from_int(2), ctx)?;
    let two_eps = SeriesElem::monomial(1, Coeff::of_rational(&Rational::from_int(2), mode, ctx.work()));
    let head = scaled.coeff_at(0).ok_or(Error::EmptyWindow)?;
    let witness2 = scaled
        .sub(&SeriesElem::constant(head), ctx)?
        .div(&two_eps, ctx)?;
    let out2 = witness2.standard_part()?;
    if !coeff_close(&out, &out2, ctx) {
        return Err(Error::NotDifferentiableHere);
    }

    Ok(DerivativeResult {
        value: out,
        witness,
    })
}

fn coeff_close(a: &Coeff, b: &Coeff, ctx: &SeriesCtx) -> bool {
    match (a, b) {
        (Coeff::Exact(x), Coeff::Exact(y)) => x == y,
        _ => {
            // Approximate coefficients agree when their difference is far
            // below the display precision.
            let diff = (&a.to_rational() - &b.to_rational()).abs();
            if diff.is_zero() {
                return true;
            }
            let scale = a.to_rational().abs().max(Rational::one());
            let tol_digits = ctx.digits.saturating_sub(5);
            let tol = &scale
                * &Rational::from_bigint(num_bigint::BigInt::from(10).pow(tol_digits))
                    .recip()
                    .expect("nonzero");
            diff <= tol
        }
    }
}

/// Coefficients `[a_0 .. a_n]` of `f(x0 + ε)`; the k-th derivative equals
/// `k! * a_k`.
pub fn taylor(
    f: &Expr,
    var: &str,
    x0: &Point,
    order: u32,
    mode: Mode,
    ctx: &SeriesCtx,
) -> Result<Vec<Coeff>> {
    if order as i64 >= ctx.window as i64 {
        return Err(Error::WindowTooSmall {
            requested: order as i64,
            window: ctx.window as i64,
        });
    }
    let value = eval_at_displacement(f, var, x0, &SeriesElem::epsilon(mode), mode, ctx)?;
    if value.lead_exponent().is_some_and(|lead| lead < 0) {
        return Err(Error::NotDifferentiableHere);
    }
    let mut out = Vec::with_capacity(order as usize + 1);
    for k in 0..=order as i64 {
        match value.coeff_at(k) {
            Some(c) => out.push(c),
            None => {
                return Err(Error::WindowTooSmall {
                    requested: k,
                    window: value.known_upto().unwrap_or(k),
                })
            }
        }
    }
    Ok(out)
}

/// Approach side for one-sided limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Above,
    Below,
}

/// Outcome of a one-sided limit.
#[derive(Debug, Clone)]
pub enum Limit {
    Finite(Coeff),
    Infinite(Sign),
    /// The series window could not certify any behavior.
    NoLimit,
}

/// `st(f(x0 ± ε))`: finite value, signed infinity when the evaluation has a
/// pole, or `NoLimit` when the window is inconclusive.
pub fn limit_at(
    f: &Expr,
    var: &str,
    x0: &Point,
    side: Side,
    mode: Mode,
    ctx: &SeriesCtx,
) -> Result<Limit> {
    let eps = SeriesElem::epsilon(mode);
    let shift = match side {
        Side::Above => eps,
        Side::Below => eps.neg(),
    };
    let value = eval_at_displacement(f, var, x0, &shift, mode, ctx)?;
    match value.lead_exponent() {
        Some(lead) if lead < 0 => {
            let sign = value
                .coeff_at(lead)
                .map(|c| c.sign())
                .unwrap_or(Sign::Zero);
            Ok(Limit::Infinite(sign))
        }
        Some(_) => Ok(Limit::Finite(value.standard_part()?)),
        None => {
            if value.known_upto().is_some_and(|k| k <= 0) {
                Ok(Limit::NoLimit)
            } else {
                Ok(Limit::Finite(value.standard_part()?))
            }
        }
    }
}
