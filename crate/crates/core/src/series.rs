//! Truncated Laurent series in an infinitesimal `ε`: the field of series
//! with finitely many negative-exponent terms, strong enough to extend the
//! standard analytic functions beyond the reals.
//!
//! Every element tracks a validity window. A window of [`Window::Exact`]
//! means the stored terms are the whole series; [`Window::UpTo`]`(k)` means
//! exponents at and above `k` are *unknown*, not zero. All arithmetic
//! propagates the largest window that is provably correct, so a reported
//! coefficient never changes when a computation is repeated at a larger
//! truncation order.
//!
//! Coefficients come in two modes that never mix inside one element:
//! exact rationals, or fixed-precision decimals for values (like `exp(1)`)
//! that no rational represents.

use std::cmp::Ordering;
use std::fmt;

use crate::decimal::{self, Decimal};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ratfunc::{Classification, RatFunc};
use crate::rational::{binomial_rational, factorial, Rational, Sign};

/// Coefficient arithmetic mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Approx,
}

/// Window and precision configuration, passed explicitly to the operations
/// that need it. `window` is the number of terms kept past the lead when a
/// computation produces an infinite series; `digits` is the significant
/// decimal precision of approximate coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesCtx {
    pub window: u32,
    pub digits: u32,
}

impl SeriesCtx {
    pub fn new(window: u32, digits: u32) -> Result<SeriesCtx> {
        if window < 4 {
            return Err(Error::Config(format!("series window {window} < 4")));
        }
        if digits < 20 {
            return Err(Error::Config(format!("approx digits {digits} < 20")));
        }
        Ok(SeriesCtx { window, digits })
    }

    /// Working precision: display precision plus guard digits.
    pub fn work(&self) -> u32 {
        self.digits + 10
    }
}

impl Default for SeriesCtx {
    fn default() -> SeriesCtx {
        SeriesCtx {
            window: 16,
            digits: 50,
        }
    }
}

/// A series coefficient in one of the two modes.
#[derive(Debug, Clone, PartialEq)]
pub enum Coeff {
    Exact(Rational),
    Approx(Decimal),
}

impl Coeff {
    pub fn zero(mode: Mode) -> Coeff {
        match mode {
            Mode::Exact => Coeff::Exact(Rational::zero()),
            Mode::Approx => Coeff::Approx(Decimal::zero()),
        }
    }

    pub fn one(mode: Mode) -> Coeff {
        match mode {
            Mode::Exact => Coeff::Exact(Rational::one()),
            Mode::Approx => Coeff::Approx(Decimal::one()),
        }
    }

    pub fn of_rational(r: &Rational, mode: Mode, work: u32) -> Coeff {
        match mode {
            Mode::Exact => Coeff::Exact(r.clone()),
            Mode::Approx => Coeff::Approx(Decimal::from_rational(r, work)),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Coeff::Exact(_) => Mode::Exact,
            Coeff::Approx(_) => Mode::Approx,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Exact(r) => r.is_zero(),
            Coeff::Approx(d) => d.is_zero(),
        }
    }

    pub fn sign(&self) -> Sign {
        match self {
            Coeff::Exact(r) => r.sign(),
            Coeff::Approx(d) => d.sign(),
        }
    }

    pub fn neg(&self) -> Coeff {
        match self {
            Coeff::Exact(r) => Coeff::Exact(-r),
            Coeff::Approx(d) => Coeff::Approx(d.neg()),
        }
    }

    pub fn add(&self, rhs: &Coeff, work: u32) -> Result<Coeff> {
        match (self, rhs) {
            (Coeff::Exact(a), Coeff::Exact(b)) => Ok(Coeff::Exact(a + b)),
            (Coeff::Approx(a), Coeff::Approx(b)) => Ok(Coeff::Approx(a.add(b).round_to(work))),
            _ => Err(mode_mix()),
        }
    }

    pub fn sub(&self, rhs: &Coeff, work: u32) -> Result<Coeff> {
        self.add(&rhs.neg(), work)
    }

    pub fn mul(&self, rhs: &Coeff, work: u32) -> Result<Coeff> {
        match (self, rhs) {
            (Coeff::Exact(a), Coeff::Exact(b)) => Ok(Coeff::Exact(a * b)),
            (Coeff::Approx(a), Coeff::Approx(b)) => Ok(Coeff::Approx(a.mul(b).round_to(work))),
            _ => Err(mode_mix()),
        }
    }

    pub fn div(&self, rhs: &Coeff, work: u32) -> Result<Coeff> {
        match (self, rhs) {
            (Coeff::Exact(a), Coeff::Exact(b)) => Ok(Coeff::Exact((a / b)?)),
            (Coeff::Approx(a), Coeff::Approx(b)) => Ok(Coeff::Approx(a.div(b, work)?)),
            _ => Err(mode_mix()),
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Coeff::Exact(r) => Some(r),
            Coeff::Approx(_) => None,
        }
    }

    /// Exact rational content of either mode (decimals are exact scaled
    /// integers).
    pub fn to_rational(&self) -> Rational {
        match self {
            Coeff::Exact(r) => r.clone(),
            Coeff::Approx(d) => d.to_rational(),
        }
    }

    pub fn to_display_string(&self, digits: u32) -> String {
        match self {
            Coeff::Exact(r) => r.to_string(),
            Coeff::Approx(d) => d.to_string_sig(digits),
        }
    }
}

fn mode_mix() -> Error {
    Error::ModeError("exact and approximate coefficients cannot mix".into())
}

/// Validity window of a series element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    /// The stored terms are the entire series; everything else is zero.
    Exact,
    /// Coefficients at exponents `>= k` are unknown.
    UpTo(i64),
}

/// Ordering verdict for truncated series; `Unknown` means the shared window
/// cannot separate the operands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOrd {
    Less,
    Equal,
    Greater,
    Unknown,
}

impl fmt::Display for SeriesOrd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SeriesOrd::Less => "Less",
            SeriesOrd::Equal => "Equal",
            SeriesOrd::Greater => "Greater",
            SeriesOrd::Unknown => "Unknown",
        };
        write!(f, "{s}")
    }
}

/// A truncated Laurent series in `ε`.
///
/// Invariants: the coefficient at the lead exponent is nonzero unless the
/// element carries no known nonzero coefficient; `coeffs[i]` is the
/// coefficient of `ε^(lead + i)`; under `Window::UpTo(k)` the stored range
/// ends exactly at `k`; all coefficients share one mode.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesElem {
    mode: Mode,
    lead: i64,
    coeffs: Vec<Coeff>,
    window: Window,
}

impl SeriesElem {
    fn canonical(mode: Mode, mut lead: i64, mut coeffs: Vec<Coeff>, window: Window) -> SeriesElem {
        while coeffs.first().is_some_and(Coeff::is_zero) {
            coeffs.remove(0);
            lead += 1;
        }
        match window {
            Window::Exact => {
                while coeffs.last().is_some_and(Coeff::is_zero) {
                    coeffs.pop();
                }
                if coeffs.is_empty() {
                    lead = 0;
                }
            }
            Window::UpTo(k) => {
                // Stored range must end at k.
                debug_assert!(lead + coeffs.len() as i64 <= k);
                while lead + (coeffs.len() as i64) < k {
                    coeffs.push(Coeff::zero(mode));
                }
                if coeffs.is_empty() {
                    lead = k;
                }
            }
        }
        SeriesElem {
            mode,
            lead,
            coeffs,
            window,
        }
    }

    /// The exact zero element.
    pub fn zero(mode: Mode) -> SeriesElem {
        SeriesElem {
            mode,
            lead: 0,
            coeffs: Vec::new(),
            window: Window::Exact,
        }
    }

    /// An element known only to vanish below exponent `k`.
    pub fn zero_up_to(mode: Mode, k: i64) -> SeriesElem {
        SeriesElem {
            mode,
            lead: k,
            coeffs: Vec::new(),
            window: Window::UpTo(k),
        }
    }

    pub fn constant(c: Coeff) -> SeriesElem {
        let mode = c.mode();
        SeriesElem::canonical(mode, 0, vec![c], Window::Exact)
    }

    pub fn from_rational(r: &Rational, mode: Mode, ctx: &SeriesCtx) -> SeriesElem {
        SeriesElem::constant(Coeff::of_rational(r, mode, ctx.work()))
    }

    /// The infinitesimal generator `ε`.
    pub fn epsilon(mode: Mode) -> SeriesElem {
        SeriesElem::monomial(1, Coeff::one(mode))
    }

    /// `c * ε^k` for any integer `k` (negative allowed).
    pub fn monomial(k: i64, c: Coeff) -> SeriesElem {
        let mode = c.mode();
        SeriesElem::canonical(mode, k, vec![c], Window::Exact)
    }

    /// Builds an element from `(exponent, coefficient)` terms with an
    /// optional truncation exponent.
    pub fn from_terms(mode: Mode, terms: &[(i64, Coeff)], known_upto: Option<i64>) -> Result<SeriesElem> {
        if terms.is_empty() {
            return Ok(match known_upto {
                None => SeriesElem::zero(mode),
                Some(k) => SeriesElem::zero_up_to(mode, k),
            });
        }
        let lo = terms.iter().map(|(e, _)| *e).min().expect("nonempty");
        let hi = terms.iter().map(|(e, _)| *e).max().expect("nonempty");
        let upper = match known_upto {
            None => hi + 1,
            Some(k) => {
                if k <= hi {
                    return Err(Error::Parse(format!(
                        "term at exponent {hi} lies at or beyond the window {k}"
                    )));
                }
                k
            }
        };
        let mut coeffs = vec![Coeff::zero(mode); (upper - lo) as usize];
        for (e, c) in terms {
            if c.mode() != mode {
                return Err(mode_mix());
            }
            let idx = (e - lo) as usize;
            if !coeffs[idx].is_zero() {
                return Err(Error::Parse(format!("duplicate term at exponent {e}")));
            }
            coeffs[idx] = c.clone();
        }
        let window = match known_upto {
            None => Window::Exact,
            Some(k) => Window::UpTo(k),
        };
        Ok(SeriesElem::canonical(mode, lo, coeffs, window))
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Lowest exponent with a (known) nonzero coefficient; `None` when no
    /// nonzero coefficient is known.
    pub fn lead_exponent(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.lead)
        }
    }

    /// `known_upto` as a number, `None` meaning the element is exact.
    pub fn known_upto(&self) -> Option<i64> {
        match self.window {
            Window::Exact => None,
            Window::UpTo(k) => Some(k),
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.window == Window::Exact
    }

    /// True when no known coefficient is nonzero (covers both the exact
    /// zero and zero-within-window elements).
    pub fn is_zero_in_window(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient at exponent `e`: `None` when `e` is outside the window.
    pub fn coeff_at(&self, e: i64) -> Option<Coeff> {
        match self.window {
            Window::UpTo(k) if e >= k => return None,
            _ => {}
        }
        let lo = self.lead;
        let hi = self.lead + self.coeffs.len() as i64;
        if e < lo || e >= hi {
            Some(Coeff::zero(self.mode))
        } else {
            Some(self.coeffs[(e - lo) as usize].clone())
        }
    }

    fn require_same_mode(&self, rhs: &SeriesElem) -> Result<()> {
        if self.mode != rhs.mode {
            return Err(mode_mix());
        }
        Ok(())
    }

    pub fn neg(&self) -> SeriesElem {
        SeriesElem {
            mode: self.mode,
            lead: self.lead,
            coeffs: self.coeffs.iter().map(Coeff::neg).collect(),
            window: self.window,
        }
    }

    pub fn add(&self, rhs: &SeriesElem, ctx: &SeriesCtx) -> Result<SeriesElem> {
        self.require_same_mode(rhs)?;
        let window = match (self.window, rhs.window) {
            (Window::Exact, Window::Exact) => Window::Exact,
            (Window::UpTo(a), Window::Exact) => Window::UpTo(a),
            (Window::Exact, Window::UpTo(b)) => Window::UpTo(b),
            (Window::UpTo(a), Window::UpTo(b)) => Window::UpTo(a.min(b)),
        };
        let lo = match (self.lead_exponent(), rhs.lead_exponent()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a.min(rhs.lead),
            (None, Some(b)) => self.lead.min(b),
            (None, None) => self.lead.min(rhs.lead),
        };
        let hi = match window {
            Window::Exact => (self.lead + self.coeffs.len() as i64)
                .max(rhs.lead + rhs.coeffs.len() as i64),
            Window::UpTo(k) => k,
        };
        let mut coeffs = Vec::with_capacity((hi - lo).max(0) as usize);
        for e in lo..hi {
            let a = self.coeff_at(e).unwrap_or_else(|| Coeff::zero(self.mode));
            let b = rhs.coeff_at(e).unwrap_or_else(|| Coeff::zero(self.mode));
            coeffs.push(a.add(&b, ctx.work())?);
        }
        Ok(SeriesElem::canonical(self.mode, lo, coeffs, window))
    }

    pub fn sub(&self, rhs: &SeriesElem, ctx: &SeriesCtx) -> Result<SeriesElem> {
        self.add(&rhs.neg(), ctx)
    }

    pub fn mul(&self, rhs: &SeriesElem, ctx: &SeriesCtx) -> Result<SeriesElem> {
        self.require_same_mode(rhs)?;
        if self.is_exact_zero() || rhs.is_exact_zero() {
            return Ok(SeriesElem::zero(self.mode));
        }
        // Window rule: known(a*b) = min(known(a) + lead(b), known(b) + lead(a)).
        let window = match (self.window, rhs.window) {
            (Window::Exact, Window::Exact) => Window::Exact,
            _ => {
                let ka = self
                    .known_upto()
                    .map(|k| k + rhs.lead)
                    .unwrap_or(i64::MAX);
                let kb = rhs.known_upto().map(|k| k + self.lead).unwrap_or(i64::MAX);
                Window::UpTo(ka.min(kb))
            }
        };
        if self.is_zero_in_window() || rhs.is_zero_in_window() {
            return Ok(match window {
                Window::Exact => SeriesElem::zero(self.mode),
                Window::UpTo(k) => SeriesElem::zero_up_to(self.mode, k),
            });
        }
        let lo = self.lead + rhs.lead;
        let hi = match window {
            Window::Exact => {
                lo + (self.coeffs.len() + rhs.coeffs.len()) as i64 - 1
            }
            Window::UpTo(k) => k,
        };
        let n = (hi - lo).max(0) as usize;
        let mut coeffs = vec![Coeff::zero(self.mode); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let idx = i + j;
                if idx >= n {
                    break;
                }
                let prod = a.mul(b, ctx.work())?;
                coeffs[idx] = coeffs[idx].add(&prod, ctx.work())?;
            }
        }
        Ok(SeriesElem::canonical(self.mode, lo, coeffs, window))
    }

    /// Division. Exact operands that divide exactly stay exact; otherwise
    /// the result window follows the inversion rule, bounded by `ctx.window`
    /// past the lead when both inputs are exact.
    pub fn div(&self, rhs: &SeriesElem, ctx: &SeriesCtx) -> Result<SeriesElem> {
        self.require_same_mode(rhs)?;
        if rhs.is_exact_zero() {
            return Err(Error::DivisionByZero);
        }
        if rhs.is_zero_in_window() {
            // The divisor's lead cannot be located inside its window.
            return Err(Error::EmptyWindow);
        }
        if self.is_exact_zero() {
            return Ok(SeriesElem::zero(self.mode));
        }
        let b_lead = rhs.lead;
        if self.is_zero_in_window() {
            let k = self.known_upto().expect("zero-in-window is truncated") - b_lead;
            return Ok(SeriesElem::zero_up_to(self.mode, k));
        }
        // Exact Laurent-polynomial division when the quotient terminates.
        if self.window == Window::Exact && rhs.window == Window::Exact {
            if let Some(exact) = self.try_exact_div(rhs, ctx)? {
                return Ok(exact);
            }
        }
        let q_lead = self.lead - b_lead;
        let bound_a = self.known_upto().map(|k| k - b_lead);
        let bound_b = rhs.known_upto().map(|k| self.lead + k - 2 * b_lead);
        let bound_ctx = q_lead + ctx.window as i64;
        let hi = match (bound_a, bound_b) {
            (None, None) => bound_ctx,
            (a, b) => a.unwrap_or(i64::MAX).min(b.unwrap_or(i64::MAX)),
        };
        if hi <= q_lead {
            return Err(Error::EmptyWindow);
        }
        let n = (hi - q_lead) as usize;
        // Long division on coefficients relative to the leads.
        let work = ctx.work();
        let b0 = rhs.coeffs[0].clone();
        let mut q = Vec::with_capacity(n);
        for m in 0..n {
            let mut acc = self
                .coeff_at(self.lead + m as i64)
                .unwrap_or_else(|| Coeff::zero(self.mode));
            for (j, qj) in q.iter().enumerate().take(m) {
                let bj = rhs
                    .coeff_at(b_lead + (m - j) as i64)
                    .unwrap_or_else(|| Coeff::zero(self.mode));
                let prod = bj.mul(qj, work)?;
                acc = acc.sub(&prod, work)?;
            }
            q.push(acc.div(&b0, work)?);
        }
        Ok(SeriesElem::canonical(
            self.mode,
            q_lead,
            q,
            Window::UpTo(hi),
        ))
    }

    /// Attempts terminating division of two exact elements; returns `None`
    /// when the quotient is an infinite series.
    fn try_exact_div(&self, rhs: &SeriesElem, ctx: &SeriesCtx) -> Result<Option<SeriesElem>> {
        match self.mode {
            Mode::Exact => {
                let pa: Vec<Rational> = self
                    .coeffs
                    .iter()
                    .map(|c| c.as_exact().expect("exact mode").clone())
                    .collect();
                let pb: Vec<Rational> = rhs
                    .coeffs
                    .iter()
                    .map(|c| c.as_exact().expect("exact mode").clone())
                    .collect();
                let (qp, rp) = Poly::new(pa).div_rem(&Poly::new(pb))?;
                if !rp.is_zero() {
                    return Ok(None);
                }
                let lead = self.lead - rhs.lead;
                let coeffs = qp.coeffs().iter().map(|c| Coeff::Exact(c.clone())).collect();
                Ok(Some(SeriesElem::canonical(
                    self.mode,
                    lead,
                    coeffs,
                    Window::Exact,
                )))
            }
            // Approximate coefficients never certify a zero remainder;
            // monomial divisors are still exact.
            Mode::Approx => {
                if rhs.coeffs.len() == 1 {
                    let mut coeffs = Vec::with_capacity(self.coeffs.len());
                    for c in &self.coeffs {
                        coeffs.push(c.div(&rhs.coeffs[0], ctx.work())?);
                    }
                    return Ok(Some(SeriesElem::canonical(
                        self.mode,
                        self.lead - rhs.lead,
                        coeffs,
                        Window::Exact,
                    )));
                }
                Ok(None)
            }
        }
    }

    pub fn recip(&self, ctx: &SeriesCtx) -> Result<SeriesElem> {
        SeriesElem::constant(Coeff::one(self.mode)).div(self, ctx)
    }

    pub fn pow_int(&self, e: i64, ctx: &SeriesCtx) -> Result<SeriesElem> {
        if e == 0 {
            return Ok(SeriesElem::constant(Coeff::one(self.mode)));
        }
        let mut base = if e < 0 { self.recip(ctx)? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc: Option<SeriesElem> = None;
        while k > 0 {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base, ctx)?,
                });
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base, ctx)?;
            }
        }
        Ok(acc.expect("nonzero exponent"))
    }

    /// Order verdict by the lowest nonzero coefficient of the difference.
    pub fn compare(&self, rhs: &SeriesElem, ctx: &SeriesCtx) -> Result<SeriesOrd> {
        let d = self.sub(rhs, ctx)?;
        if let Some(_lead) = d.lead_exponent() {
            return Ok(match d.coeffs[0].sign() {
                Sign::Positive => SeriesOrd::Greater,
                Sign::Negative => SeriesOrd::Less,
                Sign::Zero => unreachable!("lead coefficient is nonzero"),
            });
        }
        // No separating coefficient: equality only when certain.
        Ok(if d.is_exact_zero() {
            SeriesOrd::Equal
        } else {
            SeriesOrd::Unknown
        })
    }

    /// Mirror of the rational-function classification. An element that is
    /// zero within a window reaching past `ε^0` is reported `Zero`: it is
    /// provably zero-or-infinitesimal and its standard part is 0.
    pub fn classify(&self) -> Result<Classification> {
        match self.lead_exponent() {
            None => match self.window {
                Window::Exact => Ok(Classification::Zero),
                Window::UpTo(k) if k > 0 => Ok(Classification::Zero),
                Window::UpTo(_) => Err(Error::EmptyWindow),
            },
            Some(lead) => {
                let sign = self.coeffs[0].sign();
                Ok(match (lead.cmp(&0), sign) {
                    (Ordering::Greater, Sign::Positive) => Classification::PositiveInfinitesimal,
                    (Ordering::Greater, _) => Classification::NegativeInfinitesimal,
                    (Ordering::Equal, _) => Classification::FiniteNonInfinitesimal,
                    (Ordering::Less, Sign::Positive) => Classification::PositiveInfinite,
                    (Ordering::Less, _) => Classification::NegativeInfinite,
                })
            }
        }
    }

    /// Coefficient of `ε^0`, defined for finite elements.
    pub fn standard_part(&self) -> Result<Coeff> {
        if !self.classify()?.is_finite() {
            return Err(Error::NotFinite(self.to_literal_string(50)));
        }
        self.coeff_at(0)
            .ok_or(Error::EmptyWindow)
    }

    /// Substitutes `ε -> factor * ε` (coefficient at exponent `e` scales by
    /// `factor^e`). Used to certify that results do not depend on which
    /// infinitesimal was chosen.
    pub fn scale_epsilon(&self, factor: &Rational, ctx: &SeriesCtx) -> Result<SeriesElem> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = self.lead + i as i64;
            let scale = factor.pow_int(e)?;
            let sc = Coeff::of_rational(&scale, self.mode, ctx.work());
            coeffs.push(c.mul(&sc, ctx.work())?);
        }
        Ok(SeriesElem::canonical(
            self.mode,
            self.lead,
            coeffs,
            self.window,
        ))
    }

    /// Forgets coefficients at exponents `>= k`.
    pub fn truncate_to(&self, k: i64) -> SeriesElem {
        let hi = match self.window {
            Window::Exact => k,
            Window::UpTo(old) => old.min(k),
        };
        let keep = ((hi - self.lead).max(0) as usize).min(self.coeffs.len());
        SeriesElem::canonical(
            self.mode,
            self.lead,
            self.coeffs[..keep].to_vec(),
            Window::UpTo(hi),
        )
    }

    /// Converts exact coefficients to fixed-precision decimals.
    pub fn to_approx(&self, ctx: &SeriesCtx) -> SeriesElem {
        if self.mode == Mode::Approx {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| Coeff::Approx(Decimal::from_rational(c.as_exact().expect("exact"), ctx.work())))
            .collect();
        SeriesElem::canonical(Mode::Approx, self.lead, coeffs, self.window)
    }

    /// Laurent expansion at 0 of a rational function, `x -> ε`.
    /// Order-preserving: comparisons agree with the rational-function order.
    pub fn embed_ratfunc(f: &RatFunc, mode: Mode, ctx: &SeriesCtx) -> SeriesElem {
        if f.is_zero() {
            return SeriesElem::zero(mode);
        }
        let m = f.den().ord_at_zero().expect("nonzero denominator");
        let unit = f.den().shift_down(m);
        let num = f.num();
        let work = ctx.work();
        if unit.degree() == Some(0) {
            // Denominator is c * x^m: terminating expansion.
            let c = unit.coeff(0);
            let terms: Vec<Coeff> = num
                .coeffs()
                .iter()
                .map(|a| Coeff::of_rational(&(a / &c).expect("c nonzero"), mode, work))
                .collect();
            return SeriesElem::canonical(mode, -(m as i64), terms, Window::Exact);
        }
        let lead = num.ord_at_zero().expect("nonzero numerator") as i64 - m as i64;
        let hi = lead + ctx.window as i64;
        let n = (hi - lead) as usize;
        // Long division of num by unit, in rationals, then mode conversion.
        let c0 = unit.coeff(0);
        let mut rel: Vec<Rational> = Vec::with_capacity(n);
        let num_rel_base = num.ord_at_zero().expect("nonzero");
        for mm in 0..n {
            let mut acc = num.coeff(num_rel_base + mm);
            for (j, done) in rel.iter().enumerate().take(mm) {
                let b = unit.coeff(mm - j);
                acc = &acc - &(&b * done);
            }
            rel.push((&acc / &c0).expect("c0 nonzero"));
        }
        let coeffs = rel
            .into_iter()
            .map(|r| Coeff::of_rational(&r, mode, work))
            .collect();
        SeriesElem::canonical(mode, lead, coeffs, Window::UpTo(hi))
    }

    /// Renders as a term list, e.g. `2 - 1*e^1 + 1*e^2 + O(e^16)`. The
    /// output is accepted back by the expression language on the series
    /// backend.
    pub fn to_literal_string(&self, digits: u32) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.lead + i as i64;
            let mag = match c {
                Coeff::Exact(r) => r.abs().to_string(),
                Coeff::Approx(d) => d.abs().to_string_sig(digits),
            };
            if out.is_empty() {
                if c.sign() == Sign::Negative {
                    out.push('-');
                }
            } else if c.sign() == Sign::Negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            if e == 0 {
                out.push_str(&mag);
            } else {
                out.push_str(&format!("{mag}*e^{e}"));
            }
        }
        match self.window {
            Window::Exact => {
                if out.is_empty() {
                    out.push('0');
                }
            }
            Window::UpTo(k) => {
                if out.is_empty() {
                    out.push_str(&format!("O(e^{k})"));
                } else {
                    out.push_str(&format!(" + O(e^{k})"));
                }
            }
        }
        out
    }
}

impl fmt::Display for SeriesElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_literal_string(50))
    }
}

// ---------------------------------------------------------------------------
// Analytic extension
// ---------------------------------------------------------------------------

/// The function table that can be extended to series arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalyticFn {
    Exp,
    Sin,
    Cos,
    Log,
    Sqrt,
    Atan,
}

impl AnalyticFn {
    pub fn name(self) -> &'static str {
        match self {
            AnalyticFn::Exp => "exp",
            AnalyticFn::Sin => "sin",
            AnalyticFn::Cos => "cos",
            AnalyticFn::Log => "log",
            AnalyticFn::Sqrt => "sqrt",
            AnalyticFn::Atan => "atan",
        }
    }
}

/// Taylor coefficients about `c` for the table functions, as mode
/// coefficients. Errors with `ModeError` when exact mode is requested but
/// the values are irrational, and `DomainError` outside the function's
/// domain.
fn taylor_table(f: AnalyticFn, c: &Rational, count: usize, mode: Mode, ctx: &SeriesCtx) -> Result<Vec<Coeff>> {
    let work = ctx.work();
    let exact = |r: &Rational| Coeff::of_rational(r, mode, work);
    let mut out = Vec::with_capacity(count);
    match f {
        AnalyticFn::Exp => {
            let scale: Coeff = if c.is_zero() {
                Coeff::one(mode)
            } else {
                match mode {
                    Mode::Exact => {
                        return Err(Error::ModeError(format!(
                            "exp({c}) is irrational; approximate mode required"
                        )))
                    }
                    Mode::Approx => Coeff::Approx(decimal::exp_dec(c, work)),
                }
            };
            for k in 0..count {
                let w = Rational::from_bigint(factorial(k as u64)).recip().expect("nonzero");
                out.push(scale.mul(&exact(&w), work)?);
            }
        }
        AnalyticFn::Sin | AnalyticFn::Cos => {
            let (s, co): (Coeff, Coeff) = if c.is_zero() {
                (Coeff::zero(mode), Coeff::one(mode))
            } else {
                match mode {
                    Mode::Exact => {
                        return Err(Error::ModeError(format!(
                            "{}({c}) is irrational; approximate mode required",
                            f.name()
                        )))
                    }
                    Mode::Approx => {
                        let (sd, cd) = decimal::sincos_dec(c, work);
                        (Coeff::Approx(sd), Coeff::Approx(cd))
                    }
                }
            };
            // Derivative cycle: sin -> cos -> -sin -> -cos.
            let cycle = match f {
                AnalyticFn::Sin => [s.clone(), co.clone(), s.neg(), co.neg()],
                _ => [co.clone(), s.neg(), co.neg(), s.clone()],
            };
            for k in 0..count {
                let w = Rational::from_bigint(factorial(k as u64)).recip().expect("nonzero");
                out.push(cycle[k % 4].mul(&exact(&w), work)?);
            }
        }
        AnalyticFn::Log => {
            if !c.is_positive() {
                return Err(Error::DomainError(format!(
                    "log requires a positive standard part, got {c}"
                )));
            }
            let head = if c.is_one() {
                Coeff::zero(mode)
            } else {
                match mode {
                    Mode::Exact => {
                        return Err(Error::ModeError(format!(
                            "log({c}) is irrational; approximate mode required"
                        )))
                    }
                    Mode::Approx => Coeff::Approx(decimal::ln_dec(c, work)?),
                }
            };
            out.push(head);
            // log(c + t) = log c + sum (-1)^(k+1) t^k / (k c^k)
            for k in 1..count {
                let ck = c.pow_int(k as i64)?;
                let base = (&Rational::one() / &(&Rational::from_int(k as i64) * &ck))?;
                let signed = if k % 2 == 1 { base } else { -base };
                out.push(exact(&signed));
            }
        }
        AnalyticFn::Sqrt => {
            if !c.is_positive() {
                return Err(Error::DomainError(format!(
                    "sqrt requires a positive standard part, got {c}"
                )));
            }
            let root: Coeff = match c.sqrt_exact() {
                Some(r) => exact(&r),
                None => match mode {
                    Mode::Exact => {
                        return Err(Error::ModeError(format!(
                            "sqrt({c}) is irrational; approximate mode required"
                        )))
                    }
                    Mode::Approx => Coeff::Approx(decimal::sqrt_dec(c, work)?),
                },
            };
            // sqrt(c + t) = sqrt(c) * sum binom(1/2, k) (t/c)^k
            let half = Rational::ratio(1, 2);
            for k in 0..count {
                let b = binomial_rational(&half, k as u64);
                let w = (&b / &c.pow_int(k as i64)?)?;
                out.push(root.mul(&exact(&w), work)?);
            }
        }
        AnalyticFn::Atan => {
            let head = if c.is_zero() {
                Coeff::zero(mode)
            } else {
                match mode {
                    Mode::Exact => {
                        return Err(Error::ModeError(format!(
                            "atan({c}) is irrational; approximate mode required"
                        )))
                    }
                    Mode::Approx => Coeff::Approx(decimal::atan_dec(c, work)),
                }
            };
            out.push(head);
            if count > 1 {
                // Derivative 1/(1 + (c+t)^2) expanded as a rational power
                // series in t, then integrated term by term.
                let q0 = &Rational::one() + &(c * c);
                let q1 = &Rational::from_int(2) * c;
                let mut d: Vec<Rational> = Vec::with_capacity(count - 1);
                for m in 0..count - 1 {
                    let mut acc = if m == 0 { Rational::one() } else { Rational::zero() };
                    if m >= 1 {
                        acc = &acc - &(&q1 * &d[m - 1]);
                    }
                    if m >= 2 {
                        acc = &acc - &d[m - 2];
                    }
                    d.push((&acc / &q0)?);
                }
                for (m, dm) in d.iter().enumerate() {
                    let t = (dm / &Rational::from_int(m as i64 + 1))?;
                    out.push(exact(&t));
                }
            }
        }
    }
    Ok(out)
}

/// Extends a table function to a finite series argument by composing its
/// Taylor expansion about the standard part with the infinitesimal part.
pub fn extend_analytic(f: AnalyticFn, s: &SeriesElem, ctx: &SeriesCtx) -> Result<SeriesElem> {
    extend_with_table(s, ctx, |c, count, mode| taylor_table(f, c, count, mode, ctx))
}

/// Extends `s -> s^e` for rational exponent `e` at a positive standard part.
pub fn extend_pow_rational(s: &SeriesElem, e: &Rational, ctx: &SeriesCtx) -> Result<SeriesElem> {
    if e.is_integer() {
        use num_traits::ToPrimitive;
        let k = e
            .numer()
            .to_i64()
            .ok_or_else(|| Error::DomainError(format!("exponent {e} too large")))?;
        return s.pow_int(k, ctx);
    }
    let e = e.clone();
    extend_with_table(s, ctx, move |c, count, mode| {
        if !c.is_positive() {
            return Err(Error::DomainError(format!(
                "rational power requires a positive standard part, got {c}"
            )));
        }
        let work = ctx.work();
        let head: Coeff = match c.pow_rational_exact(&e) {
            Some(v) => Coeff::of_rational(&v, mode, work),
            None => match mode {
                Mode::Exact => {
                    return Err(Error::ModeError(format!(
                        "{c}^({e}) is irrational; approximate mode required"
                    )))
                }
                Mode::Approx => Coeff::Approx(decimal::pow_dec(c, &e, work)?),
            },
        };
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            let b = binomial_rational(&e, k as u64);
            let w = (&b / &c.pow_int(k as i64)?)?;
            out.push(head.mul(&Coeff::of_rational(&w, mode, work), work)?);
        }
        Ok(out)
    })
}

fn extend_with_table<F>(s: &SeriesElem, ctx: &SeriesCtx, table: F) -> Result<SeriesElem>
where
    F: Fn(&Rational, usize, Mode) -> Result<Vec<Coeff>>,
{
    // Extension is defined at finite points only.
    if let Some(lead) = s.lead_exponent() {
        if lead < 0 {
            return Err(Error::NotFinite(s.to_literal_string(20)));
        }
    } else if let Some(k) = s.known_upto() {
        if k <= 0 {
            return Err(Error::EmptyWindow);
        }
    }
    let mode = s.mode();
    let st = s.standard_part()?;
    // The table is expanded about an exact rational point. Approximate
    // standard parts are exact scaled integers, so this is lossless.
    let c = st.to_rational();
    let u = s.sub(&SeriesElem::constant(st), ctx)?;
    if u.is_exact_zero() {
        let head = table(&c, 1, mode)?;
        return Ok(SeriesElem::constant(head[0].clone()));
    }
    let u_lead = match u.lead_exponent() {
        Some(l) => l,
        None => u.known_upto().expect("truncated"),
    };
    debug_assert!(u_lead >= 1);
    let bound = match u.known_upto() {
        Some(k) => k,
        None => u_lead + ctx.window as i64,
    };
    let count = ((bound + u_lead - 1) / u_lead).max(1) as usize;
    let coeffs = table(&c, count, mode)?;
    let mut acc = SeriesElem::constant(coeffs[0].clone());
    let mut power = SeriesElem::constant(Coeff::one(mode));
    for tk in coeffs.iter().skip(1) {
        power = power.mul(&u, ctx)?;
        let term = power.mul(&SeriesElem::constant(tk.clone()), ctx)?;
        acc = acc.add(&term, ctx)?;
    }
    Ok(acc.truncate_to(bound))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> SeriesCtx {
        SeriesCtx::default()
    }

    fn eps() -> SeriesElem {
        SeriesElem::epsilon(Mode::Exact)
    }

    fn rat(s: &str) -> Rational {
        Rational::parse(s).unwrap()
    }

    fn exact_coeff(s: &SeriesElem, e: i64) -> Rational {
        s.coeff_at(e).unwrap().as_exact().unwrap().clone()
    }

    #[test]
    fn add_and_monomials() {
        let two_eps = eps().add(&eps(), &ctx()).unwrap();
        assert_eq!(
            two_eps,
            SeriesElem::monomial(1, Coeff::Exact(rat("2")))
        );
        assert_eq!(two_eps.to_literal_string(50), "2*e^1");
    }

    #[test]
    fn mul_with_negative_exponents() {
        // (1/e) * e^2 = e; oracle: direct exponent bookkeeping
        let inv = SeriesElem::monomial(-1, Coeff::Exact(rat("1")));
        let sq = SeriesElem::monomial(2, Coeff::Exact(rat("1")));
        assert_eq!(inv.mul(&sq, &ctx()).unwrap(), eps());
    }

    #[test]
    fn geometric_inverse_multiplies_back_to_one() {
        // 1/(1 - e): invert, then check the product is 1 within the window.
        let one = SeriesElem::constant(Coeff::Exact(rat("1")));
        let denom = one.sub(&eps(), &ctx()).unwrap();
        let inv = one.div(&denom, &ctx()).unwrap();
        for k in 0..16 {
            assert_eq!(exact_coeff(&inv, k), rat("1"), "coefficient of e^{k}");
        }
        assert_eq!(inv.known_upto(), Some(16));
        let product = inv.mul(&denom, &ctx()).unwrap();
        let diff = product.sub(&one, &ctx()).unwrap();
        assert!(diff.is_zero_in_window());
    }

    #[test]
    fn exact_division_terminates_when_possible() {
        // (e^2 + e^3) / (1 + e) = e^2 exactly
        let num = SeriesElem::from_terms(
            Mode::Exact,
            &[(2, Coeff::Exact(rat("1"))), (3, Coeff::Exact(rat("1")))],
            None,
        )
        .unwrap();
        let den = SeriesElem::from_terms(
            Mode::Exact,
            &[(0, Coeff::Exact(rat("1"))), (1, Coeff::Exact(rat("1")))],
            None,
        )
        .unwrap();
        let q = num.div(&den, &ctx()).unwrap();
        assert_eq!(q, SeriesElem::monomial(2, Coeff::Exact(rat("1"))));
        assert_eq!(q.window(), Window::Exact);
    }

    #[test]
    fn division_errors() {
        let one = SeriesElem::constant(Coeff::Exact(rat("1")));
        assert_eq!(
            one.div(&SeriesElem::zero(Mode::Exact), &ctx()),
            Err(Error::DivisionByZero)
        );
        let fog = SeriesElem::zero_up_to(Mode::Exact, 3);
        assert_eq!(one.div(&fog, &ctx()), Err(Error::EmptyWindow));
    }

    #[test]
    fn compare_examples() {
        let c = ctx();
        let e2 = eps().mul(&eps(), &c).unwrap();
        assert_eq!(e2.compare(&eps(), &c).unwrap(), SeriesOrd::Less);
        assert_eq!(eps().compare(&eps(), &c).unwrap(), SeriesOrd::Equal);
        let million = SeriesElem::constant(Coeff::Exact(rat("1000000")));
        let inv = SeriesElem::monomial(-1, Coeff::Exact(rat("1")));
        assert_eq!(inv.compare(&million, &c).unwrap(), SeriesOrd::Greater);
        // Truncated equals-within-window is Unknown, not Equal.
        let a = SeriesElem::from_terms(Mode::Exact, &[(0, Coeff::Exact(rat("1")))], Some(4)).unwrap();
        let b = SeriesElem::from_terms(Mode::Exact, &[(0, Coeff::Exact(rat("1")))], Some(4)).unwrap();
        assert_eq!(a.compare(&b, &c).unwrap(), SeriesOrd::Unknown);
    }

    #[test]
    fn classify_and_standard_part() {
        assert_eq!(
            eps().classify().unwrap(),
            Classification::PositiveInfinitesimal
        );
        assert_eq!(
            eps().standard_part().unwrap(),
            Coeff::Exact(Rational::zero())
        );
        let infinite = SeriesElem::from_terms(
            Mode::Exact,
            &[(-1, Coeff::Exact(rat("2"))), (0, Coeff::Exact(rat("1")))],
            None,
        )
        .unwrap();
        assert_eq!(
            infinite.classify().unwrap(),
            Classification::PositiveInfinite
        );
        assert!(matches!(
            infinite.standard_part(),
            Err(Error::NotFinite(_))
        ));
        let s = SeriesElem::from_terms(
            Mode::Exact,
            &[
                (0, Coeff::Exact(rat("2"))),
                (1, Coeff::Exact(rat("3"))),
                (2, Coeff::Exact(rat("1"))),
            ],
            None,
        )
        .unwrap();
        assert_eq!(s.standard_part().unwrap(), Coeff::Exact(rat("2")));
    }

    #[test]
    fn embed_examples() {
        let c = ctx();
        // x -> e, exactly
        let e = SeriesElem::embed_ratfunc(&RatFunc::x(), Mode::Exact, &c);
        assert_eq!(e, eps());
        assert_eq!(e.window(), Window::Exact);

        // 1/(1-x): every coefficient 1; multiplying back gives 1 in window
        let f = RatFunc::one()
            .div(&(&RatFunc::one() - &RatFunc::x()))
            .unwrap();
        let s = SeriesElem::embed_ratfunc(&f, Mode::Exact, &c);
        for k in 0..16 {
            assert_eq!(exact_coeff(&s, k), rat("1"));
        }

        // (2+x)/(1+x): long-division oracle solves (1+x) * sum = 2 + x
        // term by term: a_0 = 2, a_1 = 1 - a_0, a_k = -a_{k-1} after that.
        let g = RatFunc::new(
            Poly::new(vec![rat("2"), rat("1")]),
            Poly::new(vec![rat("1"), rat("1")]),
        )
        .unwrap();
        let gs = SeriesElem::embed_ratfunc(&g, Mode::Exact, &c);
        let mut oracle = vec![rat("2")];
        oracle.push(&rat("1") - &oracle[0]);
        for k in 2..16 {
            let prev = -&oracle[k - 1];
            oracle.push(prev);
        }
        for (k, want) in oracle.iter().enumerate() {
            assert_eq!(&exact_coeff(&gs, k as i64), want, "coefficient of e^{k}");
        }
    }

    #[test]
    fn extend_exp_factorials() {
        let c = ctx();
        let out = extend_analytic(AnalyticFn::Exp, &eps(), &c).unwrap();
        for k in 0..16 {
            let want = Rational::from_bigint(factorial(k as u64))
                .recip()
                .unwrap();
            assert_eq!(exact_coeff(&out, k), want, "1/k! at k={k}");
        }
        assert_eq!(out.known_upto(), Some(17));
    }

    #[test]
    fn extend_sin_over_eps_has_standard_part_one() {
        let c = ctx();
        let sin_eps = extend_analytic(AnalyticFn::Sin, &eps(), &c).unwrap();
        let quotient = sin_eps.div(&eps(), &c).unwrap();
        assert_eq!(
            quotient.standard_part().unwrap(),
            Coeff::Exact(Rational::one())
        );
        // 1 - e^2/6 + ...
        assert_eq!(exact_coeff(&quotient, 2), rat("-1/6"));
    }

    #[test]
    fn extend_rejects_infinite_arguments() {
        let c = ctx();
        let inv = SeriesElem::monomial(-1, Coeff::Exact(rat("1")));
        assert!(matches!(
            extend_analytic(AnalyticFn::Exp, &inv, &c),
            Err(Error::NotFinite(_))
        ));
    }

    #[test]
    fn extend_mode_errors() {
        let c = ctx();
        let one_plus_eps = SeriesElem::from_terms(
            Mode::Exact,
            &[(0, Coeff::Exact(rat("2"))), (1, Coeff::Exact(rat("1")))],
            None,
        )
        .unwrap();
        // exp(2 + e) needs exp(2), irrational
        assert!(matches!(
            extend_analytic(AnalyticFn::Exp, &one_plus_eps, &c),
            Err(Error::ModeError(_))
        ));
        // but works in approximate mode
        let approx = one_plus_eps.to_approx(&c);
        let out = extend_analytic(AnalyticFn::Exp, &approx, &c).unwrap();
        assert_eq!(out.classify().unwrap(), Classification::FiniteNonInfinitesimal);
        // log of non-positive standard part
        let neg = SeriesElem::constant(Coeff::Exact(rat("-1")));
        assert!(matches!(
            extend_analytic(AnalyticFn::Log, &neg, &c),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn extend_sqrt_exact_when_square() {
        let c = ctx();
        // sqrt(4 + e) = 2 * (1 + e/4)^(1/2) = 2 + e/4 - e^2/64 + ...
        let s = SeriesElem::from_terms(
            Mode::Exact,
            &[(0, Coeff::Exact(rat("4"))), (1, Coeff::Exact(rat("1")))],
            None,
        )
        .unwrap();
        let out = extend_analytic(AnalyticFn::Sqrt, &s, &c).unwrap();
        assert_eq!(exact_coeff(&out, 0), rat("2"));
        assert_eq!(exact_coeff(&out, 1), rat("1/4"));
        assert_eq!(exact_coeff(&out, 2), rat("-1/64"));
        // Sanity: out^2 = 4 + e within the window.
        let sq = out.mul(&out, &c).unwrap();
        let diff = sq.sub(&s, &c).unwrap();
        assert!(diff.is_zero_in_window());
    }

    #[test]
    fn extend_pow_rational_paths() {
        let c = ctx();
        // (4 + e)^(1/2) matches sqrt
        let s = SeriesElem::from_terms(
            Mode::Exact,
            &[(0, Coeff::Exact(rat("4"))), (1, Coeff::Exact(rat("1")))],
            None,
        )
        .unwrap();
        let via_pow = extend_pow_rational(&s, &rat("1/2"), &c).unwrap();
        let via_sqrt = extend_analytic(AnalyticFn::Sqrt, &s, &c).unwrap();
        assert_eq!(via_pow, via_sqrt);
        // integer exponent stays pure arithmetic
        let cube = extend_pow_rational(&eps(), &rat("3"), &c).unwrap();
        assert_eq!(cube, SeriesElem::monomial(3, Coeff::Exact(rat("1"))));
        // 2^(1/2) in exact mode is a mode error
        let two = SeriesElem::from_terms(
            Mode::Exact,
            &[(0, Coeff::Exact(rat("2"))), (1, Coeff::Exact(rat("1")))],
            None,
        )
        .unwrap();
        assert!(matches!(
            extend_pow_rational(&two, &rat("1/2"), &c),
            Err(Error::ModeError(_))
        ));
    }

    #[test]
    fn window_soundness_under_recomputation() {
        // Recomputing at a larger window never changes reported coefficients.
        let small = SeriesCtx::new(8, 50).unwrap();
        let large = SeriesCtx::new(24, 50).unwrap();
        let f = RatFunc::new(
            Poly::new(vec![rat("2"), rat("1")]),
            Poly::new(vec![rat("1"), rat("1")]),
        )
        .unwrap();
        let s_small = SeriesElem::embed_ratfunc(&f, Mode::Exact, &small);
        let s_large = SeriesElem::embed_ratfunc(&f, Mode::Exact, &large);
        for k in 0..8 {
            assert_eq!(s_small.coeff_at(k), s_large.coeff_at(k));
        }
        let e_small = extend_analytic(AnalyticFn::Exp, &eps(), &small).unwrap();
        let e_large = extend_analytic(AnalyticFn::Exp, &eps(), &large).unwrap();
        for k in 0..9 {
            assert_eq!(e_small.coeff_at(k), e_large.coeff_at(k));
        }
        // non-terminating division of exact elements is capped by the
        // configured window, and earlier coefficients never move
        let one = SeriesElem::constant(Coeff::Exact(rat("1")));
        let denom = SeriesElem::from_terms(
            Mode::Exact,
            &[(0, Coeff::Exact(rat("1"))), (1, Coeff::Exact(rat("-1")))],
            None,
        )
        .unwrap();
        let q_small = one.div(&denom, &small).unwrap();
        let q_large = one.div(&denom, &large).unwrap();
        assert_eq!(q_small.known_upto(), Some(8));
        assert_eq!(q_large.known_upto(), Some(24));
        for k in 0..8 {
            assert_eq!(q_small.coeff_at(k), q_large.coeff_at(k));
        }
    }

    #[test]
    fn scale_epsilon_rescales_each_exponent() {
        let c = ctx();
        let s = SeriesElem::from_terms(
            Mode::Exact,
            &[
                (-1, Coeff::Exact(rat("1"))),
                (0, Coeff::Exact(rat("5"))),
                (2, Coeff::Exact(rat("3"))),
            ],
            None,
        )
        .unwrap();
        let t = s.scale_epsilon(&rat("2"), &c).unwrap();
        assert_eq!(exact_coeff(&t, -1), rat("1/2"));
        assert_eq!(exact_coeff(&t, 0), rat("5"));
        assert_eq!(exact_coeff(&t, 2), rat("12"));
    }

    #[test]
    fn literal_rendering() {
        let c = ctx();
        let f = RatFunc::new(
            Poly::new(vec![rat("2"), rat("1")]),
            Poly::new(vec![rat("1"), rat("1")]),
        )
        .unwrap();
        let small = SeriesCtx::new(4, 50).unwrap();
        let s = SeriesElem::embed_ratfunc(&f, Mode::Exact, &small);
        assert_eq!(s.to_literal_string(50), "2 - 1*e^1 + 1*e^2 - 1*e^3 + O(e^4)");
        assert_eq!(SeriesElem::zero(Mode::Exact).to_literal_string(50), "0");
        assert_eq!(
            SeriesElem::zero_up_to(Mode::Exact, 5).to_literal_string(50),
            "O(e^5)"
        );
        let half_eps = SeriesElem::monomial(1, Coeff::Exact(rat("1/2")));
        assert_eq!(half_eps.to_literal_string(50), "1/2*e^1");
        let m = SeriesElem::monomial(-2, Coeff::Exact(rat("-3")));
        assert_eq!(m.to_literal_string(50), "-3*e^-2");
        let _ = c;
    }
}
