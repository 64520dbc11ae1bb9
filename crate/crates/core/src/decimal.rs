//! Fixed-precision decimal arithmetic and high-precision elementary
//! functions.
//!
//! A [`Decimal`] is `mantissa * 10^exponent`, normalized so the mantissa is
//! not divisible by ten (zero is `0 * 10^0`). Addition, subtraction and
//! multiplication are exact; division and the elementary functions round to
//! a requested number of significant digits. Rounding is round-half-even.
//!
//! The elementary functions ([`exp_dec`], [`sincos_dec`], [`ln_dec`],
//! [`atan_dec`], [`sqrt_dec`], [`pow_dec`]) take exact rational arguments
//! and are computed by classical series after exact argument reduction,
//! carrying guard digits sized to the reduction depth. They are validated
//! in the test suite against externally computed 60-digit references.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{Rational, Sign};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decimal {
    mant: BigInt,
    exp: i64,
}

fn digit_count(n: &BigInt) -> u64 {
    if n.is_zero() {
        return 1;
    }
    let bits = n.bits();
    let mut d = ((bits as f64) * std::f64::consts::LOG10_2).floor() as u64;
    if d == 0 {
        d = 1;
    }
    let mut probe = BigInt::from(10).pow(d as u32);
    let mag = n.abs();
    while probe <= mag {
        probe *= 10;
        d += 1;
    }
    d
}

/// Rounded integer division by a positive divisor, round-half-even.
fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
    debug_assert!(den > &BigInt::zero());
    let (q, r) = num_integer::Integer::div_mod_floor(num, den);
    let twice: BigInt = &r * 2;
    match twice.cmp(den) {
        Ordering::Less => q,
        Ordering::Greater => q + 1,
        Ordering::Equal => {
            if num_integer::Integer::is_even(&q) {
                q
            } else {
                q + 1
            }
        }
    }
}

fn pow10(k: u64) -> BigInt {
    BigInt::from(10).pow(k as u32)
}

impl Decimal {
    pub fn zero() -> Decimal {
        Decimal {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Decimal {
        Decimal {
            mant: BigInt::from(1),
            exp: 0,
        }
    }

    pub fn from_int(n: i64) -> Decimal {
        Decimal::normalized(BigInt::from(n), 0)
    }

    pub fn from_parts(mant: BigInt, exp: i64) -> Decimal {
        Decimal::normalized(mant, exp)
    }

    fn normalized(mut mant: BigInt, mut exp: i64) -> Decimal {
        if mant.is_zero() {
            return Decimal::zero();
        }
        let ten = BigInt::from(10);
        while (&mant % &ten).is_zero() {
            mant /= &ten;
            exp += 1;
        }
        Decimal { mant, exp }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn sign(&self) -> Sign {
        Sign::of_bigint(&self.mant)
    }

    pub fn neg(&self) -> Decimal {
        Decimal {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Decimal {
        Decimal {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// Exact value as a rational.
    pub fn to_rational(&self) -> Rational {
        let base = Rational::from_bigint(self.mant.clone());
        if self.exp >= 0 {
            &base * &Rational::from_bigint(pow10(self.exp as u64))
        } else {
            let scale = Rational::from_bigint(pow10(self.exp.unsigned_abs()))
                .recip()
                .expect("power of ten is nonzero");
            &base * &scale
        }
    }

    /// Power of ten of the leading digit: `floor(log10 |x|)`.
    pub fn adjusted(&self) -> i64 {
        debug_assert!(!self.is_zero());
        self.exp + digit_count(&self.mant) as i64 - 1
    }

    /// Rounds to `prec` significant digits.
    pub fn round_to(&self, prec: u32) -> Decimal {
        assert!(prec >= 1);
        if self.is_zero() {
            return Decimal::zero();
        }
        let d = digit_count(&self.mant);
        if d <= prec as u64 {
            return self.clone();
        }
        let drop = d - prec as u64;
        let scale = pow10(drop);
        let mant = if self.mant.is_negative() {
            -round_div(&-&self.mant, &scale)
        } else {
            round_div(&self.mant, &scale)
        };
        Decimal::normalized(mant, self.exp + drop as i64)
    }

    pub fn add(&self, rhs: &Decimal) -> Decimal {
        let exp = self.exp.min(rhs.exp);
        let a = &self.mant * pow10((self.exp - exp) as u64);
        let b = &rhs.mant * pow10((rhs.exp - exp) as u64);
        Decimal::normalized(a + b, exp)
    }

    pub fn sub(&self, rhs: &Decimal) -> Decimal {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Decimal) -> Decimal {
        Decimal::normalized(&self.mant * &rhs.mant, self.exp + rhs.exp)
    }

    /// Division rounded to `prec` significant digits.
    pub fn div(&self, rhs: &Decimal, prec: u32) -> Result<Decimal> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Decimal::zero());
        }
        let dn = digit_count(&self.mant) as i64;
        let dd = digit_count(&rhs.mant) as i64;
        let shift = (prec as i64 + 2 + dd - dn).max(0) as u64;
        let num = &self.mant * pow10(shift);
        let signed = match (num.is_negative(), rhs.mant.is_negative()) {
            (false, false) => round_div(&num, &rhs.mant),
            (true, false) => -round_div(&-num, &rhs.mant),
            (false, true) => -round_div(&num, &-&rhs.mant),
            (true, true) => round_div(&-num, &-&rhs.mant),
        };
        Ok(Decimal::normalized(signed, self.exp - rhs.exp - shift as i64).round_to(prec))
    }

    /// Rounded conversion of an exact rational.
    pub fn from_rational(r: &Rational, prec: u32) -> Decimal {
        if r.is_zero() {
            return Decimal::zero();
        }
        let a = Decimal::normalized(r.numer().clone(), 0);
        let b = Decimal::normalized(r.denom().clone(), 0);
        a.div(&b, prec).expect("denominator nonzero")
    }

    /// True when `|self| < 10^k`.
    pub fn magnitude_below(&self, k: i64) -> bool {
        if self.is_zero() {
            return true;
        }
        self.adjusted() < k
    }

    /// Plain decimal string rounded to `prec` significant digits
    /// (scientific notation only for extreme magnitudes).
    pub fn to_string_sig(&self, prec: u32) -> String {
        let r = self.round_to(prec);
        if r.is_zero() {
            return "0".to_string();
        }
        let digits = r.mant.abs().to_string();
        let adj = r.adjusted();
        let body = if adj >= -6 && adj < prec as i64 + 16 {
            render_plain(&digits, r.exp)
        } else {
            render_scientific(&digits, adj)
        };
        if r.mant.is_negative() {
            format!("-{body}")
        } else {
            body
        }
    }
}

fn render_plain(digits: &str, exp: i64) -> String {
    if exp >= 0 {
        let mut s = digits.to_string();
        s.push_str(&"0".repeat(exp as usize));
        s
    } else {
        let frac_len = (-exp) as usize;
        if digits.len() > frac_len {
            let split = digits.len() - frac_len;
            format!("{}.{}", &digits[..split], &digits[split..])
        } else {
            let zeros = "0".repeat(frac_len - digits.len());
            format!("0.{zeros}{digits}")
        }
    }
}

fn render_scientific(digits: &str, adj: i64) -> String {
    if digits.len() == 1 {
        format!("{digits}e{adj}")
    } else {
        format!("{}.{}e{adj}", &digits[..1], &digits[1..])
    }
}

impl PartialOrd for Decimal {
    fn partial_cmp(&self, rhs: &Decimal) -> Option<Ordering> {
        Some(self.cmp(rhs))
    }
}

impl Ord for Decimal {
    fn cmp(&self, rhs: &Decimal) -> Ordering {
        match self.sub(rhs).sign() {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_sig(50))
    }
}

// ---------------------------------------------------------------------------
// Elementary functions
// ---------------------------------------------------------------------------

/// Magnitude estimate `~log10(1 + |r|)`, used to size guard digits.
fn log10_magnitude(r: &Rational) -> u32 {
    let dn = digit_count(r.numer()) as i64;
    let dd = digit_count(r.denom()) as i64;
    (dn - dd + 1).max(0) as u32
}

/// Square root of a non-negative rational, to `prec` significant digits.
pub fn sqrt_dec(x: &Rational, prec: u32) -> Result<Decimal> {
    if x.is_negative() {
        return Err(Error::DomainError(format!("sqrt of negative value {x}")));
    }
    if x.is_zero() {
        return Ok(Decimal::zero());
    }
    let w = prec + 8;
    // Seed at the right order of magnitude; Newton doubles correct digits
    // per step once it locks on.
    let adj = (digit_count(x.numer()) as i64 - digit_count(x.denom()) as i64) / 2;
    let mut y = Decimal::normalized(BigInt::from(1), adj);
    let xd = Decimal::from_rational(x, w + 8);
    let half = Decimal::normalized(BigInt::from(5), -1);
    for _ in 0..80 {
        let q = xd.div(&y, w + 6)?;
        let next = y.add(&q).mul(&half).round_to(w + 6);
        let delta = next.sub(&y);
        let settled =
            delta.is_zero() || delta.abs().adjusted() < next.adjusted() - (w as i64 + 3);
        y = next;
        if settled {
            break;
        }
    }
    Ok(y.round_to(prec))
}

/// `exp` of an exact rational, to `prec` significant digits.
pub fn exp_dec(x: &Rational, prec: u32) -> Decimal {
    if x.is_zero() {
        return Decimal::one();
    }
    // Halve until |y| <= 1/2, run the series, then square back.
    let mut halvings = 0u32;
    let mut y = x.clone();
    let half = Rational::ratio(1, 2);
    while y.abs() > half {
        y = &y * &half;
        halvings += 1;
    }
    let w = prec + 10 + halvings + log10_magnitude(x);
    let mut sum = Decimal::one();
    let mut term = Decimal::one();
    let yd = Decimal::from_rational(&y, w + 6);
    let mut k: u64 = 1;
    loop {
        term = term
            .mul(&yd)
            .div(&Decimal::from_int(k as i64), w + 6)
            .expect("k nonzero");
        if term.magnitude_below(-(w as i64 + 4)) {
            break;
        }
        sum = sum.add(&term).round_to(w + 6);
        k += 1;
    }
    for _ in 0..halvings {
        sum = sum.mul(&sum).round_to(w + 6);
    }
    sum.round_to(prec)
}

fn sin_series(y: &Decimal, w: u32) -> Decimal {
    let mut sum = y.clone();
    let mut term = y.clone();
    let y2 = y.mul(y).round_to(w + 6);
    let mut k: u64 = 1;
    loop {
        let denom = Decimal::from_int((2 * k * (2 * k + 1)) as i64);
        term = term.mul(&y2).div(&denom, w + 6).expect("nonzero").neg();
        if term.magnitude_below(-(w as i64 + 4)) {
            break;
        }
        sum = sum.add(&term).round_to(w + 6);
        k += 1;
    }
    sum
}

fn cos_series(y: &Decimal, w: u32) -> Decimal {
    let mut sum = Decimal::one();
    let mut term = Decimal::one();
    let y2 = y.mul(y).round_to(w + 6);
    let mut k: u64 = 1;
    loop {
        let denom = Decimal::from_int((2 * k * (2 * k - 1)) as i64);
        term = term.mul(&y2).div(&denom, w + 6).expect("nonzero").neg();
        if term.magnitude_below(-(w as i64 + 4)) {
            break;
        }
        sum = sum.add(&term).round_to(w + 6);
        k += 1;
    }
    sum
}

/// Sine and cosine together: triple-angle reduction, then series.
pub fn sincos_dec(x: &Rational, prec: u32) -> (Decimal, Decimal) {
    if x.is_zero() {
        return (Decimal::zero(), Decimal::one());
    }
    let mut triplings = 0u32;
    let mut y = x.clone();
    let half = Rational::ratio(1, 2);
    let third = Rational::ratio(1, 3);
    while y.abs() > half {
        y = &y * &third;
        triplings += 1;
    }
    // Each triple-angle step can lose somewhat over one decimal digit.
    let w = prec + 10 + 2 * triplings + log10_magnitude(x);
    let yd = Decimal::from_rational(&y, w + 6);
    let mut s = sin_series(&yd, w);
    let mut c = cos_series(&yd, w);
    let three = Decimal::from_int(3);
    let four = Decimal::from_int(4);
    for _ in 0..triplings {
        // sin 3t = 3 sin t - 4 sin^3 t;  cos 3t = 4 cos^3 t - 3 cos t
        let s3 = three
            .mul(&s)
            .sub(&four.mul(&s).mul(&s).mul(&s))
            .round_to(w + 6);
        let c3 = four
            .mul(&c)
            .mul(&c)
            .mul(&c)
            .sub(&three.mul(&c))
            .round_to(w + 6);
        s = s3;
        c = c3;
    }
    (s.round_to(prec), c.round_to(prec))
}

pub fn sin_dec(x: &Rational, prec: u32) -> Decimal {
    sincos_dec(x, prec).0
}

pub fn cos_dec(x: &Rational, prec: u32) -> Decimal {
    sincos_dec(x, prec).1
}

/// `2*atanh(t)` summed as a series; fast for `|t| <= 1/5`.
fn two_atanh(t: &Decimal, w: u32) -> Decimal {
    let mut sum = t.clone();
    let t2 = t.mul(t).round_to(w + 6);
    let mut power = t.clone();
    let mut k: u64 = 1;
    loop {
        power = power.mul(&t2).round_to(w + 6);
        let term = power
            .div(&Decimal::from_int((2 * k + 1) as i64), w + 6)
            .expect("nonzero");
        if term.magnitude_below(-(w as i64 + 4)) {
            break;
        }
        sum = sum.add(&term).round_to(w + 6);
        k += 1;
    }
    sum.add(&sum)
}

/// Natural logarithm of a positive rational, to `prec` significant digits.
pub fn ln_dec(x: &Rational, prec: u32) -> Result<Decimal> {
    if !x.is_positive() {
        return Err(Error::DomainError(format!("log of non-positive value {x}")));
    }
    // Exact power-of-two reduction into [3/4, 3/2).
    let mut y = x.clone();
    let mut k: i64 = 0;
    let half = Rational::ratio(1, 2);
    let hi = Rational::ratio(3, 2);
    let lo = Rational::ratio(3, 4);
    while y >= hi {
        y = &y * &half;
        k += 1;
    }
    while y < lo {
        y = &y + &y;
        k -= 1;
    }
    let w = prec + 10 + log10_magnitude(&Rational::from_int(k.abs() + 1));
    // ln y = 2 atanh((y-1)/(y+1)), with |t| <= 1/5 on [3/4, 3/2)
    let t = (&(&y - &Rational::one()) / &(&y + &Rational::one())).expect("y + 1 > 0");
    let series = two_atanh(&Decimal::from_rational(&t, w + 6), w);
    if k == 0 {
        return Ok(series.round_to(prec));
    }
    // ln 2 = 2 atanh(1/3)
    let ln2 = two_atanh(&Decimal::from_rational(&Rational::ratio(1, 3), w + 6), w);
    let shift = ln2.mul(&Decimal::from_int(k));
    Ok(series.add(&shift).round_to(prec))
}

/// Arctangent of an exact rational, to `prec` significant digits.
pub fn atan_dec(x: &Rational, prec: u32) -> Decimal {
    if x.is_zero() {
        return Decimal::zero();
    }
    let w = prec + 12 + log10_magnitude(x);
    let mut t = Decimal::from_rational(x, w + 8);
    let quarter = Decimal::normalized(BigInt::from(25), -2);
    let mut doublings = 0u32;
    // atan u = 2 atan( u / (1 + sqrt(1 + u^2)) ): roughly halves the argument.
    while t.abs().cmp(&quarter) == Ordering::Greater {
        let t2 = t.mul(&t);
        let root = sqrt_dec(&Decimal::one().add(&t2).to_rational(), w + 8)
            .expect("1 + t^2 > 0");
        t = t
            .div(&Decimal::one().add(&root), w + 8)
            .expect("denominator > 1");
        doublings += 1;
    }
    // Alternating odd series.
    let mut sum = t.clone();
    let t2 = t.mul(&t).round_to(w + 8);
    let mut power = t.clone();
    let mut k: u64 = 1;
    loop {
        power = power.mul(&t2).round_to(w + 8);
        let term = power
            .div(&Decimal::from_int((2 * k + 1) as i64), w + 8)
            .expect("nonzero");
        if term.magnitude_below(-(w as i64 + 6)) {
            break;
        }
        if k % 2 == 1 {
            sum = sum.sub(&term).round_to(w + 8);
        } else {
            sum = sum.add(&term).round_to(w + 8);
        }
        k += 1;
    }
    for _ in 0..doublings {
        sum = sum.add(&sum);
    }
    sum.round_to(prec)
}

/// `x^e` for positive rational `x` and rational exponent, to `prec`
/// significant digits, via `exp(e ln x)`. Exact rational powers are
/// short-circuited by callers.
pub fn pow_dec(x: &Rational, e: &Rational, prec: u32) -> Result<Decimal> {
    if !x.is_positive() {
        return Err(Error::DomainError(format!(
            "power with non-positive base {x}"
        )));
    }
    let w = prec + 10 + log10_magnitude(e);
    let lnx = ln_dec(x, w + 8)?;
    let scaled_num = lnx.mul(&Decimal::normalized(e.numer().clone(), 0));
    let scaled = scaled_num.div(&Decimal::normalized(e.denom().clone(), 0), w + 8)?;
    Ok(exp_dec(&scaled.to_rational(), w).round_to(prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    fn rat(s: &str) -> Rational {
        Rational::parse(s).unwrap()
    }

    /// Asserts agreement with a reference value to `digits` significant
    /// digits.
    fn assert_close(got: &Decimal, reference: &str, digits: u32) {
        let want = rat(reference);
        let got_r = got.to_rational();
        let diff = (&got_r - &want).abs();
        // Agreement to N significant digits: relative error below 10^(1-N).
        let tol = &want.abs()
            * &Rational::from_bigint(BigInt::from(10).pow(digits - 1))
                .recip()
                .unwrap();
        assert!(
            diff <= tol,
            "got {} want {} (|diff| ~ {:e})",
            got.to_string_sig(digits + 5),
            reference,
            diff.to_f64()
        );
    }

    #[test]
    fn arithmetic_and_rounding() {
        let a = Decimal::from_rational(&rat("1/3"), 30);
        let b = Decimal::from_rational(&rat("2/3"), 30);
        let s = a.add(&b);
        assert!(s.sub(&Decimal::one()).magnitude_below(-28));
        assert_eq!(
            Decimal::from_int(12345).round_to(2).to_string_sig(2),
            "12000"
        );
        assert_eq!(
            Decimal::from_rational(&rat("1/8"), 10).to_string_sig(10),
            "0.125"
        );
        // round-half-even on the dropped digit
        assert_eq!(Decimal::from_int(25).round_to(1).to_string_sig(1), "20");
        assert_eq!(Decimal::from_int(35).round_to(1).to_string_sig(1), "40");
        assert_eq!(Decimal::from_int(-25).round_to(1).to_string_sig(1), "-20");
    }

    #[test]
    fn division_precision() {
        let q = Decimal::from_int(1).div(&Decimal::from_int(7), 50).unwrap();
        assert_close(
            &q,
            "0.14285714285714285714285714285714285714285714285714285714",
            50,
        );
        let q2 = Decimal::from_int(-1).div(&Decimal::from_int(7), 30).unwrap();
        assert_eq!(q2.sign(), Sign::Negative);
    }

    // References computed externally to 62 significant digits.

    #[test]
    fn exp_references() {
        assert_close(
            &exp_dec(&rat("1/3"), 55),
            "1.3956124250860895286281253196025868375979065151994069826175167",
            54,
        );
        assert_close(
            &exp_dec(&rat("-7/5"), 55),
            "0.24659696394160647693986123983376763306428377424145148924656836",
            54,
        );
        assert_close(
            &exp_dec(&rat("3"), 55),
            "20.085536923187667740928529654581717896987907838554150144378934",
            54,
        );
        assert_close(
            &exp_dec(&rat("1"), 60),
            "2.7182818284590452353602874713526624977572470936999595749669676",
            59,
        );
    }

    #[test]
    fn sin_cos_references() {
        assert_close(
            &sin_dec(&rat("1/7"), 55),
            "0.14237172979226366716527232070623117078686709975936406101361947",
            54,
        );
        assert_close(
            &sin_dec(&rat("5/2"), 55),
            "0.59847214410395649405185470218616227170359717157722357330262703",
            54,
        );
        assert_close(
            &cos_dec(&rat("1/7"), 55),
            "0.98981326044661508269572613701343374587403270089957141763181034",
            54,
        );
        assert_close(
            &cos_dec(&rat("-9/4"), 55),
            "-0.6281736227227390889133890573964033067888152811922332881344151",
            54,
        );
        assert_close(
            &sin_dec(&rat("1"), 55),
            "0.84147098480789650665250232163029899962256306079837106567275171",
            54,
        );
        assert_close(
            &sin_dec(&rat("3"), 55),
            "0.14112000805986722210074480280811027984693326425226558415188264",
            54,
        );
        assert_close(
            &cos_dec(&rat("3"), 55),
            "-0.98999249660044545727157279473126130239367909661558832881408593",
            54,
        );
    }

    #[test]
    fn ln_references() {
        assert_close(
            &ln_dec(&rat("2"), 55).unwrap(),
            "0.69314718055994530941723212145817656807550013436025525412068001",
            54,
        );
        assert_close(
            &ln_dec(&rat("1/3"), 55).unwrap(),
            "-1.0986122886681096913952452369225257046474905578227494517346943",
            54,
        );
        assert_close(
            &ln_dec(&rat("100/7"), 55).unwrap(),
            "2.6592600369327780629306301659255486855651182476756847636072657",
            54,
        );
        assert!(ln_dec(&rat("0"), 30).is_err());
        assert!(ln_dec(&rat("-1"), 30).is_err());
    }

    #[test]
    fn atan_references() {
        assert_close(
            &atan_dec(&rat("1"), 55),
            "0.78539816339744830961566084581987572104929234984377645524373615",
            54,
        );
        assert_close(
            &atan_dec(&rat("-5/3"), 55),
            "-1.0303768265243124637877433270311515319634364482249605223711121",
            54,
        );
        assert_close(
            &atan_dec(&rat("12"), 55),
            "1.4876550949064553893206533769889701445674533590595334842528448",
            54,
        );
        assert_close(
            &atan_dec(&rat("3"), 55),
            "1.2490457723982544258299170772810901230778294041298967190546692",
            54,
        );
    }

    #[test]
    fn sqrt_and_pow_references() {
        assert_close(
            &sqrt_dec(&rat("2"), 55).unwrap(),
            "1.4142135623730950488016887242096980785696718753769480731766797",
            54,
        );
        assert_close(
            &sqrt_dec(&rat("3/7"), 55).unwrap(),
            "0.6546536707079771437982924562468583555692080823954245575153203",
            54,
        );
        assert_close(
            &sqrt_dec(&rat("5"), 55).unwrap(),
            "2.2360679774997896964091736687312762354406183596115257242708972",
            54,
        );
        assert_close(
            &pow_dec(&rat("5/2"), &rat("2/3"), 55).unwrap(),
            "1.8420157493201933028899114167899036109586290587190913346282307",
            54,
        );
        assert!(sqrt_dec(&rat("-1"), 30).is_err());
        assert!(pow_dec(&rat("-2"), &rat("1/2"), 30).is_err());
    }

    #[test]
    fn extreme_arguments() {
        assert_close(
            &exp_dec(&rat("-50"), 55),
            "0.0000000000000000000001928749847963917783017342816527012574752832651230262910898",
            54,
        );
        assert_close(
            &exp_dec(&rat("30"), 55),
            "10686474581524.46214699046865074140165002449500547305499022",
            54,
        );
        assert_close(
            &ln_dec(&rat("1/1000000000000000000000000000000"), 55).unwrap(),
            "-69.077552789821370520539743640530926228033044658863189281",
            54,
        );
        assert_close(
            &ln_dec(&rat("12345678901234567890"), 55).unwrap(),
            "43.95983778920252055738683934949154382665910654927024004489",
            54,
        );
        assert_close(
            &atan_dec(&rat("1000000"), 55),
            "1.570795326794896619564655024972884775431918175878029100853",
            54,
        );
        assert_close(
            &atan_dec(&rat("-1/1000000"), 55),
            "-0.0000009999999999996666666666668666666666665238095238096349206349",
            54,
        );
        assert_close(
            &sin_dec(&rat("100"), 55),
            "-0.5063656411097587936565576104597854320650327212906573234434",
            54,
        );
        assert_close(
            &cos_dec(&rat("-100"), 55),
            "0.8623188722876839341019385139508425355100840085355108292802",
            54,
        );
        let tiny_root = sqrt_dec(&rat("1/10000000000000000000000000000000000000000"), 55).unwrap();
        assert_eq!(
            tiny_root.to_rational(),
            rat("1/100000000000000000000")
        );
        assert_close(
            &pow_dec(&rat("2"), &rat("-7/3"), 55).unwrap(),
            "0.198425131496024934343963204909038532548936665987481626226",
            54,
        );
    }

    #[test]
    fn string_rendering() {
        let x = Decimal::from_rational(&rat("1234/100000"), 20);
        assert_eq!(x.to_string_sig(20), "0.01234");
        assert_eq!(Decimal::zero().to_string_sig(10), "0");
        assert_eq!(Decimal::from_int(-3).to_string_sig(10), "-3");
        let tiny = Decimal::normalized(BigInt::from(7), -40);
        assert_eq!(tiny.to_string_sig(10), "7e-40");
    }
}
