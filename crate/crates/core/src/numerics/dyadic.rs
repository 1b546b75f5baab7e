//! Exact dyadic rationals `mant * 2^exp`.
//!
//! Every ball midpoint and radius is a [`Dyadic`]. All operations here are
//! either exact or take an explicit rounding direction, so error accounting
//! in the ball layer never depends on hidden rounding.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Direction used when a result has to be truncated to a bit budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Floor,
    Ceil,
    /// Round toward zero.
    Down,
    /// Round away from zero.
    Up,
}

/// An exact number `mant * 2^exp`, normalized so that `mant` is odd (or zero
/// with `exp == 0`). Normalization makes equality structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

/// `floor(n / 2^k)` or `ceil(n / 2^k)` for any sign of `n`.
fn shr_round(n: &BigInt, k: u64, ceil: bool) -> BigInt {
    if k == 0 {
        return n.clone();
    }
    let (q, r) = n.div_mod_floor(&pow2(k));
    if ceil && !r.is_zero() {
        q + 1
    } else {
        q
    }
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        match self.mant.trailing_zeros() {
            None => self.exp = 0,
            Some(0) => {}
            Some(tz) => {
                self.mant >>= tz;
                self.exp += tz as i64;
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> Self {
        Dyadic::new(n.into(), 0)
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: k,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.mant.sign()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    /// Bit length of the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Exponent of the leading bit: `2^(magnitude) <= |x| < 2^(magnitude + 1)`.
    /// Zero maps to `i64::MIN`.
    pub fn magnitude(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.bits() as i64 - 1
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    /// Multiply by `2^k` (exact).
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        // odd * odd is odd, no renormalization needed
        Dyadic {
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
        }
    }

    pub fn mul_int(&self, n: &BigInt) -> Dyadic {
        Dyadic::new(&self.mant * n, self.exp)
    }

    /// Round to at most `prec` significant bits.
    pub fn round(&self, prec: u64, mode: Round) -> Dyadic {
        let bits = self.bits();
        if bits <= prec || self.is_zero() {
            return self.clone();
        }
        let shift = bits - prec;
        let ceil = match mode {
            Round::Floor => false,
            Round::Ceil => true,
            Round::Down => self.is_negative(),
            Round::Up => self.is_positive(),
        };
        Dyadic::new(shr_round(&self.mant, shift, ceil), self.exp + shift as i64)
    }

    /// Round to a multiple of `2^exp`.
    pub fn round_to_exp(&self, exp: i64, mode: Round) -> Dyadic {
        if self.exp >= exp || self.is_zero() {
            return self.clone();
        }
        let shift = (exp - self.exp) as u64;
        let ceil = match mode {
            Round::Floor => false,
            Round::Ceil => true,
            Round::Down => self.is_negative(),
            Round::Up => self.is_positive(),
        };
        Dyadic::new(shr_round(&self.mant, shift, ceil), exp)
    }

    /// `a / b` rounded to `prec` significant bits in the given direction.
    /// Panics if `b` is zero.
    pub fn div_round(a: &Dyadic, b: &Dyadic, prec: u64, mode: Round) -> Dyadic {
        assert!(!b.is_zero(), "division by zero dyadic");
        if a.is_zero() {
            return Dyadic::zero();
        }
        // quotient carries at least prec + 2 bits before the final rounding
        let s = prec as i64 + 2 + b.bits() as i64 - a.bits() as i64;
        let (num, den, exp) = if s >= 0 {
            (&a.mant << s as u64, b.mant.clone(), a.exp - b.exp - s)
        } else {
            (a.mant.clone(), &b.mant << (-s) as u64, a.exp - b.exp - s)
        };
        let negative = num.is_negative() != den.is_negative();
        let (num, den) = (num.abs(), den.abs());
        let (q, r) = num.div_rem(&den);
        let inexact = !r.is_zero();
        // |q| is |a/b| truncated; fix the direction for the signed result
        let away = match mode {
            Round::Floor => negative,
            Round::Ceil => !negative,
            Round::Down => false,
            Round::Up => true,
        };
        let q = if inexact && away { q + 1 } else { q };
        let q = if negative { -q } else { q };
        Dyadic::new(q, exp).round(prec, mode)
    }

    /// `num / den` rounded to `prec` bits.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u64, mode: Round) -> Dyadic {
        Dyadic::div_round(
            &Dyadic::from_int(num.clone()),
            &Dyadic::from_int(den.clone()),
            prec,
            mode,
        )
    }

    pub fn from_rational(q: &BigRational, prec: u64, mode: Round) -> Dyadic {
        Dyadic::from_ratio(q.numer(), q.denom(), prec, mode)
    }

    /// Exact conversion when the denominator is a power of two.
    pub fn try_from_rational(q: &BigRational) -> Option<Dyadic> {
        let den = q.denom();
        let tz = den.trailing_zeros()?;
        if (den >> tz).is_one() {
            Some(Dyadic::new(q.numer().clone(), -(tz as i64)))
        } else {
            None
        }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), pow2((-self.exp) as u64))
        }
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            shr_round(&self.mant, (-self.exp) as u64, false)
        }
    }

    pub fn ceil(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            shr_round(&self.mant, (-self.exp) as u64, true)
        }
    }

    /// `sqrt(self)` rounded down to `prec` bits. `self` must be nonnegative.
    pub fn sqrt_floor(&self, prec: u64) -> Dyadic {
        assert!(!self.is_negative(), "sqrt of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // mant * 2^exp = (mant << s) * 2^(exp - s) with exp - s even and
        // mant << s carrying about 2 * prec + 4 bits
        let target = 2 * prec as i64 + 4;
        let mut s = (target - self.bits() as i64).max(0);
        if (self.exp - s).rem_euclid(2) != 0 {
            s += 1;
        }
        let r = (&self.mant << s as u64).sqrt();
        Dyadic::new(r, (self.exp - s) / 2).round(prec, Round::Floor)
    }

    /// `sqrt(self)` rounded up to `prec` bits.
    pub fn sqrt_ceil(&self, prec: u64) -> Dyadic {
        let lo = self.sqrt_floor(prec + 2);
        if &lo.mul(&lo) == self {
            return lo.round(prec, Round::Ceil);
        }
        // two grid steps cover both truncations
        let ulp = Dyadic::pow2(lo.magnitude() - prec as i64);
        lo.add(&ulp).round(prec, Round::Ceil)
    }

    /// Approximate conversion, for diagnostics and heuristics only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.bits() as i64;
        let shift = (bits - 60).max(0);
        let m = (&self.mant >> shift as u64).to_f64().unwrap_or(f64::NAN);
        let e = self.exp + shift;
        if e > 2000 {
            return m.signum() * f64::INFINITY;
        }
        if e < -2000 {
            return 0.0;
        }
        m * 2f64.powi(e as i32)
    }

    /// Approximate base-2 logarithm of `|self|`, usable for huge magnitudes.
    pub fn log2_approx(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.bits() as i64;
        let shift = (bits - 60).max(0);
        let m = (&self.mant >> shift as u64).abs().to_f64().unwrap_or(1.0);
        m.log2() + (self.exp + shift) as f64
    }

    /// Decimal scientific notation with `digits` significant digits,
    /// truncated toward zero.
    pub fn to_sci_string(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        let neg = self.is_negative();
        let a = self.abs();
        // decimal exponent estimate, corrected below
        let mut e10 = (a.log2_approx() * std::f64::consts::LOG10_2).floor() as i64;
        let scaled = |e10: i64| -> BigInt {
            // floor(a * 10^(digits - 1 - e10))
            let p = digits as i64 - 1 - e10;
            let r = a.to_rational();
            let ten = BigRational::from_integer(BigInt::from(10));
            let f = if p >= 0 {
                r * num_traits::pow(ten, p as usize)
            } else {
                r / num_traits::pow(ten, (-p) as usize)
            };
            f.floor().to_integer()
        };
        let mut s = scaled(e10);
        let lim = num_traits::pow(BigInt::from(10), digits);
        let low = num_traits::pow(BigInt::from(10), digits - 1);
        while s >= lim {
            e10 += 1;
            s = scaled(e10);
        }
        while s < low {
            e10 -= 1;
            s = scaled(e10);
        }
        let txt = s.to_string();
        let (head, tail) = txt.split_at(1);
        let sign = if neg { "-" } else { "" };
        if tail.is_empty() {
            format!("{sign}{head}e{e10}")
        } else {
            format!("{sign}{head}.{tail}e{e10}")
        }
    }
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Self {
        Dyadic::from_int(n)
    }
}

impl From<BigInt> for Dyadic {
    fn from(n: BigInt) -> Self {
        Dyadic::from_int(n)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.sign(), other.sign()) {
            (a, b) if a != b => return (a as i8).cmp(&(b as i8)),
            _ => {}
        }
        if self.is_zero() {
            return Ordering::Equal;
        }
        // same sign: compare leading-bit positions first
        let (ma, mb) = (self.magnitude(), other.magnitude());
        if ma != mb {
            let ord = ma.cmp(&mb);
            return if self.is_negative() { ord.reverse() } else { ord };
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sci_string(f.precision().unwrap_or(20)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    #[test]
    fn normalization_is_structural() {
        assert_eq!(d(4, 0), d(1, 2));
        assert_eq!(d(0, 7), Dyadic::zero());
        assert_eq!(d(6, -1), d(3, 0));
    }

    #[test]
    fn ordering_mixed_signs_and_scales() {
        assert!(d(-1, 10) < d(1, -10));
        assert!(d(3, -1) > d(1, 0));
        assert!(d(-3, -1) < d(-1, 0));
        assert_eq!(d(5, 3).cmp(&d(40, 0)), Ordering::Equal);
    }

    #[test]
    fn directed_rounding() {
        let x = d(0b10111, 0); // 23
        assert_eq!(x.round(3, Round::Floor), d(20, 0));
        assert_eq!(x.round(3, Round::Ceil), d(24, 0));
        let y = x.neg();
        assert_eq!(y.round(3, Round::Floor), d(-24, 0));
        assert_eq!(y.round(3, Round::Down), d(-20, 0));
    }

    #[test]
    fn division_brackets_quotient() {
        let one = Dyadic::one();
        let three = Dyadic::from(3);
        let lo = Dyadic::div_round(&one, &three, 64, Round::Floor);
        let hi = Dyadic::div_round(&one, &three, 64, Round::Ceil);
        assert!(lo.mul(&three) < one);
        assert!(hi.mul(&three) > one);
        assert!(hi.sub(&lo) <= Dyadic::pow2(-64));
    }

    #[test]
    fn sqrt_brackets() {
        let two = Dyadic::from(2);
        let lo = two.sqrt_floor(100);
        let hi = two.sqrt_ceil(100);
        assert!(lo.mul(&lo) < two);
        assert!(hi.mul(&hi) > two);
        assert_eq!(Dyadic::from(49).sqrt_floor(10), Dyadic::from(7));
        assert_eq!(Dyadic::from(49).sqrt_ceil(10), Dyadic::from(7));
    }

    #[test]
    fn floor_and_ceil_negative() {
        let x = d(-5, -1); // -2.5
        assert_eq!(x.floor(), BigInt::from(-3));
        assert_eq!(x.ceil(), BigInt::from(-2));
    }

    #[test]
    fn scientific_formatting() {
        assert_eq!(Dyadic::from(31).to_sci_string(2), "3.1e1");
        assert_eq!(d(1, -2).to_sci_string(3), "2.50e-1");
        assert_eq!(Dyadic::from(-1000).to_sci_string(1), "-1e3");
    }
}
