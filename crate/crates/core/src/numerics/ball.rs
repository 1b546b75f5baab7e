//! Mid-rad balls over dyadics. Each operation computes the midpoint at the
//! ball's working precision and charges the rounding error, plus the
//! propagated input radii, to the output radius (always rounded up).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use super::dyadic::{Dyadic, Round};
use super::elementary::{exp_point, log_point, pi};
use super::NumericsError;

/// Significant bits kept in radii.
const RAD_BITS: u64 = 32;

/// The interval `[mid - rad, mid + rad]` together with the working precision
/// used for midpoints derived from it.
#[derive(Clone, PartialEq, Eq)]
pub struct RealBall {
    mid: Dyadic,
    rad: Dyadic,
    prec: u64,
}

fn rad_up(x: Dyadic) -> Dyadic {
    x.round(RAD_BITS, Round::Ceil)
}

impl RealBall {
    pub fn new(mid: Dyadic, rad: Dyadic, prec: u64) -> Self {
        assert!(!rad.is_negative(), "negative radius");
        RealBall {
            mid,
            rad: rad_up(rad),
            prec,
        }
    }

    pub fn exact(x: Dyadic, prec: u64) -> Self {
        RealBall {
            mid: x,
            rad: Dyadic::zero(),
            prec,
        }
    }

    pub fn from_int<T: Into<BigInt>>(n: T, prec: u64) -> Self {
        RealBall::exact(Dyadic::from_int(n), prec)
    }

    /// Exact conversion of a finite `f64` (every finite double is dyadic).
    pub fn from_f64(x: f64, prec: u64) -> Self {
        assert!(x.is_finite(), "non-finite float");
        if x == 0.0 {
            return RealBall::from_int(0, prec);
        }
        let bits = x.to_bits();
        let e = ((bits >> 52) & 0x7ff) as i64;
        let frac = (bits & ((1u64 << 52) - 1)) as i64;
        let (mant, exp) = if e == 0 {
            (frac, -1074)
        } else {
            (frac | (1 << 52), e - 1075)
        };
        let mant = if x < 0.0 { -mant } else { mant };
        RealBall::exact(Dyadic::new(BigInt::from(mant), exp), prec)
    }

    pub fn from_rational(q: &BigRational, prec: u64) -> Self {
        if let Some(d) = Dyadic::try_from_rational(q) {
            return RealBall::exact(d, prec);
        }
        let mid = Dyadic::from_rational(q, prec, Round::Floor);
        let hi = Dyadic::from_rational(q, prec, Round::Ceil);
        RealBall::new(mid.clone(), hi.sub(&mid), prec)
    }

    /// Ball enclosing the closed interval `[lo, hi]`.
    pub fn from_endpoints(lo: &Dyadic, hi: &Dyadic, prec: u64) -> Self {
        assert!(lo <= hi, "empty interval");
        let sum = lo.add(hi);
        let mid = sum.shl(-1).round(prec, Round::Floor);
        let rad = hi.sub(&mid).max(mid.sub(lo));
        RealBall::new(mid, rad, prec)
    }

    pub fn pi(prec: u64) -> Self {
        let a = pi(prec + 8);
        RealBall::new(a.value, a.err, prec).rounded()
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn prec(&self) -> u64 {
        self.prec
    }

    pub fn with_prec(&self, prec: u64) -> Self {
        RealBall { prec, ..self.clone() }.rounded()
    }

    pub fn lower(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    pub fn upper(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        self.lower() <= *x && *x <= self.upper()
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Dyadic::zero())
    }

    /// True when every point of `other` lies in `self`.
    pub fn contains_ball(&self, other: &RealBall) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    /// Certified `self > 0`.
    pub fn is_positive(&self) -> bool {
        self.lower().is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.upper().is_negative()
    }

    /// Certified `self < other`.
    pub fn lt(&self, other: &RealBall) -> bool {
        self.upper() < other.lower()
    }

    /// `floor(x)` when it is the same for every point of the ball.
    pub fn floor_certain(&self) -> Option<BigInt> {
        let a = self.lower().floor();
        if a == self.upper().floor() {
            Some(a)
        } else {
            None
        }
    }

    /// Relative radius `rad / |mid|` as a rough bit count (for diagnostics).
    pub fn accuracy_bits(&self) -> i64 {
        if self.rad.is_zero() {
            return i64::MAX;
        }
        if self.mid.is_zero() {
            return i64::MIN;
        }
        self.mid.magnitude() - self.rad.magnitude()
    }

    fn rounded(mut self) -> Self {
        let r = self.mid.round(self.prec, Round::Floor);
        if r != self.mid {
            let e = self.mid.sub(&r);
            self.rad = rad_up(self.rad.add(&e));
            self.mid = r;
        }
        self
    }

    /// Midpoint rounded to the working precision with the error absorbed.
    fn settle(mid: Dyadic, rad: Dyadic, prec: u64) -> Self {
        RealBall {
            mid,
            rad: rad_up(rad),
            prec,
        }
        .rounded()
    }

    pub fn neg(&self) -> Self {
        RealBall {
            mid: self.mid.neg(),
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            self.neg()
        } else if self.contains_zero() {
            let m = self.lower().abs().max(self.upper().abs());
            RealBall::from_endpoints(&Dyadic::zero(), &m, self.prec)
        } else {
            self.clone()
        }
    }

    pub fn add(&self, other: &RealBall) -> Self {
        RealBall::settle(
            self.mid.add(&other.mid),
            self.rad.add(&other.rad),
            self.prec.max(other.prec),
        )
    }

    pub fn sub(&self, other: &RealBall) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RealBall) -> Self {
        let rad = self
            .mid
            .abs()
            .mul(&other.rad)
            .add(&other.mid.abs().mul(&self.rad))
            .add(&self.rad.mul(&other.rad));
        RealBall::settle(self.mid.mul(&other.mid), rad, self.prec.max(other.prec))
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        let m = Dyadic::from_int(n.abs());
        RealBall::settle(self.mid.mul_int(n), self.rad.mul(&m), self.prec)
    }

    /// Exact multiplication by `2^k`.
    pub fn shl(&self, k: i64) -> Self {
        RealBall {
            mid: self.mid.shl(k),
            rad: self.rad.shl(k),
            prec: self.prec,
        }
    }

    pub fn div(&self, other: &RealBall) -> Result<Self, NumericsError> {
        if other.contains_zero() {
            return Err(NumericsError::Domain("division by a ball containing zero".into()));
        }
        let prec = self.prec.max(other.prec);
        let mb = other.mid.abs();
        let q = Dyadic::div_round(&self.mid, &other.mid, prec + 2, Round::Floor);
        // point error of the rounded quotient
        let point = if q.is_zero() {
            Dyadic::zero()
        } else {
            Dyadic::pow2(q.magnitude() - prec as i64)
        };
        // |x/y - a/b| <= (|a| rb + |b| ra) / (|b| (|b| - rb))
        let num = self.mid.abs().mul(&other.rad).add(&mb.mul(&self.rad));
        let den = mb.mul(&mb.sub(&other.rad));
        let prop = if num.is_zero() {
            Dyadic::zero()
        } else {
            Dyadic::div_round(&num, &den, RAD_BITS, Round::Ceil)
        };
        Ok(RealBall::settle(q, point.add(&prop), prec))
    }

    pub fn recip(&self) -> Result<Self, NumericsError> {
        RealBall::from_int(1, self.prec).div(self)
    }

    pub fn sqr(&self) -> Self {
        self.mul(self)
    }

    pub fn powi(&self, n: u64) -> Self {
        let mut result = RealBall::from_int(1, self.prec);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        result
    }

    pub fn sqrt(&self) -> Result<Self, NumericsError> {
        if self.is_exact() && self.mid.is_zero() {
            return Ok(self.clone());
        }
        if !self.is_positive() {
            return Err(NumericsError::Domain("sqrt of a ball reaching zero or below".into()));
        }
        let lo = self.mid.sqrt_floor(self.prec + 2);
        let hi = self.mid.sqrt_ceil(self.prec + 2);
        // |sqrt(x) - sqrt(m)| <= r / sqrt(m) <= r / lo
        let prop = if self.rad.is_zero() {
            Dyadic::zero()
        } else {
            Dyadic::div_round(&self.rad, &lo, RAD_BITS, Round::Ceil)
        };
        Ok(RealBall::settle(lo.clone(), hi.sub(&lo).add(&prop), self.prec))
    }

    pub fn log(&self) -> Result<Self, NumericsError> {
        if !self.is_positive() {
            return Err(NumericsError::Domain("log of a ball reaching zero or below".into()));
        }
        let a = log_point(&self.mid, self.prec + 8);
        // |log x - log m| <= r / (m - r)
        let prop = if self.rad.is_zero() {
            Dyadic::zero()
        } else {
            Dyadic::div_round(&self.rad, &self.lower(), RAD_BITS, Round::Ceil)
        };
        Ok(RealBall::settle(a.value, a.err.add(&prop), self.prec))
    }

    pub fn exp(&self) -> Result<Self, NumericsError> {
        let overflow = || NumericsError::Domain("exp argument out of range".into());
        if self.rad < Dyadic::pow2(-1) {
            let a = exp_point(&self.mid, self.prec + 8).ok_or_else(overflow)?;
            // e^x - e^m <= e^m (e^r - 1) <= e^m * 2r for r <= 1/2
            let top = a.value.add(&a.err);
            let prop = top.mul(&self.rad).shl(1);
            return Ok(RealBall::settle(a.value, a.err.add(&prop), self.prec));
        }
        let lo = exp_point(&self.lower(), self.prec + 8).ok_or_else(overflow)?;
        let hi = exp_point(&self.upper(), self.prec + 8).ok_or_else(overflow)?;
        let l = lo.value.sub(&lo.err);
        let u = hi.value.add(&hi.err);
        Ok(RealBall::from_endpoints(&l, &u, self.prec))
    }

    /// Positive `n`-th root via `exp(log(x) / n)`.
    pub fn nth_root(&self, n: u64) -> Result<Self, NumericsError> {
        assert!(n >= 1);
        if n == 1 {
            return Ok(self.clone());
        }
        if n == 2 {
            return self.sqrt();
        }
        let l = self.log()?;
        l.div(&RealBall::from_int(n, self.prec))?.exp()
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }
}

impl fmt::Debug for RealBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} +/- {}]", self.mid.to_sci_string(20), self.rad.to_sci_string(3))
    }
}

impl fmt::Display for RealBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn nearest_distance_point(x: &Dyadic) -> Dyadic {
    let f = Dyadic::from_int(x.floor());
    let d = x.sub(&f);
    let e = Dyadic::one().sub(&d);
    d.min(e)
}

/// Distance to the nearest integer, `||x||`, over the whole ball. The flag is
/// set when the ball straddles a half-integer, so the nearest integer is not
/// determined and more precision is needed.
pub fn certified_nearest_distance(x: &RealBall) -> (RealBall, bool) {
    let half = Dyadic::pow2(-1);
    let lo = x.lower();
    let hi = x.upper();
    let n_lo = lo.add(&half).floor();
    let n_hi = hi.add(&half).floor();
    if n_lo == n_hi {
        let d = x.sub(&RealBall::from_int(n_lo, x.prec)).abs();
        return (d, false);
    }
    let bottom = if hi.sub(&lo) >= Dyadic::one() {
        Dyadic::zero()
    } else {
        nearest_distance_point(&lo).min(nearest_distance_point(&hi))
    };
    (RealBall::from_endpoints(&bottom, &half, x.prec), true)
}
