//! Fixed-point kernels for `ln 2`, `pi`, `log` and `exp` at exact dyadic
//! points, each returning a value together with a rigorous error bound.
//!
//! Working values are integers `X` standing for `X * 2^-w`. Every truncating
//! step is charged one unit (ulp) and the counts are propagated with
//! conservative integer bounds, so the returned error never understates the
//! distance to the true value.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::dyadic::{Dyadic, Round};

/// A value with an absolute error bound: `|true - value| <= err`.
#[derive(Clone, Debug)]
pub struct Approx {
    pub value: Dyadic,
    pub err: Dyadic,
}

fn one_fixed(w: u64) -> BigInt {
    BigInt::one() << w
}

/// `sum_{j>=0} 1 / ((2j+1) n^(2j+1))` in fixed point, returns (value, ulps).
fn atanh_inv_fixed(n: u64, w: u64) -> (BigInt, u64) {
    let n2 = BigInt::from(n) * BigInt::from(n);
    let mut term = one_fixed(w) / BigInt::from(n);
    let mut sum = term.clone();
    let mut err: u64 = 1;
    let mut j: u64 = 1;
    loop {
        term /= &n2;
        if term.is_zero() {
            break;
        }
        sum += &term / BigInt::from(2 * j + 1);
        // each term: one truncation in the power, one in the division
        err += 2;
        j += 1;
    }
    // tail: true remaining terms are below 1 ulp each and decay geometrically
    (sum, err + 2)
}

/// Same series with alternating signs (arctan).
fn atan_inv_fixed(n: u64, w: u64) -> (BigInt, u64) {
    let n2 = BigInt::from(n) * BigInt::from(n);
    let mut term = one_fixed(w) / BigInt::from(n);
    let mut sum = term.clone();
    let mut err: u64 = 1;
    let mut j: u64 = 1;
    loop {
        term /= &n2;
        if term.is_zero() {
            break;
        }
        let t = &term / BigInt::from(2 * j + 1);
        if j % 2 == 1 {
            sum -= t;
        } else {
            sum += t;
        }
        err += 2;
        j += 1;
    }
    (sum, err + 2)
}

/// `ln 2 = 18 atanh(1/26) - 2 atanh(1/4801) + 8 atanh(1/8749)`, fixed point.
fn ln2_fixed(w: u64) -> (BigInt, u64) {
    let (a, ea) = atanh_inv_fixed(26, w);
    let (b, eb) = atanh_inv_fixed(4801, w);
    let (c, ec) = atanh_inv_fixed(8749, w);
    (a * 18 - b * 2 + c * 8, 18 * ea + 2 * eb + 8 * ec)
}

/// `floor(x * 2^w)`.
fn to_fixed(x: &Dyadic, w: u64) -> BigInt {
    let r = x.round_to_exp(-(w as i64), Round::Floor);
    let shift = r.exponent() + w as i64;
    r.mantissa() << shift as u64
}

fn ulps_to_dyadic(ulps: u64, w: u64) -> Dyadic {
    Dyadic::new(BigInt::from(ulps), -(w as i64))
}

/// `ln 2` with error below `2^-prec`.
pub fn ln2(prec: u64) -> Approx {
    let w = prec + 16;
    let (v, e) = ln2_fixed(w);
    Approx {
        value: Dyadic::new(v, -(w as i64)),
        err: ulps_to_dyadic(e, w),
    }
}

/// `pi = 16 atan(1/5) - 4 atan(1/239)` with error below `2^-prec`.
pub fn pi(prec: u64) -> Approx {
    let w = prec + 16;
    let (a, ea) = atan_inv_fixed(5, w);
    let (b, eb) = atan_inv_fixed(239, w);
    Approx {
        value: Dyadic::new(a * 16 - b * 4, -(w as i64)),
        err: ulps_to_dyadic(16 * ea + 4 * eb, w),
    }
}

fn ceil_mul_ratio(e: u64, num: u64, den: u64) -> u64 {
    (e * num).div_ceil(den)
}

/// Natural log of a positive dyadic point with absolute error below
/// `2^-prec` (relative when the argument is close to 1).
pub fn log_point(x: &Dyadic, prec: u64) -> Approx {
    assert!(x.is_positive(), "log of nonpositive point");
    if *x == Dyadic::one() {
        return Approx {
            value: Dyadic::zero(),
            err: Dyadic::zero(),
        };
    }
    // x = y * 2^e2 with y in [1/sqrt2, sqrt2)
    let bits = x.bits() as i64;
    let mut e2 = x.exponent() + bits;
    let mut y = x.shl(-e2); // in [1/2, 1)
    if y < Dyadic::new(BigInt::from(181), -8) {
        y = y.shl(1);
        e2 -= 1;
    }
    // when x is near 1 the answer is tiny; buy the lost leading bits back
    let guard_near_one = if e2 == 0 {
        let t = y.sub(&Dyadic::one());
        (-t.magnitude()).max(0) as u64
    } else {
        0
    };
    let s: u64 = (((prec as f64).sqrt() / 2.0) as u64).clamp(4, 40);
    let e2_bits = (64 - e2.unsigned_abs().leading_zeros()) as u64;
    let w = prec + guard_near_one + s + e2_bits + 24 + (64 - prec.leading_zeros() as u64);
    let one = one_fixed(w);

    let mut yy = to_fixed(&y, w);
    let mut e_y: u64 = 1;
    for _ in 0..s {
        yy = (yy << w).sqrt();
        // |d sqrt| <= e / (2 * 0.84) plus one truncation
        e_y = ceil_mul_ratio(e_y, 3, 5) + 1;
    }
    // z = (y - 1) / (y + 1); |dz/dy| <= 0.69
    let z = ((&yy - &one) << w).div_floor(&(&yy + &one));
    let e_z = e_y + 1;
    let z2 = (&z * &z) >> w;
    // |z| < 2^-(s+1), so 2 |z| e_z < 1
    let e_z2: u64 = 2;
    let mut term = z.clone();
    let mut e_t = e_z;
    let mut sum = z;
    let mut e_sum = e_z;
    let mut j: u64 = 1;
    loop {
        term = (&term * &z2) >> w;
        e_t = e_t.div_ceil(4) + e_z2 + 1;
        if term.abs() <= BigInt::one() {
            // geometric tail with ratio <= 1/4
            e_sum += 2 * (1 + e_t);
            break;
        }
        sum += &term / BigInt::from(2 * j + 1);
        e_sum += e_t.div_ceil(2 * j + 1) + 1;
        j += 1;
    }
    // log y = 2^(s+1) * atanh(z)
    let mut total = sum << (s + 1);
    let mut e_total = e_sum << (s + 1);
    if e2 != 0 {
        let (l2, e_l2) = ln2_fixed(w);
        total += l2 * BigInt::from(e2);
        e_total += e_l2 * e2.unsigned_abs();
    }
    Approx {
        value: Dyadic::new(total, -(w as i64)),
        err: ulps_to_dyadic(e_total, w),
    }
}

/// `exp(x)` at a dyadic point with relative error below `2^-prec`.
/// Returns `None` when `|x|` is too large for the exponent range.
pub fn exp_point(x: &Dyadic, prec: u64) -> Option<Approx> {
    if x.is_zero() {
        return Some(Approx {
            value: Dyadic::one(),
            err: Dyadic::zero(),
        });
    }
    let xf = x.to_f64();
    if !xf.is_finite() || xf.abs() > 1.0e12 {
        return None;
    }
    let k = (xf / std::f64::consts::LN_2).round() as i64;
    let s: u64 = 8;
    let int_bits = (64 - k.unsigned_abs().leading_zeros()) as u64;
    let w = prec + 3 * s + int_bits + 32;
    let one = one_fixed(w);

    // r = x - k ln2, |r| <= ~0.35
    let xfix = to_fixed(x, w);
    let (l2, e_l2) = ln2_fixed(w);
    let r = xfix - l2 * BigInt::from(k);
    let e_r = 1 + e_l2 * k.unsigned_abs();
    // Taylor for exp(r / 2^s)
    let rr = r >> s; // floor, one more ulp
    let e_rr = e_r.div_ceil(1 << s) + 1;
    let mut term = one.clone();
    let mut sum = one.clone();
    let mut e_t: u64 = 0;
    let mut e_sum: u64 = 0;
    let mut j: u64 = 1;
    loop {
        term = ((&term * &rr) >> w) / BigInt::from(j);
        // |rr| < 1/2: error of product bounded by e_t/2 + |t| e_rr + 1, then /j
        e_t = (e_t.div_ceil(2) + e_rr + 2).div_ceil(j) + 1;
        if term.is_zero() {
            e_sum += 2 * (e_t + 1);
            break;
        }
        sum += &term;
        e_sum += e_t;
        j += 1;
    }
    // square s times; value stays in [0.7, 1.42], error grows by <= 2.84x + 1
    let mut v = sum;
    let mut e_v = e_sum;
    for _ in 0..s {
        v = (&v * &v) >> w;
        e_v = ceil_mul_ratio(e_v, 3, 1) + 2;
    }
    let value = Dyadic::new(v, -(w as i64) + k);
    let err = Dyadic::new(BigInt::from(e_v), -(w as i64) + k);
    Some(Approx { value, err })
}
