//! Pell equations `x^2 - d y^2 = ±1`: fundamental solutions, the orbit of
//! x-coordinates, Dickson polynomials and the small helpers the searches use.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numerics::RealBall;

/// Trial division bound used for square-free checks.
pub const TRIAL_BOUND: u64 = 1_000_000;

/// The sequence `x_0 = 1, x_1, x_(n+1) = 2 x_1 x_n - eps x_(n-1)` with its
/// generator `delta = x_1 + sqrt(x_1^2 - eps)`.
#[derive(Clone, Debug)]
pub struct PellOrbit {
    pub x1: BigInt,
    pub epsilon: i8,
    pub y1: Option<BigInt>,
    pub d: Option<BigInt>,
    pub delta: RealBall,
}

fn check_eps(epsilon: i8) -> Result<()> {
    if epsilon == 1 || epsilon == -1 {
        Ok(())
    } else {
        Err(Error::Domain(format!("epsilon must be +1 or -1, got {epsilon}")))
    }
}

/// `x1 + sqrt(x1^2 - eps)` as a ball at `prec` bits.
pub fn delta_ball(x1: &BigInt, epsilon: i8, prec: u64) -> Result<RealBall> {
    let x = RealBall::from_int(x1.clone(), prec);
    let disc = RealBall::from_int(x1 * x1 - BigInt::from(epsilon), prec);
    Ok(x.add(&disc.sqrt()?))
}

impl PellOrbit {
    /// Orbit generated by `x1` and `eps`, without the `(d, y1)` pair.
    pub fn from_x1(x1: impl Into<BigInt>, epsilon: i8, prec: u64) -> Result<Self> {
        let x1 = x1.into();
        check_eps(epsilon)?;
        if x1 < BigInt::one() {
            return Err(Error::Domain(format!("x1 must be positive, got {x1}")));
        }
        if x1.is_one() && epsilon == 1 {
            return Err(Error::Domain(
                "x1 = 1 with eps = +1 gives the degenerate orbit y1 = 0".into(),
            ));
        }
        let delta = delta_ball(&x1, epsilon, prec)?;
        Ok(PellOrbit {
            x1,
            epsilon,
            y1: None,
            d: None,
            delta,
        })
    }

    /// Fill in `d` and `y1` from `x1^2 - eps = y1^2 d` with `d` square-free.
    /// Fails when `x1^2 - eps` has a factor beyond the trial-division bound
    /// that could hide a square.
    pub fn with_square_free_part(mut self) -> Result<Self> {
        let n = &self.x1 * &self.x1 - BigInt::from(self.epsilon);
        let (d, s) = square_free_decomposition(&n)
            .ok_or_else(|| Error::Domain(format!("cannot decompose {n} by trial division")))?;
        self.d = Some(d);
        self.y1 = Some(s);
        Ok(self)
    }

    pub fn delta_at(&self, prec: u64) -> Result<RealBall> {
        delta_ball(&self.x1, self.epsilon, prec)
    }

    pub fn xn(&self, n: u64) -> BigInt {
        self.xs().nth(n as usize).unwrap()
    }

    /// `x_0, x_1, x_2, ...` (unbounded).
    pub fn xs(&self) -> impl Iterator<Item = BigInt> {
        let two_x1 = &self.x1 << 1;
        let eps = BigInt::from(self.epsilon);
        let mut state = (BigInt::one(), self.x1.clone());
        std::iter::from_fn(move || {
            let next = &two_x1 * &state.1 - &eps * &state.0;
            let out = std::mem::replace(&mut state.0, std::mem::replace(&mut state.1, next));
            Some(out)
        })
    }

    /// `x_n mod modulus` by the same recursion in residues.
    pub fn xn_mod(&self, n: u64, modulus: u64) -> u64 {
        assert!(modulus >= 2);
        let x1 = self.x1.mod_floor(&BigInt::from(modulus)).to_u64().unwrap();
        xn_mod_raw(x1, self.epsilon, n, modulus)
    }
}

/// `x_n mod modulus` for the orbit of `x1 mod modulus`.
pub fn xn_mod_raw(x1_mod: u64, epsilon: i8, n: u64, modulus: u64) -> u64 {
    let md = modulus as u128;
    let c = (2 * x1_mod as u128) % md;
    let (mut a, mut b) = (1u128 % md, x1_mod as u128 % md);
    if n == 0 {
        return a as u64;
    }
    for _ in 1..n {
        let t = c * b % md;
        let next = if epsilon == 1 { (t + md - a) % md } else { (t + a) % md };
        a = b;
        b = next;
    }
    b as u64
}

/// Largest square `s^2` dividing `n` and the square-free cofactor `d`, or
/// `None` when a cofactor above the trial bound squared stays unresolved.
pub fn square_free_decomposition(n: &BigInt) -> Option<(BigInt, BigInt)> {
    assert!(n.is_positive());
    let mut rest = n.clone();
    let mut d = BigInt::one();
    let mut s = BigInt::one();
    let mut p = 2u64;
    while p <= TRIAL_BOUND {
        let pb = BigInt::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut e = 0u32;
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            e += 1;
        }
        s *= pb.pow(e / 2);
        if e % 2 == 1 {
            d *= &pb;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // rest is 1, a prime, or has all prime factors above the bound
    let b = BigInt::from(TRIAL_BOUND);
    if rest > &b * &b {
        let r = rest.sqrt();
        if &r * &r == rest {
            return Some((d, s * r));
        }
        if rest > &b * &b * &b {
            return None;
        }
        // exactly two large primes, distinct because rest is not a square
    }
    Some((d * rest, s))
}

pub fn is_square_free(d: &BigInt) -> Option<bool> {
    square_free_decomposition(d).map(|(_, s)| s.is_one())
}

/// Minimal solution of `x^2 - d y^2 = ±1` from the continued fraction of
/// `sqrt(d)`. `eps = -1` exactly when the period is odd.
pub fn fundamental_solution(d: u64, prec: u64) -> Result<PellOrbit> {
    if d < 2 {
        return Err(Error::Domain(format!("d must be at least 2, got {d}")));
    }
    if d > TRIAL_BOUND * TRIAL_BOUND {
        return Err(Error::Domain(format!("d = {d} exceeds the trial-division bound")));
    }
    let db = BigInt::from(d);
    if is_square_free(&db) != Some(true) {
        return Err(Error::Domain(format!("d = {d} is not square-free")));
    }
    let a0 = BigInt::from(d.sqrt());
    // sqrt(d) = [a0; a1, ..., a_L] with a_L = 2 a0
    let (mut m, mut q, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    let (mut p_prev, mut p) = (BigInt::one(), a0.clone());
    let (mut q_prev, mut qq) = (BigInt::zero(), BigInt::one());
    let mut period = 0u64;
    loop {
        m = &q * &a - &m;
        q = (&db - &m * &m) / &q;
        a = (&a0 + &m) / &q;
        period += 1;
        if a == &a0 << 1 {
            break;
        }
        let np = &a * &p + &p_prev;
        let nq = &a * &qq + &q_prev;
        p_prev = std::mem::replace(&mut p, np);
        q_prev = std::mem::replace(&mut qq, nq);
    }
    let epsilon: i8 = if period % 2 == 1 { -1 } else { 1 };
    if &p * &p - &db * &qq * &qq != BigInt::from(epsilon) {
        return Err(Error::Consistency(format!(
            "continued fraction of sqrt({d}) gave a non-solution"
        )));
    }
    let mut orbit = PellOrbit::from_x1(p, epsilon, prec)?;
    orbit.d = Some(db);
    orbit.y1 = Some(qq);
    Ok(orbit)
}

/// `D_n(x, nu) = sum_(i <= n/2) n/(n-i) binom(n-i, i) (-nu)^i x^(n-2i)`.
pub fn dickson(n: u64, x: &BigInt, nu: i8) -> BigInt {
    assert!(n >= 1);
    let mut total = BigInt::zero();
    for i in 0..=n / 2 {
        let c = BigInt::from(n) * num_integer::binomial(BigInt::from(n - i), BigInt::from(i)) / BigInt::from(n - i);
        let sign_neg = nu == 1 && i % 2 == 1;
        let term = c * x.pow((n - 2 * i) as u32);
        if sign_neg {
            total -= term;
        } else {
            total += term;
        }
    }
    total
}

/// No prime factor above 5 (1 counts as smooth).
pub fn is_5_smooth(v: &BigInt) -> bool {
    assert!(v.is_positive());
    let mut r = v.clone();
    for p in [2u32, 3, 5] {
        let pb = BigInt::from(p);
        while (&r % &pb).is_zero() {
            r /= &pb;
        }
    }
    r.is_one()
}

/// The only possible `x1` with `x_b = y`:
/// `floor((1/2)((2y + 1/2)^(1/b) + 1/2))`, computed exactly as
/// `floor((iroot_b((4y + 1) 2^(b-1)) + 1) / 4)`.
pub fn x1_from_bth_root(y: &BigInt, b: u32) -> BigInt {
    assert!(y.is_positive() && b >= 2);
    let n: BigInt = (y * 4u32 + 1u32) << (b - 1);
    (n.nth_root(b) + 1) / 4
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fundamental_examples() {
        let o = fundamental_solution(2, 64).unwrap();
        assert_eq!(
            (o.x1.clone(), o.y1.clone().unwrap(), o.epsilon),
            (1.into(), 1.into(), -1)
        );
        let o = fundamental_solution(3, 64).unwrap();
        assert_eq!(
            (o.x1.clone(), o.y1.clone().unwrap(), o.epsilon),
            (2.into(), 1.into(), 1)
        );
        let o = fundamental_solution(61, 64).unwrap();
        assert_eq!(
            (o.x1.clone(), o.y1.clone().unwrap(), o.epsilon),
            (29718.into(), 3805.into(), -1)
        );
        assert!(fundamental_solution(16, 64).is_err());
        assert!(fundamental_solution(12, 64).is_err());
    }

    #[test]
    fn orbit_examples() {
        let o = PellOrbit::from_x1(8, 1, 64).unwrap().with_square_free_part().unwrap();
        assert_eq!(o.d, Some(7.into()));
        assert_eq!(o.y1, Some(3.into()));
        let o = PellOrbit::from_x1(1, -1, 64).unwrap();
        assert!((o.delta.to_f64() - (1.0 + 2f64.sqrt())).abs() < 1e-15);
        assert!(PellOrbit::from_x1(1, 1, 64).is_err());
    }

    #[test]
    fn xn_examples() {
        let o = PellOrbit::from_x1(2, 1, 64).unwrap();
        assert_eq!(o.xn(3), BigInt::from(26));
        let o = PellOrbit::from_x1(16, 1, 64).unwrap();
        assert_eq!(o.xn(3), BigInt::from(16336));
        assert_eq!(o.xn_mod(3, 10_000_000_000), 16336);
        assert_eq!(o.xn_mod(0, 97), 1);
        let o = PellOrbit::from_x1(2, 1, 64).unwrap();
        let m = BigInt::from(10_000_000_000u64);
        assert_eq!(BigInt::from(o.xn_mod(50, 10_000_000_000)), o.xn(50) % m);
    }

    #[test]
    fn dickson_examples() {
        let x = BigInt::from(13);
        assert_eq!(dickson(1, &x, 1), x);
        assert_eq!(dickson(2, &BigInt::from(10), -1), BigInt::from(102));
        assert_eq!(dickson(3, &BigInt::from(8), 1), BigInt::from(488));
        let o = PellOrbit::from_x1(4, 1, 64).unwrap();
        assert_eq!(o.xn(3) * 2, BigInt::from(488));
    }

    #[test]
    fn smoothness() {
        assert!(is_5_smooth(&243.into()));
        assert!(!is_5_smooth(&31.into()));
        assert!(is_5_smooth(&1.into()));
    }

    #[test]
    fn bth_root_candidates() {
        assert_eq!(x1_from_bth_root(&16336.into(), 3), BigInt::from(16));
        assert_eq!(x1_from_bth_root(&31.into(), 2), BigInt::from(4));
        assert!(x1_from_bth_root(&1.into(), 2) <= BigInt::one());
    }

    #[test]
    fn square_free_parts() {
        let (d, s) = square_free_decomposition(&BigInt::from(63)).unwrap();
        assert_eq!((d, s), (7.into(), 3.into()));
        // square of a prime above the trial bound
        let p = BigInt::from(1_000_003u64);
        let (d, s) = square_free_decomposition(&(&p * &p * 5)).unwrap();
        assert_eq!((d, s), (5.into(), p));
    }
}
