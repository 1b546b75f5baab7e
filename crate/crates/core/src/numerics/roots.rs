//! Isolation of a simple real root of an integer polynomial on a bracket.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ball::RealBall;
use super::dyadic::{Dyadic, Round};
use super::{NumericsError, PrecisionPolicy};

/// Sparse integer polynomial `sum c_i x^(e_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    terms: Vec<(u64, BigInt)>,
}

impl Poly {
    /// Terms with zero coefficients are dropped; exponents are merged.
    pub fn new<I: IntoIterator<Item = (u64, BigInt)>>(terms: I) -> Self {
        let mut t: Vec<(u64, BigInt)> = Vec::new();
        let mut raw: Vec<(u64, BigInt)> = terms.into_iter().collect();
        raw.sort_by_key(|r| std::cmp::Reverse(r.0));
        for (e, c) in raw {
            match t.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => t.push((e, c)),
            }
        }
        t.retain(|(_, c)| !c.is_zero());
        Poly { terms: t }
    }

    /// Dense coefficients, constant term first.
    pub fn from_coeffs(c: &[i64]) -> Self {
        Poly::new(c.iter().enumerate().map(|(i, &v)| (i as u64, BigInt::from(v))))
    }

    /// `x^(k+1) - 2x^k + 1`, whose root in `(2(1 - 2^-k), 2)` is the dominant
    /// root of the k-bonacci characteristic polynomial.
    pub fn kbonacci_shifted(k: u64) -> Self {
        Poly::new([(k + 1, BigInt::one()), (k, BigInt::from(-2)), (0, BigInt::one())])
    }

    pub fn degree(&self) -> u64 {
        self.terms.first().map(|t| t.0).unwrap_or(0)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.terms
                .iter()
                .filter(|(e, _)| *e > 0)
                .map(|(e, c)| (e - 1, c * BigInt::from(*e))),
        )
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let (n, d) = self.eval_homogeneous(x);
        BigRational::new(n, d)
    }

    /// `(d^D p(n/d), d^D)` for `x = n/d` in lowest terms and `D` the degree;
    /// integer only, so the sign test avoids rational normalization.
    fn eval_homogeneous(&self, x: &BigRational) -> (BigInt, BigInt) {
        let deg = self.degree() as usize;
        let (n, d) = (x.numer(), x.denom());
        let num = self
            .terms
            .iter()
            .map(|(e, c)| c * num_traits::pow(n.clone(), *e as usize) * num_traits::pow(d.clone(), deg - *e as usize))
            .fold(BigInt::zero(), |a, b| a + b);
        (num, num_traits::pow(d.clone(), deg))
    }

    pub fn eval_ball(&self, x: &RealBall) -> RealBall {
        let mut acc = RealBall::from_int(0, x.prec());
        for (e, c) in &self.terms {
            acc = acc.add(&x.powi(*e).mul_int(c));
        }
        acc
    }

    /// Unverified value at a dyadic point, rounded to `prec` bits.
    fn eval_approx(&self, x: &Dyadic, prec: u64) -> Dyadic {
        self.eval_ball(&RealBall::exact(x.clone(), prec)).mid().clone()
    }
}

fn sign_at(p: &Poly, x: &Dyadic, prec: u64) -> Option<i8> {
    let v = p.eval_ball(&RealBall::exact(x.clone(), prec));
    if v.is_positive() {
        Some(1)
    } else if v.is_negative() {
        Some(-1)
    } else {
        None
    }
}

fn rational_sign(q: &BigInt) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

/// A ball of radius at most `target` around the unique simple root of `p` in
/// the open interval `(lo, hi)`. The enclosure is certified by strict opposite
/// signs of `p` at the two ball endpoints.
pub fn refine_root(
    p: &Poly,
    lo: &BigRational,
    hi: &BigRational,
    target: &Dyadic,
    policy: &PrecisionPolicy,
) -> Result<RealBall, NumericsError> {
    let bracket_err = || NumericsError::Bracket {
        lo: lo.to_string(),
        hi: hi.to_string(),
    };
    let s_lo = rational_sign(&p.eval_homogeneous(lo).0);
    let s_hi = rational_sign(&p.eval_homogeneous(hi).0);
    if s_lo == 0 || s_hi == 0 || s_lo == s_hi {
        return Err(bracket_err());
    }
    assert!(target.is_positive(), "target radius must be positive");
    let deg_bits = 64 - p.degree().leading_zeros() as u64;
    let need = (-target.magnitude()).max(0) as u64 + 2 * deg_bits + 32;
    let dp = p.derivative();

    let mut prec = need.max(policy.start);
    loop {
        if let Some(b) = try_refine(p, &dp, lo, hi, s_lo, target, prec) {
            return Ok(b);
        }
        if prec * 2 > policy.cap.max(need * 2) {
            return Err(NumericsError::PrecisionCap {
                cap: policy.cap,
                what: "root refinement".into(),
            });
        }
        prec *= 2;
    }
}

fn try_refine(
    p: &Poly,
    dp: &Poly,
    lo: &BigRational,
    hi: &BigRational,
    s_lo: i8,
    target: &Dyadic,
    prec: u64,
) -> Option<RealBall> {
    // working bracket in dyadics strictly inside (lo, hi)
    let mut a = Dyadic::from_rational(lo, prec, Round::Ceil);
    let mut b = Dyadic::from_rational(hi, prec, Round::Floor);
    let mut x = a.add(&b).shl(-1).round(prec, Round::Floor);
    let step_floor = Dyadic::pow2(x.magnitude().max(0) - prec as i64 + 4);
    for _ in 0..(4 * prec + 64) {
        // keep the bracket by sign tests at the current iterate
        match sign_at(p, &x, prec) {
            Some(s) if s == s_lo => a = x.clone(),
            Some(_) => b = x.clone(),
            None => break,
        }
        let fx = p.eval_approx(&x, prec);
        let dfx = dp.eval_approx(&x, prec);
        let newton = if dfx.is_zero() {
            None
        } else {
            let step = Dyadic::div_round(&fx, &dfx, prec, Round::Floor);
            let nx = x.sub(&step).round(prec, Round::Floor);
            if a < nx && nx < b {
                Some((nx, step.abs()))
            } else {
                None
            }
        };
        let (nx, step) = match newton {
            Some(v) => v,
            None => {
                let m = a.add(&b).shl(-1).round(prec, Round::Floor);
                let w = b.sub(&a);
                (m, w)
            }
        };
        x = nx;
        if step <= step_floor || b.sub(&a) <= *target {
            break;
        }
    }
    // shrink the radius geometrically from the bracket width toward the floor
    let mut r = target.clone().min(b.sub(&a).max(step_floor.clone()));
    for _ in 0..8 {
        let l = x.sub(&r);
        let u = x.add(&r);
        let sl = sign_at(p, &l, prec);
        let su = sign_at(p, &u, prec);
        if let (Some(sl), Some(su)) = (sl, su) {
            if sl == s_lo && su == -s_lo {
                let ball = RealBall::new(x.clone(), r.clone(), prec);
                return (ball.rad() <= target).then_some(ball);
            }
        }
        r = r.shl(-1);
        if r < step_floor {
            break;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn golden_ratio() {
        let p = Poly::from_coeffs(&[-1, -1, 1]);
        let b = refine_root(
            &p,
            &rat(1, 1),
            &rat(2, 1),
            &Dyadic::pow2(-70),
            &PrecisionPolicy::default(),
        )
        .unwrap();
        assert!((b.to_f64() - 1.618_033_988_749_895).abs() < 1e-15);
        assert!(b.rad() <= &Dyadic::pow2(-70));
        let sq = b.mul(&b).sub(&b).sub(&RealBall::from_int(1, 128));
        assert!(sq.contains_zero());
    }

    #[test]
    fn tetranacci_root() {
        let p = Poly::kbonacci_shifted(4);
        let b = refine_root(
            &p,
            &rat(15, 8),
            &rat(2, 1),
            &Dyadic::pow2(-40),
            &PrecisionPolicy::default(),
        )
        .unwrap();
        assert!((b.to_f64() - 1.927_561_975_482_925).abs() < 1e-12);
    }

    #[test]
    fn bracket_without_root() {
        let p = Poly::from_coeffs(&[-4, 0, 1]);
        let r = refine_root(
            &p,
            &rat(1, 1),
            &rat(3, 2),
            &Dyadic::pow2(-20),
            &PrecisionPolicy::default(),
        );
        assert!(matches!(r, Err(NumericsError::Bracket { .. })));
    }

    #[test]
    fn large_k_root_is_close_to_two() {
        let k = 300;
        let p = Poly::kbonacci_shifted(k);
        let lo =
            BigRational::from_integer(2.into()) * (BigRational::one() - BigRational::new(1.into(), BigInt::one() << k));
        let target = Dyadic::pow2(-(k as i64) - 200);
        let b = refine_root(&p, &lo, &rat(2, 1), &target, &PrecisionPolicy::default()).unwrap();
        let two_minus = RealBall::from_int(2, 1000).sub(&b);
        assert!(two_minus.is_positive());
        assert!(two_minus.accuracy_bits() > 150);
    }
}
