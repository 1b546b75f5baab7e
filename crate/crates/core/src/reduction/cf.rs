use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::RealSource;
use crate::error::{Error, Result};
use crate::numerics::{NumericsError, PrecisionPolicy, RealBall};

/// Partial quotients `a_0, ..., a_L` of a real number, each certified by two
/// balls at precisions `p` and `2p`, with the convergents `p_j / q_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfExpansion {
    pub quotients: Vec<BigInt>,
    pub convergents: Vec<(BigInt, BigInt)>,
    /// Higher of the two precisions that certified the quotients.
    pub precision: u64,
    /// The number was certified rational and its expansion ended early.
    pub terminated: bool,
}

impl CfExpansion {
    pub fn certified_depth(&self) -> usize {
        self.quotients.len().saturating_sub(1)
    }

    pub fn q(&self, j: usize) -> &BigInt {
        &self.convergents[j].1
    }

    pub fn p(&self, j: usize) -> &BigInt {
        &self.convergents[j].0
    }
}

/// Convergents `(p_j, q_j)` of a list of partial quotients.
pub fn convergents(quotients: &[BigInt]) -> Vec<(BigInt, BigInt)> {
    let (mut p0, mut p1) = (BigInt::zero(), BigInt::one());
    let (mut q0, mut q1) = (BigInt::one(), BigInt::zero());
    quotients
        .iter()
        .map(|a| {
            let p = a * &p1 + &p0;
            let q = a * &q1 + &q0;
            p0 = std::mem::replace(&mut p1, p.clone());
            q0 = std::mem::replace(&mut q1, q.clone());
            (p, q)
        })
        .collect()
}

/// Full expansion of a rational number.
pub fn cf_of_rational(x: &BigRational) -> Vec<BigInt> {
    let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
    let mut out = Vec::new();
    while !d.is_zero() {
        let (a, r) = n.div_mod_floor(&d);
        out.push(a);
        n = std::mem::replace(&mut d, r);
    }
    out
}

/// Quotients shared by every point of the ball, up to `limit` of them.
/// Returns `(quotients, terminated)` where `terminated` means the ball is an
/// exact rational whose expansion ended within the limit.
fn ball_quotients(b: &RealBall, limit: usize) -> (Vec<BigInt>, bool) {
    if b.is_exact() {
        let q = cf_of_rational(&b.mid().to_rational());
        if q.len() <= limit {
            return (q, true);
        }
        return (q.into_iter().take(limit).collect(), false);
    }
    let lo = b.lower().to_rational();
    let hi = b.upper().to_rational();
    let (mut ln, mut ld) = (lo.numer().clone(), lo.denom().clone());
    let (mut hn, mut hd) = (hi.numer().clone(), hi.denom().clone());
    let mut out = Vec::new();
    // the interval [ln/ld, hn/hd] swaps ends after every inversion
    while out.len() < limit {
        let (a, lr) = ln.div_mod_floor(&ld);
        let (a2, hr) = hn.div_mod_floor(&hd);
        if a != a2 || lr.is_zero() || hr.is_zero() {
            break;
        }
        out.push(a);
        let (nl, nld) = (hd, hr);
        let (nh, nhd) = (ld, lr);
        ln = nl;
        ld = nld;
        hn = nh;
        hd = nhd;
    }
    (out, false)
}

fn common_prefix(a: &[BigInt], b: &[BigInt]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Certified quotients `a_0..a_depth` of `tau`. A quotient is accepted only
/// when the balls at `p` and `2p` both pin it down and agree; otherwise the
/// precision doubles until the policy cap.
pub fn cf_expand(tau: &dyn RealSource, depth: usize, policy: &PrecisionPolicy) -> Result<CfExpansion> {
    let want = depth + 1;
    let mut cached: Option<(u64, RealBall)> = None;
    for (p, p2) in policy.ladder() {
        let b1 = match cached.take() {
            Some((cp, b)) if cp == p => b,
            _ => tau.eval(p)?,
        };
        let b2 = tau.eval(p2)?;
        let (q1, t1) = ball_quotients(&b1, want);
        let (q2, t2) = ball_quotients(&b2, want);
        let n = common_prefix(&q1, &q2);
        if t1 && t2 && q1 == q2 {
            let conv = convergents(&q1);
            return Ok(CfExpansion {
                quotients: q1,
                convergents: conv,
                precision: p2,
                terminated: true,
            });
        }
        if n >= want {
            let q: Vec<BigInt> = q2.into_iter().take(want).collect();
            let conv = convergents(&q);
            return Ok(CfExpansion {
                quotients: q,
                convergents: conv,
                precision: p2,
                terminated: false,
            });
        }
        cached = Some((p2, b2));
    }
    Err(NumericsError::PrecisionCap {
        cap: policy.cap,
        what: format!("continued fraction to depth {depth}"),
    }
    .into())
}

/// If `|tau - x/y| < 1/(2 y^2)` is certified, the index `j` with
/// `x/y = p_j/q_j`; `None` when the inequality is certified false.
pub fn legendre_locate(
    tau: &dyn RealSource,
    x: &BigInt,
    y: &BigInt,
    policy: &PrecisionPolicy,
) -> Result<Option<usize>> {
    if !y.is_positive() {
        return Err(Error::Domain("y must be positive".into()));
    }
    let r = BigRational::new(x.clone(), y.clone());
    let (x, y) = (r.numer().clone(), r.denom().clone());
    let bound = BigRational::new(BigInt::one(), BigInt::from(2) * &y * &y);
    let extra = 2 * y.bits() + 16;
    let inside = policy.certify("Legendre criterion", |p| -> Result<Option<bool>> {
        let t = tau.eval(p + extra)?;
        let d = t.sub(&RealBall::from_rational(&r, p + extra)).abs();
        let bb = RealBall::from_rational(&bound, p + extra);
        Ok(if d.lt(&bb) {
            Some(true)
        } else if d.lower() >= bb.upper() {
            Some(false)
        } else {
            None
        })
    })?;
    if !inside {
        return Ok(None);
    }
    // q_j >= F_(j+1) grows at least like the golden ratio
    let depth = (y.bits() as f64 * 1.45) as usize + 3;
    let cf = cf_expand(tau, depth, policy)?;
    Ok(cf.convergents.iter().position(|(p, q)| *p == x && *q == y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2(p: u64) -> Result<RealBall> {
        Ok(RealBall::from_int(2, p).sqrt()?)
    }

    fn phi(p: u64) -> Result<RealBall> {
        let s = RealBall::from_int(5, p).sqrt()?;
        Ok(s.add(&RealBall::from_int(1, p)).shl(-1))
    }

    fn pi(p: u64) -> Result<RealBall> {
        Ok(RealBall::pi(p))
    }

    #[test]
    fn classical_expansions() {
        let pol = PrecisionPolicy::default();
        let cf = cf_expand(&sqrt2, 40, &pol).unwrap();
        assert_eq!(cf.quotients[0], BigInt::one());
        assert!(cf.quotients[1..].iter().all(|a| *a == BigInt::from(2)));
        let cf = cf_expand(&phi, 60, &pol).unwrap();
        assert!(cf.quotients.iter().all(|a| a.is_one()));
        let cf = cf_expand(&pi, 4, &pol).unwrap();
        let want: Vec<BigInt> = [3, 7, 15, 1, 292].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(cf.quotients, want);
    }

    #[test]
    fn convergent_identities() {
        let cf = cf_expand(&pi, 30, &PrecisionPolicy::default()).unwrap();
        for j in 1..cf.convergents.len() {
            let (p1, q1) = &cf.convergents[j - 1];
            let (p, q) = &cf.convergents[j];
            let det = p * q1 - p1 * q;
            // p_j q_(j-1) - p_(j-1) q_j = (-1)^(j-1)
            let want = if j % 2 == 1 { 1 } else { -1 };
            assert_eq!(det, BigInt::from(want));
        }
    }

    #[test]
    fn rational_terminates() {
        let near = |p: u64| -> Result<RealBall> {
            Ok(RealBall::from_rational(
                &BigRational::new(BigInt::from(22), BigInt::from(7)),
                p,
            ))
        };
        // 22/7 is not dyadic, so its ball is never exact and the expansion stalls
        assert!(cf_expand(&near, 5, &PrecisionPolicy::new(64, 512)).is_err());
        let exact = |p: u64| -> Result<RealBall> { Ok(RealBall::from_int(3, p).shl(-3)) };
        let cf = cf_expand(&exact, 10, &PrecisionPolicy::default()).unwrap();
        assert!(cf.terminated);
        assert_eq!(
            cf.quotients,
            vec![BigInt::zero(), BigInt::from(2), BigInt::from(1), BigInt::from(2)]
        );
    }

    #[test]
    fn legendre_examples() {
        let pol = PrecisionPolicy::default();
        assert_eq!(legendre_locate(&pi, &22.into(), &7.into(), &pol).unwrap(), Some(1));
        assert_eq!(legendre_locate(&sqrt2, &3.into(), &2.into(), &pol).unwrap(), Some(1));
        assert_eq!(legendre_locate(&sqrt2, &4.into(), &3.into(), &pol).unwrap(), None);
    }
}
