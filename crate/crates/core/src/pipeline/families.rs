use num_bigint::BigInt;
use num_traits::One;

use super::records::{Provenance, SolutionRecord};
use crate::error::{Error, Result};
use crate::kfib::kcontext;
use crate::numerics::{PrecisionPolicy, RealBall};
use crate::pell::delta_ball;

fn pow2(e: u64) -> BigInt {
    BigInt::one() << e
}

fn family_err(e: Error) -> Error {
    match e {
        Error::Consistency(s) => Error::Family(s),
        other => other,
    }
}

/// Family (i): `x1 = 2^((k-1)/2) = F_((k+3)/2)^(k)` and
/// `x2 = 2 x1^2 - 1 = 2^k - 1 = F_(k+2)^(k)` with `eps = +1`.
pub fn verify_family_i(k: u64) -> Result<(SolutionRecord, SolutionRecord)> {
    if k < 5 || k.is_multiple_of(2) {
        return Err(Error::Domain(format!("family (i) needs odd k >= 5, got {k}")));
    }
    let x1 = pow2((k - 1) / 2);
    let r1 = SolutionRecord::new(k, 1, (k + 3) / 2, x1.clone(), 1, Provenance::SporadicN1).map_err(family_err)?;
    let r2 = SolutionRecord::new(k, 2, k + 2, x1.clone(), 1, Provenance::FamilyI).map_err(family_err)?;
    let want = pow2(k) - 1;
    if r2.value != want || r2.value != BigInt::from(2) * &x1 * &x1 - 1 {
        return Err(Error::Family(format!("x_2 = {} is not 2^{k} - 1", r2.value)));
    }
    Ok((r1, r2))
}

/// `(k, m1, m2)` of family (ii) for parameter `a`.
pub fn family_ii_params(a: u32) -> (u64, u64, u64) {
    let p = 1u64 << a;
    let a = a as u64;
    (3 * 2 * p + 3 * a - 5, 3 * p + a - 1, 9 * p + 3 * a - 5)
}

/// Family (ii): with `(k, m1, m2)` from [`family_ii_params`],
/// `x1 = 2^(m1-2) = F_m1^(k)` and `x3 = 4 x1^3 - 3 x1 = F_m2^(k)`, `eps = +1`.
pub fn verify_family_ii(a: u32) -> Result<(SolutionRecord, SolutionRecord)> {
    if !(1..=40).contains(&a) {
        return Err(Error::Domain(format!("family (ii) needs 1 <= a <= 40, got {a}")));
    }
    let (k, m1, m2) = family_ii_params(a);
    let x1 = pow2(m1 - 2);
    let r1 = SolutionRecord::new(k, 1, m1, x1.clone(), 1, Provenance::SporadicN1).map_err(family_err)?;
    let r3 = SolutionRecord::new(k, 3, m2, x1.clone(), 1, Provenance::FamilyIi).map_err(family_err)?;
    if r3.value != BigInt::from(4) * &x1 * &x1 * &x1 - BigInt::from(3) * &x1 {
        return Err(Error::Family(format!("x_3 = {} is not 4 x1^3 - 3 x1", r3.value)));
    }
    Ok((r1, r3))
}

/// `|Gamma| = |n log delta - log(2 f_k(alpha)) - (m-1) log alpha|` and the
/// bound `3 / alpha^(m-1)` as balls with about `prec` bits after the
/// cancellation in `Gamma`.
pub fn gamma_balls(r: &SolutionRecord, prec: u64) -> Result<(RealBall, RealBall)> {
    // Gamma is of size alpha^-(m-1) while its terms are of size m
    let wp = prec + r.m + 64;
    let ctx = kcontext(r.k, wp)?;
    let p = ctx.alpha.prec();
    let log_delta = delta_ball(&r.x1, r.epsilon, p)?.log()?;
    let gamma = log_delta
        .mul_int(&BigInt::from(r.n))
        .sub(&ctx.log_2fk)
        .sub(&ctx.log_alpha.mul_int(&BigInt::from(r.m - 1)));
    let bound = RealBall::from_int(3, p).div(&ctx.alpha.powi(r.m - 1))?;
    Ok((gamma.abs(), bound))
}

/// Certified truth value of `|Gamma| < 3 / alpha^(m-1)` for a record.
pub fn check_gamma_inequality(r: &SolutionRecord, policy: &PrecisionPolicy) -> Result<bool> {
    policy.certify("Gamma inequality", |p| -> Result<Option<bool>> {
        let (g, b) = gamma_balls(r, p)?;
        Ok(if g.lt(&b) {
            Some(true)
        } else if b.upper() <= g.lower() {
            Some(false)
        } else {
            None
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_examples() {
        let (a, b) = verify_family_i(7).unwrap();
        assert_eq!(
            (a.value.clone(), a.m, b.value.clone(), b.m),
            (8.into(), 5, 127.into(), 9)
        );
        let (_, b) = verify_family_i(5).unwrap();
        assert_eq!(b.value, BigInt::from(31));
        assert!(verify_family_i(6).is_err());
        assert_eq!(family_ii_params(1), (10, 6, 16));
        let (a, b) = verify_family_ii(1).unwrap();
        assert_eq!((a.value.clone(), b.value.clone()), (16.into(), 16336.into()));
        assert_eq!(family_ii_params(2), (25, 13, 37));
    }

    #[test]
    fn gamma_examples() {
        let pol = PrecisionPolicy::default();
        for (k, n, m, x1) in [(5, 2, 7, 4), (7, 1, 5, 8)] {
            let r = SolutionRecord::new(k, n, m, x1.into(), 1, Provenance::from_index(n)).unwrap();
            assert!(check_gamma_inequality(&r, &pol).unwrap());
        }
        let r = SolutionRecord::new(4, 1, 2, 1.into(), -1, Provenance::SporadicN1).unwrap();
        assert!(check_gamma_inequality(&r, &pol).unwrap());
    }
}
