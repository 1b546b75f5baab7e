use num_bigint::BigInt;
use num_traits::One;

use super::cf::{cf_expand, CfExpansion};
use super::RealSource;
use crate::error::{Error, Result};
use crate::numerics::{certified_nearest_distance, PrecisionPolicy, RealBall};

/// The inequality `0 < |u tau - v + mu| < A B^-w` with `u <= M`.
pub struct ReductionInstance<'a> {
    pub tau: &'a dyn RealSource,
    pub mu: &'a dyn RealSource,
    pub a: RealBall,
    pub b: RealBall,
    pub m: BigInt,
}

/// A successful reduction: no solution has `u <= M` and `w >= w_bound`.
#[derive(Clone, Debug)]
pub struct ReductionOutcome {
    /// Index `j` of the convergent denominator `q_j` that was used.
    pub index: usize,
    pub q: BigInt,
    /// `||mu q|| - M ||tau q||`, certified positive.
    pub epsilon: RealBall,
    /// `1 + floor(log(A q / epsilon) / log B)`.
    pub w_bound: BigInt,
    /// Convergents tried, including the successful one.
    pub attempts: usize,
    pub precision: u64,
}

/// Verdict for one convergent denominator.
#[derive(Clone, Debug)]
pub enum DpStep {
    Success {
        epsilon: RealBall,
        w_bound: BigInt,
        precision: u64,
    },
    /// `epsilon <= 0` certified at two precisions.
    NonPositive { epsilon: RealBall },
    /// Not decided below the precision cap.
    Ambiguous,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Verdict {
    Success(BigInt),
    NonPositive,
    Undecided,
}

fn verdict(inst: &ReductionInstance, q: &BigInt, p: u64) -> Result<(Verdict, RealBall)> {
    let eff = p + q.bits() + inst.m.bits() + 32;
    let tau = inst.tau.eval(eff)?;
    let mu = inst.mu.eval(eff)?;
    let (dm, amb_mu) = certified_nearest_distance(&mu.mul_int(q));
    let (dt, amb_tau) = certified_nearest_distance(&tau.mul_int(q));
    let eps = dm.sub(&dt.mul_int(&inst.m));
    if amb_mu || amb_tau {
        return Ok((Verdict::Undecided, eps));
    }
    if eps.is_positive() {
        let aq = inst.a.mul_int(q).with_prec(eff);
        let v = aq.div(&eps)?.log()?.div(&inst.b.with_prec(eff).log()?)?;
        return Ok(match v.floor_certain() {
            Some(f) => (Verdict::Success(f + 1), eps),
            None => (Verdict::Undecided, eps),
        });
    }
    if !eps.upper().is_positive() {
        return Ok((Verdict::NonPositive, eps));
    }
    Ok((Verdict::Undecided, eps))
}

/// Evaluate the reduction at one convergent denominator `q`, with the
/// verdict confirmed at precisions `p` and `2p`.
pub fn dujella_petho_at(inst: &ReductionInstance, q: &BigInt, policy: &PrecisionPolicy) -> Result<DpStep> {
    let mut cached: Option<(u64, Verdict, RealBall)> = None;
    for (p, p2) in policy.ladder() {
        let (v1, _) = match cached.take() {
            Some((cp, v, e)) if cp == p => (v, e),
            _ => verdict(inst, q, p)?,
        };
        let (v2, e2) = verdict(inst, q, p2)?;
        if v1 == v2 {
            match v2 {
                Verdict::Success(w) => {
                    return Ok(DpStep::Success {
                        epsilon: e2,
                        w_bound: w,
                        precision: p2,
                    })
                }
                Verdict::NonPositive => return Ok(DpStep::NonPositive { epsilon: e2 }),
                Verdict::Undecided => {}
            }
        }
        cached = Some((p2, v2, e2));
    }
    Ok(DpStep::Ambiguous)
}

fn check_instance(inst: &ReductionInstance, policy: &PrecisionPolicy) -> Result<()> {
    if !inst.a.is_positive() {
        return Err(Error::Domain("A must be positive".into()));
    }
    if !RealBall::from_int(1, 64).lt(&inst.b) {
        return Err(Error::Domain("B must exceed 1".into()));
    }
    if inst.m < BigInt::one() {
        return Err(Error::Domain("M must be at least 1".into()));
    }
    let mu = inst.mu.eval(policy.start)?;
    if mu.is_exact() && mu.mid().is_zero() {
        return Err(Error::Reduction("mu = 0, the lemma does not apply".into()));
    }
    Ok(())
}

/// Run the reduction starting at convergent `q_index` of `tau`, moving to the
/// first denominator above `6M` and then up the convergent ladder (at most
/// `ladder` further convergents) until `epsilon > 0` is certified.
pub fn dujella_petho(
    inst: &ReductionInstance,
    q_index: usize,
    ladder: usize,
    policy: &PrecisionPolicy,
) -> Result<ReductionOutcome> {
    check_instance(inst, policy)?;
    let six_m = &inst.m * 6;
    let mut cf: CfExpansion = cf_expand(inst.tau, q_index + 8, policy)?;
    let ensure = |cf: &mut CfExpansion, j: usize| -> Result<()> {
        if cf.certified_depth() < j {
            if cf.terminated {
                return Err(Error::Reduction("tau is rational; its expansion ended".into()));
            }
            *cf = cf_expand(inst.tau, j + 16, policy)?;
        }
        Ok(())
    };
    let mut j = q_index;
    ensure(&mut cf, j)?;
    while cf.q(j) <= &six_m {
        j += 1;
        ensure(&mut cf, j)?;
    }
    let first = j;
    let mut last = String::new();
    for attempt in 0..=ladder {
        ensure(&mut cf, j)?;
        let q = cf.q(j).clone();
        match dujella_petho_at(inst, &q, policy)? {
            DpStep::Success {
                epsilon,
                w_bound,
                precision,
            } => {
                return Ok(ReductionOutcome {
                    index: j,
                    q,
                    epsilon,
                    w_bound,
                    attempts: attempt + 1,
                    precision,
                })
            }
            DpStep::NonPositive { epsilon } => last = format!("epsilon = {epsilon:?} at q_{j}"),
            DpStep::Ambiguous => last = format!("epsilon undecided at q_{j}"),
        }
        j += 1;
    }
    Err(Error::Reduction(format!(
        "no convergent from q_{first} to q_{} gave epsilon > 0 ({last})",
        j - 1
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Dyadic;

    fn sqrt2(p: u64) -> Result<RealBall> {
        Ok(RealBall::from_int(2, p).sqrt()?)
    }

    fn sqrt3m1(p: u64) -> Result<RealBall> {
        Ok(RealBall::from_int(3, p).sqrt()?.sub(&RealBall::from_int(1, p)))
    }

    fn zero(p: u64) -> Result<RealBall> {
        Ok(RealBall::from_int(0, p))
    }

    #[test]
    fn small_instance_against_exhaustive_search() {
        let pol = PrecisionPolicy::default();
        let inst = ReductionInstance {
            tau: &sqrt2,
            mu: &sqrt3m1,
            a: RealBall::from_int(10, 64),
            b: RealBall::from_int(2, 64),
            m: BigInt::from(100),
        };
        let out = dujella_petho(&inst, 0, 200, &pol).unwrap();
        assert!(out.q > BigInt::from(600));
        assert!(out.epsilon.is_positive());
        // |u sqrt2 - v + mu| >= A 2^-w* for all u <= M, so no w >= w* works
        let w: u32 = out.w_bound.try_into().unwrap();
        let rhs = 10.0 * 2f64.powi(-(w as i32));
        for u in 1..=100 {
            let x = u as f64 * 2f64.sqrt() + 3f64.sqrt() - 1.0;
            let v = x.round();
            assert!((x - v).abs() >= rhs, "u={u}");
        }
    }

    #[test]
    fn zero_mu_is_rejected() {
        let inst = ReductionInstance {
            tau: &sqrt2,
            mu: &zero,
            a: RealBall::from_int(10, 64),
            b: RealBall::from_int(2, 64),
            m: BigInt::from(100),
        };
        let r = dujella_petho(&inst, 0, 10, &PrecisionPolicy::default());
        assert!(matches!(r, Err(Error::Reduction(_))));
    }

    #[test]
    fn bad_parameters() {
        let inst = ReductionInstance {
            tau: &sqrt2,
            mu: &sqrt3m1,
            a: RealBall::from_int(10, 64),
            b: RealBall::exact(Dyadic::one(), 64),
            m: BigInt::from(100),
        };
        assert!(matches!(
            dujella_petho(&inst, 0, 10, &PrecisionPolicy::default()),
            Err(Error::Domain(_))
        ));
    }
}
