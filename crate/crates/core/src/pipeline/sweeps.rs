use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use super::report::{CellRecord, SweepReport};
use crate::error::{Error, Result};
use crate::kfib::{kcontext, KContext};
use crate::numerics::{Dyadic, PrecisionPolicy, RealBall};
use crate::pell::delta_ball;
use crate::reduction::{cf_expand, dujella_petho, RealSource, ReductionInstance};

/// A real source that remembers every precision it was asked for.
pub struct Memo<F> {
    f: F,
    cache: Mutex<HashMap<u64, RealBall>>,
}

impl<F: Fn(u64) -> Result<RealBall> + Sync> Memo<F> {
    pub fn new(f: F) -> Self {
        Memo {
            f,
            cache: Mutex::new(HashMap::new()),
        }
    }
}

impl<F: Fn(u64) -> Result<RealBall> + Sync + Send> RealSource for Memo<F> {
    fn eval(&self, prec: u64) -> Result<RealBall> {
        if let Some(b) = self.cache.lock().unwrap().get(&prec) {
            return Ok(b.clone());
        }
        let b = (self.f)(prec)?;
        self.cache.lock().unwrap().insert(prec, b.clone());
        Ok(b)
    }
}

/// Per-k contexts at each precision requested.
struct ContextCache {
    k: u64,
    cache: Mutex<HashMap<u64, Arc<KContext>>>,
}

impl ContextCache {
    fn new(k: u64) -> Self {
        ContextCache {
            k,
            cache: Mutex::new(HashMap::new()),
        }
    }

    fn get(&self, prec: u64) -> Result<Arc<KContext>> {
        if let Some(c) = self.cache.lock().unwrap().get(&prec) {
            return Ok(c.clone());
        }
        let c = Arc::new(kcontext(self.k, prec)?);
        self.cache.lock().unwrap().insert(prec, c.clone());
        Ok(c)
    }
}

/// A policy whose first rung already has `needed` bits, so that certified
/// expansions of known depth do not climb through hopeless precisions.
pub fn policy_for(base: &PrecisionPolicy, needed: u64) -> PrecisionPolicy {
    let start = base.start.max(needed);
    PrecisionPolicy::new(start, base.cap.max(4 * start))
}

/// Bits needed to certify `depth` partial quotients of a number whose
/// first quotients may be as large as `2^lead`.
fn cf_bits(depth: usize, lead: u64) -> u64 {
    4 * depth as u64 + lead + 128
}

fn grid_k(k_min: u64, k_max: u64) -> Result<()> {
    if k_min < 4 || k_min > k_max {
        return Err(Error::Domain(format!("need 4 <= k_min <= k_max, got {k_min}..{k_max}")));
    }
    Ok(())
}

/// `Q = max a_i` over `2 <= i <= depth` of the expansions of `chi_k`,
/// `k_min <= k <= k_max`, and a certified upper bound for `max chi_k^-1`.
pub fn sweep_chi_quotients(k_min: u64, k_max: u64, depth: usize, policy: &PrecisionPolicy) -> Result<SweepReport> {
    grid_k(k_min, k_max)?;
    if depth < 2 {
        return Err(Error::Domain("depth must be at least 2".into()));
    }
    let t0 = Instant::now();
    let name = "chi-quotients";
    let rows: Vec<(CellRecord, Option<Dyadic>, u64)> = (k_min..=k_max)
        .into_par_iter()
        .map(|k| {
            // chi_k is about k 2^-k, so a_1 alone takes about k bits
            let pol = policy_for(policy, cf_bits(depth, k));
            let ctx = ContextCache::new(k);
            let src = |p: u64| -> Result<RealBall> { Ok(ctx.get(p)?.chi.clone()) };
            let cell = cf_expand(&src, depth, &pol).and_then(|cf| {
                let q = cf.quotients[2..=depth].iter().max().cloned().unwrap();
                let inv = ctx.get(pol.start)?.chi.recip()?.upper();
                Ok((q, inv, cf.precision))
            });
            match cell {
                Ok((q, inv, prec)) => {
                    let detail = format!("chi^-1 < {}", inv.to_sci_string(6));
                    (CellRecord::ok(name, Some(k), None, None, q, detail), Some(inv), prec)
                }
                Err(e) => (CellRecord::failed(name, Some(k), None, None, e.to_string()), None, 0),
            }
        })
        .collect();
    let max_prec = rows.iter().map(|r| r.2).max().unwrap_or(0);
    let max_inv = rows.iter().filter_map(|r| r.1.clone()).max();
    let cells = rows.into_iter().map(|r| r.0).collect();
    let grid = format!("k={k_min}..{k_max} depth={depth}");
    let mut rep = SweepReport::from_cells(name, grid, cells, t0.elapsed().as_secs_f64(), max_prec);
    if let Some(inv) = max_inv {
        let ten148 = BigRational::from_integer(BigInt::from(10).pow(148));
        rep.extras.insert("max_chi_inv_upper".into(), inv.to_sci_string(12));
        rep.extras
            .insert("chi_inv_below_1e148".into(), (inv.to_rational() < ten148).to_string());
    }
    Ok(rep)
}

/// The signs swept for `x1 = 2^(m1-2)`: `m1 = 2` gives `x1 = 1`, whose only
/// genuine orbit has `eps = -1`.
pub fn delta_signs(m1: u64) -> &'static [i8] {
    if m1 == 2 {
        &[-1]
    } else {
        &[1, -1]
    }
}

fn delta_cells(m1_min: u64, m1_max: u64) -> Vec<(u64, i8)> {
    (m1_min..=m1_max)
        .flat_map(|m1| delta_signs(m1).iter().map(move |&e| (m1, e)))
        .collect()
}

/// `log delta` for `x1 = 2^(m1-2)`.
pub fn log_delta_pow2(m1: u64, eps: i8, prec: u64) -> Result<RealBall> {
    let x1 = BigInt::one() << (m1 - 2);
    Ok(delta_ball(&x1, eps, prec)?.log()?)
}

/// Maximum partial quotient `a_j`, `0 <= j <= depth`, of `log delta / log 2`
/// over `delta = 2^(m1-2) + sqrt(2^(2(m1-2)) - eps)`, `2 <= m1 <= m1_max`.
/// The detail of each cell also gives the maximum over `j >= 3`, which
/// leaves out the quotients forced by `delta` being close to `2^(m1-1)`.
pub fn sweep_delta_quotients(m1_max: u64, depth: usize, policy: &PrecisionPolicy) -> Result<SweepReport> {
    if m1_max < 2 || depth < 1 {
        return Err(Error::Domain("need m1_max >= 2 and depth >= 1".into()));
    }
    let t0 = Instant::now();
    let name = "delta-quotients";
    let rows: Vec<(CellRecord, u64, Option<BigInt>)> = delta_cells(2, m1_max)
        .into_par_iter()
        .map(|(m1, eps)| {
            // log delta / log 2 sits about 4^-m1 from the integer m1 - 1
            let pol = policy_for(policy, cf_bits(depth, 2 * m1));
            let src = |p: u64| -> Result<RealBall> {
                let ln2 = RealBall::from_int(2, p).log()?;
                Ok(log_delta_pow2(m1, eps, p)?.div(&ln2)?)
            };
            match cf_expand(&src, depth, &pol) {
                Ok(cf) => {
                    let all = cf.quotients.iter().max().cloned().unwrap();
                    let (j, tail) = cf
                        .quotients
                        .iter()
                        .enumerate()
                        .skip(3)
                        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
                        .map(|(j, a)| (j, a.clone()))
                        .unwrap_or((0, BigInt::from(0)));
                    let head: Vec<String> = cf.quotients.iter().take(3).map(|a| a.to_string()).collect();
                    let detail = format!("a_0..a_2 = [{}]; max a_j (j >= 3) = {tail} at j = {j}", head.join(", "));
                    let cell = CellRecord::ok(name, None, Some(m1), Some(eps), all, detail);
                    (cell, cf.precision, Some(tail))
                }
                Err(e) => (
                    CellRecord::failed(name, None, Some(m1), Some(eps), e.to_string()),
                    0,
                    None,
                ),
            }
        })
        .collect();
    let max_prec = rows.iter().map(|r| r.1).max().unwrap_or(0);
    let tail_max = rows.iter().filter_map(|r| r.2.clone()).max();
    let cells = rows.into_iter().map(|r| r.0).collect();
    let grid = format!("m1=2..{m1_max} eps=+-1 depth={depth}");
    let mut rep = SweepReport::from_cells(name, grid, cells, t0.elapsed().as_secs_f64(), max_prec);
    if let Some(t) = tail_max {
        rep.extras.insert("max_quotient_from_j3".into(), t.to_string());
    }
    Ok(rep)
}

/// Parameters of the reduction sweep.
#[derive(Clone, Debug)]
pub struct DpSweep {
    pub k_min: u64,
    pub k_max: u64,
    pub m1_min: u64,
    pub m1_max: u64,
    /// Index of the first convergent tried.
    pub q_index: usize,
    /// How many further convergents may be tried per cell.
    pub ladder: usize,
    pub m: BigInt,
}

impl DpSweep {
    /// `k` in `[4, k_max]`, `m1` in `[2, 221]`, `q_200`, `M = 1.3e28`.
    pub fn standard(k_max: u64) -> Self {
        DpSweep {
            k_min: 4,
            k_max,
            m1_min: 2,
            m1_max: 221,
            q_index: 200,
            ladder: 200,
            m: BigInt::from(13) * BigInt::from(10).pow(27),
        }
    }
}

/// `A = 3 / log 1.92` and `B = 1.92`.
pub fn dp_constants(prec: u64) -> Result<(RealBall, RealBall)> {
    let b = RealBall::from_rational(&BigRational::new(48.into(), 25.into()), prec);
    let a = RealBall::from_int(3, prec).div(&b.log()?)?;
    Ok((a, b))
}

/// For every `(k, m1, eps)` reduce
/// `|n tau - (m - 1) - mu| < A B^-(m-1)` with `tau = log delta / log alpha`,
/// `mu = log(2 f_k(alpha)) / log alpha`; the cell statistic is the bound
/// `1 + floor(log(A q / epsilon) / log B)` on `m - 1`.
pub fn sweep_dp(params: &DpSweep, policy: &PrecisionPolicy) -> Result<SweepReport> {
    grid_k(params.k_min, params.k_max)?;
    if params.m1_min < 2 || params.m1_min > params.m1_max {
        return Err(Error::Domain("need 2 <= m1_min <= m1_max".into()));
    }
    let t0 = Instant::now();
    let name = "dp";
    let (a, b) = dp_constants(256)?;
    let cells = delta_cells(params.m1_min, params.m1_max);
    let rows: Vec<Vec<(CellRecord, u64)>> = (params.k_min..=params.k_max)
        .into_par_iter()
        .map(|k| {
            let ctx = ContextCache::new(k);
            let pol = policy_for(policy, cf_bits(params.q_index + 16, 0));
            let mu = Memo::new(|p: u64| -> Result<RealBall> {
                let c = ctx.get(p)?;
                Ok(c.log_2fk.div(&c.log_alpha)?)
            });
            cells
                .iter()
                .map(|&(m1, eps)| {
                    let tau = Memo::new(|p: u64| -> Result<RealBall> {
                        let c = ctx.get(p)?;
                        Ok(log_delta_pow2(m1, eps, p)?.div(&c.log_alpha)?)
                    });
                    let inst = ReductionInstance {
                        tau: &tau,
                        mu: &mu,
                        a: a.clone(),
                        b: b.clone(),
                        m: params.m.clone(),
                    };
                    match dujella_petho(&inst, params.q_index, params.ladder, &pol) {
                        Ok(out) => {
                            let detail = format!(
                                "q_{} ({} digits), epsilon = {}",
                                out.index,
                                out.q.to_string().len(),
                                out.epsilon.lower().to_sci_string(6)
                            );
                            (
                                CellRecord::ok(name, Some(k), Some(m1), Some(eps), out.w_bound, detail),
                                out.precision,
                            )
                        }
                        Err(e) => (CellRecord::failed(name, Some(k), Some(m1), Some(eps), e.to_string()), 0),
                    }
                })
                .collect()
        })
        .collect();
    let rows: Vec<(CellRecord, u64)> = rows.into_iter().flatten().collect();
    let max_prec = rows.iter().map(|r| r.1).max().unwrap_or(0);
    let cells = rows.into_iter().map(|r| r.0).collect();
    let grid = format!(
        "k={}..{} m1={}..{} eps=+-1 q_{} M={}",
        params.k_min, params.k_max, params.m1_min, params.m1_max, params.q_index, params.m
    );
    Ok(SweepReport::from_cells(
        name,
        grid,
        cells,
        t0.elapsed().as_secs_f64(),
        max_prec,
    ))
}
