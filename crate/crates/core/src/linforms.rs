//! Lower bounds for linear forms in logarithms and the explicit bound
//! formulas derived from them, evaluated in ball arithmetic and rounded in
//! the conservative direction.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::numerics::{Dyadic, RealBall};

const PREC: u64 = 128;

fn ratio(n: i64, d: i64) -> RealBall {
    RealBall::from_rational(&BigRational::new(n.into(), d.into()), PREC)
}

fn int(n: u64) -> RealBall {
    RealBall::from_int(n, PREC)
}

fn ln(x: &RealBall) -> Result<RealBall> {
    Ok(x.log()?)
}

/// Inputs of Matveev's bound for `Lambda = g_1^b_1 ... g_t^b_t - 1`.
#[derive(Clone, Debug)]
pub struct MatveevInputs {
    pub t: u32,
    pub degree: u64,
    pub b: RealBall,
    pub a: Vec<RealBall>,
}

/// `-1.4 * 30^(t+3) * t^4.5 * D^2 (1 + log D)(1 + log B) A_1 ... A_t`,
/// rounded down.
pub fn matveev_lower_bound(inp: &MatveevInputs) -> Result<Dyadic> {
    let min_a = ratio(16, 100);
    if inp.t < 1 || inp.a.len() != inp.t as usize {
        return Err(Error::Domain(format!(
            "need t >= 1 and exactly t values A_i (t={})",
            inp.t
        )));
    }
    if inp.degree < 1 {
        return Err(Error::Domain("field degree must be at least 1".into()));
    }
    if inp.b.lt(&int(1)) {
        return Err(Error::Domain("B must be at least 1".into()));
    }
    if inp.a.iter().any(|a| a.lt(&min_a)) {
        return Err(Error::Domain("every A_i must be at least 0.16".into()));
    }
    let t = int(inp.t as u64);
    let d = int(inp.degree);
    let t45 = t.powi(4).mul(&t.sqrt()?);
    let mut c = ratio(14, 10)
        .mul(&int(30).powi(inp.t as u64 + 3))
        .mul(&t45)
        .mul(&d.sqr())
        .mul(&int(1).add(&ln(&d)?))
        .mul(&int(1).add(&ln(&inp.b)?));
    for a in &inp.a {
        c = c.mul(a);
    }
    Ok(c.upper().neg())
}

/// Inputs of the Laurent–Mignotte–Nesterenko bound for two logarithms.
#[derive(Clone, Debug)]
pub struct LmnInputs {
    pub degree: u64,
    pub log_b1: RealBall,
    pub log_b2: RealBall,
    pub bprime: RealBall,
}

/// `-24.34 D^4 (max{log b' + 0.14, 21/D, 1/2})^2 log B_1 log B_2`, rounded
/// down.
pub fn lmn_lower_bound(inp: &LmnInputs) -> Result<Dyadic> {
    let d = int(inp.degree);
    let inv_d = int(1).div(&d)?;
    if inp.log_b1.lt(&inv_d) || inp.log_b2.lt(&inv_d) {
        return Err(Error::Domain("log B_i must be at least 1/D".into()));
    }
    if !inp.bprime.is_positive() {
        return Err(Error::Domain("b' must be positive".into()));
    }
    let e_top = lmn_max_term(inp)?;
    let c = ratio(2434, 100)
        .mul(&d.powi(4))
        .mul(&RealBall::exact(e_top.clone(), PREC).sqr())
        .mul(&inp.log_b1)
        .mul(&inp.log_b2);
    Ok(c.upper().neg())
}

/// Upper endpoint of `max{log b' + 0.14, 21/D, 1/2}`.
pub fn lmn_max_term(inp: &LmnInputs) -> Result<Dyadic> {
    let d = int(inp.degree);
    let first = ln(&inp.bprime)?.add(&ratio(14, 100));
    let second = int(21).div(&d)?;
    Ok(first.upper().max(second.upper()).max(Dyadic::pow2(-1)))
}

/// `2^m T (log T)^m`, valid when `T > (4 m^2)^m`; rounded up.
pub fn guzman_luca_bound(m: u32, t: &RealBall) -> Result<Dyadic> {
    if m < 1 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    let threshold = int(4 * (m as u64) * (m as u64)).powi(m as u64);
    if !threshold.lt(t) {
        return Err(Error::Domain(format!("T must exceed (4m^2)^m = {}", threshold.mid())));
    }
    let v = int(2).powi(m as u64).mul(t).mul(&ln(t)?.powi(m as u64));
    Ok(v.upper())
}

/// Absolute bounds in terms of k alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundTable {
    pub k: u64,
    pub m1_max: BigInt,
    pub m2_max: BigInt,
    pub n2_max: BigInt,
}

fn ceil_of(x: &RealBall) -> BigInt {
    x.upper().ceil()
}

/// `ceil` of `3.6e5 k^3 (log k)^3`, `4.1e22 k^7 (log k)^6` and
/// `8.2e14 k^4 (log k)^3`.
pub fn bound_tables(k: u64) -> Result<BoundTable> {
    if k < 4 {
        return Err(Error::Domain("bound tables need k >= 4".into()));
    }
    let kb = int(k);
    let lk = ln(&kb)?;
    let pow10 = |e: u32| RealBall::from_int(BigInt::from(10).pow(e), PREC);
    let m1 = ratio(36, 10).mul(&pow10(5)).mul(&kb.powi(3)).mul(&lk.powi(3));
    let m2 = ratio(41, 10).mul(&pow10(22)).mul(&kb.powi(7)).mul(&lk.powi(6));
    let n2 = ratio(82, 10).mul(&pow10(14)).mul(&kb.powi(4)).mul(&lk.powi(3));
    Ok(BoundTable {
        k,
        m1_max: ceil_of(&m1),
        m2_max: ceil_of(&m2),
        n2_max: ceil_of(&n2),
    })
}

/// `1.7e13 k^4 (log k)^2 (1 + log m)`, the bound on n for a single
/// coincidence `x_n = F_m^(k)`; rounded up.
pub fn n_bound_single(k: u64, m: u64) -> Result<Dyadic> {
    if k < 2 || m < 2 {
        return Err(Error::Domain("need k >= 2 and m >= 2".into()));
    }
    let kb = int(k);
    let v = ratio(17, 10)
        .mul(&RealBall::from_int(BigInt::from(10).pow(13), PREC))
        .mul(&kb.powi(4))
        .mul(&ln(&kb)?.sqr())
        .mul(&int(1).add(&ln(&int(m))?));
    Ok(v.upper())
}

/// The Matveev inputs used for a single coincidence: `t = 3`, `D = 2k`,
/// `B = m`, `A = [k log delta, 8 k log k, 2 log 2]`.
pub fn single_coincidence_inputs(k: u64, m: u64, log_delta: &RealBall) -> Result<MatveevInputs> {
    let kb = int(k);
    let a1 = kb.mul(log_delta);
    let a2 = int(8).mul(&kb).mul(&ln(&kb)?);
    let a3 = int(2).mul(&ln(&int(2))?);
    Ok(MatveevInputs {
        t: 3,
        degree: 2 * k,
        b: int(m),
        a: vec![a1, a2, a3],
    })
}
