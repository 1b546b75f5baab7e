//! k-generalized Fibonacci numbers `F_m^(k)`: exact values by several
//! independent routes and certified per-k constants of the dominant root.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{refine_root, Dyadic, Poly, PrecisionPolicy, RealBall};

fn pow2(e: u64) -> BigInt {
    BigInt::one() << e
}

/// `F_m^(k)` from the k-term recurrence with a sliding window of the last
/// k values. Defined for `m >= 2 - k`: zero for `m <= 0`, and `F_1 = 1`.
pub fn kfib(k: u64, m: i64) -> BigInt {
    assert!(k >= 2, "k must be at least 2");
    assert!(m >= 2 - k as i64, "m below the start of the sequence");
    if m <= 0 {
        return BigInt::zero();
    }
    let mut window: VecDeque<BigInt> = VecDeque::with_capacity(k as usize);
    window.extend(std::iter::repeat_n(BigInt::zero(), k as usize - 1));
    window.push_back(BigInt::one());
    let mut sum = BigInt::one();
    for _ in 1..m {
        let next = sum.clone();
        sum += &next;
        sum -= window.pop_front().unwrap();
        window.push_back(next);
    }
    window.pop_back().unwrap()
}

/// `F_m^(k)` from `F_m = 2 F_(m-1) - F_(m-k-1)`, valid for `m >= 3`.
pub fn kfib_three_term(k: u64, m: i64) -> BigInt {
    assert!(k >= 2);
    if m <= 2 {
        return kfib(k, m);
    }
    let k = k as usize;
    let m = m as usize;
    // v[i] = F_(i - k + 1), so v[k] = F_1
    let mut v: Vec<BigInt> = vec![BigInt::zero(); k];
    v.push(BigInt::one());
    v.push(BigInt::one());
    for i in (k + 2)..=(m + k - 1) {
        let next = (&v[i - 1] << 1) - &v[i - k - 1];
        v.push(next);
    }
    v.pop().unwrap()
}

/// Exact values `F_m^(k)` for `1 <= m <= m_max`, built incrementally.
#[derive(Clone, Debug)]
pub struct KFibTable {
    k: u64,
    values: Vec<BigInt>,
}

impl KFibTable {
    pub fn new(k: u64, m_max: u64) -> Self {
        assert!(k >= 2);
        let mut values = vec![BigInt::zero(), BigInt::one()];
        for m in 2..=m_max as usize {
            let v = if m <= k as usize + 1 {
                pow2(m as u64 - 2)
            } else {
                let back = m - k as usize - 1;
                (&values[m - 1] << 1) - &values[back]
            };
            values.push(v);
        }
        KFibTable { k, values }
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn m_max(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    /// `F_m`, with zero for `m <= 0`.
    pub fn get(&self, m: i64) -> Option<&BigInt> {
        if m < 0 {
            return None;
        }
        self.values.get(m as usize)
    }

    /// `(m, F_m)` for `m >= 2`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, &BigInt)> {
        self.values.iter().enumerate().skip(2).map(|(m, v)| (m as u64, v))
    }
}

fn binom(a: i64, b: i64) -> BigInt {
    if a < 0 || b < 0 || a < b {
        BigInt::zero()
    } else {
        binomial(BigInt::from(a), BigInt::from(b))
    }
}

/// `C_(m,j) = (-1)^j [binom(m - jk, j) - binom(m - jk - 2, j - 2)]`.
pub fn cooper_howard_coeff(k: u64, m: i64, j: i64) -> BigInt {
    let k = k as i64;
    let c = binom(m - j * k, j) - binom(m - j * k - 2, j - 2);
    if j % 2 == 1 {
        -c
    } else {
        c
    }
}

/// `F_m^(k)` from the Cooper–Howard closed form, summed in exact rationals
/// and checked integral.
pub fn cooper_howard(k: u64, m: i64) -> Result<BigInt> {
    if k < 2 || m < 2 {
        return Err(Error::Domain(format!(
            "cooper_howard needs k >= 2, m >= 2 (k={k}, m={m})"
        )));
    }
    let ki = k as i64;
    let top = (m + ki) / (ki + 1) - 1;
    let mut total = BigRational::from_integer(pow2(m as u64 - 2));
    for j in 1..=top {
        let c = cooper_howard_coeff(k, m, j);
        let e = m - (ki + 1) * j - 2;
        let term = if e >= 0 {
            BigRational::from_integer(c << e as u64)
        } else {
            BigRational::new(c, pow2((-e) as u64))
        };
        total += term;
    }
    if !total.is_integer() {
        return Err(Error::Consistency(format!(
            "Cooper-Howard sum for k={k}, m={m} is not an integer: {total}"
        )));
    }
    Ok(total.to_integer())
}

/// The second-order expansion of `F_m^(k)` for `m < 2^k` and its remainder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GomezExpansion {
    pub main: BigRational,
    pub eta_bound: BigRational,
    pub eta_actual: BigRational,
}

pub fn gomez_expansion(k: u64, m: i64) -> Result<GomezExpansion> {
    if k < 2 || m < 2 {
        return Err(Error::Domain(format!("expansion needs k >= 2, m >= 2 (k={k}, m={m})")));
    }
    if k < 63 && m >= 1i64 << k {
        return Err(Error::Domain(format!("expansion needs m < 2^k (k={k}, m={m})")));
    }
    let ki = k as i64;
    let scale = BigRational::from_integer(pow2(m as u64 - 2));
    let mut factor = BigRational::one();
    if m > ki + 1 {
        factor += BigRational::new(BigInt::from(ki - m), pow2(k + 1));
    }
    if m > 2 * (ki + 1) {
        let z = BigInt::from(2 * ki - m);
        let f = BigRational::new((&z - 1) * (&z + 2), BigInt::from(2));
        factor += f / BigRational::from_integer(pow2(2 * k + 2));
    }
    let fm = BigRational::from_integer(kfib(k, m));
    let eta_actual = &fm / &scale - &factor;
    let eta_bound = BigRational::new(BigInt::from(4) * BigInt::from(m).pow(3), pow2(3 * k + 3));
    if eta_actual.abs() >= eta_bound {
        return Err(Error::Inequality(format!(
            "|eta(k={k}, m={m})| = {} is not below 4m^3/2^(3k+3)",
            eta_actual.abs()
        )));
    }
    Ok(GomezExpansion {
        main: factor * scale,
        eta_bound,
        eta_actual,
    })
}

/// `|N(2 f_k(alpha))| = 2^k (k-1)^2 / (2^(k+1) k^k - (k+1)^(k+1))`.
pub fn norm_2fk(k: u64) -> Result<BigRational> {
    if k < 2 {
        return Err(Error::Domain("norm_2fk needs k >= 2".into()));
    }
    let kb = BigInt::from(k);
    let num = pow2(k) * (&kb - 1) * (&kb - 1);
    let den = pow2(k + 1) * kb.pow(k as u32) - (&kb + 1u32).pow(k as u32 + 1);
    let v = BigRational::new(num, den).abs();
    if v >= BigRational::one() {
        return Err(Error::Inequality(format!(
            "norm of 2 f_k(alpha) is not below 1 at k={k}"
        )));
    }
    Ok(v)
}

/// Certified per-k constants: the dominant root `alpha`, `f_k(alpha)`,
/// `log alpha`, `log(2 f_k(alpha))` and `chi_k = log(2 f_k(alpha)) / log alpha`.
#[derive(Clone, Debug)]
pub struct KContext {
    pub k: u64,
    pub alpha: RealBall,
    pub fk_alpha: RealBall,
    pub log_alpha: RealBall,
    pub log_2fk: RealBall,
    pub chi: RealBall,
}

/// `f_k(z) = (z - 1) / (2 + (k + 1)(z - 2))`.
pub fn fk(k: u64, z: &RealBall) -> Result<RealBall> {
    let p = z.prec();
    let two = RealBall::from_int(2, p);
    let num = z.sub(&RealBall::from_int(1, p));
    let den = two.add(&z.sub(&two).mul_int(&BigInt::from(k + 1)));
    Ok(num.div(&den)?)
}

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Inequality(what()))
    }
}

/// Build a [`KContext`] whose quantities carry about `prec` significant bits.
///
/// `2 f_k(alpha) - 1` is of size `k 2^-k`, so the root is refined to about
/// `prec + k` bits and the subsequent arithmetic runs at that width.
pub fn kcontext(k: u64, prec: u64) -> Result<KContext> {
    if k < 2 {
        return Err(Error::Domain("kcontext needs k >= 2".into()));
    }
    let wp = prec + k + 64;
    let policy = PrecisionPolicy::new(wp, wp.max(8192) * 4);
    let lo =
        BigRational::from_integer(BigInt::from(2)) * (BigRational::one() - BigRational::new(BigInt::one(), pow2(k)));
    let hi = BigRational::from_integer(BigInt::from(2));
    let target = Dyadic::pow2(-((prec + k + 16) as i64));
    let alpha = refine_root(&Poly::kbonacci_shifted(k), &lo, &hi, &target, &policy)?.with_prec(wp);

    let lo_ball = RealBall::from_rational(&lo, wp);
    check(lo_ball.lt(&alpha) && alpha.lt(&RealBall::from_int(2, wp)), || {
        format!("alpha for k={k} not certified inside (2(1-2^-k), 2)")
    })?;

    let f = fk(k, &alpha)?;
    let half = RealBall::exact(Dyadic::pow2(-1), wp);
    let three_quarters = RealBall::exact(Dyadic::new(BigInt::from(3), -2), wp);
    check(half.lt(&f) && f.lt(&three_quarters), || {
        format!("f_k(alpha) for k={k} not certified inside (1/2, 3/4)")
    })?;

    let log_alpha = alpha.log()?;
    let log_2fk = f.shl(1).log()?;
    let chi = log_2fk.div(&log_alpha)?;
    check(chi.is_positive() && chi.lt(&RealBall::from_int(1, wp)), || {
        format!("chi_k for k={k} not certified inside (0, 1)")
    })?;
    Ok(KContext {
        k,
        alpha,
        fk_alpha: f,
        log_alpha,
        log_2fk,
        chi,
    })
}

impl KContext {
    /// `f_k(alpha) alpha^(m-1)`, the dominant Binet term.
    pub fn binet_main(&self, m: u64) -> RealBall {
        assert!(m >= 1);
        self.fk_alpha.mul(&self.alpha.powi(m - 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(kfib(5, 7), BigInt::from(31));
        assert_eq!(kfib(4, 5), BigInt::from(8));
        assert_eq!(kfib(4, 7), BigInt::from(29));
        assert_eq!(kfib(2, 10), BigInt::from(55));
        assert_eq!(kfib(4, -2), BigInt::zero());
        assert_eq!(kfib(4, 1), BigInt::one());
        assert_eq!(kfib_three_term(10, 16), BigInt::from(16336));
    }

    #[test]
    fn table_invariants() {
        let k = 7;
        let t = KFibTable::new(k, 60);
        for m in 2..=(k + 1) {
            assert_eq!(t.get(m as i64).unwrap(), &pow2(m - 2));
        }
        assert_eq!(t.get(k as i64 + 2).unwrap(), &(pow2(k) - 1));
        for (m, v) in t.iter() {
            assert_eq!(v, &kfib(k, m as i64));
        }
    }

    #[test]
    fn cooper_howard_examples() {
        assert_eq!(cooper_howard(5, 7).unwrap(), BigInt::from(31));
        assert_eq!(cooper_howard(4, 5).unwrap(), BigInt::from(8));
        assert_eq!(cooper_howard(10, 16).unwrap(), BigInt::from(16336));
        // middle range closed form: 2^(m-2) - (m-k) 2^(m-k-3)
        for k in 3..12u64 {
            for m in (k + 3)..=(2 * k + 2) {
                let want = pow2(m - 2) - BigInt::from(m - k) * pow2(m - k - 3);
                assert_eq!(cooper_howard(k, m as i64).unwrap(), want);
            }
        }
    }

    #[test]
    fn gomez_examples() {
        let g = gomez_expansion(10, 8).unwrap();
        assert_eq!(g.main, BigRational::from_integer(BigInt::from(64)));
        assert!(g.eta_actual.is_zero());
        let g = gomez_expansion(10, 16).unwrap();
        assert_eq!(g.main, BigRational::from_integer(BigInt::from(16336)));
        assert!(g.eta_actual.is_zero());
        let g = gomez_expansion(10, 25).unwrap();
        assert!(g.eta_actual.abs() < g.eta_bound);
        assert!(matches!(gomez_expansion(3, 8), Err(Error::Domain(_))));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm_2fk(2).unwrap(), BigRational::new(4.into(), 5.into()));
        assert_eq!(norm_2fk(4).unwrap(), BigRational::new(144.into(), 5067.into()));
    }

    #[test]
    fn context_small_k() {
        let c = kcontext(2, 128).unwrap();
        assert!((c.alpha.to_f64() - 1.618_033_988_749_895).abs() < 1e-15);
        assert!((c.fk_alpha.to_f64() - 0.723_606_797_749_979).abs() < 1e-15);
        assert!((c.chi.to_f64() - 0.767_7).abs() < 1e-3);
        let c = kcontext(4, 128).unwrap();
        assert!((c.alpha.to_f64() - 1.927_561_975_482_925).abs() < 1e-14);
    }

    #[test]
    fn context_large_k_keeps_chi_precision() {
        let c = kcontext(300, 200).unwrap();
        assert!(c.chi.is_positive());
        assert!(c.chi.accuracy_bits() > 150, "{:?}", c.chi);
    }
}
