//! Oracles shared by the property suites and the acceptance runner. Each
//! check recomputes its expectation from first principles and returns a
//! description of the first disagreement.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use pellfib::kfib::{cooper_howard, gomez_expansion, kcontext, kfib, kfib_three_term, norm_2fk};
use pellfib::numerics::{Dyadic, PrecisionPolicy, RealBall};
use pellfib::pell::{dickson, fundamental_solution, is_square_free, PellOrbit};
use pellfib::reduction::{dujella_petho, ReductionInstance};
use pellfib::Result;

pub type Check = std::result::Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        match $cond {
            true => {}
            false => return Err(format!($($msg)+)),
        }
    };
}

pub fn pow2(e: u64) -> BigInt {
    BigInt::one() << e
}

/// Direct definition: each term is the sum of the k before it.
pub fn kfib_naive(k: u64, m: u64) -> BigInt {
    let mut v: Vec<BigInt> = vec![BigInt::zero(); k as usize - 1];
    v.push(BigInt::one());
    while v.len() < (m + k - 1) as usize {
        let n = v.len();
        let s: BigInt = v[n - k as usize..].iter().sum();
        v.push(s);
    }
    v[(m + k - 2) as usize].clone()
}

pub fn cooper_howard_at(k: u64) -> Check {
    for m in 2..=(4 * k + 4) {
        let want = kfib_naive(k, m);
        let got = cooper_howard(k, m as i64).map_err(|e| e.to_string())?;
        ensure!(got == want, "Cooper-Howard k={k} m={m}: {got} != {want}");
        ensure!(kfib(k, m as i64) == want, "kfib k={k} m={m}");
    }
    Ok(())
}

/// `N(2 f_k(alpha)) = 2^k Psi(1) / ((k+1)^k Psi(2k/(k+1)))` with
/// `Psi(x) = x^k - x^(k-1) - ... - 1`, homogenized at `n/d = 2k/(k+1)`.
pub fn norm_at(k: u64) -> Check {
    let (n, d) = (BigInt::from(2 * k), BigInt::from(k + 1));
    let mut psi_h = n.pow(k as u32);
    let (mut np, mut dp) = (BigInt::one(), d.pow(k as u32));
    for _ in 0..k {
        psi_h -= &np * &dp;
        np *= &n;
        dp /= &d;
    }
    let psi1 = BigInt::from(1) - BigInt::from(k);
    let want = BigRational::new(pow2(k) * psi1, psi_h).abs();
    let got = norm_2fk(k).map_err(|e| e.to_string())?;
    ensure!(got == want, "norm k={k}: {got} != {want}");
    ensure!(got < BigRational::one(), "norm k={k} not below 1");
    Ok(())
}

/// `|F_m - f_k(alpha) alpha^(m-1)| < 1/2` and
/// `alpha^(m-2) <= F_m <= alpha^(m-1)`, certified.
pub fn binet_at(k: u64, m: u64) -> Check {
    let ctx = kcontext(k, m + 96).map_err(|e| e.to_string())?;
    let p = ctx.alpha.prec();
    let f = kfib(k, m as i64);
    ensure!(f == kfib_three_term(k, m as i64), "three-term recurrence k={k} m={m}");
    let fb = RealBall::from_int(f, p);
    let resid = fb.sub(&ctx.binet_main(m)).abs();
    ensure!(
        resid.lt(&RealBall::exact(Dyadic::pow2(-1), p)),
        "Binet residual k={k} m={m}: {resid:?}"
    );
    ensure!(
        ctx.alpha.powi(m - 2).upper() <= fb.lower(),
        "alpha^(m-2) <= F fails k={k} m={m}"
    );
    ensure!(
        fb.upper() <= ctx.alpha.powi(m - 1).lower(),
        "F <= alpha^(m-1) fails k={k} m={m}"
    );
    Ok(())
}

/// The second-order expansion written out from its definition, and
/// `|eta| < 4 m^3 / 2^(3k+3)`.
pub fn gomez_at(k: u64, m: u64) -> Check {
    let g = gomez_expansion(k, m as i64).map_err(|e| e.to_string())?;
    let mut factor = BigRational::one();
    if m > k + 1 {
        factor += BigRational::new(BigInt::from(k as i64 - m as i64), pow2(k + 1));
    }
    if m > 2 * (k + 1) {
        let z = BigInt::from(2 * k as i64 - m as i64);
        factor += BigRational::new((&z - 1) * (&z + 2), pow2(2 * k + 3));
    }
    let scale = BigRational::from_integer(pow2(m - 2));
    ensure!(g.main == &factor * &scale, "main term k={k} m={m}");
    let eta = BigRational::from_integer(kfib_naive(k, m)) / &scale - factor;
    ensure!(g.eta_actual == eta, "eta k={k} m={m}");
    let bound = BigRational::new(BigInt::from(4 * m * m * m), pow2(3 * k + 3));
    ensure!(eta.abs() < bound, "|eta| >= bound at k={k} m={m}");
    Ok(())
}

/// A random `m` in `[2, 2^k)`, capped for large `k`.
pub fn gomez_m(k: u64, seed: u64) -> u64 {
    let cap = if k < 12 { (1u64 << k) - 1 } else { 4000 };
    2 + seed % (cap - 1)
}

fn ys(x1: &BigInt, y1: &BigInt, eps: i8, n: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(), y1.clone()];
    while v.len() <= n {
        let l = v.len();
        let next = BigInt::from(2) * x1 * &v[l - 1] - BigInt::from(eps) * &v[l - 2];
        v.push(next);
    }
    v
}

/// Orbit identity with the companion `y_n`, the Dickson form and the
/// doubling law for `1 <= n <= 40`.
pub fn pell_identities_at(x1: u64, eps: i8) -> Check {
    let o = PellOrbit::from_x1(x1, eps, 64)
        .and_then(|o| o.with_square_free_part())
        .map_err(|e| e.to_string())?;
    let (d, y1) = (o.d.clone().unwrap(), o.y1.clone().unwrap());
    let x: Vec<BigInt> = o.xs().take(41).collect();
    let y = ys(&o.x1, &y1, eps, 40);
    for n in 1..=40usize {
        let sign = BigInt::from(if eps == -1 && n % 2 == 1 { -1 } else { 1 });
        ensure!(
            &x[n] * &x[n] - &d * &y[n] * &y[n] == sign,
            "x^2 - d y^2 at x1={x1} eps={eps} n={n}"
        );
        ensure!(
            dickson(n as u64, &(BigInt::from(2) * x1), eps) == BigInt::from(2) * &x[n],
            "Dickson at x1={x1} eps={eps} n={n}"
        );
        if 2 * n <= 40 {
            ensure!(
                x[2 * n] == BigInt::from(2) * &x[n] * &x[n] - &sign,
                "doubling at x1={x1} eps={eps} n={n}"
            );
        }
    }
    Ok(())
}

pub fn modular_at(x1: u64, eps: i8, n: u64) -> Check {
    let o = PellOrbit::from_x1(x1, eps, 64).map_err(|e| e.to_string())?;
    let md = 10_000_000_000u64;
    let want = o.xn(n) % BigInt::from(md);
    ensure!(
        BigInt::from(o.xn_mod(n, md)) == want,
        "x_n mod 1e10 at x1={x1} eps={eps} n={n}"
    );
    Ok(())
}

/// Smallest `(x, y)` with `x^2 - d y^2 = +-1`, from the period of the
/// continued fraction of `sqrt(d)` in plain integer arithmetic.
pub fn pell_by_period(d: u64) -> (BigInt, BigInt, i8) {
    let a0 = (1..).take_while(|s: &u64| s * s <= d).last().unwrap_or(0);
    let (mut m, mut q, mut a) = (0u64, 1u64, a0);
    let (mut h0, mut h1) = (BigInt::one(), BigInt::from(a0));
    let (mut k0, mut k1) = (BigInt::zero(), BigInt::one());
    loop {
        let r = &h1 * &h1 - BigInt::from(d) * &k1 * &k1;
        if r.abs().is_one() {
            return (h1, k1, if r.is_positive() { 1 } else { -1 });
        }
        m = q * a - m;
        q = (d - m * m) / q;
        a = (a0 + m) / q;
        let h = BigInt::from(a) * &h1 + &h0;
        let k = BigInt::from(a) * &k1 + &k0;
        (h0, h1, k0, k1) = (h1, h, k1, k);
    }
}

/// The fundamental solution equals the continued fraction one, and no
/// `y < y1` solves `x^2 - d y^2 = +-1` when `y1` is small enough to scan.
pub fn minimal_at(d: u64) -> Check {
    if is_square_free(&BigInt::from(d)) != Some(true) {
        return Ok(());
    }
    let o = fundamental_solution(d, 64).map_err(|e| e.to_string())?;
    let y1 = o.y1.clone().unwrap();
    let (x, y, e) = pell_by_period(d);
    ensure!(
        (&o.x1, &y1, o.epsilon) == (&x, &y, e),
        "d={d}: ({}, {y1}, {}) != ({x}, {y}, {e})",
        o.x1,
        o.epsilon
    );
    let Ok(y1) = u128::try_from(&y1) else { return Ok(()) };
    if y1 > 10_000_000 {
        return Ok(());
    }
    // r = isqrt(d y^2) kept incrementally; d y^2 is never a square, so
    // d y^2 - 1 is one iff r^2 = d y^2 - 1 and d y^2 + 1 is one iff (r+1)^2 = d y^2 + 1
    let d = d as u128;
    let s = (1..).take_while(|s: &u128| s * s <= d).last().unwrap_or(0);
    let mut r = 0u128;
    for y in 1..y1 {
        let t = d * y * y;
        r = r.max(s * y);
        while (r + 1) * (r + 1) <= t {
            r += 1;
        }
        ensure!(
            r * r != t - 1 && (r + 1) * (r + 1) != t + 1,
            "d={d}: smaller solution at y={y}"
        );
    }
    Ok(())
}

/// Square-free part of `n`.
pub fn core(mut n: u64) -> u64 {
    let mut c = 1;
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e % 2 == 1 {
            c *= p;
        }
        p += 1;
    }
    c * n
}

/// A small reduction instance `tau = sqrt(ta)/tb`, `mu = sqrt(ma)/mb`.
#[derive(Clone, Copy, Debug)]
pub struct SmallDp {
    pub ta: u64,
    pub tb: u64,
    pub ma: u64,
    pub mb: u64,
    pub a: u64,
    pub b: u64,
    pub m: u64,
}

impl SmallDp {
    /// `1`, `tau`, `mu` are independent over the rationals.
    pub fn independent(&self) -> bool {
        core(self.ta) > 1 && core(self.ma) > 1 && core(self.ta) != core(self.ma)
    }
}

fn surd(a: u64, b: u64) -> impl Fn(u64) -> Result<RealBall> + Sync {
    move |p: u64| Ok(RealBall::from_int(a, p).sqrt()?.div(&RealBall::from_int(b, p))?)
}

/// Run the reduction and confirm by exhaustion over `u <= M` that no
/// `|u tau - v + mu| < A B^-w` with `w >= w_bound` exists.
pub fn dp_sound(c: SmallDp) -> Check {
    let tau = surd(c.ta, c.tb);
    let mu = surd(c.ma, c.mb);
    let inst = ReductionInstance {
        tau: &tau,
        mu: &mu,
        a: RealBall::from_int(c.a, 64),
        b: RealBall::from_int(c.b, 64),
        m: BigInt::from(c.m),
    };
    let out = dujella_petho(&inst, 0, 60, &PrecisionPolicy::default()).map_err(|e| format!("{c:?}: {e}"))?;
    ensure!(out.q > BigInt::from(6 * c.m), "{c:?}: q <= 6M");
    let w: i32 = out.w_bound.clone().try_into().unwrap();
    let rhs = c.a as f64 * (c.b as f64).powi(-w);
    let t = (c.ta as f64).sqrt() / c.tb as f64;
    let u = (c.ma as f64).sqrt() / c.mb as f64;
    for n in 1..=c.m {
        let x = n as f64 * t + u;
        let dist = (x - x.round()).abs();
        ensure!(dist >= rhs * (1.0 - 1e-9), "{c:?}: u={n} dist={dist} < {rhs}");
    }
    Ok(())
}
