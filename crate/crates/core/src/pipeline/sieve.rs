use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use super::records::decimal;
use super::report::{CellRecord, SweepReport};
use crate::error::{Error, Result};
use crate::kfib::KFibTable;
use crate::pell::{x1_from_bth_root, xn_mod_raw, PellOrbit};

/// The index set `{4, 6, 9} ∪ {p_3, ..., p_44}`, i.e. the primes from 5 to 193.
pub fn default_index_set() -> Vec<u32> {
    let mut b = vec![4, 6, 9];
    b.extend((5u32..=193).filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)));
    b
}

/// A value `y = F_m^(k)` and an orbit whose `b`-th term matches it modulo
/// the sieve modulus.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Survivor {
    #[serde(serialize_with = "decimal")]
    pub y: BigInt,
    /// Smallest `k` with `y = F_m^(k)` for some `m`, and that `m`.
    pub k: u64,
    pub m: u64,
    pub b: u32,
    #[serde(serialize_with = "decimal")]
    pub x1: BigInt,
    pub eps: i8,
    /// `x_b = y` holds exactly, not only modulo the modulus.
    pub exact: bool,
}

/// Distinct values `F_m^(k)`, `4 <= k <= k_max`, `2 <= m <= m_max`, each
/// with its smallest `(k, m)`.
fn distinct_values(k_max: u64, m_max: u64) -> BTreeMap<BigInt, (u64, u64)> {
    let tables: Vec<KFibTable> = (4..=k_max).into_par_iter().map(|k| KFibTable::new(k, m_max)).collect();
    let mut out = BTreeMap::new();
    for t in &tables {
        for (m, v) in t.iter() {
            out.entry(v.clone()).or_insert((t.k(), m));
        }
    }
    out
}

fn survivors_for(y: &BigInt, km: (u64, u64), b: u32, modulus: u64) -> Vec<Survivor> {
    let x1 = x1_from_bth_root(y, b);
    if x1 < BigInt::one() {
        return Vec::new();
    }
    let md = BigInt::from(modulus);
    let x1_mod = x1.mod_floor(&md).to_u64().unwrap();
    let y_mod = y.mod_floor(&md).to_u64().unwrap();
    let signs: &[i8] = if x1.is_one() { &[-1] } else { &[1, -1] };
    signs
        .iter()
        .filter(|&&eps| xn_mod_raw(x1_mod, eps, b as u64, modulus) == y_mod)
        .map(|&eps| {
            let exact = PellOrbit::from_x1(x1.clone(), eps, 64)
                .map(|o| o.xn(b as u64) == *y)
                .unwrap_or(false);
            Survivor {
                y: y.clone(),
                k: km.0,
                m: km.1,
                b,
                x1: x1.clone(),
                eps,
                exact,
            }
        })
        .collect()
}

/// For every `y = F_m^(k)` in the grid and every `b` in `index_set`, take
/// the only possible `x1` with `x_b = y` and compare `x_b` with `y` modulo
/// `modulus` for both signs. One cell per `k`, whose statistic is the
/// largest surviving `y` attributed to it (0 when none).
pub fn mod_sieve(k_max: u64, m_max: u64, modulus: u64, index_set: &[u32]) -> Result<(SweepReport, Vec<Survivor>)> {
    if modulus < 2 || index_set.is_empty() || index_set.iter().any(|&b| b < 2) {
        return Err(Error::Domain(
            "need modulus >= 2 and a nonempty index set of b >= 2".into(),
        ));
    }
    if k_max < 4 || m_max < 2 {
        return Err(Error::Domain("need k_max >= 4 and m_max >= 2".into()));
    }
    let t0 = Instant::now();
    let values: Vec<(BigInt, (u64, u64))> = distinct_values(k_max, m_max).into_iter().collect();
    let mut survivors: Vec<Survivor> = values
        .par_iter()
        .flat_map_iter(|(y, km)| index_set.iter().flat_map(move |&b| survivors_for(y, *km, b, modulus)))
        .collect();
    survivors.sort();
    let name = "modsieve";
    let cells = (4..=k_max)
        .map(|k| {
            let mine: Vec<&Survivor> = survivors.iter().filter(|s| s.k == k).collect();
            let stat = mine.iter().map(|s| s.y.clone()).max().unwrap_or_default();
            let detail = mine
                .iter()
                .map(|s| {
                    format!(
                        "y={} m={} b={} x1={} eps={} exact={}",
                        s.y, s.m, s.b, s.x1, s.eps, s.exact
                    )
                })
                .collect::<Vec<_>>()
                .join("; ");
            CellRecord::ok(name, Some(k), None, None, stat, detail)
        })
        .collect();
    let bs: Vec<String> = index_set.iter().map(|b| b.to_string()).collect();
    let grid = format!("k=4..{k_max} m=2..{m_max} mod={modulus} b={{{}}}", bs.join(","));
    let mut rep = SweepReport::from_cells(name, grid, cells, t0.elapsed().as_secs_f64(), 0);
    rep.extras.insert("survivors".into(), survivors.len().to_string());
    rep.extras.insert("distinct_values".into(), values.len().to_string());
    Ok((rep, survivors))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_set_has_45_elements() {
        let b = default_index_set();
        assert_eq!(b.len(), 45);
        assert_eq!(&b[..5], &[4, 6, 9, 5, 7]);
        assert_eq!(*b.last().unwrap(), 193);
    }

    #[test]
    fn small_sieves() {
        let (_, s) = mod_sieve(12, 20, 10_000_000_000, &[2]).unwrap();
        let ys: Vec<BigInt> = s.iter().filter(|s| s.exact).map(|s| s.y.clone()).collect();
        for v in [31, 127, 511] {
            assert!(ys.contains(&BigInt::from(v)), "{v} missing from {ys:?}");
        }
        let (_, s) = mod_sieve(10, 16, 10_000_000_000, &[3]).unwrap();
        assert!(s.iter().any(|s| s.y == BigInt::from(16336) && s.exact));
    }
}
