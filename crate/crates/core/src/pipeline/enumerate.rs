use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use rayon::prelude::*;

use super::records::{Provenance, SolutionRecord};
use crate::error::{Error, Result};
use crate::kfib::KFibTable;
use crate::pell::PellOrbit;

/// All `k` sharing one value at one index `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Witness {
    m: u64,
    k_min: u64,
    count: u64,
}

/// Every `F_m^(k)` with `4 <= k <= k_max`, `2 <= m <= m_max`, keyed by value.
pub struct FibIndex {
    map: HashMap<BigInt, Vec<Witness>>,
    max_value: BigInt,
}

impl FibIndex {
    pub fn new(k_max: u64, m_max: u64) -> Self {
        let tables: Vec<KFibTable> = (4..=k_max).into_par_iter().map(|k| KFibTable::new(k, m_max)).collect();
        let mut map: HashMap<BigInt, Vec<Witness>> = HashMap::new();
        let mut max_value = BigInt::from(0);
        for t in &tables {
            for (m, v) in t.iter() {
                if *v > max_value {
                    max_value = v.clone();
                }
                let ws = map.entry(v.clone()).or_default();
                match ws.iter_mut().find(|w| w.m == m) {
                    Some(w) => {
                        w.count += 1;
                        w.k_min = w.k_min.min(t.k());
                    }
                    None => ws.push(Witness {
                        m,
                        k_min: t.k(),
                        count: 1,
                    }),
                }
            }
        }
        FibIndex { map, max_value }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn max_value(&self) -> &BigInt {
        &self.max_value
    }

    /// `(m, smallest k, number of k)` for each index where `v` occurs.
    pub fn lookup(&self, v: &BigInt) -> impl Iterator<Item = (u64, u64, u64)> + '_ {
        self.map.get(v).into_iter().flatten().map(|w| (w.m, w.k_min, w.count))
    }
}

/// The orbits searched for a given `x1`: both signs, except `x1 = 1` where
/// only `eps = -1` is a genuine Pell solution.
pub fn orbit_signs(x1: u64) -> &'static [i8] {
    if x1 == 1 {
        &[-1]
    } else {
        &[1, -1]
    }
}

/// All `x_n = F_m^(k)` with `x1 <= x1_max`, `4 <= k <= k_max`,
/// `2 <= m <= m_max` and `1 <= n <= m`. Each record carries the smallest
/// witnessing `k` and the number of witnesses; the output is sorted.
pub fn enumerate_small_x1(x1_max: u64, k_max: u64, m_max: u64) -> Result<Vec<SolutionRecord>> {
    if x1_max < 1 || k_max < 4 || m_max < 2 {
        return Err(Error::Domain("need x1_max >= 1, k_max >= 4, m_max >= 2".into()));
    }
    let index = FibIndex::new(k_max, m_max);
    search_index(&index, x1_max)
}

pub fn search_index(index: &FibIndex, x1_max: u64) -> Result<Vec<SolutionRecord>> {
    let orbits: Vec<(u64, i8)> = (1..=x1_max)
        .flat_map(|x1| orbit_signs(x1).iter().map(move |&e| (x1, e)))
        .collect();
    let found: Vec<Vec<SolutionRecord>> = orbits
        .par_iter()
        .map(|&(x1, eps)| {
            let orbit = PellOrbit::from_x1(x1, eps, 64)?;
            let mut out = Vec::new();
            for (n, x) in orbit.xs().enumerate().skip(1) {
                if &x > index.max_value() {
                    break;
                }
                for (m, k, count) in index.lookup(&x) {
                    if n as u64 <= m {
                        let r = SolutionRecord::new(k, n as u64, m, x1.into(), eps, Provenance::from_index(n as u64))?;
                        out.push(r.with_witnesses(count));
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let set: BTreeSet<SolutionRecord> = found.into_iter().flatten().collect();
    Ok(set.into_iter().collect())
}

/// The distinct values `x_n` among `records`, grouped by `n`.
pub fn values_by_index(records: &[SolutionRecord]) -> std::collections::BTreeMap<u64, BTreeSet<BigInt>> {
    let mut out: std::collections::BTreeMap<u64, BTreeSet<BigInt>> = Default::default();
    for r in records {
        out.entry(r.n).or_default().insert(r.value.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_search() {
        let r = enumerate_small_x1(1, 4, 10).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!((r[0].k, r[0].n, r[0].m, r[0].epsilon), (4, 1, 2, -1));
    }

    #[test]
    fn powers_of_two_count_witnesses() {
        let r = enumerate_small_x1(8, 20, 40).unwrap();
        let eight: Vec<_> = r.iter().filter(|r| r.n == 1 && r.value == BigInt::from(8)).collect();
        // 8 = F_5^(k) for every k >= 4, one record per sign
        assert_eq!(eight.len(), 2);
        assert!(eight.iter().all(|r| r.k == 4 && r.m == 5 && r.witnesses == 17));
    }
}
