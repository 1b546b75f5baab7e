use std::fmt;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::kfib::kfib;
use crate::pell::PellOrbit;

/// Where a solution comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// `n = 2`, `x_1 = 2^((k-1)/2)`.
    FamilyI,
    /// `n = 3`, `x_1 = 2^(m_1 - 2)`.
    FamilyIi,
    /// `x_1` itself is a k-Fibonacci number.
    SporadicN1,
    /// Any other index; the search never expects one.
    Other,
}

impl Provenance {
    pub fn from_index(n: u64) -> Self {
        match n {
            1 => Provenance::SporadicN1,
            2 => Provenance::FamilyI,
            3 => Provenance::FamilyIi,
            _ => Provenance::Other,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::FamilyI => "family-i",
            Provenance::FamilyIi => "family-ii",
            Provenance::SporadicN1 => "sporadic-n1",
            Provenance::Other => "other",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub(crate) fn decimal<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// `x_n = F_m^(k)` for the orbit of `(x1, epsilon)`. Both sides are
/// recomputed exactly when the record is built, so a record cannot exist
/// unless the identity holds.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SolutionRecord {
    pub k: u64,
    pub n: u64,
    pub m: u64,
    #[serde(serialize_with = "decimal")]
    pub x1: BigInt,
    pub epsilon: i8,
    #[serde(serialize_with = "decimal")]
    pub value: BigInt,
    pub provenance: Provenance,
    /// Number of `k` in the searched range with the same `F_m^(k)`; `k` is
    /// the smallest of them.
    pub witnesses: u64,
}

impl SolutionRecord {
    pub fn new(k: u64, n: u64, m: u64, x1: BigInt, epsilon: i8, provenance: Provenance) -> Result<Self> {
        if k < 2 || m < 2 || n < 1 {
            return Err(Error::Domain(format!(
                "record needs k >= 2, m >= 2, n >= 1 (k={k}, m={m}, n={n})"
            )));
        }
        let orbit = PellOrbit::from_x1(x1.clone(), epsilon, 64)?;
        let pell = orbit.xn(n);
        let fib = kfib(k, m as i64);
        if pell != fib {
            return Err(Error::Consistency(format!(
                "x_{n}({x1}, {epsilon}) = {pell} but F_{m}^({k}) = {fib}"
            )));
        }
        Ok(SolutionRecord {
            k,
            n,
            m,
            x1,
            epsilon,
            value: pell,
            provenance,
            witnesses: 1,
        })
    }

    pub fn with_witnesses(mut self, count: u64) -> Self {
        self.witnesses = count;
        self
    }
}
