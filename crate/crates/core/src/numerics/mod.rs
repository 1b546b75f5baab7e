//! Certified real arithmetic: exact dyadics, mid-rad balls, elementary
//! functions with rigorous error bounds and polynomial root isolation.

mod ball;
mod dyadic;
mod elementary;
mod roots;

pub use ball::{certified_nearest_distance, RealBall};
pub use dyadic::{Dyadic, Round};
pub use elementary::{exp_point, ln2, log_point, pi, Approx};
pub use roots::{refine_root, Poly};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumericsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no sign change on bracket ({lo}, {hi})")]
    Bracket { lo: String, hi: String },
    #[error("precision cap of {cap} bits reached: {what}")]
    PrecisionCap { cap: u64, what: String },
}

/// Working-precision schedule: start at `start` bits and double while the
/// doubled precision stays within `cap`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub start: u64,
    pub cap: u64,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy { start: 350, cap: 8192 }
    }
}

impl PrecisionPolicy {
    pub fn new(start: u64, cap: u64) -> Self {
        PrecisionPolicy {
            start: start.max(64),
            cap: cap.max(start.max(64) * 2),
        }
    }

    /// Pairs `(p, 2p)` with `2p <= cap`.
    pub fn ladder(&self) -> impl Iterator<Item = (u64, u64)> {
        let cap = self.cap;
        std::iter::successors(Some(self.start), |p| Some(p * 2))
            .take_while(move |p| p * 2 <= cap)
            .map(|p| (p, 2 * p))
    }

    /// Evaluate `f` at `p` and `2p` until both produce the same certified
    /// answer. `f` returns `None` when its ball is too wide to decide.
    pub fn certify<T, E, F>(&self, what: &str, mut f: F) -> Result<T, E>
    where
        T: PartialEq,
        E: From<NumericsError>,
        F: FnMut(u64) -> Result<Option<T>, E>,
    {
        let mut prev: Option<(u64, Option<T>)> = None;
        for (p, q) in self.ladder() {
            let a = match prev.take() {
                Some((pp, v)) if pp == p => v,
                _ => f(p)?,
            };
            let b = f(q)?;
            if let (Some(x), Some(y)) = (&a, &b) {
                if x == y {
                    return Ok(b.unwrap());
                }
            }
            prev = Some((q, b));
        }
        Err(NumericsError::PrecisionCap {
            cap: self.cap,
            what: what.to_string(),
        }
        .into())
    }
}

/// `log(x)` of a ball.
pub fn eval_log(x: &RealBall) -> Result<RealBall, NumericsError> {
    x.log()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_respects_cap() {
        let p = PrecisionPolicy::default();
        let v: Vec<_> = p.ladder().collect();
        assert_eq!(v, vec![(350, 700), (700, 1400), (1400, 2800), (2800, 5600)]);
    }

    #[test]
    fn certify_needs_two_agreeing_answers() {
        let p = PrecisionPolicy::new(64, 1024);
        let mut calls = Vec::new();
        let r: Result<i32, NumericsError> = p.certify("test", |bits| {
            calls.push(bits);
            Ok(if bits >= 256 { Some(7) } else { None })
        });
        assert_eq!(r, Ok(7));
        assert_eq!(calls, vec![64, 128, 256, 512]);
        let r: Result<i32, NumericsError> = p.certify("never", |_| Ok(None));
        assert!(matches!(r, Err(NumericsError::PrecisionCap { cap: 1024, .. })));
    }
}
