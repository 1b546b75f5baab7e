//! Certified continued fractions, Legendre's criterion and the
//! Dujella–Pethő reduction.

mod cf;
mod dp;

pub use cf::{cf_expand, cf_of_rational, convergents, legendre_locate, CfExpansion};
pub use dp::{dujella_petho, dujella_petho_at, DpStep, ReductionInstance, ReductionOutcome};

use crate::error::Result;
use crate::kfib::KContext;
use crate::numerics::RealBall;

/// A real number that can be produced as a ball at any requested precision.
pub trait RealSource: Sync {
    fn eval(&self, prec: u64) -> Result<RealBall>;
}

impl<F> RealSource for F
where
    F: Fn(u64) -> Result<RealBall> + Sync,
{
    fn eval(&self, prec: u64) -> Result<RealBall> {
        self(prec)
    }
}

/// `chi_k = log(2 f_k(alpha)) / log alpha` of a context.
pub fn chi(ctx: &KContext) -> RealBall {
    ctx.chi.clone()
}
