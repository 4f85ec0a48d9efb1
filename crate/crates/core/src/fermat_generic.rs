//! Classic Fermat factorization for an arbitrary odd `N`: scan centers `c`
//! upward from `⌈√N⌉` until `c² − N` is a perfect square `d²`, giving
//! `N = (c − d)(c + d)`.
//!
//! The scan stops at `c = (N + 9)/6`, the center of the split `3 · N/3`.
//! Any proper split with both factors at least 3 has a center no larger, so
//! reaching it without a hit proves `N` prime. Because centers are visited
//! in increasing order the first hit is the most balanced split.

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arith::{ceil_sqrt, Natural};
use crate::error::{Error, Result};
use crate::json;
use crate::walk::CenterWalk;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareSplit {
    #[serde(serialize_with = "json::nat")]
    pub c: Natural,
    #[serde(serialize_with = "json::nat")]
    pub d: Natural,
    #[serde(serialize_with = "json::nat")]
    pub a: Natural,
    #[serde(serialize_with = "json::nat")]
    pub b: Natural,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenericVerdict {
    Split(SquareSplit),
    Prime,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericOutcome {
    pub verdict: GenericVerdict,
    /// Centers tested.
    pub steps: u64,
}

/// Last center worth testing: `(N + 9)/6`.
pub fn center_bound(value: &Natural) -> Natural {
    (value + 9u32) / 6u32
}

pub fn fermat_factor(value: &Natural, step_budget: u64) -> Result<GenericOutcome> {
    if value.is_even() || *value < Natural::from(9u32) {
        return Err(Error::BadGenericInput(value.to_string()));
    }
    let start = ceil_sqrt(value);
    let bound = center_bound(value);
    let mut outcome = GenericOutcome {
        verdict: GenericVerdict::Prime,
        steps: 0,
    };
    if start > bound {
        return Ok(outcome);
    }
    let span = (&bound - &start + 1u32).to_u64().unwrap_or(u64::MAX);
    let mut walk = CenterWalk::new(start, Natural::from(1u32), value);
    for _ in 0..span {
        if outcome.steps == step_budget {
            outcome.verdict = GenericVerdict::BudgetExhausted;
            return Ok(outcome);
        }
        outcome.steps += 1;
        if let Some(d) = walk.root() {
            let c = walk.center().clone();
            let a = &c - &d;
            // c − d = 1 is the trivial split; it lies beyond `bound` for N ≥ 9
            debug_assert!(a > Natural::from(1u32));
            let b = &c + &d;
            debug_assert_eq!(&a * &b, *value);
            outcome.verdict = GenericVerdict::Split(SquareSplit { c, d, a, b });
            return Ok(outcome);
        }
        walk.advance();
    }
    Ok(outcome)
}
