//! Candidate counts and wall time of each factoring strategy on `4n² + 1`.
//!
//! Counts are exact and deterministic; times are the median of the
//! repetitions on a monotonic clock and are only reported.
//!
//! The filtered strategies use odd primes up to the bound that do not
//! divide `N`, so they measure residue pruning alone; trial division has its
//! own row.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arith::{self, isqrt, mod_small, Natural};
use crate::error::{Error, Result};
use crate::fermat_generic::{self, GenericVerdict};
use crate::json;
use crate::quadform::{self, QuadTarget, SieveOptions};

pub const DEFAULT_REPETITIONS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Strategy {
    TrialDivision,
    PlainFermat,
    QuadInterval,
    QuadIntervalQRFiltered,
    QuadIntervalPaperFiltered,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::TrialDivision,
        Strategy::PlainFermat,
        Strategy::QuadInterval,
        Strategy::QuadIntervalQRFiltered,
        Strategy::QuadIntervalPaperFiltered,
    ];

    fn aliases(self) -> &'static [&'static str] {
        match self {
            Strategy::TrialDivision => &["trial-division", "trial"],
            Strategy::PlainFermat => &["plain-fermat", "fermat"],
            Strategy::QuadInterval => &["quad-interval", "quad"],
            Strategy::QuadIntervalQRFiltered => &["quad-qr", "qr"],
            Strategy::QuadIntervalPaperFiltered => &["quad-paper", "paper"],
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.to_string().eq_ignore_ascii_case(s) || st.aliases().contains(&s))
            .ok_or_else(|| Error::UnknownStrategy(s.to_string()))
    }
}

/// Parses `all` or a comma-separated list, keeping canonical order.
pub fn parse_strategies(spec: &str) -> Result<Vec<Strategy>> {
    if spec.trim().eq_ignore_ascii_case("all") {
        return Ok(Strategy::ALL.to_vec());
    }
    let mut out = spec
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect::<Result<Vec<Strategy>>>()?;
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(Error::UnknownStrategy(spec.to_string()));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchRow {
    pub strategy: Strategy,
    #[serde(rename = "n", serialize_with = "json::nat")]
    pub target_n: Natural,
    #[serde(rename = "N", serialize_with = "json::nat")]
    pub value: Natural,
    pub candidates_examined: u64,
    pub found: bool,
    #[serde(serialize_with = "json::opt_nat_pair")]
    pub pair: Option<(Natural, Natural)>,
    pub elapsed_ns: u64,
}

struct Attempt {
    candidates: u64,
    pair: Option<(Natural, Natural)>,
}

fn trial_division(value: &Natural) -> Attempt {
    let limit = isqrt(value).to_u64().unwrap_or(u64::MAX);
    let mut candidates = 0;
    let mut d = 3u64;
    while d <= limit {
        candidates += 1;
        if mod_small(value, d) == 0 {
            return Attempt {
                candidates,
                pair: Some((Natural::from(d), value / d)),
            };
        }
        d += 2;
    }
    Attempt {
        candidates,
        pair: None,
    }
}

fn sieve_attempt(t: &QuadTarget, options: &SieveOptions) -> Result<Attempt> {
    let out = quadform::sieve_enumerate(t, options)?;
    Ok(Attempt {
        candidates: out.examined,
        pair: out.pairs().first().map(|p| (p.a.clone(), p.b.clone())),
    })
}

fn filtered_options(t: &QuadTarget, prime_bound: u64, paper: bool) -> SieveOptions {
    SieveOptions {
        filter_primes: arith::odd_primes_up_to(prime_bound)
            .into_iter()
            .filter(|&p| mod_small(t.value(), p) != 0)
            .collect(),
        use_paper_filters: paper,
        want_all: false,
    }
}

fn attempt(strategy: Strategy, t: &QuadTarget, prime_bound: u64) -> Result<Attempt> {
    match strategy {
        Strategy::TrialDivision => Ok(trial_division(t.value())),
        Strategy::PlainFermat => {
            let out = fermat_generic::fermat_factor(t.value(), u64::MAX)?;
            let pair = match out.verdict {
                GenericVerdict::Split(s) => Some((s.a, s.b)),
                _ => None,
            };
            Ok(Attempt {
                candidates: out.steps,
                pair,
            })
        }
        Strategy::QuadInterval => sieve_attempt(t, &SieveOptions::unfiltered()),
        Strategy::QuadIntervalQRFiltered => {
            sieve_attempt(t, &filtered_options(t, prime_bound, false))
        }
        Strategy::QuadIntervalPaperFiltered => {
            sieve_attempt(t, &filtered_options(t, prime_bound, true))
        }
    }
}

fn median(mut samples: Vec<u64>) -> u64 {
    samples.sort_unstable();
    let mid = samples.len() / 2;
    if samples.len().is_even() {
        (samples[mid - 1] + samples[mid]) / 2
    } else {
        samples[mid]
    }
}

/// One row per (target, strategy), target-major. Prime targets are rejected.
pub fn run_bench(
    targets: &[Natural],
    strategies: &[Strategy],
    repetitions: usize,
    prime_bound: u64,
) -> Result<Vec<BenchRow>> {
    let repetitions = repetitions.max(1);
    let quad_targets = targets
        .iter()
        .map(|n| {
            let t = QuadTarget::new(n.clone())?;
            if arith::is_prime(t.value()) {
                return Err(Error::PrimeTarget(n.to_string()));
            }
            Ok(t)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(quad_targets.len() * strategies.len());
    for t in &quad_targets {
        for &strategy in strategies {
            let mut samples = Vec::with_capacity(repetitions);
            let mut result = None;
            for _ in 0..repetitions {
                let start = Instant::now();
                let outcome = attempt(strategy, t, prime_bound)?;
                samples.push(start.elapsed().as_nanos().min(u128::from(u64::MAX)) as u64);
                if let Some(previous) = &result {
                    let previous: &Attempt = previous;
                    assert_eq!(
                        previous.candidates, outcome.candidates,
                        "non-deterministic count"
                    );
                }
                result = Some(outcome);
            }
            let outcome = result.expect("at least one repetition");
            rows.push(BenchRow {
                strategy,
                target_n: t.n().clone(),
                value: t.value().clone(),
                candidates_examined: outcome.candidates,
                found: outcome.pair.is_some(),
                pair: outcome.pair,
                elapsed_ns: median(samples),
            });
        }
    }
    Ok(rows)
}
