//! Brute-force audit of the divisor-form claims.
//!
//! Ground truth comes only from [`oracle_factorize`] (trial division); the
//! sieve in [`crate::quadform`] is never used to produce factor pairs here.
//! For every composite `N = 4n² + 1` in a range each proper factor pair is
//! turned into its witness `u` and every selected claim is evaluated against
//! it. Failures are recorded as [`Violation`]s that [`reverify`] can replay
//! from scratch.
//!
//! Claim catalogue (even `n` uses the `E` claims, odd `n` the `O` claims):
//!
//! | id | statement checked per instance |
//! |----|--------------------------------|
//! | E1 / O1 | `(8u + offset)² − N` is `d²` and the pair is `center ∓ d` |
//! | E2 / O2 | `u` lies in the half-open candidate interval |
//! | E3 | `u ≢ 0 (mod p)` for primes `p ≡ 3 (mod 4)` |
//! | O3 | `4u + 1 ≢ 0 (mod p)` for primes `p ≡ 3 (mod 4)` |
//! | E4 / O4 | `u mod p` is in the parametric admissible set, `p ∤ N` |
//! | E5a | if the condition holds, `u ≡ 2 (mod 4)` |
//! | E5b | if the condition holds, `u ≢ 2 (mod 4)` |
//! | E6 | if `3 ∤` the variable, `u ≡ 1 (mod 3)` |
//! | L1 | some factor `4b + 1 ≤ √N` has `m² + b² ≡ 0 (mod 4b + 1)` |
//! | CE / CO | an in-interval square discriminant exists iff `N` is composite |
//! | F1–F5 | λ analogues of E1–E3, `λ ≢ 2 (mod 4)`, `λ ≡ 1 (mod 3)` |
//! | L2 | some `s` below the bound has residue 0 in the Lucas-form test |
//!
//! E5a, E5b and E6 are each run under two readings of their condition:
//! `[n]` ("n is even" / "3 ∤ n") and `[m]` ("m is even" / "3 ∤ m").

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::arith::{self, mod_small, Natural};
use crate::error::{Error, Result};
use crate::fermat_numbers::{self as fermat, FermatTarget};
use crate::json;
use crate::quadform::{self, Parity, QuadTarget};

/// Which variable a conditional claim is conditioned on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Reading {
    N,
    M,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClaimId {
    E1,
    E2,
    E3,
    E4,
    E5a(Reading),
    E5b(Reading),
    E6(Reading),
    O1,
    O2,
    O3,
    O4,
    L1,
    CE,
    CO,
    F1,
    F2,
    F3,
    F4,
    F5,
    L2,
}

impl ClaimId {
    pub const ALL: [ClaimId; 23] = [
        ClaimId::E1,
        ClaimId::E2,
        ClaimId::E3,
        ClaimId::E4,
        ClaimId::E5a(Reading::N),
        ClaimId::E5a(Reading::M),
        ClaimId::E5b(Reading::N),
        ClaimId::E5b(Reading::M),
        ClaimId::E6(Reading::N),
        ClaimId::E6(Reading::M),
        ClaimId::O1,
        ClaimId::O2,
        ClaimId::O3,
        ClaimId::O4,
        ClaimId::L1,
        ClaimId::CE,
        ClaimId::CO,
        ClaimId::F1,
        ClaimId::F2,
        ClaimId::F3,
        ClaimId::F4,
        ClaimId::F5,
        ClaimId::L2,
    ];

    /// Claims about `4n² + 1` that follow from the factorization identity
    /// alone; a violation of any of these is a bug.
    pub const STRUCTURAL: [ClaimId; 7] = [
        ClaimId::E1,
        ClaimId::E2,
        ClaimId::O1,
        ClaimId::O2,
        ClaimId::L1,
        ClaimId::CE,
        ClaimId::CO,
    ];

    pub fn is_fermat(self) -> bool {
        matches!(
            self,
            ClaimId::F1 | ClaimId::F2 | ClaimId::F3 | ClaimId::F4 | ClaimId::F5 | ClaimId::L2
        )
    }

    fn base(self) -> &'static str {
        match self {
            ClaimId::E1 => "E1",
            ClaimId::E2 => "E2",
            ClaimId::E3 => "E3",
            ClaimId::E4 => "E4",
            ClaimId::E5a(_) => "E5a",
            ClaimId::E5b(_) => "E5b",
            ClaimId::E6(_) => "E6",
            ClaimId::O1 => "O1",
            ClaimId::O2 => "O2",
            ClaimId::O3 => "O3",
            ClaimId::O4 => "O4",
            ClaimId::L1 => "L1",
            ClaimId::CE => "CE",
            ClaimId::CO => "CO",
            ClaimId::F1 => "F1",
            ClaimId::F2 => "F2",
            ClaimId::F3 => "F3",
            ClaimId::F4 => "F4",
            ClaimId::F5 => "F5",
            ClaimId::L2 => "L2",
        }
    }

    fn reading(self) -> Option<Reading> {
        match self {
            ClaimId::E5a(r) | ClaimId::E5b(r) | ClaimId::E6(r) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.reading() {
            Some(Reading::N) => write!(f, "{}[n]", self.base()),
            Some(Reading::M) => write!(f, "{}[m]", self.base()),
            None => f.write_str(self.base()),
        }
    }
}

impl Serialize for ClaimId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for ClaimId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClaimId::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownClaim(s.to_string()))
    }
}

/// Parses `all` or a comma-separated list. A bare `E5a`, `E5b` or `E6`
/// selects both readings.
pub fn parse_claims(spec: &str) -> Result<BTreeSet<ClaimId>> {
    let mut selected = BTreeSet::new();
    for token in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if token.eq_ignore_ascii_case("all") {
            selected.extend(ClaimId::ALL);
            continue;
        }
        let by_base: Vec<ClaimId> = ClaimId::ALL
            .into_iter()
            .filter(|c| c.base().eq_ignore_ascii_case(token))
            .collect();
        if by_base.is_empty() {
            selected.insert(token.parse()?);
        } else {
            selected.extend(by_base);
        }
    }
    if selected.is_empty() {
        return Err(Error::UnknownClaim(spec.to_string()));
    }
    Ok(selected)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// `n` for `4n² + 1` claims, the Fermat index for F/L2 claims.
    #[serde(serialize_with = "json::nat")]
    pub n: Natural,
    #[serde(rename = "N", serialize_with = "json::nat")]
    pub value: Natural,
    #[serde(serialize_with = "json::nat_pair")]
    pub pair: (Natural, Natural),
    /// Witness `u` (or `λ` for Fermat claims).
    #[serde(serialize_with = "json::nat")]
    pub u: Natural,
    pub modulus: Option<u64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimReport {
    pub claim: ClaimId,
    pub range: String,
    pub instances: u64,
    pub violations: Vec<Violation>,
}

impl ClaimReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

const WHEEL_30: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];

/// 2, 3, 5, then every integer coprime to 30 from 7 upward.
fn wheel_divisors() -> impl Iterator<Item = u64> {
    let spokes = std::iter::successors(Some((7u64, 0usize)), |&(d, i)| {
        Some((d + WHEEL_30[i], (i + 1) % WHEEL_30.len()))
    });
    [2u64, 3, 5].into_iter().chain(spokes.map(|(d, _)| d))
}

fn factorize_u64(mut x: u64, out: &mut Vec<Natural>) {
    for d in wheel_divisors() {
        if d.checked_mul(d).is_none_or(|sq| sq > x) {
            break;
        }
        while x.is_multiple_of(d) {
            out.push(Natural::from(d));
            x /= d;
        }
    }
    if x > 1 {
        out.push(Natural::from(x));
    }
}

/// Complete prime factorization by trial division over a 2-3-5 wheel,
/// ascending. Inputs below 2 give an empty list.
pub fn oracle_factorize(value: &Natural) -> Vec<Natural> {
    let mut factors = Vec::new();
    if *value < Natural::from(2u32) {
        return factors;
    }
    let mut x = value.clone();
    for d in wheel_divisors() {
        if let Some(small) = x.to_u64() {
            // remaining cofactor fits in 64 bits
            factorize_u64(small, &mut factors);
            factors.sort();
            return factors;
        }
        if Natural::from(d) * d > x {
            break;
        }
        while mod_small(&x, d) == 0 {
            factors.push(Natural::from(d));
            x /= d;
        }
    }
    if x > Natural::one() {
        factors.push(x);
    }
    factors.sort();
    factors
}

/// Every divisor of the product of `primes` (a multiset), ascending.
pub fn divisors_from_primes(primes: &[Natural]) -> Vec<Natural> {
    let mut divisors = vec![Natural::one()];
    let mut i = 0;
    while i < primes.len() {
        let p = &primes[i];
        let mut exponent = 0;
        while i < primes.len() && primes[i] == *p {
            exponent += 1;
            i += 1;
        }
        let base = divisors.clone();
        let mut power = Natural::one();
        for _ in 0..exponent {
            power *= p;
            divisors.extend(base.iter().map(|d| d * &power));
        }
    }
    divisors.sort();
    divisors
}

fn pairs_from_primes(value: &Natural, primes: &[Natural]) -> Vec<(Natural, Natural)> {
    divisors_from_primes(primes)
        .into_iter()
        .filter(|d| *d > Natural::one() && d * d <= *value)
        .map(|d| {
            let q = value / &d;
            (d, q)
        })
        .collect()
}

/// Proper factor pairs `(a, b)` with `1 < a ≤ b`, ascending in `a`.
pub fn proper_factor_pairs(value: &Natural) -> Vec<(Natural, Natural)> {
    pairs_from_primes(value, &oracle_factorize(value))
}

/// One target's ground truth.
struct Case {
    target: QuadTarget,
    composite: bool,
    /// `(a, b, u)` ascending in `a`.
    pairs: Vec<(Natural, Natural, Natural)>,
}

impl Case {
    fn build(n: u64) -> Self {
        let target = quadform::make_target(n).expect("n >= 1");
        let primes = oracle_factorize(target.value());
        let pairs = pairs_from_primes(target.value(), &primes)
            .into_iter()
            .map(|(a, b)| {
                let u = quadform::derive_u(&target, &a, &b).expect("oracle pair is proper");
                (a, b, u)
            })
            .collect();
        Case {
            composite: primes.len() > 1,
            target,
            pairs,
        }
    }

    fn violation(
        &self,
        pair: &(Natural, Natural, Natural),
        modulus: Option<u64>,
        detail: String,
    ) -> Violation {
        Violation {
            n: self.target.n().clone(),
            value: self.target.value().clone(),
            pair: (pair.0.clone(), pair.1.clone()),
            u: pair.2.clone(),
            modulus,
            detail,
        }
    }
}

#[derive(Default)]
struct Tally {
    instances: u64,
    violations: Vec<Violation>,
}

impl Tally {
    fn check(&mut self, ok: bool, violation: impl FnOnce() -> Violation) {
        self.instances += 1;
        if !ok {
            self.violations.push(violation());
        }
    }
}

fn claim_parity(claim: ClaimId) -> Option<Parity> {
    match claim {
        ClaimId::E1
        | ClaimId::E2
        | ClaimId::E3
        | ClaimId::E4
        | ClaimId::E5a(_)
        | ClaimId::E5b(_)
        | ClaimId::E6(_)
        | ClaimId::L1
        | ClaimId::CE => Some(Parity::Even),
        ClaimId::O1 | ClaimId::O2 | ClaimId::O3 | ClaimId::O4 | ClaimId::CO => Some(Parity::Odd),
        _ => None,
    }
}

/// Whether the conditional claim applies to this target under its reading.
fn condition_holds(claim: ClaimId, t: &QuadTarget) -> bool {
    let var = match claim.reading() {
        Some(Reading::N) => t.n(),
        Some(Reading::M) => t.m(),
        None => return true,
    };
    match claim {
        ClaimId::E5a(_) | ClaimId::E5b(_) => var.is_even(),
        ClaimId::E6(_) => mod_small(var, 3) != 0,
        _ => true,
    }
}

fn square_split_ok(t: &QuadTarget, pair: &(Natural, Natural, Natural)) -> bool {
    let candidate = quadform::try_candidate(t, &pair.2);
    let d = (&pair.1 - &pair.0) >> 1u32;
    candidate.root.as_ref() == Some(&d)
        && &candidate.center - &d == pair.0
        && &candidate.center + &d == pair.1
}

fn divisor_form_holds(t: &QuadTarget, a: &Natural) -> bool {
    let b = (a - 1u32) >> 2u32;
    let m = t.m();
    a * a <= *t.value() && (m * m + &b * &b) % a == Natural::zero()
}

fn in_range_witness_pair(t: &QuadTarget) -> Option<(Natural, Natural, Natural)> {
    quadform::compositeness_witness(t).map(|c| {
        let root = c.root.expect("witness has a root");
        (&c.center - &root, &c.center + &root, c.u)
    })
}

fn evaluate_quad(claim: ClaimId, case: &Case, primes: &[u64], tally: &mut Tally) {
    let t = &case.target;
    if claim_parity(claim) != Some(t.parity()) {
        return;
    }
    let primes3mod4 = primes.iter().copied().filter(|p| p % 4 == 3);
    match claim {
        ClaimId::E1 | ClaimId::O1 => {
            for pair in &case.pairs {
                tally.check(square_split_ok(t, pair), || {
                    case.violation(
                        pair,
                        None,
                        "center -/+ root does not reproduce the pair".into(),
                    )
                });
            }
        }
        ClaimId::E2 | ClaimId::O2 => {
            let interval = quadform::u_interval(t);
            for pair in &case.pairs {
                tally.check(interval.contains(&pair.2), || {
                    case.violation(pair, None, format!("u = {} outside {interval}", pair.2))
                });
            }
        }
        ClaimId::E3 => {
            for pair in &case.pairs {
                for p in primes3mod4.clone() {
                    tally.check(mod_small(&pair.2, p) != 0, || {
                        case.violation(pair, Some(p), format!("u = {} is 0 mod {p}", pair.2))
                    });
                }
            }
        }
        ClaimId::O3 => {
            for pair in &case.pairs {
                for p in primes3mod4.clone() {
                    let r = mod_small(&(&pair.2 * 4u32 + 1u32), p);
                    tally.check(r != 0, || {
                        case.violation(
                            pair,
                            Some(p),
                            format!("4u + 1 = {} is 0 mod {p}", &pair.2 * 4u32 + 1u32),
                        )
                    });
                }
            }
        }
        ClaimId::E4 | ClaimId::O4 => {
            for &p in primes {
                let Ok(admissible) = quadform::admissible_residues_parametric(t, p) else {
                    continue; // p | N
                };
                for pair in &case.pairs {
                    let r = mod_small(&pair.2, p);
                    tally.check(admissible.contains(&r), || {
                        case.violation(pair, Some(p), format!("u = {r} mod {p} not admissible"))
                    });
                }
            }
        }
        ClaimId::E5a(_) | ClaimId::E5b(_) | ClaimId::E6(_) => {
            if !condition_holds(claim, t) {
                return;
            }
            for pair in &case.pairs {
                let (ok, detail) = match claim {
                    ClaimId::E5a(_) => {
                        let r = mod_small(&pair.2, 4);
                        (r == 2, format!("u = {r} mod 4, expected 2"))
                    }
                    ClaimId::E5b(_) => {
                        let r = mod_small(&pair.2, 4);
                        (r != 2, "u = 2 mod 4".to_string())
                    }
                    _ => {
                        let r = mod_small(&pair.2, 3);
                        (r == 1, format!("u = {r} mod 3, expected 1"))
                    }
                };
                let modulus = if matches!(claim, ClaimId::E6(_)) {
                    3
                } else {
                    4
                };
                tally.check(ok, || case.violation(pair, Some(modulus), detail));
            }
        }
        ClaimId::L1 => {
            if !case.composite {
                return;
            }
            let ok = case.pairs.iter().any(|pair| divisor_form_holds(t, &pair.0));
            tally.check(ok, || {
                case.violation(
                    &case.pairs[0],
                    None,
                    "no factor 4b+1 <= sqrt(N) with m^2+b^2 = 0 mod 4b+1".into(),
                )
            });
        }
        ClaimId::CE | ClaimId::CO => {
            let witness = in_range_witness_pair(t);
            let ok = witness.is_some() == case.composite;
            tally.check(ok, || match witness {
                Some(w) => case.violation(
                    &w,
                    None,
                    "square discriminant in range but N is prime".into(),
                ),
                None => case.violation(
                    &case.pairs[0],
                    None,
                    "N composite but no square discriminant in range".into(),
                ),
            });
        }
        _ => {}
    }
}

/// Evaluates the selected `4n² + 1` claims over every `n ∈ [n_min, n_max]`.
/// Fermat claims in `claims` are ignored here (see [`audit_fermat`]).
pub fn audit_claims(
    n_min: u64,
    n_max: u64,
    claims: &BTreeSet<ClaimId>,
    prime_bound: u64,
) -> Result<Vec<ClaimReport>> {
    if n_min == 0 || n_min > n_max {
        return Err(Error::BadRange {
            lo: n_min,
            hi: n_max,
        });
    }
    let selected: Vec<ClaimId> = claims.iter().copied().filter(|c| !c.is_fermat()).collect();
    let primes = arith::odd_primes_up_to(prime_bound);
    let per_n: Vec<Vec<Tally>> = (n_min..=n_max)
        .into_par_iter()
        .map(|n| {
            let case = Case::build(n);
            selected
                .iter()
                .map(|&claim| {
                    let mut tally = Tally::default();
                    evaluate_quad(claim, &case, &primes, &mut tally);
                    tally
                })
                .collect()
        })
        .collect();
    let range = format!("n in [{n_min}, {n_max}], primes <= {prime_bound}");
    Ok(selected
        .iter()
        .enumerate()
        .map(|(i, &claim)| {
            let mut report = ClaimReport {
                claim,
                range: range.clone(),
                instances: 0,
                violations: Vec::new(),
            };
            for tallies in &per_n {
                report.instances += tallies[i].instances;
                report
                    .violations
                    .extend(tallies[i].violations.iter().cloned());
            }
            report
        })
        .collect())
}

/// Fermat numbers up to this size are factored by the trial-division oracle.
const ORACLE_LIMIT_BITS: u64 = 40;

/// Factorization source for `F_n`: the oracle when small, else the table.
fn fermat_primes(t: &FermatTarget) -> Option<Vec<Natural>> {
    if t.value().bits() <= ORACLE_LIMIT_BITS {
        return Some(oracle_factorize(t.value()));
    }
    fermat::known_factorization(t.index())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FermatAudit {
    pub reports: Vec<ClaimReport>,
    /// Indices skipped, with the reason.
    pub skipped: Vec<(u32, String)>,
}

fn fermat_violation(
    t: &FermatTarget,
    p: &Natural,
    q: &Natural,
    lambda: &Natural,
    modulus: Option<u64>,
    detail: String,
) -> Violation {
    Violation {
        n: Natural::from(t.index()),
        value: t.value().clone(),
        pair: (p.clone(), q.clone()),
        u: lambda.clone(),
        modulus,
        detail,
    }
}

fn lucas_form_holds(t: &FermatTarget, p: &Natural) -> bool {
    let Ok(bound) = fermat::lucas_s_bound(t) else {
        return false;
    };
    let (s, rem) = (p - 1u32).div_rem(t.divisor_step());
    rem.is_zero()
        && !s.is_zero()
        && s < bound
        && fermat::lemma31_check(t, &s).is_ok_and(|c| c.divides())
}

fn evaluate_fermat(
    claim: ClaimId,
    t: &FermatTarget,
    pairs: &[(Natural, Natural)],
    primes: &[u64],
    tally: &mut Tally,
) {
    if claim == ClaimId::L2 {
        if pairs.is_empty() || t.index() < fermat::LUCAS_MIN_INDEX {
            return;
        }
        let ok = pairs.iter().any(|(p, _)| lucas_form_holds(t, p));
        let (p, q) = &pairs[0];
        tally.check(ok, || {
            fermat_violation(
                t,
                p,
                q,
                &Natural::zero(),
                None,
                "no s below the bound passes the Lucas-form test".into(),
            )
        });
        return;
    }
    let Ok(interval) = fermat::lambda_interval(t) else {
        return; // below the λ-search precondition
    };
    for (p, q) in pairs {
        let lambda = fermat::lambda_of_pair(t, p, q).expect("oracle pair is proper");
        let violation = |modulus, detail| fermat_violation(t, p, q, &lambda, modulus, detail);
        match claim {
            ClaimId::F1 => {
                let candidate = fermat::try_lambda(t, &lambda);
                let ok = candidate.factors() == Some((p.clone(), q.clone()));
                tally.check(ok, || {
                    violation(None, "center -/+ root does not reproduce the pair".into())
                });
            }
            ClaimId::F2 => {
                tally.check(interval.contains(&lambda), || {
                    violation(
                        None,
                        format!(
                            "lambda outside [{}, {})",
                            interval.lambda_min, interval.lambda_sup
                        ),
                    )
                });
            }
            ClaimId::F3 => {
                for &prime in primes.iter().filter(|p| *p % 4 == 3) {
                    tally.check(mod_small(&lambda, prime) != 0, || {
                        violation(Some(prime), format!("lambda is 0 mod {prime}"))
                    });
                }
            }
            ClaimId::F4 => {
                tally.check(mod_small(&lambda, 4) != 2, || {
                    violation(Some(4), "lambda = 2 mod 4".into())
                });
            }
            ClaimId::F5 => {
                let r = mod_small(&lambda, 3);
                tally.check(r == 1, || {
                    violation(Some(3), format!("lambda = {r} mod 3, expected 1"))
                });
            }
            _ => {}
        }
    }
}

fn fermat_range_label(index: u32, claim: ClaimId) -> String {
    let required = if claim == ClaimId::L2 {
        fermat::LUCAS_MIN_INDEX
    } else {
        fermat::LAMBDA_MIN_INDEX
    };
    if index < required {
        format!("F{index} (out-of-precondition probe: requires index >= {required})")
    } else {
        format!("F{index}")
    }
}

/// Evaluates the selected Fermat-number claims on each listed index.
///
/// One report per (claim, index), ordered by claim then index. Indices whose
/// factorization is neither oracle-reachable nor tabulated are skipped.
pub fn audit_fermat(
    indices: &[u32],
    claims: &BTreeSet<ClaimId>,
    prime_bound: u64,
) -> Result<FermatAudit> {
    let primes = arith::odd_primes_up_to(prime_bound);
    let mut cases = Vec::new();
    let mut skipped = Vec::new();
    let mut sorted: Vec<u32> = indices.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for index in sorted {
        let target = match fermat::make_fermat(index) {
            Ok(t) => t,
            Err(e) => {
                skipped.push((index, e.to_string()));
                continue;
            }
        };
        match fermat_primes(&target) {
            Some(primes) => {
                let pairs = pairs_from_primes(target.value(), &primes);
                cases.push((target, pairs));
            }
            None => skipped.push((index, "factorization unavailable within budget".into())),
        }
    }
    let mut reports = Vec::new();
    for claim in claims.iter().copied().filter(|c| c.is_fermat()) {
        for (target, pairs) in &cases {
            let mut tally = Tally::default();
            evaluate_fermat(claim, target, pairs, &primes, &mut tally);
            reports.push(ClaimReport {
                claim,
                range: format!(
                    "{}, primes <= {prime_bound}",
                    fermat_range_label(target.index(), claim)
                ),
                instances: tally.instances,
                violations: tally.violations,
            });
        }
    }
    Ok(FermatAudit { reports, skipped })
}

/// Replays a recorded violation from its own fields: the pair must still
/// multiply to `N`, the witness must re-derive, and the claim must still
/// fail. Returns false when any of that does not hold.
pub fn reverify(claim: ClaimId, v: &Violation) -> bool {
    if &v.pair.0 * &v.pair.1 != v.value {
        return false;
    }
    if claim.is_fermat() {
        reverify_fermat(claim, v)
    } else {
        reverify_quad(claim, v)
    }
}

fn reverify_quad(claim: ClaimId, v: &Violation) -> bool {
    let Ok(t) = QuadTarget::new(v.n.clone()) else {
        return false;
    };
    if t.value() != &v.value || claim_parity(claim) != Some(t.parity()) {
        return false;
    }
    let pair = (v.pair.0.clone(), v.pair.1.clone(), v.u.clone());
    if matches!(claim, ClaimId::CE | ClaimId::CO) {
        let composite = oracle_factorize(t.value()).len() > 1;
        return quadform::compositeness_witness(&t).is_some() != composite;
    }
    if claim == ClaimId::L1 {
        return proper_factor_pairs(t.value())
            .iter()
            .all(|(a, _)| !divisor_form_holds(&t, a));
    }
    if quadform::derive_u(&t, &pair.0, &pair.1).ok().as_ref() != Some(&v.u) {
        return false;
    }
    let u = &v.u;
    let modulus = v.modulus;
    match claim {
        ClaimId::E1 | ClaimId::O1 => !square_split_ok(&t, &pair),
        ClaimId::E2 | ClaimId::O2 => !quadform::u_interval(&t).contains(u),
        ClaimId::E3 => {
            modulus.is_some_and(|p| p % 4 == 3 && arith::is_prime_u64(p) && mod_small(u, p) == 0)
        }
        ClaimId::O3 => modulus.is_some_and(|p| {
            p % 4 == 3 && arith::is_prime_u64(p) && mod_small(&(u * 4u32 + 1u32), p) == 0
        }),
        ClaimId::E4 | ClaimId::O4 => modulus.is_some_and(|p| {
            quadform::admissible_residues_parametric(&t, p)
                .is_ok_and(|set| !set.contains(&mod_small(u, p)))
        }),
        ClaimId::E5a(_) => condition_holds(claim, &t) && mod_small(u, 4) != 2,
        ClaimId::E5b(_) => condition_holds(claim, &t) && mod_small(u, 4) == 2,
        ClaimId::E6(_) => condition_holds(claim, &t) && mod_small(u, 3) != 1,
        _ => false,
    }
}

fn reverify_fermat(claim: ClaimId, v: &Violation) -> bool {
    let Some(index) = v.n.to_u32() else {
        return false;
    };
    let Ok(t) = fermat::make_fermat(index) else {
        return false;
    };
    if t.value() != &v.value {
        return false;
    }
    let (p, q) = &v.pair;
    if claim == ClaimId::L2 {
        let all_primes = fermat_primes(&t).unwrap_or_default();
        return pairs_from_primes(t.value(), &all_primes)
            .iter()
            .all(|(a, _)| !lucas_form_holds(&t, a));
    }
    let Ok(lambda) = fermat::lambda_of_pair(&t, p, q) else {
        return false;
    };
    if lambda != v.u {
        return false;
    }
    match claim {
        ClaimId::F1 => fermat::try_lambda(&t, &lambda).factors() != Some((p.clone(), q.clone())),
        ClaimId::F2 => fermat::lambda_interval(&t).is_ok_and(|i| !i.contains(&lambda)),
        ClaimId::F3 => v
            .modulus
            .is_some_and(|m| m % 4 == 3 && arith::is_prime_u64(m) && mod_small(&lambda, m) == 0),
        ClaimId::F4 => mod_small(&lambda, 4) == 2,
        ClaimId::F5 => mod_small(&lambda, 3) != 1,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::nat;

    fn nats(xs: &[u64]) -> Vec<Natural> {
        xs.iter().map(|&x| nat(x)).collect()
    }

    fn claims(spec: &str) -> BTreeSet<ClaimId> {
        parse_claims(spec).unwrap()
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(oracle_factorize(&nat(325)), nats(&[5, 5, 13]));
        assert_eq!(oracle_factorize(&nat(9797)), nats(&[97, 101]));
        assert_eq!(oracle_factorize(&nat(101)), nats(&[101]));
        assert_eq!(oracle_factorize(&nat(1)), nats(&[]));
        assert_eq!(
            oracle_factorize(&nat(2 * 2 * 3 * 49)),
            nats(&[2, 2, 3, 7, 7])
        );
    }

    #[test]
    fn oracle_above_u64() {
        // (2^64 + 1) · 3 · 5 exceeds 64 bits; the remainder drops back to the fast path
        let value = (arith::pow2(64) + 1u32) * 15u32;
        assert_eq!(
            oracle_factorize(&value),
            nats(&[3, 5, 274_177, 67_280_421_310_721])
        );
    }

    #[test]
    fn oracle_reconstructs_inputs() {
        for x in 2..200_000u64 {
            let factors = oracle_factorize(&nat(x));
            let product: Natural = factors.iter().product();
            assert_eq!(product, nat(x));
            assert!(factors.iter().all(arith::is_prime), "{x}");
            assert!(factors.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn factor_pair_examples() {
        assert_eq!(
            proper_factor_pairs(&nat(325)),
            vec![(nat(5), nat(65)), (nat(13), nat(25))]
        );
        assert_eq!(proper_factor_pairs(&nat(65)), vec![(nat(5), nat(13))]);
        assert!(proper_factor_pairs(&nat(37)).is_empty());
        assert_eq!(proper_factor_pairs(&nat(4)), vec![(nat(2), nat(2))]);
    }

    #[test]
    fn claim_ids_round_trip_and_select() {
        for c in ClaimId::ALL {
            assert_eq!(c.to_string().parse::<ClaimId>().unwrap(), c);
        }
        assert_eq!(claims("all").len(), ClaimId::ALL.len());
        assert_eq!(claims("E5a").len(), 2);
        assert_eq!(claims("E6[m], O3").len(), 2);
        assert!(parse_claims("E9").is_err());
        assert!(parse_claims("").is_err());
    }

    #[test]
    fn o3_counterexample_at_325() {
        let reports = audit_claims(1, 50, &claims("O3"), 50).unwrap();
        assert_eq!(reports.len(), 1);
        let hit = reports[0]
            .violations
            .iter()
            .find(|v| v.value == nat(325) && v.modulus == Some(3));
        let v = hit.expect("n = 9 violation present");
        assert_eq!(
            (v.n.clone(), v.pair.clone(), v.u.clone()),
            (nat(9), (nat(13), nat(25)), nat(2))
        );
        assert!(reports[0]
            .violations
            .iter()
            .all(|v| reverify(ClaimId::O3, v)));
    }

    #[test]
    fn e6_at_65() {
        let reports = audit_claims(4, 4, &claims("E6"), 97).unwrap();
        assert_eq!(reports.len(), 2);
        for r in reports {
            assert_eq!((r.instances, r.violations.len()), (1, 0), "{}", r.claim);
        }
    }

    #[test]
    fn structural_claims_hold_to_300() {
        let selected = ClaimId::STRUCTURAL.into_iter().collect();
        for r in audit_claims(1, 300, &selected, 97).unwrap() {
            assert!(r.passed(), "{}: {:?}", r.claim, r.violations.first());
            assert!(r.instances > 0);
        }
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(audit_claims(0, 5, &claims("E1"), 97).is_err());
        assert!(audit_claims(5, 1, &claims("E1"), 97).is_err());
    }

    #[test]
    fn forged_violations_do_not_reverify() {
        let honest = Violation {
            n: nat(9),
            value: nat(325),
            pair: (nat(13), nat(25)),
            u: nat(2),
            modulus: Some(3),
            detail: String::new(),
        };
        assert!(reverify(ClaimId::O3, &honest));
        // 7 does not divide 4u + 1 = 9
        assert!(!reverify(
            ClaimId::O3,
            &Violation {
                modulus: Some(7),
                ..honest.clone()
            }
        ));
        // wrong witness
        assert!(!reverify(
            ClaimId::O3,
            &Violation {
                u: nat(4),
                ..honest.clone()
            }
        ));
        // wrong product
        assert!(!reverify(
            ClaimId::O3,
            &Violation {
                pair: (nat(13), nat(26)),
                ..honest.clone()
            }
        ));
        // structural claims never reverify on a real pair
        assert!(!reverify(ClaimId::O1, &honest));
        assert!(!reverify(ClaimId::O2, &honest));
        assert!(!reverify(ClaimId::CO, &honest));
    }

    #[test]
    fn fermat_audit_on_f5() {
        let out = audit_fermat(&[5], &claims("F1,F2,F3,F4,F5,L2"), 97).unwrap();
        assert!(out.skipped.is_empty());
        assert_eq!(out.reports.len(), 6);
        for r in &out.reports {
            assert!(r.passed(), "{}", r.claim);
            assert!(r.instances >= 1);
        }
    }

    #[test]
    fn fermat_audit_probe_and_skip() {
        let out = audit_fermat(&[4, 8], &claims("F4,L2"), 97).unwrap();
        assert_eq!(out.skipped.len(), 1);
        assert_eq!(out.skipped[0].0, 8);
        for r in &out.reports {
            assert_eq!(r.instances, 0);
        }
        assert!(out
            .reports
            .iter()
            .any(|r| r.range.contains("out-of-precondition")));
    }

    #[test]
    fn reports_are_deterministic() {
        let a = audit_claims(1, 120, &claims("all"), 50).unwrap();
        let b = audit_claims(1, 120, &claims("all"), 50).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
