//! Fermat factorization specialized to `N = 4n² + 1`.
//!
//! Every proper divisor of `N` is `≡ 1 (mod 4)`, which forces the Fermat
//! center `(a + b)/2` of a factor pair into one residue class mod 8:
//!
//! * `n` even (`n = 2m`, `N = 16m² + 1`): center `8u + 1`
//! * `n` odd (`n = 2m + 1`, `N = 4(2m + 1)² + 1`): center `8u + 3`
//!
//! and `u` lies in `[(√N − offset)/8, (N − 5·offset)/40)`. Candidates are
//! enumerated in that interval and may be pruned by admissible residues of
//! `u` modulo small primes. The quadratic-residue filters are sound; the
//! additional congruence filters (`u ≢ 0`, `4u + 1 ≢ 0 mod p` for
//! `p ≡ 3 mod 4`) are not known to be, and stay off unless asked for.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{self, ceil_sqrt, is_perfect_square_int, isqrt, mod_small, Natural};
use crate::error::{Error, Result};
use crate::json;
use crate::walk::CenterWalk;

/// Default bound for sieve filter primes.
pub const DEFAULT_FILTER_BOUND: u64 = 97;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Centers `step·u + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CenterForm {
    pub offset: u32,
    pub step: u32,
}

impl CenterForm {
    pub fn for_parity(parity: Parity) -> Self {
        let offset = match parity {
            Parity::Even => 1,
            Parity::Odd => 3,
        };
        Self { offset, step: 8 }
    }

    pub fn center(&self, u: &Natural) -> Natural {
        u * self.step + self.offset
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadTarget {
    n: Natural,
    value: Natural,
    parity: Parity,
    m: Natural,
}

impl QuadTarget {
    pub fn new(n: Natural) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::ZeroGenerator);
        }
        let value = ((&n * &n) << 2u32) + 1u32;
        let (parity, m) = if n.is_even() {
            (Parity::Even, &n >> 1u32)
        } else {
            (Parity::Odd, (&n - 1u32) >> 1u32)
        };
        Ok(Self {
            n,
            value,
            parity,
            m,
        })
    }

    /// Recovers `n` from `N`, rejecting anything not of the form `4n² + 1`.
    pub fn from_value(value: &Natural) -> Result<Self> {
        let not_form = || Error::NotQuadForm(value.to_string());
        if *value < Natural::from(5u32) {
            return Err(not_form());
        }
        let n = isqrt(&((value - 1u32) >> 2u32));
        let target = Self::new(n).map_err(|_| not_form())?;
        if target.value != *value {
            return Err(not_form());
        }
        Ok(target)
    }

    pub fn n(&self) -> &Natural {
        &self.n
    }

    /// `N = 4n² + 1`.
    pub fn value(&self) -> &Natural {
        &self.value
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn m(&self) -> &Natural {
        &self.m
    }

    pub fn form(&self) -> CenterForm {
        CenterForm::for_parity(self.parity)
    }

    pub fn offset(&self) -> u32 {
        self.form().offset
    }
}

pub fn make_target(n: impl Into<Natural>) -> Result<QuadTarget> {
    QuadTarget::new(n.into())
}

/// Exact rational `numer / denom`, used for the open upper end of the
/// candidate interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fraction {
    pub numer: BigInt,
    pub denom: u32,
}

impl Fraction {
    /// Smallest integer `≥ self`, floored at zero. Integers `u ≥ 0` satisfy
    /// `u < self` exactly when `u < ceil_nonneg()`.
    pub fn ceil_nonneg(&self) -> Natural {
        let ceil = self.numer.div_ceil(&BigInt::from(self.denom));
        ceil.to_biguint().unwrap_or_default()
    }
}

impl fmt::Display for Fraction {
    /// Exact decimal when `denom` divides a power of ten, otherwise `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut denom = u64::from(self.denom);
        let (mut twos, mut fives) = (0u32, 0u32);
        while denom % 2 == 0 {
            denom /= 2;
            twos += 1;
        }
        while denom % 5 == 0 {
            denom /= 5;
            fives += 1;
        }
        if denom != 1 {
            return write!(f, "{}/{}", self.numer, self.denom);
        }
        let digits = twos.max(fives);
        let scale = 10u64.pow(digits) / u64::from(self.denom);
        let scaled = &self.numer * scale;
        let sign = if scaled.sign() == Sign::Minus {
            "-"
        } else {
            ""
        };
        let magnitude = scaled.magnitude();
        let unit = Natural::from(10u64.pow(digits));
        let (whole, frac) = magnitude.div_rem(&unit);
        if frac.is_zero() {
            return write!(f, "{sign}{whole}");
        }
        let frac = format!("{:0>width$}", frac.to_string(), width = digits as usize);
        write!(f, "{sign}{whole}.{}", frac.trim_end_matches('0'))
    }
}

/// Integers `u` with `u_min ≤ u < u_sup`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UInterval {
    pub u_min: Natural,
    pub u_sup: Fraction,
}

impl UInterval {
    pub fn end_exclusive(&self) -> Natural {
        self.u_sup.ceil_nonneg()
    }

    pub fn is_empty(&self) -> bool {
        self.u_min >= self.end_exclusive()
    }

    pub fn len(&self) -> Natural {
        let end = self.end_exclusive();
        if self.u_min >= end {
            Natural::zero()
        } else {
            end - &self.u_min
        }
    }

    pub fn contains(&self, u: &Natural) -> bool {
        *u >= self.u_min && *u < self.end_exclusive()
    }
}

impl fmt::Display for UInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.u_min, self.u_sup)
    }
}

/// Closed lower bound `⌈(⌈√N⌉ − offset)/8⌉` (at least 1) and strict upper
/// bound `(N − 5)/40` (even `n`) or `(N − 15)/40` (odd `n`).
pub fn u_interval(t: &QuadTarget) -> UInterval {
    let form = t.form();
    let lowest_center = ceil_sqrt(t.value());
    let u_min = if lowest_center > Natural::from(form.offset) {
        (lowest_center - form.offset).div_ceil(&Natural::from(form.step))
    } else {
        Natural::zero()
    }
    .max(Natural::one());
    let numer = BigInt::from(t.value().clone()) - 5 * form.offset;
    UInterval {
        u_min,
        u_sup: Fraction { numer, denom: 40 },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    #[serde(serialize_with = "json::nat")]
    pub u: Natural,
    #[serde(serialize_with = "json::nat")]
    pub center: Natural,
    #[serde(serialize_with = "json::int")]
    pub disc: BigInt,
    #[serde(serialize_with = "json::opt_nat")]
    pub root: Option<Natural>,
}

pub fn try_candidate(t: &QuadTarget, u: &Natural) -> Candidate {
    let center = t.form().center(u);
    let disc = BigInt::from(&center * &center) - BigInt::from(t.value().clone());
    let root = is_perfect_square_int(&disc);
    Candidate {
        u: u.clone(),
        center,
        disc,
        root,
    }
}

/// A validated proper factorization `N = a · b` with `a ≤ b`, witnessed by
/// `a = center − d`, `b = center + d`, `center = 8u + offset`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FactorPair {
    #[serde(serialize_with = "json::nat")]
    pub a: Natural,
    #[serde(serialize_with = "json::nat")]
    pub b: Natural,
    #[serde(rename = "u", serialize_with = "json::nat")]
    pub witness_u: Natural,
    #[serde(serialize_with = "json::nat")]
    pub center: Natural,
    #[serde(serialize_with = "json::nat")]
    pub d: Natural,
}

fn check_pair(t: &QuadTarget, a: &Natural, b: &Natural) -> Result<()> {
    let one = Natural::one();
    let proper = *a > one && a <= b && a * b == *t.value();
    let form_ok = mod_small(a, 4) == 1 && mod_small(b, 4) == 1;
    if proper && form_ok {
        Ok(())
    } else {
        Err(Error::NotAFactorization {
            a: a.to_string(),
            b: b.to_string(),
        })
    }
}

pub fn pair_from_candidate(t: &QuadTarget, c: &Candidate) -> Result<FactorPair> {
    let root = c
        .root
        .as_ref()
        .ok_or_else(|| Error::NoRoot { u: c.u.to_string() })?;
    let a = &c.center - root;
    let b = &c.center + root;
    if a.is_one() {
        return Err(Error::TrivialSplit { u: c.u.to_string() });
    }
    check_pair(t, &a, &b)?;
    Ok(FactorPair {
        a,
        b,
        witness_u: c.u.clone(),
        center: c.center.clone(),
        d: root.clone(),
    })
}

fn check_filter_prime(t: &QuadTarget, p: u64) -> Result<u64> {
    if p < 3 || !arith::is_prime_u64(p) {
        return Err(Error::BadModulus(p));
    }
    let residue = mod_small(t.value(), p);
    if residue == 0 {
        return Err(Error::ModulusDividesTarget { modulus: p });
    }
    Ok(residue)
}

/// `{ (x⁻¹N + x − 2·offset) · 16⁻¹ mod p : x ∈ [1, p − 1] }`.
pub fn admissible_residues_parametric(t: &QuadTarget, p: u64) -> Result<BTreeSet<u64>> {
    let n_mod = check_filter_prime(t, p)?;
    let inv16 = arith::mod_inv(&Natural::from(16u32), p)?;
    let shift = (2 * u64::from(t.offset())) % p;
    let mut set = BTreeSet::new();
    for x in 1..p {
        let x_inv = arith::mod_inv(&Natural::from(x), p)?;
        let sum = (arith::mul_mod(x_inv, n_mod, p) + x + p - shift) % p;
        set.insert(arith::mul_mod(sum, inv16, p));
    }
    Ok(set)
}

/// `{ r ∈ [0, p − 1] : ((8r + offset)² − N / p) ≠ −1 }`.
pub fn admissible_residues_qr(t: &QuadTarget, p: u64) -> Result<BTreeSet<u64>> {
    let n_mod = check_filter_prime(t, p)?;
    Ok(qr_bitmap(n_mod, u64::from(t.offset()), p)
        .into_iter()
        .enumerate()
        .filter_map(|(r, ok)| ok.then_some(r as u64))
        .collect())
}

fn qr_bitmap(n_mod: u64, offset: u64, p: u64) -> Vec<bool> {
    (0..p)
        .map(|r| {
            let c = (8 * r + offset) % p;
            let disc = (arith::mul_mod(c, c, p) + p - n_mod) % p;
            arith::legendre_u64(disc, p) != -1
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveOptions {
    /// Odd primes used for residue filtering (and trial-divided first).
    pub filter_primes: Vec<u64>,
    /// Also skip `u ≡ 0` (even n) or `4u + 1 ≡ 0` (odd n) modulo filter
    /// primes `p ≡ 3 (mod 4)`. Not known to be sound.
    pub use_paper_filters: bool,
    /// Collect every witness instead of stopping at the first.
    pub want_all: bool,
}

impl SieveOptions {
    /// QR filters over the odd primes up to `bound`.
    pub fn with_prime_bound(bound: u64) -> Self {
        Self {
            filter_primes: arith::odd_primes_up_to(bound),
            use_paper_filters: false,
            want_all: false,
        }
    }

    pub fn unfiltered() -> Self {
        Self::with_prime_bound(0)
    }
}

impl Default for SieveOptions {
    fn default() -> Self {
        Self::with_prime_bound(DEFAULT_FILTER_BOUND)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Pairs ascending by witness `u` (most balanced first).
    Composite(Vec<FactorPair>),
    Prime,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveOutcome {
    pub verdict: Verdict,
    /// Candidates that reached the perfect-square test.
    pub examined: u64,
    pub skipped_qr: u64,
    pub skipped_paper: u64,
    /// Filter prime that divided `N`, when the trial-division pass answered.
    pub trial_divisor: Option<u64>,
}

impl SieveOutcome {
    pub fn pairs(&self) -> &[FactorPair] {
        match &self.verdict {
            Verdict::Composite(pairs) => pairs,
            Verdict::Prime => &[],
        }
    }
}

struct PrimeFilter {
    p: u64,
    /// `u_min mod p`.
    base: u64,
    admissible: Vec<bool>,
    /// Residue of `u` rejected by the optional congruence filter.
    forbidden: Option<u64>,
}

impl PrimeFilter {
    /// Residue of `u_min + i`.
    #[inline]
    fn residue(&self, i: u64) -> u64 {
        let r = i % self.p + self.base;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }

    #[inline]
    fn passes_qr(&self, i: u64) -> bool {
        self.admissible[self.residue(i) as usize]
    }

    #[inline]
    fn passes_paper(&self, i: u64) -> bool {
        self.forbidden.is_none_or(|f| f != self.residue(i))
    }
}

/// Factor pair `(p, N/p)` from a known divisor, with its witness.
fn pair_from_divisor(t: &QuadTarget, p: &Natural) -> Result<FactorPair> {
    let q = t.value() / p;
    let (a, b) = if *p <= q {
        (p.clone(), q)
    } else {
        (q, p.clone())
    };
    let u = derive_u(t, &a, &b)?;
    let center = t.form().center(&u);
    let d = (&b - &a) >> 1u32;
    Ok(FactorPair {
        a,
        b,
        witness_u: u,
        center,
        d,
    })
}

/// Enumerates the candidate interval in ascending `u`, pruning by the
/// quadratic-residue filters (and optionally the congruence filters).
///
/// Filter primes dividing `N` are trial-divided first: in first-hit mode
/// the resulting pair is returned straight away, in `want_all` mode the
/// prime is dropped from the filters and enumeration proceeds so every pair
/// is reported.
pub fn sieve_enumerate(t: &QuadTarget, options: &SieveOptions) -> Result<SieveOutcome> {
    let mut outcome = SieveOutcome {
        verdict: Verdict::Prime,
        examined: 0,
        skipped_qr: 0,
        skipped_paper: 0,
        trial_divisor: None,
    };
    let interval = u_interval(t);
    let offset = u64::from(t.offset());
    let mut filters = Vec::with_capacity(options.filter_primes.len());
    for &p in &options.filter_primes {
        if p < 3 || !arith::is_prime_u64(p) {
            return Err(Error::BadModulus(p));
        }
        let n_mod = mod_small(t.value(), p);
        if n_mod == 0 {
            if *t.value() == Natural::from(p) {
                continue;
            }
            if !options.want_all {
                let pair = pair_from_divisor(t, &Natural::from(p))?;
                outcome.trial_divisor = Some(p);
                outcome.verdict = Verdict::Composite(vec![pair]);
                return Ok(outcome);
            }
            continue;
        }
        let forbidden = (options.use_paper_filters && p % 4 == 3).then(|| match t.parity() {
            Parity::Even => 0,
            // 4u + 1 ≡ 0  ⇔  u ≡ −4⁻¹
            Parity::Odd => {
                let inv4 = arith::mod_inv(&Natural::from(4u32), p).expect("p is odd");
                (p - inv4) % p
            }
        });
        filters.push(PrimeFilter {
            p,
            base: mod_small(&interval.u_min, p),
            admissible: qr_bitmap(n_mod, offset, p),
            forbidden,
        });
    }
    if interval.is_empty() {
        return Ok(outcome);
    }

    let form = t.form();
    let count = interval
        .len()
        .to_u64()
        .expect("candidate interval exceeds 2^64 entries");
    let mut walk = CenterWalk::new(
        form.center(&interval.u_min),
        Natural::from(form.step),
        t.value(),
    );
    let mut pairs = Vec::new();
    // walk position relative to u_min
    let mut position = 0u64;
    for i in 0..count {
        if !filters.iter().all(|f| f.passes_qr(i)) {
            outcome.skipped_qr += 1;
            continue;
        }
        if !filters.iter().all(|f| f.passes_paper(i)) {
            outcome.skipped_paper += 1;
            continue;
        }
        outcome.examined += 1;
        walk.advance_by(i - position);
        position = i;
        if let Some(root) = walk.root() {
            let candidate = Candidate {
                u: &interval.u_min + i,
                center: walk.center().clone(),
                disc: BigInt::from(walk.disc().clone()),
                root: Some(root),
            };
            pairs.push(pair_from_candidate(t, &candidate)?);
            if !options.want_all {
                break;
            }
        }
    }
    if !pairs.is_empty() {
        outcome.verdict = Verdict::Composite(pairs);
    }
    Ok(outcome)
}

/// First `u` in the interval whose discriminant is a perfect square, found
/// by an unfiltered scan. Empty exactly when `N` is prime.
pub fn compositeness_witness(t: &QuadTarget) -> Option<Candidate> {
    let interval = u_interval(t);
    let count = interval.len().to_u64()?;
    let form = t.form();
    let mut walk = CenterWalk::new(
        form.center(&interval.u_min),
        Natural::from(form.step),
        t.value(),
    );
    for i in 0..count {
        if let Some(root) = walk.root() {
            return Some(Candidate {
                u: &interval.u_min + i,
                center: walk.center().clone(),
                disc: BigInt::from(walk.disc().clone()),
                root: Some(root),
            });
        }
        walk.advance();
    }
    None
}

/// Witness `u = ((a + b)/2 − offset)/8` of a proper factor pair.
///
/// Panics if `u` is not integral or disagrees with the divisor-form
/// identity: both would mean the pair is not what `check_pair` accepted.
pub fn derive_u(t: &QuadTarget, a: &Natural, b: &Natural) -> Result<Natural> {
    check_pair(t, a, b)?;
    let form = t.form();
    let sum = a + b;
    assert!(sum.is_even(), "factors of odd N must be odd");
    let center = sum >> 1u32;
    let (u, rem) = (center - form.offset).div_rem(&Natural::from(form.step));
    assert!(
        rem.is_zero(),
        "center of {a} x {b} is not {} mod {}",
        form.offset,
        form.step
    );
    let identity = derive_u_divisor_form(t, a, b);
    assert_eq!(u, identity, "center and divisor-form derivations disagree");
    Ok(u)
}

/// The same witness computed from the divisor form of the factors.
///
/// Even `n`: with `a = 4β + 1`, `u = (m² + β²)/(4β + 1)`.
/// Odd `n`: with `a = 4α + 1`, `b = 4β + 1`, `α + β = 4u + 1` and
/// `u = m² + m − αβ`; both are checked.
pub fn derive_u_divisor_form(t: &QuadTarget, a: &Natural, b: &Natural) -> Natural {
    let m = t.m();
    let alpha = (a - 1u32) >> 2u32;
    match t.parity() {
        Parity::Even => {
            let (u, rem) = (m * m + &alpha * &alpha).div_rem(a);
            assert!(rem.is_zero(), "{a} does not divide m^2 + beta^2");
            u
        }
        Parity::Odd => {
            let beta = (b - 1u32) >> 2u32;
            let sum = &alpha + &beta;
            let (u, rem) = (sum - 1u32).div_rem(&Natural::from(4u32));
            assert!(rem.is_zero(), "alpha + beta is not 1 mod 4");
            let alt = BigInt::from(m * m + m) - BigInt::from(&alpha * &beta);
            assert_eq!(BigInt::from(u.clone()), alt, "u != m^2 + m - alpha*beta");
            u
        }
    }
}
