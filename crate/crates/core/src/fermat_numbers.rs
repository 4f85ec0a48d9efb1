//! Divisor searches for Fermat numbers `F_n = 2^(2^n) + 1`.
//!
//! Every divisor of `F_n` has the form `2^(n+2)·s + 1`. Two searches are
//! provided:
//!
//! * **Lucas form**: `2^(n+2)s + 1` divides `F_n` iff
//!   `2^(2^n − 2(n+2)) + s² ≡ 0 (mod 2^(n+2)s + 1)`, which only needs a
//!   modular power per `s` (valid for `n ≥ 4`).
//! * **λ-centered Fermat search**: the center of any factor pair is
//!   `2^(2n+3)·λ + 1` with `λ` in `[(√F_n − 1)/2^(2n+3), 2^(2^n − (3n+5)))`
//!   (`n ≥ 5`), so centers are scanned in steps of `2^(2n+3)`.
//!
//! Optional λ skips (`λ ≡ 1 mod 3`, `λ ≢ 2 mod 4`, `λ ≢ 0 mod p` for
//! `p ≡ 3 mod 4`) are heuristics: the search counts how many λ each one
//! removed so their effect stays visible.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{ceil_sqrt, is_perfect_square_int, mod_small, pow2, Natural};
use crate::error::{Error, Result};
use crate::json;
use crate::walk::CenterWalk;

/// Largest index whose value may be materialized.
pub const MAX_FERMAT_INDEX: u32 = 30;
/// Lucas-form congruence needs `2^n ≥ 2(n+2)`.
pub const LUCAS_MIN_INDEX: u32 = 4;
/// λ interval needs `2^n ≥ 3n + 5` and a composite `F_n`.
pub const LAMBDA_MIN_INDEX: u32 = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FermatTarget {
    index: u32,
    value: Natural,
    divisor_step: Natural,
    center_step: Natural,
}

impl FermatTarget {
    pub fn index(&self) -> u32 {
        self.index
    }

    /// `F_n`.
    pub fn value(&self) -> &Natural {
        &self.value
    }

    /// `2^(n+2)`.
    pub fn divisor_step(&self) -> &Natural {
        &self.divisor_step
    }

    /// `2^(2n+3)`.
    pub fn center_step(&self) -> &Natural {
        &self.center_step
    }

    fn require(&self, required: u32) -> Result<()> {
        if self.index < required {
            Err(Error::IndexTooSmall {
                index: self.index,
                required,
            })
        } else {
            Ok(())
        }
    }

    /// `2^n − 2(n+2)`, the exponent in the Lucas-form congruence.
    fn lucas_exponent(&self) -> Result<u64> {
        self.require(LUCAS_MIN_INDEX)?;
        let n = u64::from(self.index);
        Ok((1u64 << n)
            .checked_sub(2 * (n + 2))
            .expect("non-negative for n >= 4"))
    }

    /// `2^n − (3n+5)`, the log2 of the λ upper bound.
    fn lambda_sup_exponent(&self) -> Result<u64> {
        self.require(LAMBDA_MIN_INDEX)?;
        let n = u64::from(self.index);
        Ok((1u64 << n)
            .checked_sub(3 * n + 5)
            .expect("non-negative for n >= 5"))
    }
}

pub fn make_fermat(index: u32) -> Result<FermatTarget> {
    if index > MAX_FERMAT_INDEX {
        return Err(Error::IndexTooLarge {
            index,
            max: MAX_FERMAT_INDEX,
        });
    }
    let n = u64::from(index);
    Ok(FermatTarget {
        index,
        value: pow2(1 << n) + 1u32,
        divisor_step: pow2(n + 2),
        center_step: pow2(2 * n + 3),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LucasDivisorCandidate {
    #[serde(serialize_with = "json::nat")]
    pub s: Natural,
    #[serde(serialize_with = "json::nat")]
    pub divisor: Natural,
    #[serde(serialize_with = "json::nat")]
    pub residue: Natural,
}

impl LucasDivisorCandidate {
    pub fn divides(&self) -> bool {
        self.residue.is_zero()
    }
}

/// Residue of `2^(2^n − 2(n+2)) + s²` modulo `2^(n+2)s + 1`.
pub fn lemma31_check(t: &FermatTarget, s: &Natural) -> Result<LucasDivisorCandidate> {
    let exponent = t.lucas_exponent()?;
    let divisor = t.divisor_step() * s + 1u32;
    let power = Natural::from(2u32).modpow(&Natural::from(exponent), &divisor);
    let residue = (power + s * s) % &divisor;
    Ok(LucasDivisorCandidate {
        s: s.clone(),
        divisor,
        residue,
    })
}

/// Exclusive upper bound on `s`: `√(F_n − 1)/2^(n+2) = 2^(2^(n−1) − n − 2)`.
pub fn lucas_s_bound(t: &FermatTarget) -> Result<Natural> {
    t.require(LUCAS_MIN_INDEX)?;
    let n = u64::from(t.index());
    Ok(pow2((1u64 << (n - 1)) - n - 2))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LucasSearch {
    /// Candidates with residue zero, ascending in `s`.
    pub hits: Vec<LucasDivisorCandidate>,
    /// Last `s` actually tested (after capping by the lemma's bound).
    pub s_last: u64,
    /// Whether the cap reached the lemma's bound, so the search was complete.
    pub complete: bool,
}

/// All `s ∈ [1, s_max]` (and below the lemma's bound) whose divisor divides `F_n`.
pub fn lucas_search(t: &FermatTarget, s_max: u64) -> Result<LucasSearch> {
    let bound = lucas_s_bound(t)?;
    let below_bound = (&bound - 1u32).to_u64().unwrap_or(u64::MAX);
    let s_last = s_max.min(below_bound);
    let mut hits = Vec::new();
    for s in 1..=s_last {
        let candidate = lemma31_check(t, &Natural::from(s))?;
        if candidate.divides() {
            debug_assert!((t.value() % &candidate.divisor).is_zero());
            hits.push(candidate);
        }
    }
    Ok(LucasSearch {
        hits,
        s_last,
        complete: s_last == below_bound,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaInterval {
    pub lambda_min: Natural,
    /// Strict upper bound `2^(2^n − (3n+5))`.
    pub lambda_sup: Natural,
}

impl LambdaInterval {
    pub fn contains(&self, lambda: &Natural) -> bool {
        *lambda >= self.lambda_min && *lambda < self.lambda_sup
    }
}

pub fn lambda_interval(t: &FermatTarget) -> Result<LambdaInterval> {
    let sup_exponent = t.lambda_sup_exponent()?;
    let lowest_center = ceil_sqrt(t.value());
    let lambda_min = (lowest_center - 1u32).div_ceil(t.center_step());
    Ok(LambdaInterval {
        lambda_min,
        lambda_sup: pow2(sup_exponent),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LambdaCandidate {
    #[serde(serialize_with = "json::nat")]
    pub lambda: Natural,
    #[serde(serialize_with = "json::nat")]
    pub center: Natural,
    #[serde(serialize_with = "json::int")]
    pub disc: BigInt,
    #[serde(serialize_with = "json::opt_nat")]
    pub root: Option<Natural>,
}

impl LambdaCandidate {
    /// `(center − root, center + root)` when the root is present.
    pub fn factors(&self) -> Option<(Natural, Natural)> {
        let root = self.root.as_ref()?;
        Some((&self.center - root, &self.center + root))
    }
}

pub fn try_lambda(t: &FermatTarget, lambda: &Natural) -> LambdaCandidate {
    let center = t.center_step() * lambda + 1u32;
    let disc = BigInt::from(&center * &center) - BigInt::from(t.value().clone());
    let root = is_perfect_square_int(&disc);
    LambdaCandidate {
        lambda: lambda.clone(),
        center,
        disc,
        root,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LambdaFilters {
    /// Skip `λ ≢ 1 (mod 3)`.
    pub mod3: bool,
    /// Skip `λ ≡ 2 (mod 4)`.
    pub mod4: bool,
    /// Skip `λ ≡ 0 (mod p)` for each listed prime (intended: `p ≡ 3 mod 4`).
    pub primes3mod4: Vec<u64>,
}

impl LambdaFilters {
    pub fn none() -> Self {
        Self::default()
    }

    /// All three skips, with the primes `≡ 3 (mod 4)` up to `bound`.
    pub fn all(bound: u64) -> Self {
        Self {
            mod3: true,
            mod4: true,
            primes3mod4: crate::arith::primes_up_to(bound)
                .into_iter()
                .filter(|p| p % 4 == 3)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LambdaSkips {
    pub mod3: u64,
    pub mod4: u64,
    pub primes3mod4: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaSearch {
    /// Candidates with a square discriminant, each a validated factor pair.
    pub hits: Vec<LambdaCandidate>,
    /// The budget ran out before `λ_sup`.
    pub budget_exhausted: bool,
    pub examined: u64,
    pub skipped: LambdaSkips,
}

/// Scans `λ` upward from `λ_min`, stopping at `min(λ_sup, λ_min + budget)`.
pub fn lambda_search(
    t: &FermatTarget,
    budget: u64,
    filters: &LambdaFilters,
) -> Result<LambdaSearch> {
    let interval = lambda_interval(t)?;
    let available = (&interval.lambda_sup - &interval.lambda_min)
        .to_u64()
        .unwrap_or(u64::MAX);
    let span = available.min(budget);
    let mut search = LambdaSearch {
        hits: Vec::new(),
        budget_exhausted: budget < available,
        examined: 0,
        skipped: LambdaSkips::default(),
    };
    let start_center = t.center_step() * &interval.lambda_min + 1u32;
    let mut walk = CenterWalk::new(start_center, t.center_step().clone(), t.value());
    let mut mod3 = mod_small(&interval.lambda_min, 3);
    let mut mod4 = mod_small(&interval.lambda_min, 4);
    let mut residues: Vec<(u64, u64)> = filters
        .primes3mod4
        .iter()
        .map(|&p| (p, mod_small(&interval.lambda_min, p)))
        .collect();
    for i in 0..span {
        if filters.mod3 && mod3 != 1 {
            search.skipped.mod3 += 1;
        } else if filters.mod4 && mod4 == 2 {
            search.skipped.mod4 += 1;
        } else if residues.iter().any(|&(_, r)| r == 0) {
            search.skipped.primes3mod4 += 1;
        } else {
            search.examined += 1;
            if let Some(root) = walk.root() {
                let candidate = LambdaCandidate {
                    lambda: &interval.lambda_min + i,
                    center: walk.center().clone(),
                    disc: BigInt::from(walk.disc().clone()),
                    root: Some(root),
                };
                let (p, q) = candidate.factors().expect("root present");
                assert!(
                    p > Natural::one() && &p * &q == *t.value(),
                    "square discriminant must split F_n"
                );
                search.hits.push(candidate);
            }
        }
        walk.advance();
        mod3 = (mod3 + 1) % 3;
        mod4 = (mod4 + 1) % 4;
        for (p, r) in residues.iter_mut() {
            *r = (*r + 1) % *p;
        }
    }
    Ok(search)
}

/// `λ = ((p + q)/2 − 1)/2^(2n+3)` for a proper factor pair `p · q = F_n`.
///
/// Cross-checked against `λ = (2^(2^n − 2(n+2)) + s²)/(2^(n+2)s + 1)` with
/// `s = (p − 1)/2^(n+2)`; a mismatch or a non-integral value panics.
pub fn lambda_of_pair(t: &FermatTarget, p: &Natural, q: &Natural) -> Result<Natural> {
    let exponent = t.lucas_exponent()?;
    if *p <= Natural::one() || p > q || p * q != *t.value() {
        return Err(Error::NotAFactorization {
            a: p.to_string(),
            b: q.to_string(),
        });
    }
    let center = (p + q) >> 1u32;
    let (lambda, rem) = (center - 1u32).div_rem(t.center_step());
    assert!(rem.is_zero(), "center of {p} x {q} is not 1 mod 2^(2n+3)");

    let (s, rem) = (p - 1u32).div_rem(t.divisor_step());
    assert!(rem.is_zero(), "{p} is not 1 mod 2^(n+2)");
    let divisor = t.divisor_step() * &s + 1u32;
    let (alt, rem) = (pow2(exponent) + &s * &s).div_rem(&divisor);
    assert!(rem.is_zero(), "Lucas-form quotient is not integral");
    assert_eq!(
        lambda, alt,
        "center and Lucas-form derivations of lambda disagree"
    );
    Ok(lambda)
}

/// Complete factorizations of `F_5`, `F_6` and `F_7` as prime lists.
pub fn known_factorization(index: u32) -> Option<Vec<Natural>> {
    let primes: &[&str] = match index {
        5 => &["641", "6700417"],
        6 => &["274177", "67280421310721"],
        7 => &["59649589127497217", "5704689200685129054721"],
        _ => return None,
    };
    Some(
        primes
            .iter()
            .map(|p| p.parse().expect("decimal literal"))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::nat;

    #[test]
    fn make_fermat_examples() {
        assert_eq!(make_fermat(0).unwrap().value(), &nat(3));
        assert_eq!(make_fermat(5).unwrap().value(), &nat(4_294_967_297));
        assert_eq!(
            make_fermat(6).unwrap().value().to_string(),
            "18446744073709551617"
        );
        let f5 = make_fermat(5).unwrap();
        assert_eq!(f5.divisor_step(), &nat(128));
        assert_eq!(f5.center_step(), &nat(8192));
        assert!(make_fermat(31).is_err());
    }

    #[test]
    fn lemma31_examples() {
        let f5 = make_fermat(5).unwrap();
        let c = lemma31_check(&f5, &nat(5)).unwrap();
        assert_eq!((c.divisor.clone(), c.divides()), (nat(641), true));
        let c = lemma31_check(&f5, &nat(1)).unwrap();
        assert_eq!(c.divisor, nat(129));
        assert!(!c.divides());
        let f6 = make_fermat(6).unwrap();
        let c = lemma31_check(&f6, &nat(1071)).unwrap();
        assert_eq!((c.divisor.clone(), c.divides()), (nat(274_177), true));
        assert!(matches!(
            lemma31_check(&make_fermat(3).unwrap(), &nat(1)),
            Err(Error::IndexTooSmall {
                index: 3,
                required: 4
            })
        ));
    }

    #[test]
    fn lemma31_matches_direct_division_on_f5() {
        let f5 = make_fermat(5).unwrap();
        for s in 1..=1000u64 {
            let c = lemma31_check(&f5, &nat(s)).unwrap();
            let direct = (f5.value() % &c.divisor).is_zero();
            assert_eq!(c.divides(), direct, "s={s}");
        }
    }

    #[test]
    fn lucas_search_examples() {
        let f5 = make_fermat(5).unwrap();
        let found = lucas_search(&f5, 100).unwrap();
        assert_eq!(found.hits.len(), 1);
        assert_eq!(found.hits[0].s, nat(5));
        assert!(lucas_search(&f5, 3).unwrap().hits.is_empty());
        // bound for F5 is 2^9 = 512
        let capped = lucas_search(&f5, 100_000).unwrap();
        assert_eq!((capped.s_last, capped.complete), (511, true));

        let f6 = make_fermat(6).unwrap();
        let found = lucas_search(&f6, 10_000).unwrap();
        let s: Vec<_> = found.hits.iter().map(|c| c.s.clone()).collect();
        assert_eq!(s, vec![nat(1071)]);
    }

    #[test]
    fn lambda_interval_examples() {
        let f5 = lambda_interval(&make_fermat(5).unwrap()).unwrap();
        assert_eq!(
            (f5.lambda_min.clone(), f5.lambda_sup.clone()),
            (nat(8), nat(4096))
        );
        assert!(f5.contains(&nat(409)));
        let f6 = lambda_interval(&make_fermat(6).unwrap()).unwrap();
        assert_eq!(f6.lambda_sup, pow2(41));
        assert_eq!(f6.lambda_min, nat(131_072));
        assert!(lambda_interval(&make_fermat(4).unwrap()).is_err());
    }

    #[test]
    fn lambda_search_examples() {
        let f5 = make_fermat(5).unwrap();
        let filtered = lambda_search(&f5, 10_000, &LambdaFilters::all(97)).unwrap();
        assert!(!filtered.budget_exhausted);
        assert_eq!(filtered.hits.len(), 1);
        assert_eq!(filtered.hits[0].lambda, nat(409));
        assert_eq!(filtered.hits[0].factors(), Some((nat(641), nat(6_700_417))));

        let plain = lambda_search(&f5, 10_000, &LambdaFilters::none()).unwrap();
        assert_eq!(plain.hits, filtered.hits);
        assert_eq!(plain.examined, 4096 - 8);
        assert!(filtered.examined < plain.examined);

        let short = lambda_search(&f5, 100, &LambdaFilters::none()).unwrap();
        assert!(short.budget_exhausted && short.hits.is_empty());
    }

    #[test]
    fn lambda_of_pair_examples() {
        let f5 = make_fermat(5).unwrap();
        let lambda = lambda_of_pair(&f5, &nat(641), &nat(6_700_417)).unwrap();
        assert_eq!(lambda, nat(409));
        assert_eq!(mod_small(&lambda, 3), 1);
        assert_ne!(mod_small(&lambda, 4), 2);
        assert!(lambda_of_pair(&f5, &nat(6_700_417), &nat(641)).is_err());
        assert!(lambda_of_pair(&f5, &nat(1), f5.value()).is_err());

        let f6 = make_fermat(6).unwrap();
        let lambda = lambda_of_pair(&f6, &nat(274_177), &nat(67_280_421_310_721)).unwrap();
        assert!(lambda_interval(&f6).unwrap().contains(&lambda));
        // independent check: 2^15·λ + 1 is the midpoint of the pair
        assert_eq!(
            f6.center_step() * &lambda + 1u32,
            (nat(274_177) + nat(67_280_421_310_721)) >> 1u32
        );
    }

    #[test]
    fn known_factorizations_multiply_out() {
        for index in 5..=7 {
            let product: Natural = known_factorization(index).unwrap().iter().product();
            assert_eq!(&product, make_fermat(index).unwrap().value(), "F{index}");
        }
        assert!(known_factorization(4).is_none());
    }
}
