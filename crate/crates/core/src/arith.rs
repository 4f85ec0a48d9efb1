//! Exact integer utilities shared by the rest of the crate.
//!
//! Every quantity is a [`Natural`] (an unbounded `BigUint`) unless it is a
//! small modulus, in which case plain `u64` is used. Nothing here overflows
//! silently.

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Non-negative integer of unbounded magnitude.
pub type Natural = BigUint;

/// Product of the four square-screen moduli: 64 · 63 · 65 · 11.
pub const SQUARE_SCREEN_MODULUS: u32 = 64 * 63 * 65 * 11;

/// Extra probable-prime rounds used by [`is_prime`] above 2^64.
pub const DEFAULT_PRIME_ROUNDS: usize = 16;

/// Bases that make Miller-Rabin exact for every input below 2^64.
const U64_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

const fn square_table<const M: usize>() -> [bool; M] {
    let mut table = [false; M];
    let mut i = 0;
    while i < M {
        table[(i * i) % M] = true;
        i += 1;
    }
    table
}

static SQUARES_MOD_64: [bool; 64] = square_table::<64>();
static SQUARES_MOD_63: [bool; 63] = square_table::<63>();
static SQUARES_MOD_65: [bool; 65] = square_table::<65>();
static SQUARES_MOD_11: [bool; 11] = square_table::<11>();

pub fn nat(x: u64) -> Natural {
    Natural::from(x)
}

/// `2^k` as a natural.
pub fn pow2(k: u64) -> Natural {
    Natural::one() << k
}

/// Floor square root by integer Newton iteration.
pub fn isqrt(x: &Natural) -> Natural {
    if x.is_zero() {
        return Natural::zero();
    }
    // 2^ceil(bits/2) is always at least sqrt(x), so the iteration decreases
    // monotonically until it reaches the floor root.
    let mut root = Natural::one() << x.bits().div_ceil(2);
    loop {
        let next = (&root + x / &root) >> 1u32;
        if next >= root {
            break;
        }
        root = next;
    }
    debug_assert!(&root * &root <= *x);
    debug_assert!((&root + 1u32) * (&root + 1u32) > *x);
    root
}

/// Smallest `r` with `r² ≥ x`.
pub fn ceil_sqrt(x: &Natural) -> Natural {
    let root = isqrt(x);
    if &root * &root == *x {
        root
    } else {
        root + 1u32
    }
}

/// Residue screen for squares. `residue` is `x mod SQUARE_SCREEN_MODULUS`;
/// returns false only when `x` is certainly not a perfect square.
#[inline]
pub fn passes_square_screen(residue: u32) -> bool {
    SQUARES_MOD_64[(residue % 64) as usize]
        && SQUARES_MOD_63[(residue % 63) as usize]
        && SQUARES_MOD_65[(residue % 65) as usize]
        && SQUARES_MOD_11[(residue % 11) as usize]
}

/// Exact square test without the residue screen.
pub fn exact_square_root(x: &Natural) -> Option<Natural> {
    let root = isqrt(x);
    (&root * &root == *x).then_some(root)
}

/// Returns `√x` when `x` is a perfect square.
pub fn is_perfect_square(x: &Natural) -> Option<Natural> {
    let residue = (x % SQUARE_SCREEN_MODULUS)
        .to_u32()
        .expect("residue below u32 modulus");
    if !passes_square_screen(residue) {
        return None;
    }
    exact_square_root(x)
}

/// Signed variant: negative inputs are never squares.
pub fn is_perfect_square_int(x: &BigInt) -> Option<Natural> {
    x.to_biguint().and_then(|x| is_perfect_square(&x))
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// `x mod p` for a small modulus.
#[inline]
pub fn mod_small(x: &Natural, p: u64) -> u64 {
    (x % p).to_u64().expect("residue below u64 modulus")
}

/// Inverse of `a` modulo the odd prime `p`.
pub fn mod_inv(a: &Natural, p: u64) -> Result<u64> {
    let a = mod_small(a, p);
    if a == 0 {
        return Err(Error::NotInvertible { modulus: p });
    }
    let egcd = (a as i128).extended_gcd(&(p as i128));
    debug_assert_eq!(egcd.gcd, 1);
    Ok(egcd.x.rem_euclid(p as i128) as u64)
}

/// Legendre symbol of a small residue `a mod p`, by Euler's criterion.
pub fn legendre_u64(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Legendre symbol `(a/p)` for an arbitrary integer `a` and odd prime `p`.
pub fn legendre(a: &BigInt, p: u64) -> i8 {
    let residue = a
        .mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("floor residue is non-negative and below p");
    legendre_u64(residue, p)
}

fn strong_probable_prime_u64(n: u64, base: u64) -> bool {
    let base = base % n;
    if base == 0 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let mut x = pow_mod(base, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in U64_WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    U64_WITNESSES
        .iter()
        .all(|&base| strong_probable_prime_u64(n, base))
}

fn strong_probable_prime(n: &Natural, base: &Natural) -> bool {
    let n_minus_one = n - 1u32;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    let mut x = base.modpow(&d, n);
    if x.is_one() || x == n_minus_one {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_one {
            return true;
        }
    }
    false
}

/// Primality with an explicit number of extra rounds above 2^64.
///
/// Exact below 2^64. Above it, the fixed bases 2..37 are followed by
/// `rounds` random bases drawn from a ChaCha8 stream seeded with the low
/// 32 bytes of `x`, so repeated calls on the same input agree.
pub fn is_prime_with_rounds(x: &Natural, rounds: usize) -> bool {
    if let Some(small) = x.to_u64() {
        return is_prime_u64(small);
    }
    if x.is_even() {
        return false;
    }
    let fixed = U64_WITNESSES.iter().map(|&b| nat(b));
    let mut seed = [0u8; 32];
    for (slot, byte) in seed.iter_mut().zip(x.to_bytes_le()) {
        *slot = byte;
    }
    let mut rng = ChaCha8Rng::from_seed(seed);
    let low = nat(2);
    let high = x - 1u32;
    let random: Vec<Natural> = (0..rounds)
        .map(|_| rng.gen_biguint_range(&low, &high))
        .collect();
    fixed
        .chain(random)
        .all(|base| strong_probable_prime(x, &base))
}

pub fn is_prime(x: &Natural) -> bool {
    is_prime_with_rounds(x, DEFAULT_PRIME_ROUNDS)
}

/// All primes `≤ bound`, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let limit = usize::try_from(bound).expect("sieve bound fits in memory");
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// Odd primes `≤ bound`.
pub fn odd_primes_up_to(bound: u64) -> Vec<u64> {
    primes_up_to(bound)
        .into_iter()
        .filter(|&p| p != 2)
        .collect()
}
