//! Exact counts: Catalan numbers `c_n = C_{n-1}` (elements of length `n`) and
//! the number `Π_n` of prime elements of length `n`, by a divisor recursion,
//! by an alternating sum over ordered factorizations, and by enumeration.

use std::collections::BTreeMap;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::arithmetic::is_prime;
use crate::element::enumerate_level;
use crate::error::{MagmaError, Result};
use crate::limits::Limits;

static CATALAN: Mutex<Vec<BigUint>> = Mutex::new(Vec::new());

/// `c_n`, the number of elements of length `n` (`c_0 = 0` by convention).
pub fn catalan_count(n: u64) -> BigUint {
    if n == 0 {
        return BigUint::zero();
    }
    let idx = usize::try_from(n - 1).expect("index fits usize");
    let mut table = CATALAN.lock().expect("catalan cache poisoned");
    if table.is_empty() {
        table.push(BigUint::one());
    }
    // C_{k+1} = C_k (4k + 2) / (k + 2), exact at every step.
    while table.len() <= idx {
        let k = table.len() as u64 - 1;
        let next = &table[k as usize] * BigUint::from(4 * k + 2) / BigUint::from(k + 2);
        table.push(next);
    }
    table[idx].clone()
}

/// A finite integer sequence indexed from 1.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CountSequence {
    pub values: BTreeMap<u64, BigUint>,
}

impl CountSequence {
    pub fn get(&self, n: u64) -> Option<&BigUint> {
        self.values.get(&n)
    }

    /// `c_1, …, c_max`.
    pub fn catalan(max: u64) -> Self {
        (1..=max).map(|n| (n, catalan_count(n))).collect()
    }

    /// `Π_1, …, Π_max` by the divisor recursion.
    pub fn primes(max: u64) -> Self {
        (1..=max).map(|n| (n, prime_count_recursive(n))).collect()
    }
}

impl FromIterator<(u64, BigUint)> for CountSequence {
    fn from_iter<I: IntoIterator<Item = (u64, BigUint)>>(iter: I) -> Self {
        CountSequence { values: iter.into_iter().collect() }
    }
}

/// Partial Dirichlet convolution `(a ⋆ b)_n = Σ a_i b_j` over `ij = n`, `1 < i, j < n`.
pub fn dirichlet_partial(a: &CountSequence, b: &CountSequence, n: u64) -> Result<BigUint> {
    let mut total = BigUint::zero();
    for i in proper_divisors(n) {
        let j = n / i;
        let ai = a.get(i).ok_or_else(|| missing("left", i))?;
        let bj = b.get(j).ok_or_else(|| missing("right", j))?;
        total += ai * bj;
    }
    Ok(total)
}

fn missing(side: &str, n: u64) -> MagmaError {
    MagmaError::domain(format!("{side} sequence has no entry at {n}"))
}

/// Divisors `d` of `n` with `1 < d < n`, ascending.
pub fn proper_divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Number of prime factors of `n` counted with multiplicity.
pub fn big_omega(mut n: u64) -> u32 {
    let mut count = 0;
    let mut p = 2;
    while p * p <= n {
        while n % p == 0 {
            n /= p;
            count += 1;
        }
        p += 1;
    }
    if n > 1 {
        count += 1;
    }
    count
}

/// `Π_n = c_n − Σ_{1<d<n, d|n} Π_d c_{n/d}`, with `Π_1 = 0`.
pub fn prime_count_recursive(n: u64) -> BigUint {
    fn go(n: u64, memo: &mut FxHashMap<u64, BigUint>) -> BigUint {
        if n <= 1 {
            return BigUint::zero();
        }
        if let Some(v) = memo.get(&n) {
            return v.clone();
        }
        let mut composite = BigUint::zero();
        for d in proper_divisors(n) {
            composite += go(d, memo) * catalan_count(n / d);
        }
        let value = catalan_count(n) - composite;
        memo.insert(n, value.clone());
        value
    }
    go(n, &mut FxHashMap::default())
}

/// `Π_n = Σ_{s=1}^{Ω(n)} (−1)^{s+1} Σ_{k_1⋯k_s = n} c_{k_1}⋯c_{k_s}`, the inner
/// sum over ordered factorizations into `s` factors greater than 1. The
/// `s = 1` term is `c_n` itself; for `s ≥ 2` every factor is proper.
pub fn prime_count_closed(n: u64) -> Result<BigUint> {
    if n < 2 {
        return Err(MagmaError::domain("the alternating factorization sum needs n >= 2"));
    }
    let mut memo: FxHashMap<(u64, u32), BigUint> = FxHashMap::default();
    let mut total = BigInt::zero();
    for s in 1..=big_omega(n) {
        let term = BigInt::from(ordered_factorization_sum(n, s, &mut memo));
        if s % 2 == 1 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
        .to_biguint()
        .ok_or_else(|| MagmaError::domain(format!("negative alternating sum at n = {n}")))
}

/// Σ over ordered factorizations of `m` into exactly `s` factors `> 1` of `∏ c_k`.
fn ordered_factorization_sum(m: u64, s: u32, memo: &mut FxHashMap<(u64, u32), BigUint>) -> BigUint {
    if s == 1 {
        return catalan_count(m);
    }
    if let Some(v) = memo.get(&(m, s)) {
        return v.clone();
    }
    let mut total = BigUint::zero();
    for d in proper_divisors(m) {
        let rest = ordered_factorization_sum(m / d, s - 1, memo);
        if !rest.is_zero() {
            total += catalan_count(d) * rest;
        }
    }
    memo.insert((m, s), total.clone());
    total
}

/// `Π_n` by enumerating every element of length `n` and testing primality.
pub fn prime_count_oracle(n: u64, limits: &Limits) -> Result<BigUint> {
    let n = usize::try_from(n).map_err(|_| MagmaError::resource("level index", usize::MAX))?;
    let level = enumerate_level(n, limits)?;
    let count = level.par_iter().filter(|&&x| is_prime(x)).count();
    Ok(BigUint::from(count))
}

/// Exact comparison of the composite fraction `1 − Π_n/c_n` with the bound
/// `n³ / 4^{⌊n/6⌋+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbundanceGap {
    pub n: u64,
    #[serde(serialize_with = "ratio_text")]
    pub gap: BigRational,
    #[serde(serialize_with = "ratio_text")]
    pub bound: BigRational,
    pub holds: bool,
}

fn ratio_text<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

/// Exact abundance check for `n >= 16`.
pub fn abundance_gap(n: u64) -> Result<AbundanceGap> {
    if n < 16 {
        return Err(MagmaError::domain("the abundance bound applies for n >= 16"));
    }
    let c = BigInt::from(catalan_count(n));
    let pi = BigInt::from(prime_count_recursive(n));
    let gap = BigRational::new(&c - pi, c);
    let cube = BigInt::from(n).pow(3);
    let power = BigInt::from(4).pow(u32::try_from(n / 6 + 1).expect("exponent fits"));
    let bound = BigRational::new(cube, power);
    let holds = gap <= bound;
    Ok(AbundanceGap { n, gap, bound, holds })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    /// Catalan numbers from the binomial formula, an independent route.
    fn binomial_catalan(n: u64) -> BigUint {
        let k = n - 1;
        let mut binom = BigUint::one();
        for i in 0..k {
            binom = binom * big(2 * k - i) / big(i + 1);
        }
        binom / big(k + 1)
    }

    #[test]
    fn catalan_examples() {
        assert_eq!(catalan_count(1), big(1));
        assert_eq!(catalan_count(2), big(1));
        assert_eq!(catalan_count(4), big(5));
        assert_eq!(catalan_count(5), big(14));
        assert_eq!(catalan_count(13), big(208012));
        for n in 1..60 {
            assert_eq!(catalan_count(n), binomial_catalan(n), "n = {n}");
        }
        // c_38 = C_37 is the first count beyond 64 bits.
        assert!(catalan_count(37) <= big(u64::MAX));
        assert!(catalan_count(38) > big(u64::MAX));
    }

    #[test]
    fn convolution_examples() {
        let c = CountSequence::catalan(20);
        let pi = CountSequence::primes(20);
        for p in [2, 3, 5, 7, 11, 13] {
            assert_eq!(dirichlet_partial(&c, &c, p).unwrap(), big(0));
            assert_eq!(dirichlet_partial(&pi, &c, p).unwrap(), big(0));
        }
        assert_eq!(dirichlet_partial(&c, &c, 1).unwrap(), big(0));
        assert_eq!(dirichlet_partial(&c, &c, 4).unwrap(), big(1));
        assert_eq!(dirichlet_partial(&pi, &c, 6).unwrap(), big(4));
        let short = CountSequence::catalan(2);
        assert!(matches!(dirichlet_partial(&short, &c, 6), Err(MagmaError::Domain(_))));
    }

    #[test]
    fn recursive_examples() {
        assert_eq!(prime_count_recursive(1), big(0));
        assert_eq!(prime_count_recursive(4), big(4));
        assert_eq!(prime_count_recursive(6), big(38));
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23] {
            assert_eq!(prime_count_recursive(p), catalan_count(p));
        }
    }

    #[test]
    fn closed_examples() {
        for p in [2u64, 3, 5, 7, 11] {
            assert_eq!(prime_count_closed(p).unwrap(), catalan_count(p));
        }
        for p in [2u64, 3, 5] {
            let sq = catalan_count(p) * catalan_count(p);
            assert_eq!(prime_count_closed(p * p).unwrap(), catalan_count(p * p) - sq);
        }
        // pq, p²q, pqr and p³ shapes
        let c = catalan_count;
        assert_eq!(prime_count_closed(6).unwrap(), c(6) - big(2) * c(2) * c(3));
        let p2q = BigInt::from(c(12)) - BigInt::from(big(2) * (c(2) * c(6) + c(3) * c(4)))
            + BigInt::from(big(3) * c(2) * c(2) * c(3));
        assert_eq!(BigInt::from(prime_count_closed(12).unwrap()), p2q);
        let pqr = BigInt::from(c(30))
            - BigInt::from(big(2) * (c(2) * c(15) + c(3) * c(10) + c(5) * c(6)))
            + BigInt::from(big(6) * c(2) * c(3) * c(5));
        assert_eq!(BigInt::from(prime_count_closed(30).unwrap()), pqr);
        let p3 = BigInt::from(c(8)) - BigInt::from(big(2) * c(2) * c(4)) + BigInt::from(c(2).pow(3));
        assert_eq!(BigInt::from(prime_count_closed(8).unwrap()), p3);
        assert_eq!(prime_count_closed(12).unwrap(), big(58688));
        assert!(prime_count_closed(1).is_err());
    }

    #[test]
    fn oracle_examples() {
        let limits = Limits::DEFAULT;
        assert_eq!(prime_count_oracle(1, &limits).unwrap(), big(0));
        assert_eq!(prime_count_oracle(5, &limits).unwrap(), big(14));
        assert_eq!(prime_count_oracle(9, &limits).unwrap(), big(1426));
        assert!(matches!(prime_count_oracle(13, &limits), Err(MagmaError::Resource { .. })));
    }

    #[test]
    fn omega_and_divisors() {
        assert_eq!(big_omega(1), 0);
        assert_eq!(big_omega(2u64.pow(3) * 5u64.pow(4)), 7);
        assert_eq!(big_omega(97), 1);
        assert_eq!(proper_divisors(12), vec![2, 3, 4, 6]);
        assert_eq!(proper_divisors(16), vec![2, 4, 8]);
        assert!(proper_divisors(13).is_empty());
    }

    #[test]
    fn abundance_examples() {
        let g16 = abundance_gap(16).unwrap();
        assert!(g16.gap < BigRational::one());
        assert!(g16.holds);
        assert!(abundance_gap(30).unwrap().holds);
        assert!(abundance_gap(48).unwrap().gap < abundance_gap(24).unwrap().gap);
        assert!(abundance_gap(15).is_err());
    }
}
