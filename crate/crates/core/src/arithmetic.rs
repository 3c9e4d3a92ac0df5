//! Multiplicative structure: `x·y` substitutes `x` for every leaf of `y`.
//!
//! Under this product the magma is a free monoid on its prime elements, and
//! the left divisors of any element form a chain. Most operations here are
//! folds over the distinct nodes of one argument.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::element::{fold, Elem};
use crate::error::{MagmaError, Result};
use crate::limits::Limits;

/// `x·y` with the default leaf cap.
pub fn multiply(x: Elem, y: Elem) -> Result<Elem> {
    multiply_capped(x, y, Limits::DEFAULT.max_product_len)
}

/// `x·y`, failing when the result would have more than `max_len` leaves.
pub fn multiply_capped(x: Elem, y: Elem, max_len: u64) -> Result<Elem> {
    let len = x.length() * y.length();
    if len > BigUint::from(max_len) {
        return Err(MagmaError::resource(format!("product of length {len}"), max_len));
    }
    Ok(product(x, y))
}

pub(crate) fn product(x: Elem, y: Elem) -> Elem {
    if x.is_one() {
        return y;
    }
    fold(y, |_| None, |_, l, r| *l + *r, x)
}

/// Length of `a` divides length of `e` (and `a` is not longer).
fn length_divides(a: Elem, e: Elem) -> bool {
    match (a.len_u64(), e.len_u64()) {
        (Some(la), Some(le)) => le >= la && le % la == 0,
        _ => {
            let (la, le) = (a.length(), e.length());
            le >= la && (le % la).is_zero()
        }
    }
}

/// The unique `y` with `a·y = x`, if any.
///
/// Walks `x` top-down: `a` divides `x` iff `x = a`, or `x = u + v` with `a`
/// dividing both, in which case the quotient is the sum of the quotients.
pub fn left_divide(a: Elem, x: Elem) -> Option<Elem> {
    if a.is_one() {
        return Some(x);
    }
    if !length_divides(a, x) {
        return None;
    }
    fold(
        x,
        |e| {
            if e == a {
                Some(Some(Elem::ONE))
            } else if !length_divides(a, e) {
                Some(None)
            } else {
                None
            }
        },
        |_, l, r| match (l, r) {
            (Some(l), Some(r)) => Some(*l + *r),
            _ => None,
        },
        None,
    )
}

/// `a | x` (left divisibility).
pub fn divides(a: Elem, x: Elem) -> bool {
    left_divide(a, x).is_some()
}

/// All left divisors of `x`, shortest first: `1` first and `x` last.
///
/// Uses `D(1) = {1}` and `D(u + v) = {u + v} ∪ (D(u) ∩ D(v))`, memoised on
/// node identity.
pub fn divisor_chain(x: Elem) -> Vec<Elem> {
    let chain = fold(
        x,
        |_| None,
        |e, l: &Arc<Vec<Elem>>, r: &Arc<Vec<Elem>>| {
            let mut common = intersect_chains(l, r);
            common.push(e);
            Arc::new(common)
        },
        Arc::new(vec![Elem::ONE]),
    );
    Arc::try_unwrap(chain).unwrap_or_else(|shared| (*shared).clone())
}

/// Intersection of two divisor chains. Chain members have pairwise distinct
/// lengths, so a merge on length suffices.
fn intersect_chains(a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
        }
    }
    out
}

/// Greatest common left divisor, i.e. the longest member of both chains.
pub fn gcd(x: Elem, y: Elem) -> Elem {
    if x == y {
        return x;
    }
    let common = intersect_chains(&divisor_chain(x), &divisor_chain(y));
    *common.last().expect("1 divides everything")
}

/// Greatest common left divisor computed from the common prefix of the two
/// prime factorizations.
pub fn gcd_by_factorization(x: Elem, y: Elem) -> Elem {
    let (fx, fy) = (factorize(x), factorize(y));
    fx.factors
        .iter()
        .zip(&fy.factors)
        .take_while(|(a, b)| a == b)
        .fold(Elem::ONE, |acc, (p, _)| product(acc, *p))
}

/// `x` is prime iff `x = u + v` with `gcd(u, v) = 1`; `1` is not prime.
pub fn is_prime(x: Elem) -> bool {
    match x.split() {
        None => false,
        Some((u, v)) => intersect_chains(&divisor_chain(u), &divisor_chain(v)).len() == 1,
    }
}

/// Prime factorization: `subject = factors[0]·factors[1]·…`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub subject: Elem,
    pub factors: Vec<Elem>,
}

impl Factorization {
    /// Left-to-right product of the factors.
    pub fn product(&self) -> Elem {
        self.factors.iter().fold(Elem::ONE, |acc, &p| product(acc, p))
    }
}

/// Unique factorization into primes, peeling the shortest nontrivial left
/// divisor (which is necessarily prime) until `1` remains.
pub fn factorize(x: Elem) -> Factorization {
    let mut factors = Vec::new();
    let mut rest = x;
    while !rest.is_one() {
        let chain = divisor_chain(rest);
        let p = chain[1];
        factors.push(p);
        rest = left_divide(p, rest).expect("chain members divide");
    }
    Factorization { subject: x, factors }
}

/// The isomorphism from componentwise pairs onto `M \ {1}`: `(1, y) ↦ 1 + y`,
/// `(x, 1) ↦ x + 1`, `(x1 + x2, y1 + y2) ↦ f(x1, y1) + f(x2, y2)`.
pub fn pair_embed(x: Elem, y: Elem) -> Elem {
    let mut memo: FxHashMap<(Elem, Elem), Elem> = FxHashMap::default();
    let mut stack = vec![((x, y), false)];
    while let Some(((a, b), expanded)) = stack.pop() {
        if memo.contains_key(&(a, b)) {
            continue;
        }
        if a.is_one() {
            memo.insert((a, b), Elem::ONE + b);
            continue;
        }
        if b.is_one() {
            memo.insert((a, b), a + Elem::ONE);
            continue;
        }
        let (a1, a2) = a.split().expect("pair");
        let (b1, b2) = b.split().expect("pair");
        if expanded {
            let value = memo[&(a1, b1)] + memo[&(a2, b2)];
            memo.insert((a, b), value);
        } else {
            stack.push(((a, b), true));
            stack.push(((a2, b2), false));
            stack.push(((a1, b1), false));
        }
    }
    memo[&(x, y)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::{minus, plus, pow2};

    fn two() -> Elem {
        pow2(1)
    }

    fn mul(x: Elem, y: Elem) -> Elem {
        multiply(x, y).unwrap()
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(mul(two(), plus(3)), two() + (two() + two()));
        for x in [Elem::ONE, two(), minus(3), pow2(4)] {
            assert_eq!(mul(x, Elem::ONE), x);
            assert_eq!(mul(Elem::ONE, x), x);
        }
        assert_eq!(mul(minus(3), two()), minus(3) + minus(3));
        assert_eq!(mul(two(), two()), pow2(2));
        assert_eq!(mul(pow2(10), pow2(10)), pow2(20));
    }

    #[test]
    fn multiply_cap() {
        assert!(matches!(multiply(pow2(11), pow2(10)), Err(MagmaError::Resource { .. })));
        assert!(multiply(pow2(10), pow2(10)).is_ok());
        assert_eq!(multiply_capped(pow2(30), pow2(30), u64::MAX).unwrap(), pow2(60));
        assert!(multiply_capped(pow2(40), pow2(40), u64::MAX).is_err());
    }

    #[test]
    fn left_divide_examples() {
        assert_eq!(left_divide(two(), pow2(2)), Some(two()));
        assert_eq!(left_divide(two(), plus(3)), None);
        for x in [Elem::ONE, two(), plus(5), pow2(3) + minus(4)] {
            assert_eq!(left_divide(x, x), Some(Elem::ONE));
            assert_eq!(left_divide(Elem::ONE, x), Some(x));
        }
        assert_eq!(left_divide(minus(3), mul(minus(3), plus(4))), Some(plus(4)));
        assert_eq!(left_divide(pow2(3), pow2(70)), Some(pow2(67)));
        assert_eq!(left_divide(plus(3), pow2(70)), None);
    }

    /// Brute force: `a` divides `x` iff some `y` of length `ℓ(x)/ℓ(a)` has `a·y = x`.
    fn brute_divisors(x: Elem) -> Vec<Elem> {
        let limits = Limits::DEFAULT;
        let n = x.len();
        let mut out = Vec::new();
        for d in 1..=n {
            if n % d != 0 {
                continue;
            }
            for &a in crate::element::enumerate_level(d, &limits).unwrap().iter() {
                let hit = crate::element::enumerate_level(n / d, &limits)
                    .unwrap()
                    .iter()
                    .any(|&y| product(a, y) == x);
                if hit {
                    out.push(a);
                }
            }
        }
        out
    }

    #[test]
    fn divisor_chain_examples() {
        assert_eq!(divisor_chain(Elem::ONE), vec![Elem::ONE]);
        assert_eq!(divisor_chain(pow2(2)), vec![Elem::ONE, two(), pow2(2)]);
        assert_eq!(brute_divisors(pow2(2)), vec![Elem::ONE, two(), pow2(2)]);
        assert_eq!(divisor_chain(two() + plus(3)), vec![Elem::ONE, two() + plus(3)]);
        let x = mul(mul(two(), minus(3)), two());
        assert_eq!(divisor_chain(x), brute_divisors(x));
    }

    #[test]
    fn divisor_chain_matches_brute_force_to_length_8() {
        for n in 1..=8 {
            for &x in crate::element::enumerate_level(n, &Limits::DEFAULT).unwrap().iter() {
                assert_eq!(divisor_chain(x), brute_divisors(x), "{x}");
            }
        }
    }

    #[test]
    fn gcd_examples() {
        for x in [Elem::ONE, plus(4), pow2(3)] {
            assert_eq!(gcd(x, x), x);
        }
        assert_eq!(gcd(minus(3), plus(3)), Elem::ONE);
        assert_eq!(gcd(mul(two(), minus(3)), mul(two(), plus(3))), two());
        assert_eq!(gcd_by_factorization(mul(two(), minus(3)), mul(two(), plus(3))), two());
        assert_eq!(gcd(pow2(5), pow2(3)), pow2(3));
    }

    #[test]
    fn primality_examples() {
        assert!(!is_prime(Elem::ONE));
        assert!(is_prime(two()));
        assert!(!is_prime(pow2(2)));
        assert!(is_prime(plus(3)));
        assert!(is_prime(two() + plus(3)));
        assert!(!is_prime(minus(3) + minus(3)));
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(pow2(3)).factors, vec![two(), two(), two()]);
        assert_eq!(factorize(mul(minus(3), two())).factors, vec![minus(3), two()]);
        for p in [two(), plus(3), two() + plus(3)] {
            assert_eq!(factorize(p).factors, vec![p]);
        }
        assert!(factorize(Elem::ONE).factors.is_empty());
        let x = mul(mul(plus(5), two()), minus(3));
        let f = factorize(x);
        assert_eq!(f.factors, vec![plus(5), two(), minus(3)]);
        assert_eq!(f.product(), x);
    }

    #[test]
    fn pair_embed_examples() {
        for y in [Elem::ONE, two(), plus(3)] {
            assert_eq!(pair_embed(Elem::ONE, y), Elem::ONE + y);
            assert_eq!(pair_embed(y, Elem::ONE), y + Elem::ONE);
        }
        assert_eq!(pair_embed(pow2(2), two()), mul(minus(3), two()));
        assert_ne!(pair_embed(pow2(2), two()), pow2(2) + two());
    }
}
