use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use super::{is_prime_set, PrimeSet, RootedTree};
use crate::element::{elements_up_to, Elem};
use crate::error::{MagmaError, Result};
use crate::limits::Limits;

/// Grows every set in `level` by one element and deduplicates.
fn extend_level<F>(level: &[BTreeSet<Elem>], limits: &Limits, grow: F) -> Result<Vec<BTreeSet<Elem>>>
where
    F: Fn(&BTreeSet<Elem>) -> Vec<Elem> + Sync,
{
    let grown: Vec<Vec<BTreeSet<Elem>>> = level
        .par_iter()
        .map(|s| {
            grow(s)
                .into_iter()
                .filter(|z| !s.contains(z))
                .map(|z| {
                    let mut t = s.clone();
                    t.insert(z);
                    t
                })
                .collect()
        })
        .collect();
    let mut next = BTreeSet::new();
    for t in grown.into_iter().flatten() {
        next.insert(t);
        if next.len() > limits.max_prime_sets {
            return Err(MagmaError::resource("sets at one enumeration level", limits.max_prime_sets));
        }
    }
    Ok(next.into_iter().collect())
}

/// All prime sets with `k` elements, each of length at most `max_len`,
/// in ascending set order.
pub fn enumerate_prime_sets(k: usize, max_len: usize, limits: &Limits) -> Result<Vec<PrimeSet>> {
    if max_len == 0 {
        return Err(MagmaError::domain("length bound must be positive"));
    }
    if k == 0 {
        return Ok(vec![PrimeSet::new_unchecked(BTreeSet::new())]);
    }
    let summands = elements_up_to(max_len.saturating_sub(1).max(1), limits)?;
    let mut level = vec![BTreeSet::from([Elem::ONE])];
    for _ in 1..k {
        level = extend_level(&level, limits, |s| {
            let mut out = Vec::new();
            for &x in s {
                let room = max_len.saturating_sub(x.len());
                for &a in summands.iter().take_while(|a| a.len() <= room) {
                    out.push(a + x);
                    out.push(x + a);
                }
            }
            out
        })?;
    }
    Ok(level.into_iter().map(PrimeSet::new_unchecked).collect())
}

/// All closed sets with `k` elements, in ascending set order.
pub fn enumerate_closed_sets(k: usize, limits: &Limits) -> Result<Vec<BTreeSet<Elem>>> {
    if k == 0 {
        return Ok(vec![BTreeSet::new()]);
    }
    let mut level = vec![BTreeSet::from([Elem::ONE])];
    for _ in 1..k {
        level = extend_level(&level, limits, |s| {
            s.iter().flat_map(|&u| s.iter().map(move |&v| u + v)).collect()
        })?;
    }
    Ok(level)
}

/// A prime set of one Hasse level with its covers one level down.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KmaxNode {
    pub set: PrimeSet,
    /// Indices into the level below.
    pub parents: Vec<usize>,
}

/// Level `k` of the prime sets (complements of the `k`-maximal submagmas),
/// elements of length at most `max_len`.
pub fn kmax_level(k: usize, max_len: usize, limits: &Limits) -> Result<Vec<KmaxNode>> {
    let sets = enumerate_prime_sets(k, max_len, limits)?;
    if k == 0 {
        return Ok(sets.into_iter().map(|set| KmaxNode { set, parents: Vec::new() }).collect());
    }
    let below: BTreeMap<PrimeSet, usize> = enumerate_prime_sets(k - 1, max_len, limits)?
        .into_iter()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    Ok(sets
        .into_iter()
        .map(|set| {
            let mut parents: Vec<usize> = set
                .iter()
                .filter_map(|z| {
                    let mut q = set.elements().clone();
                    q.remove(&z);
                    if !is_prime_set(&q) {
                        return None;
                    }
                    below.get(&PrimeSet::new_unchecked(q)).copied()
                })
                .collect();
            parents.sort_unstable();
            KmaxNode { set, parents }
        })
        .collect())
}

/// Edges `z → z'` where `z' ∈ p` is a summand of `z`.
pub fn decomposition_digraph(p: &BTreeSet<Elem>) -> Result<Vec<(Elem, Elem)>> {
    if !is_prime_set(p) {
        return Err(MagmaError::domain("decomposition digraph needs a prime set"));
    }
    let mut edges = BTreeSet::new();
    for &z in p {
        if let Some((x, y)) = z.split() {
            for t in [x, y] {
                if p.contains(&t) {
                    edges.insert((z, t));
                }
            }
        }
    }
    Ok(edges.into_iter().collect())
}

/// Breadth-first spanning arborescence of the reversed digraph, rooted at 1.
pub fn arborescence(p: &BTreeSet<Elem>) -> Result<RootedTree> {
    if p.is_empty() {
        return Err(MagmaError::domain("arborescence needs a nonempty prime set"));
    }
    let edges = decomposition_digraph(p)?;
    let mut out: BTreeMap<Elem, Vec<Elem>> = BTreeMap::new();
    for &(z, t) in &edges {
        out.entry(t).or_default().push(z);
    }
    let mut order: BTreeMap<Elem, usize> = BTreeMap::from([(Elem::ONE, 0)]);
    let mut parents = vec![None];
    let mut queue = VecDeque::from([Elem::ONE]);
    while let Some(u) = queue.pop_front() {
        let ui = order[&u];
        for &z in out.get(&u).map_or(&[][..], Vec::as_slice) {
            if !order.contains_key(&z) {
                order.insert(z, parents.len());
                parents.push(Some(ui));
                queue.push_back(z);
            }
        }
    }
    if parents.len() != p.len() {
        return Err(MagmaError::domain("some member does not reach 1"));
    }
    RootedTree::from_parents(&parents)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::{minus, parse_set, plus, pow2};

    fn sets(ps: &[PrimeSet]) -> BTreeSet<BTreeSet<Elem>> {
        ps.iter().map(|p| p.elements().clone()).collect()
    }

    /// Oracle: every subset of the elements up to `max_len` of size `k`
    /// that passes the prime test.
    fn brute(k: usize, max_len: usize) -> BTreeSet<BTreeSet<Elem>> {
        let all = elements_up_to(max_len, &Limits::DEFAULT).unwrap();
        let n = all.len();
        assert!(n <= 24);
        (0u32..1 << n)
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).map(|i| all[i]).collect::<BTreeSet<_>>())
            .filter(is_prime_set)
            .collect()
    }

    #[test]
    fn small_levels() {
        let l = Limits::DEFAULT;
        assert_eq!(sets(&enumerate_prime_sets(0, 3, &l).unwrap()), BTreeSet::from([BTreeSet::new()]));
        assert_eq!(sets(&enumerate_prime_sets(1, 7, &l).unwrap()), BTreeSet::from([BTreeSet::from([Elem::ONE])]));
        let two = enumerate_prime_sets(2, 3, &l).unwrap();
        let expected: BTreeSet<BTreeSet<Elem>> = [pow2(1), minus(3), plus(3)]
            .into_iter()
            .map(|x| BTreeSet::from([Elem::ONE, x]))
            .collect();
        assert_eq!(sets(&two), expected);
    }

    #[test]
    fn matches_subset_oracle() {
        let l = Limits::DEFAULT;
        for max_len in 1..=4 {
            for k in 0..=5 {
                assert_eq!(sets(&enumerate_prime_sets(k, max_len, &l).unwrap()), brute(k, max_len), "k={k} L={max_len}");
            }
        }
    }

    #[test]
    fn closed_sets_are_closed_and_complete() {
        let l = Limits::DEFAULT;
        for k in 0..=5 {
            let closed = enumerate_closed_sets(k, &l).unwrap();
            assert!(closed.iter().all(|s| super::super::is_closed_set(s) && s.len() == k));
            let max_len = 1usize << k.saturating_sub(1);
            let oracle: BTreeSet<BTreeSet<Elem>> = if max_len <= 4 {
                brute(k, max_len).into_iter().filter(super::super::is_closed_set).collect()
            } else {
                continue;
            };
            assert_eq!(closed.into_iter().collect::<BTreeSet<_>>(), oracle);
        }
    }

    #[test]
    fn hasse_levels() {
        let l = Limits::DEFAULT;
        let top = kmax_level(0, 3, &l).unwrap();
        assert_eq!(top.len(), 1);
        assert!(top[0].set.is_empty());
        let one = kmax_level(1, 3, &l).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].parents, vec![0]);
        let two = kmax_level(2, 3, &l).unwrap();
        assert_eq!(two.len(), 3);
        assert!(two.iter().all(|n| n.parents == vec![0]));
        let four = kmax_level(4, 4, &l).unwrap();
        let three = enumerate_prime_sets(3, 4, &l).unwrap();
        for node in &four {
            assert!(!node.parents.is_empty());
            for &i in &node.parents {
                assert_eq!(node.set.elements().difference(three[i].elements()).count(), 1);
            }
        }
    }

    #[test]
    fn digraphs() {
        let p = parse_set("{1, 3_-, 5_+}").unwrap();
        assert_eq!(decomposition_digraph(&p).unwrap(), vec![(minus(3), Elem::ONE), (plus(5), Elem::ONE)]);
        assert!(decomposition_digraph(&BTreeSet::from([Elem::ONE])).unwrap().is_empty());
        let chain = BTreeSet::from([Elem::ONE, pow2(1), pow2(2)]);
        assert_eq!(decomposition_digraph(&chain).unwrap(), vec![(pow2(1), Elem::ONE), (pow2(2), pow2(1))]);
        assert!(decomposition_digraph(&BTreeSet::from([pow2(1)])).is_err());
    }

    #[test]
    fn arborescences() {
        let star = arborescence(&parse_set("{1, 3_-, 5_+}").unwrap()).unwrap();
        assert_eq!(star.encoding(), "(()())");
        let path = arborescence(&parse_set("{1, 2, 2^2, 2^3, 2^4}").unwrap()).unwrap();
        assert_eq!(path.encoding(), "((((()))))");
        assert_eq!(arborescence(&BTreeSet::from([Elem::ONE])).unwrap(), RootedTree::single());
        assert!(arborescence(&BTreeSet::new()).is_err());
    }
}
