//! Elements of the cyclic free magma as hash-consed binary trees.
//!
//! Every tree is stored exactly once in a process-wide table keyed by the
//! identities of its two children, so an [`Elem`] is a 32-bit handle and
//! equality is handle equality. Powers of two and combs therefore cost one
//! node per level no matter how many leaves they have.
//!
//! Nodes also carry a few shape facts computed at construction time (leaf
//! count, and whether the tree is `2^k`, `n_+` or `n_-`) so that the pretty
//! printer and length queries never walk the tree.

mod level;
mod text;

pub use level::{elements_up_to, enumerate_level};
pub use text::{format_element, parse_element, parse_set, Style};

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::LazyLock;

use dashmap::DashMap;
use num_bigint::BigUint;
use rustc_hash::{FxBuildHasher, FxHashMap, FxHashSet};

use crate::error::{MagmaError, Result};

const NO_POW2: u32 = u32::MAX;
const BIG: u64 = u64::MAX;

/// Largest number of fresh nodes a shorthand (`n_+`, `n_-`, `2^k`) may create.
pub(crate) const MAX_SHORTHAND: u64 = 1 << 20;

struct Node {
    children: Option<(Elem, Elem)>,
    /// Leaf count, or `BIG` when it does not fit a machine word.
    len: u64,
    big_len: Option<Box<BigUint>>,
    pow2: u32,
    /// `n` when the tree is `n_+`, else 0.
    plus: u64,
    /// `n` when the tree is `n_-`, else 0.
    minus: u64,
}

struct Store {
    nodes: boxcar::Vec<Node>,
    index: DashMap<(u32, u32), u32, FxBuildHasher>,
}

static STORE: LazyLock<Store> = LazyLock::new(|| {
    let nodes = boxcar::Vec::new();
    nodes.push(Node {
        children: None,
        len: 1,
        big_len: None,
        pow2: 0,
        plus: 1,
        minus: 1,
    });
    Store { nodes, index: DashMap::with_hasher(FxBuildHasher) }
});

/// An element of the cyclic free magma: the generator `1` or a pair `x + y`.
///
/// Handles are `Copy`; structural equality is identity of interned nodes.
/// The total order sorts by length, then by left summand, then by right
/// summand, which is also the order of [`enumerate_level`].
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Elem(u32);

/// Name used throughout the documentation for the element type.
pub type MagmaElement = Elem;

impl Elem {
    /// The generator `1`.
    pub const ONE: Elem = Elem(0);

    fn node(self) -> &'static Node {
        &STORE.nodes[self.0 as usize]
    }

    /// Interned pair `self + rhs`.
    pub fn add(self, rhs: Elem) -> Elem {
        let store = &*STORE;
        let id = *store.index.entry((self.0, rhs.0)).or_insert_with(|| {
            let node = Node::pair(self, rhs);
            u32::try_from(store.nodes.push(node)).expect("intern table exhausted")
        });
        Elem(id)
    }

    /// The unique summands of a pair; `None` for `1`.
    #[inline]
    pub fn split(self) -> Option<(Elem, Elem)> {
        self.node().children
    }

    #[inline]
    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    /// Leaf count as an arbitrary-precision integer.
    pub fn length(self) -> BigUint {
        let node = self.node();
        match &node.big_len {
            Some(big) => (**big).clone(),
            None => BigUint::from(node.len),
        }
    }

    /// Leaf count when it fits a `u64`.
    #[inline]
    pub fn len_u64(self) -> Option<u64> {
        let len = self.node().len;
        (len != BIG).then_some(len)
    }

    /// Leaf count for elements known to be small (anything enumerable).
    ///
    /// Panics if the length does not fit in a `usize`.
    #[inline]
    pub fn len(self) -> usize {
        self.len_u64()
            .and_then(|l| usize::try_from(l).ok())
            .expect("element length exceeds machine word")
    }

    /// `Some(k)` when the element is the full binary tree `2^k`.
    pub fn pow2_exponent(self) -> Option<u32> {
        let k = self.node().pow2;
        (k != NO_POW2).then_some(k)
    }

    /// `Some(n)` when the element is the right comb `n_+`.
    pub fn plus_index(self) -> Option<u64> {
        let n = self.node().plus;
        (n != 0).then_some(n)
    }

    /// `Some(n)` when the element is the left comb `n_-`.
    pub fn minus_index(self) -> Option<u64> {
        let n = self.node().minus;
        (n != 0).then_some(n)
    }

    /// Position of the node in the intern table. Stable for the life of the process.
    pub fn id(self) -> u32 {
        self.0
    }
}

impl Node {
    fn pair(l: Elem, r: Elem) -> Node {
        let (ln, rn) = (l.node(), r.node());
        let small = (ln.len != BIG && rn.len != BIG)
            .then(|| ln.len.checked_add(rn.len))
            .flatten()
            .filter(|&s| s != BIG);
        let (len, big_len) = match small {
            Some(s) => (s, None),
            None => (BIG, Some(Box::new(l.length() + r.length()))),
        };
        let pow2 = if l == r && ln.pow2 != NO_POW2 { ln.pow2 + 1 } else { NO_POW2 };
        let plus = if l.is_one() && rn.plus != 0 { rn.plus.saturating_add(1) } else { 0 };
        let minus = if r.is_one() && ln.minus != 0 { ln.minus.saturating_add(1) } else { 0 };
        Node { children: Some((l, r)), len, big_len, pow2, plus, minus }
    }
}

impl std::ops::Add for Elem {
    type Output = Elem;

    fn add(self, rhs: Elem) -> Elem {
        Elem::add(self, rhs)
    }
}

impl Hash for Elem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u32(self.0);
    }
}

impl Ord for Elem {
    fn cmp(&self, other: &Self) -> Ordering {
        // Iterative so that deep combs cannot exhaust the stack.
        let mut pending: Vec<(Elem, Elem)> = Vec::new();
        let (mut a, mut b) = (*self, *other);
        loop {
            if a != b {
                let ord = cmp_len(a, b);
                if ord != Ordering::Equal {
                    return ord;
                }
                // Equal lengths and distinct, so both are pairs.
                let (al, ar) = a.split().expect("pair");
                let (bl, br) = b.split().expect("pair");
                pending.push((ar, br));
                a = al;
                b = bl;
                continue;
            }
            match pending.pop() {
                Some((x, y)) => {
                    a = x;
                    b = y;
                }
                None => return Ordering::Equal,
            }
        }
    }
}

impl PartialOrd for Elem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn cmp_len(a: Elem, b: Elem) -> Ordering {
    match (a.len_u64(), b.len_u64()) {
        (Some(x), Some(y)) => x.cmp(&y),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => a.length().cmp(&b.length()),
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let style = if f.alternate() { Style::Canonical } else { Style::Pretty };
        f.write_str(&format_element(*self, style))
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Elem({})", format_element(*self, Style::Pretty))
    }
}

impl std::str::FromStr for Elem {
    type Err = MagmaError;

    fn from_str(s: &str) -> Result<Self> {
        parse_element(s)
    }
}

impl serde::Serialize for Elem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_element(*self, Style::Pretty))
    }
}

impl<'de> serde::Deserialize<'de> for Elem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_element(&text).map_err(serde::de::Error::custom)
    }
}

/// Leaf count of `e`.
pub fn length(e: Elem) -> BigUint {
    e.length()
}

/// Interned pair `x + y`.
pub fn add(x: Elem, y: Elem) -> Elem {
    x.add(y)
}

/// The unique decomposition of `e`, or `None` for `1`.
pub fn split(e: Elem) -> Option<(Elem, Elem)> {
    e.split()
}

/// Shorthand families of named elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shorthand {
    /// `n_-`: `1_- = 1`, `(n+1)_- = n_- + 1`.
    Minus,
    /// `n_+`: `1_+ = 1`, `(n+1)_+ = 1 + n_+`.
    Plus,
    /// `2^k`: `2^0 = 1`, `2^(k+1) = 2^k + 2^k`.
    Pow2,
}

/// Builds `n_-`, `n_+` or `2^n`.
pub fn make(kind: Shorthand, n: u64) -> Result<Elem> {
    if n > MAX_SHORTHAND {
        return Err(MagmaError::resource(format!("shorthand index {n}"), MAX_SHORTHAND));
    }
    match kind {
        Shorthand::Minus | Shorthand::Plus if n == 0 => {
            Err(MagmaError::domain("comb index must be at least 1"))
        }
        Shorthand::Minus => Ok((1..n).fold(Elem::ONE, |acc, _| acc + Elem::ONE)),
        Shorthand::Plus => Ok((1..n).fold(Elem::ONE, |acc, _| Elem::ONE + acc)),
        Shorthand::Pow2 => Ok((0..n).fold(Elem::ONE, |acc, _| acc + acc)),
    }
}

/// `n_-` for small `n`. Panics on `n == 0`.
pub fn minus(n: u64) -> Elem {
    make(Shorthand::Minus, n).expect("valid comb index")
}

/// `n_+` for small `n`. Panics on `n == 0`.
pub fn plus(n: u64) -> Elem {
    make(Shorthand::Plus, n).expect("valid comb index")
}

/// `2^k` for small `k`.
pub fn pow2(k: u64) -> Elem {
    make(Shorthand::Pow2, k).expect("valid exponent")
}

/// `y <= x`: `y` is `x` or is reachable from `x` by repeatedly taking a summand.
pub fn precedes(y: Elem, x: Elem) -> bool {
    if y.is_one() || y == x {
        return true;
    }
    if cmp_len(y, x) != Ordering::Less {
        return false;
    }
    let mut seen = FxHashSet::default();
    let mut stack = vec![x];
    while let Some(z) = stack.pop() {
        if z == y {
            return true;
        }
        if cmp_len(y, z) != Ordering::Less || !seen.insert(z) {
            continue;
        }
        if let Some((l, r)) = z.split() {
            stack.push(l);
            stack.push(r);
        }
    }
    false
}

/// The segment `[e] = { y : y <= e }`.
pub fn segment(e: Elem) -> BTreeSet<Elem> {
    let mut seen = FxHashSet::default();
    let mut stack = vec![e];
    while let Some(z) = stack.pop() {
        if seen.insert(z) {
            if let Some((l, r)) = z.split() {
                stack.push(l);
                stack.push(r);
            }
        }
    }
    seen.into_iter().collect()
}

/// Mirror image: `rev(1) = 1`, `rev(x + y) = rev(y) + rev(x)`.
pub fn reverse(e: Elem) -> Elem {
    fold(e, |_| None, |_, l, r| *r + *l, Elem::ONE)
}

/// Post-order fold over the distinct nodes of `root`, memoised on identity.
///
/// `leaf` may cut the descent by returning a value for any node; `1` that is
/// not cut receives `unit`. Runs with an explicit stack.
pub(crate) fn fold<T: Clone>(
    root: Elem,
    mut leaf: impl FnMut(Elem) -> Option<T>,
    mut combine: impl FnMut(Elem, &T, &T) -> T,
    unit: T,
) -> T {
    let mut memo: FxHashMap<Elem, T> = FxHashMap::default();
    let mut stack = vec![(root, false)];
    while let Some((e, expanded)) = stack.pop() {
        if memo.contains_key(&e) {
            continue;
        }
        if expanded {
            let (l, r) = e.split().expect("expanded nodes are pairs");
            let value = combine(e, &memo[&l], &memo[&r]);
            memo.insert(e, value);
            continue;
        }
        if let Some(v) = leaf(e) {
            memo.insert(e, v);
            continue;
        }
        match e.split() {
            None => {
                memo.insert(e, unit.clone());
            }
            Some((l, r)) => {
                stack.push((e, true));
                stack.push((r, false));
                stack.push((l, false));
            }
        }
    }
    memo.remove(&root).expect("root evaluated")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two() -> Elem {
        Elem::ONE + Elem::ONE
    }

    #[test]
    fn interning_is_identity() {
        let a = Elem::ONE + (Elem::ONE + Elem::ONE);
        let b = Elem::ONE + two();
        assert_eq!(a, b);
        assert_eq!(a.id(), b.id());
        assert_ne!(two() + plus(3), plus(3) + two());
    }

    #[test]
    fn shorthand_flags() {
        assert_eq!(Elem::ONE.pow2_exponent(), Some(0));
        assert_eq!(two().pow2_exponent(), Some(1));
        assert_eq!(two().plus_index(), Some(2));
        assert_eq!(two().minus_index(), Some(2));
        assert_eq!(plus(5).plus_index(), Some(5));
        assert_eq!(plus(5).minus_index(), None);
        assert_eq!(minus(4).minus_index(), Some(4));
        assert_eq!(pow2(3).pow2_exponent(), Some(3));
        assert_eq!(pow2(3).plus_index(), None);
    }

    #[test]
    fn make_examples() {
        assert_eq!(make(Shorthand::Plus, 1).unwrap(), Elem::ONE);
        assert_eq!(make(Shorthand::Minus, 2).unwrap(), two());
        assert_eq!(make(Shorthand::Pow2, 0).unwrap(), Elem::ONE);
        assert_eq!(minus(3).split(), Some((two(), Elem::ONE)));
        assert_eq!(pow2(2).split(), Some((two(), two())));
        assert!(matches!(make(Shorthand::Plus, 0), Err(MagmaError::Domain(_))));
        assert!(matches!(make(Shorthand::Minus, 0), Err(MagmaError::Domain(_))));
        assert!(matches!(make(Shorthand::Pow2, MAX_SHORTHAND + 1), Err(MagmaError::Resource { .. })));
    }

    #[test]
    fn lengths() {
        assert_eq!(Elem::ONE.length(), BigUint::from(1u32));
        assert_eq!(plus(3).length(), BigUint::from(3u32));
        assert_eq!(pow2(10).length(), BigUint::from(1024u32));
        assert_eq!(pow2(63).len_u64(), Some(1 << 63));
        // 2^64 leaves no longer fits a word.
        let big = pow2(64);
        assert_eq!(big.len_u64(), None);
        assert_eq!(big.length(), BigUint::from(1u8) << 64usize);
        assert_eq!(pow2(200).length(), BigUint::from(1u8) << 200usize);
        assert!(pow2(63) < pow2(64));
        assert!(pow2(64) < pow2(64) + Elem::ONE);
    }

    #[test]
    fn order_is_length_then_left_then_right() {
        assert!(Elem::ONE < two());
        // 3_+ = 1 + 2 has the shorter left summand.
        assert!(plus(3) < minus(3));
        assert!(pow2(2) < minus(4));
    }

    #[test]
    fn precedes_examples() {
        for x in [Elem::ONE, two(), plus(4), pow2(3)] {
            assert!(precedes(Elem::ONE, x));
            assert!(precedes(x, x + plus(3)));
            assert!(precedes(plus(3), x + plus(3)));
        }
        assert!(!precedes(plus(3), minus(3)));
        assert!(!precedes(minus(3), plus(3)));
        assert!(precedes(two(), pow2(5)));
        assert!(!precedes(minus(3), pow2(5)));
    }

    #[test]
    fn segment_examples() {
        assert_eq!(segment(two()), BTreeSet::from([Elem::ONE, two()]));
        assert_eq!(segment(minus(3)), BTreeSet::from([Elem::ONE, two(), minus(3)]));
        assert_eq!(segment(pow2(2)), BTreeSet::from([Elem::ONE, two(), pow2(2)]));
        // 2^40 has a segment of 41 elements.
        assert_eq!(segment(pow2(40)).len(), 41);
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(reverse(Elem::ONE), Elem::ONE);
        for n in 1..20 {
            assert_eq!(reverse(plus(n)), minus(n));
            assert_eq!(reverse(minus(n)), plus(n));
        }
        let x = two() + plus(3);
        assert_eq!(reverse(reverse(x)), x);
        assert_eq!(reverse(x), minus(3) + two());
    }

    #[test]
    fn deep_combs_do_not_overflow() {
        let deep = plus(200_000);
        let other = Elem::ONE + (Elem::ONE + minus(199_998));
        assert_eq!(deep.len(), 200_000);
        assert_ne!(deep.cmp(&other), Ordering::Equal);
        assert_eq!(reverse(deep), minus(200_000));
        assert!(precedes(plus(1000), deep));
    }
}
