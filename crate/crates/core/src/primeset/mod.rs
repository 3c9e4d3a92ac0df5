//! Additive prime sets, closed sets, spectra and the rooted-tree families.

mod enumerate;
mod family;
mod spectrum;
mod term;
mod tree;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use enumerate::{
    arborescence, decomposition_digraph, enumerate_closed_sets, enumerate_prime_sets, kmax_level,
    KmaxNode,
};
pub use family::{family_instances, Family};
pub use spectrum::{is_slim, spectrum, spectrum_width, Spectrum};
pub use term::{labelize, substitute, Sign, TermScheme};
pub use tree::{enumerate_rooted_trees, RootedTree};

use crate::element::{segment, Elem};
use crate::error::{MagmaError, Result};
use crate::submagma::submagma;

/// Whether every decomposable member has at least one summand in the set.
pub fn is_prime_set(p: &BTreeSet<Elem>) -> bool {
    p.iter().all(|z| match z.split() {
        None => true,
        Some((x, y)) => p.contains(&x) || p.contains(&y),
    })
}

/// Whether every decomposable member has both summands in the set.
pub fn is_closed_set(p: &BTreeSet<Elem>) -> bool {
    p.iter().all(|z| match z.split() {
        None => true,
        Some((x, y)) => p.contains(&x) && p.contains(&y),
    })
}

/// `[X]`: all subtrees of members of `X`.
pub fn segment_closure(x: &BTreeSet<Elem>) -> BTreeSet<Elem> {
    let mut out = BTreeSet::new();
    for &e in x {
        if !out.contains(&e) {
            out.extend(segment(e));
        }
    }
    out
}

/// A finite additive prime set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "PrimeSetRepr", into = "PrimeSetRepr")]
pub struct PrimeSet(BTreeSet<Elem>);

#[derive(Serialize, Deserialize)]
struct PrimeSetRepr {
    elements: Vec<Elem>,
}

impl TryFrom<PrimeSetRepr> for PrimeSet {
    type Error = MagmaError;

    fn try_from(r: PrimeSetRepr) -> Result<Self> {
        PrimeSet::new(r.elements)
    }
}

impl From<PrimeSet> for PrimeSetRepr {
    fn from(p: PrimeSet) -> Self {
        PrimeSetRepr { elements: p.0.into_iter().collect() }
    }
}

impl PrimeSet {
    pub fn new(elements: impl IntoIterator<Item = Elem>) -> Result<Self> {
        let set: BTreeSet<Elem> = elements.into_iter().collect();
        if let Some(z) = set.iter().find(|z| match z.split() {
            None => false,
            Some((x, y)) => !set.contains(&x) && !set.contains(&y),
        }) {
            return Err(MagmaError::domain(format!("not a prime set: neither summand of {z} is a member")));
        }
        Ok(PrimeSet(set))
    }

    pub(crate) fn new_unchecked(set: BTreeSet<Elem>) -> Self {
        debug_assert!(is_prime_set(&set));
        PrimeSet(set)
    }

    pub fn elements(&self) -> &BTreeSet<Elem> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.0.contains(&x)
    }

    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        self.0.iter().copied()
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(Elem::to_string).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

/// An element outside both the closed set `s` and `⟨a⟩`, showing that `a`
/// does not generate the complement of `s`.
pub fn closed_not_fg_witness(s: &BTreeSet<Elem>, a: &[Elem]) -> Result<Elem> {
    if s.is_empty() || !is_closed_set(s) {
        return Err(MagmaError::domain("expected a nonempty closed set"));
    }
    let Some((&first, rest)) = a.split_first() else {
        return Err(MagmaError::domain("expected at least one generator"));
    };
    if let Some(x) = a.iter().find(|x| s.contains(x)) {
        return Err(MagmaError::domain(format!("generator {x} lies in the closed set")));
    }
    let b = rest.iter().fold(first, |acc, &x| acc + x);
    let w = b + Elem::ONE;
    if s.contains(&w) || submagma(a).contains(w) {
        return Err(MagmaError::domain(format!("{w} is not a witness")));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::{minus, plus, pow2};

    fn set(items: &[Elem]) -> BTreeSet<Elem> {
        items.iter().copied().collect()
    }

    #[test]
    fn prime_and_closed_examples() {
        let p = set(&[Elem::ONE, minus(3), plus(5)]);
        assert!(is_prime_set(&p));
        assert!(!is_closed_set(&p));
        assert!(!is_prime_set(&set(&[pow2(1)])));
        assert!(is_prime_set(&BTreeSet::new()));
        assert!(is_closed_set(&BTreeSet::new()));
        assert!(is_closed_set(&set(&[Elem::ONE, pow2(1), pow2(2), minus(3)])));
    }

    #[test]
    fn closures() {
        assert_eq!(segment_closure(&set(&[pow2(2)])), set(&[Elem::ONE, pow2(1), pow2(2)]));
        let c = set(&[Elem::ONE, pow2(1), minus(3)]);
        assert_eq!(segment_closure(&c), c);
        assert_eq!(
            segment_closure(&set(&[minus(3), plus(3)])),
            set(&[Elem::ONE, pow2(1), minus(3), plus(3)])
        );
    }

    #[test]
    fn prime_set_validation() {
        assert!(PrimeSet::new([pow2(1)]).is_err());
        let p = PrimeSet::new([Elem::ONE, minus(3), plus(5)]).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"elements":["1","3_-","5_+"]}"#);
        assert_eq!(serde_json::from_str::<PrimeSet>(&json).unwrap(), p);
        assert!(serde_json::from_str::<PrimeSet>(r#"{"elements":["2"]}"#).is_err());
    }

    #[test]
    fn not_finitely_generated_witnesses() {
        let one = set(&[Elem::ONE]);
        assert_eq!(closed_not_fg_witness(&one, &[pow2(1)]).unwrap(), minus(3));
        let s = set(&[Elem::ONE, pow2(1)]);
        let w = closed_not_fg_witness(&s, &[minus(3), plus(3)]).unwrap();
        assert_eq!(w, (minus(3) + plus(3)) + Elem::ONE);
        let w = closed_not_fg_witness(&one, &[plus(3)]).unwrap();
        assert_eq!(w, plus(3) + Elem::ONE);
        assert!(closed_not_fg_witness(&one, &[Elem::ONE]).is_err());
        assert!(closed_not_fg_witness(&set(&[minus(3)]), &[pow2(1)]).is_err());
        assert!(closed_not_fg_witness(&one, &[]).is_err());
    }
}
