use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::element::{elements_up_to, Elem};
use crate::error::Result;
use crate::limits::Limits;

/// Every element up to a length bound, indexed so that summands always
/// precede their sum.
#[derive(Debug)]
pub struct Truncation {
    bound: usize,
    elements: Vec<Elem>,
    index: FxHashMap<Elem, u32>,
    children: Vec<Option<(u32, u32)>>,
}

/// A finite slice of a submagma computation, tagged with its length bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruncatedSet {
    pub bound: u64,
    pub elements: BTreeSet<Elem>,
}

impl Truncation {
    pub fn new(bound: usize, limits: &Limits) -> Result<Self> {
        let elements = elements_up_to(bound, limits)?;
        let index: FxHashMap<Elem, u32> =
            elements.iter().enumerate().map(|(i, &e)| (e, i as u32)).collect();
        let children = elements
            .iter()
            .map(|e| e.split().map(|(l, r)| (index[&l], index[&r])))
            .collect();
        Ok(Truncation { bound, elements, index, children })
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn index_of(&self, e: Elem) -> Option<usize> {
        self.index.get(&e).map(|&i| i as usize)
    }

    /// Members of `⟨gens⟩` within the bound, as a bitset over [`Self::elements`].
    pub fn closure(&self, gens: &[Elem]) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(self.elements.len());
        for &g in gens {
            if let Some(i) = self.index_of(g) {
                bits.insert(i);
            }
        }
        for (i, c) in self.children.iter().enumerate() {
            if let Some((l, r)) = *c {
                if bits.contains(l as usize) && bits.contains(r as usize) {
                    bits.insert(i);
                }
            }
        }
        bits
    }

    pub fn collect(&self, bits: &FixedBitSet) -> TruncatedSet {
        TruncatedSet {
            bound: self.bound as u64,
            elements: bits.ones().map(|i| self.elements[i]).collect(),
        }
    }
}
