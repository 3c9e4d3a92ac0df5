use std::collections::BTreeSet;

use serde::Serialize;

use super::{labelize, PrimeSet, RootedTree, TermScheme};
use crate::element::{elements_up_to, Elem};
use crate::error::{MagmaError, Result};
use crate::limits::Limits;

/// A rooted tree, its labelization and the instances found up to a bound.
#[derive(Debug, Clone, Serialize)]
pub struct Family {
    pub tree: RootedTree,
    pub scheme: TermScheme,
    pub bound: usize,
    pub instances: Vec<PrimeSet>,
}

impl Family {
    pub fn new(tree: RootedTree, max_len: usize, limits: &Limits) -> Result<Self> {
        let instances = family_instances(&tree, max_len, limits)?;
        Ok(Family { scheme: labelize(&tree), tree, bound: max_len, instances })
    }
}

struct Search<'a> {
    parents: Vec<Option<usize>>,
    summands: &'a [Elem],
    max_len: usize,
    values: Vec<Elem>,
    found: BTreeSet<BTreeSet<Elem>>,
    steps: u64,
    max_steps: u64,
}

impl Search<'_> {
    fn run(&mut self, node: usize) -> Result<()> {
        if node == self.parents.len() {
            self.found.insert(self.values.iter().copied().collect());
            return Ok(());
        }
        let base = self.values[self.parents[node].expect("non-root node")];
        let room = self.max_len.saturating_sub(base.len());
        for &a in self.summands.iter().take_while(|a| a.len() <= room) {
            for v in [a + base, base + a] {
                self.steps += 1;
                if self.steps > self.max_steps {
                    return Err(MagmaError::resource("substitutions", self.max_steps));
                }
                // A repeated value would give fewer than |T| elements.
                if self.values.contains(&v) {
                    continue;
                }
                self.values.push(v);
                self.run(node + 1)?;
                self.values.pop();
            }
        }
        Ok(())
    }
}

/// Distinct prime sets of size `|T|` obtained from `Lab(T)` by substitutions
/// whose values all have length at most `max_len`.
pub fn family_instances(tree: &RootedTree, max_len: usize, limits: &Limits) -> Result<Vec<PrimeSet>> {
    if max_len == 0 {
        return Err(MagmaError::domain("length bound must be positive"));
    }
    let summands = elements_up_to(max_len.saturating_sub(1).max(1), limits)?;
    let mut search = Search {
        parents: tree.parents(),
        summands: &summands,
        max_len,
        values: vec![Elem::ONE],
        found: BTreeSet::new(),
        steps: 0,
        max_steps: limits.max_substitutions,
    };
    search.run(1)?;
    Ok(search.found.into_iter().map(PrimeSet::new_unchecked).collect())
}
