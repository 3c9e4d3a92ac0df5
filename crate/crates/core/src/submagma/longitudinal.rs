use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::element::Elem;
use crate::error::{MagmaError, Result};

const MAX_SMALLEST_GENERATOR: u64 = 1 << 22;

/// Preimage under the length map of the additive semigroup generated by
/// `numeric_generators`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LongitudinalSpec {
    numeric_generators: BTreeSet<u64>,
    #[serde(skip)]
    apery: Vec<Option<u64>>,
}

impl LongitudinalSpec {
    pub fn new(generators: impl IntoIterator<Item = u64>) -> Result<Self> {
        let numeric_generators: BTreeSet<u64> = generators.into_iter().collect();
        if numeric_generators.contains(&0) {
            return Err(MagmaError::domain("numeric generators must be positive"));
        }
        let apery = match numeric_generators.first() {
            None => Vec::new(),
            Some(&m) if m > MAX_SMALLEST_GENERATOR => {
                return Err(MagmaError::resource(
                    format!("smallest numeric generator {m}"),
                    MAX_SMALLEST_GENERATOR,
                ))
            }
            Some(&m) => apery_set(m, &numeric_generators),
        };
        Ok(LongitudinalSpec { numeric_generators, apery })
    }

    /// `ℓ⁻¹({n ≥ i})`, generated by `i, …, 2i−1`.
    pub fn at_least(i: u64) -> Result<Self> {
        if i == 0 {
            return Err(MagmaError::domain("threshold must be positive"));
        }
        Self::new(i..2 * i)
    }

    pub fn numeric_generators(&self) -> &BTreeSet<u64> {
        &self.numeric_generators
    }

    pub fn contains_length(&self, n: &BigUint) -> bool {
        let Some(&m) = self.numeric_generators.first() else { return false };
        let r = (n % m).to_usize().expect("residue below modulus");
        match self.apery[r] {
            None => false,
            Some(least) => *n >= BigUint::from(least),
        }
    }
}

/// Smallest representable value in each residue class modulo `m`
/// (shortest paths on the residue graph).
fn apery_set(m: u64, gens: &BTreeSet<u64>) -> Vec<Option<u64>> {
    let m_usize = m as usize;
    let mut dist: Vec<Option<u64>> = vec![None; m_usize];
    dist[0] = Some(0);
    let mut heap = BinaryHeap::from([Reverse((0u64, 0usize))]);
    while let Some(Reverse((d, r))) = heap.pop() {
        if dist[r] != Some(d) {
            continue;
        }
        for &g in gens.iter().skip(1) {
            let nd = d.saturating_add(g);
            let nr = ((r as u64 + g % m) % m) as usize;
            if dist[nr].is_none_or(|old| nd < old) {
                dist[nr] = Some(nd);
                heap.push(Reverse((nd, nr)));
            }
        }
    }
    dist
}

pub fn longitudinal_contains(spec: &LongitudinalSpec, x: Elem) -> bool {
    spec.contains_length(&x.length())
}
