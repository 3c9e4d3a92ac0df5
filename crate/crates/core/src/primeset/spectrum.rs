use std::collections::BTreeSet;

use serde::Serialize;

use super::PrimeSet;
use crate::element::Elem;
use crate::error::{MagmaError, Result};
use crate::limits::Limits;

/// Prime subsets of a prime set, ordered by inclusion.
///
/// Nodes are bitmasks over [`Spectrum::base`], sorted by size then mask.
/// Covers are `(lower, upper)` node indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    base: Vec<Elem>,
    nodes: Vec<u32>,
    covers: Vec<(usize, usize)>,
    length: usize,
    width: usize,
}

impl Spectrum {
    pub fn base(&self) -> &[Elem] {
        &self.base
    }

    pub fn node_masks(&self) -> &[u32] {
        &self.nodes
    }

    pub fn node_set(&self, i: usize) -> BTreeSet<Elem> {
        let m = self.nodes[i];
        self.base.iter().enumerate().filter(|(j, _)| m >> j & 1 == 1).map(|(_, &e)| e).collect()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Edges in a longest chain.
    pub fn length(&self) -> usize {
        self.length
    }

    /// Size of a largest antichain.
    pub fn width(&self) -> usize {
        self.width
    }
}

impl Serialize for Spectrum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let nodes: Vec<Vec<Elem>> =
            (0..self.nodes.len()).map(|i| self.node_set(i).into_iter().collect()).collect();
        let mut st = s.serialize_struct("Spectrum", 4)?;
        st.serialize_field("nodes", &nodes)?;
        st.serialize_field("covers", &self.covers)?;
        st.serialize_field("length", &self.length)?;
        st.serialize_field("width", &self.width)?;
        st.end()
    }
}

pub fn spectrum(p: &PrimeSet, limits: &Limits) -> Result<Spectrum> {
    let base: Vec<Elem> = p.iter().collect();
    let n = base.len();
    if n > limits.max_spectrum_size {
        return Err(MagmaError::resource(
            format!("spectrum over 2^{n} subsets"),
            format!("2^{}", limits.max_spectrum_size),
        ));
    }
    // For each member that is a sum, the mask of its summands lying in the base.
    let needs: Vec<(u32, u32)> = base
        .iter()
        .enumerate()
        .filter_map(|(i, z)| {
            let (x, y) = z.split()?;
            let bit = |e: Elem| base.binary_search(&e).map_or(0, |j| 1u32 << j);
            Some((1u32 << i, bit(x) | bit(y)))
        })
        .collect();
    let is_prime = |s: u32| needs.iter().all(|&(z, want)| s & z == 0 || s & want != 0);

    let mut nodes: Vec<u32> = (0..1u32 << n).filter(|&s| is_prime(s)).collect();
    nodes.sort_by_key(|&s| (s.count_ones(), s));
    let position: rustc_hash::FxHashMap<u32, usize> =
        nodes.iter().enumerate().map(|(i, &s)| (s, i)).collect();

    // Every cover removes exactly one element: a minimal element of the
    // difference always keeps the smaller set prime.
    let mut covers = Vec::new();
    for (hi, &s) in nodes.iter().enumerate() {
        for j in 0..n {
            if s >> j & 1 == 1 {
                if let Some(&lo) = position.get(&(s & !(1 << j))) {
                    covers.push((lo, hi));
                }
            }
        }
    }
    covers.sort_unstable();

    let mut depth = vec![0usize; nodes.len()];
    for &(lo, hi) in &covers {
        depth[hi] = depth[hi].max(depth[lo] + 1);
    }
    let length = depth.iter().copied().max().unwrap_or(0);
    let width = min_chain_cover(&nodes);
    Ok(Spectrum { base, nodes, covers, length, width })
}

/// Dilworth: a largest antichain has as many elements as a smallest chain
/// partition, which is `n` minus a maximum matching of the strict order.
fn min_chain_cover(nodes: &[u32]) -> usize {
    let n = nodes.len();
    let adj: Vec<Vec<usize>> = nodes
        .iter()
        .map(|&a| {
            nodes
                .iter()
                .enumerate()
                .filter(|&(_, &b)| a != b && a & b == a)
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    n - hopcroft_karp(&adj, n)
}

fn hopcroft_karp(adj: &[Vec<usize>], right: usize) -> usize {
    const NIL: usize = usize::MAX;
    let left = adj.len();
    let mut match_l = vec![NIL; left];
    let mut match_r = vec![NIL; right];
    let mut dist = vec![0usize; left];
    let mut matched = 0;
    loop {
        let mut queue = std::collections::VecDeque::new();
        let mut found = false;
        for u in 0..left {
            if match_l[u] == NIL {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                match match_r[v] {
                    NIL => found = true,
                    w if dist[w] == usize::MAX => {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            return matched;
        }
        let mut next = vec![0usize; left];
        for u in 0..left {
            if match_l[u] == NIL && augment(u, adj, &mut match_l, &mut match_r, &mut dist, &mut next) {
                matched += 1;
            }
        }
    }
}

fn augment(
    root: usize,
    adj: &[Vec<usize>],
    match_l: &mut [usize],
    match_r: &mut [usize],
    dist: &mut [usize],
    next: &mut [usize],
) -> bool {
    const NIL: usize = usize::MAX;
    let mut path = vec![root];
    while let Some(&u) = path.last() {
        if next[u] == adj[u].len() {
            dist[u] = usize::MAX;
            path.pop();
            continue;
        }
        let v = adj[u][next[u]];
        next[u] += 1;
        let w = match_r[v];
        if w == NIL {
            // Flip the alternating path ending at v.
            let mut v = v;
            while let Some(u) = path.pop() {
                let prev = match_l[u];
                match_l[u] = v;
                match_r[v] = u;
                v = prev;
            }
            return true;
        }
        if dist[w] == dist[u] + 1 {
            path.push(w);
        }
    }
    false
}

pub fn spectrum_width(p: &PrimeSet, limits: &Limits) -> Result<usize> {
    Ok(spectrum(p, limits)?.width)
}

pub fn is_slim(p: &PrimeSet, limits: &Limits) -> Result<bool> {
    Ok(spectrum_width(p, limits)? == 1)
}
