use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{MagmaError, Result};
use crate::limits::Limits;

/// An unordered rooted tree in canonical parenthesis form: a node is `(`,
/// its children's encodings in sorted order, then `)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootedTree {
    encoding: String,
}

impl RootedTree {
    pub fn single() -> Self {
        RootedTree { encoding: "()".into() }
    }

    /// Builds a tree from a parent array with exactly one root.
    pub fn from_parents(parents: &[Option<usize>]) -> Result<Self> {
        let n = parents.len();
        let mut children = vec![Vec::new(); n];
        let mut root = None;
        for (i, p) in parents.iter().enumerate() {
            match *p {
                None if root.is_none() => root = Some(i),
                None => return Err(MagmaError::domain("more than one root")),
                Some(p) if p < n && p != i => children[p].push(i),
                Some(p) => return Err(MagmaError::domain(format!("bad parent {p} for node {i}"))),
            }
        }
        let root = root.ok_or_else(|| MagmaError::domain("no root"))?;
        let mut order = vec![root];
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            order.extend(children[u].iter().copied());
        }
        if order.len() != n {
            return Err(MagmaError::domain("parent array is not a tree"));
        }
        let mut enc = vec![String::new(); n];
        for &u in order.iter().rev() {
            let mut parts: Vec<String> = children[u].iter().map(|&c| std::mem::take(&mut enc[c])).collect();
            parts.sort();
            enc[u] = format!("({})", parts.concat());
        }
        Ok(RootedTree { encoding: std::mem::take(&mut enc[root]) })
    }

    /// Parses a parenthesis encoding; any child order is accepted.
    pub fn parse(text: &str) -> Result<Self> {
        let mut parents = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        let mut closed_root = false;
        for (pos, c) in text.char_indices().filter(|(_, c)| !c.is_whitespace()) {
            if closed_root {
                return Err(MagmaError::syntax(pos, "trailing input after the root"));
            }
            match c {
                '(' => {
                    parents.push(stack.last().copied());
                    stack.push(parents.len() - 1);
                }
                ')' => {
                    stack.pop().ok_or_else(|| MagmaError::syntax(pos, "unbalanced ')'"))?;
                    closed_root = stack.is_empty();
                }
                other => return Err(MagmaError::syntax(pos, format!("unexpected character {other:?}"))),
            }
        }
        if !closed_root {
            return Err(MagmaError::syntax(text.len(), "unterminated tree"));
        }
        Self::from_parents(&parents)
    }

    pub fn encoding(&self) -> &str {
        &self.encoding
    }

    pub fn size(&self) -> usize {
        self.encoding.len() / 2
    }

    pub fn leaves(&self) -> usize {
        self.encoding.matches("()").count()
    }

    pub fn is_path(&self) -> bool {
        !self.encoding.contains(")(")
    }

    /// Parent of each node, nodes numbered breadth-first from the root
    /// (index 0), children in encoding order.
    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut pre_parent = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        for c in self.encoding.chars() {
            if c == '(' {
                pre_parent.push(stack.last().copied());
                stack.push(pre_parent.len() - 1);
            } else {
                stack.pop();
            }
        }
        let n = pre_parent.len();
        let mut children = vec![Vec::new(); n];
        for (i, p) in pre_parent.iter().enumerate() {
            if let Some(p) = *p {
                children[p].push(i);
            }
        }
        let mut order = vec![0];
        let mut bfs_index = vec![0; n];
        let mut out = vec![None];
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &c in &children[u] {
                bfs_index[c] = order.len();
                order.push(c);
                out.push(Some(bfs_index[u]));
            }
        }
        out
    }
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encoding)
    }
}

impl Serialize for RootedTree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.encoding)
    }
}

/// One tree per isomorphism class on `k` nodes, sorted by encoding.
pub fn enumerate_rooted_trees(k: usize, limits: &Limits) -> Result<Vec<RootedTree>> {
    if k == 0 {
        return Err(MagmaError::domain("trees have at least one node"));
    }
    if k > limits.max_tree_size {
        return Err(MagmaError::resource(format!("rooted trees on {k} nodes"), limits.max_tree_size));
    }
    // by_size[s]: canonical encodings of trees with s nodes.
    let mut by_size: Vec<Vec<String>> = vec![Vec::new(), vec!["()".into()]];
    for n in 2..=k {
        let mut found = BTreeSet::new();
        let mut forest = Vec::new();
        forests(&by_size, n - 1, (n - 1, usize::MAX), &mut forest, &mut |f| {
            let mut parts: Vec<&str> = f.iter().map(|&(s, i)| by_size[s][i].as_str()).collect();
            parts.sort_unstable();
            found.insert(format!("({})", parts.concat()));
        });
        by_size.push(found.into_iter().collect());
    }
    Ok(by_size[k].iter().map(|e| RootedTree { encoding: e.clone() }).collect())
}

/// Multisets of trees with `remaining` nodes in total, listed as
/// non-increasing `(size, index)` keys bounded by `max`.
fn forests(
    by_size: &[Vec<String>],
    remaining: usize,
    max: (usize, usize),
    forest: &mut Vec<(usize, usize)>,
    emit: &mut dyn FnMut(&[(usize, usize)]),
) {
    if remaining == 0 {
        emit(forest);
        return;
    }
    for size in (1..=remaining.min(max.0)).rev() {
        let top = if size == max.0 { max.1.min(by_size[size].len() - 1) } else { by_size[size].len() - 1 };
        for idx in (0..=top).rev() {
            forest.push((size, idx));
            forests(by_size, remaining - size, (size, idx), forest, emit);
            forest.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: grow every tree by one leaf at each node.
    fn grown(k: usize) -> BTreeSet<RootedTree> {
        let mut level = BTreeSet::from([RootedTree::single()]);
        for _ in 1..k {
            let mut next = BTreeSet::new();
            for t in &level {
                let parents = t.parents();
                for at in 0..parents.len() {
                    let mut p = parents.clone();
                    p.push(Some(at));
                    next.insert(RootedTree::from_parents(&p).unwrap());
                }
            }
            level = next;
        }
        level
    }

    #[test]
    fn counts_match_oracle() {
        let l = Limits::DEFAULT;
        let counts: Vec<usize> = (1..=7).map(|k| enumerate_rooted_trees(k, &l).unwrap().len()).collect();
        assert_eq!(counts, [1, 1, 2, 4, 9, 20, 48]);
        for k in 1..=8 {
            let listed = enumerate_rooted_trees(k, &l).unwrap();
            assert!(listed.windows(2).all(|w| w[0] < w[1]));
            assert!(listed.iter().all(|t| t.size() == k));
            assert_eq!(listed.into_iter().collect::<BTreeSet<_>>(), grown(k), "k={k}");
        }
    }

    #[test]
    fn canonical_form_ignores_child_order() {
        let a = RootedTree::parse("((())())").unwrap();
        let b = RootedTree::parse("(()(()))").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.size(), 4);
        assert_eq!(a.leaves(), 2);
        assert!(!a.is_path());
        assert!(RootedTree::parse("(((())))").unwrap().is_path());
        assert_eq!(RootedTree::single().leaves(), 1);
        assert!(RootedTree::parse("(()").is_err());
        assert!(RootedTree::parse("()()").is_err());
        assert!(RootedTree::parse("(x)").is_err());
    }

    #[test]
    fn parents_round_trip() {
        for t in enumerate_rooted_trees(6, &Limits::DEFAULT).unwrap() {
            let p = t.parents();
            assert!(p.iter().enumerate().skip(1).all(|(i, q)| q.is_some_and(|q| q < i)));
            assert_eq!(RootedTree::from_parents(&p).unwrap(), t);
        }
    }

    #[test]
    fn caps() {
        let l = Limits { max_tree_size: 4, ..Limits::DEFAULT };
        assert!(matches!(enumerate_rooted_trees(5, &l), Err(MagmaError::Resource { .. })));
        assert!(enumerate_rooted_trees(0, &l).is_err());
    }
}
