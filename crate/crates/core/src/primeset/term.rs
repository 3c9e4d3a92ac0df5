use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::RootedTree;
use crate::element::Elem;
use crate::error::{MagmaError, Result};

/// Resolution of a `±` token: `x + y`, or `x − y = y + x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    Unit,
    Pair { var: usize, base: usize },
}

/// A list of terms `1 | (a ± t)` sharing subterms. Each distinct pair
/// subterm carries one `±` token, identified by its arena index, so equal
/// subterms always resolve to the same sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermScheme {
    arena: Vec<Node>,
    listed: Vec<usize>,
    vars: Vec<String>,
}

impl TermScheme {
    fn empty() -> Self {
        TermScheme { arena: vec![Node::Unit], listed: Vec::new(), vars: Vec::new() }
    }

    fn intern(&mut self, index: &mut FxHashMap<Node, usize>, node: Node) -> usize {
        *index.entry(node).or_insert_with(|| {
            self.arena.push(node);
            self.arena.len() - 1
        })
    }

    /// Parses terms such as `(a2±(a1±1))`; `+-` is accepted for `±`.
    pub fn parse<S: AsRef<str>>(terms: &[S]) -> Result<Self> {
        let mut scheme = Self::empty();
        let mut index = FxHashMap::default();
        index.insert(Node::Unit, 0);
        let mut var_ids: FxHashMap<String, usize> = FxHashMap::default();
        for text in terms {
            let text = text.as_ref();
            let chars: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
            let at = |i: usize| chars.get(i).map_or(text.len(), |&(p, _)| p);
            let mut i = 0;
            let mut prefix = Vec::new();
            while chars.get(i).map(|&(_, c)| c) == Some('(') {
                i += 1;
                let start = i;
                while chars.get(i).is_some_and(|&(_, c)| c.is_ascii_alphanumeric()) {
                    i += 1;
                }
                let name: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                if !name.starts_with(|c: char| c.is_ascii_alphabetic()) {
                    return Err(MagmaError::syntax(at(start), "expected a variable"));
                }
                match chars.get(i).map(|&(_, c)| c) {
                    Some('±') => i += 1,
                    Some('+') if chars.get(i + 1).map(|&(_, c)| c) == Some('-') => i += 2,
                    _ => return Err(MagmaError::syntax(at(i), "expected '±'")),
                }
                let next = var_ids.len();
                let var = *var_ids.entry(name.clone()).or_insert(next);
                if var == scheme.vars.len() {
                    scheme.vars.push(name);
                }
                prefix.push(var);
            }
            if chars.get(i).map(|&(_, c)| c) != Some('1') {
                return Err(MagmaError::syntax(at(i), "expected '1' or '('"));
            }
            i += 1;
            let mut current = 0;
            for &var in prefix.iter().rev() {
                if chars.get(i).map(|&(_, c)| c) != Some(')') {
                    return Err(MagmaError::syntax(at(i), "expected ')'"));
                }
                i += 1;
                current = scheme.intern(&mut index, Node::Pair { var, base: current });
            }
            if i < chars.len() {
                return Err(MagmaError::syntax(at(i), "trailing input"));
            }
            scheme.listed.push(current);
        }
        Ok(scheme)
    }

    pub fn len(&self) -> usize {
        self.listed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.listed.is_empty()
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    /// Token ids of every `±` occurring in the scheme.
    pub fn tokens(&self) -> Vec<usize> {
        (0..self.arena.len()).filter(|&i| self.arena[i] != Node::Unit).collect()
    }

    /// The listed terms with `±` tokens.
    pub fn terms(&self) -> Vec<String> {
        self.listed.iter().map(|&t| self.render(t, None)).collect()
    }

    /// The listed terms with each token resolved to `+` or `−`.
    pub fn resolved(&self, signs: &BTreeMap<usize, Sign>) -> Result<Vec<String>> {
        self.tokens()
            .into_iter()
            .find(|t| !signs.contains_key(t))
            .map_or(Ok(()), |t| Err(MagmaError::domain(format!("no sign for token {t}"))))?;
        Ok(self.listed.iter().map(|&t| self.render(t, Some(signs))).collect())
    }

    fn render(&self, mut t: usize, signs: Option<&BTreeMap<usize, Sign>>) -> String {
        let mut out = String::new();
        let mut depth = 0;
        while let Node::Pair { var, base } = self.arena[t] {
            let op = match signs.map(|s| s[&t]) {
                None => "±",
                Some(Sign::Plus) => "+",
                Some(Sign::Minus) => "−",
            };
            out.push('(');
            out.push_str(&self.vars[var]);
            out.push_str(op);
            depth += 1;
            t = base;
        }
        out.push('1');
        out.extend(std::iter::repeat_n(')', depth));
        out
    }
}

impl fmt::Display for TermScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.terms().join(", "))
    }
}

impl Serialize for TermScheme {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.terms().serialize(s)
    }
}

/// `Lab(T)`: the root is `1`; node `i` in breadth-first order gets
/// `(a_i ± Lab(parent))`.
pub fn labelize(tree: &RootedTree) -> TermScheme {
    let parents = tree.parents();
    let mut scheme = TermScheme::empty();
    scheme.listed.push(0);
    for (i, p) in parents.iter().enumerate().skip(1) {
        let base = p.expect("non-root node has a parent");
        scheme.vars.push(format!("a{i}"));
        scheme.arena.push(Node::Pair { var: i - 1, base });
        scheme.listed.push(i);
    }
    scheme
}

/// Evaluates every listed term. Equal values collapse in the result.
pub fn substitute(
    scheme: &TermScheme,
    assignment: &BTreeMap<String, Elem>,
    signs: &BTreeMap<usize, Sign>,
) -> Result<BTreeSet<Elem>> {
    let mut values = Vec::with_capacity(scheme.arena.len());
    for (t, node) in scheme.arena.iter().enumerate() {
        let v = match *node {
            Node::Unit => Elem::ONE,
            Node::Pair { var, base } => {
                let name = &scheme.vars[var];
                let a = *assignment
                    .get(name)
                    .ok_or_else(|| MagmaError::domain(format!("no value for variable {name}")))?;
                match signs.get(&t) {
                    Some(Sign::Plus) => a + values[base],
                    Some(Sign::Minus) => values[base] + a,
                    None => return Err(MagmaError::domain(format!("no sign for token {t}"))),
                }
            }
        };
        values.push(v);
    }
    Ok(scheme.listed.iter().map(|&t| values[t]).collect())
}
