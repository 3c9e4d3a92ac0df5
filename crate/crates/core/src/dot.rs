//! Graphviz output for spectra, Hasse levels and decomposition digraphs.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::element::Elem;
use crate::primeset::{KmaxNode, Spectrum};

/// Graph name built from a command and its parameters, e.g.
/// `primeset_spectrum set={1, 3_-}`.
pub fn graph_name(command: &str, params: &[(&str, String)]) -> String {
    let mut name = command.replace(' ', "_");
    for (k, v) in params {
        let _ = write!(name, " {k}={v}");
    }
    name
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn set_label(s: &BTreeSet<Elem>) -> String {
    let items: Vec<String> = s.iter().map(Elem::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

/// Hasse diagram of a spectrum, smallest node at the bottom.
pub fn spectrum_dot(name: &str, s: &Spectrum) -> String {
    let mut out = format!("digraph {} {{\n  rankdir=BT;\n  node [shape=box];\n", quote(name));
    for i in 0..s.len() {
        let _ = writeln!(out, "  n{i} [label={}];", quote(&set_label(&s.node_set(i))));
    }
    for &(lo, hi) in s.covers() {
        let _ = writeln!(out, "  n{lo} -> n{hi};");
    }
    out.push_str("}\n");
    out
}

/// Consecutive levels of the prime-set Hasse diagram; node labels are the
/// complemented prime sets, i.e. the `k`-maximal submagmas.
pub fn hasse_dot(name: &str, levels: &[Vec<KmaxNode>]) -> String {
    let mut out = format!("digraph {} {{\n  rankdir=TB;\n  node [shape=box];\n", quote(name));
    for (k, level) in levels.iter().enumerate() {
        let _ = writeln!(out, "  subgraph level{k} {{\n    rank=same;");
        for (i, node) in level.iter().enumerate() {
            let label = format!("{}^c", set_label(node.set.elements()));
            let _ = writeln!(out, "    l{k}_{i} [label={}];", quote(&label));
        }
        out.push_str("  }\n");
    }
    for (k, level) in levels.iter().enumerate().skip(1) {
        for (i, node) in level.iter().enumerate() {
            for &p in &node.parents {
                let _ = writeln!(out, "  l{}_{p} -> l{k}_{i};", k - 1);
            }
        }
    }
    out.push_str("}\n");
    out
}

/// The decomposition digraph restricted to a prime set.
pub fn digraph_dot(name: &str, vertices: &BTreeSet<Elem>, edges: &[(Elem, Elem)]) -> String {
    let mut out = format!("digraph {} {{\n", quote(name));
    let ids: Vec<Elem> = vertices.iter().copied().collect();
    let id = |e: &Elem| ids.binary_search(e).expect("edge endpoint is a vertex");
    for (i, v) in ids.iter().enumerate() {
        let _ = writeln!(out, "  v{i} [label={}];", quote(&v.to_string()));
    }
    for (z, t) in edges {
        let _ = writeln!(out, "  v{} -> v{};", id(z), id(t));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::parse_set;
    use crate::primeset::{decomposition_digraph, kmax_level, spectrum, PrimeSet};
    use crate::Limits;

    #[test]
    fn spectrum_graph() {
        let p = PrimeSet::new(parse_set("{1, 3_-, 5_+}").unwrap()).unwrap();
        let name = graph_name("primeset spectrum", &[("set", p.to_string())]);
        let dot = spectrum_dot(&name, &spectrum(&p, &Limits::DEFAULT).unwrap());
        assert!(dot.starts_with("digraph \"primeset_spectrum set={1, 3_-, 5_+}\" {"));
        assert_eq!(dot.matches("->").count(), 5);
        assert!(dot.contains("label=\"{1, 3_-}\""));
    }

    #[test]
    fn hasse_and_digraph() {
        let l = Limits::DEFAULT;
        let levels: Vec<_> = (0..=2).map(|k| kmax_level(k, 3, &l).unwrap()).collect();
        let dot = hasse_dot("hasse", &levels);
        assert_eq!(dot.matches("->").count(), 4);
        assert!(dot.contains("{1, 3_+}^c"));
        let p = parse_set("{1, 2, 2^2}").unwrap();
        let dot = digraph_dot("g", &p, &decomposition_digraph(&p).unwrap());
        assert_eq!(dot.matches("->").count(), 2);
    }
}
