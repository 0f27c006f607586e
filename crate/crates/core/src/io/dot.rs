use std::collections::BTreeSet;
use std::fmt::Write;

use crate::cnf::{cnf_graph, CnfFormula};
use crate::network::AdditiveNetwork;
use crate::paft::PaftInstance;
use crate::rational::format_rational;
use crate::reductions::OriginMap;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Directed graph with `u/c/g` edge labels; sources are boxes, sinks double
/// circles. With an origin map, each gadget becomes a cluster.
pub fn network_to_dot(network: &AdditiveNetwork, origin: Option<&OriginMap>) -> String {
    let mut out = String::from("digraph network {\n");
    let shape = |v: usize| {
        if network.sources().contains(&v) {
            " [shape=box]"
        } else if network.sinks().contains(&v) {
            " [shape=doublecircle]"
        } else {
            ""
        }
    };
    let mut placed = BTreeSet::new();
    if let Some(origin) = origin {
        for (k, (gadget, members)) in origin.clusters().iter().enumerate() {
            writeln!(out, "  subgraph cluster_{k} {{").unwrap();
            writeln!(out, "    label={};", quote(gadget.as_str())).unwrap();
            for m in members {
                if let Some(v) = network.vertex(m) {
                    writeln!(out, "    {}{};", quote(m.as_str()), shape(v)).unwrap();
                    placed.insert(v);
                }
            }
            out.push_str("  }\n");
        }
    }
    for v in 0..network.vertex_count() {
        if !placed.contains(&v) {
            writeln!(
                out,
                "  {}{};",
                quote(network.vertex_id(v).as_str()),
                shape(v)
            )
            .unwrap();
        }
    }
    for e in network.edges() {
        writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(network.vertex_id(e.tail).as_str()),
            quote(network.vertex_id(e.head).as_str()),
            quote(&format!(
                "{}/{}/{}",
                format_rational(&e.capacity),
                format_rational(&e.cost),
                format_rational(&e.gain)
            ))
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// Undirected graph labelled by edge id; forbidden transitions are listed
/// in a comment block and as a graph label.
pub fn paft_to_dot(inst: &PaftInstance) -> String {
    let g = inst.graph();
    let mut out = String::from("graph paft {\n");
    let pairs: Vec<String> = inst
        .forbidden()
        .iter()
        .map(|&(a, b)| format!("{{{},{}}}", g.edges[a].id, g.edges[b].id))
        .collect();
    writeln!(
        out,
        "  label={};",
        quote(&format!("F = {}", pairs.join(" ")))
    )
    .unwrap();
    for (v, id) in g.vertices.iter().enumerate() {
        let attr = if v == inst.s() || v == inst.t() {
            " [shape=box]"
        } else {
            ""
        };
        writeln!(out, "  {}{attr};", quote(id.as_str())).unwrap();
    }
    for e in &g.edges {
        writeln!(
            out,
            "  {} -- {} [label={}];",
            quote(g.vertices[e.a].as_str()),
            quote(g.vertices[e.b].as_str()),
            quote(e.id.as_str())
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// The literal/clause incidence graph of a formula.
pub fn cnf_to_dot(formula: &CnfFormula) -> String {
    let g = cnf_graph(formula);
    let mut out = String::from("graph cnf {\n");
    for v in &g.vertices {
        let attr = if v.as_str().starts_with('C') {
            " [shape=box]"
        } else {
            ""
        };
        writeln!(out, "  {}{attr};", quote(v.as_str())).unwrap();
    }
    for e in &g.edges {
        writeln!(
            out,
            "  {} -- {};",
            quote(g.vertices[e.a].as_str()),
            quote(g.vertices[e.b].as_str())
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{parse_network, parse_paft};
    use crate::reductions::{paft_to_network, GadgetParams};

    #[test]
    fn one_edge_network() {
        let n = parse_network("v a\nv b\ne 1 a b 1 0 -3\n").unwrap();
        let dot = network_to_dot(&n, None);
        assert_eq!(dot.matches(" -> ").count(), 1);
        assert!(dot.contains("[label=\"1/0/-3\"]"));
        assert_eq!(dot, network_to_dot(&n, None));
    }

    #[test]
    fn reduced_network_has_one_cluster_per_vertex() {
        let inst = parse_paft("v s\nv t\nue 1 s t\ns s\nt t\nrot s 1\nrot t 1\n").unwrap();
        let (n, origin) = paft_to_network(&inst, &GadgetParams::default()).unwrap();
        let dot = network_to_dot(&n, Some(&origin));
        assert_eq!(dot.matches("subgraph cluster_").count(), 2);
    }
}
