use std::collections::HashMap;

use crate::id::Id;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UEdge {
    pub id: Id,
    pub a: usize,
    pub b: usize,
}

impl UEdge {
    /// The endpoint opposite `v`.
    pub fn other(&self, v: usize) -> usize {
        if self.a == v {
            self.b
        } else {
            self.a
        }
    }

    pub fn touches(&self, v: usize) -> bool {
        self.a == v || self.b == v
    }
}

/// Undirected multigraph with id-addressed vertices and edges.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UndirectedGraph {
    pub vertices: Vec<Id>,
    pub edges: Vec<UEdge>,
}

impl UndirectedGraph {
    pub fn vertex_index(&self) -> HashMap<&Id, usize> {
        self.vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v, i))
            .collect()
    }

    /// Incident edge indices per vertex; a self-loop appears twice.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            inc[e.a].push(i);
            inc[e.b].push(i);
        }
        inc
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.a == v) + usize::from(e.b == v))
            .sum()
    }
}
