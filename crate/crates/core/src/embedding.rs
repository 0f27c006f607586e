//! Verification of combinatorial embeddings.
//!
//! A rotation system fixes the cyclic order of edges around each vertex.
//! Tracing its faces and applying Euler's formula per connected component
//! gives the genus of the embedding; genus zero everywhere means planar.

use crate::graph::UndirectedGraph;
use crate::id::Id;

/// Cyclic order of incident edge indices around each vertex.
pub type RotationSystem = Vec<Vec<usize>>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbeddingError {
    #[error("rotation covers {got} vertices, graph has {expected}")]
    VertexCount { expected: usize, got: usize },
    #[error("rotation at `{0}` does not list exactly its incident edges")]
    Incidence(Id),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingReport {
    pub faces: usize,
    pub genus: usize,
    pub components: usize,
    pub planar: bool,
    /// Total dart visits during face tracing (always `2m`).
    pub dart_visits: usize,
}

pub fn verify_rotation(
    graph: &UndirectedGraph,
    rotation: &RotationSystem,
) -> Result<EmbeddingReport, EmbeddingError> {
    let n = graph.vertices.len();
    if rotation.len() != n {
        return Err(EmbeddingError::VertexCount {
            expected: n,
            got: rotation.len(),
        });
    }
    let incidence = graph.incidence();
    for v in 0..n {
        let mut a = incidence[v].clone();
        let mut b = rotation[v].clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Err(EmbeddingError::Incidence(graph.vertices[v].clone()));
        }
    }

    // Dart 2e leaves `a` along e, dart 2e+1 leaves `b`. At a self-loop the
    // first listed occurrence is dart 2e and the second is 2e+1.
    let m = graph.edges.len();
    let mut position = vec![(usize::MAX, usize::MAX); 2 * m];
    for (v, order) in rotation.iter().enumerate() {
        for (p, &e) in order.iter().enumerate() {
            let edge = &graph.edges[e];
            let dart = if edge.a == edge.b {
                if position[2 * e].0 == usize::MAX {
                    2 * e
                } else {
                    2 * e + 1
                }
            } else if edge.a == v {
                2 * e
            } else {
                2 * e + 1
            };
            position[dart] = (v, p);
        }
    }
    let dart_at = |v: usize, p: usize| {
        let e = rotation[v][p];
        let edge = &graph.edges[e];
        if edge.a == edge.b {
            if position[2 * e] == (v, p) {
                2 * e
            } else {
                2 * e + 1
            }
        } else if edge.a == v {
            2 * e
        } else {
            2 * e + 1
        }
    };

    let comp = components(graph);
    let num_comp = comp.iter().copied().max().map_or(0, |c| c + 1);
    let mut faces_per = vec![0usize; num_comp];
    let mut seen = vec![false; 2 * m];
    let mut visits = 0;
    for start in 0..2 * m {
        if seen[start] {
            continue;
        }
        let edge = &graph.edges[start / 2];
        faces_per[comp[edge.a]] += 1;
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            visits += 1;
            let twin = d ^ 1;
            let (v, p) = position[twin];
            d = dart_at(v, (p + 1) % rotation[v].len());
        }
    }

    let mut verts = vec![0i64; num_comp];
    let mut edges = vec![0i64; num_comp];
    for v in 0..n {
        verts[comp[v]] += 1;
    }
    for e in &graph.edges {
        edges[comp[e.a]] += 1;
    }
    let mut genus = 0usize;
    let mut faces = 0usize;
    for c in 0..num_comp {
        let f = if edges[c] == 0 {
            1
        } else {
            faces_per[c] as i64
        };
        faces += f as usize;
        let chi = verts[c] - edges[c] + f;
        genus += ((2 - chi) / 2) as usize;
    }
    Ok(EmbeddingReport {
        faces,
        genus,
        components: num_comp,
        planar: genus == 0,
        dart_visits: visits,
    })
}

fn components(graph: &UndirectedGraph) -> Vec<usize> {
    let n = graph.vertices.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut x = x;
        while p[x] != r {
            let nx = p[x];
            p[x] = r;
            x = nx;
        }
        r
    }
    for e in &graph.edges {
        let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, e.b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    (0..n)
        .map(|v| {
            let r = find(&mut parent, v);
            if label[r] == usize::MAX {
                label[r] = next;
                next += 1;
            }
            label[r]
        })
        .collect()
}
