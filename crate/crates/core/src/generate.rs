//! Seeded instance generators.
//!
//! Every generator draws from a ChaCha8 stream seeded with the caller's
//! seed, so a given `(kind, seed)` always yields the same instance.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cnf::{CnfFormula, Literal};
use crate::id::Id;
use crate::network::{AdditiveNetwork, NetworkBuilder};
use crate::paft::{degree_reduce, PaftInstance, PaftSpec};
use crate::rational::int;

/// Largest grid (in vertices) or network (in vertices) a generator accepts.
pub const MAX_GENERATED_VERTICES: usize = 400;

#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorKind {
    /// Grid graph with `s` and `t` at opposite corners; each transition at a
    /// non-terminal vertex is forbidden with probability `forbid_density`.
    PaftGrid {
        width: usize,
        height: usize,
        forbid_density: f64,
    },
    RandomCnf {
        vars: usize,
        clauses: usize,
    },
    /// Integer gains drawn from `gain_range`; a gain that would close a
    /// positive-gain cycle is lowered until the cycle has total gain 0.
    RandomNetwork {
        n: usize,
        m: usize,
        gain_range: (i64, i64),
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Generated {
    Paft(PaftInstance),
    Cnf(CnfFormula),
    Network(AdditiveNetwork),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenerateError {
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
}

fn infeasible(msg: impl Into<String>) -> GenerateError {
    GenerateError::Infeasible(msg.into())
}

pub fn generate(kind: &GeneratorKind, seed: u64) -> Result<Generated, GenerateError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match *kind {
        GeneratorKind::PaftGrid {
            width,
            height,
            forbid_density,
        } => paft_grid(width, height, forbid_density, &mut rng).map(Generated::Paft),
        GeneratorKind::RandomCnf { vars, clauses } => {
            random_cnf(vars, clauses, &mut rng).map(Generated::Cnf)
        }
        GeneratorKind::RandomNetwork { n, m, gain_range } => {
            random_network(n, m, gain_range, &mut rng).map(Generated::Network)
        }
    }
}

/// Vertex id of grid cell (`row`, `col`).
pub fn grid_vertex(row: usize, col: usize) -> Id {
    Id::new(format!("r{row}c{col}"))
}

/// A grid fragment: the `width` x `height` grid minus `removed` cells, with
/// the planar rotation (east, north, west, south) at every vertex. No
/// forbidden transitions; `s` and `t` are the given cells.
pub fn grid_spec(
    width: usize,
    height: usize,
    removed: &[(usize, usize)],
    s: (usize, usize),
    t: (usize, usize),
) -> PaftSpec {
    let present = |r: usize, c: usize| r < height && c < width && !removed.contains(&(r, c));
    let mut spec = PaftSpec {
        s: grid_vertex(s.0, s.1),
        t: grid_vertex(t.0, t.1),
        ..Default::default()
    };
    let mut next = 1usize;
    let mut east = vec![vec![None; width]; height];
    let mut south = vec![vec![None; width]; height];
    for r in 0..height {
        for c in 0..width {
            if !present(r, c) {
                continue;
            }
            spec.vertices.push(grid_vertex(r, c));
            if present(r, c + 1) {
                east[r][c] = Some(Id::new(next.to_string()));
                spec.edges.push((
                    Id::new(next.to_string()),
                    grid_vertex(r, c),
                    grid_vertex(r, c + 1),
                ));
                next += 1;
            }
            if present(r + 1, c) {
                south[r][c] = Some(Id::new(next.to_string()));
                spec.edges.push((
                    Id::new(next.to_string()),
                    grid_vertex(r, c),
                    grid_vertex(r + 1, c),
                ));
                next += 1;
            }
        }
    }
    for r in 0..height {
        for c in 0..width {
            if !present(r, c) {
                continue;
            }
            let around = [
                east[r][c].clone(),
                r.checked_sub(1).and_then(|u| south[u][c].clone()),
                c.checked_sub(1).and_then(|l| east[r][l].clone()),
                south[r][c].clone(),
            ];
            spec.rotation
                .push((grid_vertex(r, c), around.into_iter().flatten().collect()));
        }
    }
    spec
}

/// All forbiddable transitions at non-terminal vertices: pairs of incident
/// edges sharing exactly one endpoint (parallel edges are skipped).
pub fn transitions(spec: &PaftSpec) -> Vec<(Id, Id)> {
    let mut out = Vec::new();
    for v in &spec.vertices {
        if *v == spec.s || *v == spec.t {
            continue;
        }
        let inc: Vec<&(Id, Id, Id)> = spec
            .edges
            .iter()
            .filter(|e| e.1 == *v || e.2 == *v)
            .collect();
        for i in 0..inc.len() {
            for j in i + 1..inc.len() {
                let (a, b) = (inc[i], inc[j]);
                let parallel = (a.1 == b.1 && a.2 == b.2) || (a.1 == b.2 && a.2 == b.1);
                if !parallel {
                    out.push((a.0.clone(), b.0.clone()));
                }
            }
        }
    }
    out
}

fn paft_grid(
    width: usize,
    height: usize,
    density: f64,
    rng: &mut ChaCha8Rng,
) -> Result<PaftInstance, GenerateError> {
    if width < 2 || height < 2 {
        return Err(infeasible("grid needs width and height of at least 2"));
    }
    if width * height > MAX_GENERATED_VERTICES {
        return Err(infeasible(format!(
            "grid exceeds {MAX_GENERATED_VERTICES} vertices"
        )));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(infeasible("forbid density must lie in [0, 1]"));
    }
    let mut spec = grid_spec(width, height, &[], (0, 0), (height - 1, width - 1));
    for pair in transitions(&spec) {
        if rng.gen_bool(density) {
            spec.forbidden.push(pair);
        }
    }
    let inst = PaftInstance::from_spec(&spec).map_err(|e| infeasible(e.to_string()))?;
    Ok(degree_reduce(&inst).0)
}

fn random_cnf(
    vars: usize,
    clauses: usize,
    rng: &mut ChaCha8Rng,
) -> Result<CnfFormula, GenerateError> {
    if vars < 3 {
        return Err(infeasible("a 3CNF clause needs three distinct variables"));
    }
    if vars > MAX_GENERATED_VERTICES || clauses > MAX_GENERATED_VERTICES {
        return Err(infeasible(format!(
            "formula exceeds {MAX_GENERATED_VERTICES} variables or clauses"
        )));
    }
    let pool: Vec<Literal> = (1..=vars as Literal).collect();
    let list = (0..clauses)
        .map(|_| {
            pool.choose_multiple(rng, 3)
                .map(|&v| if rng.gen_bool(0.5) { v } else { -v })
                .collect()
        })
        .collect();
    CnfFormula::new(vars, list).map_err(|e| infeasible(e.to_string()))
}

/// Vertices `v0..v{n-1}`, source `v0`, sink `v{n-1}`. No edge enters the
/// source or leaves the sink. Capacities are drawn from 1..=5, costs from
/// 0..=3.
fn random_network(
    n: usize,
    m: usize,
    gains: (i64, i64),
    rng: &mut ChaCha8Rng,
) -> Result<AdditiveNetwork, GenerateError> {
    if n < 2 {
        return Err(infeasible("a network needs at least two vertices"));
    }
    if n > MAX_GENERATED_VERTICES || m > MAX_GENERATED_VERTICES * 4 {
        return Err(infeasible("network exceeds the generator budget"));
    }
    if gains.0 > gains.1 {
        return Err(infeasible("empty gain range"));
    }
    let mut b = NetworkBuilder::new();
    for v in 0..n {
        b.add_vertex(format!("v{v}"));
    }
    b.add_source("v0");
    b.add_sink(format!("v{}", n - 1));
    // Integer copy of the edge list for the cycle check.
    let mut arcs: Vec<(usize, usize, i64)> = Vec::with_capacity(m);
    for id in 1..=m {
        let tail = rng.gen_range(0..n - 1);
        let head = loop {
            let h = rng.gen_range(1..n);
            if h != tail {
                break h;
            }
        };
        let mut g = rng.gen_range(gains.0..=gains.1);
        if let Some(back) = heaviest_walk(n, &arcs, head, tail) {
            g = g.min(-back);
        }
        arcs.push((tail, head, g));
        let (cap, cost) = (rng.gen_range(1..=5), rng.gen_range(0..=3));
        b.add_edge(
            id,
            format!("v{tail}"),
            format!("v{head}"),
            int(cap),
            int(cost),
            int(g),
        );
    }
    b.build().map_err(|e| infeasible(e.to_string()))
}

/// Largest total gain of a walk `from -> to`, assuming no positive cycles.
fn heaviest_walk(n: usize, arcs: &[(usize, usize, i64)], from: usize, to: usize) -> Option<i64> {
    let mut best: Vec<Option<i64>> = vec![None; n];
    best[from] = Some(0);
    for _ in 0..n {
        let mut changed = false;
        for &(a, b, g) in arcs {
            if let Some(d) = best[a] {
                if best[b].is_none_or(|x| x < d + g) {
                    best[b] = Some(d + g);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    best[to]
}
