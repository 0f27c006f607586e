//! Additive flow networks and their flow semantics.
//!
//! Each edge `e` carries a capacity `u(e)`, a per-unit cost `c(e)` and an
//! additive gain `g(e)`. When an edge carries positive flow `f`, `f + g`
//! units reach its head (or nothing, if `f + g <= 0`). Flow along a single
//! path is described by the seed entering the first edge; the flow entering
//! the i-th edge is the seed plus the gains of every earlier edge.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{Signed, Zero};

use crate::id::Id;
use crate::rational::{zero, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NetworkError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(Id),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(Id),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(Id),
    #[error("unknown edge `{0}`")]
    UnknownEdge(Id),
    #[error("edge index {0} out of range")]
    EdgeIndex(usize),
    #[error("edge `{0}` has negative capacity")]
    NegativeCapacity(Id),
    #[error("edge `{0}` is a self-loop")]
    SelfLoop(Id),
    #[error("vertex `{0}` is both a source and a sink")]
    SourceSinkOverlap(Id),
    #[error("rotation at `{vertex}`: {reason}")]
    BadRotation { vertex: Id, reason: String },
    #[error("edges do not form a directed path at position {0}")]
    NotAPath(usize),
    #[error("path revisits vertex `{0}`")]
    NotSimple(Id),
    #[error("empty path")]
    EmptyPath,
    #[error("position {position} outside 1..={max}")]
    PositionOutOfRange { position: usize, max: usize },
    #[error("seed flow must be positive")]
    NonPositiveSeed,
    #[error("flow on edge `{0}` is negative")]
    NegativeFlow(Id),
    #[error("path flow is infeasible ({0:?})")]
    InfeasiblePathFlow(PathCheck),
    #[error("reversing edge `{edge}` would give negative capacity {capacity}")]
    NegativeReversedCapacity { edge: Id, capacity: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: Id,
    pub tail: usize,
    pub head: usize,
    pub capacity: Rational,
    pub cost: Rational,
    pub gain: Rational,
}

/// Immutable additive flow network. Vertices and edges are stored in id
/// order; edge and vertex *indices* refer to positions in that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditiveNetwork {
    vertices: Vec<Id>,
    edges: Vec<Edge>,
    sources: BTreeSet<usize>,
    sinks: BTreeSet<usize>,
    rotation: Option<Vec<Vec<usize>>>,
    vertex_index: HashMap<Id, usize>,
    edge_index: HashMap<Id, usize>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
}

#[derive(Debug, Clone)]
struct RawEdge {
    id: Id,
    tail: Id,
    head: Id,
    capacity: Rational,
    cost: Rational,
    gain: Rational,
}

#[derive(Debug, Clone, Default)]
pub struct NetworkBuilder {
    vertices: Vec<Id>,
    edges: Vec<RawEdge>,
    sources: Vec<Id>,
    sinks: Vec<Id>,
    rotation: Vec<(Id, Vec<Id>)>,
    allow_self_loops: bool,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn allow_self_loops(mut self, yes: bool) -> Self {
        self.allow_self_loops = yes;
        self
    }

    pub fn add_vertex(&mut self, id: impl Into<Id>) -> &mut Self {
        self.vertices.push(id.into());
        self
    }

    pub fn add_edge(
        &mut self,
        id: impl Into<Id>,
        tail: impl Into<Id>,
        head: impl Into<Id>,
        capacity: Rational,
        cost: Rational,
        gain: Rational,
    ) -> &mut Self {
        self.edges.push(RawEdge {
            id: id.into(),
            tail: tail.into(),
            head: head.into(),
            capacity,
            cost,
            gain,
        });
        self
    }

    pub fn add_source(&mut self, id: impl Into<Id>) -> &mut Self {
        self.sources.push(id.into());
        self
    }

    pub fn add_sink(&mut self, id: impl Into<Id>) -> &mut Self {
        self.sinks.push(id.into());
        self
    }

    pub fn set_rotation(&mut self, vertex: impl Into<Id>, edges: Vec<Id>) -> &mut Self {
        self.rotation.push((vertex.into(), edges));
        self
    }

    pub fn build(&self) -> Result<AdditiveNetwork, NetworkError> {
        let mut vertices = self.vertices.clone();
        vertices.sort();
        for w in vertices.windows(2) {
            if w[0] == w[1] {
                return Err(NetworkError::DuplicateVertex(w[0].clone()));
            }
        }
        let vertex_index: HashMap<Id, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let vix = |id: &Id| {
            vertex_index
                .get(id)
                .copied()
                .ok_or_else(|| NetworkError::UnknownVertex(id.clone()))
        };

        let mut raw = self.edges.clone();
        raw.sort_by(|a, b| a.id.cmp(&b.id));
        for w in raw.windows(2) {
            if w[0].id == w[1].id {
                return Err(NetworkError::DuplicateEdge(w[0].id.clone()));
            }
        }
        let mut edges = Vec::with_capacity(raw.len());
        for r in raw {
            let tail = vix(&r.tail)?;
            let head = vix(&r.head)?;
            if r.capacity.is_negative() {
                return Err(NetworkError::NegativeCapacity(r.id));
            }
            if tail == head && !self.allow_self_loops {
                return Err(NetworkError::SelfLoop(r.id));
            }
            edges.push(Edge {
                id: r.id,
                tail,
                head,
                capacity: r.capacity,
                cost: r.cost,
                gain: r.gain,
            });
        }
        let edge_index: HashMap<Id, usize> = edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id.clone(), i))
            .collect();

        let sources = self
            .sources
            .iter()
            .map(vix)
            .collect::<Result<BTreeSet<_>, _>>()?;
        let sinks = self
            .sinks
            .iter()
            .map(vix)
            .collect::<Result<BTreeSet<_>, _>>()?;
        if let Some(&v) = sources.intersection(&sinks).next() {
            return Err(NetworkError::SourceSinkOverlap(vertices[v].clone()));
        }

        let mut out_edges = vec![Vec::new(); vertices.len()];
        let mut in_edges = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            out_edges[e.tail].push(i);
            in_edges[e.head].push(i);
        }

        let rotation = if self.rotation.is_empty() {
            None
        } else {
            let mut rot: Vec<Option<Vec<usize>>> = vec![None; vertices.len()];
            for (v, order) in &self.rotation {
                let vi = vix(v)?;
                let bad = |reason: String| NetworkError::BadRotation {
                    vertex: v.clone(),
                    reason,
                };
                if rot[vi].is_some() {
                    return Err(bad("listed twice".into()));
                }
                let mut list = Vec::with_capacity(order.len());
                for e in order {
                    let ei = *edge_index
                        .get(e)
                        .ok_or_else(|| NetworkError::UnknownEdge(e.clone()))?;
                    list.push(ei);
                }
                rot[vi] = Some(list);
            }
            let mut out = Vec::with_capacity(vertices.len());
            for (vi, entry) in rot.into_iter().enumerate() {
                let list = entry.unwrap_or_default();
                let mut expected: Vec<usize> = Vec::new();
                for (i, e) in edges.iter().enumerate() {
                    if e.tail == vi {
                        expected.push(i);
                    }
                    if e.head == vi {
                        expected.push(i);
                    }
                }
                expected.sort_unstable();
                let mut got = list.clone();
                got.sort_unstable();
                if got != expected {
                    return Err(NetworkError::BadRotation {
                        vertex: vertices[vi].clone(),
                        reason: "does not list exactly the incident edges".into(),
                    });
                }
                out.push(list);
            }
            Some(out)
        };

        Ok(AdditiveNetwork {
            vertices,
            edges,
            sources,
            sinks,
            rotation,
            vertex_index,
            edge_index,
            out_edges,
            in_edges,
        })
    }
}

impl AdditiveNetwork {
    pub fn builder() -> NetworkBuilder {
        NetworkBuilder::new()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Id] {
        &self.vertices
    }

    pub fn vertex_id(&self, v: usize) -> &Id {
        &self.vertices[v]
    }

    pub fn vertex(&self, id: &Id) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn edge_by_id(&self, id: &Id) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    pub fn sources(&self) -> &BTreeSet<usize> {
        &self.sources
    }

    pub fn sinks(&self) -> &BTreeSet<usize> {
        &self.sinks
    }

    pub fn is_terminal(&self, v: usize) -> bool {
        self.sources.contains(&v) || self.sinks.contains(&v)
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    pub fn rotation(&self) -> Option<&[Vec<usize>]> {
        self.rotation.as_deref()
    }

    /// Rebuilds the network through a builder, e.g. to derive a modified copy.
    pub fn to_builder(&self) -> NetworkBuilder {
        let mut b = NetworkBuilder::new().allow_self_loops(true);
        for v in &self.vertices {
            b.add_vertex(v.clone());
        }
        for e in &self.edges {
            b.add_edge(
                e.id.clone(),
                self.vertices[e.tail].clone(),
                self.vertices[e.head].clone(),
                e.capacity.clone(),
                e.cost.clone(),
                e.gain.clone(),
            );
        }
        for &s in &self.sources {
            b.add_source(self.vertices[s].clone());
        }
        for &t in &self.sinks {
            b.add_sink(self.vertices[t].clone());
        }
        if let Some(rot) = &self.rotation {
            for (v, list) in rot.iter().enumerate() {
                b.set_rotation(
                    self.vertices[v].clone(),
                    list.iter().map(|&e| self.edges[e].id.clone()).collect(),
                );
            }
        }
        b
    }

    /// Convenience: a directed path given by edge ids.
    pub fn path_by_ids<I, S>(&self, ids: I) -> Result<DirectedPath, NetworkError>
    where
        I: IntoIterator<Item = S>,
        S: Into<Id>,
    {
        let edges = ids
            .into_iter()
            .map(|s| {
                let id: Id = s.into();
                self.edge_by_id(&id).ok_or(NetworkError::UnknownEdge(id))
            })
            .collect::<Result<Vec<_>, _>>()?;
        DirectedPath::new(self, edges)
    }
}

/// A simple directed path, stored as edge indices `e_1..e_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedPath {
    edges: Vec<usize>,
}

impl DirectedPath {
    pub fn new(network: &AdditiveNetwork, edges: Vec<usize>) -> Result<Self, NetworkError> {
        if edges.is_empty() {
            return Err(NetworkError::EmptyPath);
        }
        let m = network.edge_count();
        if let Some(&bad) = edges.iter().find(|&&e| e >= m) {
            return Err(NetworkError::EdgeIndex(bad));
        }
        let mut seen = BTreeSet::new();
        seen.insert(network.edge(edges[0]).tail);
        for (i, &e) in edges.iter().enumerate() {
            let edge = network.edge(e);
            if i > 0 && network.edge(edges[i - 1]).head != edge.tail {
                return Err(NetworkError::NotAPath(i + 1));
            }
            if !seen.insert(edge.head) {
                return Err(NetworkError::NotSimple(
                    network.vertex_id(edge.head).clone(),
                ));
            }
        }
        Ok(DirectedPath { edges })
    }

    /// Builds a path without validation. Callers guarantee simplicity.
    pub(crate) fn new_unchecked(edges: Vec<usize>) -> Self {
        DirectedPath { edges }
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn start(&self, network: &AdditiveNetwork) -> usize {
        network.edge(self.edges[0]).tail
    }

    pub fn end(&self, network: &AdditiveNetwork) -> usize {
        network
            .edge(*self.edges.last().expect("non-empty path"))
            .head
    }

    pub fn edge_ids<'a>(&self, network: &'a AdditiveNetwork) -> Vec<&'a Id> {
        self.edges.iter().map(|&e| &network.edge(e).id).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathFlow {
    path: DirectedPath,
    seed: Rational,
}

impl PathFlow {
    pub fn new(path: DirectedPath, seed: Rational) -> Result<Self, NetworkError> {
        if !seed.is_positive() {
            return Err(NetworkError::NonPositiveSeed);
        }
        Ok(PathFlow { path, seed })
    }

    pub fn path(&self) -> &DirectedPath {
        &self.path
    }

    pub fn seed(&self) -> &Rational {
        &self.seed
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    PositivityOnly,
    WithCapacity,
}

/// Outcome of checking a path flow. Positions are 1-based; `k + 1` is arrival.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathCheck {
    Feasible,
    DeadEnd { position: usize },
    CapacityViolation { position: usize },
}

impl PathCheck {
    pub fn is_feasible(&self) -> bool {
        matches!(self, PathCheck::Feasible)
    }
}

/// Flow entering the `i`-th edge (`i = k + 1` is the flow arriving at the end).
pub fn accumulate(
    network: &AdditiveNetwork,
    path: &DirectedPath,
    seed: &Rational,
    i: usize,
) -> Result<Rational, NetworkError> {
    let k = path.len();
    if i == 0 || i > k + 1 {
        return Err(NetworkError::PositionOutOfRange {
            position: i,
            max: k + 1,
        });
    }
    Ok(path.edges[..i - 1]
        .iter()
        .fold(seed.clone(), |acc, &e| acc + &network.edge(e).gain))
}

/// All prefix values `γ(1..=k+1)` in one pass.
pub fn accumulations(
    network: &AdditiveNetwork,
    path: &DirectedPath,
    seed: &Rational,
) -> Vec<Rational> {
    let mut out = Vec::with_capacity(path.len() + 1);
    let mut acc = seed.clone();
    out.push(acc.clone());
    for &e in &path.edges {
        acc += &network.edge(e).gain;
        out.push(acc.clone());
    }
    out
}

pub fn check_path_flow(network: &AdditiveNetwork, flow: &PathFlow, mode: CheckMode) -> PathCheck {
    let gamma = accumulations(network, &flow.path, &flow.seed);
    for (i, &e) in flow.path.edges.iter().enumerate() {
        if !gamma[i].is_positive() {
            return PathCheck::DeadEnd { position: i + 1 };
        }
        if mode == CheckMode::WithCapacity && gamma[i] > network.edge(e).capacity {
            return PathCheck::CapacityViolation { position: i + 1 };
        }
    }
    let k = flow.path.len();
    if !gamma[k].is_positive() {
        return PathCheck::DeadEnd { position: k + 1 };
    }
    PathCheck::Feasible
}

/// Accumulated cost `Σ c(e_i)·γ(i)`. The path flow must be positivity-feasible.
pub fn path_cost(network: &AdditiveNetwork, flow: &PathFlow) -> Result<Rational, NetworkError> {
    let check = check_path_flow(network, flow, CheckMode::PositivityOnly);
    if !check.is_feasible() {
        return Err(NetworkError::InfeasiblePathFlow(check));
    }
    Ok(raw_path_cost(network, flow.path.edges(), &flow.seed))
}

pub(crate) fn raw_path_cost(
    network: &AdditiveNetwork,
    edges: &[usize],
    seed: &Rational,
) -> Rational {
    let mut gamma = seed.clone();
    let mut cost = zero();
    for &e in edges {
        let edge = network.edge(e);
        cost += &edge.cost * &gamma;
        gamma += &edge.gain;
    }
    cost
}

/// Smallest `T >= 0` such that every seed `> T` is positivity-feasible on `path`.
pub fn path_threshold(network: &AdditiveNetwork, path: &DirectedPath) -> Rational {
    let mut prefix = zero();
    let mut worst = zero();
    for &e in &path.edges {
        prefix += &network.edge(e).gain;
        let need = -prefix.clone();
        if need > worst {
            worst = need;
        }
    }
    worst
}

/// Per-edge flow assignment; edges not present carry zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GeneralFlow {
    values: BTreeMap<usize, Rational>,
}

impl GeneralFlow {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_values(
        network: &AdditiveNetwork,
        values: impl IntoIterator<Item = (usize, Rational)>,
    ) -> Result<Self, NetworkError> {
        let mut flow = GeneralFlow::new();
        for (e, f) in values {
            if e >= network.edge_count() {
                return Err(NetworkError::EdgeIndex(e));
            }
            if f.is_negative() {
                return Err(NetworkError::NegativeFlow(network.edge(e).id.clone()));
            }
            flow.insert(e, f);
        }
        Ok(flow)
    }

    pub fn from_ids<S: Into<Id>>(
        network: &AdditiveNetwork,
        values: impl IntoIterator<Item = (S, Rational)>,
    ) -> Result<Self, NetworkError> {
        let mut v = Vec::new();
        for (id, f) in values {
            let id = id.into();
            let e = network
                .edge_by_id(&id)
                .ok_or(NetworkError::UnknownEdge(id))?;
            v.push((e, f));
        }
        Self::from_values(network, v)
    }

    /// Sets the flow on `edge`; zero entries are dropped.
    pub(crate) fn insert(&mut self, edge: usize, f: Rational) {
        if f.is_zero() {
            self.values.remove(&edge);
        } else {
            self.values.insert(edge, f);
        }
    }

    pub fn get(&self, edge: usize) -> Rational {
        self.values.get(&edge).cloned().unwrap_or_else(zero)
    }

    pub fn is_used(&self, edge: usize) -> bool {
        self.values.get(&edge).is_some_and(|f| f.is_positive())
    }

    /// Non-zero entries in edge order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.values.iter().map(|(&e, f)| (e, f))
    }

    /// What edge `e` delivers at its head: `max(0, f + g)` when used, else 0.
    pub fn delivered(&self, network: &AdditiveNetwork, e: usize) -> Rational {
        match self.values.get(&e) {
            Some(f) if f.is_positive() => {
                let d = f + &network.edge(e).gain;
                if d.is_positive() {
                    d
                } else {
                    zero()
                }
            }
            _ => zero(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConservationViolation {
    pub vertex: usize,
    pub inflow: Rational,
    pub outflow: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidityReport {
    pub capacity: Vec<usize>,
    pub conservation: Vec<ConservationViolation>,
}

impl ValidityReport {
    pub fn is_clean(&self) -> bool {
        self.capacity.is_empty() && self.conservation.is_empty()
    }
}

pub fn validate_flow(
    network: &AdditiveNetwork,
    flow: &GeneralFlow,
) -> Result<ValidityReport, NetworkError> {
    let mut report = ValidityReport::default();
    for (e, f) in flow.iter() {
        if e >= network.edge_count() {
            return Err(NetworkError::EdgeIndex(e));
        }
        if f.is_negative() {
            return Err(NetworkError::NegativeFlow(network.edge(e).id.clone()));
        }
        if *f > network.edge(e).capacity {
            report.capacity.push(e);
        }
    }
    for v in 0..network.vertex_count() {
        if network.is_terminal(v) {
            continue;
        }
        let inflow: Rational = network
            .in_edges(v)
            .iter()
            .map(|&e| flow.delivered(network, e))
            .sum();
        let outflow: Rational = network.out_edges(v).iter().map(|&e| flow.get(e)).sum();
        if inflow != outflow {
            report.conservation.push(ConservationViolation {
                vertex: v,
                inflow,
                outflow,
            });
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Objective {
    InFlow,
    OutFlow,
}

pub fn flow_value(network: &AdditiveNetwork, flow: &GeneralFlow, which: Objective) -> Rational {
    match which {
        Objective::InFlow => network
            .sinks()
            .iter()
            .flat_map(|&t| network.in_edges(t).iter())
            .map(|&e| flow.delivered(network, e))
            .sum(),
        Objective::OutFlow => network
            .sources()
            .iter()
            .flat_map(|&s| network.out_edges(s).iter())
            .map(|&e| flow.get(e))
            .sum(),
    }
}

/// Reverses every edge and swaps sources with sinks: `u' = u + g`, `g' = -g`.
/// Costs and rotation carry over unchanged.
pub fn reverse_network(network: &AdditiveNetwork) -> Result<AdditiveNetwork, NetworkError> {
    let mut b = NetworkBuilder::new().allow_self_loops(true);
    for v in &network.vertices {
        b.add_vertex(v.clone());
    }
    for e in &network.edges {
        let cap = &e.capacity + &e.gain;
        if cap.is_negative() {
            return Err(NetworkError::NegativeReversedCapacity {
                edge: e.id.clone(),
                capacity: crate::rational::format_rational(&cap),
            });
        }
        b.add_edge(
            e.id.clone(),
            network.vertices[e.head].clone(),
            network.vertices[e.tail].clone(),
            cap,
            e.cost.clone(),
            -e.gain.clone(),
        );
    }
    for &s in &network.sources {
        b.add_sink(network.vertices[s].clone());
    }
    for &t in &network.sinks {
        b.add_source(network.vertices[t].clone());
    }
    if let Some(rot) = &network.rotation {
        for (v, list) in rot.iter().enumerate() {
            b.set_rotation(
                network.vertices[v].clone(),
                list.iter().map(|&e| network.edges[e].id.clone()).collect(),
            );
        }
    }
    b.build()
}

/// Maps a flow on `network` to the reversed network: each used edge carries
/// what it delivered. For networks without lossy edges this preserves
/// feasibility and exchanges in-flow with out-flow.
pub fn reverse_flow(network: &AdditiveNetwork, flow: &GeneralFlow) -> GeneralFlow {
    let mut out = GeneralFlow::new();
    for (e, _) in flow.iter() {
        out.insert(e, flow.delivered(network, e));
    }
    out
}
