//! Path-avoiding-forbidden-transitions instances and degree reduction.
//!
//! A transition is an unordered pair of distinct edges sharing a vertex. A
//! simple path is F-valid when no two consecutive edges form a forbidden
//! transition.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::embedding::RotationSystem;
use crate::graph::{UEdge, UndirectedGraph};
use crate::id::Id;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PaftError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(Id),
    #[error("duplicate edge `{0}`")]
    DuplicateEdge(Id),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(Id),
    #[error("unknown edge `{0}`")]
    UnknownEdge(Id),
    #[error("edge `{0}` is a self-loop")]
    SelfLoop(Id),
    #[error("forbidden pair `{0}`,`{1}` does not share exactly one vertex")]
    PairNotAdjacent(Id, Id),
    #[error("source and destination coincide")]
    SameTerminals,
    #[error("terminal `{0}` is involved in a forbidden transition")]
    TerminalInvolved(Id),
    #[error("rotation at `{0}` does not list exactly its incident edges")]
    BadRotation(Id),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaftInstance {
    graph: UndirectedGraph,
    forbidden: BTreeSet<(usize, usize)>,
    s: usize,
    t: usize,
    rotation: Option<RotationSystem>,
}

/// Id-level description of an instance, in any order.
#[derive(Debug, Clone, Default)]
pub struct PaftSpec {
    pub vertices: Vec<Id>,
    pub edges: Vec<(Id, Id, Id)>,
    pub forbidden: Vec<(Id, Id)>,
    pub s: Id,
    pub t: Id,
    pub rotation: Vec<(Id, Vec<Id>)>,
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl PaftInstance {
    pub fn from_spec(spec: &PaftSpec) -> Result<Self, PaftError> {
        let mut vertices = spec.vertices.clone();
        vertices.sort();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(PaftError::DuplicateVertex(w[0].clone()));
        }
        let vix: HashMap<&Id, usize> = vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let find_v = |id: &Id| {
            vix.get(id)
                .copied()
                .ok_or_else(|| PaftError::UnknownVertex(id.clone()))
        };

        let mut raw = spec.edges.clone();
        raw.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = raw.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(PaftError::DuplicateEdge(w[0].0.clone()));
        }
        let mut edges = Vec::with_capacity(raw.len());
        for (id, a, b) in &raw {
            let (a, b) = (find_v(a)?, find_v(b)?);
            if a == b {
                return Err(PaftError::SelfLoop(id.clone()));
            }
            edges.push(UEdge {
                id: id.clone(),
                a,
                b,
            });
        }
        let eix: HashMap<&Id, usize> = edges.iter().enumerate().map(|(i, e)| (&e.id, i)).collect();
        let find_e = |id: &Id| {
            eix.get(id)
                .copied()
                .ok_or_else(|| PaftError::UnknownEdge(id.clone()))
        };

        let mut forbidden = BTreeSet::new();
        for (x, y) in &spec.forbidden {
            let (a, b) = (find_e(x)?, find_e(y)?);
            forbidden.insert(ordered(a, b));
        }
        let rotation = if spec.rotation.is_empty() {
            None
        } else {
            let mut rot = vec![Vec::new(); vertices.len()];
            for (v, list) in &spec.rotation {
                rot[find_v(v)?] = list.iter().map(find_e).collect::<Result<Vec<_>, _>>()?;
            }
            Some(rot)
        };
        let s = find_v(&spec.s)?;
        let t = find_v(&spec.t)?;
        let graph = UndirectedGraph { vertices, edges };
        Self::new(graph, forbidden, s, t, rotation)
    }

    pub fn new(
        graph: UndirectedGraph,
        forbidden: BTreeSet<(usize, usize)>,
        s: usize,
        t: usize,
        rotation: Option<RotationSystem>,
    ) -> Result<Self, PaftError> {
        if s == t {
            return Err(PaftError::SameTerminals);
        }
        for e in &graph.edges {
            if e.a == e.b {
                return Err(PaftError::SelfLoop(e.id.clone()));
            }
        }
        let inst = PaftInstance {
            graph,
            forbidden: forbidden.into_iter().map(|(a, b)| ordered(a, b)).collect(),
            s,
            t,
            rotation,
        };
        for &(a, b) in &inst.forbidden {
            match inst.shared_vertex(a, b) {
                Some(v) if v == inst.s || v == inst.t => {
                    return Err(PaftError::TerminalInvolved(inst.graph.vertices[v].clone()))
                }
                Some(_) => {}
                None => {
                    return Err(PaftError::PairNotAdjacent(
                        inst.graph.edges[a].id.clone(),
                        inst.graph.edges[b].id.clone(),
                    ))
                }
            }
        }
        if let Some(rot) = &inst.rotation {
            let inc = inst.graph.incidence();
            for (v, list) in inc.iter().enumerate() {
                let mut want = list.clone();
                let mut got = rot.get(v).cloned().unwrap_or_default();
                want.sort_unstable();
                got.sort_unstable();
                if want != got {
                    return Err(PaftError::BadRotation(inst.graph.vertices[v].clone()));
                }
            }
        }
        Ok(inst)
    }

    pub fn graph(&self) -> &UndirectedGraph {
        &self.graph
    }

    pub fn forbidden(&self) -> &BTreeSet<(usize, usize)> {
        &self.forbidden
    }

    pub fn is_forbidden(&self, a: usize, b: usize) -> bool {
        self.forbidden.contains(&ordered(a, b))
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn rotation(&self) -> Option<&RotationSystem> {
        self.rotation.as_ref()
    }

    /// The unique vertex shared by two distinct edges, if exactly one exists.
    pub fn shared_vertex(&self, a: usize, b: usize) -> Option<usize> {
        if a == b {
            return None;
        }
        let (ea, eb) = (&self.graph.edges[a], &self.graph.edges[b]);
        let shared: BTreeSet<usize> = [ea.a, ea.b]
            .into_iter()
            .filter(|&v| eb.touches(v))
            .collect();
        (shared.len() == 1).then(|| *shared.iter().next().unwrap())
    }

    /// Vertices at which some forbidden transition occurs.
    pub fn involved_vertices(&self) -> BTreeSet<usize> {
        self.forbidden
            .iter()
            .filter_map(|&(a, b)| self.shared_vertex(a, b))
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.graph.degree(v)
    }

    pub fn to_spec(&self) -> PaftSpec {
        let g = &self.graph;
        PaftSpec {
            vertices: g.vertices.clone(),
            edges: g
                .edges
                .iter()
                .map(|e| {
                    (
                        e.id.clone(),
                        g.vertices[e.a].clone(),
                        g.vertices[e.b].clone(),
                    )
                })
                .collect(),
            forbidden: self
                .forbidden
                .iter()
                .map(|&(a, b)| (g.edges[a].id.clone(), g.edges[b].id.clone()))
                .collect(),
            s: g.vertices[self.s].clone(),
            t: g.vertices[self.t].clone(),
            rotation: self
                .rotation
                .iter()
                .flat_map(|rot| {
                    rot.iter().enumerate().map(|(v, l)| {
                        (
                            g.vertices[v].clone(),
                            l.iter().map(|&e| g.edges[e].id.clone()).collect(),
                        )
                    })
                })
                .collect(),
        }
    }
}

/// Which rule removed or rewrote a vertex during [`degree_reduce`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionStep {
    Isolated(Id),
    Pendant(Id),
    ForbiddenPair(Id),
    Smoothed { vertex: Id, new_edge: Id },
    LoopDropped(Id),
}

/// Repeatedly removes or smooths vertices of degree at most two outside
/// `{s, t}`; the existence of an F-valid `s`–`t` path is unchanged.
///
/// Smoothing a vertex whose two neighbours coincide would create a loop; the
/// loop is dropped instead. A rewritten transition between two parallel
/// edges is dropped too, since no simple path uses both.
pub fn degree_reduce(instance: &PaftInstance) -> (PaftInstance, Vec<ReductionStep>) {
    let g = &instance.graph;
    let mut edges: Vec<Option<UEdge>> = g.edges.iter().cloned().map(Some).collect();
    let mut alive = vec![true; g.vertices.len()];
    let mut forbidden = instance.forbidden.clone();
    let mut rotation = instance.rotation.clone();
    let mut used_ids: BTreeSet<Id> = g.edges.iter().map(|e| e.id.clone()).collect();
    let mut fresh = 0usize;
    let mut steps = Vec::new();

    let incident = |edges: &[Option<UEdge>], v: usize| -> Vec<usize> {
        edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.as_ref().is_some_and(|e| e.touches(v)))
            .map(|(i, _)| i)
            .collect()
    };
    let drop_edge = |edges: &mut Vec<Option<UEdge>>,
                     forbidden: &mut BTreeSet<(usize, usize)>,
                     rotation: &mut Option<RotationSystem>,
                     e: usize| {
        forbidden.retain(|&(a, b)| a != e && b != e);
        if let Some(rot) = rotation {
            for list in rot.iter_mut() {
                list.retain(|&x| x != e);
            }
        }
        edges[e] = None;
    };

    loop {
        let pick = (0..g.vertices.len()).find(|&v| {
            alive[v] && v != instance.s && v != instance.t && incident(&edges, v).len() <= 2
        });
        let Some(v) = pick else { break };
        let vid = g.vertices[v].clone();
        let inc = incident(&edges, v);
        alive[v] = false;
        match inc.as_slice() {
            [] => steps.push(ReductionStep::Isolated(vid)),
            [e] => {
                drop_edge(&mut edges, &mut forbidden, &mut rotation, *e);
                steps.push(ReductionStep::Pendant(vid));
            }
            &[e1, e2] => {
                let w = edges[e1].as_ref().unwrap().other(v);
                let u = edges[e2].as_ref().unwrap().other(v);
                if forbidden.contains(&ordered(e1, e2)) {
                    drop_edge(&mut edges, &mut forbidden, &mut rotation, e1);
                    drop_edge(&mut edges, &mut forbidden, &mut rotation, e2);
                    steps.push(ReductionStep::ForbiddenPair(vid));
                } else if w == u {
                    drop_edge(&mut edges, &mut forbidden, &mut rotation, e1);
                    drop_edge(&mut edges, &mut forbidden, &mut rotation, e2);
                    steps.push(ReductionStep::LoopDropped(vid));
                } else {
                    let id = loop {
                        fresh += 1;
                        let cand = Id::new(format!("~{fresh}"));
                        if !used_ids.contains(&cand) {
                            break cand;
                        }
                    };
                    used_ids.insert(id.clone());
                    let ne = edges.len();
                    edges.push(Some(UEdge {
                        id: id.clone(),
                        a: w,
                        b: u,
                    }));
                    let is_parallel = |h: usize, edges: &[Option<UEdge>]| {
                        edges[h]
                            .as_ref()
                            .is_some_and(|he| he.touches(w) && he.touches(u))
                    };
                    let mut rewritten = Vec::new();
                    for &(a, b) in &forbidden {
                        for (old, h) in [(a, b), (b, a)] {
                            if (old == e1 || old == e2)
                                && h != e1
                                && h != e2
                                && !is_parallel(h, &edges)
                            {
                                rewritten.push(ordered(ne, h));
                            }
                        }
                    }
                    if let Some(rot) = &mut rotation {
                        for x in rot[w].iter_mut() {
                            if *x == e1 {
                                *x = ne;
                            }
                        }
                        for x in rot[u].iter_mut() {
                            if *x == e2 {
                                *x = ne;
                            }
                        }
                        rot[v].clear();
                    }
                    forbidden.retain(|&(a, b)| a != e1 && b != e1 && a != e2 && b != e2);
                    forbidden.extend(rewritten);
                    edges[e1] = None;
                    edges[e2] = None;
                    steps.push(ReductionStep::Smoothed {
                        vertex: vid,
                        new_edge: id,
                    });
                }
            }
            _ => unreachable!("degree checked above"),
        }
    }

    // Reindex the survivors.
    let mut vmap = vec![usize::MAX; g.vertices.len()];
    let mut spec = PaftSpec {
        s: g.vertices[instance.s].clone(),
        t: g.vertices[instance.t].clone(),
        ..Default::default()
    };
    for (v, id) in g.vertices.iter().enumerate() {
        if alive[v] {
            vmap[v] = spec.vertices.len();
            spec.vertices.push(id.clone());
        }
    }
    let mut emap: BTreeMap<usize, Id> = BTreeMap::new();
    for (i, e) in edges.iter().enumerate() {
        if let Some(e) = e {
            emap.insert(i, e.id.clone());
            spec.edges.push((
                e.id.clone(),
                g.vertices[e.a].clone(),
                g.vertices[e.b].clone(),
            ));
        }
    }
    spec.forbidden = forbidden
        .iter()
        .map(|(a, b)| (emap[a].clone(), emap[b].clone()))
        .collect();
    if let Some(rot) = &rotation {
        for (v, list) in rot.iter().enumerate() {
            if alive[v] {
                spec.rotation.push((
                    g.vertices[v].clone(),
                    list.iter().map(|e| emap[e].clone()).collect(),
                ));
            }
        }
    }
    let reduced =
        PaftInstance::from_spec(&spec).expect("degree reduction preserves well-formedness");
    (reduced, steps)
}
