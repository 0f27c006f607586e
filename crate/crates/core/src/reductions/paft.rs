//! Path avoiding forbidden transitions, encoded as a zero-cost path flow.
//!
//! Flow travels between vertex gadgets at level `B + 1`. Inside a gadget it
//! drops to 1 and is restored on the way out, so a second transit step
//! without an intervening recovery always dies.

use crate::id::Id;
use crate::network::{AdditiveNetwork, NetworkBuilder, NetworkError};
use crate::paft::PaftInstance;
use crate::rational::{format_rational, int, one, zero, Rational};

use super::origin::{OriginMap, Role};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetParams {
    b: Rational,
}

impl GadgetParams {
    /// `B` must be an integer of at least 3.
    pub fn new(b: Rational) -> Result<Self, ReductionError> {
        if !b.is_integer() || b < int(3) {
            return Err(ReductionError::BadParameter(format_rational(&b)));
        }
        Ok(GadgetParams { b })
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }
}

impl Default for GadgetParams {
    fn default() -> Self {
        GadgetParams { b: int(4) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("gadget parameter B = {0} must be an integer >= 3")]
    BadParameter(String),
    #[error("instance has no rotation system")]
    RotationMissing,
    #[error("vertex {vertex} has degree {degree}; expected 3 or 4")]
    DegreeOutOfRange { vertex: Id, degree: usize },
    #[error(transparent)]
    Network(#[from] NetworkError),
}

/// Id of the vertex flow enters when it arrives at `v` along edge `e`.
fn entry(inst: &PaftInstance, involved: &[bool], v: usize, e: usize) -> Id {
    let g = inst.graph();
    if involved[v] {
        port(&g.vertices[v], &g.edges[e].id)
    } else {
        g.vertices[v].clone()
    }
}

fn port(v: &Id, e: &Id) -> Id {
    Id::new(format!("{v}.{e}"))
}

fn arc(tail: &Id, head: &Id) -> Id {
    Id::new(format!("{tail}>{head}"))
}

pub fn super_source(inst: &PaftInstance) -> Id {
    Id::new(format!("{}'", inst.graph().vertices[inst.s()]))
}

pub fn super_sink(inst: &PaftInstance) -> Id {
    Id::new(format!("{}'", inst.graph().vertices[inst.t()]))
}

struct Emitter<'a> {
    builder: NetworkBuilder,
    origin: OriginMap,
    cap: Rational,
    b: &'a Rational,
}

impl Emitter<'_> {
    fn vertex(&mut self, id: &Id, gadget: Option<&Id>, source: &Id, role: Role) {
        self.builder.add_vertex(id.clone());
        self.origin.vertex(id, gadget, source, role);
    }

    #[allow(clippy::too_many_arguments)]
    fn edge(
        &mut self,
        tail: &Id,
        head: &Id,
        cap: Rational,
        cost: Rational,
        gain: Rational,
        gadget: Option<&Id>,
        source: &Id,
        role: Role,
    ) {
        let id = arc(tail, head);
        self.builder
            .add_edge(id.clone(), tail.clone(), head.clone(), cap, cost, gain);
        self.origin.edge(&id, gadget, source, role);
    }
}

/// Builds the additive network of a PAFT instance whose non-terminal
/// vertices all have degree 3 or 4.
///
/// Terminals `s`, `t` gain fresh partners `s'` and `t'`. A vertex without
/// forbidden transitions keeps its id and each of its outgoing copies is
/// subdivided (`-B` then `+B`, costs `+1` and `-(B+1)`: zero cost at level
/// `B + 1`, cost `B·x` at level `B + 1 - x`). A vertex with forbidden
/// transitions becomes one port `v.e` per incident edge, joined directly
/// (gain `-B`) for every allowed pair, except that a degree-4 vertex whose
/// two opposite pairs are both allowed routes them through a centre `v.w`.
pub fn paft_to_network(
    inst: &PaftInstance,
    params: &GadgetParams,
) -> Result<(AdditiveNetwork, OriginMap), ReductionError> {
    let g = inst.graph();
    for v in 0..g.vertices.len() {
        let d = inst.degree(v);
        if v != inst.s() && v != inst.t() && !(3..=4).contains(&d) {
            return Err(ReductionError::DegreeOutOfRange {
                vertex: g.vertices[v].clone(),
                degree: d,
            });
        }
    }
    build(inst, params)
}

/// Same construction without the degree precondition; used for gadget checks.
pub(crate) fn build(
    inst: &PaftInstance,
    params: &GadgetParams,
) -> Result<(AdditiveNetwork, OriginMap), ReductionError> {
    let rotation = inst.rotation().ok_or(ReductionError::RotationMissing)?;
    let g = inst.graph();
    let b = params.b();
    let mut involved = vec![false; g.vertices.len()];
    for v in inst.involved_vertices() {
        involved[v] = true;
    }
    let mut em = Emitter {
        builder: NetworkBuilder::new(),
        origin: OriginMap::default(),
        cap: b + one(),
        b,
    };
    em.origin.notes.push(format!(
        "plain-gadget costs are +1 and -(B+1) rather than +B and -B, so a full transit at level B+1 costs 0; B = {}",
        format_rational(b)
    ));

    let (s, t) = (&g.vertices[inst.s()], &g.vertices[inst.t()]);
    let (s2, t2) = (super_source(inst), super_sink(inst));
    em.vertex(&s2, Some(s), s, Role::SuperSource);
    em.vertex(&t2, Some(t), t, Role::SuperSink);
    em.builder.add_source(s2.clone());
    em.builder.add_sink(t2.clone());
    let cap = em.cap.clone();
    em.edge(
        &s2,
        s,
        cap.clone(),
        zero(),
        b.clone(),
        Some(s),
        s,
        Role::SourceEdge,
    );
    em.edge(
        t,
        &t2,
        cap.clone(),
        zero(),
        zero(),
        Some(t),
        t,
        Role::SinkEdge,
    );

    let inc = g.incidence();
    for v in 0..g.vertices.len() {
        let vid = &g.vertices[v];
        if !involved[v] {
            em.vertex(vid, Some(vid), vid, Role::PlainVertex);
            for &e in &inc[v] {
                let eid = &g.edges[e].id;
                let w = Id::new(format!("{vid}~{eid}"));
                em.vertex(&w, Some(vid), eid, Role::Subdivision);
                let head = entry(inst, &involved, g.edges[e].other(v), e);
                em.edge(
                    vid,
                    &w,
                    cap.clone(),
                    one(),
                    -b.clone(),
                    Some(vid),
                    eid,
                    Role::LossEdge,
                );
                em.edge(
                    &w,
                    &head,
                    cap.clone(),
                    -(b + one()),
                    b.clone(),
                    Some(vid),
                    eid,
                    Role::RecoveryEdge,
                );
            }
            continue;
        }
        for &e in &inc[v] {
            let eid = &g.edges[e].id;
            let p = port(vid, eid);
            em.vertex(&p, Some(vid), eid, Role::Port);
            let head = entry(inst, &involved, g.edges[e].other(v), e);
            em.edge(
                &p,
                &head,
                cap.clone(),
                zero(),
                b.clone(),
                Some(vid),
                eid,
                Role::ExternalEdge,
            );
        }
        let rot = &rotation[v];
        let crossing = rot.len() == 4
            && !inst.is_forbidden(rot[0], rot[2])
            && !inst.is_forbidden(rot[1], rot[3]);
        for (i, &ei) in inc[v].iter().enumerate() {
            for &ej in &inc[v][i + 1..] {
                if inst.is_forbidden(ei, ej) {
                    continue;
                }
                if crossing && opposite(rot, ei, ej) {
                    continue;
                }
                let (pi, pj) = (port(vid, &g.edges[ei].id), port(vid, &g.edges[ej].id));
                em.edge(
                    &pi,
                    &pj,
                    cap.clone(),
                    zero(),
                    -b.clone(),
                    Some(vid),
                    vid,
                    Role::InternalEdge,
                );
                em.edge(
                    &pj,
                    &pi,
                    cap.clone(),
                    zero(),
                    -b.clone(),
                    Some(vid),
                    vid,
                    Role::InternalEdge,
                );
            }
        }
        if crossing {
            crossing_gadget(
                &mut em,
                vid,
                [rot[0], rot[1], rot[3], rot[2]].map(|e| port(vid, &g.edges[e].id)),
            );
        }
    }
    let network = em.builder.build()?;
    Ok((network, em.origin))
}

fn opposite(rot: &[usize], a: usize, b: usize) -> bool {
    let i = rot.iter().position(|&x| x == a);
    let j = rot.iter().position(|&x| x == b);
    matches!((i, j), (Some(i), Some(j)) if i.abs_diff(j) == 2)
}

/// Centre `w` joining ports `v1..v4`, where `{v1, v4}` and `{v2, v3}` are the
/// opposite pairs. Entering at level `B + 1 - x` the flow reaches `w` with
/// `1 - x` from `v1`/`v4` and `3 - x` from `v2`/`v3`. The exits to `v1`/`v4`
/// have capacity 1 and no gain; the exits to `v2`/`v3` lose 2. Only the
/// opposite routes survive.
fn crossing_gadget(em: &mut Emitter<'_>, v: &Id, ports: [Id; 4]) {
    let w = Id::new(format!("{v}.w"));
    em.vertex(&w, Some(v), v, Role::Center);
    let b = em.b.clone();
    let cap = em.cap.clone();
    let [v1, v2, v3, v4] = &ports;
    for p in [v1, v4] {
        em.edge(
            p,
            &w,
            cap.clone(),
            zero(),
            -b.clone(),
            Some(v),
            v,
            Role::CenterIn,
        );
        em.edge(&w, p, one(), zero(), zero(), Some(v), v, Role::CenterOut);
    }
    for p in [v2, v3] {
        em.edge(
            p,
            &w,
            cap.clone(),
            zero(),
            -(&b - int(2)),
            Some(v),
            v,
            Role::CenterIn,
        );
        em.edge(
            &w,
            p,
            cap.clone(),
            zero(),
            int(-2),
            Some(v),
            v,
            Role::CenterOut,
        );
    }
}

/// Flow vertex ids `v1..v4` of a crossing gadget at `v`, for reports.
pub(crate) fn crossing_ports(inst: &PaftInstance, v: usize) -> Option<[Id; 4]> {
    let rot = inst.rotation()?.get(v)?;
    if rot.len() != 4 {
        return None;
    }
    let g = inst.graph();
    let vid = &g.vertices[v];
    Some([rot[0], rot[1], rot[3], rot[2]].map(|e| port(vid, &g.edges[e].id)))
}

pub(crate) fn center(v: &Id) -> Id {
    Id::new(format!("{v}.w"))
}

pub(crate) fn arc_id(tail: &Id, head: &Id) -> Id {
    arc(tail, head)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::network::{accumulations, check_path_flow, path_cost, CheckMode, PathFlow};
    use crate::paft::PaftSpec;
    use crate::rational::q;

    pub(crate) fn instance(
        edges: &[(&str, &str, &str)],
        forbidden: &[(&str, &str)],
        rot: &[(&str, &[&str])],
    ) -> PaftInstance {
        let mut vs: Vec<Id> = edges
            .iter()
            .flat_map(|(_, a, b)| [Id::from(*a), Id::from(*b)])
            .collect();
        vs.sort();
        vs.dedup();
        let mut rotation: Vec<(Id, Vec<Id>)> = rot
            .iter()
            .map(|(v, l)| ((*v).into(), l.iter().map(|&e| e.into()).collect()))
            .collect();
        // unspecified vertices take their incidence in edge order
        for v in &vs {
            if !rotation.iter().any(|(x, _)| x == v) {
                let l = edges
                    .iter()
                    .filter(|(_, a, b)| v.as_str() == *a || v.as_str() == *b)
                    .map(|(e, _, _)| Id::from(*e))
                    .collect();
                rotation.push((v.clone(), l));
            }
        }
        PaftInstance::from_spec(&PaftSpec {
            vertices: vs,
            edges: edges
                .iter()
                .map(|(i, a, b)| ((*i).into(), (*a).into(), (*b).into()))
                .collect(),
            forbidden: forbidden
                .iter()
                .map(|(a, b)| ((*a).into(), (*b).into()))
                .collect(),
            s: "s".into(),
            t: "t".into(),
            rotation,
        })
        .unwrap()
    }

    fn ids(n: &AdditiveNetwork, path: &[&str]) -> Vec<Rational> {
        let p = n.path_by_ids(path.iter().copied()).unwrap();
        accumulations(n, &p, &one())
    }

    #[test]
    fn single_edge_instance() {
        let inst = instance(&[("1", "s", "t")], &[], &[]);
        let (n, origin) = paft_to_network(&inst, &GadgetParams::default()).unwrap();
        assert!(origin.is_total_for(&n));
        let path = ["s'>s", "s>s~1", "s~1>t", "t>t'"];
        assert_eq!(ids(&n, &path), [int(1), int(5), int(1), int(5), int(5)]);
        let pf = PathFlow::new(n.path_by_ids(path).unwrap(), one()).unwrap();
        assert!(check_path_flow(&n, &pf, CheckMode::WithCapacity).is_feasible());
        assert_eq!(path_cost(&n, &pf).unwrap(), zero());
    }

    #[test]
    fn degree_three_forbidden_gadget() {
        // v has edges 1 (to s), 2 (to t), 3 (to a); {1,2} forbidden
        let inst = instance(
            &[
                ("1", "s", "v"),
                ("2", "v", "t"),
                ("3", "v", "a"),
                ("4", "a", "s"),
                ("5", "a", "t"),
            ],
            &[("1", "2")],
            &[],
        );
        let (n, _) = build(&inst, &GadgetParams::default()).unwrap();
        let internal: Vec<&str> = n
            .edges()
            .iter()
            .filter(|e| e.id.as_str().starts_with("v.") && e.id.as_str().contains(">v."))
            .map(|e| e.id.as_str())
            .collect();
        assert_eq!(internal, ["v.1>v.3", "v.2>v.3", "v.3>v.1", "v.3>v.2"]);
    }

    #[test]
    fn crossing_gadget_has_center() {
        let inst = instance(
            &[
                ("1", "v", "a"),
                ("2", "v", "b"),
                ("3", "v", "c"),
                ("4", "v", "d"),
                ("5", "s", "a"),
                ("6", "c", "t"),
            ],
            &[("1", "2")],
            &[("v", &["1", "2", "3", "4"])],
        );
        let (n, origin) = build(&inst, &GadgetParams::default()).unwrap();
        assert!(n.vertex(&"v.w".into()).is_some());
        assert_eq!(origin.clusters()[&Id::from("v")].len(), 5);
        // v1 = 1, v4 = 3: capacity-1 exit, zero gain
        let e = &n.edges()[n.edge_by_id(&"v.w>v.3".into()).unwrap()];
        assert_eq!((e.capacity.clone(), e.gain.clone()), (int(1), int(0)));
        let e = &n.edges()[n.edge_by_id(&"v.4>v.w".into()).unwrap()];
        assert_eq!(e.gain, int(-2));
        // adjacent allowed pair 2-3 is joined directly, forbidden 1-2 is not
        assert!(n.edge_by_id(&"v.2>v.3".into()).is_some());
        assert!(n.edge_by_id(&"v.1>v.2".into()).is_none());
        assert!(n.edge_by_id(&"v.1>v.3".into()).is_none());
    }

    #[test]
    fn plain_transit_at_loss_level() {
        let inst = instance(&[("1", "s", "t")], &[], &[]);
        let (n, _) = paft_to_network(&inst, &GadgetParams::default()).unwrap();
        let p = n.path_by_ids(["s>s~1", "s~1>t"]).unwrap();
        let pf = PathFlow::new(p, q(9, 2)).unwrap();
        assert_eq!(path_cost(&n, &pf).unwrap(), int(2));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(GadgetParams::new(int(2)).is_err());
        assert!(GadgetParams::new(q(7, 2)).is_err());
        let inst = instance(&[("1", "s", "a"), ("2", "a", "t")], &[], &[]);
        assert!(matches!(
            paft_to_network(&inst, &GadgetParams::default()),
            Err(ReductionError::DegreeOutOfRange { degree: 2, .. })
        ));
    }
}
