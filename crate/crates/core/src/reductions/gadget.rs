//! Gadget-level checks of the PAFT construction.

use serde::Serialize;

use crate::id::Id;
use crate::network::{
    accumulations, check_path_flow, raw_path_cost, CheckMode, PathCheck, PathFlow,
};
use crate::paft::{PaftInstance, PaftSpec};
use crate::rational::{int, one, q, Rational};

use super::paft::{arc_id, build, center, crossing_ports, GadgetParams, ReductionError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransitOutcome {
    /// Reaches the next gadget at the entering level with zero cost.
    Free,
    DeadEnd,
    CapacityBlocked,
    /// Reaches the next gadget but at positive cost or a different level.
    Costly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransitRow {
    pub from: usize,
    pub to: usize,
    #[serde(with = "crate::rational::serde_str")]
    pub entering: Rational,
    pub outcome: TransitOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GadgetReport {
    #[serde(with = "crate::rational::serde_str")]
    pub b: Rational,
    pub rows: Vec<TransitRow>,
    pub pass: bool,
}

/// Loss levels sampled below the full level `B + 1`.
pub fn sampled_losses() -> [Rational; 4] {
    [int(0), q(1, 4), q(1, 2), q(3, 4)]
}

/// A single degree-4 vertex `v` with both opposite pairs allowed and one
/// adjacent pair forbidden, so the crossing gadget is emitted.
fn crossing_instance() -> PaftInstance {
    let e = |i: &str, a: &str, b: &str| (Id::from(i), Id::from(a), Id::from(b));
    let spec = PaftSpec {
        vertices: ["a", "b", "c", "d", "s", "t", "v"].map(Id::from).to_vec(),
        edges: vec![
            e("1", "v", "a"),
            e("2", "v", "b"),
            e("3", "v", "c"),
            e("4", "v", "d"),
            e("5", "s", "t"),
        ],
        forbidden: vec![("1".into(), "2".into())],
        s: "s".into(),
        t: "t".into(),
        rotation: vec![
            ("v".into(), ["1", "2", "3", "4"].map(Id::from).to_vec()),
            ("a".into(), vec!["1".into()]),
            ("b".into(), vec!["2".into()]),
            ("c".into(), vec!["3".into()]),
            ("d".into(), vec!["4".into()]),
            ("s".into(), vec!["5".into()]),
            ("t".into(), vec!["5".into()]),
        ],
    };
    PaftInstance::from_spec(&spec).expect("fixed instance is well formed")
}

/// Runs every ordered transit `vi → w → vj` (`i ≠ j`) of the crossing gadget,
/// continuing onto the exit edge of `vj`, at entering levels `B + 1 - x`.
/// Passes iff the free transits are exactly the two opposite pairs, in both
/// directions, at every level, and every other transit dead-ends or is
/// capacity-blocked.
pub fn verify_crossing_gadget(params: &GadgetParams) -> Result<GadgetReport, ReductionError> {
    let inst = crossing_instance();
    let (net, _) = build(&inst, params)?;
    let v = inst
        .graph()
        .vertices
        .iter()
        .position(|x| x.as_str() == "v")
        .expect("vertex v");
    let ports = crossing_ports(&inst, v).expect("degree-4 rotation");
    let w = center(&inst.graph().vertices[v]);
    let exit_head = ["a", "b", "d", "c"];
    let full = params.b() + one();
    let mut rows = Vec::new();
    let mut pass = true;
    for x in sampled_losses() {
        let entering = &full - &x;
        for i in 0..4 {
            for j in (0..4).filter(|&j| j != i) {
                let ids = [
                    arc_id(&ports[i], &w),
                    arc_id(&w, &ports[j]),
                    arc_id(&ports[j], &Id::from(exit_head[j])),
                ];
                let path = net
                    .path_by_ids(ids.clone())
                    .map_err(ReductionError::Network)?;
                let pf = PathFlow::new(path.clone(), entering.clone()).expect("positive level");
                let outcome = match check_path_flow(&net, &pf, CheckMode::WithCapacity) {
                    PathCheck::DeadEnd { .. } => TransitOutcome::DeadEnd,
                    PathCheck::CapacityViolation { .. } => TransitOutcome::CapacityBlocked,
                    PathCheck::Feasible => {
                        let levels = accumulations(&net, &path, &entering);
                        let cost = raw_path_cost(&net, path.edges(), &entering);
                        if cost == int(0)
                            && levels[3] == entering
                            && levels[2] == &entering - params.b()
                        {
                            TransitOutcome::Free
                        } else {
                            TransitOutcome::Costly
                        }
                    }
                };
                let opposite = i + j == 3;
                pass &= match outcome {
                    TransitOutcome::Free => opposite,
                    TransitOutcome::DeadEnd | TransitOutcome::CapacityBlocked => !opposite,
                    TransitOutcome::Costly => false,
                };
                rows.push(TransitRow {
                    from: i + 1,
                    to: j + 1,
                    entering: entering.clone(),
                    outcome,
                });
            }
        }
    }
    Ok(GadgetReport {
        b: params.b().clone(),
        rows,
        pass,
    })
}

/// Exit level and cost of one plain-gadget transit entered at `entering`.
pub fn plain_transit(
    params: &GadgetParams,
    entering: &Rational,
) -> Result<Option<(Rational, Rational)>, ReductionError> {
    let e = |i: &str, a: &str, b: &str| (Id::from(i), Id::from(a), Id::from(b));
    let spec = PaftSpec {
        vertices: ["s", "t"].map(Id::from).to_vec(),
        edges: vec![e("1", "s", "t")],
        forbidden: vec![],
        s: "s".into(),
        t: "t".into(),
        rotation: vec![
            ("s".into(), vec!["1".into()]),
            ("t".into(), vec!["1".into()]),
        ],
    };
    let inst = PaftInstance::from_spec(&spec).expect("fixed instance is well formed");
    let (net, _) = build(&inst, params)?;
    let path = net
        .path_by_ids(["s>s~1", "s~1>t"])
        .map_err(ReductionError::Network)?;
    let Ok(pf) = PathFlow::new(path.clone(), entering.clone()) else {
        return Ok(None);
    };
    if !check_path_flow(&net, &pf, CheckMode::WithCapacity).is_feasible() {
        return Ok(None);
    }
    let levels = accumulations(&net, &path, entering);
    Ok(Some((
        levels[2].clone(),
        raw_path_cost(&net, path.edges(), entering),
    )))
}
