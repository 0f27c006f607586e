//! Exact maximum in-flow / out-flow for desk-sized additive networks.
//!
//! An edge with non-zero gain behaves discontinuously: unused it delivers
//! nothing, used with flow `f` it delivers `max(0, f + g)`. Each such edge
//! is labelled unused, delivering (`f + g >= 0`, delivers `f + g`) or
//! absorbing (`f + g <= 0`, delivers 0). For a fixed labelling the problem
//! is a linear program. Labellings are searched by branch and bound: open
//! edges are relaxed to the convex hull of their three pieces, which gives
//! an upper bound for every completion.
//!
//! The labelled region is open where `f > 0` is required, so an LP optimum
//! may sit on its boundary. A second LP checks whether the optimum is
//! attained with every used edge strictly positive; values that are only
//! approached are reported as a separate supremum.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::lp::{LinearProgram, LpError, LpOutcome, Sense};
use crate::network::{AdditiveNetwork, GeneralFlow, Objective};
use crate::rational::{int, one, zero, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaxFlowOptions {
    /// Limit on edges with non-zero gain (the discontinuous ones).
    pub max_candidates: usize,
    /// Limit on branch-and-bound nodes.
    pub max_nodes: usize,
}

impl Default for MaxFlowOptions {
    fn default() -> Self {
        MaxFlowOptions {
            max_candidates: 16,
            max_nodes: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SupportLabeling {
    pub used: BTreeSet<usize>,
    pub absorbed: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxFlowStats {
    pub nodes: usize,
    pub lps: usize,
    pub candidates: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxFlowResult {
    pub objective: Objective,
    /// Best value attained by an actual feasible flow.
    pub value: Rational,
    pub flow: GeneralFlow,
    pub labeling: SupportLabeling,
    /// False when some labelling approaches a larger value without attaining it.
    pub attained: bool,
    /// Largest non-attained boundary value, when it exceeds `value`.
    pub supremum: Option<Rational>,
    pub stats: MaxFlowStats,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MaxFlowError {
    #[error("{candidates} edges with non-zero gain exceed the enumeration budget of {limit}")]
    TooManyCandidates { candidates: usize, limit: usize },
    #[error("branch and bound exceeded {0} nodes")]
    NodeBudget(usize),
    #[error("degenerate linear program: {0}")]
    Lp(#[from] LpError),
    #[error("linear program unexpectedly unbounded")]
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Label {
    Unused,
    Delivering,
    Absorbed,
    Open,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    /// Zero capacity: never carries flow.
    Dead,
    /// Zero gain: delivers exactly what enters.
    Continuous,
    Candidate,
}

struct Problem<'a> {
    network: &'a AdditiveNetwork,
    objective: Objective,
    kinds: Vec<Kind>,
}

/// Per-edge LP variable layout for one labelling.
struct Layout {
    lp: LinearProgram,
    flow_var: Vec<Option<usize>>,
    delivered_var: Vec<Option<usize>>,
    /// Objective as linear terms plus a constant.
    obj_terms: Vec<(usize, Rational)>,
    obj_const: Rational,
}

impl Problem<'_> {
    fn delivering_allowed(&self, e: usize) -> bool {
        let edge = self.network.edge(e);
        edge.gain.is_positive() || edge.capacity > -edge.gain.clone()
    }

    fn absorbing_allowed(&self, e: usize) -> bool {
        self.network.edge(e).gain.is_negative()
    }

    fn layout(&self, labels: &[Label]) -> Layout {
        let net = self.network;
        let m = net.edge_count();
        let mut lp = LinearProgram::new(0);
        let mut flow_var = vec![None; m];
        let mut delivered_var = vec![None; m];
        // delivered(e) = terms + constant
        let mut delivered: Vec<(Vec<(usize, Rational)>, Rational)> = vec![(Vec::new(), zero()); m];

        for e in 0..m {
            let edge = net.edge(e);
            let label = match self.kinds[e] {
                Kind::Dead => continue,
                Kind::Continuous => None,
                Kind::Candidate => Some(labels[e]),
            };
            if label == Some(Label::Unused) {
                continue;
            }
            let f = lp.add_var();
            flow_var[e] = Some(f);
            let u = &edge.capacity;
            let g = &edge.gain;
            match label {
                None => {
                    lp.constrain(vec![(f, one())], Sense::Le, u.clone());
                    delivered[e] = (vec![(f, one())], zero());
                }
                Some(Label::Delivering) => {
                    lp.constrain(vec![(f, one())], Sense::Le, u.clone());
                    if g.is_negative() {
                        lp.constrain(vec![(f, one())], Sense::Ge, -g.clone());
                    }
                    delivered[e] = (vec![(f, one())], g.clone());
                }
                Some(Label::Absorbed) => {
                    let cap = if *u < -g.clone() {
                        u.clone()
                    } else {
                        -g.clone()
                    };
                    lp.constrain(vec![(f, one())], Sense::Le, cap);
                }
                Some(Label::Open) => {
                    let d = lp.add_var();
                    delivered_var[e] = Some(d);
                    for (af, ad, sense, rhs) in hull_constraints(&self.hull_points(e)) {
                        lp.constrain(vec![(f, af), (d, ad)], sense, rhs);
                    }
                    delivered[e] = (vec![(d, one())], zero());
                }
                Some(Label::Unused) => unreachable!(),
            }
        }

        for v in 0..net.vertex_count() {
            if net.is_terminal(v) {
                continue;
            }
            let mut terms = Vec::new();
            let mut constant = zero();
            for &e in net.in_edges(v) {
                terms.extend(delivered[e].0.iter().cloned());
                constant += &delivered[e].1;
            }
            for &e in net.out_edges(v) {
                if let Some(f) = flow_var[e] {
                    terms.push((f, int(-1)));
                }
            }
            if terms.is_empty() && constant.is_zero() {
                continue;
            }
            lp.constrain(terms, Sense::Eq, -constant);
        }

        let mut obj_terms = Vec::new();
        let mut obj_const = zero();
        match self.objective {
            Objective::InFlow => {
                for &t in net.sinks() {
                    for &e in net.in_edges(t) {
                        obj_terms.extend(delivered[e].0.iter().cloned());
                        obj_const += &delivered[e].1;
                    }
                }
            }
            Objective::OutFlow => {
                for &s in net.sources() {
                    for &e in net.out_edges(s) {
                        if let Some(f) = flow_var[e] {
                            obj_terms.push((f, one()));
                        }
                    }
                }
            }
        }
        lp.objective = obj_terms.clone();
        Layout {
            lp,
            flow_var,
            delivered_var,
            obj_terms,
            obj_const,
        }
    }

    /// Corner points of the (flow, delivered) pieces of a candidate edge.
    fn hull_points(&self, e: usize) -> Vec<(Rational, Rational)> {
        let edge = self.network.edge(e);
        let (u, g) = (&edge.capacity, &edge.gain);
        let mut pts = vec![(zero(), zero())];
        if g.is_negative() {
            let a = if *u < -g.clone() {
                u.clone()
            } else {
                -g.clone()
            };
            pts.push((a, zero()));
        }
        if self.delivering_allowed(e) {
            let lo = if g.is_negative() { -g.clone() } else { zero() };
            pts.push((lo.clone(), &lo + g));
            pts.push((u.clone(), u + g));
        }
        pts
    }

    /// Label consistent with an edge's relaxed point, if any.
    fn implied_label(&self, e: usize, f: &Rational, d: &Rational) -> Option<Label> {
        let g = &self.network.edge(e).gain;
        if f.is_zero() {
            return d.is_zero().then_some(Label::Unused);
        }
        if d.is_zero() && self.absorbing_allowed(e) && *f <= -g.clone() {
            return Some(Label::Absorbed);
        }
        if self.delivering_allowed(e) && *d == f + g && !(f + g).is_negative() {
            return Some(Label::Delivering);
        }
        None
    }
}

type HalfPlane = (Rational, Rational, Sense, Rational);

/// Linear description `a_f·f + a_d·d (sense) rhs` of the convex hull of `pts`.
fn hull_constraints(pts: &[(Rational, Rational)]) -> Vec<HalfPlane> {
    let hull = convex_hull(pts);
    let line = |p: &(Rational, Rational), q: &(Rational, Rational)| {
        // cross(q - p, x - p) = (qx-px)(d-py) - (qy-py)(f-px)
        let dx = &q.0 - &p.0;
        let dy = &q.1 - &p.1;
        let rhs = &dx * &p.1 - &dy * &p.0;
        (-dy, dx, rhs)
    };
    match hull.len() {
        0 => Vec::new(),
        1 => {
            let p = &hull[0];
            vec![
                (one(), zero(), Sense::Eq, p.0.clone()),
                (zero(), one(), Sense::Eq, p.1.clone()),
            ]
        }
        2 => {
            let (p, q) = (&hull[0], &hull[1]);
            let (af, ad, rhs) = line(p, q);
            let dx = &q.0 - &p.0;
            let dy = &q.1 - &p.1;
            let at = |x: &(Rational, Rational)| &dx * &x.0 + &dy * &x.1;
            vec![
                (af, ad, Sense::Eq, rhs),
                (dx.clone(), dy.clone(), Sense::Ge, at(p)),
                (dx.clone(), dy.clone(), Sense::Le, at(q)),
            ]
        }
        k => (0..k)
            .map(|i| {
                let (af, ad, rhs) = line(&hull[i], &hull[(i + 1) % k]);
                (af, ad, Sense::Ge, rhs)
            })
            .collect(),
    }
}

/// Andrew's monotone chain; counter-clockwise, collinear points dropped.
fn convex_hull(pts: &[(Rational, Rational)]) -> Vec<(Rational, Rational)> {
    let mut p = pts.to_vec();
    p.sort();
    p.dedup();
    if p.len() <= 2 {
        return p;
    }
    let cross = |o: &(Rational, Rational), a: &(Rational, Rational), b: &(Rational, Rational)| {
        (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
    };
    let mut lower: Vec<(Rational, Rational)> = Vec::new();
    for x in &p {
        while lower.len() >= 2
            && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], x).is_positive()
        {
            lower.pop();
        }
        lower.push(x.clone());
    }
    let mut upper: Vec<(Rational, Rational)> = Vec::new();
    for x in p.iter().rev() {
        while upper.len() >= 2
            && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], x).is_positive()
        {
            upper.pop();
        }
        upper.push(x.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

struct Search<'a> {
    problem: Problem<'a>,
    options: MaxFlowOptions,
    best: Rational,
    best_flow: GeneralFlow,
    best_labels: Option<Vec<Label>>,
    supremum: Option<Rational>,
    nodes: usize,
    lps: usize,
}

enum Solved {
    Infeasible,
    Optimal { x: Vec<Rational>, value: Rational },
}

impl Search<'_> {
    fn solve(&mut self, lp: &LinearProgram) -> Result<Solved, MaxFlowError> {
        self.lps += 1;
        match lp.maximize()? {
            LpOutcome::Infeasible => Ok(Solved::Infeasible),
            LpOutcome::Unbounded => Err(MaxFlowError::Unbounded),
            LpOutcome::Optimal { x, value } => Ok(Solved::Optimal { x, value }),
        }
    }

    fn explore(&mut self, labels: &mut Vec<Label>) -> Result<(), MaxFlowError> {
        self.nodes += 1;
        if self.nodes > self.options.max_nodes {
            return Err(MaxFlowError::NodeBudget(self.options.max_nodes));
        }
        let layout = self.problem.layout(labels);
        let Solved::Optimal { x, value } = self.solve(&layout.lp)? else {
            return Ok(());
        };
        let bound = value + &layout.obj_const;
        if bound <= self.best {
            return Ok(());
        }
        // every descendant region lies inside this one
        if labels
            .iter()
            .any(|l| matches!(l, Label::Delivering | Label::Absorbed))
            && !self.region_nonempty(labels)?
        {
            return Ok(());
        }

        let open: Vec<usize> = (0..labels.len())
            .filter(|&e| labels[e] == Label::Open)
            .collect();
        let mut implied = labels.clone();
        let mut branch_on = None;
        for &e in &open {
            let f = layout.flow_var[e].map_or_else(zero, |i| x[i].clone());
            let d = layout.delivered_var[e].map_or_else(zero, |i| x[i].clone());
            match self.problem.implied_label(e, &f, &d) {
                Some(l) => implied[e] = l,
                None => {
                    branch_on = Some(e);
                    break;
                }
            }
        }

        if branch_on.is_none() {
            if self.try_attain(&implied, &bound)? {
                return Ok(());
            }
            if open.is_empty() {
                if self.supremum.as_ref().is_none_or(|s| bound > *s) {
                    self.supremum = Some(bound);
                }
                return Ok(());
            }
        }

        let e = branch_on.unwrap_or(open[0]);
        for l in [Label::Delivering, Label::Absorbed, Label::Unused] {
            let allowed = match l {
                Label::Delivering => self.problem.delivering_allowed(e),
                Label::Absorbed => self.problem.absorbing_allowed(e),
                _ => true,
            };
            if !allowed {
                continue;
            }
            labels[e] = l;
            self.explore(labels)?;
        }
        labels[e] = Label::Open;
        Ok(())
    }

    /// Whether some flow has every used candidate edge strictly positive.
    /// Without one the labelling describes no flow at all.
    fn region_nonempty(&mut self, labels: &[Label]) -> Result<bool, MaxFlowError> {
        let mut layout = self.problem.layout(labels);
        let tau = layout.lp.add_var();
        for (e, l) in labels.iter().enumerate() {
            if matches!(l, Label::Delivering | Label::Absorbed) {
                let f = layout.flow_var[e].expect("used edge has a flow variable");
                layout
                    .lp
                    .constrain(vec![(f, one()), (tau, int(-1))], Sense::Ge, zero());
            }
        }
        layout.lp.constrain(vec![(tau, one())], Sense::Le, one());
        layout.lp.objective = vec![(tau, one())];
        Ok(matches!(self.solve(&layout.lp)?, Solved::Optimal { value, .. } if value.is_positive()))
    }

    /// Looks for a flow of value `target` under a complete labelling with
    /// every used candidate edge strictly positive.
    fn try_attain(&mut self, labels: &[Label], target: &Rational) -> Result<bool, MaxFlowError> {
        let mut layout = self.problem.layout(labels);
        let tau = layout.lp.add_var();
        let terms = layout.obj_terms.clone();
        layout
            .lp
            .constrain(terms, Sense::Eq, target - &layout.obj_const);
        for (e, l) in labels.iter().enumerate() {
            if matches!(l, Label::Delivering | Label::Absorbed) {
                let f = layout.flow_var[e].expect("used edge has a flow variable");
                layout
                    .lp
                    .constrain(vec![(f, one()), (tau, int(-1))], Sense::Ge, zero());
            }
        }
        layout.lp.constrain(vec![(tau, one())], Sense::Le, one());
        layout.lp.objective = vec![(tau, one())];
        let Solved::Optimal { x, value } = self.solve(&layout.lp)? else {
            return Ok(false);
        };
        if !value.is_positive() {
            return Ok(false);
        }
        let mut flow = GeneralFlow::new();
        for (e, var) in layout.flow_var.iter().enumerate() {
            if let Some(i) = var {
                flow.insert(e, x[*i].clone());
            }
        }
        self.best = target.clone();
        self.best_flow = flow;
        self.best_labels = Some(labels.to_vec());
        Ok(true)
    }
}

pub fn max_flow(
    network: &AdditiveNetwork,
    objective: Objective,
    options: &MaxFlowOptions,
) -> Result<MaxFlowResult, MaxFlowError> {
    let kinds: Vec<Kind> = network
        .edges()
        .iter()
        .map(|e| {
            if !e.capacity.is_positive() {
                Kind::Dead
            } else if e.gain.is_zero() {
                Kind::Continuous
            } else {
                Kind::Candidate
            }
        })
        .collect();
    let candidates = kinds.iter().filter(|&&k| k == Kind::Candidate).count();
    if candidates > options.max_candidates {
        return Err(MaxFlowError::TooManyCandidates {
            candidates,
            limit: options.max_candidates,
        });
    }
    let mut labels: Vec<Label> = kinds
        .iter()
        .map(|&k| {
            if k == Kind::Candidate {
                Label::Open
            } else {
                Label::Unused
            }
        })
        .collect();
    let mut search = Search {
        problem: Problem {
            network,
            objective,
            kinds,
        },
        options: *options,
        best: zero(),
        best_flow: GeneralFlow::new(),
        best_labels: None,
        supremum: None,
        nodes: 0,
        lps: 0,
    };
    search.explore(&mut labels)?;

    let mut labeling = SupportLabeling::default();
    if let Some(labels) = &search.best_labels {
        for (e, l) in labels.iter().enumerate() {
            match l {
                Label::Delivering => {
                    labeling.used.insert(e);
                }
                Label::Absorbed => {
                    labeling.used.insert(e);
                    labeling.absorbed.insert(e);
                }
                _ => {}
            }
        }
    }
    for (e, _) in search.best_flow.iter() {
        if search.problem.kinds[e] == Kind::Continuous {
            labeling.used.insert(e);
        }
    }
    let supremum = search.supremum.filter(|s| *s > search.best);
    Ok(MaxFlowResult {
        objective,
        attained: supremum.is_none(),
        value: search.best,
        flow: search.best_flow,
        labeling,
        supremum,
        stats: MaxFlowStats {
            nodes: search.nodes,
            lps: search.lps,
            candidates,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{flow_value, validate_flow, NetworkBuilder};
    use crate::rational::q;

    fn net(
        edges: &[(&str, &str, Rational, Rational)],
        sources: &[&str],
        sinks: &[&str],
    ) -> AdditiveNetwork {
        let mut b = NetworkBuilder::new();
        let mut vs: Vec<&str> = edges.iter().flat_map(|e| [e.0, e.1]).collect();
        vs.extend(sources);
        vs.extend(sinks);
        vs.sort();
        vs.dedup();
        for v in vs {
            b.add_vertex(v);
        }
        for (i, (a, h, u, g)) in edges.iter().enumerate() {
            b.add_edge(i + 1, *a, *h, u.clone(), int(0), g.clone());
        }
        for s in sources {
            b.add_source(*s);
        }
        for t in sinks {
            b.add_sink(*t);
        }
        b.build().unwrap()
    }

    fn check(n: &AdditiveNetwork, r: &MaxFlowResult) {
        assert!(validate_flow(n, &r.flow).unwrap().is_clean());
        assert_eq!(flow_value(n, &r.flow, r.objective), r.value);
    }

    #[test]
    fn single_edge_examples() {
        let n = net(&[("s", "t", int(1), int(0))], &["s"], &["t"]);
        let r = max_flow(&n, Objective::InFlow, &Default::default()).unwrap();
        assert_eq!(r.value, int(1));
        assert!(r.attained);
        check(&n, &r);

        let n = net(&[("s", "t", int(1), int(2))], &["s"], &["t"]);
        let r = max_flow(&n, Objective::InFlow, &Default::default()).unwrap();
        assert_eq!(r.value, int(3));
        assert_eq!(r.flow.get(0), int(1));
        check(&n, &r);
    }

    #[test]
    fn lossy_edge_can_absorb() {
        // s -> v (g = -3, u = 2) absorbs everything; out-flow still counts it
        let n = net(
            &[("s", "v", int(2), int(-3)), ("v", "t", int(5), int(0))],
            &["s"],
            &["t"],
        );
        let r = max_flow(&n, Objective::OutFlow, &Default::default()).unwrap();
        assert_eq!(r.value, int(2));
        check(&n, &r);
        let r = max_flow(&n, Objective::InFlow, &Default::default()).unwrap();
        assert_eq!(r.value, int(0));
    }

    #[test]
    fn empty_labelling_is_not_a_supremum() {
        // using s -> a delivers f + 1 > 1, more than a -> t carries, so the
        // only feasible flow is zero
        let n = net(
            &[("s", "a", int(1), int(1)), ("a", "t", int(1), int(0))],
            &["s"],
            &["t"],
        );
        let r = max_flow(&n, Objective::InFlow, &Default::default()).unwrap();
        assert_eq!(r.value, int(0));
        assert!(r.attained);
        assert_eq!(r.supremum, None);
    }

    #[test]
    fn unattained_supremum_is_reported() {
        // b splits one unit between t directly and b -> a (gain +1). At a,
        // a -> t carries 1 and the surplus f must be absorbed by a -> x, so
        // the in-flow is 2 - f for every f > 0: sup 2, never attained.
        let n = net(
            &[
                ("s", "b", int(1), int(0)),
                ("b", "t", int(1), int(0)),
                ("b", "a", int(1), int(1)),
                ("a", "t", int(1), int(0)),
                ("a", "x", int(5), int(-5)),
            ],
            &["s"],
            &["t"],
        );
        let r = max_flow(&n, Objective::InFlow, &Default::default()).unwrap();
        assert_eq!(r.value, int(1));
        assert!(!r.attained);
        assert_eq!(r.supremum, Some(int(2)));
        check(&n, &r);
    }

    #[test]
    fn gains_and_fractional_split() {
        // two sources feeding a vertex that splits to two sinks
        let n = net(
            &[
                ("s", "v", int(1), q(1, 2)),
                ("v", "t1", int(1), int(0)),
                ("v", "t2", q(1, 4), int(0)),
            ],
            &["s"],
            &["t1", "t2"],
        );
        let r = max_flow(&n, Objective::InFlow, &Default::default()).unwrap();
        assert_eq!(r.value, q(5, 4));
        check(&n, &r);
    }

    #[test]
    fn budget_is_enforced() {
        let edges: Vec<_> = (0..3).map(|_| ("s", "t", int(1), int(1))).collect();
        let n = net(&edges, &["s"], &["t"]);
        let opts = MaxFlowOptions {
            max_candidates: 2,
            ..Default::default()
        };
        assert!(matches!(
            max_flow(&n, Objective::InFlow, &opts),
            Err(MaxFlowError::TooManyCandidates {
                candidates: 3,
                limit: 2
            })
        ));
    }

    #[test]
    fn hull_of_gain_piece() {
        // g = +2, u = 3: triangle (0,0), (0,2), (3,5)
        let h = convex_hull(&[(int(0), int(0)), (int(0), int(2)), (int(3), int(5))]);
        assert_eq!(h.len(), 3);
        let cons = hull_constraints(&h);
        let inside = |f: Rational, d: Rational| {
            cons.iter().all(|(a, b, s, r)| {
                let lhs = a * &f + b * &d;
                match s {
                    Sense::Le => lhs <= *r,
                    Sense::Ge => lhs >= *r,
                    Sense::Eq => lhs == *r,
                }
            })
        };
        assert!(inside(int(0), int(1)));
        assert!(inside(int(3), int(5)));
        assert!(!inside(int(1), int(0)));
        assert!(!inside(int(1), int(4)));
    }

    /// Edmonds–Karp on integer capacities with a super source and sink.
    fn augmenting_paths(
        n: usize,
        edges: &[(usize, usize, i64)],
        sources: &[usize],
        sinks: &[usize],
    ) -> i64 {
        let (ss, tt) = (n, n + 1);
        let mut cap = vec![vec![0i64; n + 2]; n + 2];
        for &(a, b, u) in edges {
            cap[a][b] += u;
        }
        for &s in sources {
            cap[ss][s] = i64::MAX / 4;
        }
        for &t in sinks {
            cap[t][tt] = i64::MAX / 4;
        }
        let mut total = 0;
        loop {
            let mut prev = vec![usize::MAX; n + 2];
            prev[ss] = ss;
            let mut queue = std::collections::VecDeque::from([ss]);
            while let Some(v) = queue.pop_front() {
                for w in 0..n + 2 {
                    if prev[w] == usize::MAX && cap[v][w] > 0 {
                        prev[w] = v;
                        queue.push_back(w);
                    }
                }
            }
            if prev[tt] == usize::MAX {
                return total;
            }
            let mut push = i64::MAX;
            let mut w = tt;
            while w != ss {
                push = push.min(cap[prev[w]][w]);
                w = prev[w];
            }
            let mut w = tt;
            while w != ss {
                cap[prev[w]][w] -= push;
                cap[w][prev[w]] += push;
                w = prev[w];
            }
            total += push;
        }
    }

    proptest::proptest! {
        #[test]
        fn zero_gain_matches_augmenting_paths(
            raw in proptest::collection::vec((0usize..6, 0usize..6, 0i64..5), 1..12),
        ) {
            // v0 is the source, v5 the sink; edges into the source or out of
            // the sink are skipped so both objectives coincide
            let edges: Vec<(usize, usize, i64)> =
                raw.into_iter().filter(|&(a, b, _)| a != b && b != 0 && a != 5).collect();
            let mut b = NetworkBuilder::new();
            for i in 0..6 { b.add_vertex(format!("v{i}")); }
            for (i, &(a, h, u)) in edges.iter().enumerate() {
                b.add_edge(i, format!("v{a}"), format!("v{h}"), int(u), int(0), int(0));
            }
            b.add_source("v0");
            b.add_sink("v5");
            let n = b.build().unwrap();
            let expect = augmenting_paths(6, &edges, &[0], &[5]);
            for obj in [Objective::InFlow, Objective::OutFlow] {
                let r = max_flow(&n, obj, &Default::default()).unwrap();
                proptest::prop_assert_eq!(&r.value, &int(expect));
                proptest::prop_assert!(r.attained);
                check(&n, &r);
            }
        }

        #[test]
        fn witnesses_with_gains_are_valid(
            raw in proptest::collection::vec((0usize..5, 0usize..5, 0i64..4, -2i64..3), 1..8),
        ) {
            let mut b = NetworkBuilder::new();
            for i in 0..5 { b.add_vertex(format!("v{i}")); }
            for (i, &(a, h, u, g)) in raw.iter().enumerate() {
                if a != h && h != 0 && a != 4 {
                    b.add_edge(i, format!("v{a}"), format!("v{h}"), int(u), int(0), int(g));
                }
            }
            b.add_source("v0");
            b.add_sink("v4");
            let n = b.build().unwrap();
            let r = max_flow(&n, Objective::InFlow, &Default::default()).unwrap();
            check(&n, &r);
            if let Some(sup) = &r.supremum {
                proptest::prop_assert!(*sup > r.value);
            }
        }
    }

    /// Supremum of the objective over all feasible flows, and whether it is
    /// attained, by solving one LP per support labelling of every edge.
    fn exhaustive(n: &AdditiveNetwork, obj: Objective) -> (Rational, bool) {
        let m = n.edge_count();
        let mut best = zero();
        let mut attained = true;
        for code in 0..3usize.pow(m as u32) {
            // 0 unused, 1 delivering (f + g >= 0), 2 absorbing (f + g <= 0, g < 0)
            let labels: Vec<usize> = (0..m).map(|e| code / 3usize.pow(e as u32) % 3).collect();
            if (0..m).any(|e| labels[e] == 2 && !n.edge(e).gain.is_negative()) {
                continue;
            }
            let mut lp = LinearProgram::new(m);
            for (e, &label) in labels.iter().enumerate() {
                let (u, g) = (&n.edge(e).capacity, &n.edge(e).gain);
                match label {
                    0 => lp.constrain(vec![(e, one())], Sense::Eq, zero()),
                    1 => {
                        lp.constrain(vec![(e, one())], Sense::Le, u.clone());
                        lp.constrain(vec![(e, one())], Sense::Ge, -g.clone());
                    }
                    _ => {
                        lp.constrain(vec![(e, one())], Sense::Le, u.clone());
                        lp.constrain(vec![(e, one())], Sense::Le, -g.clone());
                    }
                }
            }
            let delivered = |e: usize| -> (Vec<(usize, Rational)>, Rational) {
                if labels[e] == 1 {
                    (vec![(e, one())], n.edge(e).gain.clone())
                } else {
                    (vec![], zero())
                }
            };
            for v in 0..n.vertex_count() {
                if n.is_terminal(v) {
                    continue;
                }
                let mut terms = vec![];
                let mut c = zero();
                for &e in n.in_edges(v) {
                    let (t, k) = delivered(e);
                    terms.extend(t);
                    c += k;
                }
                for &e in n.out_edges(v) {
                    terms.push((e, int(-1)));
                }
                lp.constrain(terms, Sense::Eq, -c);
            }
            let mut c = zero();
            let mut terms = vec![];
            match obj {
                Objective::InFlow => {
                    for &t in n.sinks() {
                        for &e in n.in_edges(t) {
                            let (tt, k) = delivered(e);
                            terms.extend(tt);
                            c += k;
                        }
                    }
                }
                Objective::OutFlow => {
                    for &s in n.sources() {
                        for &e in n.out_edges(s) {
                            terms.push((e, one()));
                        }
                    }
                }
            }
            lp.objective = terms.clone();
            // skip labellings that admit no flow with every used edge positive
            let mut probe = lp.clone();
            let tau = probe.add_var();
            for e in (0..m).filter(|&e| labels[e] != 0) {
                probe.constrain(vec![(e, one()), (tau, int(-1))], Sense::Ge, zero());
            }
            probe.constrain(vec![(tau, one())], Sense::Le, one());
            probe.objective = vec![(tau, one())];
            let nonempty = matches!(probe.maximize().unwrap(), LpOutcome::Optimal { value, .. } if value.is_positive());
            if !nonempty && labels.iter().any(|&l| l != 0) {
                continue;
            }
            let LpOutcome::Optimal { value, .. } = lp.maximize().unwrap() else {
                continue;
            };
            let value = value + &c;
            // attained iff some optimal point has every used edge positive
            let tau = lp.add_var();
            lp.constrain(terms, Sense::Eq, &value - &c);
            for e in (0..m).filter(|&e| labels[e] != 0) {
                lp.constrain(vec![(e, one()), (tau, int(-1))], Sense::Ge, zero());
            }
            lp.constrain(vec![(tau, one())], Sense::Le, one());
            lp.objective = vec![(tau, one())];
            let ok = matches!(lp.maximize().unwrap(), LpOutcome::Optimal { value, .. } if value.is_positive())
                || labels.iter().all(|&l| l == 0);
            if value > best {
                best = value;
                attained = ok;
            } else if value == best && ok {
                attained = true;
            }
        }
        (best, attained)
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]
        #[test]
        fn agrees_with_exhaustive_labelling(
            raw in proptest::collection::vec((0usize..4, 0usize..4, 0i64..4, -3i64..3), 1..7),
            obj_in in proptest::bool::ANY,
        ) {
            let mut b = NetworkBuilder::new();
            for i in 0..4 { b.add_vertex(format!("v{i}")); }
            for (i, &(a, h, u, g)) in raw.iter().enumerate() {
                if a != h && h != 0 && a != 3 {
                    b.add_edge(i, format!("v{a}"), format!("v{h}"), int(u), int(0), int(g));
                }
            }
            b.add_source("v0");
            b.add_sink("v3");
            let n = b.build().unwrap();
            let obj = if obj_in { Objective::InFlow } else { Objective::OutFlow };
            let (sup, attained) = exhaustive(&n, obj);
            let r = max_flow(&n, obj, &Default::default()).unwrap();
            let got = r.supremum.clone().unwrap_or_else(|| r.value.clone());
            proptest::prop_assert_eq!(got, sup);
            proptest::prop_assert_eq!(r.attained, attained);
            check(&n, &r);
        }
    }
}
