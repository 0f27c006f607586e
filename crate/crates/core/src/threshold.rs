//! Reachability thresholds.
//!
//! For a target `t`, the threshold of `v` is the least `T >= 0` such that
//! some path from `v` to `t` is feasible for every seed above `T`. It is
//! computed by a Bellman–Ford relaxation run backwards from `t` where each
//! edge `(v, u)` has weight `-g(v, u)` and every tentative distance is
//! clamped at zero. Capacities and costs play no part.
//!
//! Clamping can hide a positive-gain cycle (every value sits at zero), so an
//! unclamped relaxation of the same reversed graph runs alongside and a cycle
//! is reported when either one still improves in round `n`.

use std::collections::BTreeMap;

use crate::id::Id;
use crate::network::AdditiveNetwork;
use crate::rational::{zero, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reach {
    Finite(Rational),
    Unreachable,
}

impl Reach {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Reach::Finite(r) => Some(r),
            Reach::Unreachable => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdTable {
    pub target: usize,
    pub values: Vec<Reach>,
    /// Number of full relaxation rounds executed (at most `n`).
    pub rounds: usize,
}

impl ThresholdTable {
    pub fn get(&self, v: usize) -> &Reach {
        &self.values[v]
    }

    /// Values keyed by vertex id, for reports.
    pub fn by_id<'a>(&self, network: &'a AdditiveNetwork) -> BTreeMap<&'a Id, &Reach> {
        self.values
            .iter()
            .enumerate()
            .map(|(v, r)| (network.vertex_id(v), r))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ThresholdError {
    #[error("unknown target vertex `{0}`")]
    UnknownTarget(Id),
    /// The n-th relaxation round still lowered the value at `vertex`.
    #[error("positive-gain cycle detected (still relaxing at `{vertex}`)")]
    PositiveGainCycle { vertex: Id },
}

pub fn threshold_table(
    network: &AdditiveNetwork,
    target: usize,
) -> Result<ThresholdTable, ThresholdError> {
    let n = network.vertex_count();
    if target >= n {
        return Err(ThresholdError::UnknownTarget(Id::from(target)));
    }
    let mut values: Vec<Option<Rational>> = vec![None; n];
    values[target] = Some(zero());
    // unclamped distances: min over walks to t of -(sum of gains)
    let mut raw: Vec<Option<Rational>> = vec![None; n];
    raw[target] = Some(zero());

    let mut rounds = 0;
    for round in 1..=n {
        rounds = round;
        let mut changed = None;
        for e in network.edges() {
            if let Some(d_head) = &raw[e.head] {
                let cand = d_head - &e.gain;
                if raw[e.tail].as_ref().is_none_or(|cur| cand < *cur) {
                    raw[e.tail] = Some(cand);
                    changed.get_or_insert(e.tail);
                }
            }
            let Some(t_head) = &values[e.head] else {
                continue;
            };
            let mut cand = t_head - &e.gain;
            if cand < zero() {
                cand = zero();
            }
            let better = match &values[e.tail] {
                None => true,
                Some(cur) => cand < *cur,
            };
            if better && e.tail != target {
                values[e.tail] = Some(cand);
                changed.get_or_insert(e.tail);
            }
        }
        match changed {
            None => break,
            Some(v) if round == n => {
                return Err(ThresholdError::PositiveGainCycle {
                    vertex: network.vertex_id(v).clone(),
                })
            }
            Some(_) => {}
        }
    }

    Ok(ThresholdTable {
        target,
        values: values
            .into_iter()
            .map(|v| v.map_or(Reach::Unreachable, Reach::Finite))
            .collect(),
        rounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::NetworkBuilder;
    use crate::rational::int;

    fn build(edges: &[(&str, &str, i64)]) -> AdditiveNetwork {
        let mut b = NetworkBuilder::new();
        let mut vs: Vec<&str> = edges.iter().flat_map(|(a, b, _)| [*a, *b]).collect();
        vs.sort();
        vs.dedup();
        for v in vs {
            b.add_vertex(v);
        }
        for (i, (a, h, g)) in edges.iter().enumerate() {
            b.add_edge(i + 1, *a, *h, int(1), int(0), int(*g));
        }
        b.build().unwrap()
    }

    fn value(n: &AdditiveNetwork, t: &ThresholdTable, v: &str) -> Reach {
        t.get(n.vertex(&v.into()).unwrap()).clone()
    }

    #[test]
    fn chain_with_losses() {
        let n = build(&[("s", "a", -3), ("a", "t", -2)]);
        let t = threshold_table(&n, n.vertex(&"t".into()).unwrap()).unwrap();
        assert_eq!(value(&n, &t, "t"), Reach::Finite(int(0)));
        assert_eq!(value(&n, &t, "a"), Reach::Finite(int(2)));
        assert_eq!(value(&n, &t, "s"), Reach::Finite(int(5)));
    }

    #[test]
    fn clamps_at_zero() {
        let n = build(&[("s", "a", 10), ("a", "t", -4)]);
        let t = threshold_table(&n, n.vertex(&"t".into()).unwrap()).unwrap();
        assert_eq!(value(&n, &t, "s"), Reach::Finite(int(0)));
        assert_eq!(value(&n, &t, "a"), Reach::Finite(int(4)));
    }

    #[test]
    fn positive_gain_cycle_is_reported() {
        let n = build(&[("a", "b", 1), ("b", "a", 0), ("b", "t", 0)]);
        let err = threshold_table(&n, n.vertex(&"t".into()).unwrap()).unwrap_err();
        assert!(matches!(err, ThresholdError::PositiveGainCycle { .. }));
    }

    #[test]
    fn unreachable_vertices() {
        let n = build(&[("s", "t", 0), ("t", "x", 0)]);
        let t = threshold_table(&n, n.vertex(&"t".into()).unwrap()).unwrap();
        assert_eq!(value(&n, &t, "x"), Reach::Unreachable);
        assert_eq!(value(&n, &t, "s"), Reach::Finite(int(0)));
    }

    #[test]
    fn terminates_within_n_rounds() {
        let n = build(&[
            ("a", "b", -1),
            ("b", "c", -1),
            ("c", "d", -1),
            ("d", "t", -1),
        ]);
        let t = threshold_table(&n, n.vertex(&"t".into()).unwrap()).unwrap();
        assert!(t.rounds <= n.vertex_count());
        assert_eq!(value(&n, &t, "a"), Reach::Finite(int(4)));
    }
}
