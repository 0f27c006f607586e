//! Minimum-cost feasible path flow by pruned depth-first enumeration.

use num_traits::Signed;

use crate::network::{AdditiveNetwork, DirectedPath};
use crate::rational::{one, zero, Rational};
use crate::threshold::{threshold_table, Reach, ThresholdError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortestPathResult {
    pub path: DirectedPath,
    pub seed: Rational,
    pub cost: Rational,
    /// Simple paths that reached the target feasibly.
    pub feasible_paths: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ShortestPathError {
    #[error("no feasible path flow at this seed")]
    NoFeasiblePath,
    #[error("seed flow must be positive")]
    NonPositiveSeed,
    #[error("vertex index out of range")]
    UnknownVertex,
    #[error("reachability threshold is {}; supply an explicit seed above it", crate::rational::format_rational(.threshold))]
    SeedRequired { threshold: Rational },
    #[error(transparent)]
    Threshold(#[from] ThresholdError),
    #[error("path enumeration exceeded {0} search nodes")]
    BudgetExceeded(usize),
}

pub const DEFAULT_SEARCH_BUDGET: usize = 50_000_000;

/// Enumerates simple `s → t` paths, abandoning a prefix as soon as the flow
/// entering an edge exceeds its capacity or the flow leaving it is not
/// positive. Among feasible paths the cheapest wins; ties go to the
/// lexicographically smallest edge-id sequence.
pub fn shortest_path(
    network: &AdditiveNetwork,
    s: usize,
    t: usize,
    seed: &Rational,
) -> Result<ShortestPathResult, ShortestPathError> {
    shortest_path_with_budget(network, s, t, seed, DEFAULT_SEARCH_BUDGET)
}

pub fn shortest_path_with_budget(
    network: &AdditiveNetwork,
    s: usize,
    t: usize,
    seed: &Rational,
    budget: usize,
) -> Result<ShortestPathResult, ShortestPathError> {
    if !seed.is_positive() {
        return Err(ShortestPathError::NonPositiveSeed);
    }
    let n = network.vertex_count();
    if s >= n || t >= n {
        return Err(ShortestPathError::UnknownVertex);
    }
    let mut search = Search {
        network,
        target: t,
        visited: vec![false; n],
        path: Vec::new(),
        best: None,
        feasible: 0,
        nodes: 0,
        budget,
    };
    search.visited[s] = true;
    if s != t {
        search.run(s, seed.clone(), zero())?;
    }
    match search.best {
        Some((edges, cost)) => Ok(ShortestPathResult {
            path: DirectedPath::new_unchecked(edges),
            seed: seed.clone(),
            cost,
            feasible_paths: search.feasible,
        }),
        None => Err(ShortestPathError::NoFeasiblePath),
    }
}

struct Search<'a> {
    network: &'a AdditiveNetwork,
    target: usize,
    visited: Vec<bool>,
    path: Vec<usize>,
    best: Option<(Vec<usize>, Rational)>,
    feasible: usize,
    nodes: usize,
    budget: usize,
}

impl Search<'_> {
    fn run(&mut self, v: usize, gamma: Rational, cost: Rational) -> Result<(), ShortestPathError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(ShortestPathError::BudgetExceeded(self.budget));
        }
        for &e in self.network.out_edges(v) {
            let edge = self.network.edge(e);
            if self.visited[edge.head] || gamma > edge.capacity {
                continue;
            }
            let next = &gamma + &edge.gain;
            if !next.is_positive() {
                continue;
            }
            let cost = &cost + &edge.cost * &gamma;
            self.path.push(e);
            if edge.head == self.target {
                self.feasible += 1;
                // DFS visits complete paths in lexicographic order, so only a
                // strictly cheaper path replaces the incumbent.
                if self.best.as_ref().is_none_or(|(_, c)| cost < *c) {
                    self.best = Some((self.path.clone(), cost));
                }
            } else {
                self.visited[edge.head] = true;
                self.run(edge.head, next, cost)?;
                self.visited[edge.head] = false;
            }
            self.path.pop();
        }
        Ok(())
    }
}

/// Runs [`shortest_path`] at seed 1 when the reachability threshold is below 1.
///
/// A seed equal to the threshold is never feasible, so when `T >= 1` no
/// default seed works and the threshold is returned for the caller to pick
/// an explicit seed above it.
pub fn shortest_path_default_seed(
    network: &AdditiveNetwork,
    s: usize,
    t: usize,
) -> Result<ShortestPathResult, ShortestPathError> {
    if s >= network.vertex_count() || t >= network.vertex_count() {
        return Err(ShortestPathError::UnknownVertex);
    }
    let table = threshold_table(network, t)?;
    match table.get(s) {
        Reach::Unreachable => Err(ShortestPathError::NoFeasiblePath),
        Reach::Finite(th) if *th < one() => shortest_path(network, s, t, &one()),
        Reach::Finite(th) => Err(ShortestPathError::SeedRequired {
            threshold: th.clone(),
        }),
    }
}
