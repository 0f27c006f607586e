//! Brute-force oracles for the two source problems of the reductions.

use crate::cnf::CnfFormula;
use crate::paft::PaftInstance;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PaftVerdict {
    /// Edge indices of an F-valid simple path from `s` to `t`.
    ValidPath(Vec<usize>),
    NoValidPath,
}

impl PaftVerdict {
    pub fn is_positive(&self) -> bool {
        matches!(self, PaftVerdict::ValidPath(_))
    }
}

/// Depth-first search over simple paths, edges tried in id order; returns
/// the first F-valid path found.
pub fn paft_oracle(instance: &PaftInstance) -> PaftVerdict {
    let g = instance.graph();
    let inc = g.incidence();
    let mut visited = vec![false; g.vertices.len()];
    let mut path = Vec::new();
    visited[instance.s()] = true;
    if dfs(instance, &inc, instance.s(), &mut visited, &mut path) {
        PaftVerdict::ValidPath(path)
    } else {
        PaftVerdict::NoValidPath
    }
}

fn dfs(
    inst: &PaftInstance,
    inc: &[Vec<usize>],
    v: usize,
    visited: &mut [bool],
    path: &mut Vec<usize>,
) -> bool {
    if v == inst.t() {
        return true;
    }
    for &e in &inc[v] {
        let w = inst.graph().edges[e].other(v);
        if visited[w] {
            continue;
        }
        if let Some(&last) = path.last() {
            if inst.is_forbidden(last, e) {
                continue;
            }
        }
        visited[w] = true;
        path.push(e);
        if dfs(inst, inc, w, visited, path) {
            return true;
        }
        path.pop();
        visited[w] = false;
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatVerdict {
    /// `assignment[i]` is the value of variable `i + 1`.
    Assignment(Vec<bool>),
    Unsatisfiable,
}

impl SatVerdict {
    pub fn is_positive(&self) -> bool {
        matches!(self, SatVerdict::Assignment(_))
    }
}

pub const SAT_ORACLE_MAX_VARS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("formula has {0} variables; exhaustive search is limited to {SAT_ORACLE_MAX_VARS}")]
pub struct SatBudgetError(pub usize);

/// Exhaustive 1-in-3 search. Assignments are tried with variable 1 most
/// significant and `true` before `false`, so `(x ∨ y ∨ z)` yields `x = 1`.
pub fn sat_oracle(formula: &CnfFormula) -> Result<SatVerdict, SatBudgetError> {
    let n = formula.num_vars();
    if n > SAT_ORACLE_MAX_VARS {
        return Err(SatBudgetError(n));
    }
    let mut assignment = vec![false; n];
    for k in 0u64..(1u64 << n) {
        for (i, a) in assignment.iter_mut().enumerate() {
            *a = (k >> (n - 1 - i)) & 1 == 0;
        }
        if formula.is_one_in_three(&assignment) {
            return Ok(SatVerdict::Assignment(assignment));
        }
    }
    Ok(SatVerdict::Unsatisfiable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::id::Id;
    use crate::paft::PaftSpec;

    fn inst(edges: &[(&str, &str, &str)], forbidden: &[(&str, &str)]) -> PaftInstance {
        let mut vs: Vec<Id> = edges
            .iter()
            .flat_map(|(_, a, b)| [Id::from(*a), Id::from(*b)])
            .collect();
        vs.sort();
        vs.dedup();
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
            rotation: vec![],
        })
        .unwrap()
    }

    #[test]
    fn paft_examples() {
        assert!(paft_oracle(&inst(&[("1", "s", "a"), ("2", "a", "t")], &[])).is_positive());
        assert_eq!(
            paft_oracle(&inst(&[("1", "s", "a"), ("2", "a", "t")], &[("1", "2")])),
            PaftVerdict::NoValidPath
        );
        let i = inst(
            &[("e", "s", "a"), ("f", "s", "a"), ("h", "a", "t")],
            &[("e", "h")],
        );
        let PaftVerdict::ValidPath(p) = paft_oracle(&i) else {
            panic!()
        };
        let ids: Vec<&str> = p.iter().map(|&e| i.graph().edges[e].id.as_str()).collect();
        assert_eq!(ids, ["f", "h"]);
    }

    #[test]
    fn sat_examples() {
        let f = CnfFormula::new(3, vec![vec![1, 2, 3]]).unwrap();
        assert_eq!(
            sat_oracle(&f).unwrap(),
            SatVerdict::Assignment(vec![true, false, false])
        );
        let f = CnfFormula::new(3, vec![vec![1, 2, 3], vec![1, 2, -3]]).unwrap();
        assert_eq!(sat_oracle(&f).unwrap(), SatVerdict::Unsatisfiable);
        let f = CnfFormula::new(
            4,
            vec![
                vec![-1, 2, -3],
                vec![1, -2, 3],
                vec![1, 4, 3],
                vec![-1, -4, -3],
            ],
        )
        .unwrap();
        assert_eq!(sat_oracle(&f).unwrap(), SatVerdict::Unsatisfiable);
    }

    /// Recursive checker enumerating assignments independently of the oracle.
    fn any_one_in_three(f: &CnfFormula, prefix: &mut Vec<bool>) -> bool {
        if prefix.len() == f.num_vars() {
            return f.clauses().iter().all(|c| {
                c.iter()
                    .filter(|&&l| {
                        let v = prefix[l.unsigned_abs() as usize - 1];
                        (l > 0) == v
                    })
                    .count()
                    == 1
            });
        }
        for v in [false, true] {
            prefix.push(v);
            let ok = any_one_in_three(f, prefix);
            prefix.pop();
            if ok {
                return true;
            }
        }
        false
    }

    proptest::proptest! {
        #[test]
        fn sat_oracle_agrees_with_recursive_checker(
            n in 3usize..=4,
            raw in proptest::collection::vec((1i32..=4, 1i32..=4, 1i32..=4, 0u8..8), 1..=4),
        ) {
            let clauses: Vec<Vec<i32>> = raw
                .iter()
                .map(|&(a, b, c, s)| {
                    let m = |v: i32| ((v - 1) % n as i32) + 1;
                    let sg = |bit: u8, v: i32| if s >> bit & 1 == 1 { -v } else { v };
                    vec![sg(0, m(a)), sg(1, m(b)), sg(2, m(c))]
                })
                .collect();
            if let Ok(f) = CnfFormula::new(n, clauses) {
                let verdict = sat_oracle(&f).unwrap();
                proptest::prop_assert_eq!(verdict.is_positive(), any_one_in_three(&f, &mut Vec::new()));
                if let SatVerdict::Assignment(a) = verdict {
                    proptest::prop_assert!(f.is_one_in_three(&a));
                }
            }
        }
    }
}
