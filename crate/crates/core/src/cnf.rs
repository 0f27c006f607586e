//! Three-literal CNF formulas and their literal/clause incidence graph.

use crate::graph::{UEdge, UndirectedGraph};
use crate::id::Id;

/// A literal: `+i` is variable `i` (1-based), `-i` its negation.
pub type Literal = i32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CnfError {
    #[error("clause {0} has {1} literals, expected 3")]
    ClauseWidth(usize, usize),
    #[error("clause {0} mentions variable {1} outside 1..={2}")]
    VariableRange(usize, i64, usize),
    #[error("clause {0} contains a variable and its negation")]
    Complementary(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<[Literal; 3]>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<Literal>>) -> Result<Self, CnfError> {
        let mut out = Vec::with_capacity(clauses.len());
        for (i, c) in clauses.iter().enumerate() {
            let c: [Literal; 3] = c
                .as_slice()
                .try_into()
                .map_err(|_| CnfError::ClauseWidth(i + 1, c.len()))?;
            for &l in &c {
                let v = i64::from(l).unsigned_abs() as usize;
                if l == 0 || v > num_vars {
                    return Err(CnfError::VariableRange(i + 1, i64::from(l), num_vars));
                }
            }
            if c.iter().any(|&l| c.contains(&-l)) {
                return Err(CnfError::Complementary(i + 1));
            }
            out.push(c);
        }
        Ok(CnfFormula {
            num_vars,
            clauses: out,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    /// Number of clause occurrences of a literal.
    pub fn occurrences(&self, lit: Literal) -> usize {
        self.clauses.iter().flatten().filter(|&&l| l == lit).count()
    }

    /// True when `assignment[i]` (variable `i + 1`) gives every clause exactly one true literal.
    pub fn is_one_in_three(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().filter(|&&l| literal_value(l, assignment)).count() == 1)
    }
}

pub fn literal_value(l: Literal, assignment: &[bool]) -> bool {
    let v = assignment[l.unsigned_abs() as usize - 1];
    if l > 0 {
        v
    } else {
        !v
    }
}

/// Vertex id of a literal in the incidence graph and in reduced networks.
pub fn literal_id(l: Literal) -> Id {
    if l > 0 {
        Id::new(format!("x{l}"))
    } else {
        Id::new(format!("~x{}", -l))
    }
}

pub fn clause_id(i: usize) -> Id {
    Id::new(format!("C{}", i + 1))
}

/// One vertex per literal and per clause; an edge between each complementary
/// literal pair and one edge per literal occurrence in a clause.
pub fn cnf_graph(formula: &CnfFormula) -> UndirectedGraph {
    let n = formula.num_vars as i32;
    let mut vertices = Vec::new();
    for v in 1..=n {
        vertices.push(literal_id(v));
        vertices.push(literal_id(-v));
    }
    let lit_index = |l: Literal| 2 * (l.unsigned_abs() as usize - 1) + usize::from(l < 0);
    let clause_base = vertices.len();
    for i in 0..formula.clauses.len() {
        vertices.push(clause_id(i));
    }
    let mut edges = Vec::new();
    for v in 1..=n {
        edges.push(UEdge {
            id: Id::new(format!("p{v}")),
            a: lit_index(v),
            b: lit_index(-v),
        });
    }
    for (i, c) in formula.clauses.iter().enumerate() {
        for (k, &l) in c.iter().enumerate() {
            edges.push(UEdge {
                id: Id::new(format!("o{}.{}", i + 1, k + 1)),
                a: lit_index(l),
                b: clause_base + i,
            });
        }
    }
    UndirectedGraph { vertices, edges }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_clause_graph() {
        let f = CnfFormula::new(3, vec![vec![1, 2, 3]]).unwrap();
        let g = cnf_graph(&f);
        assert_eq!(g.vertices.len(), 7);
        assert_eq!(g.edges.len(), 6);
    }

    #[test]
    fn literal_degree_counts_pair_edge() {
        let f = CnfFormula::new(3, vec![vec![1, 2, 3], vec![1, -2, -3]]).unwrap();
        let g = cnf_graph(&f);
        let x = g.vertices.iter().position(|v| v.as_str() == "x1").unwrap();
        assert_eq!(g.degree(x), 3);
    }

    #[test]
    fn example_formula_counts() {
        // (~x ∨ y ∨ ~z)(x ∨ ~y ∨ z)(x ∨ w ∨ z)(~x ∨ ~w ∨ ~z) with x,y,z,w = 1,2,3,4
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
        let g = cnf_graph(&f);
        assert_eq!(g.vertices.len(), 12);
        assert_eq!(
            g.vertices
                .iter()
                .filter(|v| v.as_str().starts_with('C'))
                .count(),
            4
        );
    }

    #[test]
    fn rejects_malformed_clauses() {
        assert!(matches!(
            CnfFormula::new(3, vec![vec![1, 2]]),
            Err(CnfError::ClauseWidth(1, 2))
        ));
        assert!(matches!(
            CnfFormula::new(2, vec![vec![1, 2, 3]]),
            Err(CnfError::VariableRange(..))
        ));
        assert!(matches!(
            CnfFormula::new(3, vec![vec![1, -1, 2]]),
            Err(CnfError::Complementary(1))
        ));
    }
}
