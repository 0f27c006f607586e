//! 1-in-3 satisfiability, encoded as a maximum in-flow target.

use crate::cnf::{clause_id, literal_id, CnfFormula, Literal};
use crate::id::Id;
use crate::network::{AdditiveNetwork, NetworkBuilder};
use crate::rational::{int, one, zero, Rational};

use super::origin::{OriginMap, Role};
use super::paft::ReductionError;

fn arc(tail: &Id, head: &Id) -> Id {
    Id::new(format!("{tail}>{head}"))
}

pub fn variable_source(v: usize) -> Id {
    Id::new(format!("s:x{v}"))
}

pub fn variable_sink(v: usize) -> Id {
    Id::new(format!("t:x{v}"))
}

pub fn merge_vertex(v: usize) -> Id {
    Id::new(format!("m:x{v}"))
}

pub fn clause_sink(i: usize) -> Id {
    Id::new(format!("t:{}", clause_id(i)))
}

/// Occurrence edge from the `k`-th literal of clause `i` to the clause.
pub fn occurrence_edge(i: usize, k: usize) -> Id {
    Id::new(format!("o{}.{}", i + 1, k + 1))
}

/// The in-flow target `2|X| + |C|`.
pub fn sat_target(formula: &CnfFormula) -> Rational {
    int(2 * formula.num_vars() as i64 + formula.clauses().len() as i64)
}

/// Builds the network whose maximum in-flow reaches [`sat_target`] when the
/// formula is 1-in-3 satisfiable.
///
/// Per variable `x`: a source `s:x` with unit edges to `x` and `~x` of gain
/// equal to the literal's occurrence count; unit edges of gain 1 from both
/// literals into a merge vertex `m:x`, drained to the sink `t:x` by a
/// capacity-2 edge. Conservation at `m:x` lets at most one literal be
/// selected. Every occurrence is a unit, gain-free edge from the literal to
/// its clause, and each clause drains one unit into its own sink.
pub fn sat_to_network(
    formula: &CnfFormula,
) -> Result<(AdditiveNetwork, OriginMap), ReductionError> {
    let mut b = NetworkBuilder::new();
    let mut origin = OriginMap::default();
    let n = formula.num_vars();
    let edge = |b: &mut NetworkBuilder,
                origin: &mut OriginMap,
                tail: &Id,
                head: &Id,
                cap: Rational,
                gain: Rational,
                gadget: &Id,
                role: Role| {
        let id = arc(tail, head);
        b.add_edge(id.clone(), tail.clone(), head.clone(), cap, zero(), gain);
        origin.edge(&id, Some(gadget), gadget, role);
    };
    for v in 1..=n {
        let x = literal_id(v as Literal);
        let nx = literal_id(-(v as Literal));
        let (s, m, t) = (variable_source(v), merge_vertex(v), variable_sink(v));
        for (id, role) in [
            (&s, Role::VariableSource),
            (&x, Role::Literal),
            (&nx, Role::Literal),
            (&m, Role::Merge),
            (&t, Role::VariableSink),
        ] {
            b.add_vertex(id.clone());
            origin.vertex(id, Some(&x), &x, role);
        }
        b.add_source(s.clone());
        b.add_sink(t.clone());
        for (lit, id) in [(v as Literal, &x), (-(v as Literal), &nx)] {
            let occ = int(formula.occurrences(lit) as i64);
            edge(
                &mut b,
                &mut origin,
                &s,
                id,
                one(),
                occ,
                &x,
                Role::SelectEdge,
            );
            edge(
                &mut b,
                &mut origin,
                id,
                &m,
                one(),
                one(),
                &x,
                Role::MergeEdge,
            );
        }
        edge(
            &mut b,
            &mut origin,
            &m,
            &t,
            int(2),
            zero(),
            &x,
            Role::VariableSinkEdge,
        );
    }
    for (i, clause) in formula.clauses().iter().enumerate() {
        let c = clause_id(i);
        let t = clause_sink(i);
        b.add_vertex(c.clone());
        b.add_vertex(t.clone());
        b.add_sink(t.clone());
        origin.vertex(&c, Some(&c), &c, Role::Clause);
        origin.vertex(&t, Some(&c), &c, Role::ClauseSink);
        for (k, &lit) in clause.iter().enumerate() {
            let id = occurrence_edge(i, k);
            b.add_edge(
                id.clone(),
                literal_id(lit),
                c.clone(),
                one(),
                zero(),
                zero(),
            );
            origin.edge(&id, Some(&c), &literal_id(lit), Role::ClauseEdge);
        }
        edge(
            &mut b,
            &mut origin,
            &c,
            &t,
            one(),
            zero(),
            &c,
            Role::ClauseSinkEdge,
        );
    }
    Ok((b.build()?, origin))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{flow_value, validate_flow, GeneralFlow, Objective};

    fn one_clause() -> CnfFormula {
        CnfFormula::new(3, vec![vec![1, 2, 3]]).unwrap()
    }

    #[test]
    fn shape_and_target() {
        let f = one_clause();
        let (n, origin) = sat_to_network(&f).unwrap();
        assert_eq!(sat_target(&f), int(7));
        assert_eq!(n.vertex_count(), 3 * 5 + 2);
        assert!(origin.is_total_for(&n));
        assert!(n.edges().iter().all(|e| e.gain >= zero()));
    }

    #[test]
    fn satisfying_assignment_flow_hits_target() {
        // x1 true, x2 and x3 false
        let f = one_clause();
        let (n, _) = sat_to_network(&f).unwrap();
        let flow = GeneralFlow::from_ids(
            &n,
            [
                ("s:x1>x1", 1),
                ("x1>m:x1", 1),
                ("o1.1", 1),
                ("C1>t:C1", 1),
                ("m:x1>t:x1", 2),
                ("s:x2>~x2", 1),
                ("~x2>m:x2", 1),
                ("m:x2>t:x2", 2),
                ("s:x3>~x3", 1),
                ("~x3>m:x3", 1),
                ("m:x3>t:x3", 2),
            ]
            .map(|(e, v)| (e, int(v))),
        )
        .unwrap();
        assert!(validate_flow(&n, &flow).unwrap().is_clean());
        assert_eq!(flow_value(&n, &flow, Objective::InFlow), int(7));
    }

    #[test]
    fn selecting_both_literals_breaks_conservation() {
        let f = CnfFormula::new(3, vec![vec![1, 2, 3], vec![1, -2, 3]]).unwrap();
        let (n, _) = sat_to_network(&f).unwrap();
        let flow = GeneralFlow::from_ids(
            &n,
            [
                ("s:x1>x1", 1),
                ("s:x1>~x1", 1),
                ("x1>m:x1", 1),
                ("~x1>m:x1", 1),
                ("m:x1>t:x1", 2),
            ]
            .map(|(e, v)| (e, int(v))),
        )
        .unwrap();
        let report = validate_flow(&n, &flow).unwrap();
        assert!(report
            .conservation
            .iter()
            .any(|c| n.vertex_id(c.vertex).as_str() == "m:x1"));
    }

    #[test]
    fn selected_literal_reaches_one_more_than_its_occurrences() {
        let f = CnfFormula::new(3, vec![vec![1, 2, 3], vec![1, -2, -3]]).unwrap();
        let (n, _) = sat_to_network(&f).unwrap();
        let e = n.edge_by_id(&"s:x1>x1".into()).unwrap();
        assert_eq!(one() + &n.edge(e).gain, int(3));
    }
}
