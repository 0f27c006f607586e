//! Oracle-versus-reduction equivalence checks.

use num_traits::Zero;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::cnf::CnfFormula;
use crate::id::Id;
use crate::io::{write_cnf, write_paft};
use crate::network::{accumulations, validate_flow, AdditiveNetwork, GeneralFlow, Objective};
use crate::paft::PaftInstance;
use crate::rational::{one, Rational};
use crate::solvers::maxflow::{max_flow, MaxFlowError, MaxFlowOptions};
use crate::solvers::oracle::{paft_oracle, sat_oracle, PaftVerdict, SatBudgetError, SatVerdict};
use crate::solvers::shortest::{
    shortest_path_with_budget, ShortestPathError, DEFAULT_SEARCH_BUDGET,
};

use super::paft::{paft_to_network, super_sink, super_source, GadgetParams, ReductionError};
use super::sat::{sat_target, sat_to_network};

#[derive(Debug, Clone, Copy)]
pub enum ReductionInput<'a> {
    Paft {
        instance: &'a PaftInstance,
        params: &'a GadgetParams,
    },
    Sat {
        formula: &'a CnfFormula,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub max_flow: MaxFlowOptions,
    pub path_search_budget: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_flow: MaxFlowOptions::default(),
            path_search_budget: DEFAULT_SEARCH_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlowEntry {
    pub edge: Id,
    #[serde(with = "crate::rational::serde_str")]
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Certificate {
    Path { edges: Vec<Id> },
    Assignment { values: Vec<bool> },
    Flow { edges: Vec<FlowEntry> },
}

impl Certificate {
    pub fn from_flow(network: &AdditiveNetwork, flow: &GeneralFlow) -> Self {
        Certificate::Flow {
            edges: flow
                .iter()
                .map(|(e, v)| FlowEntry {
                    edge: network.edge(e).id.clone(),
                    value: v.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionKind {
    Paft,
    Sat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub kind: ReductionKind,
    /// First 16 hex digits of the SHA-256 of the canonical instance text.
    pub digest: String,
    pub oracle_positive: bool,
    pub reduction_positive: bool,
    pub equivalent: bool,
    /// Minimum path cost (PAFT) or best attained in-flow (SAT).
    #[serde(with = "opt_rational")]
    pub measure: Option<Rational>,
    #[serde(with = "crate::rational::serde_str")]
    pub target: Rational,
    /// Non-attained in-flow supremum above `measure`, if any.
    #[serde(with = "opt_rational")]
    pub supremum: Option<Rational>,
    pub oracle_certificate: Option<Certificate>,
    pub reduction_certificate: Option<Certificate>,
    /// Flow on which the reduction answers positively against the oracle.
    pub counterexample: Option<Certificate>,
    pub counterexample_valid: Option<bool>,
}

mod opt_rational {
    use crate::rational::{format_rational, Rational};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&format_rational(r)),
            None => s.serialize_none(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    ShortestPath(#[from] ShortestPathError),
    #[error(transparent)]
    MaxFlow(#[from] MaxFlowError),
    #[error(transparent)]
    SatBudget(#[from] SatBudgetError),
}

impl VerifyError {
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            VerifyError::ShortestPath(ShortestPathError::BudgetExceeded(_))
                | VerifyError::MaxFlow(
                    MaxFlowError::TooManyCandidates { .. } | MaxFlowError::NodeBudget(_)
                )
                | VerifyError::SatBudget(_)
        )
    }
}

fn digest(text: &str) -> String {
    let hash = Sha256::digest(text.as_bytes());
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Runs the brute-force oracle and the reduction side by side.
///
/// PAFT: the reduction is positive iff the cheapest feasible `s' → t'` path
/// flow at seed 1 costs exactly 0. SAT: positive iff the attained maximum
/// in-flow equals `2|X| + |C|`.
pub fn verify_reduction(
    input: ReductionInput<'_>,
    options: &VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    match input {
        ReductionInput::Paft { instance, params } => verify_paft(instance, params, options),
        ReductionInput::Sat { formula } => verify_sat(formula, options),
    }
}

fn verify_paft(
    inst: &PaftInstance,
    params: &GadgetParams,
    options: &VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    let oracle = paft_oracle(inst);
    let (net, _) = paft_to_network(inst, params)?;
    let s = net
        .vertex(&super_source(inst))
        .expect("super source exists");
    let t = net.vertex(&super_sink(inst)).expect("super sink exists");
    let best = match shortest_path_with_budget(&net, s, t, &one(), options.path_search_budget) {
        Ok(r) => Some(r),
        Err(ShortestPathError::NoFeasiblePath) => None,
        Err(e) => return Err(e.into()),
    };
    let reduction_positive = best.as_ref().is_some_and(|r| r.cost.is_zero());
    let oracle_positive = oracle.is_positive();
    let g = inst.graph();
    let oracle_certificate = match &oracle {
        PaftVerdict::ValidPath(p) => Some(Certificate::Path {
            edges: p.iter().map(|&e| g.edges[e].id.clone()).collect(),
        }),
        PaftVerdict::NoValidPath => None,
    };
    let reduction_certificate = best.as_ref().map(|r| Certificate::Path {
        edges: r.path.edge_ids(&net).into_iter().cloned().collect(),
    });
    let (counterexample, counterexample_valid) = match &best {
        Some(r) if reduction_positive && !oracle_positive => {
            let levels = accumulations(&net, &r.path, &r.seed);
            let flow = GeneralFlow::from_values(&net, r.path.edges().iter().copied().zip(levels))
                .expect("path edges exist");
            let valid = validate_flow(&net, &flow)
                .expect("path edges exist")
                .is_clean();
            (Some(Certificate::from_flow(&net, &flow)), Some(valid))
        }
        _ => (None, None),
    };
    Ok(VerificationReport {
        kind: ReductionKind::Paft,
        digest: digest(&write_paft(inst)),
        oracle_positive,
        reduction_positive,
        equivalent: oracle_positive == reduction_positive,
        measure: best.map(|r| r.cost),
        target: Rational::zero(),
        supremum: None,
        oracle_certificate,
        reduction_certificate,
        counterexample,
        counterexample_valid,
    })
}

fn verify_sat(
    formula: &CnfFormula,
    options: &VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    let oracle = sat_oracle(formula)?;
    let (net, _) = sat_to_network(formula)?;
    let target = sat_target(formula);
    let r = max_flow(&net, Objective::InFlow, &options.max_flow)?;
    let reduction_positive = r.value == target;
    let oracle_positive = oracle.is_positive();
    let flow_cert = Certificate::from_flow(&net, &r.flow);
    let (counterexample, counterexample_valid) = if reduction_positive && !oracle_positive {
        let valid = validate_flow(&net, &r.flow)
            .expect("solver flow uses network edges")
            .is_clean();
        (Some(flow_cert.clone()), Some(valid))
    } else {
        (None, None)
    };
    Ok(VerificationReport {
        kind: ReductionKind::Sat,
        digest: digest(&write_cnf(formula)),
        oracle_positive,
        reduction_positive,
        equivalent: oracle_positive == reduction_positive,
        measure: Some(r.value.clone()),
        target,
        supremum: r.supremum.clone(),
        oracle_certificate: match oracle {
            SatVerdict::Assignment(a) => Some(Certificate::Assignment { values: a }),
            SatVerdict::Unsatisfiable => None,
        },
        reduction_certificate: Some(flow_cert),
        counterexample,
        counterexample_valid,
    })
}
