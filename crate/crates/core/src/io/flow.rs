use std::collections::HashSet;
use std::fmt::Write;

use crate::network::{AdditiveNetwork, GeneralFlow};
use crate::rational::format_rational;

use super::{expect_len, tokenize, ParseError};

/// Parses `f <edge> <value>` lines against `network`.
pub fn parse_flow(input: &str, network: &AdditiveNetwork) -> Result<GeneralFlow, ParseError> {
    let mut seen = HashSet::new();
    let mut values = Vec::new();
    for line in tokenize(input) {
        let head = &line[0];
        if head.text != "f" {
            return Err(head.error(format!("unknown directive `{}`", head.text)));
        }
        expect_len(&line, 3, "f <edge> <value>")?;
        let id = line[1].id()?;
        let Some(e) = network.edge_by_id(&id) else {
            return Err(line[1].error(format!("unknown edge `{id}`")));
        };
        if !seen.insert(e) {
            return Err(line[1].error(format!("second value for edge `{id}`")));
        }
        let v = line[2].rational()?;
        if v < crate::rational::zero() {
            return Err(line[2].error("flow must be non-negative"));
        }
        values.push((e, v));
    }
    Ok(GeneralFlow::from_values(network, values).expect("indices and signs checked"))
}

pub fn write_flow(network: &AdditiveNetwork, flow: &GeneralFlow) -> String {
    let mut out = String::new();
    for (e, v) in flow.iter() {
        writeln!(out, "f {} {}", network.edge(e).id, format_rational(v)).unwrap();
    }
    out
}
