use std::collections::HashMap;
use std::fmt::Write;

use crate::id::Id;
use crate::network::{AdditiveNetwork, NetworkBuilder, NetworkError};
use crate::rational::format_rational;

use super::{expect_len, tokenize, ParseError, Token};

/// Parses `v`, `e <id> <tail> <head> <cap> <cost> <gain>`, `source`, `sink`
/// and `rot <v> <e>...` lines.
pub fn parse_network(input: &str) -> Result<AdditiveNetwork, ParseError> {
    let mut b = NetworkBuilder::new();
    let mut vertices: HashMap<Id, (usize, usize)> = HashMap::new();
    let mut edges: HashMap<Id, (usize, usize)> = HashMap::new();
    let mut refs: Vec<(Id, ParseError)> = Vec::new();
    let mut terminals: HashMap<Id, ParseError> = HashMap::new();
    let mut rots: HashMap<Id, ParseError> = HashMap::new();
    let mut edge_refs: Vec<(Id, ParseError)> = Vec::new();

    let at = |t: &Token<'_>| (t.line, t.column);
    for line in tokenize(input) {
        let head = &line[0];
        match head.text {
            "v" => {
                expect_len(&line, 2, "v <id>")?;
                let id = line[1].id()?;
                if vertices.insert(id.clone(), at(&line[1])).is_some() {
                    return Err(line[1].error(format!("duplicate vertex `{id}`")));
                }
                b.add_vertex(id);
            }
            "e" => {
                expect_len(&line, 7, "e <id> <tail> <head> <cap> <cost> <gain>")?;
                let id = line[1].id()?;
                if edges.insert(id.clone(), at(&line[1])).is_some() {
                    return Err(line[1].error(format!("duplicate edge `{id}`")));
                }
                let (tail, h) = (line[2].id()?, line[3].id()?);
                refs.push((
                    tail.clone(),
                    line[2].error(format!("unknown vertex `{tail}`")),
                ));
                refs.push((h.clone(), line[3].error(format!("unknown vertex `{h}`"))));
                let (u, c, g) = (
                    line[4].rational()?,
                    line[5].rational()?,
                    line[6].rational()?,
                );
                if u < crate::rational::zero() {
                    return Err(line[4].error("capacity must be non-negative"));
                }
                b.add_edge(id, tail, h, u, c, g);
            }
            "source" | "sink" => {
                expect_len(&line, 2, &format!("{} <id>", head.text))?;
                let id = line[1].id()?;
                refs.push((id.clone(), line[1].error(format!("unknown vertex `{id}`"))));
                terminals.insert(
                    id.clone(),
                    line[1].error(format!("`{id}` is both a source and a sink")),
                );
                if head.text == "source" {
                    b.add_source(id);
                } else {
                    b.add_sink(id);
                }
            }
            "rot" => {
                if line.len() < 2 {
                    return Err(head.error("expected `rot <vertex> <edge>...`"));
                }
                let v = line[1].id()?;
                refs.push((v.clone(), line[1].error(format!("unknown vertex `{v}`"))));
                let list = line[2..]
                    .iter()
                    .map(|t| t.id())
                    .collect::<Result<Vec<_>, _>>()?;
                for (t, e) in line[2..].iter().zip(&list) {
                    edge_refs.push((e.clone(), t.error(format!("unknown edge `{e}`"))));
                }
                if rots
                    .insert(v.clone(), line[1].error(format!("bad rotation at `{v}`")))
                    .is_some()
                {
                    return Err(line[1].error(format!("second rotation for `{v}`")));
                }
                b.set_rotation(v, list);
            }
            other => return Err(head.error(format!("unknown directive `{other}`"))),
        }
    }
    for (id, err) in &refs {
        if !vertices.contains_key(id) {
            return Err(err.clone());
        }
    }
    for (id, err) in &edge_refs {
        if !edges.contains_key(id) {
            return Err(err.clone());
        }
    }
    b.build().map_err(|e| {
        let msg = e.to_string();
        let locate = |id: &Id, table: &HashMap<Id, (usize, usize)>| {
            table.get(id).map(|&(line, column)| ParseError {
                line,
                column,
                message: msg.clone(),
            })
        };
        let found = match &e {
            NetworkError::SelfLoop(id) | NetworkError::NegativeCapacity(id) => locate(id, &edges),
            NetworkError::SourceSinkOverlap(id) => terminals.get(id).cloned(),
            NetworkError::BadRotation { vertex, .. } => rots.get(vertex).map(|p| ParseError {
                message: msg.clone(),
                ..p.clone()
            }),
            _ => None,
        };
        found.unwrap_or(ParseError {
            message: msg.clone(),
            ..super::end_of(input)
        })
    })
}

pub fn write_network(network: &AdditiveNetwork) -> String {
    write_network_with_notes(network, &[])
}

/// Canonical text, preceded by one `#` comment line per note.
pub fn write_network_with_notes(network: &AdditiveNetwork, notes: &[String]) -> String {
    let mut out = String::new();
    for n in notes {
        writeln!(out, "# {n}").unwrap();
    }
    for v in network.vertices() {
        writeln!(out, "v {v}").unwrap();
    }
    for e in network.edges() {
        writeln!(
            out,
            "e {} {} {} {} {} {}",
            e.id,
            network.vertex_id(e.tail),
            network.vertex_id(e.head),
            format_rational(&e.capacity),
            format_rational(&e.cost),
            format_rational(&e.gain)
        )
        .unwrap();
    }
    for &s in network.sources() {
        writeln!(out, "source {}", network.vertex_id(s)).unwrap();
    }
    for &t in network.sinks() {
        writeln!(out, "sink {}", network.vertex_id(t)).unwrap();
    }
    if let Some(rot) = network.rotation() {
        for (v, list) in rot.iter().enumerate() {
            if list.is_empty() {
                continue;
            }
            write!(out, "rot {}", network.vertex_id(v)).unwrap();
            for &e in list {
                write!(out, " {}", network.edge(e).id).unwrap();
            }
            out.push('\n');
        }
    }
    out
}
