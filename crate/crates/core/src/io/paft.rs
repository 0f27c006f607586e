use std::collections::HashMap;
use std::fmt::Write;

use crate::id::Id;
use crate::paft::{PaftError, PaftInstance, PaftSpec};

use super::{end_of, expect_len, tokenize, ParseError};

/// Parses `v`, `ue <id> <a> <b>`, `forbid <e> <e>`, `s`, `t` and `rot` lines.
pub fn parse_paft(input: &str) -> Result<PaftInstance, ParseError> {
    let mut spec = PaftSpec::default();
    let mut vertex_at: HashMap<Id, ParseError> = HashMap::new();
    let mut edge_at: HashMap<Id, (ParseError, Id, Id)> = HashMap::new();
    let mut vertex_refs: Vec<(Id, ParseError)> = Vec::new();
    let mut edge_refs: Vec<(Id, ParseError)> = Vec::new();
    let mut forbids: Vec<(Id, Id, ParseError)> = Vec::new();
    let mut rot_at: HashMap<Id, ParseError> = HashMap::new();
    let (mut s, mut t) = (None, None);

    for line in tokenize(input) {
        let head = &line[0];
        match head.text {
            "v" => {
                expect_len(&line, 2, "v <id>")?;
                let id = line[1].id()?;
                if vertex_at.insert(id.clone(), line[1].error("")).is_some() {
                    return Err(line[1].error(format!("duplicate vertex `{id}`")));
                }
                spec.vertices.push(id);
            }
            "ue" => {
                expect_len(&line, 4, "ue <id> <a> <b>")?;
                let id = line[1].id()?;
                let (a, b) = (line[2].id()?, line[3].id()?);
                if a == b {
                    return Err(line[3].error(format!("edge `{id}` is a self-loop")));
                }
                if edge_at
                    .insert(id.clone(), (line[1].error(""), a.clone(), b.clone()))
                    .is_some()
                {
                    return Err(line[1].error(format!("duplicate edge `{id}`")));
                }
                vertex_refs.push((a.clone(), line[2].error(format!("unknown vertex `{a}`"))));
                vertex_refs.push((b.clone(), line[3].error(format!("unknown vertex `{b}`"))));
                spec.edges.push((id, a, b));
            }
            "forbid" => {
                expect_len(&line, 3, "forbid <edge> <edge>")?;
                let (x, y) = (line[1].id()?, line[2].id()?);
                edge_refs.push((x.clone(), line[1].error(format!("unknown edge `{x}`"))));
                edge_refs.push((y.clone(), line[2].error(format!("unknown edge `{y}`"))));
                if x == y {
                    return Err(line[2].error("a transition needs two distinct edges"));
                }
                forbids.push((x.clone(), y.clone(), line[1].error("")));
                spec.forbidden.push((x, y));
            }
            "s" | "t" => {
                expect_len(&line, 2, &format!("{} <id>", head.text))?;
                let id = line[1].id()?;
                vertex_refs.push((id.clone(), line[1].error(format!("unknown vertex `{id}`"))));
                let slot = if head.text == "s" { &mut s } else { &mut t };
                if slot.replace(id).is_some() {
                    return Err(head.error(format!("second `{}` line", head.text)));
                }
            }
            "rot" => {
                if line.len() < 2 {
                    return Err(head.error("expected `rot <vertex> <edge>...`"));
                }
                let v = line[1].id()?;
                vertex_refs.push((v.clone(), line[1].error(format!("unknown vertex `{v}`"))));
                let list = line[2..]
                    .iter()
                    .map(|t| t.id())
                    .collect::<Result<Vec<_>, _>>()?;
                for (tok, e) in line[2..].iter().zip(&list) {
                    edge_refs.push((e.clone(), tok.error(format!("unknown edge `{e}`"))));
                }
                if rot_at.insert(v.clone(), line[1].error("")).is_some() {
                    return Err(line[1].error(format!("second rotation for `{v}`")));
                }
                spec.rotation.push((v, list));
            }
            other => return Err(head.error(format!("unknown directive `{other}`"))),
        }
    }
    for (id, err) in &vertex_refs {
        if !vertex_at.contains_key(id) {
            return Err(err.clone());
        }
    }
    for (id, err) in &edge_refs {
        if !edge_at.contains_key(id) {
            return Err(err.clone());
        }
    }
    for (x, y, err) in &forbids {
        let (_, a, b) = &edge_at[x];
        let (_, c, d) = &edge_at[y];
        let shared = [a, b].iter().filter(|v| **v == c || **v == d).count();
        if shared != 1 {
            return Err(ParseError {
                message: format!("forbidden pair `{x}` `{y}` does not share exactly one vertex"),
                ..err.clone()
            });
        }
    }
    spec.s = s.ok_or_else(|| ParseError {
        message: "missing `s` line".into(),
        ..end_of(input)
    })?;
    spec.t = t.ok_or_else(|| ParseError {
        message: "missing `t` line".into(),
        ..end_of(input)
    })?;
    PaftInstance::from_spec(&spec).map_err(|e| {
        let located = match &e {
            PaftError::TerminalInvolved(_) | PaftError::PairNotAdjacent(..) => {
                forbids.first().map(|f| f.2.clone())
            }
            PaftError::BadRotation(v) => rot_at.get(v).cloned(),
            _ => None,
        };
        ParseError {
            message: e.to_string(),
            ..located.unwrap_or_else(|| end_of(input))
        }
    })
}

pub fn write_paft(inst: &PaftInstance) -> String {
    let g = inst.graph();
    let mut out = String::new();
    for v in &g.vertices {
        writeln!(out, "v {v}").unwrap();
    }
    for e in &g.edges {
        writeln!(out, "ue {} {} {}", e.id, g.vertices[e.a], g.vertices[e.b]).unwrap();
    }
    for &(a, b) in inst.forbidden() {
        writeln!(out, "forbid {} {}", g.edges[a].id, g.edges[b].id).unwrap();
    }
    writeln!(out, "s {}", g.vertices[inst.s()]).unwrap();
    writeln!(out, "t {}", g.vertices[inst.t()]).unwrap();
    if let Some(rot) = inst.rotation() {
        for (v, list) in rot.iter().enumerate() {
            if list.is_empty() {
                continue;
            }
            write!(out, "rot {}", g.vertices[v]).unwrap();
            for &e in list {
                write!(out, " {}", g.edges[e].id).unwrap();
            }
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
v s
v a
v t
ue 1 s a
ue 2 a t
ue 3 s a
forbid 3 2
s s
t t
";

    #[test]
    fn round_trip() {
        let inst = parse_paft(SAMPLE).unwrap();
        assert!(inst.is_forbidden(1, 2));
        let text = write_paft(&inst);
        assert_eq!(write_paft(&parse_paft(&text).unwrap()), text);
        assert!(text.contains("forbid 2 3\n"));
    }

    #[test]
    fn disjoint_forbid_pair_is_a_parse_error() {
        let text = "v s\nv a\nv b\nv t\nue 1 s a\nue 2 b t\nforbid 1 2\ns s\nt t\n";
        let e = parse_paft(text).unwrap_err();
        assert_eq!((e.line, e.column), (7, 8));
    }

    #[test]
    fn missing_terminal() {
        let e = parse_paft("v s\n").unwrap_err();
        assert_eq!(e.line, 2);
    }
}
