use std::fmt::Write;

use crate::cnf::{CnfError, CnfFormula, Literal};

use super::{end_of, tokenize, ParseError};

/// Parses a `p cnf3 <vars> <clauses>` header followed by clause lines of
/// exactly three non-zero literals terminated by `0`. Lines starting with
/// `c` are comments.
pub fn parse_cnf(input: &str) -> Result<CnfFormula, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut clause_at = Vec::new();
    for line in tokenize(input) {
        let head = &line[0];
        if head.text == "c" {
            continue;
        }
        if head.text == "p" {
            if header.is_some() {
                return Err(head.error("second header line"));
            }
            if line.len() != 4 || line[1].text != "cnf3" {
                return Err(head.error("expected `p cnf3 <vars> <clauses>`"));
            }
            let num = |i: usize| {
                line[i]
                    .text
                    .parse::<usize>()
                    .map_err(|_| line[i].error("expected a count"))
            };
            header = Some((num(2)?, num(3)?));
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(head.error("clause before `p cnf3` header"));
        };
        let mut lits = Vec::new();
        for (k, tok) in line.iter().enumerate() {
            let l: i64 = tok
                .text
                .parse()
                .map_err(|_| tok.error(format!("`{}` is not a literal", tok.text)))?;
            if l == 0 {
                if k != line.len() - 1 {
                    return Err(line[k + 1].error("text after terminating 0"));
                }
                break;
            }
            if k == 3 {
                return Err(tok.error("clause has more than 3 literals"));
            }
            if l.unsigned_abs() as usize > vars {
                return Err(tok.error(format!(
                    "variable {} exceeds declared count {vars}",
                    l.abs()
                )));
            }
            lits.push(l as Literal);
        }
        if line.last().map(|t| t.text) != Some("0") {
            return Err(line.last().unwrap().error("clause must end with 0"));
        }
        if lits.len() != 3 {
            return Err(head.error(format!("clause has {} literals, expected 3", lits.len())));
        }
        clauses.push(lits);
        clause_at.push(head.error(""));
    }
    let Some((vars, count)) = header else {
        return Err(ParseError {
            message: "missing `p cnf3` header".into(),
            ..end_of(input)
        });
    };
    if count != clauses.len() {
        return Err(ParseError {
            message: format!("header declares {count} clauses, found {}", clauses.len()),
            ..end_of(input)
        });
    }
    CnfFormula::new(vars, clauses).map_err(|e| {
        let i = match e {
            CnfError::ClauseWidth(i, _)
            | CnfError::VariableRange(i, ..)
            | CnfError::Complementary(i) => i,
        };
        ParseError {
            message: e.to_string(),
            ..clause_at[i - 1].clone()
        }
    })
}

pub fn write_cnf(formula: &CnfFormula) -> String {
    let mut out = format!(
        "p cnf3 {} {}\n",
        formula.num_vars(),
        formula.clauses().len()
    );
    for c in formula.clauses() {
        writeln!(out, "{} {} {} 0", c[0], c[1], c[2]).unwrap();
    }
    out
}
