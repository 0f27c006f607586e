//! Line-oriented text formats and DOT export.
//!
//! Every format ignores blank lines and `#` comments. Serialization is
//! canonical (items sorted by id), so `write(parse(write(x)))` is
//! byte-identical to `write(x)`.

mod cnf;
mod dot;
mod flow;
mod network;
mod paft;

pub use cnf::{parse_cnf, write_cnf};
pub use dot::{cnf_to_dot, network_to_dot, paft_to_dot};
pub use flow::{parse_flow, write_flow};
pub use network::{parse_network, write_network, write_network_with_notes};
pub use paft::{parse_paft, write_paft};

use std::fmt;

use crate::id::Id;
use crate::rational::{parse_rational, Rational};

/// A parse failure at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub line: usize,
    pub column: usize,
}

impl Token<'_> {
    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    pub fn id(&self) -> Result<Id, ParseError> {
        if Id::is_valid(self.text) {
            Ok(Id::new(self.text))
        } else {
            Err(self.error(format!("invalid id `{}`", self.text)))
        }
    }

    pub fn rational(&self) -> Result<Rational, ParseError> {
        parse_rational(self.text).map_err(|e| self.error(format!("`{}`: {e}", self.text)))
    }
}

/// Splits input into non-empty, comment-free lines of tokens.
pub(crate) fn tokenize(input: &str) -> Vec<Vec<Token<'_>>> {
    let mut out = Vec::new();
    for (i, raw) in input.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let mut toks = Vec::new();
        let mut start = None;
        for (j, c) in body.char_indices().chain([(body.len(), ' ')]) {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(j),
                (true, Some(s)) => {
                    toks.push(Token {
                        text: &body[s..j],
                        line: i + 1,
                        column: body[..s].chars().count() + 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        if !toks.is_empty() {
            out.push(toks);
        }
    }
    out
}

/// Position just past the last line, for errors about missing items.
pub(crate) fn end_of(input: &str) -> ParseError {
    ParseError {
        line: input.lines().count() + 1,
        column: 1,
        message: String::new(),
    }
}

pub(crate) fn expect_len(line: &[Token<'_>], n: usize, usage: &str) -> Result<(), ParseError> {
    if line.len() == n {
        Ok(())
    } else {
        let at = line.get(n).unwrap_or(&line[0]);
        Err(at.error(format!("expected `{usage}`")))
    }
}
