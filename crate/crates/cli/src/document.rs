//! `.qtm` machine documents: a JSON object listing states, tape alphabets
//! and the nonzero entries of the local transition function.
//!
//! ```json
//! {
//!   "name": "flip",
//!   "states": ["0"],
//!   "tapes": [{"symbols": ["B", "1"], "blank": "B"}],
//!   "rules": [
//!     {"q": "0", "read": ["B"], "p": "0", "write": ["1"], "move": [1], "amp": [1.0, 0.0]}
//!   ]
//! }
//! ```

use std::collections::HashSet;

use num_complex::Complex64;
use qtm_core::model::{Alphabet, Move, TuringFrame};
use qtm_core::table::{Transition, TransitionTable};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineDocument {
    pub name: String,
    pub states: Vec<String>,
    pub tapes: Vec<TapeSpec>,
    pub rules: Vec<RuleSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TapeSpec {
    pub symbols: Vec<String>,
    pub blank: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleSpec {
    pub q: String,
    pub read: Vec<String>,
    pub p: String,
    pub write: Vec<String>,
    #[serde(rename = "move")]
    pub moves: Vec<i64>,
    pub amp: [f64; 2],
}

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("rule {rule}: unknown {kind} `{name}`")]
    UnknownName {
        rule: usize,
        kind: &'static str,
        name: String,
    },
    #[error("{0}")]
    Dimension(String),
    #[error("rule {rule} repeats the key of rule {first}")]
    DuplicateRule { rule: usize, first: usize },
    #[error("invalid frame: {0}")]
    Frame(String),
}

impl ParseError {
    /// Stable code printed alongside the message.
    pub fn code(&self) -> &'static str {
        match self {
            ParseError::Syntax { .. } => "E-SYNTAX",
            ParseError::UnknownName { .. } => "E-UNKNOWN-NAME",
            ParseError::Dimension(_) => "E-DIMENSION",
            ParseError::DuplicateRule { .. } => "E-DUPLICATE-RULE",
            ParseError::Frame(_) => "E-FRAME",
        }
    }
}

pub fn parse_document(text: &str) -> Result<MachineDocument, ParseError> {
    serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn parse_machine(text: &str) -> Result<TransitionTable, ParseError> {
    to_table(&parse_document(text)?)
}

fn frame_of(doc: &MachineDocument) -> Result<TuringFrame, ParseError> {
    let alphabets = doc
        .tapes
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let blank = t
                .symbols
                .iter()
                .position(|s| *s == t.blank)
                .ok_or_else(|| ParseError::Frame(format!("tape {i}: blank `{}` is not a symbol", t.blank)))?;
            Alphabet::new(t.symbols.clone(), blank).map_err(|e| ParseError::Frame(format!("tape {i}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    TuringFrame::new(doc.states.clone(), alphabets).map_err(|e| ParseError::Frame(e.to_string()))
}

pub fn to_table(doc: &MachineDocument) -> Result<TransitionTable, ParseError> {
    let frame = frame_of(doc)?;
    let k = frame.tape_count();
    let mut table = TransitionTable::zeros(frame.clone());
    let mut seen: Vec<(Transition, usize)> = Vec::new();
    let mut keys = HashSet::new();

    for (i, rule) in doc.rules.iter().enumerate() {
        let state = |name: &str| {
            frame.state_index(name).ok_or_else(|| ParseError::UnknownName {
                rule: i,
                kind: "state",
                name: name.to_string(),
            })
        };
        let symbols = |names: &[String], field: &str| -> Result<Vec<usize>, ParseError> {
            if names.len() != k {
                return Err(ParseError::Dimension(format!(
                    "rule {i}: `{field}` has {} symbols for {k} tapes",
                    names.len()
                )));
            }
            names
                .iter()
                .enumerate()
                .map(|(tape, n)| {
                    frame.alphabet(tape).index_of(n).ok_or_else(|| ParseError::UnknownName {
                        rule: i,
                        kind: "symbol",
                        name: n.clone(),
                    })
                })
                .collect()
        };
        let q = state(&rule.q)?;
        let p = state(&rule.p)?;
        let read = symbols(&rule.read, "read")?;
        let write = symbols(&rule.write, "write")?;
        if rule.moves.len() != k {
            return Err(ParseError::Dimension(format!(
                "rule {i}: `move` has {} components for {k} tapes",
                rule.moves.len()
            )));
        }
        let moves = rule
            .moves
            .iter()
            .map(|&d| {
                if (-1..=1).contains(&d) {
                    Ok(d as Move)
                } else {
                    Err(ParseError::Dimension(format!("rule {i}: move {d} is outside -1..=1")))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let amp = Complex64::new(rule.amp[0], rule.amp[1]);
        let t = Transition::new(q, read, p, write, moves);
        if !keys.insert(t.clone()) {
            let first = seen.iter().find(|(s, _)| *s == t).map_or(0, |(_, j)| *j);
            return Err(ParseError::DuplicateRule { rule: i, first });
        }
        table
            .set(&t, amp)
            .map_err(|e| ParseError::Dimension(format!("rule {i}: {e}")))?;
        seen.push((t, i));
    }
    Ok(table)
}

/// Document listing the nonzero entries of `table` in index order.
pub fn to_document(name: &str, table: &TransitionTable) -> MachineDocument {
    let frame = table.frame();
    let sym = |tape: usize, s: usize| frame.alphabet(tape).symbols()[s].clone();
    MachineDocument {
        name: name.to_string(),
        states: frame.states().to_vec(),
        tapes: frame
            .alphabets()
            .iter()
            .map(|a| TapeSpec {
                symbols: a.symbols().to_vec(),
                blank: a.symbols()[a.blank()].clone(),
            })
            .collect(),
        rules: table
            .nonzero_entries()
            .map(|(t, a)| RuleSpec {
                q: frame.states()[t.q].clone(),
                read: t.read.iter().enumerate().map(|(i, &s)| sym(i, s)).collect(),
                p: frame.states()[t.p].clone(),
                write: t.write.iter().enumerate().map(|(i, &s)| sym(i, s)).collect(),
                moves: t.moves.iter().map(|&d| d as i64).collect(),
                amp: [a.re, a.im],
            })
            .collect(),
    }
}

pub fn serialize_machine(name: &str, table: &TransitionTable) -> String {
    let mut out = serde_json::to_string_pretty(&to_document(name, table)).expect("document is plain data");
    out.push('\n');
    out
}
