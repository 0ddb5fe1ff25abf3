//! Event records and their line-delimited JSON form.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::conditions::Phase;
use crate::error::{Error, Result};
use crate::geometry::GridPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    /// Snapshot and decision, performed atomically.
    Look,
    Move,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub index: u64,
    pub robot: usize,
    pub kind: EventKind,
    pub from: GridPoint,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to: Option<GridPoint>,
    /// Phase of the global configuration at look time. Diagnostic only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<Phase>,
}

pub type Trace = Vec<Event>;

pub fn write_jsonl(trace: &[Event], mut out: impl Write) -> std::io::Result<()> {
    for e in trace {
        serde_json::to_writer(&mut out, e)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn to_jsonl(trace: &[Event]) -> String {
    let mut buf = Vec::new();
    write_jsonl(trace, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

/// Parses a trace, checking only that each line is a well-formed record
/// and that indices count up from zero.
pub fn read_jsonl(input: impl BufRead) -> Result<Trace> {
    let mut trace = Vec::new();
    for (n, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::MalformedTrace(format!("line {}: {e}", n + 1)))?;
        if line.trim().is_empty() {
            continue;
        }
        let e: Event = serde_json::from_str(&line)
            .map_err(|e| Error::MalformedTrace(format!("line {}: {e}", n + 1)))?;
        if e.index != trace.len() as u64 {
            return Err(Error::MalformedTrace(format!(
                "line {}: index {} where {} was expected",
                n + 1,
                e.index,
                trace.len()
            )));
        }
        trace.push(e);
    }
    Ok(trace)
}

pub fn from_jsonl(text: &str) -> Result<Trace> {
    read_jsonl(text.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_names_and_round_trip() {
        let trace = vec![
            Event {
                index: 0,
                robot: 2,
                kind: EventKind::Look,
                from: GridPoint::new(1, -1),
                to: None,
                phase: Some(Phase::P4),
            },
            Event {
                index: 1,
                robot: 2,
                kind: EventKind::Move,
                from: GridPoint::new(1, -1),
                to: Some(GridPoint::new(1, 0)),
                phase: None,
            },
        ];
        let text = to_jsonl(&trace);
        let first = text.lines().next().unwrap();
        assert_eq!(
            first,
            r#"{"index":0,"robot":2,"kind":"look","from":[1,-1],"phase":"P4"}"#
        );
        assert_eq!(
            text.lines().nth(1).unwrap(),
            r#"{"index":1,"robot":2,"kind":"move","from":[1,-1],"to":[1,0]}"#
        );
        assert_eq!(from_jsonl(&text).unwrap(), trace);
    }

    #[test]
    fn bad_lines_rejected() {
        assert!(from_jsonl("{\"index\":0}").is_err());
        let skip = r#"{"index":1,"robot":0,"kind":"look","from":[0,0]}"#;
        assert!(from_jsonl(skip).is_err());
    }
}
