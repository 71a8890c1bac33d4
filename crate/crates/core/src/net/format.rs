//! Net file formats.
//!
//! Line format:
//!
//! ```text
//! # comment
//! dim 2
//! t1 | 1,0 | 0,w
//! t2 | 0,1 | 2,0
//! ```
//!
//! or the equivalent JSON object
//! `{"dimension": 2, "transitions": [{"label": "t1", "guard": [1,0], "output": [0,"w"]}]}`.

use std::str::FromStr;

use serde::Deserialize;

use super::{NetModel, Transition};
use crate::error::{Error, Result};
use crate::ideal::{parse_omega_entries, OmegaNat};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonNet {
    dimension: usize,
    transitions: Vec<JsonTransition>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonTransition {
    label: String,
    guard: Vec<OmegaNat>,
    output: Vec<OmegaNat>,
}

/// Parses and validates a net in either the line format or JSON.
pub fn load_net(text: &str) -> Result<NetModel> {
    if text.trim_start().starts_with('{') {
        load_json(text)
    } else {
        load_lines(text)
    }
}

impl FromStr for NetModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        load_net(s)
    }
}

fn finite_guard(label: &str, guard: Vec<OmegaNat>, problems: &mut Vec<String>) -> Vec<u64> {
    if guard.iter().any(|g| g.is_omega()) {
        problems.push(format!("transition \"{label}\": guards must be finite"));
    }
    guard.into_iter().map(|g| g.finite().unwrap_or(0)).collect()
}

fn load_json(text: &str) -> Result<NetModel> {
    let raw: JsonNet = serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut problems = Vec::new();
    let transitions = raw
        .transitions
        .into_iter()
        .map(|t| Transition {
            guard: finite_guard(&t.label, t.guard, &mut problems),
            label: t.label,
            output: t.output,
        })
        .collect();
    finish(raw.dimension, transitions, problems)
}

fn finish(
    dimension: usize,
    transitions: Vec<Transition>,
    mut problems: Vec<String>,
) -> Result<NetModel> {
    match NetModel::new(dimension, transitions) {
        Ok(net) if problems.is_empty() => Ok(net),
        Ok(_) => Err(Error::Validation(problems)),
        Err(Error::Validation(more)) => {
            problems.extend(more);
            Err(Error::Validation(problems))
        }
        Err(e) => Err(e),
    }
}

fn relocate(err: Error, line: usize, column_offset: usize) -> Error {
    match err {
        Error::Syntax {
            column, message, ..
        } => Error::Syntax {
            line,
            column: column + column_offset,
            message,
        },
        other => other,
    }
}

fn is_label(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | '\''))
}

fn load_lines(text: &str) -> Result<NetModel> {
    let mut dimension = None;
    let mut transitions = Vec::new();
    let mut problems = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let indent = line.len() - line.trim_start().len();
        if dimension.is_none() {
            let body = line.trim();
            let rest = body
                .strip_prefix("dimension")
                .or_else(|| body.strip_prefix("dim"))
                .ok_or_else(|| Error::Syntax {
                    line: line_no,
                    column: indent + 1,
                    message: "expected 'dim N' before any transition".into(),
                })?;
            let rest = rest.trim_start().trim_start_matches(':').trim();
            let d = rest.parse::<usize>().map_err(|_| Error::Syntax {
                line: line_no,
                column: indent + body.len() - rest.len() + 1,
                message: format!("invalid dimension '{rest}'"),
            })?;
            dimension = Some(d);
            continue;
        }
        let fields: Vec<&str> = line.split('|').collect();
        if fields.len() != 3 {
            return Err(Error::Syntax {
                line: line_no,
                column: indent + 1,
                message: "expected 'label | guard | output'".into(),
            });
        }
        let label = fields[0].trim();
        if !is_label(label) {
            return Err(Error::Syntax {
                line: line_no,
                column: indent + 1,
                message: format!("invalid label '{label}'"),
            });
        }
        let guard_offset = fields[0].len() + 1;
        let output_offset = guard_offset + fields[1].len() + 1;
        let guard =
            parse_omega_entries(fields[1]).map_err(|e| relocate(e, line_no, guard_offset))?;
        let output =
            parse_omega_entries(fields[2]).map_err(|e| relocate(e, line_no, output_offset))?;
        let guard = finite_guard(label, guard, &mut problems)
            .into_iter()
            .collect();
        transitions.push(Transition {
            label: label.to_string(),
            guard,
            output,
        });
    }
    let dimension = dimension.ok_or_else(|| Error::Syntax {
        line: 1,
        column: 1,
        message: "missing 'dim N' header".into(),
    })?;
    finish(dimension, transitions, problems)
}
