//! Textual automaton format:
//!
//! ```text
//! states: q0 q1
//! alphabet: a b
//! initial: q0
//! accepting: q1
//! q0 a q1
//! q1 eps q0
//! ```
//!
//! `alphabet:` may be omitted, in which case it is the set of symbols used.
//! `eps` is reserved for ε-transitions.

use std::collections::HashMap;
use std::fmt;

use super::{EpsKind, EpsNfa};
use crate::error::{Error, Result};

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

pub fn parse_automaton(text: &str) -> Result<EpsNfa<String>> {
    let mut states: Option<Vec<String>> = None;
    let mut alphabet: Option<Vec<String>> = None;
    let mut initial: Option<(usize, String)> = None;
    let mut accepting: Vec<(usize, String)> = Vec::new();
    let mut edges: Vec<(usize, String, String, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some((key, rest)) = line.split_once(':') {
            let items: Vec<String> = rest.split_whitespace().map(String::from).collect();
            match key.trim() {
                "states" => states = Some(items),
                "alphabet" => alphabet = Some(items),
                "initial" => match items.as_slice() {
                    [q] => initial = Some((line_no, q.clone())),
                    _ => return Err(syntax(line_no, 1, "exactly one initial state expected")),
                },
                "accepting" => accepting.extend(items.into_iter().map(|q| (line_no, q))),
                other => return Err(syntax(line_no, 1, format!("unknown stanza '{other}'"))),
            }
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        match parts.as_slice() {
            [p, s, q] => edges.push((line_no, p.to_string(), s.to_string(), q.to_string())),
            _ => return Err(syntax(line_no, 1, "expected 'source symbol target'")),
        }
    }

    let states = states.ok_or_else(|| syntax(1, 1, "missing 'states:' stanza"))?;
    let alphabet = alphabet.unwrap_or_else(|| {
        let mut used: Vec<String> = edges
            .iter()
            .filter(|(_, _, s, _)| s != "eps")
            .map(|(_, _, s, _)| s.clone())
            .collect();
        used.sort();
        used.dedup();
        used
    });
    if alphabet.iter().any(|s| s == "eps") {
        return Err(syntax(
            1,
            1,
            "'eps' is reserved and cannot be an alphabet symbol",
        ));
    }
    let mut nfa = EpsNfa::new(alphabet);
    let mut ids = HashMap::new();
    for name in &states {
        if ids.contains_key(name) {
            return Err(Error::Validation(vec![format!(
                "state '{name}' declared twice"
            )]));
        }
        ids.insert(name.clone(), nfa.add_state(name.clone(), false));
    }
    let lookup = |line: usize, name: &str| {
        ids.get(name)
            .copied()
            .ok_or_else(|| syntax(line, 1, format!("undeclared state '{name}'")))
    };
    let (init_line, init) = initial.ok_or_else(|| syntax(1, 1, "missing 'initial:' stanza"))?;
    nfa.set_initial(lookup(init_line, &init)?)?;
    for (line, q) in &accepting {
        nfa.set_accepting(lookup(*line, q)?, true)?;
    }
    for (line, p, s, q) in edges {
        let (p, q) = (lookup(line, &p)?, lookup(line, &q)?);
        if s == "eps" {
            nfa.add_eps(p, q, EpsKind::Plain)?;
        } else {
            nfa.add_transition(p, s, q)
                .map_err(|e| syntax(line, 1, e.to_string()))?;
        }
    }
    Ok(nfa)
}

pub(super) fn write_automaton(a: &EpsNfa<String>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let names: Vec<&str> = (0..a.num_states()).map(|q| a.state_name(q)).collect();
    writeln!(f, "states: {}", names.join(" "))?;
    let alphabet: Vec<&str> = a.alphabet().iter().map(String::as_str).collect();
    writeln!(f, "alphabet: {}", alphabet.join(" "))?;
    if a.num_states() > 0 {
        writeln!(f, "initial: {}", names[a.initial()])?;
    }
    let accepting: Vec<&str> = (0..a.num_states())
        .filter(|&q| a.is_accepting(q))
        .map(|q| names[q])
        .collect();
    writeln!(f, "accepting: {}", accepting.join(" "))?;
    for (p, s, q) in a.transitions() {
        writeln!(f, "{} {s} {}", names[p], names[q])?;
    }
    for (p, q, _) in a.eps_transitions() {
        writeln!(f, "{} eps {}", names[p], names[q])?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str =
        "states: q0 q1\nalphabet: a b\ninitial: q0\naccepting: q1\nq0 a q1\nq1 b q1\nq1 eps q0\n";

    #[test]
    fn parse_and_print() {
        let a = parse_automaton(SAMPLE).unwrap();
        assert_eq!(a.num_states(), 2);
        assert!(a.accepts(&["a".into(), "b".into(), "a".into()]).unwrap());
        assert!(!a.accepts(&["b".into()]).unwrap());
        assert_eq!(a.to_string(), SAMPLE);
    }

    #[test]
    fn inferred_alphabet() {
        let a = parse_automaton("states: s\ninitial: s\naccepting: s\ns x s\n").unwrap();
        assert!(a.alphabet().contains("x"));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_automaton("states: s\ninitial: t\n"),
            Err(Error::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_automaton("states: s\ninitial: s\ns a\n"),
            Err(Error::Syntax { line: 3, .. })
        ));
        assert!(parse_automaton("initial: s\n").is_err());
        assert!(parse_automaton("states: s\nalphabet: a\ninitial: s\ns b s\n").is_err());
        assert!(parse_automaton("states: s s\ninitial: s\n").is_err());
    }
}
