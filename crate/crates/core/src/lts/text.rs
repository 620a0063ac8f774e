//! The `.lts` text format:
//!
//! ```text
//! states
//!   initial 0
//!   final 1
//!   2
//!   final 3
//! transitions
//!   0 1
//!   0 "a" 2
//!   2 3
//! ```
//!
//! A state that is both initial and final is written `initial final N`.
//! Labels are double-quoted; `"` and `\` inside them are backslash-escaped.
//! Leading and trailing whitespace on a line is ignored when parsing, as are
//! blank lines.

use std::collections::BTreeSet;
use std::fmt::Write;

use super::{Lts, Transition};
use crate::syntax::write_quoted;

pub fn emit_lts_text(l: &Lts) -> String {
    let mut out = String::from("states\n");
    for s in 0..l.num_states {
        out.push_str("  ");
        if l.initial.contains(&s) {
            out.push_str("initial ");
        }
        if l.finals.contains(&s) {
            out.push_str("final ");
        }
        writeln!(out, "{s}").unwrap();
    }
    out.push_str("transitions\n");
    for t in &l.transitions {
        write!(out, "  {} ", t.source).unwrap();
        if let Some(label) = &t.label {
            write_quoted(&mut out, label).unwrap();
            out.push(' ');
        }
        writeln!(out, "{}", t.target).unwrap();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct LtsParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, LtsParseError> {
    Err(LtsParseError { line, message: message.into() })
}

/// Parses the `.lts` format. Rejects files without exactly one initial
/// state, gaps or duplicates in state numbering, and out-of-range indices.
pub fn parse_lts_text(text: &str) -> Result<Lts, LtsParseError> {
    #[derive(PartialEq)]
    enum Section {
        None,
        States,
        Transitions,
    }
    let mut section = Section::None;
    let mut declared = BTreeSet::new();
    let mut initial = BTreeSet::new();
    let mut finals = BTreeSet::new();
    let mut raw_transitions = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        match line {
            "states" if section == Section::None => {
                section = Section::States;
                continue;
            }
            "transitions" if section == Section::States => {
                section = Section::Transitions;
                continue;
            }
            _ => {}
        }
        match section {
            Section::None => return err(line_no, "expected `states`"),
            Section::States => {
                let mut words: Vec<&str> = line.split_whitespace().collect();
                let index_word = words.pop().expect("non-empty line");
                let mut is_initial = false;
                let mut is_final = false;
                for w in words {
                    match w {
                        "initial" if !is_initial && !is_final => is_initial = true,
                        "final" if !is_final => is_final = true,
                        _ => return err(line_no, format!("unexpected `{w}` in state declaration")),
                    }
                }
                let Ok(s) = index_word.parse::<usize>() else {
                    return err(line_no, format!("invalid state index `{index_word}`"));
                };
                if !declared.insert(s) {
                    return err(line_no, format!("state {s} declared twice"));
                }
                if is_initial {
                    initial.insert(s);
                }
                if is_final {
                    finals.insert(s);
                }
            }
            Section::Transitions => raw_transitions.push((line_no, parse_transition(line, line_no)?)),
        }
    }
    if section != Section::Transitions {
        return err(last_line.max(1), "missing `transitions` section");
    }
    let num_states = declared.len();
    if let Some(&max) = declared.last() {
        if max + 1 != num_states {
            return err(last_line, format!("states must be numbered 0..{num_states} without gaps"));
        }
    }
    match initial.len() {
        1 => {}
        0 => return err(last_line, "no initial state"),
        n => return err(last_line, format!("{n} initial states; exactly one is required")),
    }
    for (line_no, t) in &raw_transitions {
        for s in [t.source, t.target] {
            if s >= num_states {
                return err(*line_no, format!("state index {s} out of range"));
            }
        }
    }
    Ok(Lts {
        num_states,
        initial,
        finals,
        transitions: raw_transitions.into_iter().map(|(_, t)| t).collect(),
    })
}

fn parse_transition(line: &str, line_no: usize) -> Result<Transition, LtsParseError> {
    let (src_word, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
    let Ok(source) = src_word.parse::<usize>() else {
        return err(line_no, format!("invalid source state `{src_word}`"));
    };
    let rest = rest.trim_start();
    let (label, rest) = if let Some(quoted) = rest.strip_prefix('"') {
        let mut label = String::new();
        let mut chars = quoted.char_indices();
        let end = loop {
            match chars.next() {
                None => return err(line_no, "unterminated label"),
                Some((i, '"')) => break i + 1,
                Some((_, '\\')) => match chars.next() {
                    Some((_, c @ ('"' | '\\'))) => label.push(c),
                    Some((_, 'n')) => label.push('\n'),
                    Some((_, 't')) => label.push('\t'),
                    _ => return err(line_no, "invalid escape in label"),
                },
                Some((_, c)) => label.push(c),
            }
        };
        (Some(label), &quoted[end..])
    } else {
        (None, rest)
    };
    let target_word = rest.trim();
    if label.is_some() && !rest.starts_with(char::is_whitespace) {
        return err(line_no, "expected whitespace after label");
    }
    let Ok(target) = target_word.parse::<usize>() else {
        return err(line_no, format!("invalid target state `{target_word}`"));
    };
    Ok(Transition { source, label, target })
}
