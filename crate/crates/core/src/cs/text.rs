//! Textual form of configurations and steps, for debugging and golden tests.
//!
//! ```text
//! <
//!  <p, P, Initial> <q, Q, Initial>,
//!  [<<p, n>,0>, <<q, m>,0>],
//!  [<<p3_q3, p, P3, q, Q3>,>, <<q2_p2, q, Q2, p, P2>,>],
//!  initial
//! >
//! ```
//!
//! A step is `< source, "label", target >` (label optional). Parsing ignores
//! whitespace.

use std::collections::{HashMap, VecDeque};
use std::fmt::{self, Write};

use super::config::*;
use super::{CsGraph, Step};
use crate::syntax::{write_quoted, Name, Value};

/// Writes every configuration, then every step.
pub fn write_cs_graph(out: &mut impl Write, g: &CsGraph) -> fmt::Result {
    for c in &g.configurations {
        write_configuration(out, c)?;
        out.write_char('\n')?;
    }
    for s in &g.steps {
        write_step(out, &g.configurations[s.source], s.label.as_deref(), &g.configurations[s.target])?;
        out.write_char('\n')?;
    }
    Ok(())
}

pub(crate) fn write_configuration(out: &mut impl Write, c: &Configuration) -> fmt::Result {
    out.write_str("<\n ")?;
    c.write_active(out)?;
    out.write_str(",\n ")?;
    c.write_valuation(out)?;
    out.write_str(",\n ")?;
    c.write_buffers(out)?;
    if !c.status.is_empty() {
        write!(out, ",\n {}", c.status)?;
    }
    out.write_str("\n>")
}

fn write_nested(out: &mut impl Write, c: &Configuration) -> fmt::Result {
    out.write_str(" <\n  ")?;
    c.write_active(out)?;
    out.write_str(", ")?;
    c.write_valuation(out)?;
    out.write_str(",\n  ")?;
    c.write_buffers(out)?;
    out.write_str("\n >")
}

pub(crate) fn write_step(
    out: &mut impl Write,
    source: &Configuration,
    label: Option<&str>,
    target: &Configuration,
) -> fmt::Result {
    out.write_str("<\n")?;
    write_nested(out, source)?;
    out.write_str(",\n")?;
    if let Some(l) = label {
        out.write_char(' ')?;
        write_quoted(out, l)?;
        out.write_str(",\n")?;
    }
    write_nested(out, target)?;
    out.write_str("\n>")
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct CsParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A step whose endpoints are given in full rather than by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedStep {
    pub source: Configuration,
    pub label: Option<String>,
    pub target: Configuration,
}

pub fn parse_cs_configuration(text: &str) -> Result<Configuration, CsParseError> {
    let mut p = CsParser::new(text)?;
    let c = p.configuration()?;
    p.end()?;
    Ok(c)
}

pub fn parse_cs_step(text: &str) -> Result<ParsedStep, CsParseError> {
    let mut p = CsParser::new(text)?;
    let s = p.step()?;
    p.end()?;
    Ok(s)
}

/// Parses the output of [`write_cs_graph`]. Steps are matched to the listed
/// configurations by content, ignoring status.
pub fn parse_cs_graph(text: &str) -> Result<CsGraph, CsParseError> {
    let mut p = CsParser::new(text)?;
    let mut configurations = Vec::new();
    let mut index: HashMap<Configuration, usize> = HashMap::new();
    let mut steps = Vec::new();
    while !p.at_end() {
        let (line, column) = p.position();
        if p.looking_at_step() {
            let s = p.step()?;
            let find = |c: &Configuration| {
                index.get(c).copied().ok_or_else(|| CsParseError {
                    line,
                    column,
                    message: "step refers to a configuration that is not listed".into(),
                })
            };
            steps.push(Step { source: find(&s.source)?, label: s.label, target: find(&s.target)? });
        } else {
            let c = p.configuration()?;
            index.insert(c.without_status(), configurations.len());
            configurations.push(c);
        }
    }
    Ok(CsGraph { configurations, steps })
}

#[derive(Clone, Debug, PartialEq)]
enum T {
    Open,
    Close,
    LBrack,
    RBrack,
    Comma,
    Ident(String),
    Int(i64),
    Str(String),
}

struct CsParser {
    toks: Vec<(T, usize, usize)>,
    at: usize,
    eof: (usize, usize),
}

impl CsParser {
    fn new(text: &str) -> Result<Self, CsParseError> {
        let mut toks = Vec::new();
        let chars: Vec<char> = text.chars().collect();
        let (mut i, mut line, mut col) = (0, 1, 1);
        let err = |line, column, message: &str| CsParseError { line, column, message: message.into() };
        while i < chars.len() {
            let c = chars[i];
            let (l0, c0) = (line, col);
            let simple = match c {
                '<' => Some(T::Open),
                '>' => Some(T::Close),
                '[' => Some(T::LBrack),
                ']' => Some(T::RBrack),
                ',' => Some(T::Comma),
                _ => None,
            };
            if c == '\n' {
                line += 1;
                col = 1;
                i += 1;
            } else if c.is_whitespace() {
                col += 1;
                i += 1;
            } else if let Some(t) = simple {
                toks.push((t, l0, c0));
                col += 1;
                i += 1;
            } else if c.is_ascii_digit() || c == '-' {
                let start = i;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                col += i - start;
                let v = s.parse::<i64>().map_err(|_| err(l0, c0, "invalid integer"))?;
                toks.push((T::Int(v), l0, c0));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                col += i - start;
                toks.push((T::Ident(chars[start..i].iter().collect()), l0, c0));
            } else if c == '"' {
                let mut s = String::new();
                i += 1;
                col += 1;
                loop {
                    match chars.get(i) {
                        None => return Err(err(l0, c0, "unterminated string")),
                        Some('"') => {
                            i += 1;
                            col += 1;
                            break;
                        }
                        Some('\\') => {
                            let decoded = match chars.get(i + 1) {
                                Some('"') => '"',
                                Some('\\') => '\\',
                                Some('n') => '\n',
                                Some('t') => '\t',
                                _ => return Err(err(line, col, "invalid escape")),
                            };
                            s.push(decoded);
                            i += 2;
                            col += 2;
                        }
                        Some('\n') => return Err(err(l0, c0, "unterminated string")),
                        Some(&ch) => {
                            s.push(ch);
                            i += 1;
                            col += 1;
                        }
                    }
                }
                toks.push((T::Str(s), l0, c0));
            } else {
                return Err(err(l0, c0, &format!("unexpected character `{c}`")));
            }
        }
        Ok(CsParser { toks, at: 0, eof: (line, col) })
    }

    fn at_end(&self) -> bool {
        self.at >= self.toks.len()
    }

    fn position(&self) -> (usize, usize) {
        self.toks.get(self.at).map(|t| (t.1, t.2)).unwrap_or(self.eof)
    }

    fn peek(&self) -> Option<&T> {
        self.toks.get(self.at).map(|t| &t.0)
    }

    fn peek_n(&self, n: usize) -> Option<&T> {
        self.toks.get(self.at + n).map(|t| &t.0)
    }

    fn fail<X>(&self, expected: &str) -> Result<X, CsParseError> {
        let (line, column) = self.position();
        let found = match self.peek() {
            None => "end of input".to_string(),
            Some(t) => format!("{t:?}"),
        };
        Err(CsParseError { line, column, message: format!("expected {expected}, found {found}") })
    }

    fn expect(&mut self, t: T) -> Result<(), CsParseError> {
        if self.peek() == Some(&t) {
            self.at += 1;
            Ok(())
        } else {
            self.fail(&format!("{t:?}"))
        }
    }

    fn eat(&mut self, t: T) -> bool {
        if self.peek() == Some(&t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn end(&self) -> Result<(), CsParseError> {
        if self.at_end() {
            Ok(())
        } else {
            self.fail("end of input")
        }
    }

    fn ident(&mut self) -> Result<Name, CsParseError> {
        match self.peek() {
            Some(T::Ident(s)) => {
                let n = s.as_str().into();
                self.at += 1;
                Ok(n)
            }
            _ => self.fail("identifier"),
        }
    }

    fn nat(&mut self) -> Result<usize, CsParseError> {
        match self.peek() {
            Some(T::Int(v)) if *v >= 0 => {
                let v = *v as usize;
                self.at += 1;
                Ok(v)
            }
            _ => self.fail("natural number"),
        }
    }

    fn value(&mut self) -> Result<Value, CsParseError> {
        let v = match self.peek() {
            Some(T::Int(v)) => Value::Int(*v),
            Some(T::Str(s)) => Value::Str(s.clone()),
            Some(T::Ident(s)) if s == "true" => Value::Bool(true),
            Some(T::Ident(s)) if s == "false" => Value::Bool(false),
            _ => return self.fail("value"),
        };
        self.at += 1;
        Ok(v)
    }

    fn looking_at_step(&self) -> bool {
        self.peek() == Some(&T::Open)
            && self.peek_n(1) == Some(&T::Open)
            && matches!(self.peek_n(2), Some(T::Open) | Some(T::Comma))
    }

    fn step(&mut self) -> Result<ParsedStep, CsParseError> {
        self.expect(T::Open)?;
        let source = self.configuration()?;
        self.expect(T::Comma)?;
        let label = match self.peek() {
            Some(T::Str(s)) => {
                let s = s.clone();
                self.at += 1;
                self.expect(T::Comma)?;
                Some(s)
            }
            _ => None,
        };
        let target = self.configuration()?;
        self.expect(T::Close)?;
        Ok(ParsedStep { source, label, target })
    }

    fn configuration(&mut self) -> Result<Configuration, CsParseError> {
        self.expect(T::Open)?;
        let mut active = Vec::new();
        while self.eat(T::Open) {
            let object = self.ident()?;
            self.expect(T::Comma)?;
            let machine = self.ident()?;
            self.expect(T::Comma)?;
            let state = self.ident()?;
            let progress = if self.eat(T::Comma) {
                let statement = self.nat()?;
                self.expect(T::Comma)?;
                let transition = self.nat()?;
                Some(Progress { statement, transition })
            } else {
                None
            };
            self.expect(T::Close)?;
            active.push(ActiveState { object, machine, state, progress });
        }
        self.expect(T::Comma)?;

        self.expect(T::LBrack)?;
        let mut valuation = Vec::new();
        if !self.eat(T::RBrack) {
            loop {
                self.expect(T::Open)?;
                self.expect(T::Open)?;
                let first = self.ident()?;
                self.expect(T::Comma)?;
                let second = self.ident()?;
                let (owner, variable) = if self.eat(T::Comma) {
                    let third = self.ident()?;
                    (Owner::Machine(first, second), third)
                } else {
                    (Owner::Object(first), second)
                };
                self.expect(T::Close)?;
                self.expect(T::Comma)?;
                let value = self.value()?;
                self.expect(T::Close)?;
                valuation.push(VarEntry { owner, variable, value });
                if !self.eat(T::Comma) {
                    break;
                }
            }
            self.expect(T::RBrack)?;
        }
        self.expect(T::Comma)?;

        self.expect(T::LBrack)?;
        let mut buffers = Vec::new();
        if !self.eat(T::RBrack) {
            loop {
                self.expect(T::Open)?;
                self.expect(T::Open)?;
                let mut names = Vec::with_capacity(5);
                for i in 0..5 {
                    if i > 0 {
                        self.expect(T::Comma)?;
                    }
                    names.push(self.ident()?);
                }
                self.expect(T::Close)?;
                self.expect(T::Comma)?;
                let mut contents = VecDeque::new();
                while self.eat(T::Open) {
                    let signal = self.ident()?;
                    self.expect(T::Comma)?;
                    let mut args = Vec::new();
                    while !self.eat(T::Close) {
                        args.push(self.value()?);
                    }
                    contents.push_back(SignalInstance { signal, args });
                }
                self.expect(T::Close)?;
                let mut it = names.into_iter();
                let mut next = || it.next().expect("five names");
                let key = BufferKey {
                    channel: next(),
                    from_object: next(),
                    from_port: next(),
                    to_object: next(),
                    to_port: next(),
                };
                buffers.push(Buffer { key, contents });
                if !self.eat(T::Comma) {
                    break;
                }
            }
            self.expect(T::RBrack)?;
        }

        let mut status = Status::default();
        if self.eat(T::Comma) {
            loop {
                match self.peek() {
                    Some(T::Ident(s)) if s == "initial" => status.initial = true,
                    Some(T::Ident(s)) if s == "final" => status.is_final = true,
                    _ => break,
                }
                self.at += 1;
            }
            if status.is_empty() {
                return self.fail("`initial` or `final`");
            }
        }
        self.expect(T::Close)?;
        Ok(Configuration { active, valuation, buffers, status })
    }
}
