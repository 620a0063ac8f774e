use std::fmt::Write;

use super::Lts;

/// Rendering options for [`emit_dot`]. The defaults are stable so that
/// emitted files can be compared byte for byte.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DotOptions {
    pub graph_name: String,
    pub state_shape: String,
    pub final_shape: String,
    pub rankdir: Option<String>,
}

impl Default for DotOptions {
    fn default() -> Self {
        DotOptions {
            graph_name: "lts".into(),
            state_shape: "circle".into(),
            final_shape: "doublecircle".into(),
            rankdir: None,
        }
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out
}

/// Renders `l` as a Graphviz digraph. States are nodes `sN`; the initial
/// state gets an edge from an invisible entry node `init`.
pub fn emit_dot(l: &Lts, opts: &DotOptions) -> String {
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", escape(&opts.graph_name)).unwrap();
    if let Some(dir) = &opts.rankdir {
        writeln!(out, "  rankdir={dir};").unwrap();
    }
    writeln!(out, "  init [shape=none, label=\"\", width=0, height=0];").unwrap();
    for s in 0..l.num_states {
        let shape = if l.is_final(s) { &opts.final_shape } else { &opts.state_shape };
        writeln!(out, "  s{s} [shape={shape}, label=\"{s}\"];").unwrap();
    }
    for s in &l.initial {
        writeln!(out, "  init -> s{s};").unwrap();
    }
    for t in &l.transitions {
        match &t.label {
            Some(label) => writeln!(out, "  s{} -> s{} [label=\"{}\"];", t.source, t.target, escape(label)).unwrap(),
            None => writeln!(out, "  s{} -> s{};", t.source, t.target).unwrap(),
        }
    }
    out.push_str("}\n");
    out
}
