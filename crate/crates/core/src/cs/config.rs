use std::collections::VecDeque;
use std::fmt;

use crate::syntax::{Direction, Model, Name, Value};

/// Progress through the effect of a transition that has already been entered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Progress {
    /// Index of the next statement to execute.
    pub statement: usize,
    /// Identifier of the transition being executed.
    pub transition: usize,
}

/// The current position of one state machine of one object. Without
/// progress it is a plain active state `<o, sm, st>`; with progress it is a
/// partial active state `<o, sm, st, k, m>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ActiveState {
    pub object: Name,
    pub machine: Name,
    pub state: Name,
    pub progress: Option<Progress>,
}

impl ActiveState {
    pub fn plain(object: &str, machine: &str, state: &str) -> Self {
        ActiveState { object: object.into(), machine: machine.into(), state: state.into(), progress: None }
    }

    pub fn partial(object: &str, machine: &str, state: &str, statement: usize, transition: usize) -> Self {
        ActiveState {
            progress: Some(Progress { statement, transition }),
            ..ActiveState::plain(object, machine, state)
        }
    }

    pub fn is_plain(&self) -> bool {
        self.progress.is_none()
    }
}

impl fmt::Display for ActiveState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}, {}", self.object, self.machine, self.state)?;
        if let Some(p) = self.progress {
            write!(f, ", {}, {}", p.statement, p.transition)?;
        }
        f.write_str(">")
    }
}

/// Owner of a variable: an object (class variables) or one machine of an
/// object (machine variables).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Owner {
    Object(Name),
    Machine(Name, Name),
}

impl Owner {
    pub fn object(&self) -> &Name {
        match self {
            Owner::Object(o) | Owner::Machine(o, _) => o,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarEntry {
    pub owner: Owner,
    pub variable: Name,
    pub value: Value,
}

impl fmt::Display for VarEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.owner {
            Owner::Object(o) => write!(f, "<<{o}, {}>,{}>", self.variable, self.value),
            Owner::Machine(o, sm) => write!(f, "<<{o}, {sm}, {}>,{}>", self.variable, self.value),
        }
    }
}

/// Identifies the buffer of one direction of an asynchronous channel.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BufferKey {
    pub channel: Name,
    pub from_object: Name,
    pub from_port: Name,
    pub to_object: Name,
    pub to_port: Name,
}

impl fmt::Display for BufferKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "<{}, {}, {}, {}, {}>",
            self.channel, self.from_object, self.from_port, self.to_object, self.to_port
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignalInstance {
    pub signal: Name,
    pub args: Vec<Value>,
}

impl SignalInstance {
    /// `S(v1, v2)`, the form used inside step labels.
    pub fn call_text(&self) -> String {
        let args: Vec<String> = self.args.iter().map(Value::to_string).collect();
        format!("{}({})", self.signal, args.join(", "))
    }
}

impl fmt::Display for SignalInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, ", self.signal)?;
        for (i, v) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(">")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Buffer {
    pub key: BufferKey,
    pub contents: VecDeque<SignalInstance>,
}

impl fmt::Display for Buffer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},", self.key)?;
        for s in &self.contents {
            write!(f, "{s}")?;
        }
        f.write_str(">")
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Status {
    pub initial: bool,
    pub is_final: bool,
}

impl Status {
    pub fn is_empty(self) -> bool {
        !self.initial && !self.is_final
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.initial, self.is_final) {
            (true, true) => f.write_str("initial final"),
            (true, false) => f.write_str("initial"),
            (false, true) => f.write_str("final"),
            (false, false) => Ok(()),
        }
    }
}

/// A global state of a model.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub active: Vec<ActiveState>,
    pub valuation: Vec<VarEntry>,
    pub buffers: Vec<Buffer>,
    pub status: Status,
}

impl Configuration {
    /// The same configuration with the status cleared.
    pub fn without_status(&self) -> Configuration {
        Configuration { status: Status::default(), ..self.clone() }
    }

    pub fn value_of(&self, owner: &Owner, variable: &str) -> Option<&Value> {
        self.valuation
            .iter()
            .find(|e| &e.owner == owner && &*e.variable == variable)
            .map(|e| &e.value)
    }

    pub fn buffer<'a>(&'a self, channel: &'a str) -> impl Iterator<Item = &'a Buffer> + 'a {
        self.buffers.iter().filter(move |b| &*b.key.channel == channel)
    }

    pub(crate) fn write_active(&self, f: &mut impl fmt::Write) -> fmt::Result {
        for (i, a) in self.active.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }

    pub(crate) fn write_valuation(&self, f: &mut impl fmt::Write) -> fmt::Result {
        f.write_str("[")?;
        for (i, e) in self.valuation.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }

    pub(crate) fn write_buffers(&self, f: &mut impl fmt::Write) -> fmt::Result {
        f.write_str("[")?;
        for (i, b) in self.buffers.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str("]")
    }
}

/// Single-line form: `< active, [valuation], [buffers], status >`.
impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("< ")?;
        self.write_active(f)?;
        f.write_str(", ")?;
        self.write_valuation(f)?;
        f.write_str(", ")?;
        self.write_buffers(f)?;
        if !self.status.is_empty() {
            write!(f, ", {}", self.status)?;
        }
        f.write_str(" >")
    }
}

/// Sorts the parts of `c` into the canonical order for `m`: active states by
/// (object, machine) declaration order, variables by owner then declaration
/// order, buffers by channel then direction. Entries naming unknown
/// elements sort last, in their original relative order.
pub fn canonicalize_configuration(m: &Model, c: &Configuration) -> Configuration {
    let object_index = |o: &str| m.objects.iter().position(|d| &*d.name == o).unwrap_or(usize::MAX);
    let class_of = |o: &str| m.object(o).and_then(|d| m.class(&d.class));
    let machine_index = |o: &str, sm: &str| {
        class_of(o)
            .and_then(|c| c.machines.iter().position(|x| &*x.name == sm))
            .unwrap_or(usize::MAX)
    };

    let mut out = c.clone();
    out.active
        .sort_by_key(|a| (object_index(&a.object), machine_index(&a.object, &a.machine)));
    out.valuation.sort_by_key(|e| {
        let o = e.owner.object();
        let (group, var) = match &e.owner {
            Owner::Object(_) => (
                0,
                class_of(o)
                    .and_then(|c| c.variables.iter().position(|v| v.name == e.variable))
                    .unwrap_or(usize::MAX),
            ),
            Owner::Machine(_, sm) => (
                machine_index(o, sm).saturating_add(1),
                class_of(o)
                    .and_then(|c| c.machines.iter().find(|x| x.name == *sm))
                    .and_then(|x| x.variables.iter().position(|v| v.name == e.variable))
                    .unwrap_or(usize::MAX),
            ),
        };
        (object_index(o), group, var)
    });
    out.buffers.sort_by_key(|b| {
        let chan = m.channels.iter().position(|ch| ch.name == b.key.channel);
        let dir = chan
            .map(|i| match &m.channels[i].direction {
                Direction::Unidirectional { .. } => 0,
                Direction::Bidirectional { end1, .. } => {
                    usize::from(!(end1.object == b.key.from_object && end1.port == b.key.from_port))
                }
            })
            .unwrap_or(0);
        (chan.unwrap_or(usize::MAX), dir)
    });
    out
}
