//! Abstract syntax of SLCO models.
//!
//! Every node that can be the subject of a diagnostic carries a [`Span`].
//! Spans never take part in equality or hashing, so a model re-parsed from
//! its pretty-printed form compares equal to the original.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Shared identifier text.
pub type Name = Arc<str>;

/// A 1-based line/column position in the source text.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Pos {
    pub fn new(line: usize, column: usize) -> Self {
        Pos { line, column }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Source location attached to AST nodes. Always equal to any other span.
#[derive(Clone, Copy, Debug, Default)]
pub struct Span(pub Pos);

impl Span {
    pub fn pos(self) -> Pos {
        self.0
    }
}

impl PartialEq for Span {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Span {}

impl Hash for Span {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Model {
    pub name: Name,
    pub classes: Vec<Class>,
    pub objects: Vec<ObjectDecl>,
    pub channels: Vec<Channel>,
}

impl Model {
    pub fn class(&self, name: &str) -> Option<&Class> {
        self.classes.iter().find(|c| &*c.name == name)
    }

    pub fn object(&self, name: &str) -> Option<&ObjectDecl> {
        self.objects.iter().find(|o| &*o.name == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Class {
    pub name: Name,
    pub variables: Vec<VarDecl>,
    pub ports: Vec<PortDecl>,
    pub machines: Vec<StateMachine>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PortDecl {
    pub name: Name,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Type {
    Integer,
    Boolean,
    String,
}

impl Type {
    pub fn keyword(self) -> &'static str {
        match self {
            Type::Integer => "Integer",
            Type::Boolean => "Boolean",
            Type::String => "String",
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// A runtime value; also used for literals in the AST.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Int(i64),
    Bool(bool),
    Str(String),
}

impl Value {
    pub fn ty(&self) -> Type {
        match self {
            Value::Int(_) => Type::Integer,
            Value::Bool(_) => Type::Boolean,
            Value::Str(_) => Type::String,
        }
    }
}

/// Writes `s` as a double-quoted literal with `\"`, `\\`, `\n` and `\t` escapes.
pub fn write_quoted(f: &mut impl fmt::Write, s: &str) -> fmt::Result {
    f.write_char('"')?;
    for ch in s.chars() {
        match ch {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            '\n' => f.write_str("\\n")?,
            '\t' => f.write_str("\\t")?,
            c => f.write_char(c)?,
        }
    }
    f.write_char('"')
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Str(s) => write_quoted(f, s),
        }
    }
}

/// The value a variable holds when its declaration has no initializer.
pub fn default_initial_value(ty: Type) -> Value {
    match ty {
        Type::Integer => Value::Int(0),
        Type::Boolean => Value::Bool(true),
        Type::String => Value::Str(String::new()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarDecl {
    pub name: Name,
    pub ty: Type,
    pub initial: Option<Value>,
    pub span: Span,
}

impl VarDecl {
    pub fn initial_value(&self) -> Value {
        self.initial.clone().unwrap_or_else(|| default_initial_value(self.ty))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ObjectDecl {
    pub name: Name,
    pub class: Name,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    Sync,
    AsyncLossless,
    AsyncLossy,
}

impl ChannelKind {
    pub fn is_async(self) -> bool {
        !matches!(self, ChannelKind::Sync)
    }
}

/// One end of a channel: a port of an object.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ObjectPort {
    pub object: Name,
    pub port: Name,
}

impl fmt::Display for ObjectPort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.object, self.port)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Unidirectional { from: ObjectPort, to: ObjectPort },
    Bidirectional { end1: ObjectPort, end2: ObjectPort },
}

impl Direction {
    /// Both ends in declaration order.
    pub fn ends(&self) -> [&ObjectPort; 2] {
        match self {
            Direction::Unidirectional { from, to } => [from, to],
            Direction::Bidirectional { end1, end2 } => [end1, end2],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Channel {
    pub name: Name,
    pub arg_types: Vec<Type>,
    pub kind: ChannelKind,
    pub direction: Direction,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StateMachine {
    pub name: Name,
    pub variables: Vec<VarDecl>,
    /// Exactly one entry in a valid model; the parser accepts several so
    /// that validation can report the violation.
    pub initial_states: Vec<Name>,
    pub plain_states: Vec<Name>,
    pub final_states: Vec<Name>,
    pub transitions: Vec<Transition>,
    pub span: Span,
}

impl StateMachine {
    pub fn initial_state(&self) -> &Name {
        &self.initial_states[0]
    }

    pub fn is_final(&self, state: &str) -> bool {
        self.final_states.iter().any(|s| &**s == state)
    }

    /// Identifier of `t` within this machine: its 0-based declaration index.
    ///
    /// # Panics
    /// Panics if `t` is not one of this machine's transitions.
    pub fn transition_identifier(&self, t: &Transition) -> usize {
        self.transitions
            .iter()
            .position(|candidate| std::ptr::eq(candidate, t))
            .or_else(|| self.transitions.iter().position(|c| c == t))
            .unwrap_or_else(|| {
                panic!("transition {} does not belong to machine {}", t.name, self.name)
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub name: Name,
    pub source: Name,
    pub target: Name,
    pub trigger: Option<Trigger>,
    pub guard: Option<Expr>,
    pub effect: Vec<Statement>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Trigger {
    Receive(SignalReception),
    Delay(Delay),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignalReception {
    pub signal: Name,
    pub args: Vec<RecvArg>,
    pub port: Name,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RecvArg {
    /// Stores the received value into the named variable.
    Bind(Name, Span),
    /// Accepts only signals whose argument equals the expression.
    Match(Expr),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Delay {
    pub millis: u64,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Statement {
    Assign {
        target: Name,
        value: Expr,
        span: Span,
    },
    Send {
        signal: Name,
        args: Vec<Expr>,
        port: Name,
        span: Span,
    },
}

impl Statement {
    pub fn span(&self) -> Span {
        match self {
            Statement::Assign { span, .. } | Statement::Send { span, .. } => *span,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Le,
    Lt,
    Ge,
    Gt,
    Eq,
    Ne,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Le => "<=",
            BinOp::Lt => "<",
            BinOp::Ge => ">=",
            BinOp::Gt => ">",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::And => "and",
            BinOp::Or => "or",
        }
    }

    /// Binding strength; higher binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            BinOp::Eq | BinOp::Ne => 3,
            BinOp::Le | BinOp::Lt | BinOp::Ge | BinOp::Gt => 4,
            BinOp::Add | BinOp::Sub => 5,
            BinOp::Mul => 6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExprKind {
    Lit(Value),
    Var(Name),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl Expr {
    pub fn new(kind: ExprKind) -> Self {
        Expr { kind, span: Span::default() }
    }

    pub fn lit(v: Value) -> Self {
        Expr::new(ExprKind::Lit(v))
    }

    pub fn var(name: &str) -> Self {
        Expr::new(ExprKind::Var(name.into()))
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Self {
        Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)))
    }
}
