//! Step semantics: which configurations one basic activity of one state
//! machine (or one rendezvous of two) leads to.

use std::collections::{HashMap, VecDeque};

use indexmap::IndexSet;

use super::config::*;
use super::ExploreError;
use crate::syntax::{
    expr_to_string, validate_model, BinOp, Channel, ChannelKind, Diagnostic,
    Diagnostics, Direction, Expr, ExprKind, Model, Name, RecvArg, SignalReception,
    StateMachine, Statement, Transition, Trigger, Value,
};

/// Failure while evaluating an expression.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("integer overflow evaluating `{0}`")]
    Overflow(String),
    #[error("ill-typed operands evaluating `{0}`")]
    Type(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
}

/// Variables bound by a signal reception, consulted before stored values.
pub type Bindings = Vec<(Name, Value)>;

/// A successor produced by one step.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Successor {
    pub label: Option<String>,
    pub target: Configuration,
}

struct Instance<'m> {
    object: Name,
    machine: &'m StateMachine,
}

/// How a send on a given object port is delivered.
enum Outlet<'m> {
    Buffer { index: usize, kind: ChannelKind },
    Rendezvous { channel: &'m Channel, peer_object: Name, peer_port: Name },
}

/// A validated model prepared for state-space generation.
pub struct Engine<'m> {
    model: &'m Model,
    instances: Vec<Instance<'m>>,
    instance_index: HashMap<(Name, Name), usize>,
    initial_valuation: Vec<VarEntry>,
    /// (instance, variable) -> valuation slot, machine variables shadowing class variables.
    slots: HashMap<(usize, Name), usize>,
    buffer_keys: Vec<BufferKey>,
    /// receiving (object, port) -> buffer slot
    inlets: HashMap<(Name, Name), usize>,
    outlets: HashMap<(Name, Name), Outlet<'m>>,
    buffer_capacity: usize,
}

impl<'m> Engine<'m> {
    /// Prepares `model` for exploration. Fails with the model's errors if it
    /// does not validate.
    pub fn new(model: &'m Model, buffer_capacity: usize) -> Result<Self, Diagnostics> {
        let errors: Vec<Diagnostic> = validate_model(model).into_iter().filter(Diagnostic::is_error).collect();
        if !errors.is_empty() {
            return Err(Diagnostics(errors));
        }

        let mut instances = Vec::new();
        let mut instance_index = HashMap::new();
        let mut initial_valuation = Vec::new();
        let mut slots = HashMap::new();
        for obj in &model.objects {
            let class = model.class(&obj.class).expect("validated");
            let first_machine = instances.len();
            for v in &class.variables {
                for k in 0..class.machines.len() {
                    slots.insert((first_machine + k, v.name.clone()), initial_valuation.len());
                }
                initial_valuation.push(VarEntry {
                    owner: Owner::Object(obj.name.clone()),
                    variable: v.name.clone(),
                    value: v.initial_value(),
                });
            }
            for sm in &class.machines {
                let idx = instances.len();
                for v in &sm.variables {
                    slots.insert((idx, v.name.clone()), initial_valuation.len());
                    initial_valuation.push(VarEntry {
                        owner: Owner::Machine(obj.name.clone(), sm.name.clone()),
                        variable: v.name.clone(),
                        value: v.initial_value(),
                    });
                }
                instance_index.insert((obj.name.clone(), sm.name.clone()), idx);
                instances.push(Instance { object: obj.name.clone(), machine: sm });
            }
        }

        let mut buffer_keys = Vec::new();
        let mut inlets = HashMap::new();
        let mut outlets = HashMap::new();
        for ch in &model.channels {
            let pairs = match &ch.direction {
                Direction::Unidirectional { from, to } => vec![(from, to)],
                Direction::Bidirectional { end1, end2 } => vec![(end1, end2), (end2, end1)],
            };
            for (src, dst) in pairs {
                let outlet = if ch.kind.is_async() {
                    let index = buffer_keys.len();
                    buffer_keys.push(BufferKey {
                        channel: ch.name.clone(),
                        from_object: src.object.clone(),
                        from_port: src.port.clone(),
                        to_object: dst.object.clone(),
                        to_port: dst.port.clone(),
                    });
                    inlets.insert((dst.object.clone(), dst.port.clone()), index);
                    Outlet::Buffer { index, kind: ch.kind }
                } else {
                    Outlet::Rendezvous { channel: ch, peer_object: dst.object.clone(), peer_port: dst.port.clone() }
                };
                outlets.insert((src.object.clone(), src.port.clone()), outlet);
            }
        }

        Ok(Engine {
            model,
            instances,
            instance_index,
            initial_valuation,
            slots,
            buffer_keys,
            inlets,
            outlets,
            buffer_capacity,
        })
    }

    pub fn model(&self) -> &'m Model {
        self.model
    }

    pub fn buffer_capacity(&self) -> usize {
        self.buffer_capacity
    }

    /// Every machine in its initial state, every variable at its initial
    /// value, every buffer empty.
    pub fn initial_configuration(&self) -> Configuration {
        let mut c = Configuration {
            active: self
                .instances
                .iter()
                .map(|i| ActiveState {
                    object: i.object.clone(),
                    machine: i.machine.name.clone(),
                    state: i.machine.initial_state().clone(),
                    progress: None,
                })
                .collect(),
            valuation: self.initial_valuation.clone(),
            buffers: self
                .buffer_keys
                .iter()
                .map(|key| Buffer { key: key.clone(), contents: VecDeque::new() })
                .collect(),
            status: Status { initial: true, is_final: false },
        };
        c.status.is_final = self.is_final(&c);
        c
    }

    /// True iff every machine rests (plainly) in one of its final states.
    pub fn is_final(&self, c: &Configuration) -> bool {
        self.instances
            .iter()
            .zip(&c.active)
            .all(|(inst, a)| a.is_plain() && inst.machine.is_final(&a.state))
    }

    /// Index of the machine instance named by `a`.
    pub fn instance_of(&self, a: &ActiveState) -> Option<usize> {
        self.instance_index.get(&(a.object.clone(), a.machine.clone())).copied()
    }

    /// Evaluates `e` in the scope of machine instance `instance`: bindings
    /// first, then machine variables, then class variables.
    pub fn evaluate(
        &self,
        e: &Expr,
        c: &Configuration,
        bindings: &[(Name, Value)],
        instance: usize,
    ) -> Result<Value, EvalError> {
        match &e.kind {
            ExprKind::Lit(v) => Ok(v.clone()),
            ExprKind::Var(n) => {
                if let Some((_, v)) = bindings.iter().rev().find(|(b, _)| b == n) {
                    return Ok(v.clone());
                }
                self.slots
                    .get(&(instance, n.clone()))
                    .map(|&slot| c.valuation[slot].value.clone())
                    .ok_or_else(|| EvalError::UnknownVariable(n.to_string()))
            }
            ExprKind::Not(inner) => match self.evaluate(inner, c, bindings, instance)? {
                Value::Bool(b) => Ok(Value::Bool(!b)),
                _ => Err(EvalError::Type(expr_to_string(e))),
            },
            ExprKind::Binary(op, lhs, rhs) => {
                let l = self.evaluate(lhs, c, bindings, instance)?;
                // `and`/`or` are strict: both sides are always evaluated.
                let r = self.evaluate(rhs, c, bindings, instance)?;
                let overflow = || EvalError::Overflow(expr_to_string(e));
                Ok(match (op, l, r) {
                    (BinOp::Add, Value::Int(a), Value::Int(b)) => Value::Int(a.checked_add(b).ok_or_else(overflow)?),
                    (BinOp::Sub, Value::Int(a), Value::Int(b)) => Value::Int(a.checked_sub(b).ok_or_else(overflow)?),
                    (BinOp::Mul, Value::Int(a), Value::Int(b)) => Value::Int(a.checked_mul(b).ok_or_else(overflow)?),
                    (BinOp::Le, Value::Int(a), Value::Int(b)) => Value::Bool(a <= b),
                    (BinOp::Lt, Value::Int(a), Value::Int(b)) => Value::Bool(a < b),
                    (BinOp::Ge, Value::Int(a), Value::Int(b)) => Value::Bool(a >= b),
                    (BinOp::Gt, Value::Int(a), Value::Int(b)) => Value::Bool(a > b),
                    (BinOp::And, Value::Bool(a), Value::Bool(b)) => Value::Bool(a && b),
                    (BinOp::Or, Value::Bool(a), Value::Bool(b)) => Value::Bool(a || b),
                    (BinOp::Eq, a, b) if a.ty() == b.ty() => Value::Bool(a == b),
                    (BinOp::Ne, a, b) if a.ty() == b.ty() => Value::Bool(a != b),
                    _ => return Err(EvalError::Type(expr_to_string(e))),
                })
            }
        }
    }

    fn holds(
        &self,
        guard: Option<&Expr>,
        c: &Configuration,
        bindings: &[(Name, Value)],
        instance: usize,
    ) -> Result<bool, ExploreError> {
        match guard {
            None => Ok(true),
            Some(g) => match self.evaluate(g, c, bindings, instance)? {
                Value::Bool(b) => Ok(b),
                _ => Err(EvalError::Type(expr_to_string(g)).into()),
            },
        }
    }

    fn transition(&self, instance: usize, id: usize) -> &'m Transition {
        &self.instances[instance].machine.transitions[id]
    }

    /// Active state entered when transition `id` fires from a plain state.
    fn entered(&self, instance: usize, id: usize) -> ActiveState {
        let t = self.transition(instance, id);
        if t.effect.is_empty() {
            self.at(instance, &t.target, None)
        } else {
            self.at(instance, &t.source, Some(Progress { statement: 0, transition: id }))
        }
    }

    /// Active state after statement `k` of transition `id` completes.
    fn after_statement(&self, instance: usize, id: usize, k: usize) -> ActiveState {
        let t = self.transition(instance, id);
        if k + 1 == t.effect.len() {
            self.at(instance, &t.target, None)
        } else {
            self.at(instance, &t.source, Some(Progress { statement: k + 1, transition: id }))
        }
    }

    fn at(&self, instance: usize, state: &Name, progress: Option<Progress>) -> ActiveState {
        let inst = &self.instances[instance];
        ActiveState { object: inst.object.clone(), machine: inst.machine.name.clone(), state: state.clone(), progress }
    }

    fn bind(&self, c: &mut Configuration, instance: usize, bindings: Bindings) {
        for (name, value) in bindings {
            let slot = self.slots[&(instance, name)];
            c.valuation[slot].value = value;
        }
    }

    /// Checks `signal` against reception `r` of `instance`, returning the
    /// bindings it produces. Match expressions are evaluated in `c`.
    fn accepts(
        &self,
        r: &SignalReception,
        signal: &SignalInstance,
        c: &Configuration,
        instance: usize,
    ) -> Result<Option<Bindings>, ExploreError> {
        if r.signal != signal.signal || r.args.len() != signal.args.len() {
            return Ok(None);
        }
        let mut bindings = Vec::new();
        for (arg, value) in r.args.iter().zip(&signal.args) {
            match arg {
                RecvArg::Bind(name, _) => bindings.push((name.clone(), value.clone())),
                RecvArg::Match(e) => {
                    if self.evaluate(e, c, &[], instance)? != *value {
                        return Ok(None);
                    }
                }
            }
        }
        Ok(Some(bindings))
    }

    /// All successors of `c` via the first basic activity of transition
    /// `id` of the (plain) machine `instance`.
    pub(crate) fn step_plain(&self, c: &Configuration, instance: usize, id: usize) -> Result<Vec<Successor>, ExploreError> {
        let t = self.transition(instance, id);
        let active = &c.active[instance];
        if !active.is_plain() || active.state != t.source {
            return Ok(Vec::new());
        }
        let base = c.without_status();
        match &t.trigger {
            None => {
                if !self.holds(t.guard.as_ref(), c, &[], instance)? {
                    return Ok(Vec::new());
                }
                match t.effect.first() {
                    None => {
                        let mut next = base;
                        next.active[instance] = self.at(instance, &t.target, None);
                        Ok(vec![Successor { label: None, target: next }])
                    }
                    Some(first) => self.execute(&base, instance, first, self.after_statement(instance, id, 0)),
                }
            }
            Some(Trigger::Delay(d)) => {
                if !self.holds(t.guard.as_ref(), c, &[], instance)? {
                    return Ok(Vec::new());
                }
                let mut next = base;
                next.active[instance] = self.entered(instance, id);
                Ok(vec![Successor { label: Some(format!("delay({})", d.millis)), target: next }])
            }
            Some(Trigger::Receive(r)) => {
                // Synchronous receptions only fire as part of a sender's rendezvous.
                let Some(&buffer) = self.inlets.get(&(self.instances[instance].object.clone(), r.port.clone())) else {
                    return Ok(Vec::new());
                };
                let Some(head) = c.buffers[buffer].contents.front() else {
                    return Ok(Vec::new());
                };
                let Some(bindings) = self.accepts(r, head, c, instance)? else {
                    return Ok(Vec::new());
                };
                if !self.holds(t.guard.as_ref(), c, &bindings, instance)? {
                    return Ok(Vec::new());
                }
                let label = format!("receiving {}", head.call_text());
                let mut next = base;
                next.buffers[buffer].contents.pop_front();
                self.bind(&mut next, instance, bindings);
                next.active[instance] = self.entered(instance, id);
                Ok(vec![Successor { label: Some(label), target: next }])
            }
        }
    }

    /// All successors of `c` via the pending statement of the partial
    /// machine `instance`.
    pub(crate) fn step_partial(&self, c: &Configuration, instance: usize) -> Result<Vec<Successor>, ExploreError> {
        let Some(p) = c.active[instance].progress else {
            return Ok(Vec::new());
        };
        let t = self.transition(instance, p.transition);
        let stmt = &t.effect[p.statement];
        self.execute(&c.without_status(), instance, stmt, self.after_statement(instance, p.transition, p.statement))
    }

    /// Executes one statement of `instance`, which moves to `next` afterwards.
    fn execute(
        &self,
        c: &Configuration,
        instance: usize,
        stmt: &Statement,
        next: ActiveState,
    ) -> Result<Vec<Successor>, ExploreError> {
        match stmt {
            Statement::Assign { target, value, .. } => {
                let v = self.evaluate(value, c, &[], instance)?;
                let mut out = c.clone();
                out.valuation[self.slots[&(instance, target.clone())]].value = v;
                out.active[instance] = next;
                Ok(vec![Successor { label: None, target: out }])
            }
            Statement::Send { signal, args, port, .. } => {
                let values = args
                    .iter()
                    .map(|a| self.evaluate(a, c, &[], instance))
                    .collect::<Result<Vec<_>, _>>()?;
                let sig = SignalInstance { signal: signal.clone(), args: values };
                let object = &self.instances[instance].object;
                match &self.outlets[&(object.clone(), port.clone())] {
                    Outlet::Buffer { index, kind } => {
                        let label = format!("sending {} to {port}", sig.call_text());
                        let mut out = Vec::new();
                        if c.buffers[*index].contents.len() < self.buffer_capacity {
                            let mut delivered = c.clone();
                            delivered.buffers[*index].contents.push_back(sig);
                            delivered.active[instance] = next.clone();
                            out.push(Successor { label: Some(label.clone()), target: delivered });
                        }
                        if *kind == ChannelKind::AsyncLossy {
                            let mut lost = c.clone();
                            lost.active[instance] = next;
                            out.push(Successor { label: Some(label), target: lost });
                        }
                        Ok(out)
                    }
                    Outlet::Rendezvous { channel, peer_object, peer_port } => {
                        self.rendezvous(c, instance, &sig, channel, peer_object, peer_port, next)
                    }
                }
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn rendezvous(
        &self,
        c: &Configuration,
        sender: usize,
        sig: &SignalInstance,
        channel: &Channel,
        peer_object: &Name,
        peer_port: &Name,
        next: ActiveState,
    ) -> Result<Vec<Successor>, ExploreError> {
        let label = format!("communicating {} over {}", sig.call_text(), channel.name);
        let mut out = Vec::new();
        for (receiver, inst) in self.instances.iter().enumerate() {
            if receiver == sender || inst.object != *peer_object || !c.active[receiver].is_plain() {
                continue;
            }
            let state = &c.active[receiver].state;
            for (id, t) in inst.machine.transitions.iter().enumerate() {
                let Some(Trigger::Receive(r)) = &t.trigger else { continue };
                if t.source != *state || r.port != *peer_port {
                    continue;
                }
                let Some(bindings) = self.accepts(r, sig, c, receiver)? else { continue };
                if !self.holds(t.guard.as_ref(), c, &bindings, receiver)? {
                    continue;
                }
                let mut target = c.clone();
                self.bind(&mut target, receiver, bindings);
                target.active[receiver] = self.entered(receiver, id);
                target.active[sender] = next.clone();
                out.push(Successor { label: Some(label.clone()), target });
            }
        }
        Ok(out)
    }

    /// Every successor of `c`, in active-state order then transition order,
    /// with identical (label, target) pairs merged.
    pub fn successors(&self, c: &Configuration) -> Result<Vec<Successor>, ExploreError> {
        let mut out: IndexSet<Successor> = IndexSet::new();
        for (instance, active) in c.active.iter().enumerate() {
            if active.is_plain() {
                for (id, t) in self.instances[instance].machine.transitions.iter().enumerate() {
                    if t.source == active.state {
                        out.extend(self.step_plain(c, instance, id)?);
                    }
                }
            } else {
                out.extend(self.step_partial(c, instance)?);
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Successors of `c` through transition `t` taken from the plain active
    /// state `a`. Disabled transitions yield an empty list.
    pub fn take_step_plain(
        &self,
        c: &Configuration,
        a: &ActiveState,
        t: &Transition,
    ) -> Result<Vec<Successor>, ExploreError> {
        let instance = self.locate(c, a)?;
        let id = self.instances[instance].machine.transition_identifier(t);
        self.step_plain(c, instance, id)
    }

    /// Successors of `c` through the pending statement of the partial active
    /// state `a`; `t` must be the transition `a` is executing.
    pub fn take_step_partial(
        &self,
        c: &Configuration,
        a: &ActiveState,
        t: &Transition,
    ) -> Result<Vec<Successor>, ExploreError> {
        let instance = self.locate(c, a)?;
        let id = self.instances[instance].machine.transition_identifier(t);
        match a.progress {
            Some(p) if p.transition == id => self.step_partial(c, instance),
            _ => Ok(Vec::new()),
        }
    }

    fn locate(&self, c: &Configuration, a: &ActiveState) -> Result<usize, ExploreError> {
        self.instance_of(a)
            .filter(|&i| c.active.get(i) == Some(a))
            .ok_or_else(|| ExploreError::UnknownActiveState(a.to_string()))
    }
}
