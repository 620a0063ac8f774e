//! Brute-force reachability for SLCO models, written directly against the
//! syntax tree with its own state representation and evaluator. Used to
//! cross-check the exploration engine.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use slco::cs::{Configuration, CsGraph, Owner};
use slco::syntax::{
    BinOp, ChannelKind, Direction, Expr, ExprKind, Model, RecvArg, Statement, Trigger, Value,
};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Val {
    I(i64),
    B(bool),
    S(String),
}

impl Val {
    fn from_value(v: &Value) -> Self {
        match v {
            Value::Int(i) => Val::I(*i),
            Value::Bool(b) => Val::B(*b),
            Value::Str(s) => Val::S(s.clone()),
        }
    }

    fn text(&self) -> String {
        match self {
            Val::I(i) => i.to_string(),
            Val::B(b) => b.to_string(),
            Val::S(s) => format!("\"{s}\""),
        }
    }
}

/// (object, machine) -> (state, pending (statement, transition))
type Machines = BTreeMap<(String, String), (String, Option<(usize, usize)>)>;
/// (object, machine or "", variable) -> value
type Vars = BTreeMap<(String, String, String), Val>;
/// (channel, sending object, sending port) -> queued signals
type Bufs = BTreeMap<(String, String, String), Vec<(String, Vec<Val>)>>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct State {
    pub machines: Machines,
    pub vars: Vars,
    pub bufs: Bufs,
}

pub type OStep = (State, Option<String>, State);

#[derive(Debug, Default)]
pub struct Reach {
    pub initial: Option<State>,
    pub states: BTreeSet<State>,
    pub steps: BTreeSet<OStep>,
    pub finals: BTreeSet<State>,
}

struct Oracle<'m> {
    m: &'m Model,
    cap: usize,
}

fn machine<'m>(m: &'m Model, o: &str, sm: &str) -> &'m slco::syntax::StateMachine {
    let obj = m.objects.iter().find(|x| &*x.name == o).unwrap();
    let class = m.classes.iter().find(|c| c.name == obj.class).unwrap();
    class.machines.iter().find(|x| &*x.name == sm).unwrap()
}

impl<'m> Oracle<'m> {
    fn initial(&self) -> State {
        let mut s = State { machines: BTreeMap::new(), vars: BTreeMap::new(), bufs: BTreeMap::new() };
        for obj in &self.m.objects {
            let class = self.m.classes.iter().find(|c| c.name == obj.class).unwrap();
            for v in &class.variables {
                s.vars.insert((obj.name.to_string(), String::new(), v.name.to_string()), init_val(v));
            }
            for sm in &class.machines {
                let initial = sm.initial_states[0].to_string();
                s.machines.insert((obj.name.to_string(), sm.name.to_string()), (initial, None));
                for v in &sm.variables {
                    s.vars.insert((obj.name.to_string(), sm.name.to_string(), v.name.to_string()), init_val(v));
                }
            }
        }
        for ch in &self.m.channels {
            if ch.kind == ChannelKind::Sync {
                continue;
            }
            match &ch.direction {
                Direction::Unidirectional { from, .. } => {
                    s.bufs.insert((ch.name.to_string(), from.object.to_string(), from.port.to_string()), Vec::new());
                }
                Direction::Bidirectional { end1, end2 } => {
                    for e in [end1, end2] {
                        s.bufs.insert((ch.name.to_string(), e.object.to_string(), e.port.to_string()), Vec::new());
                    }
                }
            }
        }
        s
    }

    fn var_key(&self, s: &State, o: &str, sm: &str, name: &str) -> (String, String, String) {
        let local = (o.to_string(), sm.to_string(), name.to_string());
        if s.vars.contains_key(&local) {
            local
        } else {
            (o.to_string(), String::new(), name.to_string())
        }
    }

    fn eval(&self, s: &State, o: &str, sm: &str, e: &Expr) -> Val {
        match &e.kind {
            ExprKind::Lit(v) => Val::from_value(v),
            ExprKind::Var(n) => s.vars[&self.var_key(s, o, sm, n)].clone(),
            ExprKind::Not(x) => match self.eval(s, o, sm, x) {
                Val::B(b) => Val::B(!b),
                v => panic!("not applied to {v:?}"),
            },
            ExprKind::Binary(op, a, b) => {
                let (a, b) = (self.eval(s, o, sm, a), self.eval(s, o, sm, b));
                match (op, a, b) {
                    (BinOp::Eq, a, b) => Val::B(a == b),
                    (BinOp::Ne, a, b) => Val::B(a != b),
                    (BinOp::And, Val::B(a), Val::B(b)) => Val::B(a & b),
                    (BinOp::Or, Val::B(a), Val::B(b)) => Val::B(a | b),
                    (BinOp::Add, Val::I(a), Val::I(b)) => Val::I(a.checked_add(b).expect("overflow")),
                    (BinOp::Sub, Val::I(a), Val::I(b)) => Val::I(a.checked_sub(b).expect("overflow")),
                    (BinOp::Mul, Val::I(a), Val::I(b)) => Val::I(a.checked_mul(b).expect("overflow")),
                    (BinOp::Lt, Val::I(a), Val::I(b)) => Val::B(a < b),
                    (BinOp::Le, Val::I(a), Val::I(b)) => Val::B(a <= b),
                    (BinOp::Gt, Val::I(a), Val::I(b)) => Val::B(a > b),
                    (BinOp::Ge, Val::I(a), Val::I(b)) => Val::B(a >= b),
                    (op, a, b) => panic!("ill-typed {op:?} on {a:?}, {b:?}"),
                }
            }
        }
    }

    fn guard(&self, s: &State, o: &str, sm: &str, g: Option<&Expr>) -> bool {
        g.is_none_or(|g| self.eval(s, o, sm, g) == Val::B(true))
    }

    /// The other end of the channel attached at `o.port`, if `o.port` may
    /// send on it.
    fn peer(&self, o: &str, port: &str) -> (&'m slco::syntax::Channel, String, String) {
        for ch in &self.m.channels {
            let at = |e: &slco::syntax::ObjectPort| &*e.object == o && &*e.port == port;
            match &ch.direction {
                Direction::Unidirectional { from, to } if at(from) => {
                    return (ch, to.object.to_string(), to.port.to_string())
                }
                Direction::Bidirectional { end1, end2 } if at(end1) => {
                    return (ch, end2.object.to_string(), end2.port.to_string())
                }
                Direction::Bidirectional { end1, end2 } if at(end2) => {
                    return (ch, end1.object.to_string(), end1.port.to_string())
                }
                _ => {}
            }
        }
        panic!("no outgoing channel at {o}.{port}")
    }

    /// The buffer delivering to `o.port`, if any.
    fn inbox(&self, o: &str, port: &str) -> Option<(String, String, String)> {
        for ch in &self.m.channels {
            if ch.kind == ChannelKind::Sync {
                continue;
            }
            let at = |e: &slco::syntax::ObjectPort| &*e.object == o && &*e.port == port;
            let key = |e: &slco::syntax::ObjectPort| (ch.name.to_string(), e.object.to_string(), e.port.to_string());
            match &ch.direction {
                Direction::Unidirectional { from, to } if at(to) => return Some(key(from)),
                Direction::Bidirectional { end1, end2 } if at(end2) => return Some(key(end1)),
                Direction::Bidirectional { end1, end2 } if at(end1) => return Some(key(end2)),
                _ => {}
            }
        }
        None
    }

    /// Tries reception arguments against a signal. Returns the state with
    /// bindings applied, or `None` if a match expression differs.
    fn receive(&self, s: &State, o: &str, sm: &str, args: &[RecvArg], sig: &(String, Vec<Val>)) -> Option<State> {
        if args.len() != sig.1.len() {
            return None;
        }
        let mut out = s.clone();
        for (a, v) in args.iter().zip(&sig.1) {
            match a {
                RecvArg::Match(e) => {
                    if self.eval(s, o, sm, e) != *v {
                        return None;
                    }
                }
                RecvArg::Bind(n, _) => {
                    let k = self.var_key(s, o, sm, n);
                    out.vars.insert(k, v.clone());
                }
            }
        }
        Some(out)
    }

    fn enter(&self, s: &mut State, o: &str, sm: &str, id: usize) {
        let t = &machine(self.m, o, sm).transitions[id];
        let entry = s.machines.get_mut(&(o.to_string(), sm.to_string())).unwrap();
        *entry = if t.effect.is_empty() { (t.target.to_string(), None) } else { (t.source.to_string(), Some((0, id))) };
    }

    fn advance(&self, s: &mut State, o: &str, sm: &str, id: usize, k: usize) {
        let t = &machine(self.m, o, sm).transitions[id];
        let entry = s.machines.get_mut(&(o.to_string(), sm.to_string())).unwrap();
        *entry = if k + 1 == t.effect.len() { (t.target.to_string(), None) } else { (t.source.to_string(), Some((k + 1, id))) };
    }

    fn exec(&self, s: &State, o: &str, sm: &str, id: usize, k: usize, out: &mut Vec<(Option<String>, State)>) {
        let stmt = &machine(self.m, o, sm).transitions[id].effect[k];
        match stmt {
            Statement::Assign { target, value, .. } => {
                let v = self.eval(s, o, sm, value);
                let mut n = s.clone();
                let key = self.var_key(s, o, sm, target);
                n.vars.insert(key, v);
                self.advance(&mut n, o, sm, id, k);
                out.push((None, n));
            }
            Statement::Send { signal, args, port, .. } => {
                let vals: Vec<Val> = args.iter().map(|a| self.eval(s, o, sm, a)).collect();
                let text = format!("{signal}({})", vals.iter().map(Val::text).collect::<Vec<_>>().join(", "));
                let (ch, po, pp) = self.peer(o, port);
                match ch.kind {
                    ChannelKind::Sync => {
                        let label = format!("communicating {text} over {}", ch.name);
                        for ((ro, rsm), (rst, pending)) in &s.machines {
                            if *ro != po || (ro == o && rsm == sm) || pending.is_some() {
                                continue;
                            }
                            for (rid, t) in machine(self.m, ro, rsm).transitions.iter().enumerate() {
                                let Some(Trigger::Receive(r)) = &t.trigger else { continue };
                                if *t.source != **rst || *r.port != *pp || *r.signal != **signal {
                                    continue;
                                }
                                let Some(mut n) = self.receive(s, ro, rsm, &r.args, &(signal.to_string(), vals.clone())) else {
                                    continue;
                                };
                                if !self.guard(&n, ro, rsm, t.guard.as_ref()) {
                                    continue;
                                }
                                self.enter(&mut n, ro, rsm, rid);
                                self.advance(&mut n, o, sm, id, k);
                                out.push((Some(label.clone()), n));
                            }
                        }
                    }
                    kind => {
                        let label = format!("sending {text} to {port}");
                        let key = (ch.name.to_string(), o.to_string(), port.to_string());
                        if s.bufs[&key].len() < self.cap {
                            let mut n = s.clone();
                            n.bufs.get_mut(&key).unwrap().push((signal.to_string(), vals.clone()));
                            self.advance(&mut n, o, sm, id, k);
                            out.push((Some(label.clone()), n));
                        }
                        if kind == ChannelKind::AsyncLossy {
                            let mut n = s.clone();
                            self.advance(&mut n, o, sm, id, k);
                            out.push((Some(label), n));
                        }
                    }
                }
            }
        }
    }

    fn next(&self, s: &State) -> Vec<(Option<String>, State)> {
        let mut out = Vec::new();
        for ((o, sm), (st, pending)) in &s.machines {
            if let Some((k, id)) = pending {
                self.exec(s, o, sm, *id, *k, &mut out);
                continue;
            }
            for (id, t) in machine(self.m, o, sm).transitions.iter().enumerate() {
                if *t.source != **st {
                    continue;
                }
                match &t.trigger {
                    None => {
                        if !self.guard(s, o, sm, t.guard.as_ref()) {
                            continue;
                        }
                        if t.effect.is_empty() {
                            let mut n = s.clone();
                            self.enter(&mut n, o, sm, id);
                            out.push((None, n));
                        } else {
                            self.exec(s, o, sm, id, 0, &mut out);
                        }
                    }
                    Some(Trigger::Delay(d)) => {
                        if self.guard(s, o, sm, t.guard.as_ref()) {
                            let mut n = s.clone();
                            self.enter(&mut n, o, sm, id);
                            out.push((Some(format!("delay({})", d.millis)), n));
                        }
                    }
                    Some(Trigger::Receive(r)) => {
                        let Some(key) = self.inbox(o, &r.port) else { continue };
                        let Some(head) = s.bufs[&key].first() else { continue };
                        if head.0 != *r.signal {
                            continue;
                        }
                        let Some(mut n) = self.receive(s, o, sm, &r.args, head) else { continue };
                        if !self.guard(&n, o, sm, t.guard.as_ref()) {
                            continue;
                        }
                        let text = format!("{}({})", head.0, head.1.iter().map(Val::text).collect::<Vec<_>>().join(", "));
                        n.bufs.get_mut(&key).unwrap().remove(0);
                        self.enter(&mut n, o, sm, id);
                        out.push((Some(format!("receiving {text}")), n));
                    }
                }
            }
        }
        out
    }

    fn is_final(&self, s: &State) -> bool {
        s.machines
            .iter()
            .all(|((o, sm), (st, pending))| pending.is_none() && machine(self.m, o, sm).final_states.iter().any(|f| **f == **st))
    }
}

fn init_val(v: &slco::syntax::VarDecl) -> Val {
    match (&v.initial, v.ty) {
        (Some(x), _) => Val::from_value(x),
        (None, slco::syntax::Type::Integer) => Val::I(0),
        (None, slco::syntax::Type::Boolean) => Val::B(true),
        (None, slco::syntax::Type::String) => Val::S(String::new()),
    }
}

/// Every reachable state and step of `m`, or `None` if more than `limit`
/// states are reachable.
pub fn reach(m: &Model, buffer_capacity: usize, limit: usize) -> Option<Reach> {
    let o = Oracle { m, cap: buffer_capacity };
    let init = o.initial();
    let mut r = Reach { initial: Some(init.clone()), ..Reach::default() };
    let mut queue = VecDeque::from([init.clone()]);
    r.states.insert(init);
    while let Some(s) = queue.pop_front() {
        if o.is_final(&s) {
            r.finals.insert(s.clone());
        }
        for (label, n) in o.next(&s) {
            if r.states.insert(n.clone()) {
                if r.states.len() > limit {
                    return None;
                }
                queue.push_back(n.clone());
            }
            r.steps.insert((s.clone(), label, n));
        }
    }
    Some(r)
}

/// Translates an engine configuration into the oracle's representation.
pub fn project(c: &Configuration) -> State {
    let machines = c
        .active
        .iter()
        .map(|a| {
            let pending = a.progress.map(|p| (p.statement, p.transition));
            ((a.object.to_string(), a.machine.to_string()), (a.state.to_string(), pending))
        })
        .collect();
    let vars = c
        .valuation
        .iter()
        .map(|e| {
            let (o, sm) = match &e.owner {
                Owner::Object(o) => (o.to_string(), String::new()),
                Owner::Machine(o, sm) => (o.to_string(), sm.to_string()),
            };
            ((o, sm, e.variable.to_string()), Val::from_value(&e.value))
        })
        .collect();
    let bufs = c
        .buffers
        .iter()
        .map(|b| {
            let key = (b.key.channel.to_string(), b.key.from_object.to_string(), b.key.from_port.to_string());
            let contents = b
                .contents
                .iter()
                .map(|s| (s.signal.to_string(), s.args.iter().map(Val::from_value).collect()))
                .collect();
            (key, contents)
        })
        .collect();
    State { machines, vars, bufs }
}

/// The engine's graph in the oracle's representation.
pub fn project_graph(g: &CsGraph) -> Reach {
    let states: Vec<State> = g.configurations.iter().map(project).collect();
    Reach {
        initial: Some(states[0].clone()),
        steps: g.steps.iter().map(|s| (states[s.source].clone(), s.label.clone(), states[s.target].clone())).collect(),
        finals: g.final_configurations().map(|(i, _)| states[i].clone()).collect(),
        states: states.into_iter().collect(),
    }
}
