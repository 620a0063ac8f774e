//! Static well-formedness checks: names, channel wiring, signal signatures
//! and expression typing.

use std::collections::{HashMap, HashSet};

use super::ast::*;
use super::diagnostic::Diagnostic;

/// Returns every violation found in `m`, in a stable order. An empty list
/// means the model is well-formed.
pub fn validate_model(m: &Model) -> Vec<Diagnostic> {
    let mut v = Validator { model: m, diags: Vec::new() };
    v.run();
    v.diags
}

/// Which end of a channel an object port sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum EndRole {
    From,
    To,
    Either,
}

struct Validator<'m> {
    model: &'m Model,
    diags: Vec<Diagnostic>,
}

struct Scope<'a> {
    class_vars: &'a [VarDecl],
    sm_vars: &'a [VarDecl],
}

impl Scope<'_> {
    fn lookup(&self, name: &str) -> Option<&VarDecl> {
        self.sm_vars
            .iter()
            .find(|v| &*v.name == name)
            .or_else(|| self.class_vars.iter().find(|v| &*v.name == name))
    }
}

impl<'m> Validator<'m> {
    fn err(&mut self, span: Span, msg: impl Into<String>) {
        self.diags.push(Diagnostic::error(span.pos(), msg));
    }

    fn run(&mut self) {
        let m = self.model;
        self.unique(m.classes.iter().map(|c| (&c.name, c.span)), "class");
        for class in &m.classes {
            self.class(class);
        }
        self.unique(m.objects.iter().map(|o| (&o.name, o.span)), "object");
        for o in &m.objects {
            if m.class(&o.class).is_none() {
                self.err(o.span, format!("object `{}` references undeclared class `{}`", o.name, o.class));
            }
        }
        self.unique(m.channels.iter().map(|c| (&c.name, c.span)), "channel");
        self.channels();
        for o in &m.objects {
            if let Some(class) = m.class(&o.class) {
                self.port_usage(o, class);
            }
        }
    }

    fn unique<'a>(&mut self, items: impl Iterator<Item = (&'a Name, Span)>, what: &str) {
        let mut seen = HashSet::new();
        for (name, span) in items {
            if !seen.insert(name.clone()) {
                self.err(span, format!("duplicate {what} name `{name}`"));
            }
        }
    }

    fn var_decls(&mut self, vars: &[VarDecl]) {
        self.unique(vars.iter().map(|v| (&v.name, v.span)), "variable");
        for v in vars {
            if let Some(init) = &v.initial {
                if init.ty() != v.ty {
                    self.err(
                        v.span,
                        format!("initial value of `{}` has type {}, expected {}", v.name, init.ty(), v.ty),
                    );
                }
            }
        }
    }

    fn class(&mut self, class: &Class) {
        self.var_decls(&class.variables);
        self.unique(class.ports.iter().map(|p| (&p.name, p.span)), "port");
        self.unique(class.machines.iter().map(|sm| (&sm.name, sm.span)), "state machine");
        for sm in &class.machines {
            self.machine(class, sm);
        }
    }

    fn machine(&mut self, class: &Class, sm: &StateMachine) {
        self.var_decls(&sm.variables);
        if sm.initial_states.len() != 1 {
            self.err(
                sm.span,
                format!(
                    "state machine `{}` must have exactly one initial state, found {}",
                    sm.name,
                    sm.initial_states.len()
                ),
            );
        }
        let mut states = HashSet::new();
        for s in sm.initial_states.iter().chain(&sm.plain_states).chain(&sm.final_states) {
            if !states.insert(s.clone()) {
                self.err(sm.span, format!("duplicate state name `{s}` in state machine `{}`", sm.name));
            }
        }
        self.unique(sm.transitions.iter().map(|t| (&t.name, t.span)), "transition");
        let scope = Scope { class_vars: &class.variables, sm_vars: &sm.variables };
        for t in &sm.transitions {
            for end in [&t.source, &t.target] {
                if !states.contains(end) {
                    self.err(t.span, format!("transition `{}` refers to undeclared state `{end}`", t.name));
                }
            }
            match &t.trigger {
                Some(Trigger::Receive(r)) => {
                    if !class.ports.iter().any(|p| p.name == r.port) {
                        self.err(r.span, format!("undeclared port `{}`", r.port));
                    }
                    for arg in &r.args {
                        match arg {
                            RecvArg::Bind(name, span) => {
                                if scope.lookup(name).is_none() {
                                    self.err(*span, format!("unknown variable `{name}`"));
                                }
                            }
                            RecvArg::Match(e) => {
                                self.type_of(e, &scope);
                            }
                        }
                    }
                }
                Some(Trigger::Delay(_)) | None => {}
            }
            if let Some(g) = &t.guard {
                if let Some(ty) = self.type_of(g, &scope) {
                    if ty != Type::Boolean {
                        self.err(g.span, format!("guard has type {ty}, expected Boolean"));
                    }
                }
            }
            for s in &t.effect {
                match s {
                    Statement::Assign { target, value, span } => {
                        let value_ty = self.type_of(value, &scope);
                        match scope.lookup(target) {
                            None => self.err(*span, format!("unknown variable `{target}`")),
                            Some(var) => {
                                if let Some(vt) = value_ty {
                                    if vt != var.ty {
                                        self.err(
                                            *span,
                                            format!("cannot assign {vt} value to {} variable `{target}`", var.ty),
                                        );
                                    }
                                }
                            }
                        }
                    }
                    Statement::Send { args, port, span, .. } => {
                        if !class.ports.iter().any(|p| p.name == *port) {
                            self.err(*span, format!("undeclared port `{port}`"));
                        }
                        for a in args {
                            self.type_of(a, &scope);
                        }
                    }
                }
            }
        }
    }

    fn type_of(&mut self, e: &Expr, scope: &Scope<'_>) -> Option<Type> {
        match &e.kind {
            ExprKind::Lit(v) => Some(v.ty()),
            ExprKind::Var(n) => match scope.lookup(n) {
                Some(v) => Some(v.ty),
                None => {
                    self.err(e.span, format!("unknown variable `{n}`"));
                    None
                }
            },
            ExprKind::Not(inner) => {
                let t = self.type_of(inner, scope)?;
                if t != Type::Boolean {
                    self.err(e.span, format!("`not` applied to {t}"));
                    return None;
                }
                Some(Type::Boolean)
            }
            ExprKind::Binary(op, lhs, rhs) => {
                let lt = self.type_of(lhs, scope);
                let rt = self.type_of(rhs, scope);
                let (lt, rt) = (lt?, rt?);
                let (operand, result) = match op {
                    BinOp::Add | BinOp::Sub | BinOp::Mul => (Some(Type::Integer), Type::Integer),
                    BinOp::Le | BinOp::Lt | BinOp::Ge | BinOp::Gt => (Some(Type::Integer), Type::Boolean),
                    BinOp::And | BinOp::Or => (Some(Type::Boolean), Type::Boolean),
                    BinOp::Eq | BinOp::Ne => (None, Type::Boolean),
                };
                let ok = match operand {
                    Some(t) => lt == t && rt == t,
                    None => lt == rt,
                };
                if !ok {
                    self.err(e.span, format!("operator `{}` cannot be applied to {lt} and {rt}", op.symbol()));
                    return None;
                }
                Some(result)
            }
        }
    }

    fn channels(&mut self) {
        let m = self.model;
        let mut attached: HashMap<(Name, Name), Name> = HashMap::new();
        for ch in &m.channels {
            let ends = ch.direction.ends();
            for end in ends {
                match m.object(&end.object) {
                    None => self.err(ch.span, format!("channel `{}` references undeclared object `{}`", ch.name, end.object)),
                    Some(o) => {
                        if let Some(class) = m.class(&o.class) {
                            if !class.ports.iter().any(|p| p.name == end.port) {
                                self.err(
                                    ch.span,
                                    format!("channel `{}` references undeclared port `{end}`", ch.name),
                                );
                            }
                        }
                    }
                }
                let key = (end.object.clone(), end.port.clone());
                if let Some(prev) = attached.get(&key) {
                    self.err(
                        ch.span,
                        format!("port `{end}` is already attached to channel `{prev}`"),
                    );
                } else {
                    attached.insert(key, ch.name.clone());
                }
            }
        }
    }

    /// Checks every port use of `object`'s machines against the channel wired to it.
    fn port_usage(&mut self, object: &ObjectDecl, class: &Class) {
        for sm in &class.machines {
            let scope = Scope { class_vars: &class.variables, sm_vars: &sm.variables };
            for t in &sm.transitions {
                if let Some(Trigger::Receive(r)) = &t.trigger {
                    if !class.ports.iter().any(|p| p.name == r.port) {
                        continue;
                    }
                    let Some((ch, role)) = channel_at(self.model, &object.name, &r.port) else {
                        self.err(r.span, format!("port `{}.{}` is not connected to a channel", object.name, r.port));
                        continue;
                    };
                    if role == EndRole::From {
                        self.err(
                            r.span,
                            format!("cannot receive on `{}.{}`: it is the sending end of `{}`", object.name, r.port, ch.name),
                        );
                    }
                    let types: Vec<Option<Type>> = r
                        .args
                        .iter()
                        .map(|a| match a {
                            RecvArg::Bind(n, _) => scope.lookup(n).map(|v| v.ty),
                            RecvArg::Match(e) => self.quiet_type(e, &scope),
                        })
                        .collect();
                    self.signature(r.span, &r.signal, &types, ch);
                }
                for s in &t.effect {
                    if let Statement::Send { signal, args, port, span } = s {
                        if !class.ports.iter().any(|p| p.name == *port) {
                            continue;
                        }
                        let Some((ch, role)) = channel_at(self.model, &object.name, port) else {
                            self.err(*span, format!("port `{}.{port}` is not connected to a channel", object.name));
                            continue;
                        };
                        if role == EndRole::To {
                            self.err(
                                *span,
                                format!("cannot send on `{}.{port}`: it is the receiving end of `{}`", object.name, ch.name),
                            );
                        }
                        let types: Vec<Option<Type>> = args.iter().map(|a| self.quiet_type(a, &scope)).collect();
                        self.signature(*span, signal, &types, ch);
                    }
                }
            }
        }
    }

    /// Type of `e` without reporting; errors were already reported by `machine`.
    fn quiet_type(&mut self, e: &Expr, scope: &Scope<'_>) -> Option<Type> {
        let before = self.diags.len();
        let t = self.type_of(e, scope);
        self.diags.truncate(before);
        t
    }

    fn signature(&mut self, span: Span, signal: &str, types: &[Option<Type>], ch: &Channel) {
        if types.len() != ch.arg_types.len() {
            self.err(
                span,
                format!(
                    "signature mismatch: signal `{signal}` has {} argument(s) but channel `{}` carries {}",
                    types.len(),
                    ch.name,
                    ch.arg_types.len()
                ),
            );
            return;
        }
        for (i, (actual, expected)) in types.iter().zip(&ch.arg_types).enumerate() {
            if let Some(actual) = actual {
                if actual != expected {
                    self.err(
                        span,
                        format!(
                            "signature mismatch: argument {} of signal `{signal}` is {actual}, channel `{}` expects {expected}",
                            i + 1,
                            ch.name
                        ),
                    );
                }
            }
        }
    }
}

/// The channel attached to `object.port`, with the role of that end.
fn channel_at<'m>(m: &'m Model, object: &str, port: &str) -> Option<(&'m Channel, EndRole)> {
    m.channels.iter().find_map(|ch| {
        let hit = |end: &ObjectPort| &*end.object == object && &*end.port == port;
        match &ch.direction {
            Direction::Unidirectional { from, .. } if hit(from) => Some((ch, EndRole::From)),
            Direction::Unidirectional { to, .. } if hit(to) => Some((ch, EndRole::To)),
            Direction::Bidirectional { end1, end2 } if hit(end1) || hit(end2) => Some((ch, EndRole::Either)),
            _ => None,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_model;

    fn diags(text: &str) -> Vec<Diagnostic> {
        validate_model(&parse_model(text).unwrap())
    }

    const WRAP: &str = "model M { classes
        C { variables Integer x Boolean b ports Out In
            state machines S { initial A state B transitions BODY } }
        objects c:C d:C
        channels out(Integer) async lossless from c.Out to d.In
                 back() sync from d.Out to c.In }";

    fn with_body(body: &str) -> Vec<Diagnostic> {
        diags(&WRAP.replace("BODY", body))
    }

    #[test]
    fn clean_model() {
        assert_eq!(with_body("T from A to B { guard x < 2 effect x := x + 1 }"), vec![]);
    }

    #[test]
    fn send_arity_mismatch() {
        // `back` carries no arguments; d sends on Out.
        let ds = diags(
            "model M { classes
               C { ports P2 state machines S { initial A transitions T from A to A { effect send V(1) to P2 } } }
               D { ports Q2 state machines S { initial A transitions } }
               objects c:C d:D
               channels ch() async lossy from c.P2 to d.Q2 }",
        );
        assert_eq!(ds.len(), 1, "{ds:?}");
        assert!(ds[0].message.contains("signature mismatch"));
    }

    #[test]
    fn two_initial_states() {
        let ds = diags(
            "model M { classes C { state machines S { initial A B transitions } } objects c:C channels }",
        );
        assert_eq!(ds.len(), 1, "{ds:?}");
        assert!(ds[0].message.contains("exactly one initial state"));
    }

    #[test]
    fn guard_must_be_boolean() {
        let ds = with_body("T from A to B { guard x + 1 }");
        assert_eq!(ds.len(), 1);
        assert!(ds[0].message.contains("expected Boolean"));
    }

    #[test]
    fn assignment_type_mismatch() {
        let ds = with_body("T from A to B { effect b := 1 }");
        assert_eq!(ds.len(), 1);
        assert!(ds[0].message.contains("cannot assign"));
    }

    #[test]
    fn unknown_state_and_variable() {
        let ds = with_body("T from A to Z { effect y := 1 }");
        let msgs: Vec<_> = ds.iter().map(|d| d.message.as_str()).collect();
        assert_eq!(msgs.len(), 2, "{msgs:?}");
        assert!(msgs[0].contains("undeclared state `Z`"));
        assert!(msgs[1].contains("unknown variable `y`"));
    }

    #[test]
    fn direction_is_checked_for_every_object() {
        // Both objects share class C; c.In is the receiving end of `back`,
        // so sending on In is wrong for c. For d, In receives from `out`.
        let ds = with_body("T from A to B { effect send W() to In }");
        let wrong_end = ds.iter().filter(|d| d.message.contains("receiving end")).count();
        assert_eq!(wrong_end, 2, "{ds:?}");
    }

    #[test]
    fn port_attached_twice() {
        let ds = diags(
            "model M { classes C { ports P state machines S { initial A transitions } }
               objects c:C d:C
               channels a() sync from c.P to d.P  b() sync from c.P to d.P }",
        );
        assert_eq!(ds.len(), 2, "{ds:?}");
        assert!(ds[0].message.contains("already attached"));
    }

    #[test]
    fn diagnostics_are_order_stable() {
        let text = WRAP.replace("BODY", "T from A to Q { guard 1 effect y := true send Z(1, 2) to Out }");
        let first = diags(&text);
        assert!(first.len() >= 3);
        for _ in 0..5 {
            assert_eq!(diags(&text), first);
        }
    }
}
