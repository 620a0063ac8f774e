//! Recursive-descent parser for the textual SLCO syntax.

use super::ast::*;
use super::diagnostic::{Diagnostic, Diagnostics};
use super::lexer::{tokenize, Tok, Token};

type PResult<T> = Result<T, Diagnostic>;

/// Parses a complete model. On failure the returned list holds at least one error.
pub fn parse_model(text: &str) -> Result<Model, Diagnostics> {
    let tokens = tokenize(text).map_err(|d| Diagnostics(vec![d]))?;
    let mut p = Parser { tokens, at: 0 };
    p.model().map_err(|d| Diagnostics(vec![d]))
}

/// Parses a standalone expression. Bare identifiers become variable references.
pub fn parse_expression(text: &str) -> Result<Expr, Diagnostics> {
    let tokens = tokenize(text).map_err(|d| Diagnostics(vec![d]))?;
    let mut p = Parser { tokens, at: 0 };
    let e = p.expr().and_then(|e| {
        p.expect_eof()?;
        Ok(e)
    });
    e.map_err(|d| Diagnostics(vec![d]))
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.at + offset).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> Diagnostic {
        Diagnostic::error(self.pos(), format!("expected {expected}, found {}", self.peek()))
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Keyword(k) if *k == kw)
    }

    fn is_sym(&self, sym: &str) -> bool {
        matches!(self.peek(), Tok::Sym(s) if *s == sym)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn eat_sym(&mut self, sym: &str) -> bool {
        if self.is_sym(sym) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    fn expect_sym(&mut self, sym: &str) -> PResult<()> {
        if self.eat_sym(sym) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{sym}`")))
        }
    }

    fn expect_eof(&mut self) -> PResult<()> {
        match self.peek() {
            Tok::Eof => Ok(()),
            _ => Err(self.unexpected("end of input")),
        }
    }

    fn ident(&mut self) -> PResult<(Name, Span)> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let span = Span(self.pos());
                self.advance();
                Ok((s.as_str().into(), span))
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    fn is_ident(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_))
    }

    /// Rejects a repeated optional section keyword.
    fn no_repeat(&self, kw: &str) -> PResult<()> {
        if self.is_kw(kw) {
            Err(Diagnostic::error(self.pos(), format!("duplicate `{kw}` section")))
        } else {
            Ok(())
        }
    }

    fn model(&mut self) -> PResult<Model> {
        self.expect_kw("model")?;
        let (name, _) = self.ident()?;
        self.expect_sym("{")?;
        self.expect_kw("classes")?;
        let mut classes = Vec::new();
        while self.is_ident() {
            classes.push(self.class()?);
        }
        self.expect_kw("objects")?;
        let mut objects = Vec::new();
        while self.is_ident() {
            let (obj, span) = self.ident()?;
            self.expect_sym(":")?;
            let (class, _) = self.ident()?;
            objects.push(ObjectDecl { name: obj, class, span });
        }
        self.expect_kw("channels")?;
        let mut channels = Vec::new();
        while self.is_ident() {
            channels.push(self.channel()?);
        }
        self.expect_sym("}")?;
        self.expect_eof()?;
        Ok(Model { name, classes, objects, channels })
    }

    fn var_decls(&mut self) -> PResult<Vec<VarDecl>> {
        let mut vars = Vec::new();
        while let Some(ty) = self.peek_type() {
            let span = Span(self.pos());
            self.advance();
            let (name, _) = self.ident()?;
            let initial = if self.eat_sym("=") { Some(self.literal()?) } else { None };
            vars.push(VarDecl { name, ty, initial, span });
        }
        if vars.is_empty() {
            return Err(self.unexpected("a variable declaration"));
        }
        Ok(vars)
    }

    fn peek_type(&self) -> Option<Type> {
        match self.peek() {
            Tok::Keyword("Integer") => Some(Type::Integer),
            Tok::Keyword("Boolean") => Some(Type::Boolean),
            Tok::Keyword("String") => Some(Type::String),
            _ => None,
        }
    }

    fn literal(&mut self) -> PResult<Value> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Nat(n) => {
                self.advance();
                i64::try_from(n)
                    .map(Value::Int)
                    .map_err(|_| Diagnostic::error(pos, "integer literal out of range"))
            }
            Tok::Sym("-") => {
                self.advance();
                match self.peek().clone() {
                    Tok::Nat(n) => {
                        self.advance();
                        negate(n).ok_or_else(|| Diagnostic::error(pos, "integer literal out of range"))
                    }
                    _ => Err(self.unexpected("number")),
                }
            }
            Tok::Keyword("true") => {
                self.advance();
                Ok(Value::Bool(true))
            }
            Tok::Keyword("false") => {
                self.advance();
                Ok(Value::Bool(false))
            }
            Tok::Str(s) => {
                self.advance();
                Ok(Value::Str(s))
            }
            _ => Err(self.unexpected("literal")),
        }
    }

    fn ident_list(&mut self) -> PResult<Vec<Name>> {
        let mut names = vec![self.ident()?.0];
        while self.is_ident() {
            names.push(self.ident()?.0);
        }
        Ok(names)
    }

    fn class(&mut self) -> PResult<Class> {
        let (name, span) = self.ident()?;
        self.expect_sym("{")?;
        let mut variables = Vec::new();
        if self.eat_kw("variables") {
            variables = self.var_decls()?;
            self.no_repeat("variables")?;
        }
        let mut ports = Vec::new();
        if self.eat_kw("ports") {
            loop {
                let (port, span) = self.ident()?;
                ports.push(PortDecl { name: port, span });
                if !self.is_ident() {
                    break;
                }
            }
            self.no_repeat("ports")?;
        }
        self.expect_kw("state")?;
        self.expect_kw("machines")?;
        let mut machines = vec![self.machine(&variables)?];
        while self.is_ident() {
            machines.push(self.machine(&variables)?);
        }
        self.expect_sym("}")?;
        Ok(Class { name, variables, ports, machines, span })
    }

    fn machine(&mut self, class_vars: &[VarDecl]) -> PResult<StateMachine> {
        let (name, span) = self.ident()?;
        self.expect_sym("{")?;
        let mut variables = Vec::new();
        if self.eat_kw("variables") {
            variables = self.var_decls()?;
            self.no_repeat("variables")?;
        }
        self.expect_kw("initial")?;
        let initial_states = self.ident_list()?;
        self.no_repeat("initial")?;
        let mut plain_states = Vec::new();
        if self.eat_kw("state") {
            plain_states = self.ident_list()?;
            self.no_repeat("state")?;
        }
        let mut final_states = Vec::new();
        if self.eat_kw("final") {
            final_states = self.ident_list()?;
            self.no_repeat("final")?;
        }
        self.expect_kw("transitions")?;
        let mut transitions = Vec::new();
        while self.is_ident() {
            transitions.push(self.transition(class_vars, &variables)?);
        }
        self.expect_sym("}")?;
        Ok(StateMachine {
            name,
            variables,
            initial_states,
            plain_states,
            final_states,
            transitions,
            span,
        })
    }

    fn transition(&mut self, class_vars: &[VarDecl], sm_vars: &[VarDecl]) -> PResult<Transition> {
        let (name, span) = self.ident()?;
        self.expect_kw("from")?;
        let (source, _) = self.ident()?;
        self.expect_kw("to")?;
        let (target, _) = self.ident()?;
        self.expect_sym("{")?;
        let mut trigger = None;
        if self.eat_kw("trigger") {
            trigger = Some(self.trigger(class_vars, sm_vars)?);
            self.no_repeat("trigger")?;
        }
        let mut guard = None;
        if self.eat_kw("guard") {
            guard = Some(self.expr()?);
            self.no_repeat("guard")?;
        }
        let mut effect = Vec::new();
        if self.eat_kw("effect") {
            effect.push(self.statement()?);
            while self.is_ident() || self.is_kw("send") {
                effect.push(self.statement()?);
            }
            self.no_repeat("effect")?;
        }
        self.expect_sym("}")?;
        Ok(Transition { name, source, target, trigger, guard, effect, span })
    }

    fn trigger(&mut self, class_vars: &[VarDecl], sm_vars: &[VarDecl]) -> PResult<Trigger> {
        let span = Span(self.pos());
        if self.eat_kw("after") {
            let millis = match self.peek().clone() {
                Tok::Nat(n) => {
                    self.advance();
                    n
                }
                _ => return Err(self.unexpected("delay in milliseconds")),
            };
            self.expect_kw("ms")?;
            return Ok(Trigger::Delay(Delay { millis, span }));
        }
        if !self.eat_kw("receive") {
            return Err(self.unexpected("`receive` or `after`"));
        }
        let (signal, _) = self.ident()?;
        self.expect_sym("(")?;
        let mut args = Vec::new();
        if !self.is_sym(")") {
            loop {
                args.push(self.recv_arg(class_vars, sm_vars)?);
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.expect_sym(")")?;
        self.expect_kw("from")?;
        let (port, _) = self.ident()?;
        Ok(Trigger::Receive(SignalReception { signal, args, port, span }))
    }

    fn recv_arg(&mut self, class_vars: &[VarDecl], sm_vars: &[VarDecl]) -> PResult<RecvArg> {
        if let Tok::Ident(id) = self.peek() {
            let bare = matches!(self.peek_at(1), Tok::Sym(",") | Tok::Sym(")"));
            let in_scope = sm_vars.iter().chain(class_vars).any(|v| &*v.name == id.as_str());
            if bare && in_scope {
                let (name, span) = self.ident()?;
                return Ok(RecvArg::Bind(name, span));
            }
        }
        Ok(RecvArg::Match(self.expr()?))
    }

    fn statement(&mut self) -> PResult<Statement> {
        let span = Span(self.pos());
        if self.eat_kw("send") {
            let (signal, _) = self.ident()?;
            self.expect_sym("(")?;
            let mut args = Vec::new();
            if !self.is_sym(")") {
                loop {
                    args.push(self.expr()?);
                    if !self.eat_sym(",") {
                        break;
                    }
                }
            }
            self.expect_sym(")")?;
            self.expect_kw("to")?;
            let (port, _) = self.ident()?;
            return Ok(Statement::Send { signal, args, port, span });
        }
        let (target, _) = self.ident()?;
        self.expect_sym(":=")?;
        let value = self.expr()?;
        Ok(Statement::Assign { target, value, span })
    }

    fn channel(&mut self) -> PResult<Channel> {
        let (name, span) = self.ident()?;
        self.expect_sym("(")?;
        let mut arg_types = Vec::new();
        if !self.is_sym(")") {
            loop {
                match self.peek_type() {
                    Some(t) => {
                        self.advance();
                        arg_types.push(t);
                    }
                    None => return Err(self.unexpected("type")),
                }
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.expect_sym(")")?;
        let kind = if self.eat_kw("sync") {
            ChannelKind::Sync
        } else if self.eat_kw("async") {
            if self.eat_kw("lossless") {
                ChannelKind::AsyncLossless
            } else if self.eat_kw("lossy") {
                ChannelKind::AsyncLossy
            } else {
                return Err(self.unexpected("`lossless` or `lossy`"));
            }
        } else {
            return Err(self.unexpected("`sync` or `async`"));
        };
        let direction = if self.eat_kw("from") {
            let from = self.object_port()?;
            self.expect_kw("to")?;
            let to = self.object_port()?;
            Direction::Unidirectional { from, to }
        } else if self.eat_kw("between") {
            let end1 = self.object_port()?;
            self.expect_kw("and")?;
            let end2 = self.object_port()?;
            Direction::Bidirectional { end1, end2 }
        } else {
            return Err(self.unexpected("`from` or `between`"));
        };
        Ok(Channel { name, arg_types, kind, direction, span })
    }

    fn object_port(&mut self) -> PResult<ObjectPort> {
        let (object, _) = self.ident()?;
        self.expect_sym(".")?;
        let (port, _) = self.ident()?;
        Ok(ObjectPort { object, port })
    }

    fn expr(&mut self) -> PResult<Expr> {
        self.binary(1)
    }

    fn peek_binop(&self) -> Option<BinOp> {
        Some(match self.peek() {
            Tok::Sym("+") => BinOp::Add,
            Tok::Sym("-") => BinOp::Sub,
            Tok::Sym("*") => BinOp::Mul,
            Tok::Sym("<=") => BinOp::Le,
            Tok::Sym("<") => BinOp::Lt,
            Tok::Sym(">=") => BinOp::Ge,
            Tok::Sym(">") => BinOp::Gt,
            Tok::Sym("==") => BinOp::Eq,
            Tok::Sym("!=") => BinOp::Ne,
            Tok::Keyword("and") => BinOp::And,
            Tok::Keyword("or") => BinOp::Or,
            _ => return None,
        })
    }

    /// Precedence climbing; all binary operators are left-associative.
    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.peek_binop() {
            if op.precedence() < min_prec {
                break;
            }
            let span = Span(self.pos());
            self.advance();
            let rhs = self.binary(op.precedence() + 1)?;
            lhs = Expr { kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), span };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        let span = Span(self.pos());
        if self.eat_kw("not") {
            let operand = self.unary()?;
            return Ok(Expr { kind: ExprKind::Not(Box::new(operand)), span });
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Expr> {
        let span = Span(self.pos());
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.advance();
                Ok(Expr { kind: ExprKind::Var(s.as_str().into()), span })
            }
            Tok::Sym("(") => {
                self.advance();
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            Tok::Nat(_) | Tok::Sym("-") | Tok::Keyword("true") | Tok::Keyword("false") | Tok::Str(_) => {
                let v = self.literal()?;
                Ok(Expr { kind: ExprKind::Lit(v), span })
            }
            _ => Err(self.unexpected("expression")),
        }
    }
}

fn negate(n: u64) -> Option<Value> {
    if n == 1u64 << 63 {
        Some(Value::Int(i64::MIN))
    } else {
        i64::try_from(n).ok().map(|v| Value::Int(-v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_model() {
        let m = parse_model("model Empty { classes objects channels }").unwrap();
        assert_eq!(&*m.name, "Empty");
        assert!(m.classes.is_empty() && m.objects.is_empty() && m.channels.is_empty());
    }

    #[test]
    fn unbalanced_brace_reports_end_of_input() {
        let text = "model M { classes X";
        let err = parse_model(text).unwrap_err();
        assert_eq!(err.0.len(), 1);
        let d = &err.0[0];
        assert!(d.is_error());
        assert_eq!(d.pos, Pos::new(1, 20));
        assert!(d.message.contains("end of input"), "{}", d.message);
    }

    #[test]
    fn duplicate_section() {
        let text = "model M { classes C { variables Integer x variables Integer y \
                    state machines S { initial A transitions } } objects channels }";
        let err = parse_model(text).unwrap_err();
        assert!(err.0[0].message.contains("duplicate `variables`"));
    }

    #[test]
    fn precedence() {
        let e = parse_expression("a + 2 * 3 <= 7 and not b or c").unwrap();
        let ExprKind::Binary(BinOp::Or, lhs, _) = e.kind else { panic!("{e:?}") };
        let ExprKind::Binary(BinOp::And, cmp, not) = lhs.kind else { panic!() };
        assert!(matches!(not.kind, ExprKind::Not(_)));
        let ExprKind::Binary(BinOp::Le, sum, _) = cmp.kind else { panic!() };
        let ExprKind::Binary(BinOp::Add, _, prod) = sum.kind else { panic!() };
        assert!(matches!(prod.kind, ExprKind::Binary(BinOp::Mul, _, _)));
    }

    #[test]
    fn subtraction_is_left_associative() {
        let e = parse_expression("10 - 3 - 2").unwrap();
        let ExprKind::Binary(BinOp::Sub, lhs, rhs) = e.kind else { panic!() };
        assert!(matches!(lhs.kind, ExprKind::Binary(BinOp::Sub, _, _)));
        assert_eq!(rhs.kind, ExprKind::Lit(Value::Int(2)));
    }

    #[test]
    fn negative_literals() {
        assert_eq!(
            parse_expression("-9223372036854775808").unwrap().kind,
            ExprKind::Lit(Value::Int(i64::MIN))
        );
        assert!(parse_expression("9223372036854775808").is_err());
    }

    #[test]
    fn reception_binding_vs_match() {
        let text = "model M { classes C { variables Integer m ports In \
            state machines S { initial A transitions \
              T from A to A { trigger receive Sig(m, true, k) from In } } } \
            objects channels }";
        let m = parse_model(text).unwrap();
        let t = &m.classes[0].machines[0].transitions[0];
        let Some(Trigger::Receive(r)) = &t.trigger else { panic!() };
        assert!(matches!(&r.args[0], RecvArg::Bind(n, _) if &**n == "m"));
        assert!(matches!(&r.args[1], RecvArg::Match(_)));
        // `k` is not a declared variable, so it is a match against an unknown name.
        assert!(matches!(&r.args[2], RecvArg::Match(e) if e.kind == ExprKind::Var("k".into())));
    }

    #[test]
    fn keywords_are_reserved() {
        let err = parse_model("model state { classes objects channels }").unwrap_err();
        assert!(err.0[0].message.contains("expected identifier"));
    }
}
