//! Pretty printer producing text that [`parse_model`](super::parse_model) accepts.

use std::fmt::{self, Write};

use super::ast::*;

pub fn print_model(m: &Model) -> String {
    let mut out = String::new();
    write_model(&mut out, m).expect("writing to a String cannot fail");
    out
}

fn write_model(out: &mut String, m: &Model) -> fmt::Result {
    writeln!(out, "model {} {{", m.name)?;
    writeln!(out, "  classes")?;
    for c in &m.classes {
        write_class(out, c)?;
    }
    write!(out, "  objects")?;
    for o in &m.objects {
        write!(out, " {}:{}", o.name, o.class)?;
    }
    writeln!(out)?;
    writeln!(out, "  channels")?;
    for ch in &m.channels {
        write!(out, "    {}(", ch.name)?;
        for (i, t) in ch.arg_types.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            write!(out, "{t}")?;
        }
        out.push_str(") ");
        out.push_str(match ch.kind {
            ChannelKind::Sync => "sync",
            ChannelKind::AsyncLossless => "async lossless",
            ChannelKind::AsyncLossy => "async lossy",
        });
        match &ch.direction {
            Direction::Unidirectional { from, to } => writeln!(out, " from {from} to {to}")?,
            Direction::Bidirectional { end1, end2 } => writeln!(out, " between {end1} and {end2}")?,
        }
    }
    writeln!(out, "}}")
}

fn write_vars(out: &mut String, indent: &str, vars: &[VarDecl]) -> fmt::Result {
    if vars.is_empty() {
        return Ok(());
    }
    write!(out, "{indent}variables")?;
    for v in vars {
        write!(out, " {} {}", v.ty, v.name)?;
        if let Some(init) = &v.initial {
            write!(out, " = {init}")?;
        }
    }
    writeln!(out)
}

fn write_class(out: &mut String, c: &Class) -> fmt::Result {
    writeln!(out, "    {} {{", c.name)?;
    write_vars(out, "      ", &c.variables)?;
    if !c.ports.is_empty() {
        write!(out, "      ports")?;
        for p in &c.ports {
            write!(out, " {}", p.name)?;
        }
        writeln!(out)?;
    }
    writeln!(out, "      state machines")?;
    for sm in &c.machines {
        write_machine(out, sm)?;
    }
    writeln!(out, "    }}")
}

fn write_names(out: &mut String, kw: &str, names: &[Name]) -> fmt::Result {
    if names.is_empty() {
        return Ok(());
    }
    write!(out, " {kw}")?;
    for n in names {
        write!(out, " {n}")?;
    }
    Ok(())
}

fn write_machine(out: &mut String, sm: &StateMachine) -> fmt::Result {
    writeln!(out, "        {} {{", sm.name)?;
    write_vars(out, "          ", &sm.variables)?;
    write!(out, "         ")?;
    write_names(out, "initial", &sm.initial_states)?;
    write_names(out, "state", &sm.plain_states)?;
    write_names(out, "final", &sm.final_states)?;
    writeln!(out)?;
    writeln!(out, "          transitions")?;
    for t in &sm.transitions {
        writeln!(out, "            {} from {} to {} {{", t.name, t.source, t.target)?;
        match &t.trigger {
            Some(Trigger::Receive(r)) => {
                write!(out, "              trigger receive {}(", r.signal)?;
                for (i, a) in r.args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    match a {
                        RecvArg::Bind(n, _) => out.push_str(n),
                        RecvArg::Match(e) => write_expr(out, e)?,
                    }
                }
                writeln!(out, ") from {}", r.port)?;
            }
            Some(Trigger::Delay(d)) => writeln!(out, "              trigger after {} ms", d.millis)?,
            None => {}
        }
        if let Some(g) = &t.guard {
            out.push_str("              guard ");
            write_expr(out, g)?;
            writeln!(out)?;
        }
        if !t.effect.is_empty() {
            out.push_str("              effect");
            for s in &t.effect {
                out.push_str("\n                ");
                write_statement(out, s)?;
            }
            writeln!(out)?;
        }
        writeln!(out, "            }}")?;
    }
    writeln!(out, "        }}")
}

fn write_statement(out: &mut String, s: &Statement) -> fmt::Result {
    match s {
        Statement::Assign { target, value, .. } => {
            write!(out, "{target} := ")?;
            write_expr(out, value)
        }
        Statement::Send { signal, args, port, .. } => {
            write!(out, "send {signal}(")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_expr(out, a)?;
            }
            write!(out, ") to {port}")
        }
    }
}

/// Renders an expression with the minimum parentheses needed to re-parse it.
pub fn expr_to_string(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e).expect("writing to a String cannot fail");
    s
}

fn prec(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Binary(op, _, _) => op.precedence(),
        _ => u8::MAX,
    }
}

fn write_expr(out: &mut String, e: &Expr) -> fmt::Result {
    match &e.kind {
        ExprKind::Lit(v) => write!(out, "{v}"),
        ExprKind::Var(n) => write!(out, "{n}"),
        ExprKind::Not(inner) => {
            out.push_str("not ");
            write_operand(out, inner, prec(inner) == u8::MAX)
        }
        ExprKind::Binary(op, lhs, rhs) => {
            let p = op.precedence();
            write_operand(out, lhs, prec(lhs) >= p)?;
            write!(out, " {} ", op.symbol())?;
            write_operand(out, rhs, prec(rhs) > p)
        }
    }
}

fn write_operand(out: &mut String, e: &Expr, bare: bool) -> fmt::Result {
    if bare {
        write_expr(out, e)
    } else {
        out.push('(');
        write_expr(out, e)?;
        out.push(')');
        Ok(())
    }
}
