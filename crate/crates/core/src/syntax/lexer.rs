use std::fmt;

use super::ast::Pos;
use super::diagnostic::Diagnostic;

pub const KEYWORDS: &[&str] = &[
    "model", "classes", "objects", "channels", "variables", "ports", "state", "machines",
    "initial", "final", "transitions", "from", "to", "trigger", "guard", "effect", "receive",
    "send", "after", "ms", "sync", "async", "lossless", "lossy", "between", "and", "or", "not",
    "true", "false", "Integer", "Boolean", "String",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Keyword(&'static str),
    Nat(u64),
    Str(String),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Keyword(k) => write!(f, "`{k}`"),
            Tok::Nat(n) => write!(f, "number `{n}`"),
            Tok::Str(_) => f.write_str("string literal"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

const SYMBOLS: &[&str] = &[
    ":=", "<=", ">=", "==", "!=", "{", "}", "(", ")", ":", ".", ",", "=", "+", "-", "*", "<", ">",
];

/// Splits SLCO source text into tokens. The final token is always `Eof`.
pub fn tokenize(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;

    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        let pos = Pos::new(line, col);
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                bump!();
            }
            let tok = match KEYWORDS.iter().find(|k| **k == s) {
                Some(k) => Tok::Keyword(k),
                None => Tok::Ident(s),
            };
            out.push(Token { tok, pos });
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                bump!();
            }
            let n = s
                .parse::<u64>()
                .map_err(|_| Diagnostic::error(pos, format!("number `{s}` is too large")))?;
            out.push(Token { tok: Tok::Nat(n), pos });
            continue;
        }
        if c == '"' {
            bump!();
            let mut s = String::new();
            loop {
                if i >= chars.len() {
                    return Err(Diagnostic::error(pos, "unterminated string literal"));
                }
                match chars[i] {
                    '"' => {
                        bump!();
                        break;
                    }
                    '\\' => {
                        bump!();
                        let esc = chars.get(i).copied();
                        let decoded = match esc {
                            Some('"') => '"',
                            Some('\\') => '\\',
                            Some('n') => '\n',
                            Some('t') => '\t',
                            _ => {
                                return Err(Diagnostic::error(
                                    Pos::new(line, col),
                                    "invalid escape sequence in string literal",
                                ))
                            }
                        };
                        s.push(decoded);
                        bump!();
                    }
                    '\n' => return Err(Diagnostic::error(pos, "unterminated string literal")),
                    ch => {
                        s.push(ch);
                        bump!();
                    }
                }
            }
            out.push(Token { tok: Tok::Str(s), pos });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match SYMBOLS.iter().find(|sym| rest.starts_with(**sym)) {
            Some(sym) => {
                for _ in 0..sym.len() {
                    bump!();
                }
                out.push(Token { tok: Tok::Sym(sym), pos });
            }
            None => return Err(Diagnostic::error(pos, format!("unexpected character `{c}`"))),
        }
    }
    out.push(Token { tok: Tok::Eof, pos: Pos::new(line, col) });
    Ok(out)
}
