use std::fmt;

use super::{ParseDiagnostic, Pos};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(String),
    /// Punctuation and operators, stored as their source text.
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(s) => write!(f, "`{s}`"),
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

// Longest symbols first so that prefixes do not win.
const SYMBOLS: &[&str] = &[
    "<->", "==>", "->", ":=", "!=", "<=", ">=", "..", "(", ")", "{", "}", "[", "]", ",", ";", ":",
    "@", "~", "/", "-", "&", "|", "=", "<", ">", "!", "?",
];

/// Splits `src` into tokens; `#` starts a comment running to the end of the line.
pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseDiagnostic> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut rest = src;
    while let Some(c) = rest.chars().next() {
        let pos = Pos { line, col };
        if c == '\n' {
            line += 1;
            col = 1;
            rest = &rest[1..];
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            rest = &rest[c.len_utf8()..];
            continue;
        }
        if c == '#' {
            let end = rest.find('\n').unwrap_or(rest.len());
            col += rest[..end].chars().count();
            rest = &rest[end..];
            continue;
        }
        let (tok, len) = if c.is_ascii_alphabetic() || c == '_' {
            let len = rest
                .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_' || ch == '\''))
                .unwrap_or(rest.len());
            (Tok::Ident(rest[..len].to_string()), len)
        } else if c.is_ascii_digit() {
            let len = rest.find(|ch: char| !ch.is_ascii_digit()).unwrap_or(rest.len());
            (Tok::Num(rest[..len].to_string()), len)
        } else if let Some(sym) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            (Tok::Sym(sym), sym.len())
        } else {
            return Err(ParseDiagnostic {
                pos,
                message: format!("unexpected character `{c}`"),
                expected: Vec::new(),
            });
        };
        out.push(Token { tok, pos });
        col += len;
        rest = &rest[len..];
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
    });
    Ok(out)
}
