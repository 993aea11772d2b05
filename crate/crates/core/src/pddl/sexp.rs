//! Tokenizer and s-expression reader. Symbols are lower-cased since PDDL
//! is case-insensitive; `;` starts a comment running to end of line.

use crate::error::{PddlError, Pos};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Sym(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    pub fn pos(&self) -> Pos {
        match self {
            Sexp::Sym(_, p) | Sexp::List(_, p) => *p,
        }
    }

    pub fn sym(&self) -> Option<&str> {
        match self {
            Sexp::Sym(s, _) => Some(s),
            Sexp::List(..) => None,
        }
    }

    pub fn list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(v, _) => Some(v),
            Sexp::Sym(..) => None,
        }
    }

    /// The leading symbol of a list, e.g. `and` in `(and ...)`.
    pub fn head(&self) -> Option<&str> {
        self.list().and_then(|v| v.first()).and_then(Sexp::sym)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Sym(String),
}

fn tokenize(text: &str) -> Vec<(Tok, Pos)> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1u32, 1u32);
    let mut chars = text.chars().peekable();
    let mut cur: Option<(String, Pos)> = None;
    let flush = |cur: &mut Option<(String, Pos)>, out: &mut Vec<(Tok, Pos)>| {
        if let Some((s, p)) = cur.take() {
            out.push((Tok::Sym(s), p));
        }
    };
    while let Some(c) = chars.next() {
        let pos = Pos { line, col };
        match c {
            '(' | ')' => {
                flush(&mut cur, &mut out);
                out.push((if c == '(' { Tok::Open } else { Tok::Close }, pos));
            }
            ';' => {
                flush(&mut cur, &mut out);
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                    col += 1;
                }
            }
            c if c.is_whitespace() => flush(&mut cur, &mut out),
            c => match &mut cur {
                Some((s, _)) => s.extend(c.to_lowercase()),
                None => cur = Some((c.to_lowercase().collect(), pos)),
            },
        }
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    flush(&mut cur, &mut out);
    out
}

/// Reads exactly one top-level expression.
pub fn read(text: &str) -> Result<Sexp, PddlError> {
    let toks = tokenize(text);
    let mut i = 0;
    let e = read_at(&toks, &mut i, text)?;
    if let Some((_, p)) = toks.get(i) {
        return Err(PddlError::Syntax { pos: *p, msg: "expected end of input".into() });
    }
    Ok(e)
}

fn end_pos(text: &str) -> Pos {
    let line = text.lines().count().max(1) as u32;
    let col = text.lines().last().map_or(0, |l| l.chars().count()) as u32 + 1;
    Pos { line, col }
}

fn read_at(toks: &[(Tok, Pos)], i: &mut usize, text: &str) -> Result<Sexp, PddlError> {
    let Some((t, p)) = toks.get(*i) else {
        return Err(PddlError::Syntax { pos: end_pos(text), msg: "expected `(`, found end of input".into() });
    };
    *i += 1;
    match t {
        Tok::Sym(s) => Ok(Sexp::Sym(s.clone(), *p)),
        Tok::Close => Err(PddlError::Syntax { pos: *p, msg: "unexpected `)`".into() }),
        Tok::Open => {
            let mut items = Vec::new();
            loop {
                match toks.get(*i) {
                    None => {
                        return Err(PddlError::Syntax {
                            pos: end_pos(text),
                            msg: "expected `)`, found end of input".into(),
                        })
                    }
                    Some((Tok::Close, _)) => {
                        *i += 1;
                        return Ok(Sexp::List(items, *p));
                    }
                    Some(_) => items.push(read_at(toks, i, text)?),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_lists_and_comments() {
        let e = read("(a (B c) ; note\n d)").unwrap();
        let v = e.list().unwrap();
        assert_eq!(v.len(), 3);
        assert_eq!(v[1].head(), Some("b"));
        assert_eq!((v[2].pos().line, v[2].pos().col), (2, 2));
    }

    #[test]
    fn unbalanced_reports_position() {
        match read("(a (b)") {
            Err(PddlError::Syntax { msg, .. }) => assert!(msg.contains("expected `)`")),
            r => panic!("{r:?}"),
        }
        match read("(a))") {
            Err(PddlError::Syntax { pos, .. }) => assert_eq!((pos.line, pos.col), (1, 4)),
            r => panic!("{r:?}"),
        }
    }
}
