//! The presentation text grammar.
//!
//! ```text
//! base (F_empty|F1);          -- optional, defaults to F1
//! gen name/arity (, name/arity)* ;
//! rel term = term ;
//! ```
//!
//! Terms are `name(args)` applications, bare names for nullary symbols,
//! variables `x1`..`x9`, and `0` for the base constant when the base is 𝔽_1.
//! `gen` and `rel` statements may repeat and interleave.

use crate::error::{Error, Result};

use super::{Base, OpSymbol, Presentation, Term, ZERO_SYMBOL};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Punct(char),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err_at(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c == '#' {
            // comment to end of line
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
                col += 1;
            }
            continue;
        }
        let start_col = col;
        if c.is_alphanumeric() || c == '_' {
            let mut ident = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_alphanumeric() || c == '_' {
                    ident.push(c);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            out.push(Spanned {
                tok: Tok::Ident(ident),
                line,
                col: start_col,
            });
            continue;
        }
        match c {
            ';' | ',' | '/' | '(' | ')' | '=' => {
                chars.next();
                col += 1;
                out.push(Spanned {
                    tok: Tok::Punct(c),
                    line,
                    col: start_col,
                });
            }
            other => {
                return Err(err_at(line, col, format!("unexpected character {other:?}")));
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<&Spanned> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eof_err(&self) -> Error {
        let (line, col) = self
            .toks
            .last()
            .map(|t| (t.line, t.col + 1))
            .unwrap_or((1, 1));
        err_at(line, col, "unexpected end of input")
    }

    fn expect_punct(&mut self, c: char) -> Result<()> {
        match self.next() {
            Some(Spanned {
                tok: Tok::Punct(p), ..
            }) if *p == c => Ok(()),
            Some(s) => Err(err_at(s.line, s.col, format!("expected {c:?}"))),
            None => Err(self.eof_err()),
        }
    }

    fn expect_ident(&mut self) -> Result<(String, usize, usize)> {
        match self.next() {
            Some(Spanned {
                tok: Tok::Ident(s),
                line,
                col,
            }) => Ok((s.clone(), *line, *col)),
            Some(s) => Err(err_at(s.line, s.col, "expected an identifier")),
            None => Err(self.eof_err()),
        }
    }

    fn parse_term(&mut self) -> Result<RawTerm> {
        let (name, line, col) = self.expect_ident()?;
        // Variables x1..x9.
        if let Some(rest) = name.strip_prefix('x') {
            if let Ok(k) = rest.parse::<usize>() {
                if (1..=9).contains(&k) {
                    return Ok(RawTerm {
                        line,
                        col,
                        node: RawNode::Var(k),
                    });
                }
            }
        }
        let mut args = Vec::new();
        if let Some(Spanned {
            tok: Tok::Punct('('),
            ..
        }) = self.peek()
        {
            self.next();
            if let Some(Spanned {
                tok: Tok::Punct(')'),
                ..
            }) = self.peek()
            {
                self.next();
            } else {
                loop {
                    args.push(self.parse_term()?);
                    match self.next() {
                        Some(Spanned {
                            tok: Tok::Punct(','),
                            ..
                        }) => continue,
                        Some(Spanned {
                            tok: Tok::Punct(')'),
                            ..
                        }) => break,
                        Some(s) => return Err(err_at(s.line, s.col, "expected ',' or ')'")),
                        None => return Err(self.eof_err()),
                    }
                }
            }
        }
        Ok(RawTerm {
            line,
            col,
            node: RawNode::Apply(name, args),
        })
    }
}

struct RawTerm {
    line: usize,
    col: usize,
    node: RawNode,
}

enum RawNode {
    Var(usize),
    Apply(String, Vec<RawTerm>),
}

fn lower(raw: &RawTerm, p: &Presentation) -> Result<Term> {
    match &raw.node {
        RawNode::Var(k) => Ok(Term::proj(*k, *k)),
        RawNode::Apply(name, args) => {
            let arity = p
                .arity_of(name)
                .ok_or_else(|| err_at(raw.line, raw.col, format!("unknown symbol {name}")))?;
            if args.len() != arity {
                return Err(err_at(
                    raw.line,
                    raw.col,
                    format!(
                        "symbol {name} has arity {arity}, applied to {} arguments",
                        args.len()
                    ),
                ));
            }
            Ok(Term::Apply {
                sym: name.clone(),
                args: args.iter().map(|a| lower(a, p)).collect::<Result<_>>()?,
            })
        }
    }
}

/// Parses the presentation grammar; round-trips through
/// [`Presentation::to_text`].
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks: &toks,
        pos: 0,
    };
    let mut base: Option<Base> = None;
    let mut gens: Vec<(OpSymbol, usize, usize)> = Vec::new();
    let mut rels: Vec<(RawTerm, RawTerm)> = Vec::new();
    while let Some(head) = parser.peek().cloned() {
        let (kw, line, col) = match &head.tok {
            Tok::Ident(s) => (s.clone(), head.line, head.col),
            Tok::Punct(c) => return Err(err_at(head.line, head.col, format!("unexpected {c:?}"))),
        };
        parser.next();
        match kw.as_str() {
            "base" => {
                if base.is_some() {
                    return Err(err_at(line, col, "base declared twice"));
                }
                let (name, l, c) = parser.expect_ident()?;
                base = Some(match name.as_str() {
                    "F_empty" | "Fempty" => Base::FEmpty,
                    "F1" => Base::F1,
                    other => {
                        return Err(err_at(l, c, format!("unknown base {other}")));
                    }
                });
                parser.expect_punct(';')?;
            }
            "gen" => loop {
                let (name, l, c) = parser.expect_ident()?;
                parser.expect_punct('/')?;
                let (arity, la, ca) = parser.expect_ident()?;
                let arity: usize = arity
                    .parse()
                    .map_err(|_| err_at(la, ca, "arity must be a number"))?;
                gens.push((OpSymbol { name, arity }, l, c));
                match parser.next() {
                    Some(Spanned {
                        tok: Tok::Punct(','),
                        ..
                    }) => continue,
                    Some(Spanned {
                        tok: Tok::Punct(';'),
                        ..
                    }) => break,
                    Some(s) => return Err(err_at(s.line, s.col, "expected ',' or ';'")),
                    None => return Err(parser.eof_err()),
                }
            },
            "rel" => {
                let lhs = parser.parse_term()?;
                parser.expect_punct('=')?;
                let rhs = parser.parse_term()?;
                parser.expect_punct(';')?;
                rels.push((lhs, rhs));
            }
            other => {
                return Err(err_at(
                    line,
                    col,
                    format!("expected base, gen or rel, found {other}"),
                ));
            }
        }
    }
    let base = base.unwrap_or(Base::F1);
    let mut p = Presentation::new(base, Vec::new(), Vec::new())?;
    for (g, l, c) in gens {
        if g.name == ZERO_SYMBOL {
            return Err(err_at(l, c, "the name 0 is reserved for the base constant"));
        }
        if p.generators.iter().any(|e| e.name == g.name) {
            return Err(err_at(l, c, format!("duplicate generator {}", g.name)));
        }
        p.generators.push(g);
    }
    for (lraw, rraw) in rels {
        let (lline, lcol) = (lraw.line, lraw.col);
        let lhs = lower(&lraw, &p)?;
        let rhs = lower(&rraw, &p)?;
        p.push_relation(lhs, rhs).map_err(|e| match e {
            Error::Input(msg) => err_at(lline, lcol, msg),
            other => other,
        })?;
    }
    Ok(p)
}
