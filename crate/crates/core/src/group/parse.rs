//! Tokenizer and recursive-descent parser for the `.grp` format.
//!
//! The format is whitespace-insensitive; `#` starts a comment running to
//! the end of the line. Cycles and section tuples both open with `(`;
//! section tuples always contain a comma (the alphabet has at least two
//! letters), which disambiguates the two.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::perm::Perm;

use super::{Generator, GroupSpec, GroupWord, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    Comma,
    Star,
    Caret,
    Minus,
    Eq,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: u32,
    col: u32,
}

fn syntax(line: u32, col: u32, msg: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut line = 1u32;
    let mut col = 1u32;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let bump = |c: char, line: &mut u32, col: &mut u32| {
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        };
        match c {
            '#' => {
                while let Some(&c) = chars.peek() {
                    chars.next();
                    bump(c, &mut line, &mut col);
                    if c == '\n' {
                        break;
                    }
                }
            }
            c if c.is_whitespace() => {
                chars.next();
                bump(c, &mut line, &mut col);
            }
            '(' | ')' | ',' | '*' | '^' | '-' | '=' => {
                chars.next();
                bump(c, &mut line, &mut col);
                let tok = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    '*' => Tok::Star,
                    '^' => Tok::Caret,
                    '-' => Tok::Minus,
                    _ => Tok::Eq,
                };
                out.push(Spanned {
                    tok,
                    line: tline,
                    col: tcol,
                });
            }
            c if c.is_ascii_digit() => {
                let mut value: i64 = 0;
                while let Some(&c) = chars.peek() {
                    if let Some(digit) = c.to_digit(10) {
                        chars.next();
                        bump(c, &mut line, &mut col);
                        value = value
                            .checked_mul(10)
                            .and_then(|v| v.checked_add(digit as i64))
                            .ok_or_else(|| syntax(tline, tcol, "integer literal too large"))?;
                    } else {
                        break;
                    }
                }
                out.push(Spanned {
                    tok: Tok::Int(value),
                    line: tline,
                    col: tcol,
                });
            }
            c if c.is_ascii_alphabetic() => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(c);
                        chars.next();
                        bump(c, &mut line, &mut col);
                    } else {
                        break;
                    }
                }
                out.push(Spanned {
                    tok: Tok::Ident(name),
                    line: tline,
                    col: tcol,
                });
            }
            other => {
                return Err(syntax(tline, tcol, format!("unexpected character `{other}`")));
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (u32, u32) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map_or((1, 1), |t| (t.line, t.col))
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<Spanned> {
        let (line, col) = self.here();
        match self.next() {
            Some(t) if &t.tok == tok => Ok(t),
            Some(t) => Err(syntax(t.line, t.col, format!("expected {what}"))),
            None => Err(syntax(line, col, format!("expected {what}, found end of input"))),
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<(String, u32, u32)> {
        let (line, col) = self.here();
        match self.next() {
            Some(Spanned {
                tok: Tok::Ident(name),
                line,
                col,
            }) => Ok((name, line, col)),
            Some(t) => Err(syntax(t.line, t.col, format!("expected {what}"))),
            None => Err(syntax(line, col, format!("expected {what}, found end of input"))),
        }
    }

    fn expect_int(&mut self, what: &str) -> Result<(i64, u32, u32)> {
        let (line, col) = self.here();
        match self.next() {
            Some(Spanned {
                tok: Tok::Int(v),
                line,
                col,
            }) => Ok((v, line, col)),
            Some(t) => Err(syntax(t.line, t.col, format!("expected {what}"))),
            None => Err(syntax(line, col, format!("expected {what}, found end of input"))),
        }
    }

    /// From an opening paren at the current position, does the group
    /// contain a comma before its matching close paren?
    fn paren_group_has_comma(&self) -> bool {
        debug_assert!(matches!(self.peek().map(|t| &t.tok), Some(Tok::LParen)));
        let mut depth = 0usize;
        for t in &self.toks[self.pos..] {
            match t.tok {
                Tok::LParen => depth += 1,
                Tok::RParen => {
                    depth -= 1;
                    if depth == 0 {
                        return false;
                    }
                }
                Tok::Comma if depth == 1 => return true,
                _ => {}
            }
        }
        false
    }
}

const RESERVED: [&str; 3] = ["alphabet", "gen", "e"];

struct RawGen {
    name: String,
    perm: Perm,
    /// Section words with unresolved names.
    sections: Option<Vec<RawWord>>,
}

pub(super) fn parse_spec(text: &str) -> Result<GroupSpec> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let (kw, line, col) = p.expect_ident("`alphabet`")?;
    if kw != "alphabet" {
        return Err(syntax(line, col, "expected `alphabet`"));
    }
    let (d, dline, dcol) = p.expect_int("alphabet size")?;
    if d < 2 {
        return Err(syntax(dline, dcol, format!("alphabet size {d} is below 2")));
    }
    let d = d as usize;

    let mut raw: Vec<RawGen> = Vec::new();
    while p.peek().is_some() {
        let (kw, line, col) = p.expect_ident("`gen`")?;
        if kw != "gen" {
            return Err(syntax(line, col, "expected `gen`"));
        }
        let (name, nline, ncol) = p.expect_ident("generator name")?;
        if RESERVED.contains(&name.as_str()) {
            return Err(syntax(nline, ncol, format!("`{name}` is a reserved name")));
        }
        p.expect(&Tok::Eq, "`=`")?;
        let perm = parse_perm(&mut p, d)?;
        let sections = if matches!(p.peek().map(|t| &t.tok), Some(Tok::LParen)) {
            Some(parse_sections(&mut p, d)?)
        } else {
            None
        };
        raw.push(RawGen { name, perm, sections });
    }

    // Duplicate names, then name resolution (forward references allowed).
    let mut index: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, g) in raw.iter().enumerate() {
        if index.insert(g.name.as_str(), i).is_some() {
            return Err(Error::DuplicateGenerator(g.name.clone()));
        }
    }
    let mut generators = Vec::with_capacity(raw.len());
    for g in &raw {
        let sections = match &g.sections {
            None => alloc::vec![GroupWord::identity(); d],
            Some(words) => {
                let mut out = Vec::with_capacity(d);
                for word in words {
                    let mut terms = Vec::with_capacity(word.len());
                    for (name, exp, _, _) in word {
                        let gen = *index
                            .get(name.as_str())
                            .ok_or_else(|| Error::UnknownName(name.clone()))?;
                        terms.push(Term { gen, exp: *exp });
                    }
                    out.push(GroupWord::new(terms));
                }
                out
            }
        };
        generators.push(Generator {
            name: g.name.clone(),
            root_perm: g.perm.clone(),
            sections,
        });
    }
    GroupSpec::new(d, generators)
}

fn parse_perm(p: &mut Parser, d: usize) -> Result<Perm> {
    if let Some(Spanned {
        tok: Tok::Ident(name),
        ..
    }) = p.peek()
    {
        if name == "e" {
            p.next();
            return Ok(Perm::identity(d));
        }
    }
    let mut cycles: Vec<Vec<u32>> = Vec::new();
    let mut seen = alloc::vec![false; d];
    let (line, col) = p.here();
    loop {
        match p.peek().map(|t| &t.tok) {
            Some(Tok::LParen) if !p.paren_group_has_comma() => {
                let open = p.expect(&Tok::LParen, "`(`")?;
                let mut cycle = Vec::new();
                while let Some(Spanned { tok: Tok::Int(_), .. }) = p.peek() {
                    let (v, vline, vcol) = p.expect_int("letter")?;
                    if v < 0 || v as usize >= d {
                        return Err(Error::Arity {
                            letter: v.unsigned_abs() as u32,
                            d,
                            line: vline,
                            col: vcol,
                        });
                    }
                    if seen[v as usize] {
                        return Err(syntax(vline, vcol, format!("letter {v} repeated in permutation")));
                    }
                    seen[v as usize] = true;
                    cycle.push(v as u32);
                }
                p.expect(&Tok::RParen, "`)`")?;
                if cycle.len() < 2 {
                    return Err(syntax(open.line, open.col, "a cycle needs at least two letters"));
                }
                cycles.push(cycle);
            }
            _ => break,
        }
    }
    if cycles.is_empty() {
        let (l, c) = p.here();
        return Err(syntax(l, c, "expected `e` or a cycle"));
    }
    Perm::from_cycles(d, &cycles).map_err(|_| syntax(line, col, "invalid permutation"))
}

type RawWord = Vec<(String, i64, u32, u32)>;

fn parse_sections(p: &mut Parser, d: usize) -> Result<Vec<RawWord>> {
    let open = p.expect(&Tok::LParen, "`(`")?;
    let mut words = Vec::new();
    words.push(parse_raw_word(p)?);
    while matches!(p.peek().map(|t| &t.tok), Some(Tok::Comma)) {
        p.next();
        words.push(parse_raw_word(p)?);
    }
    p.expect(&Tok::RParen, "`)` after section words")?;
    if words.len() != d {
        return Err(syntax(
            open.line,
            open.col,
            format!("expected {d} section words, found {}", words.len()),
        ));
    }
    Ok(words)
}

fn parse_raw_word(p: &mut Parser) -> Result<RawWord> {
    if let Some(Spanned { tok: Tok::Int(v), line, col }) = p.peek().cloned() {
        p.next();
        if v != 1 {
            return Err(syntax(line, col, "a word is `1` or a product of terms"));
        }
        return Ok(Vec::new());
    }
    let mut terms = Vec::new();
    loop {
        let (name, line, col) = p.expect_ident("generator name")?;
        let exp = if matches!(p.peek().map(|t| &t.tok), Some(Tok::Caret)) {
            p.next();
            let negative = if matches!(p.peek().map(|t| &t.tok), Some(Tok::Minus)) {
                p.next();
                true
            } else {
                false
            };
            let (v, ..) = p.expect_int("exponent")?;
            if negative {
                -v
            } else {
                v
            }
        } else {
            1
        };
        terms.push((name, exp, line, col));
        if matches!(p.peek().map(|t| &t.tok), Some(Tok::Star)) {
            p.next();
        } else {
            break;
        }
    }
    Ok(terms)
}

pub(super) fn parse_word(spec: &GroupSpec, text: &str) -> Result<GroupWord> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    if p.peek().is_none() {
        return Err(Error::MalformedWord(String::from("empty word")));
    }
    let raw = parse_raw_word(&mut p)?;
    if let Some(t) = p.peek() {
        return Err(Error::MalformedWord(format!(
            "unexpected input at {}:{}",
            t.line, t.col
        )));
    }
    let mut terms = Vec::with_capacity(raw.len());
    for (name, exp, ..) in raw {
        let gen = spec
            .generator_index(&name)
            .ok_or(Error::UnknownGenerator(name))?;
        terms.push(Term { gen, exp });
    }
    Ok(GroupWord::new(terms))
}
