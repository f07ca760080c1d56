//! Reader for Edinburgh-syntax clauses and terms.
//!
//! Operator-precedence parsing over the fixed table in [`crate::ops`].
//! Variables are numbered from zero in order of first appearance, separately
//! for each clause (or for the single term read by [`parse_term`]).

use std::collections::HashMap;

use crate::error::EngineError;
use crate::ops::{self, Assoc, PrefixAssoc};
use crate::term::{Term, VarId};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Name(String),
    /// Quoted atoms never act as operators or functional-notation heads
    /// differently from names, but they are never negative-number prefixes.
    Quoted(String),
    Var(String),
    Int(i64),
    Punct(&'static str),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
    /// Whitespace or a comment precedes this token.
    layout_before: bool,
}

struct Lexer<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
    line: usize,
    column: usize,
}

fn is_symbol_char(c: char) -> bool {
    "+-*/\\^<>=~:.?@#&$".contains(c)
}

fn is_alnum(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            chars: src.char_indices().collect(),
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.chars.get(self.pos + n).map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, line: usize, column: usize, message: impl Into<String>) -> EngineError {
        syntax_error(self.src, line, column, message)
    }

    /// Skips layout; returns whether anything was skipped.
    fn skip_layout(&mut self) -> Result<bool, EngineError> {
        let mut skipped = false;
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                    skipped = true;
                }
                Some('%') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                    skipped = true;
                }
                Some('/') if self.peek_at(1) == Some('*') => {
                    let (line, column) = (self.line, self.column);
                    self.bump();
                    self.bump();
                    loop {
                        match self.bump() {
                            Some('*') if self.peek() == Some('/') => {
                                self.bump();
                                break;
                            }
                            Some(_) => {}
                            None => return Err(self.error(line, column, "unterminated block comment")),
                        }
                    }
                    skipped = true;
                }
                _ => return Ok(skipped),
            }
        }
    }

    fn next_token(&mut self) -> Result<Option<Token>, EngineError> {
        let layout_before = self.skip_layout()?;
        let (line, column) = (self.line, self.column);
        let Some(c) = self.peek() else {
            return Ok(None);
        };
        let mk = |tok| Token {
            tok,
            line,
            column,
            layout_before,
        };
        if c.is_ascii_digit() {
            let mut text = String::new();
            while let Some(d) = self.peek().filter(|d| d.is_ascii_digit()) {
                text.push(d);
                self.bump();
            }
            let value = text
                .parse::<i64>()
                .map_err(|_| self.error(line, column, format!("integer literal {text} out of range")))?;
            return Ok(Some(mk(Tok::Int(value))));
        }
        if c == '_' || c.is_uppercase() {
            let mut text = String::new();
            while let Some(d) = self.peek().filter(|&d| is_alnum(d)) {
                text.push(d);
                self.bump();
            }
            return Ok(Some(mk(Tok::Var(text))));
        }
        if c.is_alphabetic() {
            let mut text = String::new();
            while let Some(d) = self.peek().filter(|&d| is_alnum(d)) {
                text.push(d);
                self.bump();
            }
            return Ok(Some(mk(Tok::Name(text))));
        }
        if c == '\'' {
            self.bump();
            let mut text = String::new();
            loop {
                match self.bump() {
                    None => return Err(self.error(line, column, "unterminated quoted atom")),
                    Some('\'') if self.peek() == Some('\'') => {
                        self.bump();
                        text.push('\'');
                    }
                    Some('\'') => break,
                    Some('\\') => match self.bump() {
                        Some('n') => text.push('\n'),
                        Some('t') => text.push('\t'),
                        Some('\\') => text.push('\\'),
                        Some('\'') => text.push('\''),
                        Some(other) => {
                            return Err(self.error(
                                self.line,
                                self.column,
                                format!("unknown escape \\{other}"),
                            ))
                        }
                        None => return Err(self.error(line, column, "unterminated quoted atom")),
                    },
                    Some(ch) => text.push(ch),
                }
            }
            return Ok(Some(mk(Tok::Quoted(text))));
        }
        match c {
            '(' | ')' | '[' | ']' | ',' | '|' => {
                self.bump();
                let p = match c {
                    '(' => "(",
                    ')' => ")",
                    '[' => "[",
                    ']' => "]",
                    ',' => ",",
                    _ => "|",
                };
                return Ok(Some(mk(Tok::Punct(p))));
            }
            '!' | ';' => {
                self.bump();
                return Ok(Some(mk(Tok::Name(c.to_string()))));
            }
            _ => {}
        }
        if c == '.' {
            let next = self.peek_at(1);
            if next.is_none_or(|n| n.is_whitespace() || n == '%') {
                self.bump();
                return Ok(Some(mk(Tok::End)));
            }
        }
        if is_symbol_char(c) {
            let mut text = String::new();
            while let Some(d) = self.peek().filter(|&d| is_symbol_char(d)) {
                text.push(d);
                self.bump();
            }
            return Ok(Some(mk(Tok::Name(text))));
        }
        Err(self.error(line, column, format!("unexpected character {c:?}")))
    }
}

pub(crate) fn syntax_error(src: &str, line: usize, column: usize, message: impl Into<String>) -> EngineError {
    let excerpt = src
        .lines()
        .nth(line.saturating_sub(1))
        .unwrap_or("")
        .trim_end()
        .to_string();
    EngineError::Syntax {
        line,
        column,
        message: message.into(),
        excerpt,
    }
}

/// A term read from text together with its variable names.
#[derive(Clone, Debug)]
pub struct ParsedTerm {
    pub term: Term,
    /// Named (non-anonymous) variables in first-appearance order.
    pub var_names: Vec<(String, VarId)>,
    /// Total number of distinct variables, anonymous ones included.
    pub var_count: u32,
}

/// A clause as read from source, before it is stored in a knowledge base.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedClause {
    pub head: Term,
    pub body: Term,
    pub var_count: u32,
    /// 1-based source line of the clause's first token.
    pub line: usize,
}

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<Token>,
    pos: usize,
    vars: HashMap<String, VarId>,
    var_names: Vec<(String, VarId)>,
    var_count: u32,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_tok(&self) -> Option<&Tok> {
        self.peek().map(|t| &t.tok)
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, message: impl Into<String>) -> EngineError {
        match self.peek() {
            Some(t) => syntax_error(self.src, t.line, t.column, message),
            None => {
                let (line, column) = end_position(self.src);
                syntax_error(self.src, line, column, message)
            }
        }
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), EngineError> {
        match self.peek_tok() {
            Some(Tok::Punct(q)) if *q == p => {
                self.advance();
                Ok(())
            }
            Some(_) => Err(self.err_here(format!("expected `{p}`"))),
            None => Err(self.err_here(format!("unexpected end of input, expected `{p}`"))),
        }
    }

    fn fresh_var(&mut self) -> Term {
        let id = VarId(self.var_count);
        self.var_count += 1;
        Term::Var(id)
    }

    fn named_var(&mut self, name: String) -> Term {
        if name == "_" {
            return self.fresh_var();
        }
        if let Some(id) = self.vars.get(&name) {
            return Term::Var(*id);
        }
        let id = VarId(self.var_count);
        self.var_count += 1;
        self.vars.insert(name.clone(), id);
        self.var_names.push((name, id));
        Term::Var(id)
    }

    fn reset_vars(&mut self) {
        self.vars.clear();
        self.var_names.clear();
        self.var_count = 0;
    }

    /// True when the next token can begin a term (used to decide whether a
    /// prefix operator is applied or stands as an atom).
    fn starts_term(&self) -> bool {
        match self.peek() {
            None => false,
            Some(t) => match &t.tok {
                Tok::End => false,
                Tok::Punct(p) => matches!(*p, "(" | "["),
                Tok::Name(n) => {
                    // an infix operator right after a prefix operator means the
                    // prefix operator is an operand, e.g. `- = x`
                    !(ops::infix(n).is_some() && ops::prefix(n).is_none())
                        || self.tokens.get(self.pos + 1).is_some_and(|n2| {
                            matches!(n2.tok, Tok::Punct("(")) && !n2.layout_before
                        })
                }
                _ => true,
            },
        }
    }

    fn parse(&mut self, max_prec: u32) -> Result<Term, EngineError> {
        let (mut left, mut left_prec) = self.parse_primary(max_prec)?;
        loop {
            let name = match self.peek_tok() {
                Some(Tok::Name(n)) => n.clone(),
                Some(Tok::Punct(",")) => ",".to_string(),
                Some(Tok::Punct("|")) => "|".to_string(),
                _ => break,
            };
            let Some((p, assoc)) = ops::infix(&name) else {
                break;
            };
            if p > max_prec {
                break;
            }
            let (lmax, rmax) = match assoc {
                Assoc::Xfx => (p - 1, p - 1),
                Assoc::Xfy => (p - 1, p),
                Assoc::Yfx => (p, p - 1),
            };
            if left_prec > lmax {
                break;
            }
            self.advance();
            let right = self.parse(rmax)?;
            let functor = if name == "|" { ";" } else { name.as_str() };
            left = Term::compound(functor, vec![left, right]);
            left_prec = p;
        }
        Ok(left)
    }

    fn parse_arglist(&mut self) -> Result<Vec<Term>, EngineError> {
        self.expect_punct("(")?;
        let mut args = vec![self.parse(999)?];
        loop {
            match self.peek_tok() {
                Some(Tok::Punct(",")) => {
                    self.advance();
                    args.push(self.parse(999)?);
                }
                Some(Tok::Punct(")")) => {
                    self.advance();
                    return Ok(args);
                }
                Some(_) => return Err(self.err_here("expected `,` or `)` in argument list")),
                None => return Err(self.err_here("unexpected end of input in argument list")),
            }
        }
    }

    fn parse_list(&mut self) -> Result<Term, EngineError> {
        // `[` already consumed
        if let Some(Tok::Punct("]")) = self.peek_tok() {
            self.advance();
            return Ok(Term::nil());
        }
        let mut items = vec![self.parse(999)?];
        loop {
            match self.peek_tok() {
                Some(Tok::Punct(",")) => {
                    self.advance();
                    items.push(self.parse(999)?);
                }
                Some(Tok::Punct("|")) => {
                    self.advance();
                    let tail = self.parse(999)?;
                    self.expect_punct("]")?;
                    return Ok(Term::list_with_tail(items, tail));
                }
                Some(Tok::Punct("]")) => {
                    self.advance();
                    return Ok(Term::list(items));
                }
                Some(_) => return Err(self.err_here("expected `,`, `|` or `]` in list")),
                None => return Err(self.err_here("unexpected end of input in list")),
            }
        }
    }

    fn next_is_open_paren(&self, allow_layout: bool) -> bool {
        matches!(self.peek(), Some(t) if t.tok == Tok::Punct("(") && (allow_layout || !t.layout_before))
    }

    fn parse_primary(&mut self, max_prec: u32) -> Result<(Term, u32), EngineError> {
        let Some(token) = self.advance() else {
            return Err(self.err_here("unexpected end of input"));
        };
        match token.tok {
            Tok::Int(i) => Ok((Term::Int(i), 0)),
            Tok::Var(name) => Ok((self.named_var(name), 0)),
            Tok::Punct("(") => {
                let t = self.parse(1200)?;
                self.expect_punct(")")?;
                Ok((t, 0))
            }
            Tok::Punct("[") => Ok((self.parse_list()?, 0)),
            Tok::Quoted(name) => {
                if self.next_is_open_paren(false) {
                    let args = self.parse_arglist()?;
                    return Ok((Term::compound(&name, args), 0));
                }
                Ok((Term::atom(&name), 0))
            }
            Tok::Name(name) => {
                // functional notation; a layout gap is tolerated for
                // non-operator names so `do_reasoning ( B )` reads as a call
                if self.next_is_open_paren(!ops::is_op(&name)) {
                    let args = self.parse_arglist()?;
                    return Ok((Term::compound(&name, args), 0));
                }
                if name == "-" {
                    if let Some(Token {
                        tok: Tok::Int(i),
                        layout_before: false,
                        ..
                    }) = self.peek()
                    {
                        let value = -*i;
                        self.advance();
                        return Ok((Term::Int(value), 0));
                    }
                }
                if let Some((p, assoc)) = ops::prefix(&name) {
                    if self.starts_term() {
                        let (p, argmax) = if p > max_prec {
                            (999, 999)
                        } else {
                            (
                                p,
                                match assoc {
                                    PrefixAssoc::Fy => p,
                                    PrefixAssoc::Fx => p - 1,
                                },
                            )
                        };
                        let arg = self.parse(argmax)?;
                        return Ok((Term::compound(&name, vec![arg]), p));
                    }
                }
                let prec = ops::infix(&name)
                    .map(|(p, _)| p)
                    .into_iter()
                    .chain(ops::prefix(&name).map(|(p, _)| p))
                    .max()
                    .unwrap_or(0);
                Ok((Term::atom(&name), if prec > max_prec { 0 } else { prec }))
            }
            Tok::Punct(p) => Err(syntax_error(
                self.src,
                token.line,
                token.column,
                format!("unexpected `{p}`"),
            )),
            Tok::End => Err(syntax_error(
                self.src,
                token.line,
                token.column,
                "unexpected end of clause",
            )),
        }
    }
}

fn end_position(src: &str) -> (usize, usize) {
    let line = src.lines().count().max(1);
    let column = src.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1);
    (line, column)
}

fn tokenize(src: &str) -> Result<Vec<Token>, EngineError> {
    let mut lexer = Lexer::new(src);
    let mut tokens = Vec::new();
    while let Some(t) = lexer.next_token()? {
        tokens.push(t);
    }
    Ok(tokens)
}

/// Reads every clause in `src`, in source order.
pub fn parse_program(src: &str) -> Result<Vec<ParsedClause>, EngineError> {
    let tokens = tokenize(src)?;
    let mut parser = Parser {
        src,
        tokens,
        pos: 0,
        vars: HashMap::new(),
        var_names: Vec::new(),
        var_count: 0,
    };
    let mut clauses = Vec::new();
    while let Some(first) = parser.peek().cloned() {
        parser.reset_vars();
        let term = parser.parse(1200)?;
        match parser.peek_tok() {
            Some(Tok::End) => {
                parser.advance();
            }
            Some(_) => return Err(parser.err_here("operator expected")),
            None => return Err(parser.err_here("unexpected end of input, clause not terminated by `.`")),
        }
        let (head, body) = split_clause(term)
            .map_err(|m| syntax_error(src, first.line, first.column, m))?;
        clauses.push(ParsedClause {
            head,
            body,
            var_count: parser.var_count,
            line: first.line,
        });
    }
    Ok(clauses)
}

fn split_clause(term: Term) -> Result<(Term, Term), String> {
    let (head, body) = if term.is_functor(":-", 2) {
        let args = term.args();
        (args[0].clone(), args[1].clone())
    } else if term.is_functor(":-", 1) {
        return Err("directives are not supported".into());
    } else {
        (term, Term::atom("true"))
    };
    match &head {
        Term::Atom(_) | Term::Compound(_) => {}
        Term::Var(_) => return Err("clause head is a variable".into()),
        Term::Int(_) => return Err("clause head is not callable".into()),
    }
    if matches!(body, Term::Int(_)) {
        return Err("clause body is not callable".into());
    }
    Ok((head, body))
}

/// Reads a single term. A terminating `.` is optional.
pub fn parse_term(src: &str) -> Result<ParsedTerm, EngineError> {
    let tokens = tokenize(src)?;
    let mut parser = Parser {
        src,
        tokens,
        pos: 0,
        vars: HashMap::new(),
        var_names: Vec::new(),
        var_count: 0,
    };
    let term = parser.parse(1200)?;
    match parser.peek_tok() {
        None => {}
        Some(Tok::End) if parser.pos + 1 == parser.tokens.len() => {}
        Some(_) => return Err(parser.err_here("operator expected")),
    }
    Ok(ParsedTerm {
        term,
        var_names: parser.var_names,
        var_count: parser.var_count,
    })
}
