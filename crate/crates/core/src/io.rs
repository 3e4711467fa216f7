//! The `.dfl` text format, DOT export and JSON renderings of reports.
//!
//! ```text
//! # comment
//! facts: insolvent, creditLicense.
//! s5: insolvent => banned.
//! s4: banned => -creditActivity.
//! s4 > s2.
//! ```
//!
//! Arrows are `->` (strict), `=>` (defeasible) and `~>` (defeater). A rule
//! without a label gets the first unused `rN`, counting rules in file order.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use serde::Serialize;
use serde_json::{json, Value};

use crate::argumentation::{Framework, JustificationResult};
use crate::engine::Extension;
use crate::model::{DefeasibleTheory, DependencyGraph, Literal, Rule, RuleKind};
use crate::semantics::NeighborhoodModel;

/// 1-based position of a lexeme.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Colon,
    Comma,
    Dot,
    Minus,
    Gt,
    Arrow(RuleKind),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Arrow(k) => format!("`{}`", k.arrow()),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    span: SourceSpan,
}

fn lex(text: &str, errors: &mut Vec<ParseError>) -> Vec<Token> {
    let mut tokens = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        let start = SourceSpan {
            line,
            column,
            length: 1,
        };
        column += 1;
        let tok = match c {
            '\n' => {
                line += 1;
                column = 1;
                continue;
            }
            c if c.is_whitespace() => continue,
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
                continue;
            }
            ':' => Tok::Colon,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '>' => Tok::Gt,
            '-' | '=' | '~' if chars.peek() == Some(&'>') => {
                chars.next();
                column += 1;
                let kind = match c {
                    '-' => RuleKind::Strict,
                    '=' => RuleKind::Defeasible,
                    _ => RuleKind::Defeater,
                };
                tokens.push(Token {
                    tok: Tok::Arrow(kind),
                    span: SourceSpan { length: 2, ..start },
                });
                continue;
            }
            '-' => Tok::Minus,
            c if c.is_ascii_alphabetic() => {
                let mut ident = c.to_string();
                while let Some(&next) = chars.peek() {
                    if next.is_ascii_alphanumeric() || next == '_' {
                        ident.push(next);
                        chars.next();
                        column += 1;
                    } else {
                        break;
                    }
                }
                let length = ident.len();
                tokens.push(Token {
                    tok: Tok::Ident(ident),
                    span: SourceSpan { length, ..start },
                });
                continue;
            }
            other => {
                errors.push(ParseError {
                    span: start,
                    message: format!("unexpected character `{}`", other.escape_debug()),
                    expected: Vec::new(),
                });
                continue;
            }
        };
        tokens.push(Token { tok, span: start });
    }
    tokens.push(Token {
        tok: Tok::Eof,
        span: SourceSpan {
            line,
            column,
            length: 1,
        },
    });
    tokens
}

enum Stmt {
    Facts(Vec<Literal>),
    Rule {
        label: Option<(String, SourceSpan)>,
        kind: RuleKind,
        body: Vec<Literal>,
        head: Literal,
    },
    Sup(String, String),
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    /// An error at the current token. When that token sits on a later line
    /// than the previous one, the error is placed just after the previous
    /// token, at the end of the unfinished line.
    fn error(&self, expected: &[&str]) -> ParseError {
        let here = self.peek();
        let expected: Vec<String> = expected.iter().map(|s| s.to_string()).collect();
        if self.pos > 0 {
            let prev = &self.tokens[self.pos - 1];
            if prev.span.line < here.span.line || here.tok == Tok::Eof {
                return ParseError {
                    span: SourceSpan {
                        line: prev.span.line,
                        column: prev.span.column + prev.span.length,
                        length: 1,
                    },
                    message: format!(
                        "unexpected {} after `{}`",
                        here.tok.describe(),
                        lexeme(&prev.tok)
                    ),
                    expected,
                };
            }
        }
        ParseError {
            span: here.span,
            message: format!("unexpected {}", here.tok.describe()),
            expected,
        }
    }

    fn expect(&mut self, tok: Tok, name: &str) -> Result<Token, ParseError> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.error(&[name]))
        }
    }

    fn ident(&mut self, name: &str) -> Result<(String, SourceSpan), ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                let span = self.bump().span;
                Ok((s, span))
            }
            _ => Err(self.error(&[name])),
        }
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let negative = self.peek().tok == Tok::Minus;
        if negative {
            self.bump();
        }
        let (atom, _) = self.ident(if negative { "atom" } else { "literal" })?;
        Ok(Literal::new(atom, !negative))
    }

    fn literal_list(&mut self) -> Result<Vec<Literal>, ParseError> {
        let mut lits = vec![self.literal()?];
        while self.peek().tok == Tok::Comma {
            self.bump();
            lits.push(self.literal()?);
        }
        Ok(lits)
    }

    fn rule_tail(&mut self, label: Option<(String, SourceSpan)>) -> Result<Stmt, ParseError> {
        let body = if matches!(self.peek().tok, Tok::Arrow(_)) {
            Vec::new()
        } else {
            self.literal_list()?
        };
        let kind = match self.peek().tok {
            Tok::Arrow(k) => {
                self.bump();
                k
            }
            _ => return Err(self.error(&["`,`", "`->`", "`=>`", "`~>`"])),
        };
        let head = self.literal()?;
        self.expect(Tok::Dot, "`.`")?;
        Ok(Stmt::Rule {
            label,
            kind,
            body,
            head,
        })
    }

    fn statement(&mut self) -> Result<Stmt, ParseError> {
        match (self.peek().tok.clone(), self.peek_at(1).clone()) {
            (Tok::Ident(word), Tok::Colon) if word == "facts" => {
                self.bump();
                self.bump();
                let facts = self.literal_list()?;
                self.expect(Tok::Dot, "`.`")?;
                Ok(Stmt::Facts(facts))
            }
            (Tok::Ident(_), Tok::Colon) => {
                let label = self.ident("label")?;
                self.bump();
                self.rule_tail(Some(label))
            }
            (Tok::Ident(stronger), Tok::Gt) => {
                self.bump();
                self.bump();
                let (weaker, _) = self.ident("label")?;
                self.expect(Tok::Dot, "`.`")?;
                Ok(Stmt::Sup(stronger, weaker))
            }
            (Tok::Ident(_) | Tok::Minus | Tok::Arrow(_), _) => self.rule_tail(None),
            _ => Err(self.error(&["`facts:`", "rule", "superiority"])),
        }
    }

    /// Skips past the next `.`, or up to a token on a later line that starts
    /// a labelled statement, whichever comes first.
    fn recover(&mut self, from_line: usize) {
        loop {
            let t = self.peek();
            match t.tok {
                Tok::Eof => return,
                Tok::Dot => {
                    self.bump();
                    return;
                }
                Tok::Ident(_)
                    if t.span.line > from_line
                        && matches!(self.peek_at(1), Tok::Colon | Tok::Gt) =>
                {
                    return
                }
                _ => {
                    self.bump();
                }
            }
        }
    }
}

fn lexeme(tok: &Tok) -> String {
    match tok {
        Tok::Ident(s) => s.clone(),
        Tok::Colon => ":".into(),
        Tok::Comma => ",".into(),
        Tok::Dot => ".".into(),
        Tok::Minus => "-".into(),
        Tok::Gt => ">".into(),
        Tok::Arrow(k) => k.arrow().into(),
        Tok::Eof => String::new(),
    }
}

/// Parses a theory, collecting every error instead of stopping at the first.
pub fn parse_theory(text: &str) -> Result<DefeasibleTheory, Vec<ParseError>> {
    let mut errors = Vec::new();
    let tokens = lex(text, &mut errors);
    let mut parser = Parser { tokens, pos: 0 };
    let mut stmts = Vec::new();
    while parser.peek().tok != Tok::Eof {
        let start = parser.pos;
        match parser.statement() {
            Ok(s) => stmts.push(s),
            Err(e) => {
                let line = parser.tokens[start].span.line;
                errors.push(e);
                if parser.pos == start {
                    parser.bump();
                }
                parser.recover(line);
            }
        }
    }

    let mut taken: BTreeSet<String> = BTreeSet::new();
    for s in &stmts {
        if let Stmt::Rule {
            label: Some((l, span)),
            ..
        } = s
        {
            if !taken.insert(l.clone()) {
                errors.push(ParseError {
                    span: *span,
                    message: format!("duplicate rule label `{l}`"),
                    expected: Vec::new(),
                });
            }
        }
    }
    if !errors.is_empty() {
        errors.sort_by_key(|e| e.span);
        return Err(errors);
    }

    let mut facts = Vec::new();
    let mut rules = Vec::new();
    let mut superiority = Vec::new();
    let mut position = 0;
    for s in stmts {
        match s {
            Stmt::Facts(f) => facts.extend(f),
            Stmt::Sup(a, b) => superiority.push((a, b)),
            Stmt::Rule {
                label,
                kind,
                body,
                head,
            } => {
                position += 1;
                let label = match label {
                    Some((l, _)) => l,
                    None => {
                        let mut counter = position;
                        while taken.contains(&format!("r{counter}")) {
                            counter += 1;
                        }
                        let l = format!("r{counter}");
                        taken.insert(l.clone());
                        l
                    }
                };
                rules.push(Rule::new(label, kind, body, head));
            }
        }
    }
    Ok(DefeasibleTheory::new(facts, rules, superiority).expect("labels checked for duplicates"))
}

/// Canonical text: facts, then rules by label, then superiority pairs.
pub fn serialize_theory(t: &DefeasibleTheory) -> String {
    let mut out = String::new();
    if !t.facts().is_empty() {
        let facts: Vec<String> = t.facts().iter().map(|l| l.to_string()).collect();
        let _ = writeln!(out, "facts: {}.", facts.join(", "));
    }
    for r in t.rules() {
        let _ = writeln!(out, "{r}.");
    }
    for (a, b) in t.superiority() {
        let _ = writeln!(out, "{a} > {b}.");
    }
    out
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Attack graph; nodes in argument order, edges sorted.
pub fn framework_dot(fw: &Framework) -> String {
    let mut out = String::from("digraph framework {\n");
    for a in fw.arguments() {
        let _ = writeln!(out, "  {} [label={}];", quote(&a.id), quote(&a.to_string()));
    }
    for (a, b) in fw.attacks() {
        let _ = writeln!(
            out,
            "  {} -> {};",
            quote(&fw.get(*a).id),
            quote(&fw.get(*b).id)
        );
    }
    out.push_str("}\n");
    out
}

pub fn dependency_dot(g: &DependencyGraph) -> String {
    let mut out = String::from("digraph dependencies {\n");
    for v in &g.vertices {
        let _ = writeln!(out, "  {};", quote(v));
    }
    for (a, b) in &g.edges {
        let _ = writeln!(out, "  {} -> {};", quote(a), quote(b));
    }
    out.push_str("}\n");
    out
}

fn strings<'a>(lits: impl IntoIterator<Item = &'a Literal>) -> Vec<String> {
    lits.into_iter().map(|l| l.to_string()).collect()
}

pub fn theory_json(t: &DefeasibleTheory) -> Value {
    json!({
        "facts": strings(t.facts()),
        "rules": t.rules().map(|r| json!({
            "label": r.label,
            "kind": r.kind,
            "antecedents": strings(&r.antecedents),
            "consequent": r.consequent.to_string(),
        })).collect::<Vec<_>>(),
        "superiority": t.superiority().iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
    })
}

pub fn extension_json(e: &Extension) -> Value {
    json!({
        "plus_delta": strings(&e.plus_delta),
        "minus_delta": strings(&e.minus_delta),
        "plus_partial": strings(&e.plus_partial),
        "minus_partial": strings(&e.minus_partial),
    })
}

pub fn framework_json(fw: &Framework) -> Value {
    json!({
        "arguments": fw.arguments().iter().map(|a| json!({
            "id": a.id,
            "conclusion": a.conclusion.to_string(),
            "top_rule": a.top_rule(),
            "subarguments": a.direct_subarguments().iter().map(|s| &fw.get(*s).id).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "attacks": fw.attacks().iter().map(|(a, b)| json!([fw.get(*a).id, fw.get(*b).id])).collect::<Vec<_>>(),
    })
}

pub fn justification_json(fw: &Framework, j: &JustificationResult) -> Value {
    let names = |ids: &BTreeSet<_>| {
        ids.iter()
            .map(|i| fw.get(*i).id.clone())
            .collect::<Vec<_>>()
    };
    json!({
        "justified": names(&j.justified),
        "rejected": names(&j.rejected),
        "justified_conclusions": strings(&j.justified_conclusions),
    })
}

/// Worlds as sorted literal arrays; neighbourhoods as arrays of indices
/// into the world list.
pub fn model_json(m: &NeighborhoodModel) -> Value {
    let worlds: Vec<_> = m.worlds().collect();
    let index = |mask: usize| worlds.binary_search_by_key(&mask, |w| w.0 as usize).ok();
    json!({
        "universe": strings(m.universe()),
        "worlds": worlds.iter().map(|w| strings(&m.world_literals(*w))).collect::<Vec<_>>(),
        "neighborhoods": worlds.iter().map(|w| {
            m.neighborhood(*w)
                .map(|y| y.ones().filter_map(index).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        }).collect::<Vec<_>>(),
    })
}
