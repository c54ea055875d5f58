//! Line-based text formats.
//!
//! Curve graphs:
//!
//! ```text
//! graph <name> [s0=<p>/<q>]
//! vertex <id> type=node m=<int> pair=<int>,<int> genus=<int> [switches=<int>{,<int>}]
//! vertex <id> type=arrow m=<int>
//! edge <id> <v1> <v2> sign=<+|-> [count=<int>] [attach=<int>,<int>]
//! ```
//!
//! Plumbing graphs use `pvertex <id> euler=<int> genus=<int>` and
//! `pedge <v1> <v2> sign=<+|->`. In both, `#` starts a comment.
//! Emitted records are sorted by id so output is byte-stable.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use num_rational::Rational64;

use crate::covering::CoveredGraph;
use crate::curvegraph::{CurveEdge, CurveGraph, CurveVertex, DivisorMult, Sign, VertexKind};
use crate::plumbing::{PlumbError, PlumbGraph};
use crate::resolution::{MultGraph, MultVertexKind};

/// A message tied to a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub diagnostics: Vec<Diagnostic>,
}

impl ParseError {
    fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            diagnostics: vec![Diagnostic {
                line,
                column,
                message: message.into(),
            }],
        }
    }

    pub fn first(&self) -> &Diagnostic {
        &self.diagnostics[0]
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.diagnostics.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

/// A whitespace-separated token with its 1-based column.
#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let content = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, ch) in content.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                tokens.push(Token {
                    text: &content[s..i],
                    column: s + 1,
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        tokens.push(Token {
            text: &content[s..],
            column: s + 1,
        });
    }
    tokens
}

/// `key=value` attributes of one record, consumed as they are read.
struct Attrs<'a> {
    line: usize,
    end_column: usize,
    values: BTreeMap<&'a str, Token<'a>>,
}

impl<'a> Attrs<'a> {
    fn parse(line: usize, tokens: &[Token<'a>], end_column: usize) -> Result<Self, ParseError> {
        let mut values = BTreeMap::new();
        for tok in tokens {
            let Some((key, value)) = tok.text.split_once('=') else {
                return Err(ParseError::at(
                    line,
                    tok.column,
                    format!("expected key=value, found `{}`", tok.text),
                ));
            };
            let value = Token {
                text: value,
                column: tok.column + key.len() + 1,
            };
            if values.insert(key, value).is_some() {
                return Err(ParseError::at(
                    line,
                    tok.column,
                    format!("duplicate key `{key}`"),
                ));
            }
        }
        Ok(Attrs {
            line,
            end_column,
            values,
        })
    }

    fn take(&mut self, key: &str) -> Option<Token<'a>> {
        self.values.remove(key)
    }

    fn require(&mut self, key: &str) -> Result<Token<'a>, ParseError> {
        self.take(key)
            .ok_or_else(|| ParseError::at(self.line, self.end_column, format!("missing `{key}=`")))
    }

    fn finish(self) -> Result<(), ParseError> {
        match self.values.iter().next() {
            Some((key, tok)) => Err(ParseError::at(
                self.line,
                tok.column - key.len() - 1,
                format!("unknown key `{key}`"),
            )),
            None => Ok(()),
        }
    }
}

fn int(line: usize, tok: Token<'_>) -> Result<i64, ParseError> {
    tok.text.parse().map_err(|_| {
        ParseError::at(
            line,
            tok.column,
            format!("malformed integer `{}`", tok.text),
        )
    })
}

fn int_list(line: usize, tok: Token<'_>) -> Result<Vec<i64>, ParseError> {
    let mut out = Vec::new();
    let mut column = tok.column;
    for part in tok.text.split(',') {
        out.push(int(line, Token { text: part, column })?);
        column += part.len() + 1;
    }
    Ok(out)
}

fn int_pair(line: usize, tok: Token<'_>) -> Result<(i64, i64), ParseError> {
    match int_list(line, tok)?.as_slice() {
        &[a, b] => Ok((a, b)),
        _ => Err(ParseError::at(
            line,
            tok.column,
            format!("expected <int>,<int>, found `{}`", tok.text),
        )),
    }
}

fn sign(line: usize, tok: Token<'_>) -> Result<Sign, ParseError> {
    match tok.text {
        "+" => Ok(Sign::Plus),
        "-" => Ok(Sign::Minus),
        other => Err(ParseError::at(
            line,
            tok.column,
            format!("sign must be + or -, found `{other}`"),
        )),
    }
}

fn rational(line: usize, tok: Token<'_>) -> Result<Rational64, ParseError> {
    let bad = || {
        ParseError::at(
            line,
            tok.column,
            format!("expected <int>/<int>, found `{}`", tok.text),
        )
    };
    let (p, q) = tok.text.split_once('/').ok_or_else(bad)?;
    let p: i64 = p.parse().map_err(|_| bad())?;
    let q: i64 = q.parse().map_err(|_| bad())?;
    if q <= 0 {
        return Err(ParseError::at(
            line,
            tok.column,
            "s0 denominator must be positive",
        ));
    }
    Ok(Rational64::new(p, q))
}

fn positional<'a>(
    line: usize,
    tokens: &[Token<'a>],
    i: usize,
    what: &str,
    end: usize,
) -> Result<Token<'a>, ParseError> {
    match tokens.get(i) {
        Some(t) if !t.text.contains('=') => Ok(*t),
        Some(t) => Err(ParseError::at(
            line,
            t.column,
            format!("expected {what}, found `{}`", t.text),
        )),
        None => Err(ParseError::at(line, end, format!("missing {what}"))),
    }
}

/// Where each vertex and edge was declared.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceMap {
    pub graph_line: usize,
    pub lines: HashMap<String, usize>,
}

impl SourceMap {
    pub fn line_of(&self, id: &str) -> usize {
        self.lines.get(id).copied().unwrap_or(self.graph_line)
    }
}

/// Parses a curve graph without checking decoration consistency.
pub fn parse_curve_document(text: &str) -> Result<(CurveGraph, SourceMap), ParseError> {
    let mut graph: Option<CurveGraph> = None;
    let mut map = SourceMap::default();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let tokens = tokenize(raw);
        let Some(head) = tokens.first() else { continue };
        let end = raw.trim_end().len() + 1;
        match head.text {
            "graph" => {
                if graph.is_some() {
                    return Err(ParseError::at(
                        line,
                        head.column,
                        "duplicate `graph` header",
                    ));
                }
                let name = positional(line, &tokens, 1, "graph name", end)?;
                let mut attrs = Attrs::parse(line, &tokens[2..], end)?;
                let mut g = CurveGraph::new(name.text);
                if let Some(tok) = attrs.take("s0") {
                    g.newton_slope_bound = Some(rational(line, tok)?);
                }
                attrs.finish()?;
                map.graph_line = line;
                graph = Some(g);
            }
            // the slope bound may also sit on its own line, before any record
            text if text.starts_with("s0=") => {
                let Some(g) = graph.as_mut().filter(|_| map.lines.is_empty()) else {
                    return Err(ParseError::at(
                        line,
                        head.column,
                        "`s0=` belongs in the header",
                    ));
                };
                if g.newton_slope_bound.is_some() {
                    return Err(ParseError::at(line, head.column, "duplicate key `s0`"));
                }
                let mut attrs = Attrs::parse(line, &tokens, end)?;
                let tok = attrs.require("s0")?;
                g.newton_slope_bound = Some(rational(line, tok)?);
                attrs.finish()?;
            }
            "vertex" | "edge" => {
                let Some(g) = graph.as_mut() else {
                    return Err(ParseError::at(
                        line,
                        head.column,
                        "record before `graph` header",
                    ));
                };
                let id = positional(line, &tokens, 1, "id", end)?;
                if map.lines.contains_key(id.text) {
                    return Err(ParseError::at(
                        line,
                        id.column,
                        format!("duplicate id `{}`", id.text),
                    ));
                }
                if head.text == "vertex" {
                    g.add_vertex(parse_vertex(line, id.text, &tokens[2..], end)?)
                        .expect("ids checked above");
                } else {
                    let a = positional(line, &tokens, 2, "first endpoint", end)?;
                    let b = positional(line, &tokens, 3, "second endpoint", end)?;
                    for v in [a, b] {
                        if !g.vertices.contains_key(v.text) {
                            return Err(ParseError::at(
                                line,
                                v.column,
                                format!("unknown vertex `{}`", v.text),
                            ));
                        }
                    }
                    let mut attrs = Attrs::parse(line, &tokens[4..], end)?;
                    let mut e = CurveEdge::new(
                        id.text,
                        a.text,
                        b.text,
                        sign(line, attrs.require("sign")?)?,
                    );
                    if let Some(tok) = attrs.take("count") {
                        e.count = int(line, tok)?;
                    }
                    if let Some(tok) = attrs.take("attach") {
                        e.attach = int_pair(line, tok)?;
                    }
                    attrs.finish()?;
                    g.add_edge(e).expect("ids and endpoints checked above");
                }
                map.lines.insert(id.text.to_string(), line);
            }
            other => {
                return Err(ParseError::at(
                    line,
                    head.column,
                    format!("unknown record `{other}`"),
                ));
            }
        }
    }
    let graph = graph.ok_or_else(|| ParseError::at(1, 1, "missing `graph` header"))?;
    Ok((graph, map))
}

fn parse_vertex(
    line: usize,
    id: &str,
    tokens: &[Token<'_>],
    end: usize,
) -> Result<CurveVertex, ParseError> {
    let mut attrs = Attrs::parse(line, tokens, end)?;
    let kind = attrs.require("type")?;
    let mf = int(line, attrs.require("m")?)?;
    let vertex = match kind.text {
        "node" => {
            let (m, n) = int_pair(line, attrs.require("pair")?)?;
            let genus = int(line, attrs.require("genus")?)?;
            let switches = match attrs.take("switches") {
                Some(tok) => int_list(line, tok)?,
                None => Vec::new(),
            };
            CurveVertex::node(id, mf, m, n, genus).with_switches(switches)
        }
        "arrow" => CurveVertex::arrowhead(id, mf),
        other => {
            return Err(ParseError::at(
                line,
                kind.column,
                format!("type must be node or arrow, found `{other}`"),
            ));
        }
    };
    attrs.finish()?;
    Ok(vertex)
}

/// Parses and validates a curve graph; every validation error is reported
/// at the line of the record it concerns.
pub fn parse_curve_graph(text: &str) -> Result<CurveGraph, ParseError> {
    let (graph, map) = parse_curve_document(text)?;
    let report = graph.validate();
    let diagnostics: Vec<_> = report
        .errors()
        .map(|issue| Diagnostic {
            line: map.line_of(&issue.subject),
            column: 1,
            message: issue.to_string(),
        })
        .collect();
    if diagnostics.is_empty() {
        Ok(graph)
    } else {
        Err(ParseError { diagnostics })
    }
}

fn write_pair(out: &mut String, pair: DivisorMult) {
    let _ = write!(out, "{},{}", pair.m, pair.n);
}

pub fn emit_curve_graph(g: &CurveGraph) -> String {
    let mut out = String::new();
    let _ = write!(out, "graph {}", g.name);
    if let Some(s0) = g.newton_slope_bound {
        let _ = write!(out, " s0={}/{}", s0.numer(), s0.denom());
    }
    out.push('\n');
    for v in g.vertices.values() {
        match v.kind {
            VertexKind::Node => {
                let _ = write!(out, "vertex {} type=node m={} pair=", v.id, v.mf);
                write_pair(&mut out, v.pair);
                let _ = write!(out, " genus={}", v.genus);
                if !v.switches.is_empty() {
                    let list: Vec<_> = v.switches.iter().map(i64::to_string).collect();
                    let _ = write!(out, " switches={}", list.join(","));
                }
            }
            VertexKind::Arrowhead => {
                let _ = write!(out, "vertex {} type=arrow m={}", v.id, v.mf);
            }
        }
        out.push('\n');
    }
    for e in g.edges.values() {
        let _ = write!(
            out,
            "edge {} {} {} sign={}",
            e.id, e.endpoints.0, e.endpoints.1, e.sign
        );
        if e.count != 1 {
            let _ = write!(out, " count={}", e.count);
        }
        if e.attach != (0, 0) {
            let _ = write!(out, " attach={},{}", e.attach.0, e.attach.1);
        }
        out.push('\n');
    }
    out
}

/// Parses the `pvertex`/`pedge` grammar.
pub fn parse_plumb_graph(text: &str) -> Result<PlumbGraph, ParseError> {
    let mut pg = PlumbGraph::default();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let tokens = tokenize(raw);
        let Some(head) = tokens.first() else { continue };
        let end = raw.trim_end().len() + 1;
        match head.text {
            "pvertex" => {
                let id = positional(line, &tokens, 1, "id", end)?;
                if pg.vertices.contains_key(id.text) {
                    return Err(ParseError::at(
                        line,
                        id.column,
                        format!("duplicate id `{}`", id.text),
                    ));
                }
                let mut attrs = Attrs::parse(line, &tokens[2..], end)?;
                let euler = int(line, attrs.require("euler")?)?;
                let genus_tok = attrs.require("genus")?;
                let genus = int(line, genus_tok)?;
                attrs.finish()?;
                pg.add_vertex(id.text, euler, genus)
                    .map_err(|e| ParseError::at(line, genus_tok.column, e.to_string()))?;
            }
            "pedge" => {
                let a = positional(line, &tokens, 1, "first endpoint", end)?;
                let b = positional(line, &tokens, 2, "second endpoint", end)?;
                let mut attrs = Attrs::parse(line, &tokens[3..], end)?;
                let s = sign(line, attrs.require("sign")?)?;
                attrs.finish()?;
                pg.add_edge(a.text, b.text, s).map_err(|e| {
                    let column = match &e {
                        PlumbError::UnknownVertex(v) if v == b.text && v != a.text => b.column,
                        _ => a.column,
                    };
                    ParseError::at(line, column, e.to_string())
                })?;
            }
            other => {
                return Err(ParseError::at(
                    line,
                    head.column,
                    format!("unknown record `{other}`"),
                ));
            }
        }
    }
    Ok(pg)
}

pub fn emit_plumb_graph(pg: &PlumbGraph) -> String {
    let mut out = String::new();
    for v in pg.vertices.values() {
        let _ = writeln!(out, "pvertex {} euler={} genus={}", v.id, v.euler, v.genus);
    }
    for e in &pg.edges {
        let _ = writeln!(out, "pedge {} {} sign={}", e.a, e.b, e.sign);
    }
    out
}

pub fn emit_covered_graph(cg: &CoveredGraph) -> String {
    let mut out = String::new();
    for v in cg.vertices.values() {
        let _ = write!(out, "cvertex {} base={} index={}", v.id, v.base, v.index);
        match v.kind {
            VertexKind::Node => {
                let _ = write!(
                    out,
                    " type=node m={} pair={},{} euler={}",
                    v.mf,
                    v.pair.m,
                    v.pair.n,
                    v.euler.unwrap_or_default()
                );
            }
            VertexKind::Arrowhead => {
                let _ = write!(out, " type=arrow m={}", v.mf);
            }
        }
        out.push('\n');
    }
    for e in &cg.edges {
        let _ = writeln!(
            out,
            "cedge {} {} {} sign={} base={} index={}",
            e.id, e.endpoints.0, e.endpoints.1, e.sign, e.base, e.index
        );
    }
    out
}

pub fn emit_mult_graph(mg: &MultGraph) -> String {
    let mut out = String::new();
    for v in mg.vertices.values() {
        match v.kind {
            MultVertexKind::Curve => {
                let _ = writeln!(
                    out,
                    "mvertex {} kind=curve mult={} genus={}",
                    v.id, v.mult, v.genus
                );
            }
            MultVertexKind::String => {
                let _ = writeln!(
                    out,
                    "mvertex {} kind=string mult={} genus=0 k={}",
                    v.id,
                    v.mult,
                    -v.selfint_raw.unwrap_or_default()
                );
            }
            MultVertexKind::Arrowhead => {
                let _ = writeln!(out, "mvertex {} kind=arrow mult={}", v.id, v.mult);
            }
        }
    }
    for e in &mg.edges {
        let _ = writeln!(out, "medge {} {} sign={}", e.ends.0, e.ends.1, e.sign);
    }
    out
}

/// Which grammar a document is written in, judged by its first record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocumentKind {
    Curve,
    Plumb,
}

pub fn detect_kind(text: &str) -> Option<DocumentKind> {
    text.lines()
        .find_map(|raw| match tokenize(raw).first()?.text {
            "graph" | "vertex" | "edge" => Some(DocumentKind::Curve),
            "pvertex" | "pedge" => Some(DocumentKind::Plumb),
            _ => None,
        })
}
