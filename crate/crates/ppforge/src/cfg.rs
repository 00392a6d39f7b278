//! Control-flow graph model: ingestion from edge-list JSON or a DOT subset,
//! well-formedness diagnostics, out-degree normalization and the CSR arrays
//! the vertex workers traverse.

use crate::graph::Graph;
use crate::path::{Path, VertexId};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::HashMap;
use std::fmt;

#[derive(Clone, Debug)]
pub struct VertexInfo {
    pub name: String,
    /// Set for intermediate vertices introduced by out-degree normalization.
    /// Reports erase these so user-facing paths match the source CFG.
    pub synthetic: bool,
}

/// A directed graph with designated Start and End vertices. Vertex ids are
/// dense and stable: parsing assigns them in declaration order and
/// normalization appends synthetics without renumbering.
#[derive(Clone, Debug)]
pub struct Cfg {
    pub vertices: Vec<VertexInfo>,
    pub graph: Graph,
    pub start: VertexId,
    pub end: VertexId,
}

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("invalid JSON at line {line}, column {col}: {message}")]
    Json { line: usize, col: usize, message: String },
    #[error("no start vertex declared")]
    MissingStart,
    #[error("more than one start vertex declared")]
    MultipleStart,
    #[error("no end vertex declared")]
    MissingEnd,
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    #[error("arc endpoint {0:?} is not a declared vertex")]
    DanglingEndpoint(String),
    #[error("duplicate arc {from:?} -> {to:?}")]
    DuplicateArc { from: String, to: String },
    #[error("start or end name {0:?} is not a declared vertex")]
    UnknownMarker(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfgFormat {
    EdgeListJson,
    DotSubset,
}

/// Guess the input format: DOT files open with a `digraph` header.
pub fn sniff_format(text: &str) -> CfgFormat {
    let trimmed = text.trim_start();
    if trimmed.starts_with("digraph") || trimmed.starts_with("strict") {
        CfgFormat::DotSubset
    } else {
        CfgFormat::EdgeListJson
    }
}

#[derive(Serialize, Deserialize)]
struct CfgFile {
    vertices: Vec<VertexDecl>,
    arcs: Vec<(String, String)>,
    start: String,
    ends: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct VertexDecl {
    id: String,
}

pub fn parse_cfg(text: &str, format: CfgFormat) -> Result<Cfg, ParseError> {
    match format {
        CfgFormat::EdgeListJson => parse_json(text),
        CfgFormat::DotSubset => parse_dot(text),
    }
}

impl Cfg {
    /// Build a graph programmatically; same semantics as parsing an edge
    /// list with the given markers, including multi-end merging.
    pub fn from_parts(
        names: &[&str],
        arcs: &[(&str, &str)],
        start: &str,
        ends: &[&str],
    ) -> Result<Cfg, ParseError> {
        assemble(
            names.iter().map(|s| s.to_string()).collect(),
            arcs.iter().map(|&(a, b)| (a.to_string(), b.to_string())).collect(),
            Some(start.to_string()),
            ends.iter().map(|s| s.to_string()).collect(),
        )
    }
}

fn parse_json(text: &str) -> Result<Cfg, ParseError> {
    let file: CfgFile = serde_json::from_str(text).map_err(|e| ParseError::Json {
        line: e.line(),
        col: e.column(),
        message: e.to_string(),
    })?;
    let names: Vec<String> = file.vertices.into_iter().map(|v| v.id).collect();
    assemble(names, file.arcs, Some(file.start), file.ends)
}

/// Build a Cfg from resolved pieces. Shared by both parsers; also the place
/// where multiple declared ends are merged into one synthetic End via
/// epsilon arcs so the rest of the pipeline sees a single end vertex.
fn assemble(
    names: Vec<String>,
    arcs: Vec<(String, String)>,
    start: Option<String>,
    ends: Vec<String>,
) -> Result<Cfg, ParseError> {
    let mut id_of: HashMap<&str, VertexId> = HashMap::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        if id_of.insert(n.as_str(), i as VertexId).is_some() {
            return Err(ParseError::DuplicateVertex(n.clone()));
        }
    }
    let start_name = start.ok_or(ParseError::MissingStart)?;
    let start_id = *id_of
        .get(start_name.as_str())
        .ok_or_else(|| ParseError::UnknownMarker(start_name.clone()))?;
    if ends.is_empty() {
        return Err(ParseError::MissingEnd);
    }
    let mut end_ids = Vec::with_capacity(ends.len());
    for e in &ends {
        let id = *id_of
            .get(e.as_str())
            .ok_or_else(|| ParseError::UnknownMarker(e.clone()))?;
        if !end_ids.contains(&id) {
            end_ids.push(id);
        }
    }

    let mut resolved = Vec::with_capacity(arcs.len());
    for (a, b) in &arcs {
        let fa = *id_of
            .get(a.as_str())
            .ok_or_else(|| ParseError::DanglingEndpoint(a.clone()))?;
        let fb = *id_of
            .get(b.as_str())
            .ok_or_else(|| ParseError::DanglingEndpoint(b.clone()))?;
        if resolved.contains(&(fa, fb)) {
            return Err(ParseError::DuplicateArc { from: a.clone(), to: b.clone() });
        }
        resolved.push((fa, fb));
    }

    let mut vertices: Vec<VertexInfo> = names
        .into_iter()
        .map(|name| VertexInfo { name, synthetic: false })
        .collect();

    let end_id = if end_ids.len() == 1 {
        end_ids[0]
    } else {
        let name = fresh_name(&vertices, "End");
        let merged = vertices.len() as VertexId;
        vertices.push(VertexInfo { name, synthetic: false });
        for e in &end_ids {
            resolved.push((*e, merged));
        }
        merged
    };

    let mut graph = Graph::new(vertices.len());
    for (a, b) in resolved {
        graph.add_arc(a, b);
    }
    Ok(Cfg { vertices, graph, start: start_id, end: end_id })
}

fn fresh_name(vertices: &[VertexInfo], base: &str) -> String {
    let mut name = base.to_string();
    while vertices.iter().any(|v| v.name == name) {
        name.push('_');
    }
    name
}

// ---------------------------------------------------------------------------
// DOT subset parser: `digraph name? { ... }` with node statements, edge
// statements (chains allowed) and bracket attribute lists. Start and end
// vertices are marked with `role=start` / `role=end` node attributes. No
// subgraphs, no ports, no undirected edges.

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Arrow,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Eq,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl Lexer<'_> {
    fn new(text: &str) -> Lexer<'_> {
        Lexer { chars: text.chars().peekable(), line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: self.line, col: self.col, message: message.into() }
    }

    fn next_token(&mut self) -> Result<Option<(Tok, usize, usize)>, ParseError> {
        loop {
            match self.chars.peek() {
                None => return Ok(None),
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                Some('/') => {
                    let (line, col) = (self.line, self.col);
                    self.bump();
                    match self.chars.peek() {
                        Some('/') => {
                            while let Some(c) = self.bump() {
                                if c == '\n' {
                                    break;
                                }
                            }
                        }
                        Some('*') => {
                            self.bump();
                            let mut prev = ' ';
                            loop {
                                match self.bump() {
                                    None => {
                                        return Err(ParseError::Syntax {
                                            line,
                                            col,
                                            message: "unterminated comment".into(),
                                        })
                                    }
                                    Some('/') if prev == '*' => break,
                                    Some(c) => prev = c,
                                }
                            }
                        }
                        _ => {
                            return Err(ParseError::Syntax {
                                line,
                                col,
                                message: "unexpected '/'".into(),
                            })
                        }
                    }
                }
                Some(_) => break,
            }
        }

        let (line, col) = (self.line, self.col);
        let c = *self.chars.peek().unwrap();
        let tok = match c {
            '{' => {
                self.bump();
                Tok::LBrace
            }
            '}' => {
                self.bump();
                Tok::RBrace
            }
            '[' => {
                self.bump();
                Tok::LBracket
            }
            ']' => {
                self.bump();
                Tok::RBracket
            }
            ';' => {
                self.bump();
                Tok::Semi
            }
            ',' => {
                self.bump();
                Tok::Comma
            }
            '=' => {
                self.bump();
                Tok::Eq
            }
            '-' => {
                self.bump();
                match self.bump() {
                    Some('>') => Tok::Arrow,
                    _ => {
                        return Err(ParseError::Syntax {
                            line,
                            col,
                            message: "expected '->'".into(),
                        })
                    }
                }
            }
            '"' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => {
                            return Err(ParseError::Syntax {
                                line,
                                col,
                                message: "unterminated string".into(),
                            })
                        }
                        Some('\\') => match self.bump() {
                            Some(e) => s.push(e),
                            None => {
                                return Err(ParseError::Syntax {
                                    line,
                                    col,
                                    message: "unterminated escape".into(),
                                })
                            }
                        },
                        Some('"') => break,
                        Some(c) => s.push(c),
                    }
                }
                Tok::Ident(s)
            }
            c if c.is_alphanumeric() || c == '_' || c == '.' => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_alphanumeric() || c == '_' || c == '.' {
                        s.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Tok::Ident(s)
            }
            other => return Err(self.error(format!("unexpected character {other:?}"))),
        };
        Ok(Some((tok, line, col)))
    }
}

fn parse_dot(text: &str) -> Result<Cfg, ParseError> {
    let mut lx = Lexer::new(text);
    let mut toks = Vec::new();
    while let Some(t) = lx.next_token()? {
        toks.push(t);
    }
    let mut pos = 0usize;
    let err_at = |toks: &[(Tok, usize, usize)], pos: usize, msg: &str| -> ParseError {
        let (line, col) = toks
            .get(pos)
            .map(|(_, l, c)| (*l, *c))
            .or_else(|| toks.last().map(|(_, l, c)| (*l, *c)))
            .unwrap_or((1, 1));
        ParseError::Syntax { line, col, message: msg.to_string() }
    };

    match toks.get(pos) {
        Some((Tok::Ident(k), _, _)) if k == "digraph" => pos += 1,
        _ => return Err(err_at(&toks, pos, "expected 'digraph'")),
    }
    if let Some((Tok::Ident(_), _, _)) = toks.get(pos) {
        pos += 1; // optional graph name
    }
    if !matches!(toks.get(pos), Some((Tok::LBrace, _, _))) {
        return Err(err_at(&toks, pos, "expected '{'"));
    }
    pos += 1;

    let mut names: Vec<String> = Vec::new();
    let mut order: HashMap<String, usize> = HashMap::new();
    let declare = |n: &str, names: &mut Vec<String>, order: &mut HashMap<String, usize>| {
        if !order.contains_key(n) {
            order.insert(n.to_string(), names.len());
            names.push(n.to_string());
        }
    };
    let mut arcs: Vec<(String, String)> = Vec::new();
    let mut starts: Vec<String> = Vec::new();
    let mut ends: Vec<String> = Vec::new();

    loop {
        match toks.get(pos) {
            Some((Tok::RBrace, _, _)) => {
                break;
            }
            Some((Tok::Semi, _, _)) => {
                pos += 1;
            }
            Some((Tok::Ident(first), _, _)) => {
                let first = first.clone();
                pos += 1;
                declare(&first, &mut names, &mut order);
                let mut chain = vec![first];
                while matches!(toks.get(pos), Some((Tok::Arrow, _, _))) {
                    pos += 1;
                    match toks.get(pos) {
                        Some((Tok::Ident(n), _, _)) => {
                            declare(n, &mut names, &mut order);
                            chain.push(n.clone());
                            pos += 1;
                        }
                        _ => return Err(err_at(&toks, pos, "expected vertex after '->'")),
                    }
                }
                // Attribute list applies to a lone node statement.
                let mut attrs: Vec<(String, String)> = Vec::new();
                if matches!(toks.get(pos), Some((Tok::LBracket, _, _))) {
                    pos += 1;
                    loop {
                        match toks.get(pos) {
                            Some((Tok::RBracket, _, _)) => {
                                pos += 1;
                                break;
                            }
                            Some((Tok::Comma | Tok::Semi, _, _)) => pos += 1,
                            Some((Tok::Ident(k), _, _)) => {
                                let k = k.clone();
                                pos += 1;
                                if !matches!(toks.get(pos), Some((Tok::Eq, _, _))) {
                                    return Err(err_at(&toks, pos, "expected '=' in attribute"));
                                }
                                pos += 1;
                                match toks.get(pos) {
                                    Some((Tok::Ident(v), _, _)) => {
                                        attrs.push((k, v.clone()));
                                        pos += 1;
                                    }
                                    _ => {
                                        return Err(err_at(&toks, pos, "expected attribute value"))
                                    }
                                }
                            }
                            _ => return Err(err_at(&toks, pos, "malformed attribute list")),
                        }
                    }
                }
                if chain.len() > 1 {
                    for w in chain.windows(2) {
                        arcs.push((w[0].clone(), w[1].clone()));
                    }
                } else {
                    for (k, v) in &attrs {
                        if k == "role" && v == "start" {
                            starts.push(chain[0].clone());
                        } else if k == "role" && v == "end" {
                            ends.push(chain[0].clone());
                        }
                    }
                }
            }
            Some(_) => return Err(err_at(&toks, pos, "expected statement")),
            None => return Err(err_at(&toks, pos, "missing closing '}'")),
        }
    }

    if starts.len() > 1 {
        return Err(ParseError::MultipleStart);
    }
    assemble(names, arcs, starts.pop(), ends)
}

// ---------------------------------------------------------------------------
// Validation, normalization, serialization.

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    StartHasInDegree { vertex: String, degree: usize },
    EndHasOutDegree { vertex: String, degree: usize },
    UnreachableFromStart { vertex: String },
    CannotReachEnd { vertex: String },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::StartHasInDegree { vertex, degree } => {
                write!(f, "start vertex {vertex:?} has in-degree {degree}")
            }
            Diagnostic::EndHasOutDegree { vertex, degree } => {
                write!(f, "end vertex {vertex:?} has out-degree {degree}")
            }
            Diagnostic::UnreachableFromStart { vertex } => {
                write!(f, "vertex {vertex:?} is unreachable from start")
            }
            Diagnostic::CannotReachEnd { vertex } => {
                write!(f, "vertex {vertex:?} cannot reach end")
            }
        }
    }
}

/// Well-formedness diagnostics; empty iff the graph satisfies the start/end
/// degree rules and every vertex lies on some start-to-end walk.
pub fn validate_cfg(cfg: &Cfg) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let g = &cfg.graph;
    if g.in_degree(cfg.start) != 0 {
        out.push(Diagnostic::StartHasInDegree {
            vertex: cfg.name(cfg.start).to_string(),
            degree: g.in_degree(cfg.start),
        });
    }
    if g.out_degree(cfg.end) != 0 {
        out.push(Diagnostic::EndHasOutDegree {
            vertex: cfg.name(cfg.end).to_string(),
            degree: g.out_degree(cfg.end),
        });
    }
    let from_start = g.forward_reachable(cfg.start);
    let to_end = g.backward_closure(cfg.end);
    for v in 0..g.vertex_count() {
        if !from_start[v] {
            out.push(Diagnostic::UnreachableFromStart { vertex: cfg.name(v as VertexId).to_string() });
        }
    }
    for v in 0..g.vertex_count() {
        if !to_end[v] {
            out.push(Diagnostic::CannotReachEnd { vertex: cfg.name(v as VertexId).to_string() });
        }
    }
    out
}

/// Result of out-degree normalization. Original vertices keep their ids
/// (`old_to_new` is the identity on them); synthetic intermediates are
/// appended after the originals and carry the synthetic tag.
pub struct Normalized {
    pub cfg: Cfg,
    pub old_to_new: Vec<VertexId>,
}

/// Rewire every vertex with more than two successors through a chain of
/// fresh intermediates so the result has out-degree at most 2 everywhere.
/// A vertex with successors s1..sk keeps s1 and delegates the rest:
/// v -> s1, v -> m1, m1 -> s2, m1 -> m2, ..., m(k-2) -> s(k-1), m(k-2) -> sk.
pub fn normalize_outdegree(cfg: &Cfg) -> Normalized {
    let n = cfg.graph.vertex_count();
    let old_to_new: Vec<VertexId> = (0..n as VertexId).collect();
    if (0..n as VertexId).all(|v| cfg.graph.out_degree(v) <= 2) {
        return Normalized { cfg: cfg.clone(), old_to_new };
    }

    let mut vertices = cfg.vertices.clone();
    // Pre-assign synthetic ids so arcs can be emitted in one pass.
    let mut chain_ids: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for v in 0..n {
        let k = cfg.graph.out_degree(v as VertexId);
        if k > 2 {
            for i in 1..=(k - 2) {
                let id = vertices.len() as VertexId;
                let name = fresh_name(&vertices, &format!("{}#{}", vertices[v].name, i));
                vertices.push(VertexInfo { name, synthetic: true });
                chain_ids[v].push(id);
            }
        }
    }

    let mut graph = Graph::new(vertices.len());
    for v in 0..n {
        let succs = cfg.graph.succs(v as VertexId);
        if succs.len() <= 2 {
            for &s in succs {
                graph.add_arc(v as VertexId, s);
            }
        } else {
            let chain = &chain_ids[v];
            graph.add_arc(v as VertexId, succs[0]);
            graph.add_arc(v as VertexId, chain[0]);
            for (i, &m) in chain.iter().enumerate() {
                graph.add_arc(m, succs[i + 1]);
                if i + 1 < chain.len() {
                    graph.add_arc(m, chain[i + 1]);
                } else {
                    graph.add_arc(m, succs[i + 2]);
                }
            }
        }
    }

    Normalized {
        cfg: Cfg { vertices, graph, start: cfg.start, end: cfg.end },
        old_to_new,
    }
}

impl Cfg {
    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.vertices[v as usize].name
    }

    pub fn is_synthetic(&self, v: VertexId) -> bool {
        self.vertices[v as usize].synthetic
    }

    pub fn find(&self, name: &str) -> Option<VertexId> {
        self.vertices
            .iter()
            .position(|v| v.name == name)
            .map(|i| i as VertexId)
    }

    pub fn names_of(&self, p: &Path) -> Vec<String> {
        p.0.iter().map(|&v| self.name(v).to_string()).collect()
    }

    /// Drop normalization intermediates from a path. The result is a valid
    /// path of the pre-normalization graph.
    pub fn erase_synthetics(&self, p: &Path) -> Path {
        Path::new(p.0.iter().copied().filter(|&v| !self.is_synthetic(v)).collect())
    }

    pub fn has_synthetics(&self) -> bool {
        self.vertices.iter().any(|v| v.synthetic)
    }

    /// SHA-256 over a canonical rendering of the graph; lets reports carry a
    /// stable identity for their input.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for v in &self.vertices {
            h.update(v.name.as_bytes());
            h.update([0]);
        }
        for &(a, b) in self.graph.arcs() {
            h.update(a.to_le_bytes());
            h.update(b.to_le_bytes());
        }
        h.update(self.start.to_le_bytes());
        h.update(self.end.to_le_bytes());
        let out = h.finalize();
        out.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Edge-list JSON in the canonical on-disk shape.
    pub fn to_json(&self) -> String {
        let file = CfgFile {
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexDecl { id: v.name.clone() })
                .collect(),
            arcs: self
                .graph
                .arcs()
                .iter()
                .map(|&(a, b)| (self.name(a).to_string(), self.name(b).to_string()))
                .collect(),
            start: self.name(self.start).to_string(),
            ends: vec![self.name(self.end).to_string()],
        };
        serde_json::to_string_pretty(&file).expect("cfg serialization cannot fail")
    }
}

// ---------------------------------------------------------------------------
// CSR arrays. Each vertex's block stores the vertex itself first and then
// its neighbors, for both the predecessor and the successor orientation.

#[derive(Clone, Debug)]
pub struct CsrGraph {
    pub pred_index: Vec<u32>,
    pub pred_list: Vec<VertexId>,
    pub succ_index: Vec<u32>,
    pub succ_list: Vec<VertexId>,
    /// Vertex to logical-worker mapping; the assignment is 1:1.
    pub worker_of: Vec<u32>,
}

pub fn build_csr(cfg: &Cfg) -> CsrGraph {
    let n = cfg.graph.vertex_count();
    let mut pred_index = Vec::with_capacity(n + 1);
    let mut pred_list = Vec::new();
    let mut succ_index = Vec::with_capacity(n + 1);
    let mut succ_list = Vec::new();
    for v in 0..n as VertexId {
        pred_index.push(pred_list.len() as u32);
        pred_list.push(v);
        pred_list.extend_from_slice(cfg.graph.preds(v));
        succ_index.push(succ_list.len() as u32);
        succ_list.push(v);
        succ_list.extend_from_slice(cfg.graph.succs(v));
    }
    pred_index.push(pred_list.len() as u32);
    succ_index.push(succ_list.len() as u32);
    CsrGraph {
        pred_index,
        pred_list,
        succ_index,
        succ_list,
        worker_of: (0..n as u32).collect(),
    }
}

impl CsrGraph {
    pub fn vertex_count(&self) -> usize {
        self.pred_index.len() - 1
    }

    /// The raw block for `v`: `[v, neighbors...]`.
    pub fn pred_block(&self, v: VertexId) -> &[VertexId] {
        &self.pred_list[self.pred_index[v as usize] as usize..self.pred_index[v as usize + 1] as usize]
    }

    pub fn succ_block(&self, v: VertexId) -> &[VertexId] {
        &self.succ_list[self.succ_index[v as usize] as usize..self.succ_index[v as usize + 1] as usize]
    }

    pub fn preds_of(&self, v: VertexId) -> &[VertexId] {
        &self.pred_block(v)[1..]
    }

    pub fn succs_of(&self, v: VertexId) -> &[VertexId] {
        &self.succ_block(v)[1..]
    }

    /// Reconstruct the arc set; the round trip through CSR is the identity.
    pub fn arc_set(&self) -> std::collections::HashSet<(VertexId, VertexId)> {
        let mut out = std::collections::HashSet::new();
        for v in 0..self.vertex_count() as VertexId {
            for &p in self.preds_of(v) {
                out.insert((p, v));
            }
        }
        out
    }
}
