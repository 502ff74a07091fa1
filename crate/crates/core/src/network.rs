//! Embedded planar networks of order n, path enumeration and weight matrices.
//!
//! A network is drawn with straight segments between rational points. Edges
//! point strictly to the right, sources sit on the far left ordered top to
//! bottom as `s_1..s_n`, sinks on the far right likewise as `t_1..t_n`.
//! No two interior vertices may share an x-coordinate, which makes the
//! "rightmost intersection" used by the path-swapping argument unique.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_traits::Signed;
use thiserror::Error;

use crate::geometry::{self, Point};
use crate::minors::PolyMatrix;
use crate::polynomial::{format_rational, is_symbol_name, parse_rational, Polynomial, Rational, Symbol};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex id `{0}`")]
    UnknownVertex(String),
    #[error("{kind} index {index} out of range 1..={order}")]
    TerminalIndex {
        kind: &'static str,
        index: usize,
        order: usize,
    },
    #[error("{kind} {index} declared twice")]
    DuplicateTerminal { kind: &'static str, index: usize },
    #[error("{kind} {index} is not declared")]
    MissingTerminal { kind: &'static str, index: usize },
    #[error("invalid network:\n{0}")]
    Invalid(ValidationReport),
}

#[derive(Debug, Clone)]
pub struct Vertex {
    pub id: String,
    pub pos: Point,
}

#[derive(Debug, Clone)]
pub struct Edge {
    pub from: VertexId,
    pub to: VertexId,
    pub weight: Polynomial,
}

/// A single violated network invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    LabelingOrder(String),
    NonLeftToRight { from: String, to: String },
    MultiEdge { from: String, to: String },
    SourceHasIncoming(usize),
    SinkHasOutgoing(usize),
    SharedTerminal(String),
    UndeclaredSource(String),
    UndeclaredSink(String),
    VerticalTie(String, String),
    EdgeCrossing { first: String, second: String },
    EdgeThroughVertex { edge: String, vertex: String },
    BadWeight { edge: String, weight: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::LabelingOrder(detail) => write!(f, "labeling order: {detail}"),
            Violation::NonLeftToRight { from, to } => {
                write!(f, "non-left-to-right edge {from} -> {to}")
            }
            Violation::MultiEdge { from, to } => write!(f, "multi-edge {from} -> {to}"),
            Violation::SourceHasIncoming(k) => write!(f, "source s{k} has an incoming edge"),
            Violation::SinkHasOutgoing(k) => write!(f, "sink t{k} has an outgoing edge"),
            Violation::SharedTerminal(v) => {
                write!(f, "vertex {v} is declared as more than one source/sink")
            }
            Violation::UndeclaredSource(v) => {
                write!(f, "vertex {v} has no incoming edge but is not a source")
            }
            Violation::UndeclaredSink(v) => {
                write!(f, "vertex {v} has no outgoing edge but is not a sink")
            }
            Violation::VerticalTie(a, b) => {
                write!(f, "vertical tie: interior vertices {a} and {b} share an x-coordinate")
            }
            Violation::EdgeCrossing { first, second } => {
                write!(f, "edge crossing: {first} crosses {second}")
            }
            Violation::EdgeThroughVertex { edge, vertex } => {
                write!(f, "edge {edge} passes through vertex {vertex}")
            }
            Violation::BadWeight { edge, weight } => write!(
                f,
                "edge {edge} has weight `{weight}`; expected a symbol or nonnegative constant"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "ok");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A directed path from source `s_source` to sink `t_sink` (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub sink: usize,
    pub edges: Vec<EdgeId>,
    /// `edges.len() + 1` vertices, in order.
    pub vertices: Vec<VertexId>,
}

impl Path {
    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.vertices.iter().position(|&u| u == v)
    }
}

#[derive(Debug, Clone)]
pub struct PlanarNetwork {
    order: usize,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    sources: Vec<VertexId>,
    sinks: Vec<VertexId>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
    index: HashMap<String, VertexId>,
}

/// Incremental construction; [`NetworkBuilder::build`] checks that every
/// source and sink slot is filled but does not validate the embedding.
#[derive(Debug, Clone)]
pub struct NetworkBuilder {
    order: usize,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    sources: Vec<Option<VertexId>>,
    sinks: Vec<Option<VertexId>>,
    index: HashMap<String, VertexId>,
}

impl NetworkBuilder {
    pub fn new(order: usize) -> Self {
        NetworkBuilder {
            order,
            vertices: Vec::new(),
            edges: Vec::new(),
            sources: vec![None; order],
            sinks: vec![None; order],
            index: HashMap::new(),
        }
    }

    pub fn vertex(&mut self, id: &str, x: Rational, y: Rational) -> Result<VertexId, NetworkError> {
        if self.index.contains_key(id) {
            return Err(NetworkError::DuplicateVertex(id.to_string()));
        }
        let vid = self.vertices.len();
        self.vertices.push(Vertex {
            id: id.to_string(),
            pos: Point::new(x, y),
        });
        self.index.insert(id.to_string(), vid);
        Ok(vid)
    }

    /// Integer-coordinate convenience wrapper around [`NetworkBuilder::vertex`].
    pub fn vertex_at(&mut self, id: &str, x: i64, y: i64) -> Result<VertexId, NetworkError> {
        self.vertex(id, Rational::from_integer(x.into()), Rational::from_integer(y.into()))
    }

    fn lookup(&self, id: &str) -> Result<VertexId, NetworkError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| NetworkError::UnknownVertex(id.to_string()))
    }

    fn terminal(&mut self, is_source: bool, k: usize, id: &str) -> Result<(), NetworkError> {
        let kind = if is_source { "source" } else { "sink" };
        let order = self.order;
        if k == 0 || k > order {
            return Err(NetworkError::TerminalIndex { kind, index: k, order });
        }
        let v = self.lookup(id)?;
        let slots = if is_source { &mut self.sources } else { &mut self.sinks };
        if slots[k - 1].is_some() {
            return Err(NetworkError::DuplicateTerminal { kind, index: k });
        }
        slots[k - 1] = Some(v);
        Ok(())
    }

    pub fn source(&mut self, k: usize, id: &str) -> Result<(), NetworkError> {
        self.terminal(true, k, id)
    }

    pub fn sink(&mut self, k: usize, id: &str) -> Result<(), NetworkError> {
        self.terminal(false, k, id)
    }

    pub fn edge(&mut self, from: &str, to: &str, weight: Polynomial) -> Result<EdgeId, NetworkError> {
        let from = self.lookup(from)?;
        let to = self.lookup(to)?;
        self.edges.push(Edge { from, to, weight });
        Ok(self.edges.len() - 1)
    }

    pub fn build(self) -> Result<PlanarNetwork, NetworkError> {
        let collect = |slots: Vec<Option<VertexId>>, kind| {
            slots
                .into_iter()
                .enumerate()
                .map(|(k, v)| v.ok_or(NetworkError::MissingTerminal { kind, index: k + 1 }))
                .collect::<Result<Vec<_>, _>>()
        };
        let sources = collect(self.sources, "source")?;
        let sinks = collect(self.sinks, "sink")?;
        let mut out_edges = vec![Vec::new(); self.vertices.len()];
        let mut in_edges = vec![Vec::new(); self.vertices.len()];
        for (eid, e) in self.edges.iter().enumerate() {
            out_edges[e.from].push(eid);
            in_edges[e.to].push(eid);
        }
        Ok(PlanarNetwork {
            order: self.order,
            vertices: self.vertices,
            edges: self.edges,
            sources,
            sinks,
            out_edges,
            in_edges,
            index: self.index,
        })
    }
}

impl PlanarNetwork {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v]
    }

    pub fn vertex_id(&self, id: &str) -> Option<VertexId> {
        self.index.get(id).copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_edges[v]
    }

    /// Vertex of source `s_k`, 1-based.
    pub fn source(&self, k: usize) -> VertexId {
        self.sources[k - 1]
    }

    /// Vertex of sink `t_k`, 1-based.
    pub fn sink(&self, k: usize) -> VertexId {
        self.sinks[k - 1]
    }

    pub fn source_index(&self, v: VertexId) -> Option<usize> {
        self.sources.iter().position(|&s| s == v).map(|k| k + 1)
    }

    pub fn sink_index(&self, v: VertexId) -> Option<usize> {
        self.sinks.iter().position(|&t| t == v).map(|k| k + 1)
    }

    pub fn is_terminal(&self, v: VertexId) -> bool {
        self.sources.contains(&v) || self.sinks.contains(&v)
    }

    pub fn edge_label(&self, e: EdgeId) -> String {
        let e = &self.edges[e];
        format!("{}->{}", self.vertices[e.from].id, self.vertices[e.to].id)
    }

    /// Weight symbols in edge order (constants skipped, duplicates removed).
    pub fn weight_symbols(&self) -> Vec<Symbol> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for e in &self.edges {
            for s in e.weight.symbols() {
                if seen.insert(s.clone()) {
                    out.push(s);
                }
            }
        }
        out
    }

    /// Checks every embedding invariant and returns all violations found.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let name = |v: VertexId| self.vertices[v].id.clone();
        let is_source: HashSet<VertexId> = self.sources.iter().copied().collect();
        let is_sink: HashSet<VertexId> = self.sinks.iter().copied().collect();

        let mut seen_terminal = HashSet::new();
        for &v in self.sources.iter().chain(self.sinks.iter()) {
            if !seen_terminal.insert(v) {
                violations.push(Violation::SharedTerminal(name(v)));
            }
        }

        for (eid, e) in self.edges.iter().enumerate() {
            if self.vertices[e.from].pos.x >= self.vertices[e.to].pos.x {
                violations.push(Violation::NonLeftToRight {
                    from: name(e.from),
                    to: name(e.to),
                });
            }
            if !is_admissible_weight(&e.weight) {
                violations.push(Violation::BadWeight {
                    edge: self.edge_label(eid),
                    weight: e.weight.to_string(),
                });
            }
        }
        let mut pairs = HashSet::new();
        for e in &self.edges {
            if !pairs.insert((e.from, e.to)) {
                violations.push(Violation::MultiEdge {
                    from: name(e.from),
                    to: name(e.to),
                });
            }
        }

        for (k, &s) in self.sources.iter().enumerate() {
            if !self.in_edges[s].is_empty() {
                violations.push(Violation::SourceHasIncoming(k + 1));
            }
        }
        for (k, &t) in self.sinks.iter().enumerate() {
            if !self.out_edges[t].is_empty() {
                violations.push(Violation::SinkHasOutgoing(k + 1));
            }
        }
        for v in 0..self.vertices.len() {
            if self.in_edges[v].is_empty() && !is_source.contains(&v) {
                violations.push(Violation::UndeclaredSource(name(v)));
            }
            if self.out_edges[v].is_empty() && !is_sink.contains(&v) {
                violations.push(Violation::UndeclaredSink(name(v)));
            }
        }

        self.check_labeling(&is_source, &is_sink, &mut violations);

        let mut interior: Vec<VertexId> = (0..self.vertices.len())
            .filter(|v| !is_source.contains(v) && !is_sink.contains(v))
            .collect();
        interior.sort_by(|&a, &b| self.vertices[a].pos.x.cmp(&self.vertices[b].pos.x));
        for w in interior.windows(2) {
            if self.vertices[w[0]].pos.x == self.vertices[w[1]].pos.x {
                violations.push(Violation::VerticalTie(name(w[0]), name(w[1])));
            }
        }

        self.check_planarity(&mut violations);
        ValidationReport { violations }
    }

    fn check_labeling(
        &self,
        is_source: &HashSet<VertexId>,
        is_sink: &HashSet<VertexId>,
        violations: &mut Vec<Violation>,
    ) {
        let pos = |v: VertexId| &self.vertices[v].pos;
        for k in 1..self.order {
            let (a, b) = (self.sources[k - 1], self.sources[k]);
            if pos(a).y <= pos(b).y {
                violations.push(Violation::LabelingOrder(format!(
                    "source s{k} ({}) is not strictly above s{} ({})",
                    self.vertices[a].id,
                    k + 1,
                    self.vertices[b].id
                )));
            }
            let (a, b) = (self.sinks[k - 1], self.sinks[k]);
            if pos(a).y <= pos(b).y {
                violations.push(Violation::LabelingOrder(format!(
                    "sink t{k} ({}) is not strictly above t{} ({})",
                    self.vertices[a].id,
                    k + 1,
                    self.vertices[b].id
                )));
            }
        }
        let max_source_x = self.sources.iter().map(|&s| &pos(s).x).max();
        let min_sink_x = self.sinks.iter().map(|&t| &pos(t).x).min();
        for v in 0..self.vertices.len() {
            if !is_source.contains(&v) {
                if let Some(mx) = max_source_x {
                    if &pos(v).x <= mx {
                        violations.push(Violation::LabelingOrder(format!(
                            "vertex {} is not strictly right of every source",
                            self.vertices[v].id
                        )));
                    }
                }
            }
            if !is_sink.contains(&v) {
                if let Some(mn) = min_sink_x {
                    if &pos(v).x >= mn {
                        violations.push(Violation::LabelingOrder(format!(
                            "vertex {} is not strictly left of every sink",
                            self.vertices[v].id
                        )));
                    }
                }
            }
        }
    }

    fn check_planarity(&self, violations: &mut Vec<Violation>) {
        let pos = |v: VertexId| &self.vertices[v].pos;
        for (i, e) in self.edges.iter().enumerate() {
            for (v, vert) in self.vertices.iter().enumerate() {
                if v != e.from && v != e.to && geometry::on_segment(pos(e.from), pos(e.to), &vert.pos) {
                    violations.push(Violation::EdgeThroughVertex {
                        edge: self.edge_label(i),
                        vertex: vert.id.clone(),
                    });
                }
            }
            for (j, f) in self.edges.iter().enumerate().skip(i + 1) {
                let shared = e.from == f.from || e.from == f.to || e.to == f.from || e.to == f.to;
                if !shared && geometry::segments_cross(pos(e.from), pos(e.to), pos(f.from), pos(f.to)) {
                    violations.push(Violation::EdgeCrossing {
                        first: self.edge_label(i),
                        second: self.edge_label(j),
                    });
                }
            }
        }
    }

    pub fn ensure_valid(&self) -> Result<(), NetworkError> {
        let report = self.validate();
        if report.is_ok() {
            Ok(())
        } else {
            Err(NetworkError::Invalid(report))
        }
    }

    /// Vertices sorted left to right, ties broken by y.
    pub fn topological_order(&self) -> Vec<VertexId> {
        let mut order: Vec<VertexId> = (0..self.vertices.len()).collect();
        order.sort_by(|&a, &b| {
            let (pa, pb) = (&self.vertices[a].pos, &self.vertices[b].pos);
            pa.x.cmp(&pb.x).then_with(|| pa.y.cmp(&pb.y))
        });
        order
    }

    /// All paths `s_i -> t_j`, lexicographic in edge insertion order.
    pub fn enumerate_paths(&self, i: usize, j: usize) -> Vec<Path> {
        let start = self.source(i);
        let target = self.sink(j);
        let reach = self.reaches(target);
        let mut out = Vec::new();
        if !reach[start] {
            return out;
        }
        let mut edges = Vec::new();
        let mut vertices = vec![start];
        self.dfs(target, &reach, &mut edges, &mut vertices, &mut |edges, vertices| {
            out.push(Path {
                source: i,
                sink: j,
                edges: edges.to_vec(),
                vertices: vertices.to_vec(),
            })
        });
        out
    }

    fn reaches(&self, target: VertexId) -> Vec<bool> {
        let mut reach = vec![false; self.vertices.len()];
        reach[target] = true;
        for &v in self.topological_order().iter().rev() {
            if self.out_edges[v].iter().any(|&e| reach[self.edges[e].to]) {
                reach[v] = true;
            }
        }
        reach
    }

    fn dfs(
        &self,
        target: VertexId,
        reach: &[bool],
        edges: &mut Vec<EdgeId>,
        vertices: &mut Vec<VertexId>,
        emit: &mut dyn FnMut(&[EdgeId], &[VertexId]),
    ) {
        let here = *vertices.last().unwrap();
        if here == target {
            emit(edges, vertices);
            return;
        }
        for &e in &self.out_edges[here] {
            let next = self.edges[e].to;
            if reach[next] {
                edges.push(e);
                vertices.push(next);
                self.dfs(target, reach, edges, vertices, emit);
                edges.pop();
                vertices.pop();
            }
        }
    }

    pub fn path_weight(&self, path: &Path) -> Polynomial {
        path.edges.iter().map(|&e| self.edges[e].weight.clone()).product()
    }

    /// The weight matrix, after validating the network.
    pub fn weight_matrix(&self) -> Result<PolyMatrix, NetworkError> {
        self.ensure_valid()?;
        Ok(self.weight_matrix_unchecked())
    }

    /// One left-to-right pass per source accumulating path-weight sums.
    pub fn weight_matrix_unchecked(&self) -> PolyMatrix {
        let n = self.order;
        let topo = self.topological_order();
        let mut entries = Vec::with_capacity(n * n);
        for i in 1..=n {
            let mut acc = vec![Polynomial::zero(); self.vertices.len()];
            acc[self.source(i)] = Polynomial::one();
            for &v in &topo {
                if acc[v].is_zero() {
                    continue;
                }
                let here = acc[v].clone();
                for &e in &self.out_edges[v] {
                    let edge = &self.edges[e];
                    acc[edge.to].add_product(&here, &edge.weight);
                }
            }
            for j in 1..=n {
                entries.push(acc[self.sink(j)].clone());
            }
        }
        PolyMatrix::new(n, n, entries)
    }

    /// Σ over enumerated paths; the independent route to the weight matrix.
    pub fn weight_matrix_by_enumeration(&self) -> PolyMatrix {
        let n = self.order;
        let mut entries = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                entries.push(self.enumerate_paths(i, j).iter().map(|p| self.path_weight(p)).sum());
            }
        }
        PolyMatrix::new(n, n, entries)
    }

    /// A copy with every edge weight replaced by `weight(edge index)`.
    pub fn reweighted(&self, mut weight: impl FnMut(EdgeId) -> Polynomial) -> PlanarNetwork {
        let mut out = self.clone();
        for (eid, e) in out.edges.iter_mut().enumerate() {
            e.weight = weight(eid);
        }
        out
    }

    pub fn parse(text: &str) -> Result<PlanarNetwork, NetworkError> {
        parse_network(text)
    }

    /// Serializes to the line-oriented network file format.
    pub fn to_text(&self) -> String {
        let mut out = format!("order {}\n", self.order);
        for v in &self.vertices {
            out.push_str(&format!(
                "vertex {} {} {}\n",
                v.id,
                format_rational(&v.pos.x),
                format_rational(&v.pos.y)
            ));
        }
        for (k, &s) in self.sources.iter().enumerate() {
            out.push_str(&format!("source {} {}\n", k + 1, self.vertices[s].id));
        }
        for (k, &t) in self.sinks.iter().enumerate() {
            out.push_str(&format!("sink {} {}\n", k + 1, self.vertices[t].id));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "edge {} {} {}\n",
                self.vertices[e.from].id, self.vertices[e.to].id, e.weight
            ));
        }
        out
    }
}

fn is_admissible_weight(w: &Polynomial) -> bool {
    if let Some(c) = w.as_constant() {
        return !c.is_negative();
    }
    let mut terms = w.terms();
    match (terms.next(), terms.next()) {
        (Some((m, c)), None) => m.degree() == 1 && m.factors().len() == 1 && c == &Rational::from_integer(1.into()),
        _ => false,
    }
}

fn parse_weight(token: &str) -> Option<Polynomial> {
    if is_symbol_name(token) {
        return Symbol::new(token).ok().map(Polynomial::symbol);
    }
    let c = parse_rational(token)?;
    (!c.is_negative()).then(|| Polynomial::constant(c))
}

fn parse_network(text: &str) -> Result<PlanarNetwork, NetworkError> {
    let mut builder: Option<NetworkBuilder> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let bad = |reason: String| NetworkError::Parse { line, reason };
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let arity = |n: usize| {
            if tokens.len() == n {
                Ok(())
            } else {
                Err(bad(format!(
                    "`{}` expects {} argument(s), found {}",
                    tokens[0],
                    n - 1,
                    tokens.len() - 1
                )))
            }
        };
        let Some(b) = builder.as_mut() else {
            if tokens[0] != "order" {
                return Err(bad("first directive must be `order <n>`".into()));
            }
            arity(2)?;
            let n: usize = tokens[1]
                .parse()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| bad(format!("invalid order `{}`", tokens[1])))?;
            builder = Some(NetworkBuilder::new(n));
            continue;
        };
        let wrap = |e: NetworkError| match e {
            NetworkError::Parse { .. } => e,
            other => bad(other.to_string()),
        };
        match tokens[0] {
            "order" => return Err(bad("duplicate `order` line".into())),
            "vertex" => {
                arity(4)?;
                if !is_symbol_name(tokens[1]) {
                    return Err(bad(format!("invalid vertex id `{}`", tokens[1])));
                }
                let x = parse_rational(tokens[2]).ok_or_else(|| bad(format!("invalid coordinate `{}`", tokens[2])))?;
                let y = parse_rational(tokens[3]).ok_or_else(|| bad(format!("invalid coordinate `{}`", tokens[3])))?;
                b.vertex(tokens[1], x, y).map_err(wrap)?;
            }
            "source" | "sink" => {
                arity(3)?;
                let k: usize = tokens[1]
                    .parse()
                    .map_err(|_| bad(format!("invalid index `{}`", tokens[1])))?;
                if tokens[0] == "source" {
                    b.source(k, tokens[2]).map_err(wrap)?;
                } else {
                    b.sink(k, tokens[2]).map_err(wrap)?;
                }
            }
            "edge" => {
                arity(4)?;
                let w = parse_weight(tokens[3]).ok_or_else(|| {
                    bad(format!(
                        "invalid weight `{}`: expected a symbol or nonnegative rational",
                        tokens[3]
                    ))
                })?;
                b.edge(tokens[1], tokens[2], w).map_err(wrap)?;
            }
            other => return Err(bad(format!("unknown directive `{other}`"))),
        }
    }
    let builder = builder.ok_or(NetworkError::Parse {
        line: last_line.max(1),
        reason: "missing `order` line".into(),
    })?;
    builder.build().map_err(|e| NetworkError::Parse {
        line: last_line.max(1),
        reason: e.to_string(),
    })
}
