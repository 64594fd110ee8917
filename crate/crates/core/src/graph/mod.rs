//! Edge-labelled directed graphs (L-digraphs) and the queries the rest of
//! the crate builds on: proper-labelling validation, girth of the
//! underlying undirected multigraph, weak components and covering maps.

mod cayley;
mod io;
mod ports;

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cayley::{cayley, CayleyGraph, CyclicProduct, FiniteGroup, DEFAULT_VERTEX_BUDGET};
pub use io::{parse_edges, parse_ranks, to_dot, write_edges, write_ranks};
pub use ports::{ports_to_labels, PortNumberedGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {0} does not exist")]
    UnknownVertex(u64),
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(u64),
    #[error("label {0:?} is not in the alphabet")]
    UnknownLabel(String),
    #[error("the identity element {0} is in the generator set")]
    IdentityGenerator(String),
    #[error("materialization needs {needed} vertices, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("malformed port numbering: {0}")]
    MalformedPorts(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

/// Orientation of a half-edge as seen from one endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir {
    Out,
    In,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    /// Index into the graph's alphabet.
    pub label: usize,
}

/// One endpoint's view of an incident edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HalfEdge {
    pub edge: usize,
    pub dir: Dir,
    pub label: usize,
    /// The other endpoint (equal to the vertex itself for a self-loop).
    pub other: usize,
}

/// A finite L-digraph. Vertices are dense indices `0..n`, each carrying an
/// opaque external id; edges carry labels from a finite alphabet.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LDigraph {
    ids: Vec<u64>,
    id_index: HashMap<u64, usize>,
    alphabet: Vec<String>,
    label_index: HashMap<String, usize>,
    edges: Vec<Edge>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl LDigraph {
    pub fn new<S: Into<String>>(alphabet: impl IntoIterator<Item = S>) -> Self {
        let mut g = Self::default();
        for l in alphabet {
            g.intern_label(l.into());
        }
        g
    }

    /// `n` vertices with ids `0..n`.
    pub fn with_vertices<S: Into<String>>(n: usize, alphabet: impl IntoIterator<Item = S>) -> Self {
        let mut g = Self::new(alphabet);
        for v in 0..n {
            g.add_vertex(v as u64).expect("fresh ids");
        }
        g
    }

    pub fn intern_label(&mut self, label: String) -> usize {
        if let Some(&i) = self.label_index.get(&label) {
            return i;
        }
        self.alphabet.push(label.clone());
        self.label_index.insert(label, self.alphabet.len() - 1);
        self.alphabet.len() - 1
    }

    pub fn add_vertex(&mut self, id: u64) -> Result<usize, GraphError> {
        if self.id_index.contains_key(&id) {
            return Err(GraphError::DuplicateVertex(id));
        }
        self.ids.push(id);
        self.id_index.insert(id, self.ids.len() - 1);
        self.out_adj.push(Vec::new());
        self.in_adj.push(Vec::new());
        Ok(self.ids.len() - 1)
    }

    /// Adds an edge between dense indices; the label must be in the alphabet.
    pub fn add_edge(&mut self, tail: usize, head: usize, label: &str) -> Result<usize, GraphError> {
        let label = self.label_of(label)?;
        self.add_edge_labelled(tail, head, label)
    }

    pub fn add_edge_labelled(&mut self, tail: usize, head: usize, label: usize) -> Result<usize, GraphError> {
        let n = self.ids.len();
        if tail >= n || head >= n {
            return Err(GraphError::UnknownVertex(tail.max(head) as u64));
        }
        if label >= self.alphabet.len() {
            return Err(GraphError::UnknownLabel(label.to_string()));
        }
        self.edges.push(Edge { tail, head, label });
        let e = self.edges.len() - 1;
        self.out_adj[tail].push(e);
        self.in_adj[head].push(e);
        Ok(e)
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    pub fn id(&self, v: usize) -> u64 {
        self.ids[v]
    }

    pub fn index_of(&self, id: u64) -> Result<usize, GraphError> {
        self.id_index.get(&id).copied().ok_or(GraphError::UnknownVertex(id))
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn label_name(&self, label: usize) -> &str {
        &self.alphabet[label]
    }

    pub fn label_of(&self, name: &str) -> Result<usize, GraphError> {
        self.label_index.get(name).copied().ok_or_else(|| GraphError::UnknownLabel(name.to_string()))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> Edge {
        self.edges[e]
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.out_adj[v].len() + self.in_adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Incident half-edges, out-edges first, each group in insertion order.
    pub fn half_edges(&self, v: usize) -> impl Iterator<Item = HalfEdge> + '_ {
        let outs = self.out_adj[v].iter().map(move |&e| {
            let Edge { head, label, .. } = self.edges[e];
            HalfEdge { edge: e, dir: Dir::Out, label, other: head }
        });
        let ins = self.in_adj[v].iter().map(move |&e| {
            let Edge { tail, label, .. } = self.edges[e];
            HalfEdge { edge: e, dir: Dir::In, label, other: tail }
        });
        outs.chain(ins)
    }

    /// The half-edge at `v` with the given label and orientation, if any.
    pub fn half_edge(&self, v: usize, label: usize, dir: Dir) -> Option<HalfEdge> {
        self.half_edges(v).find(|h| h.label == label && h.dir == dir)
    }

    /// Undirected distances from `source`, truncated at `radius`.
    pub fn distances(&self, source: usize, radius: Option<usize>) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("queued vertices have a distance");
            if radius.is_some_and(|r| du >= r) {
                continue;
            }
            for h in self.half_edges(u) {
                if dist[h.other].is_none() {
                    dist[h.other] = Some(du + 1);
                    queue.push_back(h.other);
                }
            }
        }
        dist
    }

    /// Induced subgraph on `vertices` (dense indices, kept in the given order);
    /// external ids and the alphabet are preserved.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> LDigraph {
        let mut sub = LDigraph::new(self.alphabet.iter().cloned());
        let mut local = HashMap::with_capacity(vertices.len());
        for &v in vertices {
            let i = sub.add_vertex(self.ids[v]).expect("distinct vertices");
            local.insert(v, i);
        }
        for e in &self.edges {
            if let (Some(&t), Some(&h)) = (local.get(&e.tail), local.get(&e.head)) {
                sub.add_edge_labelled(t, h, e.label).expect("valid indices");
            }
        }
        sub
    }

    /// Per vertex, in-labels are pairwise distinct and out-labels are pairwise
    /// distinct. An in-label may equal an out-label.
    pub fn validate_proper_labelling(&self) -> bool {
        let distinct = |adj: &[usize]| {
            let mut labels: Vec<usize> = adj.iter().map(|&e| self.edges[e].label).collect();
            labels.sort_unstable();
            labels.windows(2).all(|w| w[0] != w[1])
        };
        (0..self.vertex_count()).all(|v| distinct(&self.out_adj[v]) && distinct(&self.in_adj[v]))
    }

    /// Weak component index of every vertex, numbered by smallest member.
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        let n = self.vertex_count();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for h in self.half_edges(u) {
                    if comp[h.other] == usize::MAX {
                        comp[h.other] = count;
                        stack.push(h.other);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn is_connected(&self) -> bool {
        self.component_labels().1 <= 1
    }

    /// Weakly connected components as separate graphs, ordered by their
    /// smallest dense index; vertex ids are preserved.
    pub fn connected_components(&self) -> Vec<LDigraph> {
        let (comp, count) = self.component_labels();
        let mut members = vec![Vec::new(); count];
        for (v, &c) in comp.iter().enumerate() {
            members[c].push(v);
        }
        members.iter().map(|vs| self.induced_subgraph(vs)).collect()
    }

    /// Length of a shortest cycle in the underlying undirected multigraph;
    /// a self-loop is a 1-cycle and two edges between the same pair of
    /// vertices form a 2-cycle. `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        if self.edges.iter().any(|e| e.tail == e.head) {
            return Some(1);
        }
        let n = self.vertex_count();
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; n];
        let mut parent_edge = vec![usize::MAX; n];
        let mut touched = Vec::new();
        for root in 0..n {
            for &v in &touched {
                dist[v] = usize::MAX;
                parent_edge[v] = usize::MAX;
            }
            touched.clear();
            dist[root] = 0;
            touched.push(root);
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                if best.is_some_and(|b| 2 * dist[u] + 1 >= b) {
                    break;
                }
                for h in self.half_edges(u) {
                    if h.edge == parent_edge[u] {
                        continue;
                    }
                    let v = h.other;
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        parent_edge[v] = h.edge;
                        touched.push(v);
                        queue.push_back(v);
                    } else {
                        let len = dist[u] + dist[v] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverFailureKind {
    Degree,
    Label,
    Surjectivity,
    Adjacency,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverFailure {
    /// External id of the offending vertex (of the base graph for
    /// surjectivity failures, of the cover otherwise).
    pub vertex: u64,
    pub reason: CoverFailureKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringReport {
    pub ok: bool,
    pub failures: Vec<CoverFailure>,
    /// Common fibre size when every fibre has the same size.
    pub fibre_size: Option<usize>,
}

/// Checks that `map` (dense indices of `cover` to dense indices of `base`)
/// is a surjective, degree- and label-preserving homomorphism.
pub fn verify_covering(cover: &LDigraph, base: &LDigraph, map: &[usize]) -> CoveringReport {
    let mut failures = Vec::new();
    if map.len() != cover.vertex_count() || map.iter().any(|&b| b >= base.vertex_count()) {
        let vertex = (0..cover.vertex_count())
            .find(|&v| map.get(v).is_none_or(|&b| b >= base.vertex_count()))
            .map_or(0, |v| cover.id(v));
        return CoveringReport {
            ok: false,
            failures: vec![CoverFailure { vertex, reason: CoverFailureKind::Adjacency }],
            fibre_size: None,
        };
    }
    fn keys(g: &LDigraph, v: usize) -> Vec<(&str, Dir)> {
        let mut k: Vec<(&str, Dir)> = g.half_edges(v).map(|h| (g.label_name(h.label), h.dir)).collect();
        k.sort_unstable();
        k
    }
    for v in 0..cover.vertex_count() {
        let (kc, kb) = (keys(cover, v), keys(base, map[v]));
        if kc.len() != kb.len() {
            failures.push(CoverFailure { vertex: cover.id(v), reason: CoverFailureKind::Degree });
        } else if kc != kb {
            failures.push(CoverFailure { vertex: cover.id(v), reason: CoverFailureKind::Label });
        }
    }
    for e in cover.edges() {
        let (t, h) = (map[e.tail], map[e.head]);
        let name = cover.label_name(e.label);
        let parallel: Vec<usize> = base.out_edges(t).iter().copied().filter(|&f| base.edge(f).head == h).collect();
        if parallel.is_empty() {
            failures.push(CoverFailure { vertex: cover.id(e.tail), reason: CoverFailureKind::Adjacency });
        } else if !parallel.iter().any(|&f| base.label_name(base.edge(f).label) == name) {
            failures.push(CoverFailure { vertex: cover.id(e.tail), reason: CoverFailureKind::Label });
        }
    }
    let mut fibres = vec![0usize; base.vertex_count()];
    for &b in map {
        fibres[b] += 1;
    }
    for (b, &size) in fibres.iter().enumerate() {
        if size == 0 {
            failures.push(CoverFailure { vertex: base.id(b), reason: CoverFailureKind::Surjectivity });
        }
    }
    let fibre_size = match fibres.first() {
        Some(&f) if f > 0 && fibres.iter().all(|&x| x == f) => Some(f),
        _ => None,
    };
    CoveringReport { ok: failures.is_empty(), failures, fibre_size }
}
