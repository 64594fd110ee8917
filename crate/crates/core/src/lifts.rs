//! Lifts of L-digraphs: the equi-label product with a homogeneous ordered
//! graph, completion of the induced partial order, component selection, and
//! reconnection of disjoint-union lifts along a seam edge.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Dir, GraphError, LDigraph};
use crate::homogeneity::{ball_type, BallType, HomogeneityError, LabelMode, OrderedGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("label {0:?} of the base graph is missing from the lifting graph")]
    AlphabetMismatch(String),
    #[error("the lifting graph is not properly labelled")]
    NotProperlyLabelled,
    #[error("the graph is empty")]
    Empty,
    #[error("copy {copy} lacks the seam edge")]
    MissingSeamEdge { copy: usize },
    #[error("removing the seam edge disconnects the base graph")]
    SeamDisconnects,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Homogeneity(#[from] HomogeneityError),
}

/// The product `C` of an ordered graph `H` and a base `G`.
#[derive(Debug, Clone)]
pub struct LiftResult {
    /// The lift with its completed order; vertex `(a, b)` has dense index
    /// and id `a * |V(G)| + b`.
    pub ordered: OrderedGraph,
    pub to_base: Vec<usize>,
    pub to_h: Vec<usize>,
    h_rank: Vec<usize>,
    base_ids: Vec<u64>,
}

impl LiftResult {
    pub fn lifted(&self) -> &LDigraph {
        &self.ordered.graph
    }

    /// `u <_p v` iff the `H`-projections compare; pairs in one fibre of
    /// the projection to `H` are incomparable.
    pub fn partial_cmp(&self, u: usize, v: usize) -> Option<Ordering> {
        if u == v {
            return Some(Ordering::Equal);
        }
        let (a, b) = (self.to_h[u], self.to_h[v]);
        if a == b {
            None
        } else {
            Some(self.h_rank[a].cmp(&self.h_rank[b]))
        }
    }

    pub fn partial_type(&self, u: usize, r: usize) -> BallType {
        ball_type(self.lifted(), u, r, |a, b| self.partial_cmp(a, b), LabelMode::Labelled)
    }

    pub fn completed_type(&self, u: usize, r: usize) -> BallType {
        self.ordered.tau(u, r).expect("valid vertex")
    }

    /// Re-completes the order with ties inside `H`-fibres broken by a
    /// seeded shuffle instead of base-vertex id.
    pub fn with_seeded_completion(&self, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let noise: Vec<u64> = (0..self.to_h.len()).map(|_| rng.gen()).collect();
        let keys: Vec<(usize, u64)> = (0..self.to_h.len()).map(|v| (self.h_rank[self.to_h[v]], noise[v])).collect();
        let ordered = OrderedGraph::from_keys(self.lifted().clone(), &keys).expect("keys cover every vertex");
        Self { ordered, ..self.clone() }
    }
}

/// Vertices `(a, b)` for `a` in `H` and `b` in `G`, with an edge
/// `(a, b) -> (a', b')` whenever `a -> a'` and `b -> b'` carry the same
/// label. The order compares `H`-ranks, then base-vertex ids.
pub fn homogeneous_lift(h: &OrderedGraph, g: &LDigraph) -> Result<LiftResult, LiftError> {
    let hg = &h.graph;
    if !hg.validate_proper_labelling() {
        return Err(LiftError::NotProperlyLabelled);
    }
    if let Some(missing) = g.alphabet().iter().find(|l| hg.label_of(l).is_err()) {
        return Err(LiftError::AlphabetMismatch(missing.clone()));
    }
    let nb = g.vertex_count();
    let total = hg.vertex_count() * nb;
    let mut lifted = LDigraph::with_vertices(total, g.alphabet().iter().cloned());
    let mut by_label: HashMap<&str, Vec<(usize, usize)>> = HashMap::new();
    for e in g.edges() {
        by_label.entry(g.label_name(e.label)).or_default().push((e.tail, e.head));
    }
    for e in hg.edges() {
        let Some(pairs) = by_label.get(hg.label_name(e.label)) else { continue };
        for &(bt, bh) in pairs {
            lifted.add_edge(e.tail * nb + bt, e.head * nb + bh, hg.label_name(e.label))?;
        }
    }
    let to_base: Vec<usize> = (0..total).map(|v| v % nb.max(1)).collect();
    let to_h: Vec<usize> = (0..total).map(|v| v / nb.max(1)).collect();
    let keys: Vec<(usize, u64)> = (0..total).map(|v| (h.rank()[to_h[v]], g.id(to_base[v]))).collect();
    let ordered = OrderedGraph::from_keys(lifted, &keys)?;
    Ok(LiftResult { ordered, to_base, to_h, h_rank: h.rank().to_vec(), base_ids: g.ids().to_vec() })
}

impl LiftResult {
    pub fn base_ids(&self) -> &[u64] {
        &self.base_ids
    }

    /// `lifted_vertex base_vertex h_vertex` lines.
    pub fn map_lines(&self, h: &LDigraph) -> String {
        (0..self.to_h.len())
            .map(|v| format!("{} {} {}\n", self.lifted().id(v), self.base_ids[self.to_base[v]], h.id(self.to_h[v])))
            .collect()
    }
}

/// Whether `small` maps into `big` by a root-, label-, orientation- and
/// order-preserving injection. Children are matched by their unique
/// (label, direction) slot, so the search is a greedy descent.
pub fn embeds_into(small: &BallType, big: &BallType) -> bool {
    if small.vertex_count > big.vertex_count {
        return false;
    }
    let mut big_slots: HashMap<(u32, Option<&str>, Option<Dir>), Vec<u32>> = HashMap::new();
    for e in &big.edges {
        big_slots.entry((e.from, e.label.as_deref(), e.dir)).or_default().push(e.to);
    }
    let mut image: Vec<Option<u32>> = vec![None; small.vertex_count];
    let mut used = HashSet::new();
    if small.vertex_count == 0 {
        return true;
    }
    image[0] = Some(0);
    used.insert(0u32);
    // edges are recorded in discovery order, so every source is mapped first
    for e in &small.edges {
        let Some(from) = image[e.from as usize] else { return false };
        let Some(targets) = big_slots.get(&(from, e.label.as_deref(), e.dir)) else { return false };
        match image[e.to as usize] {
            Some(to) => {
                if !targets.contains(&to) {
                    return false;
                }
            }
            None => {
                let Some(&to) = targets.iter().find(|t| !used.contains(*t)) else { return false };
                image[e.to as usize] = Some(to);
                used.insert(to);
            }
        }
    }
    for i in 0..small.vertex_count {
        for j in i + 1..small.vertex_count {
            if let Some(rel) = small.relation(i, j) {
                let (x, y) = (image[i].expect("all mapped") as usize, image[j].expect("all mapped") as usize);
                if big.relation(x, y) != Some(rel) {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeMatch {
    Exact,
    Embedding,
}

fn matches(t: &BallType, target: &BallType, how: TypeMatch) -> bool {
    match how {
        TypeMatch::Exact => t == target,
        TypeMatch::Embedding => embeds_into(t, target),
    }
}

/// Number of vertices whose radius-`r` type matches `target`.
pub fn match_count(og: &OrderedGraph, r: usize, target: &BallType, how: TypeMatch) -> usize {
    (0..og.vertex_count()).filter(|&u| matches(&og.tau(u, r).expect("valid vertex"), target, how)).count()
}

#[derive(Debug, Clone)]
pub struct ComponentChoice {
    /// Dense indices in the lift.
    pub members: Vec<usize>,
    pub ordered: OrderedGraph,
    pub matching: usize,
}

/// The component with the largest fraction of vertices matching `target`;
/// ties go to the larger component, then the smaller first vertex.
pub fn best_component(og: &OrderedGraph, r: usize, target: &BallType, how: TypeMatch) -> Result<ComponentChoice, LiftError> {
    let hits: Vec<bool> =
        (0..og.vertex_count()).map(|u| matches(&og.tau(u, r).expect("valid vertex"), target, how)).collect();
    og.components()
        .into_iter()
        .map(|(members, ordered)| {
            let matching = members.iter().filter(|&&v| hits[v]).count();
            ComponentChoice { members, ordered, matching }
        })
        .min_by(|a, b| {
            let (fa, fb) = (a.matching * b.members.len(), b.matching * a.members.len());
            fb.cmp(&fa).then(b.members.len().cmp(&a.members.len())).then(a.members[0].cmp(&b.members[0]))
        })
        .ok_or(LiftError::Empty)
}

/// A covering graph together with its projection.
#[derive(Debug, Clone)]
pub struct Covering {
    pub graph: LDigraph,
    pub to_base: Vec<usize>,
}

/// `copies` disjoint copies of a base graph; copy `i` of base vertex `b`
/// has dense index `i * |V(base)| + b`.
#[derive(Debug, Clone)]
pub struct DisjointLift {
    pub covering: Covering,
    pub copies: usize,
    pub base_len: usize,
}

impl DisjointLift {
    pub fn new(base: &LDigraph, copies: usize) -> Self {
        let ids = (0..copies * base.vertex_count()).map(|v| v as u64).collect();
        Self::with_ids(base, copies, ids).expect("distinct ids")
    }

    /// Uses `ids[i * |V(base)| + b]` as the id of copy `i` of `b`.
    pub fn with_ids(base: &LDigraph, copies: usize, ids: Vec<u64>) -> Result<Self, LiftError> {
        let nb = base.vertex_count();
        if ids.len() != copies * nb {
            return Err(LiftError::Graph(GraphError::Invalid(format!("expected {} ids, got {}", copies * nb, ids.len()))));
        }
        let mut graph = LDigraph::new(base.alphabet().iter().cloned());
        for id in ids {
            graph.add_vertex(id)?;
        }
        for i in 0..copies {
            for e in base.edges() {
                graph.add_edge_labelled(i * nb + e.tail, i * nb + e.head, e.label)?;
            }
        }
        let to_base = (0..copies * nb).map(|v| v % nb.max(1)).collect();
        Ok(Self { covering: Covering { graph, to_base }, copies, base_len: nb })
    }
}

/// Replaces each copy's edge `u_i -> v_i` labelled `label` by
/// `u_i -> v_{i+1 mod copies}`.
pub fn connect_seam(lift: &DisjointLift, base: &LDigraph, u: usize, v: usize, label: &str) -> Result<Covering, LiftError> {
    let l = base.label_of(label)?;
    let seam = base
        .out_edges(u)
        .iter()
        .copied()
        .find(|&e| base.edge(e).head == v && base.edge(e).label == l)
        .ok_or(LiftError::MissingSeamEdge { copy: 0 })?;
    let mut rest = LDigraph::new(base.alphabet().iter().cloned());
    for &id in base.ids() {
        rest.add_vertex(id)?;
    }
    for (i, e) in base.edges().iter().enumerate() {
        if i != seam {
            rest.add_edge_labelled(e.tail, e.head, e.label)?;
        }
    }
    if !rest.is_connected() {
        return Err(LiftError::SeamDisconnects);
    }
    let src = &lift.covering.graph;
    let lab = src.label_of(label)?;
    let nb = lift.base_len;
    let mut seam_edges = HashSet::new();
    for i in 0..lift.copies {
        let e = src
            .out_edges(i * nb + u)
            .iter()
            .copied()
            .find(|&e| src.edge(e).head == i * nb + v && src.edge(e).label == lab)
            .ok_or(LiftError::MissingSeamEdge { copy: i })?;
        seam_edges.insert(e);
    }
    let mut graph = LDigraph::new(src.alphabet().iter().cloned());
    for &id in src.ids() {
        graph.add_vertex(id)?;
    }
    for (idx, e) in src.edges().iter().enumerate() {
        if seam_edges.contains(&idx) {
            let copy = e.tail / nb;
            graph.add_edge_labelled(e.tail, ((copy + 1) % lift.copies) * nb + v, e.label)?;
        } else {
            graph.add_edge_labelled(e.tail, e.head, e.label)?;
        }
    }
    Ok(Covering { graph, to_base: lift.covering.to_base.clone() })
}
