use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::graph::{Dir, LDigraph};

/// Whether edge labels and orientations are part of a type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelMode {
    #[default]
    Labelled,
    /// Plain graphs: labels and orientations are dropped and neighbours are
    /// visited in increasing order. Canonical only for total orders.
    Unlabelled,
}

/// Relation between two ball vertices, by discovery index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Relation {
    Less,
    Greater,
    Incomparable,
}

impl From<Option<Ordering>> for Relation {
    fn from(o: Option<Ordering>) -> Self {
        match o {
            Some(Ordering::Less) => Relation::Less,
            Some(Ordering::Greater) => Relation::Greater,
            _ => Relation::Incomparable,
        }
    }
}

/// A half-edge record of the canonical traversal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeEdge {
    pub from: u32,
    pub to: u32,
    pub label: Option<String>,
    pub dir: Option<Dir>,
}

/// Canonical form of an ordered rooted radius-`r` ball.
///
/// Vertices are numbered by a breadth-first traversal from the root that
/// visits half-edges by (label, out before in). Every half-edge at every
/// vertex is recorded, so back-edges appear with their discovery index. The
/// order is stored as the relation of each pair `i < j` of discovery indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BallType {
    pub radius: usize,
    pub vertex_count: usize,
    pub edges: Vec<TypeEdge>,
    pub order: Vec<Relation>,
}

impl BallType {
    fn pair_index(&self, i: usize, j: usize) -> usize {
        let n = self.vertex_count;
        i * (2 * n - i - 1) / 2 + (j - i - 1)
    }

    /// Relation of discovery indices `i` and `j`.
    pub fn relation(&self, i: usize, j: usize) -> Option<Ordering> {
        match i.cmp(&j) {
            Ordering::Equal => Some(Ordering::Equal),
            Ordering::Less => match self.order[self.pair_index(i, j)] {
                Relation::Less => Some(Ordering::Less),
                Relation::Greater => Some(Ordering::Greater),
                Relation::Incomparable => None,
            },
            Ordering::Greater => self.relation(j, i).map(Ordering::reverse),
        }
    }

    pub fn is_total(&self) -> bool {
        !self.order.contains(&Relation::Incomparable)
    }

    /// Rank of every discovery index when the order is total.
    pub fn ranks(&self) -> Option<Vec<usize>> {
        if !self.is_total() {
            return None;
        }
        Some(
            (0..self.vertex_count)
                .map(|i| (0..self.vertex_count).filter(|&j| self.relation(j, i) == Some(Ordering::Less)).count())
                .collect(),
        )
    }

    /// Number of distinct edges of the ball.
    pub fn edge_count(&self) -> usize {
        match self.edges.first().map(|e| e.dir.is_some()) {
            Some(true) => self.edges.iter().filter(|e| e.dir == Some(Dir::Out)).count(),
            _ => self.edges.len() / 2,
        }
    }

    pub fn is_tree(&self) -> bool {
        self.edge_count() + 1 == self.vertex_count
    }

    /// The ball as an L-digraph on discovery indices (root 0), with its
    /// alphabet sorted. `None` for unlabelled types.
    pub fn to_graph(&self) -> Option<LDigraph> {
        if self.edges.iter().any(|e| e.dir.is_none()) {
            return None;
        }
        let mut alphabet: Vec<&str> = self.edges.iter().filter_map(|e| e.label.as_deref()).collect();
        alphabet.sort_unstable();
        alphabet.dedup();
        let mut g = LDigraph::with_vertices(self.vertex_count, alphabet);
        for e in self.edges.iter().filter(|e| e.dir == Some(Dir::Out)) {
            g.add_edge(e.from as usize, e.to as usize, e.label.as_deref().unwrap_or(""))
                .expect("edges refer to ball vertices");
        }
        Some(g)
    }

    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = b"tau1".to_vec();
        let push = |out: &mut Vec<u8>, x: usize| out.extend_from_slice(&(x as u32).to_le_bytes());
        push(&mut out, self.radius);
        push(&mut out, self.vertex_count);
        push(&mut out, self.edges.len());
        for e in &self.edges {
            push(&mut out, e.from as usize);
            push(&mut out, e.to as usize);
            out.push(match e.dir {
                Some(Dir::Out) => 0,
                Some(Dir::In) => 1,
                None => 2,
            });
            match &e.label {
                Some(l) => {
                    push(&mut out, l.len());
                    out.extend_from_slice(l.as_bytes());
                }
                None => out.extend_from_slice(&u32::MAX.to_le_bytes()),
            }
        }
        out.extend(self.order.iter().map(|r| *r as u8));
        out
    }

    /// Hex SHA-256 of the canonical bytes.
    pub fn type_hash(&self) -> String {
        Sha256::digest(self.canonical_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Type of the ball of radius `r` around `root` in `g`, ordered by `order`
/// (which may leave pairs incomparable).
pub fn ball_type<F>(g: &LDigraph, root: usize, r: usize, order: F, mode: LabelMode) -> BallType
where
    F: Fn(usize, usize) -> Option<Ordering>,
{
    let mut dist: HashMap<usize, usize> = HashMap::from([(root, 0)]);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        if du == r {
            continue;
        }
        for h in g.half_edges(u) {
            if let std::collections::hash_map::Entry::Vacant(slot) = dist.entry(h.other) {
                slot.insert(du + 1);
                queue.push_back(h.other);
            }
        }
    }

    let mut disc: HashMap<usize, u32> = HashMap::from([(root, 0)]);
    let mut list = vec![root];
    let mut edges = Vec::new();
    let mut head = 0;
    while head < list.len() {
        let v = list[head];
        head += 1;
        let mut incident: Vec<_> = g.half_edges(v).filter(|h| dist.contains_key(&h.other)).collect();
        match mode {
            LabelMode::Labelled => incident.sort_by(|a, b| {
                (g.label_name(a.label), a.dir)
                    .cmp(&(g.label_name(b.label), b.dir))
                    .then_with(|| order(a.other, b.other).unwrap_or(Ordering::Equal))
            }),
            LabelMode::Unlabelled => incident.sort_by(|a, b| order(a.other, b.other).unwrap_or(Ordering::Equal)),
        }
        for h in incident {
            let next = disc.len() as u32;
            let to = *disc.entry(h.other).or_insert_with(|| {
                list.push(h.other);
                next
            });
            let from = disc[&v];
            edges.push(match mode {
                LabelMode::Labelled => {
                    TypeEdge { from, to, label: Some(g.label_name(h.label).to_string()), dir: Some(h.dir) }
                }
                LabelMode::Unlabelled => TypeEdge { from, to, label: None, dir: None },
            });
        }
    }

    let n = list.len();
    let mut relations = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            relations.push(Relation::from(order(list[i], list[j])));
        }
    }
    BallType { radius: r, vertex_count: n, edges, order: relations }
}
