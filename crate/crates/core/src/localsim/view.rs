use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::graph::{Dir, LDigraph};

/// A letter of `L ∪ L^{-1}`: following an out-edge labelled `label`, or an
/// in-edge when `inverse` is set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Step {
    pub label: String,
    pub inverse: bool,
}

impl Step {
    pub fn new(label: impl Into<String>, inverse: bool) -> Self {
        Self { label: label.into(), inverse }
    }

    pub fn out(label: impl Into<String>) -> Self {
        Self::new(label, false)
    }

    pub fn back(label: impl Into<String>) -> Self {
        Self::new(label, true)
    }

    pub fn dir(&self) -> Dir {
        if self.inverse {
            Dir::In
        } else {
            Dir::Out
        }
    }

    pub fn cancels(&self, other: &Step) -> bool {
        self.label == other.label && self.inverse != other.inverse
    }
}

/// A reduced word; the empty word is the root `λ`.
pub type Word = Vec<Step>;

pub fn format_word(w: &[Step]) -> String {
    if w.is_empty() {
        return "λ".to_string();
    }
    w.iter().map(|s| if s.inverse { format!("{}^-1", s.label) } else { s.label.clone() }).collect::<Vec<_>>().join(" ")
}

/// Local input of one vertex, copied to every view node projecting onto it.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LocalInput {
    #[default]
    None,
    Vertex(bool),
    /// Selected incident half-edges by (label, direction).
    Edges(BTreeSet<(String, Dir)>),
}

impl LocalInput {
    pub fn selected(&self) -> bool {
        matches!(self, LocalInput::Vertex(true))
    }

    pub fn edges(&self) -> Option<&BTreeSet<(String, Dir)>> {
        match self {
            LocalInput::Edges(e) => Some(e),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ViewNode {
    pub word: Word,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

impl ViewNode {
    pub fn depth(&self) -> usize {
        self.word.len()
    }

    pub fn last(&self) -> Option<&Step> {
        self.word.last()
    }
}

/// Shape of a truncated view: nodes in breadth-first order with children
/// sorted by letter (label, then out before in).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ViewShape {
    pub radius: usize,
    pub nodes: Vec<ViewNode>,
}

impl ViewShape {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn find(&self, word: &[Step]) -> Option<usize> {
        let mut v = 0;
        for s in word {
            v = *self.nodes[v].children.iter().find(|&&c| self.nodes[c].last() == Some(s))?;
        }
        Some(v)
    }

    /// The shape as an L-digraph on node indices; each child is joined to its
    /// parent by an edge oriented as its last letter.
    pub fn to_graph(&self) -> LDigraph {
        let mut labels: Vec<&str> = self.nodes.iter().filter_map(|n| n.last().map(|s| s.label.as_str())).collect();
        labels.sort_unstable();
        labels.dedup();
        let mut g = LDigraph::with_vertices(self.nodes.len(), labels);
        for (i, n) in self.nodes.iter().enumerate() {
            if let (Some(p), Some(s)) = (n.parent, n.last()) {
                let (t, h) = if s.inverse { (i, p) } else { (p, i) };
                g.add_edge(t, h, &s.label).expect("labels collected above");
            }
        }
        g
    }
}

/// The radius-`r` view `T(G, u)` with its projection to `G`.
#[derive(Debug, Clone)]
pub struct ViewTree {
    pub shape: Arc<ViewShape>,
    /// Dense vertex of `G` under every node.
    pub projection: Vec<usize>,
}

impl ViewTree {
    /// The view with each node carrying the input of its projection.
    pub fn with_inputs(&self, inputs: Option<&[LocalInput]>) -> PoView {
        let inputs = match inputs {
            Some(x) => self.projection.iter().map(|&v| x[v].clone()).collect(),
            None => vec![LocalInput::None; self.projection.len()],
        };
        PoView { shape: Arc::clone(&self.shape), inputs }
    }
}

/// Everything a PO rule may look at: the truncated view and local inputs.
#[derive(Debug, Clone)]
pub struct PoView {
    pub shape: Arc<ViewShape>,
    pub inputs: Vec<LocalInput>,
}

impl PoView {
    pub fn radius(&self) -> usize {
        self.shape.radius
    }

    pub fn nodes(&self) -> &[ViewNode] {
        &self.shape.nodes
    }

    pub fn input(&self, node: usize) -> &LocalInput {
        &self.inputs[node]
    }

    /// Children of the root: one per incident half-edge.
    pub fn root_children(&self) -> &[usize] {
        &self.shape.nodes[0].children
    }
}

impl PartialEq for PoView {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape && self.inputs == other.inputs
    }
}

impl Eq for PoView {}

impl Hash for PoView {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.shape.hash(state);
        self.inputs.hash(state);
    }
}

impl fmt::Display for PoView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.shape.nodes.iter().map(|n| format_word(&n.word)).collect();
        write!(f, "{{{}}}", words.join(", "))
    }
}

/// Letters leaving `v`, sorted, with the neighbour reached.
fn letters_at(g: &LDigraph, v: usize) -> Vec<(Step, usize)> {
    let mut out: Vec<(Step, usize)> =
        g.half_edges(v).map(|h| (Step::new(g.label_name(h.label), h.dir == Dir::In), h.other)).collect();
    out.sort();
    out
}

/// All non-backtracking walks of length at most `r` from `u`.
pub fn view_tree(g: &LDigraph, u: usize, r: usize) -> ViewTree {
    let mut nodes = vec![ViewNode { word: Vec::new(), parent: None, children: Vec::new() }];
    let mut projection = vec![u];
    let mut head = 0;
    while head < nodes.len() {
        let i = head;
        head += 1;
        if nodes[i].depth() == r {
            continue;
        }
        for (step, w) in letters_at(g, projection[i]) {
            if nodes[i].last().is_some_and(|l| l.cancels(&step)) {
                continue;
            }
            let mut word = nodes[i].word.clone();
            word.push(step);
            nodes.push(ViewNode { word, parent: Some(i), children: Vec::new() });
            projection.push(w);
            let c = nodes.len() - 1;
            nodes[i].children.push(c);
        }
    }
    ViewTree { shape: Arc::new(ViewShape { radius: r, nodes }), projection }
}

/// The complete radius-`r` tree over `alphabet`: all reduced words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompleteTree {
    pub alphabet: Vec<String>,
    pub shape: ViewShape,
}

impl CompleteTree {
    pub fn len(&self) -> usize {
        self.shape.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shape.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.shape.nodes.iter().map(|n| &n.word)
    }
}

pub fn complete_tree<S: AsRef<str>>(alphabet: &[S], r: usize) -> CompleteTree {
    let mut alphabet: Vec<String> = alphabet.iter().map(|s| s.as_ref().to_string()).collect();
    alphabet.sort();
    alphabet.dedup();
    let letters: Vec<Step> = alphabet.iter().flat_map(|l| [Step::out(l.clone()), Step::back(l.clone())]).collect();
    let mut nodes = vec![ViewNode { word: Vec::new(), parent: None, children: Vec::new() }];
    let mut head = 0;
    while head < nodes.len() {
        let i = head;
        head += 1;
        if nodes[i].depth() == r {
            continue;
        }
        for s in &letters {
            if nodes[i].last().is_some_and(|l| l.cancels(s)) {
                continue;
            }
            let mut word = nodes[i].word.clone();
            word.push(s.clone());
            nodes.push(ViewNode { word, parent: Some(i), children: Vec::new() });
            let c = nodes.len() - 1;
            nodes[i].children.push(c);
        }
    }
    CompleteTree { alphabet, shape: ViewShape { radius: r, nodes } }
}

/// The sub-shape of `tree` on a prefix-closed set of node indices.
pub fn restrict(tree: &ViewShape, keep: &[bool]) -> ViewShape {
    let mut map = vec![usize::MAX; tree.nodes.len()];
    let mut nodes = Vec::new();
    for (i, n) in tree.nodes.iter().enumerate() {
        if !keep[i] {
            continue;
        }
        let parent = n.parent.map(|p| map[p]);
        debug_assert!(parent.is_none_or(|p| p != usize::MAX), "prefix-closed");
        map[i] = nodes.len();
        nodes.push(ViewNode { word: n.word.clone(), parent, children: Vec::new() });
        if let Some(p) = parent {
            let c = nodes.len() - 1;
            nodes[p].children.push(c);
        }
    }
    ViewShape { radius: tree.radius, nodes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ports_to_labels, PortNumberedGraph};

    fn words(t: &ViewTree) -> Vec<String> {
        t.shape.nodes.iter().map(|n| format_word(&n.word)).collect()
    }

    #[test]
    fn cycle_view() {
        let mut g = LDigraph::with_vertices(3, ["a"]);
        for v in 0..3 {
            g.add_edge(v, (v + 1) % 3, "a").unwrap();
        }
        let t = view_tree(&g, 0, 2);
        assert_eq!(words(&t), ["λ", "a", "a^-1", "a a", "a^-1 a^-1"]);
        let aa = t.shape.find(&[Step::out("a"), Step::out("a")]).unwrap();
        assert_eq!(t.projection[aa], 2);
    }

    #[test]
    fn four_vertex_view() {
        let p = PortNumberedGraph::new(
            vec![vec![1, 2, 3], vec![2, 0], vec![0, 1], vec![0]],
            vec![(0, 1), (1, 2), (0, 2), (0, 3)],
        )
        .unwrap();
        let g = ports_to_labels(&p).unwrap();
        let (a, b) = ("(1,2)", "(2,1)");
        let t = view_tree(&g, 0, 3);
        assert_eq!(t.projection[0], 0);
        let w = t.shape.find(&[Step::out(a), Step::out(a), Step::back(b)]).unwrap();
        assert_eq!(t.projection[w], 0);
    }

    #[test]
    fn tree_view_matches_ball() {
        let mut g = LDigraph::with_vertices(5, ["a", "b"]);
        g.add_edge(0, 1, "a").unwrap();
        g.add_edge(0, 2, "b").unwrap();
        g.add_edge(3, 0, "a").unwrap();
        g.add_edge(2, 4, "a").unwrap();
        for r in 0..4 {
            let t = view_tree(&g, 0, r);
            let ball = g.distances(0, Some(r)).iter().filter(|d| d.is_some()).count();
            assert_eq!(t.shape.len(), ball);
        }
    }

    #[test]
    fn complete_trees() {
        assert_eq!(complete_tree(&["a", "b"], 2).len(), 17);
        assert_eq!(complete_tree(&["a"], 2).len(), 5);
        assert_eq!(complete_tree(&["a", "b"], 0).len(), 1);
        let t = complete_tree(&["b", "a"], 1);
        assert_eq!(t.alphabet, ["a", "b"]);
        for n in t.shape.nodes.iter().skip(1) {
            assert_eq!(n.depth(), 1);
        }
        let g = t.shape.to_graph();
        assert!(g.validate_proper_labelling());
        assert_eq!(g.edge_count(), 4);
    }
}
