//! Constant-time distributed algorithms in the PO, OI and ID models, with
//! local verifiers for simple graph problems.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Dir, GraphError, LDigraph};
use crate::homogeneity::{ball, ball_type, BallType, LabelMode};

mod builtin;
mod problems;
mod view;

pub use builtin::{builtin, builtin_names, builtin_with_radius, po_from_oi, TreeOrder};
pub use problems::{approx_ratio, brute_force_optimum, verify_detailed, verify_solution, Objective, Problem, RatioOutcome, BRUTE_FORCE_LIMIT};
pub use view::{complete_tree, format_word, restrict, view_tree, CompleteTree, LocalInput, PoView, Step, ViewNode, ViewShape, ViewTree, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("{model} algorithm needs {what}")]
    MissingInput { model: Model, what: &'static str },
    #[error("identifier {id} of vertex {vertex} is outside 1..={max}")]
    IdOutOfRange { vertex: usize, id: u64, max: u128 },
    #[error("identifier {0} is used twice")]
    DuplicateId(u64),
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("endpoints of edge {edge} disagree on whether it is selected")]
    EdgeConflict { edge: usize },
    #[error("vertex {vertex} produced {found} where {expected} output was expected")]
    WrongOutput { vertex: usize, expected: &'static str, found: &'static str },
    #[error("vertex {vertex} selected a half-edge it does not have: {label} {dir:?}")]
    UnknownHalfEdge { vertex: usize, label: String, dir: Dir },
    #[error("rule failed at vertex {vertex}: {message}")]
    Rule { vertex: usize, message: String },
    #[error("brute force is limited to {limit} elements, instance has {size}")]
    TooLarge { size: usize, limit: usize },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Model {
    Po,
    Oi,
    Id,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Po => "PO",
            Model::Oi => "OI",
            Model::Id => "ID",
        })
    }
}

/// Whether a solution is a set of vertices or a set of edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolutionKind {
    Vertex,
    Edge,
}

/// Output of one vertex: a bit, or the incident half-edges it selects.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Output {
    Bit(bool),
    Edges(BTreeSet<(String, Dir)>),
}

impl Output {
    fn name(&self) -> &'static str {
        match self {
            Output::Bit(_) => "a bit",
            Output::Edges(_) => "an edge set",
        }
    }
}

/// The radius-`r` ball of an ID algorithm; vertex ids are the identifiers.
#[derive(Debug, Clone, PartialEq)]
pub struct IdBall {
    pub graph: LDigraph,
    pub root: usize,
    pub radius: usize,
}

pub type RuleResult = Result<Output, String>;

#[derive(Clone)]
pub enum Rule {
    Po(Arc<dyn Fn(&PoView) -> RuleResult + Send + Sync>),
    Oi(Arc<dyn Fn(&BallType) -> RuleResult + Send + Sync>),
    Id(Arc<dyn Fn(&IdBall) -> RuleResult + Send + Sync>),
}

#[derive(Clone)]
pub struct LocalAlgorithm {
    pub name: String,
    pub radius: usize,
    pub kind: SolutionKind,
    pub rule: Rule,
}

impl fmt::Debug for LocalAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocalAlgorithm")
            .field("name", &self.name)
            .field("model", &self.model())
            .field("radius", &self.radius)
            .field("kind", &self.kind)
            .finish()
    }
}

impl LocalAlgorithm {
    pub fn po<F>(name: &str, radius: usize, kind: SolutionKind, f: F) -> Self
    where
        F: Fn(&PoView) -> RuleResult + Send + Sync + 'static,
    {
        Self { name: name.into(), radius, kind, rule: Rule::Po(Arc::new(f)) }
    }

    pub fn oi<F>(name: &str, radius: usize, kind: SolutionKind, f: F) -> Self
    where
        F: Fn(&BallType) -> RuleResult + Send + Sync + 'static,
    {
        Self { name: name.into(), radius, kind, rule: Rule::Oi(Arc::new(f)) }
    }

    pub fn id<F>(name: &str, radius: usize, kind: SolutionKind, f: F) -> Self
    where
        F: Fn(&IdBall) -> RuleResult + Send + Sync + 'static,
    {
        Self { name: name.into(), radius, kind, rule: Rule::Id(Arc::new(f)) }
    }

    pub fn model(&self) -> Model {
        match self.rule {
            Rule::Po(_) => Model::Po,
            Rule::Oi(_) => Model::Oi,
            Rule::Id(_) => Model::Id,
        }
    }
}

/// Everything besides the graph that a run may consume.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunInputs<'a> {
    /// Rank of every vertex (OI).
    pub ranks: Option<&'a [usize]>,
    /// Identifier of every vertex (ID); must lie in `1..=n^2`.
    pub ids: Option<&'a [u64]>,
    /// Local inputs (PO), e.g. a candidate solution for a verifier.
    pub local: Option<&'a [LocalInput]>,
}

impl<'a> RunInputs<'a> {
    pub fn ranks(ranks: &'a [usize]) -> Self {
        Self { ranks: Some(ranks), ..Self::default() }
    }

    pub fn ids(ids: &'a [u64]) -> Self {
        Self { ids: Some(ids), ..Self::default() }
    }

    pub fn local(local: &'a [LocalInput]) -> Self {
        Self { local: Some(local), ..Self::default() }
    }
}

/// Result of running an algorithm: per-vertex outputs and the selected set
/// (dense vertex indices or edge indices).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub kind: SolutionKind,
    pub members: Vec<usize>,
    pub outputs: Vec<Output>,
}

impl Solution {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn vertex_set(g: &LDigraph, members: &[usize]) -> Result<Self, SimError> {
        let mut bits = vec![false; g.vertex_count()];
        for &v in members {
            *bits.get_mut(v).ok_or(GraphError::UnknownVertex(v as u64))? = true;
        }
        Self::from_outputs(g, SolutionKind::Vertex, bits.into_iter().map(Output::Bit).collect())
    }

    pub fn edge_set(g: &LDigraph, members: &[usize]) -> Result<Self, SimError> {
        let mut sets = vec![BTreeSet::new(); g.vertex_count()];
        for &e in members {
            if e >= g.edge_count() {
                return Err(SimError::Invalid(format!("edge {e} does not exist")));
            }
            let edge = g.edge(e);
            let l = g.label_name(edge.label).to_string();
            sets[edge.tail].insert((l.clone(), Dir::Out));
            sets[edge.head].insert((l, Dir::In));
        }
        Self::from_outputs(g, SolutionKind::Edge, sets.into_iter().map(Output::Edges).collect())
    }

    /// Assembles a solution from per-vertex outputs, checking that both
    /// endpoints of every edge agree.
    pub fn from_outputs(g: &LDigraph, kind: SolutionKind, outputs: Vec<Output>) -> Result<Self, SimError> {
        if outputs.len() != g.vertex_count() {
            return Err(SimError::LengthMismatch { expected: g.vertex_count(), got: outputs.len() });
        }
        let mut members = Vec::new();
        match kind {
            SolutionKind::Vertex => {
                for (v, o) in outputs.iter().enumerate() {
                    match o {
                        Output::Bit(true) => members.push(v),
                        Output::Bit(false) => {}
                        other => {
                            return Err(SimError::WrongOutput { vertex: v, expected: "a bit", found: other.name() })
                        }
                    }
                }
            }
            SolutionKind::Edge => {
                let mut sets = Vec::with_capacity(outputs.len());
                for (v, o) in outputs.iter().enumerate() {
                    match o {
                        Output::Edges(s) => {
                            for (l, d) in s {
                                let known = g.label_of(l).ok().and_then(|l| g.half_edge(v, l, *d)).is_some();
                                if !known {
                                    return Err(SimError::UnknownHalfEdge { vertex: v, label: l.clone(), dir: *d });
                                }
                            }
                            sets.push(s);
                        }
                        other => {
                            return Err(SimError::WrongOutput { vertex: v, expected: "an edge set", found: other.name() })
                        }
                    }
                }
                for (e, edge) in g.edges().iter().enumerate() {
                    let l = g.label_name(edge.label).to_string();
                    let at_tail = sets[edge.tail].contains(&(l.clone(), Dir::Out));
                    let at_head = sets[edge.head].contains(&(l, Dir::In));
                    if at_tail != at_head {
                        return Err(SimError::EdgeConflict { edge: e });
                    }
                    if at_tail {
                        members.push(e);
                    }
                }
            }
        }
        Ok(Self { kind, members, outputs })
    }

    /// Local inputs encoding this solution, for feeding it to a verifier.
    pub fn local_inputs(&self) -> Vec<LocalInput> {
        self.outputs
            .iter()
            .map(|o| match o {
                Output::Bit(b) => LocalInput::Vertex(*b),
                Output::Edges(s) => LocalInput::Edges(s.clone()),
            })
            .collect()
    }

    /// Members as vertex ids, or as `[tail id, head id, label]` triples.
    pub fn to_json(&self, g: &LDigraph) -> serde_json::Value {
        let members: Vec<serde_json::Value> = match self.kind {
            SolutionKind::Vertex => self.members.iter().map(|&v| g.id(v).into()).collect(),
            SolutionKind::Edge => self
                .members
                .iter()
                .map(|&e| {
                    let edge = g.edge(e);
                    serde_json::json!([g.id(edge.tail), g.id(edge.head), g.label_name(edge.label)])
                })
                .collect(),
        };
        serde_json::json!({ "kind": self.kind, "size": self.members.len(), "members": members })
    }
}

fn check_ids(ids: &[u64], n: usize) -> Result<(), SimError> {
    let max = (n as u128) * (n as u128);
    let mut seen = std::collections::HashSet::new();
    for (v, &id) in ids.iter().enumerate() {
        if id == 0 || id as u128 > max {
            return Err(SimError::IdOutOfRange { vertex: v, id, max });
        }
        if !seen.insert(id) {
            return Err(SimError::DuplicateId(id));
        }
    }
    Ok(())
}

fn check_len<T>(x: &[T], n: usize) -> Result<(), SimError> {
    if x.len() == n {
        Ok(())
    } else {
        Err(SimError::LengthMismatch { expected: n, got: x.len() })
    }
}

/// Evaluates `f` once per distinct key, so equal inputs give equal outputs.
fn memoised<K: Hash + Eq, F>(keys: Vec<K>, f: F) -> Result<Vec<Output>, SimError>
where
    F: Fn(&K) -> RuleResult,
{
    let mut cache: HashMap<K, Output> = HashMap::new();
    let mut out = Vec::with_capacity(keys.len());
    for (v, k) in keys.into_iter().enumerate() {
        if let Some(o) = cache.get(&k) {
            out.push(o.clone());
            continue;
        }
        let o = f(&k).map_err(|message| SimError::Rule { vertex: v, message })?;
        cache.insert(k, o.clone());
        out.push(o);
    }
    Ok(out)
}

/// The ball of radius `r` around `u` with vertex ids replaced by `ids`.
pub fn id_ball(g: &LDigraph, u: usize, r: usize, ids: &[u64]) -> Result<IdBall, SimError> {
    let b = ball(g, u, r).map_err(|e| SimError::Invalid(e.to_string()))?;
    let mut out = LDigraph::new(b.graph.alphabet().iter().cloned());
    for &h in &b.host {
        out.add_vertex(ids[h])?;
    }
    for e in b.graph.edges() {
        out.add_edge_labelled(e.tail, e.head, e.label)?;
    }
    Ok(IdBall { graph: out, root: b.root, radius: r })
}

/// Runs `alg` at every vertex of `g`.
pub fn run(alg: &LocalAlgorithm, g: &LDigraph, inputs: RunInputs<'_>) -> Result<Solution, SimError> {
    let n = g.vertex_count();
    let r = alg.radius;
    let outputs = match &alg.rule {
        Rule::Po(f) => {
            if let Some(x) = inputs.local {
                check_len(x, n)?;
            }
            let views: Vec<PoView> = (0..n).map(|u| view_tree(g, u, r).with_inputs(inputs.local)).collect();
            memoised(views, |v| f(v))?
        }
        Rule::Oi(f) => {
            let ranks = inputs.ranks.ok_or(SimError::MissingInput { model: Model::Oi, what: "a vertex order" })?;
            check_len(ranks, n)?;
            let types: Vec<BallType> = (0..n)
                .map(|u| ball_type(g, u, r, |a, b| Some(ranks[a].cmp(&ranks[b])), LabelMode::Labelled))
                .collect();
            memoised(types, |t| f(t))?
        }
        Rule::Id(f) => {
            let ids = inputs.ids.ok_or(SimError::MissingInput { model: Model::Id, what: "identifiers" })?;
            check_len(ids, n)?;
            check_ids(ids, n)?;
            let mut out = Vec::with_capacity(n);
            for u in 0..n {
                let b = id_ball(g, u, r, ids)?;
                out.push(f(&b).map_err(|message| SimError::Rule { vertex: u, message })?);
            }
            out
        }
    };
    Solution::from_outputs(g, alg.kind, outputs)
}

/// Fraction of vertices on which two runs produce the same output.
pub fn agreement_fraction(a: &Solution, b: &Solution) -> Result<Ratio<u64>, SimError> {
    check_len(&b.outputs, a.outputs.len())?;
    if a.outputs.is_empty() {
        return Ok(Ratio::from_integer(1));
    }
    let same = a.outputs.iter().zip(&b.outputs).filter(|(x, y)| x == y).count();
    Ok(Ratio::new(same as u64, a.outputs.len() as u64))
}

/// Outputs of `base` pulled back along a covering map.
pub fn pull_back(base: &Solution, to_base: &[usize]) -> Vec<Output> {
    to_base.iter().map(|&b| base.outputs[b].clone()).collect()
}

/// Ranks `0..n` read off a comparison function on `0..n`.
pub fn ranks_from_cmp<F: Fn(usize, usize) -> Ordering>(n: usize, cmp: F) -> Vec<usize> {
    let mut by: Vec<usize> = (0..n).collect();
    by.sort_by(|&a, &b| cmp(a, b));
    let mut rank = vec![0; n];
    for (i, v) in by.into_iter().enumerate() {
        rank[v] = i;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::directed_cycle;

    #[test]
    fn po_outputs_are_view_functions() {
        let g = directed_cycle(7, "a");
        let s = run(&builtin("po-all").unwrap(), &g, RunInputs::default()).unwrap();
        assert_eq!(s.len(), 7);
        let s = run(&builtin("po-none").unwrap(), &g, RunInputs::default()).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn missing_inputs() {
        let g = directed_cycle(4, "a");
        let oi = builtin("oi-min-rank").unwrap();
        assert!(matches!(run(&oi, &g, RunInputs::default()), Err(SimError::MissingInput { model: Model::Oi, .. })));
        let id = builtin("id-min").unwrap();
        assert!(matches!(run(&id, &g, RunInputs::default()), Err(SimError::MissingInput { .. })));
        assert!(matches!(run(&id, &g, RunInputs::ids(&[1, 2, 3, 17])), Err(SimError::IdOutOfRange { .. })));
        assert!(matches!(run(&id, &g, RunInputs::ids(&[1, 2, 2, 3])), Err(SimError::DuplicateId(2))));
        assert!(matches!(run(&id, &g, RunInputs::ids(&[1, 2])), Err(SimError::LengthMismatch { .. })));
        assert!(run(&id, &g, RunInputs::ids(&[16, 2, 9, 1])).is_ok());
    }

    #[test]
    fn oi_min_rank_on_cycle() {
        let g = directed_cycle(6, "a");
        let ranks = [3, 0, 4, 1, 5, 2];
        let s = run(&builtin("oi-min-rank").unwrap(), &g, RunInputs::ranks(&ranks)).unwrap();
        assert_eq!(s.members, vec![1, 3, 5]);
        let s = run(&builtin("oi-local-max").unwrap(), &g, RunInputs::ranks(&ranks)).unwrap();
        assert_eq!(s.members, vec![0, 2, 4]);
    }

    #[test]
    fn id_models() {
        let g = directed_cycle(5, "a");
        let ids = [10, 3, 7, 25, 4];
        let s = run(&builtin("id-min").unwrap(), &g, RunInputs::ids(&ids)).unwrap();
        assert_eq!(s.members, vec![1, 4]);
        let s = run(&builtin("id-parity").unwrap(), &g, RunInputs::ids(&ids)).unwrap();
        assert_eq!(s.members, vec![0, 4]);
    }

    #[test]
    fn edge_solutions() {
        let g = directed_cycle(4, "a");
        let s = Solution::edge_set(&g, &[0, 2]).unwrap();
        assert_eq!(s.members, vec![0, 2]);
        let again = Solution::from_outputs(&g, SolutionKind::Edge, s.outputs.clone()).unwrap();
        assert_eq!(again, s);
        let mut bad = s.outputs.clone();
        bad[1] = Output::Edges(BTreeSet::new());
        assert_eq!(Solution::from_outputs(&g, SolutionKind::Edge, bad), Err(SimError::EdgeConflict { edge: 0 }));
        let stray = vec![Output::Edges(BTreeSet::from([("b".to_string(), Dir::Out)])); 4];
        assert!(matches!(Solution::from_outputs(&g, SolutionKind::Edge, stray), Err(SimError::UnknownHalfEdge { .. })));
        let json = s.to_json(&g);
        assert_eq!(json["size"], 2);
    }

    #[test]
    fn min_out_edge_is_consistent() {
        let mut g = LDigraph::with_vertices(4, ["a", "b", "c"]);
        g.add_edge(0, 1, "b").unwrap();
        g.add_edge(0, 2, "c").unwrap();
        g.add_edge(1, 2, "a").unwrap();
        g.add_edge(3, 1, "c").unwrap();
        g.add_edge(2, 2, "b").unwrap();
        let s = run(&builtin("po-min-out-edge").unwrap(), &g, RunInputs::default()).unwrap();
        assert_eq!(s.members, vec![0, 2, 3, 4]);
    }

    #[test]
    fn agreement() {
        let g = directed_cycle(4, "a");
        let a = Solution::vertex_set(&g, &[0, 1]).unwrap();
        let b = Solution::vertex_set(&g, &[0, 2]).unwrap();
        assert_eq!(agreement_fraction(&a, &b).unwrap(), Ratio::new(1, 2));
        assert_eq!(agreement_fraction(&a, &a).unwrap(), Ratio::from_integer(1));
    }
}
