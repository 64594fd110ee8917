//! Ordered graphs, canonical ordered-neighbourhood types and homogeneity.
//!
//! An ordered graph is `(α, r)`-homogeneous when an `α` fraction of its
//! vertices share one radius-`r` type. [`build_homogeneous_cayley`] produces
//! such graphs with high girth from Cayley graphs of `H = Z_n^d` ordered by
//! restricting the left-invariant order of `U`.

mod ball_type;
mod pipeline;

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigUint;
use num_rational::{Ratio, BigRational};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generators::GeneratorError;
use crate::graph::{GraphError, LDigraph};
use crate::group::GroupError;

pub use ball_type::{ball_type, BallType, LabelMode, Relation, TypeEdge};
pub use pipeline::{
    build_homogeneous_cayley, build_homogeneous_cayley_with, choose_n, implicit_ball, BuildMode, Homogeneous,
    ImplicitBall, ImplicitHandle, MaterializedCayley,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomogeneityError {
    #[error("rank is not a bijection onto 0..{0}")]
    NotABijection(usize),
    #[error("vertex {0} does not exist")]
    UnknownVertex(usize),
    #[error("need n > 2r, got n = {n}, r = {r}")]
    TooSmall { n: u64, r: usize },
    #[error("epsilon must lie strictly between 0 and 1")]
    InvalidEpsilon,
    #[error("generators are not certified for girth > {0}")]
    Uncertified(u32),
    #[error("invalid coordinates: {0}")]
    InvalidCoordinates(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// An L-digraph with a linear order given by `rank`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedGraph {
    pub graph: LDigraph,
    rank: Vec<usize>,
}

impl OrderedGraph {
    pub fn new(graph: LDigraph, rank: Vec<usize>) -> Result<Self, HomogeneityError> {
        let n = graph.vertex_count();
        let mut seen = vec![false; n];
        if rank.len() != n {
            return Err(HomogeneityError::NotABijection(n));
        }
        for &r in &rank {
            if r >= n || std::mem::replace(&mut seen[r], true) {
                return Err(HomogeneityError::NotABijection(n));
            }
        }
        Ok(Self { graph, rank })
    }

    /// Orders vertices by any key, ties broken by dense index.
    pub fn from_keys<K: Ord>(graph: LDigraph, keys: &[K]) -> Result<Self, HomogeneityError> {
        let mut idx: Vec<usize> = (0..graph.vertex_count()).collect();
        idx.sort_by(|&a, &b| keys[a].cmp(&keys[b]).then(a.cmp(&b)));
        let mut rank = vec![0; idx.len()];
        for (r, v) in idx.into_iter().enumerate() {
            rank[v] = r;
        }
        Self::new(graph, rank)
    }

    /// Orders vertices by their external ids.
    pub fn by_ids(graph: LDigraph) -> Self {
        let ids = graph.ids().to_vec();
        Self::from_keys(graph, &ids).expect("ids are distinct")
    }

    pub fn rank(&self) -> &[usize] {
        &self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn cmp(&self, a: usize, b: usize) -> Ordering {
        self.rank[a].cmp(&self.rank[b])
    }

    pub fn tau(&self, u: usize, r: usize) -> Result<BallType, HomogeneityError> {
        self.tau_with(u, r, LabelMode::Labelled)
    }

    pub fn tau_with(&self, u: usize, r: usize, mode: LabelMode) -> Result<BallType, HomogeneityError> {
        if u >= self.vertex_count() {
            return Err(HomogeneityError::UnknownVertex(u));
        }
        Ok(ball_type(&self.graph, u, r, |a, b| Some(self.cmp(a, b)), mode))
    }

    /// Induced ordered subgraph with ranks compressed to `0..len`.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let keys: Vec<usize> = vertices.iter().map(|&v| self.rank[v]).collect();
        Self::from_keys(self.graph.induced_subgraph(vertices), &keys).expect("distinct ranks")
    }

    /// Connected components as ordered graphs, by smallest dense index.
    pub fn components(&self) -> Vec<(Vec<usize>, OrderedGraph)> {
        let (comp, count) = self.graph.component_labels();
        let mut members = vec![Vec::new(); count];
        for (v, &c) in comp.iter().enumerate() {
            members[c].push(v);
        }
        members
            .into_iter()
            .map(|vs| {
                let og = self.induced(&vs);
                (vs, og)
            })
            .collect()
    }
}

/// A radius-`r` ball as an induced subgraph; ids are preserved.
#[derive(Debug, Clone)]
pub struct Ball {
    pub graph: LDigraph,
    /// Dense index of the root inside `graph`.
    pub root: usize,
    /// Dense index in the host graph of every ball vertex.
    pub host: Vec<usize>,
}

pub fn ball(g: &LDigraph, u: usize, r: usize) -> Result<Ball, HomogeneityError> {
    if u >= g.vertex_count() {
        return Err(HomogeneityError::UnknownVertex(u));
    }
    let dist = g.distances(u, Some(r));
    let host: Vec<usize> = (0..g.vertex_count()).filter(|&v| dist[v].is_some()).collect();
    let root = host.iter().position(|&v| v == u).expect("root is in its ball");
    Ok(Ball { graph: g.induced_subgraph(&host), root, host })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeClass {
    pub count: usize,
    pub type_hash: String,
    pub ball_type: BallType,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogeneityReport {
    pub r: usize,
    pub vertices: usize,
    /// Largest class size over `vertices`.
    pub alpha: Ratio<u64>,
    /// Classes by decreasing count, ties by type hash.
    pub classes: Vec<TypeClass>,
}

impl HomogeneityReport {
    pub fn from_types(r: usize, types: &[BallType]) -> Self {
        let mut counts: HashMap<&BallType, usize> = HashMap::new();
        for t in types {
            *counts.entry(t).or_default() += 1;
        }
        let mut classes: Vec<TypeClass> = counts
            .into_iter()
            .map(|(t, count)| TypeClass { count, type_hash: t.type_hash(), ball_type: t.clone() })
            .collect();
        classes.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.type_hash.cmp(&b.type_hash)));
        let top = classes.first().map_or(0, |c| c.count) as u64;
        let alpha = if types.is_empty() { Ratio::zero() } else { Ratio::new(top, types.len() as u64) };
        Self { r, vertices: types.len(), alpha, classes }
    }

    pub fn dominant(&self) -> Option<&BallType> {
        self.classes.first().map(|c| &c.ball_type)
    }

    /// Number of vertices whose type is `t`.
    pub fn count_of(&self, t: &BallType) -> usize {
        self.classes.iter().find(|c| &c.ball_type == t).map_or(0, |c| c.count)
    }
}

/// Type of every vertex.
pub fn vertex_types(og: &OrderedGraph, r: usize, mode: LabelMode) -> Vec<BallType> {
    (0..og.vertex_count()).map(|u| og.tau_with(u, r, mode).expect("valid vertex")).collect()
}

pub fn measure_homogeneity(og: &OrderedGraph, r: usize) -> HomogeneityReport {
    measure_homogeneity_with(og, r, LabelMode::Labelled)
}

pub fn measure_homogeneity_with(og: &OrderedGraph, r: usize, mode: LabelMode) -> HomogeneityReport {
    HomogeneityReport::from_types(r, &vertex_types(og, r, mode))
}

/// `(n - 2r)^d / n^d`, the fraction of inner nodes of `Z_n^d`.
pub fn inner_density(n: u64, d: u32, r: usize) -> Result<BigRational, HomogeneityError> {
    if n <= 2 * r as u64 {
        return Err(HomogeneityError::TooSmall { n, r });
    }
    let num = BigUint::from(n - 2 * r as u64).pow(d);
    let den = BigUint::from(n).pow(d);
    Ok(BigRational::new(num.into(), den.into()))
}

#[cfg(test)]
fn ratio_from_u64(r: Ratio<u64>) -> BigRational {
    BigRational::new((*r.numer()).into(), (*r.denom()).into())
}

pub(crate) fn is_unit_interval(eps: &BigRational) -> bool {
    eps > &BigRational::zero() && eps < &BigRational::one()
}
