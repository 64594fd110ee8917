use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{GraphError, LDigraph};

/// A simple graph with a port numbering and an orientation of every edge.
/// `neighbours[v][i]` is the vertex behind port `i + 1` of `v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortNumberedGraph {
    pub neighbours: Vec<Vec<usize>>,
    /// One `(tail, head)` pair per undirected edge.
    pub orientation: Vec<(usize, usize)>,
}

impl PortNumberedGraph {
    pub fn new(neighbours: Vec<Vec<usize>>, orientation: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let p = Self { neighbours, orientation };
        p.validate()?;
        Ok(p)
    }

    pub fn vertex_count(&self) -> usize {
        self.neighbours.len()
    }

    pub fn max_degree(&self) -> usize {
        self.neighbours.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// 1-based port of `u` at `v`.
    pub fn port(&self, v: usize, u: usize) -> Option<usize> {
        self.neighbours.get(v)?.iter().position(|&w| w == u).map(|i| i + 1)
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        let n = self.vertex_count();
        let bad = |m: String| Err(GraphError::MalformedPorts(m));
        let mut edges = HashSet::new();
        for (v, list) in self.neighbours.iter().enumerate() {
            let mut seen = HashSet::new();
            for &u in list {
                if u >= n {
                    return bad(format!("vertex {v} lists unknown neighbour {u}"));
                }
                if u == v {
                    return bad(format!("self-loop at {v}"));
                }
                if !seen.insert(u) {
                    return bad(format!("vertex {v} lists {u} twice"));
                }
                if !self.neighbours[u].contains(&v) {
                    return bad(format!("{u} is a neighbour of {v} but not conversely"));
                }
                edges.insert((v.min(u), v.max(u)));
            }
        }
        let mut oriented = HashSet::new();
        for &(t, h) in &self.orientation {
            let key = (t.min(h), t.max(h));
            if !edges.contains(&key) {
                return bad(format!("orientation {t}->{h} is not an edge"));
            }
            if !oriented.insert(key) {
                return bad(format!("edge {{{t},{h}}} oriented twice"));
            }
        }
        if oriented.len() != edges.len() {
            return bad(format!("{} of {} edges lack an orientation", edges.len() - oriented.len(), edges.len()));
        }
        Ok(())
    }
}

/// Each oriented edge `v -> u` becomes an edge labelled `(i,j)` where `u` is
/// the `i`-th neighbour of `v` and `v` is the `j`-th neighbour of `u`.
pub fn ports_to_labels(p: &PortNumberedGraph) -> Result<LDigraph, GraphError> {
    p.validate()?;
    let mut labels: Vec<(usize, usize)> = p
        .orientation
        .iter()
        .map(|&(t, h)| (p.port(t, h).expect("validated"), p.port(h, t).expect("validated")))
        .collect();
    let per_edge = labels.clone();
    labels.sort_unstable();
    labels.dedup();
    let mut g = LDigraph::with_vertices(p.vertex_count(), labels.iter().map(|(i, j)| format!("({i},{j})")));
    for (&(t, h), (i, j)) in p.orientation.iter().zip(per_edge) {
        g.add_edge(t, h, &format!("({i},{j})"))?;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Four vertices u, p, q, z = 0..4 with edges a = u->p, a = p->q,
    /// b = u->q, c = u->z.
    fn figure_five() -> PortNumberedGraph {
        PortNumberedGraph::new(
            vec![vec![1, 2, 3], vec![2, 0], vec![0, 1], vec![0]],
            vec![(0, 1), (1, 2), (0, 2), (0, 3)],
        )
        .unwrap()
    }

    #[test]
    fn four_vertex_example() {
        let g = ports_to_labels(&figure_five()).unwrap();
        assert_eq!(g.alphabet(), &["(1,2)", "(2,1)", "(3,1)"]);
        let labels: Vec<&str> = g.edges().iter().map(|e| g.label_name(e.label)).collect();
        assert_eq!(labels, ["(1,2)", "(1,2)", "(2,1)", "(3,1)"]);
        assert!(g.validate_proper_labelling());
        assert!(g.alphabet().len() <= figure_five().max_degree().pow(2));
    }

    #[test]
    fn single_edge() {
        let p = PortNumberedGraph::new(vec![vec![1], vec![0]], vec![(0, 1)]).unwrap();
        let g = ports_to_labels(&p).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.alphabet(), &["(1,1)"]);
    }

    #[test]
    fn malformed_ports() {
        let asym = PortNumberedGraph { neighbours: vec![vec![1], vec![]], orientation: vec![(0, 1)] };
        assert!(matches!(ports_to_labels(&asym), Err(GraphError::MalformedPorts(_))));
        let missing = PortNumberedGraph { neighbours: vec![vec![1], vec![0]], orientation: vec![] };
        assert!(missing.validate().is_err());
        let twice = PortNumberedGraph { neighbours: vec![vec![1], vec![0]], orientation: vec![(0, 1), (1, 0)] };
        assert!(twice.validate().is_err());
        let dup = PortNumberedGraph { neighbours: vec![vec![1, 1], vec![0]], orientation: vec![(0, 1)] };
        assert!(dup.validate().is_err());
    }
}
