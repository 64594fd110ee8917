//! Colourings of identifier sets by the behaviour they induce on an ID
//! algorithm, brute-force monochromatic subset search, and identifier-assigned
//! disjoint-union lifts.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::graph::{GraphError, LDigraph};
use crate::lifts::{connect_seam, Covering, DisjointLift, LiftError};
use crate::localsim::{restrict, IdBall, LocalAlgorithm, Output, Rule, TreeOrder, ViewShape};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RamseyError {
    #[error("cannot inject {from} elements into {to}")]
    SizeViolation { from: usize, to: usize },
    #[error("search budget of {0} steps exceeded")]
    BudgetExceeded(u64),
    #[error("identifier {0} appears in two subsets")]
    Overlap(u64),
    #[error("identifier {id} exceeds the range 1..={max}")]
    IdRange { id: u64, max: u128 },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The order-preserving injection of `x` into `y`: the `i`-th smallest element
/// of `x` maps to the `i`-th smallest of `y`.
pub fn order_injection<T: Ord + Clone + Hash + Eq>(x: &[T], y: &[T]) -> Result<HashMap<T, T>, RamseyError> {
    if x.len() > y.len() {
        return Err(RamseyError::SizeViolation { from: x.len(), to: y.len() });
    }
    let mut xs = x.to_vec();
    let mut ys = y.to_vec();
    xs.sort();
    ys.sort();
    Ok(xs.into_iter().zip(ys).collect())
}

/// Prefix-closed node sets of `tree` containing the root in which every
/// node has degree at most `delta`, in lexicographic order of membership
/// vectors. Fails once more than `limit` sets have been produced.
pub fn realizable_subtrees(tree: &ViewShape, delta: usize, limit: usize) -> Result<Vec<Vec<bool>>, RamseyError> {
    fn go(
        tree: &ViewShape,
        delta: usize,
        limit: usize,
        i: usize,
        keep: &mut Vec<bool>,
        deg: &mut Vec<usize>,
        out: &mut Vec<Vec<bool>>,
    ) -> Result<(), RamseyError> {
        if i == tree.len() {
            if out.len() == limit {
                return Err(RamseyError::BudgetExceeded(limit as u64));
            }
            out.push(keep.clone());
            return Ok(());
        }
        keep.push(false);
        go(tree, delta, limit, i + 1, keep, deg, out)?;
        keep.pop();
        let p = tree.nodes[i].parent.expect("only the root lacks a parent");
        if keep[p] && deg[p] < delta && delta > 0 {
            deg[p] += 1;
            deg[i] = 1;
            keep.push(true);
            go(tree, delta, limit, i + 1, keep, deg, out)?;
            keep.pop();
            deg[i] = 0;
            deg[p] -= 1;
        }
        Ok(())
    }
    let mut out = Vec::new();
    let mut deg = vec![0; tree.len()];
    let mut keep = vec![true];
    go(tree, delta, limit, 1, &mut keep, &mut deg, &mut out)?;
    Ok(out)
}

/// A table `W ↦ A(f_{W,a}((T*, λ) ↾ W))` for one identifier set `a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColorTable(pub Vec<Output>);

impl ColorTable {
    /// Hex SHA-256 of the table; used as the colour id.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(&self.0).expect("outputs serialize");
        Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Colours `t`-subsets of identifiers (`t = |T*|`) by the behaviour of an ID
/// algorithm on every realizable ordered subtree of `T*`.
#[derive(Clone)]
pub struct Colorer {
    pub tree: ViewShape,
    /// Rank of every node of `tree` under `<*`.
    pub ranks: Vec<usize>,
    pub keys: Vec<Vec<bool>>,
    alg: LocalAlgorithm,
}

impl std::fmt::Debug for Colorer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Colorer").field("t", &self.t()).field("keys", &self.keys.len()).field("alg", &self.alg).finish()
    }
}

/// Default cap on the number of enumerated subtrees.
pub const DEFAULT_KEY_LIMIT: usize = 100_000;

impl Colorer {
    pub fn new(tree: ViewShape, ranks: Vec<usize>, delta: usize, alg: LocalAlgorithm) -> Result<Self, RamseyError> {
        if !matches!(alg.rule, Rule::Id(_)) {
            return Err(RamseyError::Invalid(format!("{} is not an ID algorithm", alg.name)));
        }
        if ranks.len() != tree.len() {
            return Err(RamseyError::Invalid(format!("expected {} ranks, got {}", tree.len(), ranks.len())));
        }
        let keys = realizable_subtrees(&tree, delta, DEFAULT_KEY_LIMIT)?;
        Ok(Self { tree, ranks, keys, alg })
    }

    /// `T*` and `<*` taken from a reference order such as the one of `τ*`,
    /// truncated to the radius of `alg`.
    pub fn from_order(order: &TreeOrder, alphabet: &[String], delta: usize, alg: LocalAlgorithm) -> Result<Self, RamseyError> {
        let tree = crate::localsim::complete_tree(alphabet, alg.radius).shape;
        let ranks = tree
            .nodes
            .iter()
            .map(|n| order.rank_of(&n.word))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| RamseyError::Invalid("reference order does not cover T*".into()))?;
        let mut by: Vec<usize> = (0..ranks.len()).collect();
        by.sort_by_key(|&i| ranks[i]);
        let mut dense = vec![0; ranks.len()];
        for (r, i) in by.into_iter().enumerate() {
            dense[i] = r;
        }
        Self::new(tree, dense, delta, alg)
    }

    pub fn t(&self) -> usize {
        self.tree.len()
    }

    pub fn color(&self, a: &[u64]) -> Result<ColorTable, RamseyError> {
        if a.len() != self.t() {
            return Err(RamseyError::SizeViolation { from: a.len(), to: self.t() });
        }
        let Rule::Id(f) = &self.alg.rule else { unreachable!("checked in new") };
        let mut ids = a.to_vec();
        ids.sort_unstable();
        let mut table = Vec::with_capacity(self.keys.len());
        for keep in &self.keys {
            let sub = restrict(&self.tree, keep);
            let members: Vec<usize> = (0..self.tree.len()).filter(|&i| keep[i]).collect();
            let mut order: Vec<usize> = (0..members.len()).collect();
            order.sort_by_key(|&j| self.ranks[members[j]]);
            let mut node_id = vec![0; members.len()];
            for (k, j) in order.into_iter().enumerate() {
                node_id[j] = ids[k];
            }
            let shape = sub.to_graph();
            let mut g = LDigraph::new(shape.alphabet().iter().cloned());
            for &id in &node_id {
                g.add_vertex(id)?;
            }
            for e in shape.edges() {
                g.add_edge_labelled(e.tail, e.head, e.label)?;
            }
            let out = f(&IdBall { graph: g, root: 0, radius: self.alg.radius }).map_err(RamseyError::Invalid)?;
            table.push(out);
        }
        Ok(ColorTable(table))
    }
}

/// Lexicographically first `m`-subset of `pool` all of whose `t`-subsets get
/// the same colour, by backtracking. `Ok(None)` means no such subset exists;
/// running out of `budget` colour evaluations is an error.
pub fn find_monochromatic<C, F>(pool: &[u64], t: usize, m: usize, mut colorer: F, budget: u64) -> Result<Option<Vec<u64>>, RamseyError>
where
    C: Eq + Clone,
    F: FnMut(&[u64]) -> Result<C, RamseyError>,
{
    if t == 0 || m < t || pool.len() < m {
        return Err(RamseyError::Invalid(format!("need |pool| >= m >= t >= 1, got {} {m} {t}", pool.len())));
    }
    let mut pool = pool.to_vec();
    pool.sort_unstable();
    pool.dedup();
    let mut cache: HashMap<Vec<u64>, C> = HashMap::new();
    let mut spent = 0u64;
    let mut eval = |s: &[u64], spent: &mut u64| -> Result<C, RamseyError> {
        if let Some(c) = cache.get(s) {
            return Ok(c.clone());
        }
        *spent += 1;
        if *spent > budget {
            return Err(RamseyError::BudgetExceeded(budget));
        }
        let c = colorer(s)?;
        cache.insert(s.to_vec(), c.clone());
        Ok(c)
    };

    struct Frame {
        next: usize,
    }
    let mut chosen: Vec<u64> = Vec::new();
    let mut reference: Option<C> = None;
    let mut stack = vec![Frame { next: 0 }];
    while let Some(frame) = stack.last_mut() {
        if chosen.len() == m {
            return Ok(Some(chosen));
        }
        let need = m - chosen.len();
        let i = frame.next;
        if i + need > pool.len() {
            stack.pop();
            if chosen.pop().is_some() && chosen.len() < t {
                reference = None;
            }
            continue;
        }
        frame.next += 1;
        let x = pool[i];
        chosen.push(x);
        let mut ok = true;
        let mut reference_set = false;
        if chosen.len() >= t {
            for rest in subsets(&chosen[..chosen.len() - 1], t - 1) {
                let mut s = rest;
                s.push(x);
                let c = eval(&s, &mut spent)?;
                match &reference {
                    None => {
                        reference = Some(c);
                        reference_set = true;
                    }
                    Some(r) if *r != c => {
                        ok = false;
                        break;
                    }
                    Some(_) => {}
                }
            }
        }
        if ok {
            stack.push(Frame { next: i + 1 });
        } else {
            chosen.pop();
            if reference_set {
                reference = None;
            }
        }
    }
    Ok(None)
}

/// All `k`-subsets of `xs`, each in the order of `xs`.
pub fn subsets(xs: &[u64], k: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(xs: &[u64], k: usize, start: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..xs.len() {
            if xs.len() - i < k - cur.len() {
                break;
            }
            cur.push(xs[i]);
            go(xs, k, i + 1, cur, out);
            cur.pop();
        }
    }
    go(xs, k, 0, &mut cur, &mut out);
    out
}

/// Whether every `t`-subset of `j` gets the same colour.
pub fn is_monochromatic<C: Eq, F: FnMut(&[u64]) -> Result<C, RamseyError>>(j: &[u64], t: usize, mut colorer: F) -> Result<bool, RamseyError> {
    let mut first: Option<C> = None;
    for s in subsets(j, t) {
        let c = colorer(&s)?;
        match &first {
            None => first = Some(c),
            Some(f) if *f != c => return Ok(false),
            _ => {}
        }
    }
    Ok(true)
}

/// The seam edge `u -> v` labelled `label` of the base graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seam {
    pub u: usize,
    pub v: usize,
    pub label: String,
}

#[derive(Debug, Clone)]
pub struct IdLift {
    pub covering: Covering,
    /// Identifier of every lift vertex (also stored as its vertex id).
    pub ids: Vec<u64>,
}

/// Disjoint copies of `base`, copy `i` identified by the order injection of
/// `base_ranks` into `subsets[i]`, optionally reconnected along `seam`.
/// Identifiers must lie in `1..=n^2` for the lift size `n`.
pub fn build_id_lift(base: &LDigraph, base_ranks: &[usize], subsets: &[Vec<u64>], seam: Option<&Seam>) -> Result<IdLift, RamseyError> {
    let nb = base.vertex_count();
    if base_ranks.len() != nb {
        return Err(RamseyError::Invalid(format!("expected {nb} ranks, got {}", base_ranks.len())));
    }
    let n = subsets.len() * nb;
    let max = (n as u128) * (n as u128);
    let mut seen = HashSet::new();
    let mut ids = Vec::with_capacity(n);
    for s in subsets {
        if s.len() < nb {
            return Err(RamseyError::SizeViolation { from: nb, to: s.len() });
        }
        for &id in s {
            if !seen.insert(id) {
                return Err(RamseyError::Overlap(id));
            }
        }
        let mut sorted = s.clone();
        sorted.sort_unstable();
        for b in 0..nb {
            let id = sorted[base_ranks[b]];
            if id == 0 || id as u128 > max {
                return Err(RamseyError::IdRange { id, max });
            }
            ids.push(id);
        }
    }
    let lift = DisjointLift::with_ids(base, subsets.len(), ids.clone())?;
    let covering = match seam {
        Some(s) => connect_seam(&lift, base, s.u, s.v, &s.label)?,
        None => lift.covering,
    };
    Ok(IdLift { covering, ids })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::directed_cycle;
    use crate::graph::verify_covering;
    use crate::localsim::{builtin, builtin_with_radius, complete_tree};

    #[test]
    fn injections() {
        let f = order_injection(&[5, 2], &[30, 10, 20]).unwrap();
        assert_eq!(f, HashMap::from([(2, 10), (5, 20)]));
        let id = order_injection(&[3, 1, 2], &[1, 2, 3]).unwrap();
        assert!(id.iter().all(|(a, b)| a == b));
        assert!(order_injection(&[1, 2], &[1]).is_err());
    }

    #[test]
    fn subtree_counts() {
        let t = complete_tree(&["a"], 1).shape;
        assert_eq!(realizable_subtrees(&t, 2, 100).unwrap().len(), 4);
        assert_eq!(realizable_subtrees(&t, 1, 100).unwrap().len(), 3);
        assert_eq!(realizable_subtrees(&t, 0, 100).unwrap().len(), 1);
        let t = complete_tree(&["a", "b"], 1).shape;
        assert_eq!(realizable_subtrees(&t, 4, 100).unwrap().len(), 16);
        assert_eq!(realizable_subtrees(&t, 2, 100).unwrap().len(), 11);
        assert!(realizable_subtrees(&t, 4, 10).is_err());
        let t = complete_tree(&["a"], 2).shape;
        assert_eq!(realizable_subtrees(&t, 2, 100).unwrap().len(), 9);
    }

    fn bfs_colorer(name: &str) -> Colorer {
        let tree = complete_tree(&["a"], 1).shape;
        let ranks = vec![1, 2, 0];
        Colorer::new(tree, ranks, 2, builtin(name).unwrap()).unwrap()
    }

    #[test]
    fn order_invariant_colouring_is_constant() {
        let c = bfs_colorer("id-min");
        assert_eq!(c.t(), 3);
        let first = c.color(&[1, 2, 3]).unwrap();
        for a in subsets(&[1, 4, 5, 8, 9], 3) {
            assert_eq!(c.color(&a).unwrap(), first);
        }
        let j = find_monochromatic(&(1..=9).collect::<Vec<_>>(), 3, 5, |s| c.color(s), 1000).unwrap();
        assert_eq!(j, Some(vec![1, 2, 3, 4, 5]));
    }

    #[test]
    fn parity_colouring_differs() {
        let c = bfs_colorer("id-parity");
        assert_ne!(c.color(&[1, 2, 3]).unwrap(), c.color(&[2, 3, 4]).unwrap());
        assert_ne!(c.color(&[1, 2, 3]).unwrap().hash(), c.color(&[2, 3, 4]).unwrap().hash());
        let r0 = builtin_with_radius("id-parity", 0).unwrap();
        let one = Colorer::new(complete_tree(&["a"], 0).shape, vec![0], 2, r0).unwrap();
        assert_eq!(one.color(&[7]).unwrap().0.len(), 1);
        assert!(c.color(&[1, 2]).is_err());
    }

    #[test]
    fn parity_of_minimum() {
        let pool: Vec<u64> = (1..=10).collect();
        let colour = |s: &[u64]| Ok::<_, RamseyError>(s.iter().min().unwrap() % 2);
        let j = find_monochromatic(&pool, 2, 3, colour, 10_000).unwrap().unwrap();
        assert!(is_monochromatic(&j, 2, colour).unwrap());
        assert_eq!(j, vec![1, 3, 4]);
        let j = find_monochromatic(&pool, 1, 4, colour, 10_000).unwrap().unwrap();
        assert!(is_monochromatic(&j, 1, colour).unwrap());
        assert!(matches!(find_monochromatic(&pool, 2, 3, colour, 1), Err(RamseyError::BudgetExceeded(1))));
    }

    #[test]
    fn not_found_is_not_an_error() {
        let pool: Vec<u64> = (1..=5).collect();
        let colour = |s: &[u64]| Ok::<_, RamseyError>(s.iter().sum::<u64>());
        assert_eq!(find_monochromatic(&pool, 2, 3, colour, 10_000).unwrap(), None);
    }

    #[test]
    fn id_lifts() {
        let base = directed_cycle(3, "a");
        let ranks = [0, 1, 2];
        let one = build_id_lift(&base, &ranks, &[vec![9, 4, 6]], None).unwrap();
        assert_eq!(one.ids, [4, 6, 9]);
        assert_eq!(one.covering.graph.edge_count(), 3);

        let subsets = vec![vec![1, 2, 3], vec![10, 20, 30], vec![40, 50, 81]];
        let seam = Seam { u: 2, v: 0, label: "a".into() };
        let lift = build_id_lift(&base, &ranks, &subsets, Some(&seam)).unwrap();
        assert_eq!(lift.covering.graph.vertex_count(), 9);
        assert!(lift.covering.graph.is_connected());
        assert!(verify_covering(&lift.covering.graph, &base, &lift.covering.to_base).ok);
        assert_eq!(lift.covering.graph.ids(), &lift.ids[..]);

        let overlap = vec![vec![1, 2, 3], vec![3, 4, 5]];
        assert_eq!(build_id_lift(&base, &ranks, &overlap, None).unwrap_err(), RamseyError::Overlap(3));
        let big = vec![vec![1, 2, 3], vec![4, 5, 37]];
        assert!(matches!(build_id_lift(&base, &ranks, &big, None), Err(RamseyError::IdRange { id: 37, .. })));
        assert!(build_id_lift(&base, &ranks, &[vec![1, 2]], None).is_err());
    }
}
